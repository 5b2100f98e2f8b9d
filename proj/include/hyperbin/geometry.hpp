#ifndef HYPERBIN_GEOMETRY_HPP
#define HYPERBIN_GEOMETRY_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperbin/random.hpp"

namespace hyperbin {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Halfspace boundary {x : a.x = b} with a kept on the unit sphere.
class Hyperplane {
 public:
  Hyperplane(Vector normal, double offset) : normal_(std::move(normal)), offset_(offset) {
    if (normal_.size() < 1) throw std::invalid_argument("hyperplane: dimension must be >= 1");
    const double len = normal_.norm();
    if (!(len > 0.0) || !std::isfinite(len))
      throw std::invalid_argument("hyperplane: normal must be nonzero and finite");
    // Skip the division for already-unit normals so that parsing a
    // serialized arrangement reproduces it bit for bit.
    if (std::abs(len - 1.0) > 1e-12) {
      normal_ /= len;
      offset_ /= len;
    }
  }

  const Vector& normal() const { return normal_; }
  double offset() const { return offset_; }
  int dimension() const { return static_cast<int>(normal_.size()); }

  double signed_distance(const Vector& x) const {
    if (x.size() != normal_.size()) throw std::invalid_argument("hyperplane: dimension mismatch");
    return normal_.dot(x) - offset_;
  }

  // Tie rule: points exactly on the plane count as the >= side.
  bool ge_side(const Vector& x) const { return signed_distance(x) >= 0.0; }

 private:
  Vector normal_;
  double offset_;
};

// Region label: bit j set iff the point is on the >= side of hyperplane j.
class SignWord {
 public:
  SignWord() = default;
  SignWord(std::uint64_t bits, std::uint32_t length) : bits_(bits), length_(length) {
    if (length > 64) throw std::invalid_argument("sign word: at most 64 bits");
  }

  static SignWord from_string(const std::string& s) {
    if (s.size() > 64) throw std::invalid_argument("sign word: at most 64 bits");
    std::uint64_t bits = 0;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (s[j] == '1')
        bits |= std::uint64_t{1} << j;
      else if (s[j] != '0')
        throw std::invalid_argument("sign word: expected 0/1 string");
    }
    return SignWord(bits, static_cast<std::uint32_t>(s.size()));
  }

  bool bit(std::uint32_t j) const { return (bits_ >> j) & 1u; }
  std::uint32_t size() const { return length_; }
  std::uint64_t bits() const { return bits_; }

  std::string to_string() const {
    std::string s(length_, '0');
    for (std::uint32_t j = 0; j < length_; ++j)
      if (bit(j)) s[j] = '1';
    return s;
  }

  friend bool operator==(const SignWord& a, const SignWord& b) {
    return a.bits_ == b.bits_ && a.length_ == b.length_;
  }
  friend bool operator<(const SignWord& a, const SignWord& b) {
    if (a.length_ != b.length_) return a.length_ < b.length_;
    return a.bits_ < b.bits_;
  }

 private:
  std::uint64_t bits_ = 0;
  std::uint32_t length_ = 0;
};

// Ordered hyperplane set; index j is the hyperplane's identity downstream.
class Arrangement {
 public:
  explicit Arrangement(int dimension) : dimension_(dimension) {
    if (dimension < 1) throw std::invalid_argument("arrangement: dimension must be >= 1");
  }

  void add(Hyperplane h) {
    if (h.dimension() != dimension_)
      throw std::invalid_argument("arrangement: hyperplane dimension mismatch");
    if (planes_.size() == 64) throw std::invalid_argument("arrangement: at most 64 hyperplanes");
    planes_.push_back(std::move(h));
  }

  int dimension() const { return dimension_; }
  std::size_t size() const { return planes_.size(); }
  bool empty() const { return planes_.empty(); }
  const Hyperplane& operator[](std::size_t j) const { return planes_[j]; }
  const std::vector<Hyperplane>& hyperplanes() const { return planes_; }

 private:
  int dimension_;
  std::vector<Hyperplane> planes_;
};

// r(s,J) = sum_{k=0}^{min(s,J)} C(J,k), the region count of J hyperplanes in
// general position in s dimensions. Exact; throws instead of wrapping.
inline std::uint64_t region_count(int s, int J) {
  if (s < 1) throw std::invalid_argument("region_count: s must be >= 1");
  if (J < 0) throw std::invalid_argument("region_count: J must be >= 0");
  if (J > 64) throw std::overflow_error("region_count: J > 64 not representable");
  const int kmax = std::min(s, J);
  unsigned __int128 total = 0;
  unsigned __int128 binom = 1;  // C(J, 0)
  for (int k = 0; k <= kmax; ++k) {
    if (k > 0) {
      binom = binom * static_cast<unsigned>(J - k + 1);
      binom /= static_cast<unsigned>(k);
    }
    total += binom;
    if (total > std::numeric_limits<std::uint64_t>::max())
      throw std::overflow_error("region_count: result exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(total);
}

// Largest feature dimension n >= 1 with (n+1)J <= r(s,J); 0 if none.
inline std::uint64_t max_feature_dim(int J, int s) {
  if (J < 1) throw std::invalid_argument("max_feature_dim: J must be >= 1");
  const std::uint64_t r = region_count(s, J);
  const std::uint64_t n = r / static_cast<std::uint64_t>(J);
  return n >= 2 ? n - 1 : 0;
}

// General position: every subset of k normals (k <= min(J,n)) spans k
// dimensions, tested as det(V V^T) > tol on the unit-normal rows. The
// 1x1 case is then the row norm, so construction already guarantees it.
inline bool is_general_position(const Arrangement& arr, double tol = 1e-9) {
  if (arr.empty()) throw std::invalid_argument("is_general_position: empty arrangement");
  const int J = static_cast<int>(arr.size());
  const int n = arr.dimension();
  const int kmax = std::min(J, n);
  std::vector<int> idx;
  // Iterate subsets of each size via a simple combination walk.
  for (int k = 1; k <= kmax; ++k) {
    idx.assign(static_cast<std::size_t>(k), 0);
    for (int i = 0; i < k; ++i) idx[static_cast<std::size_t>(i)] = i;
    while (true) {
      Matrix v(k, n);
      for (int i = 0; i < k; ++i) v.row(i) = arr[static_cast<std::size_t>(idx[static_cast<std::size_t>(i)])].normal();
      const double gram = (v * v.transpose()).determinant();
      if (!(std::abs(gram) > tol)) return false;
      int pos = k - 1;
      while (pos >= 0 && idx[static_cast<std::size_t>(pos)] == J - k + pos) --pos;
      if (pos < 0) break;
      ++idx[static_cast<std::size_t>(pos)];
      for (int i = pos + 1; i < k; ++i)
        idx[static_cast<std::size_t>(i)] = idx[static_cast<std::size_t>(i - 1)] + 1;
    }
  }
  return true;
}

inline SignWord sign_word(const Arrangement& arr, const Vector& x) {
  if (x.size() != arr.dimension()) throw std::invalid_argument("sign_word: dimension mismatch");
  std::uint64_t bits = 0;
  for (std::size_t j = 0; j < arr.size(); ++j)
    if (arr[j].ge_side(x)) bits |= std::uint64_t{1} << j;
  return SignWord(bits, static_cast<std::uint32_t>(arr.size()));
}

// Euclidean projection onto the hyperplane: Px = x - a (a.a)^-1 (a.x - b).
inline Vector project_point(const Hyperplane& h, const Vector& x) {
  if (x.size() != h.normal().size()) throw std::invalid_argument("project_point: dimension mismatch");
  const Vector& a = h.normal();
  return x - a * ((a.dot(x) - h.offset()) / a.dot(a));
}

struct RegionSample {
  std::set<SignWord> words;
  bool gp_ok = true;
};

// Monte Carlo region enumeration: distinct sign words over uniform draws in
// [-halfwidth, halfwidth]^n. Precondition on the caller: the box covers all
// pairwise intersection points with margin, so every region meets the box.
inline RegionSample enumerate_regions(const Arrangement& arr, double box_halfwidth,
                                      std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw std::invalid_argument("enumerate_regions: samples must be >= 1");
  if (!(box_halfwidth > 0.0)) throw std::invalid_argument("enumerate_regions: box must be positive");
  RegionSample out;
  out.gp_ok = arr.empty() ? true : is_general_position(arr);
  Rng rng(seed);
  const int n = arr.dimension();
  Vector x(n);
  for (std::size_t t = 0; t < samples; ++t) {
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(-box_halfwidth, box_halfwidth);
    out.words.insert(sign_word(arr, x));
  }
  return out;
}

namespace detail {
inline void append_g17(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}
}  // namespace detail

// Text format carried as the common-information payload: line 1 is "n J",
// then one line per hyperplane with the n normal coordinates and the offset,
// 17 significant digits each. Re-serialization is byte-identical.
inline std::string arrangement_to_text(const Arrangement& arr) {
  std::string out;
  out += std::to_string(arr.dimension());
  out += ' ';
  out += std::to_string(arr.size());
  out += '\n';
  for (std::size_t j = 0; j < arr.size(); ++j) {
    const Hyperplane& h = arr[j];
    for (int i = 0; i < arr.dimension(); ++i) {
      detail::append_g17(out, h.normal()[i]);
      out += ' ';
    }
    detail::append_g17(out, h.offset());
    out += '\n';
  }
  return out;
}

inline Arrangement arrangement_from_text(std::istream& in) {
  int n = 0;
  long J = -1;
  if (!(in >> n >> J) || n < 1 || J < 0)
    throw std::invalid_argument("arrangement: malformed header");
  Arrangement arr(n);
  for (long j = 0; j < J; ++j) {
    Vector a(n);
    for (int i = 0; i < n; ++i)
      if (!(in >> a[i])) throw std::invalid_argument("arrangement: truncated normal");
    double b = 0.0;
    if (!(in >> b)) throw std::invalid_argument("arrangement: missing offset");
    arr.add(Hyperplane(a, b));
  }
  return arr;
}

inline Arrangement arrangement_from_text(const std::string& text) {
  std::istringstream in(text);
  return arrangement_from_text(in);
}

}  // namespace hyperbin

#endif  // HYPERBIN_GEOMETRY_HPP
