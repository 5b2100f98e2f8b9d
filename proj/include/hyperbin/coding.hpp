#ifndef HYPERBIN_CODING_HPP
#define HYPERBIN_CODING_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "hyperbin/classmodel.hpp"
#include "hyperbin/geometry.hpp"
#include "hyperbin/infometric.hpp"
#include "hyperbin/optimizer.hpp"
#include "hyperbin/random.hpp"

namespace hyperbin {

// Discrete two-source function: value and joint pmf for every symbol pair.
class FunctionTable {
 public:
  FunctionTable(int n1, int n2, std::vector<double> values, std::vector<double> pmf)
      : n1_(n1), n2_(n2), values_(std::move(values)), pmf_(std::move(pmf)) {
    if (n1_ < 1 || n2_ < 1) throw std::invalid_argument("function table: empty alphabet");
    const std::size_t cells = static_cast<std::size_t>(n1_) * static_cast<std::size_t>(n2_);
    if (values_.size() != cells || pmf_.size() != cells)
      throw std::invalid_argument("function table: values/pmf size mismatch");
    double sum = 0.0;
    for (double p : pmf_) {
      if (!(p >= 0.0)) throw std::invalid_argument("function table: negative pmf");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("function table: pmf must sum to 1");
  }

  static FunctionTable uniform(int n1, int n2, const std::function<double(int, int)>& f) {
    const std::size_t cells = static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2);
    std::vector<double> values(cells), pmf(cells, 1.0 / static_cast<double>(cells));
    for (int x1 = 0; x1 < n1; ++x1)
      for (int x2 = 0; x2 < n2; ++x2) values[static_cast<std::size_t>(x1 * n2 + x2)] = f(x1, x2);
    return FunctionTable(n1, n2, std::move(values), std::move(pmf));
  }

  int size1() const { return n1_; }
  int size2() const { return n2_; }
  double value(int x1, int x2) const { return values_.at(index(x1, x2)); }
  double pmf(int x1, int x2) const { return pmf_.at(index(x1, x2)); }
  bool supported(int x1, int x2) const { return pmf(x1, x2) > 0.0; }
  const std::vector<double>& pmf_flat() const { return pmf_; }

  std::string to_text() const {
    std::string out = std::to_string(n1_) + " " + std::to_string(n2_) + "\n";
    for (int x1 = 0; x1 < n1_; ++x1)
      for (int x2 = 0; x2 < n2_; ++x2) {
        out += std::to_string(x1) + " " + std::to_string(x2) + " ";
        detail::append_g17(out, value(x1, x2));
        out += ' ';
        detail::append_g17(out, pmf(x1, x2));
        out += '\n';
      }
    return out;
  }

  static FunctionTable from_text(std::istream& in) {
    int n1 = 0, n2 = 0;
    if (!(in >> n1 >> n2)) throw std::invalid_argument("function table: malformed header");
    const std::size_t cells = static_cast<std::size_t>(n1) * static_cast<std::size_t>(n2);
    std::vector<double> values(cells, 0.0), pmf(cells, 0.0);
    std::vector<bool> seen(cells, false);
    int x1 = 0, x2 = 0;
    double v = 0.0, p = 0.0;
    while (in >> x1 >> x2 >> v >> p) {
      if (x1 < 0 || x1 >= n1 || x2 < 0 || x2 >= n2)
        throw std::invalid_argument("function table: symbol out of range");
      const std::size_t i = static_cast<std::size_t>(x1 * n2 + x2);
      values[i] = v;
      pmf[i] = p;
      seen[i] = true;
    }
    for (bool s : seen)
      if (!s) throw std::invalid_argument("function table: missing cell");
    return FunctionTable(n1, n2, std::move(values), std::move(pmf));
  }

 private:
  std::size_t index(int x1, int x2) const {
    if (x1 < 0 || x1 >= n1_ || x2 < 0 || x2 >= n2_)
      throw std::out_of_range("function table: symbol out of range");
    return static_cast<std::size_t>(x1 * n2_ + x2);
  }

  int n1_, n2_;
  std::vector<double> values_;
  std::vector<double> pmf_;
};

struct CodingReport {
  std::string scheme;
  std::vector<double> bits_per_source;
  double sum_rate = 0.0;
  double codebook_size = 0.0;
  double error_or_distortion = 0.0;
  long trials = 0;
};

inline void write_coding_report_header(std::ostream& out) {
  out << "scheme,R1,R2,sum_rate,codebook_size,error,trials\n";
}

inline void write_coding_report_row(const CodingReport& r, std::ostream& out) {
  char buf[256];
  const double r1 = r.bits_per_source.size() > 0 ? r.bits_per_source[0] : 0.0;
  const double r2 = r.bits_per_source.size() > 1 ? r.bits_per_source[1] : 0.0;
  std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%ld", r.scheme.c_str(), r1, r2,
                r.sum_rate, r.codebook_size, r.error_or_distortion, r.trials);
  out << buf << '\n';
}

// Slepian-Wolf admissibility: R1 >= H(X1|X2), R2 >= H(X2|X1), R1+R2 >= H(X1,X2).
inline bool sw_admissible(double r1, double r2, double h1_given_2, double h2_given_1, double h12) {
  if (r1 < 0.0 || r2 < 0.0) throw std::invalid_argument("sw_admissible: negative rate");
  constexpr double kTol = 1e-12;
  return r1 >= h1_given_2 - kTol && r2 >= h2_given_1 - kTol && r1 + r2 >= h12 - kTol;
}

// I = H(X1,X2) - H(labels) for a total labeling of the cells.
inline double partition_information(const FunctionTable& table, std::span<const int> labeling) {
  const std::size_t cells =
      static_cast<std::size_t>(table.size1()) * static_cast<std::size_t>(table.size2());
  if (labeling.size() != cells)
    throw std::invalid_argument("partition_information: labeling must cover every cell");
  int max_label = -1;
  for (int l : labeling) {
    if (l < 0) throw std::invalid_argument("partition_information: labeling must be total");
    max_label = std::max(max_label, l);
  }
  std::vector<double> masses(static_cast<std::size_t>(max_label) + 1, 0.0);
  for (std::size_t i = 0; i < cells; ++i) masses[static_cast<std::size_t>(labeling[i])] += table.pmf_flat()[i];
  return shannon_entropy(table.pmf_flat()) - shannon_entropy(masses);
}

inline double partition_information(const FunctionTable& table, const std::vector<int>& labeling) {
  return partition_information(table, std::span<const int>(labeling));
}

// Variant for partitions given directly by their masses (oblique partitions
// of a continuous embedding have no exact cell labeling).
inline double partition_information(double joint_entropy_bits, const std::vector<double>& masses) {
  return joint_entropy_bits - shannon_entropy(masses);
}

// |C|_HP = 2^(sum_j h(q_j)); at most 2^J, with equality iff every q_j = 1/2.
inline double hp_codebook_size(std::span<const double> q) {
  double exponent = 0.0;
  for (double v : q) exponent += binary_entropy(v);
  return std::exp2(exponent);
}

inline double hp_codebook_size(const std::vector<double>& q) {
  return hp_codebook_size(std::span<const double>(q));
}

// ---------------------------------------------------------------------------
// Random binning simulation (single source).
// ---------------------------------------------------------------------------

struct CoverResult {
  double error_rate = 0.0;
  double e1_rate = 0.0;  // source sequence not typical
  double e2_rate = 0.0;  // another typical sequence shares the bin
  long trials = 0;
};

namespace detail {

inline std::uint64_t sequence_hash(std::span<const int> seq, std::uint64_t seed) {
  std::uint64_t h = mix64(seed ^ 0x62696e73ULL);
  for (int s : seq) h = mix64(h + static_cast<std::uint64_t>(s) + 1);
  return h;
}

}  // namespace detail

// Cover-style random binning at blocklength n and rate R bits/symbol: every
// sequence is hashed to one of ~2^(nR) bins; the decoder succeeds iff the
// observed sequence is the unique weakly eps-typical member of its bin.
// Errors E1 (atypical source) and E2 (bin collision within the typical set)
// are counted separately. Enumeration of the typical set goes composition by
// composition, so memory stays proportional to the typical set itself.
inline CoverResult cover_binning_simulate(const std::vector<double>& pmf, int n, double rate,
                                          long trials, std::uint64_t seed, double epsilon = 0.1) {
  if (pmf.empty()) throw std::invalid_argument("cover sim: empty pmf");
  double sum = 0.0;
  for (double p : pmf) {
    if (!(p >= 0.0)) throw std::invalid_argument("cover sim: negative pmf");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::invalid_argument("cover sim: pmf must sum to 1");
  if (n < 1) throw std::invalid_argument("cover sim: blocklength must be >= 1");
  if (trials < 1) throw std::invalid_argument("cover sim: trials must be >= 1");
  if (!(rate > 0.0) || static_cast<double>(n) * rate > 30.0)
    throw std::invalid_argument("cover sim: need 0 < n*R <= 30");
  if (!(epsilon > 0.0)) throw std::invalid_argument("cover sim: epsilon must be > 0");

  const std::uint64_t bins =
      std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::llround(std::exp2(static_cast<double>(n) * rate))));

  // Support, entropy, per-symbol surprisal.
  std::vector<int> support;
  std::vector<double> surprisal(pmf.size(), 0.0);
  double entropy = 0.0;
  for (std::size_t a = 0; a < pmf.size(); ++a) {
    if (pmf[a] > 0.0) {
      support.push_back(static_cast<int>(a));
      surprisal[a] = -std::log2(pmf[a]);
      entropy += pmf[a] * surprisal[a];
    }
  }

  // Enumerate the typical set and tally bin occupancy. Typicality depends
  // only on the composition, so walk compositions of n over the support and
  // expand only the typical ones.
  std::unordered_map<std::uint64_t, std::uint32_t> bin_occupancy;
  std::size_t typical_total = 0;
  const std::size_t kEnumerationCap = 4'000'000;
  std::vector<int> counts(support.size(), 0);
  const std::function<void(std::size_t, int)> walk = [&](std::size_t pos, int remaining) {
    if (pos + 1 == support.size()) {
      counts[pos] = remaining;
      double s = 0.0;
      for (std::size_t i = 0; i < support.size(); ++i)
        s += static_cast<double>(counts[i]) * surprisal[static_cast<std::size_t>(support[i])];
      if (std::abs(s / static_cast<double>(n) - entropy) <= epsilon) {
        std::vector<int> seq;
        seq.reserve(static_cast<std::size_t>(n));
        for (std::size_t i = 0; i < support.size(); ++i)
          seq.insert(seq.end(), static_cast<std::size_t>(counts[i]), support[i]);
        std::sort(seq.begin(), seq.end());
        do {
          ++typical_total;
          if (typical_total > kEnumerationCap)
            throw std::invalid_argument("cover sim: typical set too large to enumerate");
          ++bin_occupancy[detail::sequence_hash(seq, seed) % bins];
        } while (std::next_permutation(seq.begin(), seq.end()));
      }
      return;
    }
    for (int c = 0; c <= remaining; ++c) {
      counts[pos] = c;
      walk(pos + 1, remaining - c);
    }
  };
  walk(0, n);

  // Cumulative pmf over the support for inverse-CDF draws.
  std::vector<double> cdf(support.size(), 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < support.size(); ++i) {
    acc += pmf[static_cast<std::size_t>(support[i])];
    cdf[i] = acc;
  }

  CoverResult out;
  out.trials = trials;
  long e1 = 0, e2 = 0, err = 0;
  Rng rng(mix64(seed ^ 0x747269616cULL));
  std::vector<int> seq(static_cast<std::size_t>(n), 0);
  for (long t = 0; t < trials; ++t) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      const double u = rng.uniform();
      std::size_t a = 0;
      while (a + 1 < cdf.size() && u >= cdf[a]) ++a;
      seq[static_cast<std::size_t>(i)] = support[a];
      s += surprisal[static_cast<std::size_t>(support[a])];
    }
    const bool typical = std::abs(s / static_cast<double>(n) - entropy) <= epsilon;
    const std::uint64_t bin = detail::sequence_hash(seq, seed) % bins;
    const auto it = bin_occupancy.find(bin);
    const std::uint32_t occupants = it == bin_occupancy.end() ? 0 : it->second;
    const bool event1 = !typical;
    const bool event2 = typical ? occupants >= 2 : occupants >= 1;
    if (event1) ++e1;
    if (event2) ++e2;
    if (event1 || event2) ++err;
  }
  out.e1_rate = static_cast<double>(e1) / static_cast<double>(trials);
  out.e2_rate = static_cast<double>(e2) / static_cast<double>(trials);
  out.error_rate = static_cast<double>(err) / static_cast<double>(trials);
  return out;
}

// ---------------------------------------------------------------------------
// Helper-carried common information and per-source encoding.
// ---------------------------------------------------------------------------

// Everything the destination and sources share before transmission: the
// arrangement, each source's hyperplane ordering (most informative first),
// and the region-pair lookup built from region centroids.
struct HelperPayload {
  Arrangement arrangement;
  std::vector<int> order1;  // transmission slot -> canonical hyperplane index
  std::vector<int> order2;
  std::map<std::pair<SignWord, SignWord>, double> lookup;
};

struct HelperBuildInfo {
  std::size_t observed_regions = 0;
  std::uint64_t expected_regions = 0;
  bool all_regions_seen = true;  // false: empty regions were left out
};

using PairFunction = std::function<double(const Vector&, const Vector&)>;

// Rank hyperplanes by their single-split score, most informative first,
// ties by canonical index.
inline std::vector<int> informativeness_order(const ClassModel& model, const Arrangement& arr) {
  std::vector<std::pair<double, int>> scored;
  for (std::size_t j = 0; j < arr.size(); ++j)
    scored.emplace_back(-evaluate_hyperplane(model, arr[j], CountMode::Given),
                        static_cast<int>(j));
  std::sort(scored.begin(), scored.end());
  std::vector<int> order;
  order.reserve(scored.size());
  for (const auto& [neg, j] : scored) order.push_back(j);
  return order;
}

inline HelperPayload build_helper(const Arrangement& arr, const ClassModel& model,
                                  const PairFunction& f, std::size_t samples, std::uint64_t seed,
                                  HelperBuildInfo* info = nullptr) {
  if (!arr.empty() && !is_general_position(arr))
    throw std::invalid_argument("build_helper: arrangement not in general position");
  HelperPayload payload{arr, {}, {}, {}};
  if (!arr.empty()) {
    payload.order1 = informativeness_order(model, arr);
    payload.order2 = payload.order1;  // both sources share the feature model
  }

  // Region centroids from a seeded sample of the feature model.
  const FeatureSample pool = sample_features(model, samples, mix64(seed ^ 0x68656c70ULL));
  std::map<SignWord, std::pair<Vector, std::size_t>> sums;
  for (const Vector& x : pool.points) {
    const SignWord w = sign_word(arr, x);
    auto it = sums.find(w);
    if (it == sums.end())
      sums.emplace(w, std::make_pair(x, std::size_t{1}));
    else {
      it->second.first += x;
      ++it->second.second;
    }
  }
  std::map<SignWord, Vector> centroids;
  for (const auto& [w, acc] : sums)
    centroids.emplace(w, acc.first / static_cast<double>(acc.second));

  for (const auto& [w1, c1] : centroids)
    for (const auto& [w2, c2] : centroids) payload.lookup.emplace(std::make_pair(w1, w2), f(c1, c2));

  if (info) {
    info->observed_regions = centroids.size();
    info->expected_regions = arr.empty() ? 1 : region_count(arr.dimension(), static_cast<int>(arr.size()));
    info->all_regions_seen = info->observed_regions == info->expected_regions;
  }
  return payload;
}

// Bit t of the transmitted word is the sign of hyperplane order[t] at x.
inline SignWord encode_source(const HelperPayload& payload, int source_index, const Vector& x) {
  if (source_index != 1 && source_index != 2)
    throw std::invalid_argument("encode_source: source index must be 1 or 2");
  if (x.size() != payload.arrangement.dimension())
    throw std::invalid_argument("encode_source: dimension mismatch");
  const std::vector<int>& order = source_index == 1 ? payload.order1 : payload.order2;
  std::uint64_t bits = 0;
  for (std::size_t t = 0; t < order.size(); ++t)
    if (payload.arrangement[static_cast<std::size_t>(order[t])].ge_side(x))
      bits |= std::uint64_t{1} << t;
  return SignWord(bits, static_cast<std::uint32_t>(order.size()));
}

struct DecodeResult {
  bool ok = false;      // false: region pair absent from the lookup (REJECT)
  double value = 0.0;
  SignWord region1;
  SignWord region2;
};

inline DecodeResult decode_joint(const HelperPayload& payload, const SignWord& bits1,
                                 const SignWord& bits2) {
  const std::size_t J = payload.arrangement.size();
  if (bits1.size() != J || bits2.size() != J)
    throw std::invalid_argument("decode_joint: bit string length mismatch");
  const auto unpermute = [&](const SignWord& w, const std::vector<int>& order) {
    std::uint64_t bits = 0;
    for (std::size_t t = 0; t < order.size(); ++t)
      if (w.bit(static_cast<std::uint32_t>(t)))
        bits |= std::uint64_t{1} << static_cast<std::uint32_t>(order[t]);
    return SignWord(bits, static_cast<std::uint32_t>(order.size()));
  };
  DecodeResult out;
  out.region1 = unpermute(bits1, payload.order1);
  out.region2 = unpermute(bits2, payload.order2);
  const auto it = payload.lookup.find(std::make_pair(out.region1, out.region2));
  if (it != payload.lookup.end()) {
    out.ok = true;
    out.value = it->second;
  }
  return out;
}

inline std::string helper_to_text(const HelperPayload& payload) {
  std::string out = arrangement_to_text(payload.arrangement);
  out += "pi1:";
  for (int j : payload.order1) out += ' ' + std::to_string(j + 1);
  out += "\npi2:";
  for (int j : payload.order2) out += ' ' + std::to_string(j + 1);
  out += '\n';
  for (const auto& [key, value] : payload.lookup) {
    out += key.first.to_string();
    out += ' ';
    out += key.second.to_string();
    out += ' ';
    detail::append_g17(out, value);
    out += '\n';
  }
  return out;
}

inline HelperPayload helper_from_text(std::istream& in) {
  HelperPayload payload{arrangement_from_text(in), {}, {}, {}};
  const std::size_t J = payload.arrangement.size();
  const auto read_order = [&](const std::string& tag) {
    std::string head;
    if (!(in >> head) || head != tag) throw std::invalid_argument("helper: expected " + tag);
    std::vector<int> order(J, 0);
    for (std::size_t t = 0; t < J; ++t) {
      if (!(in >> order[t]) || order[t] < 1 || order[t] > static_cast<int>(J))
        throw std::invalid_argument("helper: bad permutation entry");
      --order[t];
    }
    return order;
  };
  payload.order1 = read_order("pi1:");
  payload.order2 = read_order("pi2:");
  std::string w1, w2;
  double v = 0.0;
  while (in >> w1 >> w2 >> v)
    payload.lookup.emplace(std::make_pair(SignWord::from_string(w1), SignWord::from_string(w2)), v);
  return payload;
}

inline HelperPayload helper_from_text(const std::string& text) {
  std::istringstream in(text);
  return helper_from_text(in);
}

// ---------------------------------------------------------------------------
// Equivalence-class rate demo: f(x1, x2) = (x1 + x2) mod 2 on {0,1,2,3}^2,
// uniform. Each source announces only its class ({0,2} vs {1,3}), one bit,
// and the pair decodes f exactly.
// ---------------------------------------------------------------------------

struct XorDemo {
  std::vector<std::vector<int>> classes1;
  std::vector<std::vector<int>> classes2;
  bool zero_error = false;
  CodingReport report;
};

namespace detail {

// Group symbols of one source: x ~ x' iff f(x, y) = f(x', y) for all
// supported y.
inline std::vector<std::vector<int>> equivalence_classes(const FunctionTable& table, int source) {
  const int n = source == 1 ? table.size1() : table.size2();
  const int other = source == 1 ? table.size2() : table.size1();
  std::vector<std::vector<int>> classes;
  std::vector<int> assigned(static_cast<std::size_t>(n), -1);
  for (int x = 0; x < n; ++x) {
    bool placed = false;
    for (std::size_t c = 0; c < classes.size() && !placed; ++c) {
      const int rep = classes[c][0];
      bool same = true;
      for (int y = 0; y < other && same; ++y) {
        const double fx = source == 1 ? table.value(x, y) : table.value(y, x);
        const double fr = source == 1 ? table.value(rep, y) : table.value(y, rep);
        const bool sup_x = source == 1 ? table.supported(x, y) : table.supported(y, x);
        const bool sup_r = source == 1 ? table.supported(rep, y) : table.supported(y, rep);
        if (sup_x && sup_r && fx != fr) same = false;
      }
      if (same) {
        classes[c].push_back(x);
        assigned[static_cast<std::size_t>(x)] = static_cast<int>(c);
        placed = true;
      }
    }
    if (!placed) {
      classes.push_back({x});
      assigned[static_cast<std::size_t>(x)] = static_cast<int>(classes.size()) - 1;
    }
  }
  return classes;
}

}  // namespace detail

inline XorDemo xor_equivalence_demo() {
  const FunctionTable table =
      FunctionTable::uniform(4, 4, [](int x1, int x2) { return static_cast<double>((x1 + x2) % 2); });
  XorDemo demo;
  demo.classes1 = detail::equivalence_classes(table, 1);
  demo.classes2 = detail::equivalence_classes(table, 2);

  const auto class_of = [](const std::vector<std::vector<int>>& classes, int x) {
    for (std::size_t c = 0; c < classes.size(); ++c)
      for (int member : classes[c])
        if (member == x) return static_cast<int>(c);
    return -1;
  };

  // Zero-error decodability from the class pair, checked over all 16 pairs.
  std::map<std::pair<int, int>, double> decoded;
  demo.zero_error = true;
  for (int x1 = 0; x1 < 4; ++x1)
    for (int x2 = 0; x2 < 4; ++x2) {
      const std::pair<int, int> key{class_of(demo.classes1, x1), class_of(demo.classes2, x2)};
      const double v = table.value(x1, x2);
      const auto it = decoded.find(key);
      if (it == decoded.end())
        decoded.emplace(key, v);
      else if (it->second != v)
        demo.zero_error = false;
    }

  const double r1 = std::log2(static_cast<double>(demo.classes1.size()));
  const double r2 = std::log2(static_cast<double>(demo.classes2.size()));
  demo.report = CodingReport{"xor-equivalence", {r1, r2}, r1 + r2,
                             static_cast<double>(demo.classes1.size() * demo.classes2.size()),
                             demo.zero_error ? 0.0 : 1.0, 16};
  return demo;
}

}  // namespace hyperbin

#endif  // HYPERBIN_CODING_HPP
