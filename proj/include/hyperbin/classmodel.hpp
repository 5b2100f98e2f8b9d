#ifndef HYPERBIN_CLASSMODEL_HPP
#define HYPERBIN_CLASSMODEL_HPP

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "hyperbin/geometry.hpp"
#include "hyperbin/random.hpp"

namespace hyperbin {

// Gaussian mixture of M feature classes sharing one covariance: class k has
// mean mu_k, covariance Sigma, and a (real-valued) count n_k out of N total.
class ClassModel {
 public:
  ClassModel(std::vector<Vector> means, Matrix covariance, std::vector<double> counts)
      : means_(std::move(means)), cov_(std::move(covariance)), counts_(std::move(counts)) {
    if (means_.empty()) throw std::invalid_argument("class model: need at least one class");
    if (means_.size() != counts_.size())
      throw std::invalid_argument("class model: means/counts size mismatch");
    dim_ = static_cast<int>(means_[0].size());
    if (dim_ < 1) throw std::invalid_argument("class model: dimension must be >= 1");
    for (const Vector& mu : means_)
      if (mu.size() != dim_) throw std::invalid_argument("class model: mean dimension mismatch");
    if (cov_.rows() != dim_ || cov_.cols() != dim_)
      throw std::invalid_argument("class model: covariance shape mismatch");
    if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw std::invalid_argument("class model: covariance must be symmetric");
    Eigen::SelfAdjointEigenSolver<Matrix> eig(cov_);
    if (eig.eigenvalues().minCoeff() <= 0.0)
      throw std::invalid_argument("class model: covariance must be positive definite");
    total_ = 0.0;
    for (double c : counts_) {
      if (!(c > 0.0)) throw std::invalid_argument("class model: counts must be > 0");
      total_ += c;
    }
    chol_ = Eigen::LLT<Matrix>(cov_).matrixL();
  }

  int dimension() const { return dim_; }
  std::size_t class_count() const { return means_.size(); }
  const Vector& mean(std::size_t k) const { return means_.at(k); }
  const Matrix& covariance() const { return cov_; }
  const std::vector<double>& counts() const { return counts_; }
  double total() const { return total_; }
  double weight(std::size_t k) const { return counts_.at(k) / total_; }
  const Matrix& cholesky_factor() const { return chol_; }

 private:
  std::vector<Vector> means_;
  Matrix cov_;
  std::vector<double> counts_;
  double total_ = 0.0;
  int dim_ = 0;
  Matrix chol_;
};

// 1-D image of a class under projection onto a hyperplane normal:
// m = mu.a, sigma^2 = a' Sigma a.
struct ProjectedClass {
  double mean = 0.0;
  double sigma = 1.0;
};

inline ProjectedClass project_class(const ClassModel& model, std::size_t k, const Hyperplane& h) {
  if (k >= model.class_count()) throw std::out_of_range("project_class: class index");
  if (h.dimension() != model.dimension())
    throw std::invalid_argument("project_class: dimension mismatch");
  const Vector& a = h.normal();
  ProjectedClass out;
  out.mean = model.mean(k).dot(a);
  out.sigma = std::sqrt(a.dot(model.covariance() * a));
  return out;
}

// Standard Gaussian right tail Q(z) = erfc(z / sqrt 2) / 2.
inline double q_function(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

// p = Q(|b - m| / sigma), the printed absolute-value form; never above 1/2.
inline double side_prob(const ProjectedClass& pc, double b) {
  if (!(pc.sigma > 0.0)) throw std::invalid_argument("side_prob: sigma must be > 0");
  return q_function(std::abs(b - pc.mean) / pc.sigma);
}

// Right-tail variant P(a.x >= b) = Q((b - m) / sigma); exceeds 1/2 when the
// class mean lies past the threshold. Downstream orderings that assume
// p_k > 1/2 use this form.
inline double right_tail_prob(double mean, double sigma, double b) {
  if (!(sigma > 0.0)) throw std::invalid_argument("right_tail_prob: sigma must be > 0");
  return q_function((b - mean) / sigma);
}

// Per-hyperplane right-side probabilities q_j plus, for each bin, the set
// S_k of hyperplanes whose >= side contains the bin (as a bitmask).
struct SideProfile {
  std::vector<double> q;
  std::vector<std::uint64_t> membership;

  SideProfile(std::vector<double> side_probs, std::vector<std::uint64_t> side_masks)
      : q(std::move(side_probs)), membership(std::move(side_masks)) {
    if (q.size() > 64) throw std::invalid_argument("side profile: at most 64 hyperplanes");
    for (double v : q)
      if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("side profile: q outside [0,1]");
  }
};

// Independence product p_k = prod_{j in S_k} q_j * prod_{j not in S_k} (1-q_j).
// Exact only when the projections are uncorrelated; callers wanting the true
// joint probability use Monte Carlo.
inline double bin_prob_product(const SideProfile& profile, std::size_t k) {
  const std::uint64_t mask = profile.membership.at(k);
  double p = 1.0;
  for (std::size_t j = 0; j < profile.q.size(); ++j)
    p *= ((mask >> j) & 1u) ? profile.q[j] : 1.0 - profile.q[j];
  return p;
}

struct FeatureSample {
  std::vector<Vector> points;
  std::vector<int> labels;
  std::vector<long> label_counts;
};

// Draw labeled features: label k with probability n_k/N, then x = mu_k + L z
// with z standard normal from the seeded stream (L the Cholesky factor).
inline FeatureSample sample_features(const ClassModel& model, std::size_t count,
                                     std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("sample_features: count must be >= 1");
  FeatureSample out;
  out.points.reserve(count);
  out.labels.reserve(count);
  out.label_counts.assign(model.class_count(), 0);
  Rng rng(seed);
  const int n = model.dimension();
  Vector z(n);
  for (std::size_t t = 0; t < count; ++t) {
    const double u = rng.uniform();
    double acc = 0.0;
    int label = static_cast<int>(model.class_count()) - 1;
    for (std::size_t k = 0; k < model.class_count(); ++k) {
      acc += model.weight(k);
      if (u < acc) {
        label = static_cast<int>(k);
        break;
      }
    }
    for (int i = 0; i < n; ++i) z[i] = rng.gaussian();
    out.points.push_back(model.mean(static_cast<std::size_t>(label)) +
                         model.cholesky_factor() * z);
    out.labels.push_back(label);
    ++out.label_counts[static_cast<std::size_t>(label)];
  }
  return out;
}

// Monte Carlo counterpart of the analytic side probabilities (tie rule: >=).
inline double empirical_side_fraction(const std::vector<Vector>& points, const Hyperplane& h) {
  if (points.empty()) throw std::invalid_argument("empirical_side_fraction: empty point list");
  std::size_t hits = 0;
  for (const Vector& x : points)
    if (h.ge_side(x)) ++hits;
  return static_cast<double>(hits) / static_cast<double>(points.size());
}

}  // namespace hyperbin

#endif  // HYPERBIN_CLASSMODEL_HPP
