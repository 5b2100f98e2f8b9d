#ifndef HYPERBIN_OPTIMIZER_HPP
#define HYPERBIN_OPTIMIZER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "hyperbin/classmodel.hpp"
#include "hyperbin/geometry.hpp"
#include "hyperbin/infometric.hpp"

namespace hyperbin {

// How class counts n_k enter the objective: the model's own counts, uniform
// N/M, or counts proportional to the current p_k.
enum class CountMode { Given, Symmetric, Asymmetric };

struct SearchConfig {
  int restarts = 16;
  int max_iterations = 200;
  double step_shrink = 0.5;
  double initial_step = 0.5;  // radians; offset coordinate uses twice this
  double convergence_tol = 1e-6;
  std::uint64_t seed = 0;
  std::size_t mc_samples = 100000;  // pool size for multi-hyperplane scoring
};

struct OptimizationResult {
  Arrangement arrangement;
  double objective = 0.0;
  std::vector<double> trace;
  bool gp_ok = true;
  bool dimension_budget_ok = true;  // (n+1) J <= r(n, J), informational

  const Hyperplane& hyperplane() const { return arrangement[0]; }
};

// Split score of one hyperplane: project every class, take the right-tail
// probabilities p_k, and evaluate I = h(sum w_k p_k) - sum w_k h(p_k).
inline double evaluate_hyperplane(const ClassModel& model, const Hyperplane& h, CountMode mode) {
  if (h.dimension() != model.dimension())
    throw std::invalid_argument("evaluate_hyperplane: dimension mismatch");
  const std::size_t m = model.class_count();
  std::vector<double> p(m), w(m);
  for (std::size_t k = 0; k < m; ++k) {
    const ProjectedClass pc = project_class(model, k, h);
    p[k] = right_tail_prob(pc.mean, pc.sigma, h.offset());
  }
  switch (mode) {
    case CountMode::Given:
      for (std::size_t k = 0; k < m; ++k) w[k] = model.weight(k);
      break;
    case CountMode::Symmetric:
      for (std::size_t k = 0; k < m; ++k) w[k] = 1.0 / static_cast<double>(m);
      break;
    case CountMode::Asymmetric: {
      double sum = 0.0;
      for (double v : p) sum += v;
      if (sum <= 0.0) sum = 1.0;
      for (std::size_t k = 0; k < m; ++k) w[k] = p[k] / sum;
      break;
    }
  }
  double right = 0.0, avg = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    right += w[k] * p[k];
    avg += w[k] * binary_entropy(p[k]);
  }
  return binary_entropy(right) - avg;
}

namespace detail {

// Spherical-coordinate chart of the unit sphere; n-1 angles for R^n.
inline Vector angles_to_unit(const std::vector<double>& angles, int n) {
  Vector a(n);
  double running = 1.0;
  for (int i = 0; i < n - 1; ++i) {
    a[i] = running * std::cos(angles[static_cast<std::size_t>(i)]);
    running *= std::sin(angles[static_cast<std::size_t>(i)]);
  }
  a[n - 1] = running;
  return a;
}

// Offset bracket: projected class means plus/minus four projected sigmas.
inline std::pair<double, double> offset_bracket(const ClassModel& model, const Vector& a) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  const double sigma = std::sqrt(a.dot(model.covariance() * a));
  for (std::size_t k = 0; k < model.class_count(); ++k) {
    const double m = model.mean(k).dot(a);
    lo = std::min(lo, m - 4.0 * sigma);
    hi = std::max(hi, m + 4.0 * sigma);
  }
  return {lo, hi};
}

// Coordinate-wise direct search with geometric step shrinking, maximizing
// score(params). Angle coordinates share one step, the last coordinate (the
// offset) uses twice the step scaled by `offset_scale`. Deterministic: fixed
// scan order, strict improvement only.
template <typename Score>
inline std::vector<double> direct_search(std::vector<double> params, double offset_scale,
                                         const SearchConfig& cfg, const Score& score,
                                         std::vector<double>* trace) {
  double best = score(params);
  if (trace) trace->push_back(best);
  double step = cfg.initial_step;
  for (int iter = 0; iter < cfg.max_iterations; ++iter) {
    bool improved = false;
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double delta = (i + 1 == params.size()) ? 2.0 * step * offset_scale : step;
      for (double sign : {1.0, -1.0}) {
        std::vector<double> cand = params;
        cand[i] += sign * delta;
        const double v = score(cand);
        if (v > best) {
          best = v;
          params = std::move(cand);
          improved = true;
        }
      }
    }
    if (trace) trace->push_back(best);
    if (!improved) {
      step *= cfg.step_shrink;
      if (step < cfg.convergence_tol) break;
    }
  }
  return params;
}

// Flip (a, b) -> (-a, -b) so the first nonzero normal coordinate is
// positive; the split itself is unchanged.
inline Hyperplane canonical(const Vector& a, double b) {
  for (int i = 0; i < a.size(); ++i) {
    if (a[i] != 0.0) return a[i] > 0.0 ? Hyperplane(a, b) : Hyperplane(-a, -b);
  }
  return Hyperplane(a, b);
}

}  // namespace detail

// Single-hyperplane placement by random-restart direct search over the
// sphere angles and the offset.
inline OptimizationResult optimize_hyperplane(const ClassModel& model, const SearchConfig& cfg,
                                              CountMode mode = CountMode::Given) {
  const int n = model.dimension();
  const auto score = [&](const std::vector<double>& params) {
    const Vector a = detail::angles_to_unit(params, n);
    return evaluate_hyperplane(model, Hyperplane(a, params.back()), mode);
  };

  double best_obj = -std::numeric_limits<double>::infinity();
  std::vector<double> best_params;
  std::vector<double> best_trace;
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng(mix64(cfg.seed) + static_cast<std::uint64_t>(r));
    std::vector<double> params(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n - 1; ++i) params[static_cast<std::size_t>(i)] = rng.uniform(0.0, 2.0 * M_PI);
    const Vector a0 = detail::angles_to_unit(params, n);
    const auto [blo, bhi] = detail::offset_bracket(model, a0);
    params.back() = rng.uniform(blo, bhi);
    const double scale = std::max(1.0, 0.25 * (bhi - blo) / 4.0);

    std::vector<double> trace;
    params = detail::direct_search(std::move(params), scale, cfg, score, &trace);
    const double obj = score(params);
    if (obj > best_obj) {  // ties keep the lowest restart index
      best_obj = obj;
      best_params = params;
      best_trace = std::move(trace);
    }
  }

  OptimizationResult out{Arrangement(n), 0.0, std::move(best_trace), true, true};
  const Hyperplane h =
      detail::canonical(detail::angles_to_unit(best_params, n), best_params.back());
  out.arrangement.add(h);
  out.objective = evaluate_hyperplane(model, h, mode);
  out.gp_ok = is_general_position(out.arrangement);
  out.dimension_budget_ok =
      static_cast<std::uint64_t>(n + 1) <= region_count(n, 1);  // J = 1 budget
  return out;
}

namespace detail {

// Empirical mutual information between class labels and joint sign words
// over a fixed sample pool, in bits. Word indices must fit 20 bits (dense
// tally); the desk-scale arrangements are far below that.
class RefinementScore {
 public:
  RefinementScore(const ClassModel& model, std::size_t samples, std::uint64_t seed)
      : pool_(sample_features(model, samples, mix64(seed ^ 0x706f6f6cULL))),
        labels_(model.class_count()) {}

  const FeatureSample& pool() const { return pool_; }

  // MI of labels vs (existing words refined by one more hyperplane bit).
  double with_candidate(const std::vector<std::uint32_t>& words, std::uint32_t word_count,
                        const Hyperplane& cand) const {
    const std::size_t n = pool_.points.size();
    std::vector<double> joint(static_cast<std::size_t>(word_count) * 2 * labels_, 0.0);
    for (std::size_t t = 0; t < n; ++t) {
      const std::uint32_t w = words[t] | (cand.ge_side(pool_.points[t]) ? word_count : 0u);
      joint[w * labels_ + static_cast<std::size_t>(pool_.labels[t])] += 1.0;
    }
    return mi_from_counts(joint, static_cast<std::size_t>(word_count) * 2, n);
  }

  double plain(const std::vector<std::uint32_t>& words, std::uint32_t word_count) const {
    const std::size_t n = pool_.points.size();
    std::vector<double> joint(static_cast<std::size_t>(word_count) * labels_, 0.0);
    for (std::size_t t = 0; t < n; ++t)
      joint[words[t] * labels_ + static_cast<std::size_t>(pool_.labels[t])] += 1.0;
    return mi_from_counts(joint, word_count, n);
  }

 private:
  double mi_from_counts(const std::vector<double>& joint, std::size_t word_count,
                        std::size_t n) const {
    std::vector<double> pw(word_count, 0.0), pk(labels_, 0.0);
    double hwk = 0.0;
    for (std::size_t w = 0; w < word_count; ++w)
      for (std::size_t k = 0; k < labels_; ++k) {
        const double c = joint[w * labels_ + k];
        if (c == 0.0) continue;
        const double f = c / static_cast<double>(n);
        pw[w] += f;
        pk[k] += f;
        hwk -= f * std::log2(f);
      }
    double hw = 0.0, hk = 0.0;
    for (double f : pw)
      if (f > 0.0) hw -= f * std::log2(f);
    for (double f : pk)
      if (f > 0.0) hk -= f * std::log2(f);
    return hw + hk - hwk;
  }

  FeatureSample pool_;
  std::size_t labels_;
};

}  // namespace detail

// Greedy sequential arrangement design: hyperplane 1 is the analytic optimum;
// each later hyperplane maximizes the empirical label/sign-word mutual
// information of the refined partition over a pool seeded from cfg. Because
// every step refines the same empirical partition, the trace never decreases.
inline OptimizationResult optimize_arrangement(const ClassModel& model, int J,
                                               const SearchConfig& cfg,
                                               CountMode mode = CountMode::Given) {
  if (J < 1) throw std::invalid_argument("optimize_arrangement: J must be >= 1");
  if (J > 20) throw std::invalid_argument("optimize_arrangement: dense word tally supports J <= 20");
  const int n = model.dimension();

  OptimizationResult first = optimize_hyperplane(model, cfg, mode);
  first.dimension_budget_ok =
      static_cast<std::uint64_t>(n + 1) * static_cast<std::uint64_t>(J) <=
      region_count(n, J);
  if (J == 1) return first;

  detail::RefinementScore scorer(model, cfg.mc_samples, cfg.seed);
  Arrangement arr(n);
  arr.add(first.hyperplane());
  std::vector<std::uint32_t> words(scorer.pool().points.size(), 0);
  for (std::size_t t = 0; t < words.size(); ++t)
    words[t] = arr[0].ge_side(scorer.pool().points[t]) ? 1u : 0u;
  std::uint32_t word_count = 2;

  std::vector<double> trace;
  trace.push_back(scorer.plain(words, word_count));

  for (int j = 2; j <= J; ++j) {
    const auto score = [&](const std::vector<double>& params) {
      const Vector a = detail::angles_to_unit(params, n);
      return scorer.with_candidate(words, word_count, Hyperplane(a, params.back()));
    };
    double best_obj = -std::numeric_limits<double>::infinity();
    std::vector<double> best_params;
    for (int r = 0; r < cfg.restarts; ++r) {
      Rng rng(mix64(cfg.seed + static_cast<std::uint64_t>(j)) + static_cast<std::uint64_t>(r));
      std::vector<double> params(static_cast<std::size_t>(n), 0.0);
      for (int i = 0; i < n - 1; ++i)
        params[static_cast<std::size_t>(i)] = rng.uniform(0.0, 2.0 * M_PI);
      const Vector a0 = detail::angles_to_unit(params, n);
      const auto [blo, bhi] = detail::offset_bracket(model, a0);
      params.back() = rng.uniform(blo, bhi);
      const double scale = std::max(1.0, 0.25 * (bhi - blo) / 4.0);
      params = detail::direct_search(std::move(params), scale, cfg, score, nullptr);
      const double obj = score(params);
      if (obj > best_obj) {
        best_obj = obj;
        best_params = params;
      }
    }

    // Keep the arrangement in general position, nudging the new normal by
    // small seeded rotations if a minor degenerates.
    Hyperplane cand =
        detail::canonical(detail::angles_to_unit(best_params, n), best_params.back());
    Rng perturb_rng(mix64(cfg.seed ^ 0x67700000ULL) + static_cast<std::uint64_t>(j));
    int attempts = 0;
    for (;;) {
      Arrangement probe = arr;
      probe.add(cand);
      if (is_general_position(probe)) break;
      if (++attempts > 8)
        throw std::runtime_error("optimize_arrangement: could not restore general position after 8 perturbations");
      Vector dir(n);
      for (int i = 0; i < n; ++i) dir[i] = perturb_rng.gaussian();
      const Vector& a = cand.normal();
      dir -= a * a.dot(dir);  // tangent component only
      if (dir.norm() == 0.0) continue;
      const Vector rotated = (a + 1e-6 * dir.normalized()).normalized();
      cand = Hyperplane(rotated, cand.offset());
    }
    arr.add(cand);
    for (std::size_t t = 0; t < words.size(); ++t)
      if (cand.ge_side(scorer.pool().points[t])) words[t] |= word_count;
    word_count *= 2;
    trace.push_back(scorer.plain(words, word_count));
  }

  OptimizationResult out{std::move(arr), trace.back(), std::move(trace), true,
                         first.dimension_budget_ok};
  out.gp_ok = is_general_position(out.arrangement);
  return out;
}

// Re-evaluation entry point matching what optimize_arrangement reports:
// analytic split score for J = 1, pool-based refinement score otherwise
// (same pool derivation, so same seed and sample count reproduce it).
inline double evaluate_arrangement(const ClassModel& model, const Arrangement& arr,
                                   const SearchConfig& cfg, CountMode mode = CountMode::Given) {
  if (arr.empty()) throw std::invalid_argument("evaluate_arrangement: empty arrangement");
  if (arr.size() == 1) return evaluate_hyperplane(model, arr[0], mode);
  detail::RefinementScore scorer(model, cfg.mc_samples, cfg.seed);
  std::vector<std::uint32_t> words(scorer.pool().points.size(), 0);
  for (std::size_t t = 0; t < words.size(); ++t) {
    const SignWord w = sign_word(arr, scorer.pool().points[t]);
    words[t] = static_cast<std::uint32_t>(w.bits());
  }
  return scorer.plain(words, static_cast<std::uint32_t>(1ull << arr.size()));
}

}  // namespace hyperbin

#endif  // HYPERBIN_OPTIMIZER_HPP
