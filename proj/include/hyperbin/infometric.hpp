#ifndef HYPERBIN_INFOMETRIC_HPP
#define HYPERBIN_INFOMETRIC_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperbin/random.hpp"

namespace hyperbin {

// Binary entropy in bits, with the continuity convention 0 log 0 = 0.
inline double binary_entropy(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("binary_entropy: p outside [0,1]");
  if (p == 0.0 || p == 1.0) return 0.0;
  return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

inline double shannon_entropy(std::span<const double> dist) {
  double sum = 0.0;
  for (double p : dist) {
    if (!(p >= 0.0)) throw std::domain_error("shannon_entropy: negative mass");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9) throw std::domain_error("shannon_entropy: masses must sum to 1");
  double h = 0.0;
  for (double p : dist)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

inline double shannon_entropy(const std::vector<double>& dist) {
  return shannon_entropy(std::span<const double>(dist));
}

// Per-class right-side probabilities p_k with class counts n_k; p_right is
// the count-weighted mass (1/N) sum n_k p_k of the >= side.
struct PartitionProfile {
  std::vector<double> p;
  std::vector<double> counts;
  double total = 0.0;
  double p_right = 0.0;

  PartitionProfile(std::vector<double> probs, std::vector<double> class_counts)
      : p(std::move(probs)), counts(std::move(class_counts)) {
    if (p.empty() || p.size() != counts.size())
      throw std::invalid_argument("partition profile: need matching nonempty p and counts");
    total = 0.0;
    double right = 0.0;
    for (std::size_t k = 0; k < p.size(); ++k) {
      if (!(p[k] >= 0.0 && p[k] <= 1.0))
        throw std::invalid_argument("partition profile: p outside [0,1]");
      if (!(counts[k] > 0.0)) throw std::invalid_argument("partition profile: counts must be > 0");
      total += counts[k];
      right += counts[k] * p[k];
    }
    p_right = right / total;
  }

  static PartitionProfile uniform_counts(std::vector<double> probs) {
    std::vector<double> ones(probs.size(), 1.0);
    return PartitionProfile(std::move(probs), std::move(ones));
  }
};

// I(M) = h(p_right) - sum_k (n_k/N) h(p_k).
inline double partition_mi(const PartitionProfile& profile) {
  double avg = 0.0;
  for (std::size_t k = 0; k < profile.p.size(); ++k)
    avg += (profile.counts[k] / profile.total) * binary_entropy(profile.p[k]);
  return binary_entropy(profile.p_right) - avg;
}

namespace detail {
// I(M) under uniform counts: h(pbar) - hbar over the first m entries.
inline double uniform_mi_prefix(std::span<const double> p, std::size_t m) {
  double pbar = 0.0, hbar = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    pbar += p[k];
    hbar += binary_entropy(p[k]);
  }
  pbar /= static_cast<double>(m);
  hbar /= static_cast<double>(m);
  return binary_entropy(pbar) - hbar;
}
}  // namespace detail

// Running means over a probability sequence: pbar_M = (1/M) sum p_k and
// hbar_M = (1/M) sum h(p_k), maintained by the one-step recursions
// (M+1) pbar_{M+1} = M pbar_M + p_{M+1} (same shape for hbar).
struct SymmetricSequenceStats {
  double pbar = 0.0;
  double hbar = 0.0;
  std::size_t m = 0;

  void extend(double p_next) {
    const double mm = static_cast<double>(m);
    pbar = (mm * pbar + p_next) / (mm + 1.0);
    hbar = (mm * hbar + binary_entropy(p_next)) / (mm + 1.0);
    ++m;
  }

  // The p* <= 1/2 with h(p*) = hbar_M; pbar_M then lies in [p*, 1-p*].
  double pstar() const {
    double lo = 0.0, hi = 0.5;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (binary_entropy(mid) < hbar ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }
};

struct IncrementBounds {
  double lower = 0.0;
  double upper = 0.0;
  double actual = 0.0;
};

// Squeeze bounds on I(M+1) - I(M) for uniform counts, where the input lists
// the M current probabilities followed by the added p_{M+1}:
//   (hbar_M - h(pbar_M))/(M+1) <= dI <= (hbar_M - h(p_{M+1}))/(M+1).
// The lower bound is unconditional (concavity); the upper bound needs the
// ordering preconditions 1/2 < p_1 < ... < p_{M+1}.
inline IncrementBounds mi_increment_bounds(std::span<const double> p) {
  if (p.size() < 2) throw std::invalid_argument("mi_increment_bounds: need M+1 >= 2 probabilities");
  const std::size_t m = p.size() - 1;
  double pbar = 0.0, hbar = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    pbar += p[k];
    hbar += binary_entropy(p[k]);
  }
  pbar /= static_cast<double>(m);
  hbar /= static_cast<double>(m);
  IncrementBounds out;
  out.lower = (hbar - binary_entropy(pbar)) / static_cast<double>(m + 1);
  out.upper = (hbar - binary_entropy(p[m])) / static_cast<double>(m + 1);
  out.actual = detail::uniform_mi_prefix(p, m + 1) - detail::uniform_mi_prefix(p, m);
  return out;
}

inline IncrementBounds mi_increment_bounds(const std::vector<double>& p) {
  return mi_increment_bounds(std::span<const double>(p));
}

// Partial sums of I(M) under uniform counts along a probability sequence.
//
//   exact[T]  = I(1) + sum of the exact increments I(M+1)-I(M); telescopes
//               to the directly evaluated I(T+1) up to roundoff.
//   series[T] = I(1) + sum (hbar_M - h(p_{M+1}))/(M+1), the upper-bound
//               series; it omits the h(pbar) drift between steps, so it
//               tracks direct[T] only for constant sequences.
//   direct[T] = I(T+1) evaluated from scratch.
struct PartialSums {
  std::vector<double> exact;
  std::vector<double> series;
  std::vector<double> direct;
};

inline PartialSums mi_symmetric_partial_sums(const std::function<double(std::size_t)>& p_at,
                                             std::size_t terms) {
  if (terms == 0) throw std::invalid_argument("mi_symmetric_partial_sums: terms must be >= 1");
  std::vector<double> p(terms + 1);
  for (std::size_t k = 0; k < terms + 1; ++k) {
    p[k] = p_at(k + 1);
    if (!(p[k] > 0.0 && p[k] < 1.0))
      throw std::invalid_argument("mi_symmetric_partial_sums: generator must yield p in (0,1)");
  }
  PartialSums out;
  out.exact.reserve(terms);
  out.series.reserve(terms);
  out.direct.reserve(terms);
  double exact_sum = detail::uniform_mi_prefix(p, 1);  // I(1) = 0
  double series_sum = exact_sum;
  double prev_direct = exact_sum;
  double hbar = binary_entropy(p[0]);
  for (std::size_t m = 1; m <= terms; ++m) {
    const double direct = detail::uniform_mi_prefix(p, m + 1);
    exact_sum += direct - prev_direct;
    series_sum += (hbar - binary_entropy(p[m])) / static_cast<double>(m + 1);
    hbar = (static_cast<double>(m) * hbar + binary_entropy(p[m])) / static_cast<double>(m + 1);
    prev_direct = direct;
    out.exact.push_back(exact_sum);
    out.series.push_back(series_sum);
    out.direct.push_back(direct);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Proposition audit.
//
// The audit evaluates randomized instances and REPORTS violation counts; the
// claims are split between assertable facts (the concavity lower bound, the
// precondition-guarded upper bound, the telescoping identity) and audited
// statements whose printed derivations have gaps (the proportional-counts
// monotonicity, the upper-bound series as an equality). Tests assert only
// the former; the latter are recorded with whatever counts come out.
// ---------------------------------------------------------------------------

struct AuditRow {
  std::string proposition;
  int trial = 0;
  int m = 0;
  double lower = 0.0;
  double actual = 0.0;
  double upper = 0.0;
  bool has_upper = true;
  bool violated = false;
};

struct AuditCounts {
  long checks = 0;
  long violations = 0;
  double worst_margin = 0.0;  // most negative slack seen
};

struct AuditReport {
  std::vector<AuditRow> rows;
  AuditCounts monotone_proportional;  // I(M+1) >= I(M) with n_k prop. to p_k
  AuditCounts lower_bound;            // unconditional concavity bound
  AuditCounts upper_bound;            // squeeze upper bound, preconditioned
  AuditCounts telescoping;            // exact partial sums vs direct I
};

struct AuditConfig {
  double p_lo = 0.5;
  double p_hi = 1.0;
  int max_classes = 12;  // instance length drawn in [2, max_classes]
  bool sorted = true;
  double tol = 1e-12;
};

namespace detail {
// I(M) with counts proportional to p_k, renormalized to fixed N.
inline double proportional_mi_prefix(std::span<const double> p, std::size_t m) {
  double sum = 0.0;
  for (std::size_t k = 0; k < m; ++k) sum += p[k];
  double right = 0.0, avg = 0.0;
  for (std::size_t k = 0; k < m; ++k) {
    const double w = p[k] / sum;
    right += w * p[k];
    avg += w * binary_entropy(p[k]);
  }
  return binary_entropy(right) - avg;
}

inline void record(AuditCounts& c, double slack, double tol, bool* violated) {
  ++c.checks;
  const bool bad = slack < -tol;
  if (bad) ++c.violations;
  if (slack < c.worst_margin) c.worst_margin = slack;
  if (violated) *violated = bad;
}
}  // namespace detail

inline AuditReport proposition_audit(const AuditConfig& cfg, int trials, std::uint64_t seed) {
  if (trials < 1) throw std::invalid_argument("proposition_audit: trials must be >= 1");
  AuditReport report;
  for (int trial = 0; trial < trials; ++trial) {
    Rng rng(seed + static_cast<std::uint64_t>(trial));  // per-trial stream
    const int len = 2 + static_cast<int>(rng.below(static_cast<std::uint64_t>(cfg.max_classes - 1)));
    std::vector<double> p(static_cast<std::size_t>(len));
    for (double& v : p) v = rng.uniform(cfg.p_lo, cfg.p_hi);
    if (cfg.sorted) std::sort(p.begin(), p.end());

    for (std::size_t m = 1; m + 1 <= p.size(); ++m) {
      // (a) proportional-counts monotonicity, audited not asserted.
      {
        const double before = detail::proportional_mi_prefix(p, m);
        const double after = detail::proportional_mi_prefix(p, m + 1);
        AuditRow row{"prop2", trial, static_cast<int>(m), before, after, 0.0, false, false};
        detail::record(report.monotone_proportional, after - before, cfg.tol, &row.violated);
        report.rows.push_back(std::move(row));
      }
      // (b) squeeze bounds for uniform counts.
      {
        const auto b = mi_increment_bounds(std::span<const double>(p.data(), m + 1));
        AuditRow row{"prop3", trial, static_cast<int>(m), b.lower, b.actual, b.upper, true, false};
        bool lower_bad = false;
        detail::record(report.lower_bound, b.actual - b.lower, cfg.tol, &lower_bad);
        const bool ordered = std::is_sorted(p.begin(), p.begin() + static_cast<long>(m + 1)) &&
                             p[0] > 0.5;
        bool upper_bad = false;
        if (ordered) detail::record(report.upper_bound, b.upper - b.actual, cfg.tol, &upper_bad);
        row.violated = lower_bad || upper_bad;
        report.rows.push_back(std::move(row));
      }
    }
    // (c) convergence bookkeeping: exact partial sums must telescope.
    {
      const std::size_t terms = p.size() - 1;
      const auto sums = mi_symmetric_partial_sums([&p](std::size_t k) { return p[k - 1]; }, terms);
      const double resid = std::abs(sums.exact.back() - sums.direct.back());
      AuditRow row{"prop4", trial, static_cast<int>(terms), 0.0, resid, 1e-10, true, false};
      detail::record(report.telescoping, 1e-10 - resid, 0.0, &row.violated);
      report.rows.push_back(std::move(row));
    }
  }
  return report;
}

inline void write_audit_csv(const AuditReport& report, std::ostream& out) {
  out << "proposition,trial,M,lower,actual,upper,violated\n";
  char buf[128];
  for (const AuditRow& row : report.rows) {
    if (row.has_upper)
      std::snprintf(buf, sizeof buf, "%s,%d,%d,%.17g,%.17g,%.17g,%d", row.proposition.c_str(),
                    row.trial, row.m, row.lower, row.actual, row.upper, row.violated ? 1 : 0);
    else
      std::snprintf(buf, sizeof buf, "%s,%d,%d,%.17g,%.17g,,%d", row.proposition.c_str(), row.trial,
                    row.m, row.lower, row.actual, row.violated ? 1 : 0);
    out << buf << '\n';
  }
}

}  // namespace hyperbin

#endif  // HYPERBIN_INFOMETRIC_HPP
