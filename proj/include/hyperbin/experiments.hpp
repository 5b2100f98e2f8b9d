#ifndef HYPERBIN_EXPERIMENTS_HPP
#define HYPERBIN_EXPERIMENTS_HPP

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "hyperbin/ccc.hpp"
#include "hyperbin/classmodel.hpp"
#include "hyperbin/coding.hpp"
#include "hyperbin/config.hpp"
#include "hyperbin/geometry.hpp"
#include "hyperbin/infometric.hpp"
#include "hyperbin/optimizer.hpp"

namespace hyperbin {

namespace detail {
inline std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace detail

// ---------------------------------------------------------------------------
// Dimension-budget table: n_max and r(s,J) per (s, J), with the per-source
// linear budget J/s of orthogonal binning for comparison.
// ---------------------------------------------------------------------------

inline std::string run_fig2(const std::vector<long>& s_list, long j_max) {
  if (j_max < 1) throw std::invalid_argument("fig2: J max must be >= 1");
  std::string csv = "s,J,n_max,r,n_linear\n";
  for (long s : s_list) {
    if (s < 1) throw std::invalid_argument("fig2: s must be >= 1");
    for (long j = 1; j <= j_max; ++j) {
      const std::uint64_t r = region_count(static_cast<int>(s), static_cast<int>(j));
      const std::uint64_t nmax = max_feature_dim(static_cast<int>(j), static_cast<int>(s));
      csv += std::to_string(s) + "," + std::to_string(j) + "," + std::to_string(nmax) + "," +
             std::to_string(r) + "," + detail::g17(static_cast<double>(j) / static_cast<double>(s)) +
             "\n";
    }
  }
  return csv;
}

// ---------------------------------------------------------------------------
// Information vs class count along a fixed mean grid.
//
// p_k = Q((b - m_k)/sigma) with b = 0 and m_k = mean_max * k / M, so the
// p_k are increasing and above 1/2 as the ordering arguments assume. The
// mean grid default (mean_max = 0.75) is a reconstruction chosen so the
// documented trends are visible; the asymmetric-vs-symmetric comparison is
// evaluated and any cells where it fails are counted, not suppressed.
// ---------------------------------------------------------------------------

struct Fig4Result {
  std::string csv;
  int asym_below_sym_cells = 0;
  double worst_gap = 0.0;  // most negative I_asym - I_sym over the grid
};

inline Fig4Result run_fig4(const std::vector<double>& sigma2_list, long m_max,
                           double mean_max = 0.75) {
  if (m_max < 2) throw std::invalid_argument("fig4: M max must be >= 2");
  if (!(mean_max > 0.0)) throw std::invalid_argument("fig4: mean_max must be > 0");
  Fig4Result out;
  out.csv = "mode,sigma2,M,I\n";
  for (const char* mode : {"asymmetric", "symmetric"}) {
    for (double s2 : sigma2_list) {
      if (!(s2 > 0.0)) throw std::invalid_argument("fig4: sigma2 must be > 0");
      const double sigma = std::sqrt(s2);
      for (long m = 2; m <= m_max; ++m) {
        std::vector<double> p(static_cast<std::size_t>(m));
        for (long k = 1; k <= m; ++k)
          p[static_cast<std::size_t>(k - 1)] =
              right_tail_prob(mean_max * static_cast<double>(k) / static_cast<double>(m), sigma, 0.0);
        double value = 0.0;
        if (std::string(mode) == "symmetric") {
          value = partition_mi(PartitionProfile::uniform_counts(p));
        } else {
          double sum = 0.0;
          for (double v : p) sum += v;
          std::vector<double> counts(p.size());
          for (std::size_t k = 0; k < p.size(); ++k) counts[k] = p[k] / sum;
          value = partition_mi(PartitionProfile(p, counts));
        }
        out.csv += std::string(mode) + "," + detail::g17(s2) + "," + std::to_string(m) + "," +
                   detail::g17(value) + "\n";
      }
    }
  }
  // Audit the "asymmetric is always higher" comparison cell by cell.
  for (double s2 : sigma2_list) {
    const double sigma = std::sqrt(s2);
    for (long m = 2; m <= m_max; ++m) {
      std::vector<double> p(static_cast<std::size_t>(m));
      for (long k = 1; k <= m; ++k)
        p[static_cast<std::size_t>(k - 1)] =
            right_tail_prob(mean_max * static_cast<double>(k) / static_cast<double>(m), sigma, 0.0);
      double sum = 0.0;
      for (double v : p) sum += v;
      std::vector<double> counts(p.size());
      for (std::size_t k = 0; k < p.size(); ++k) counts[k] = p[k] / sum;
      const double gap =
          partition_mi(PartitionProfile(p, counts)) - partition_mi(PartitionProfile::uniform_counts(p));
      if (gap < -1e-12) {
        ++out.asym_below_sym_cells;
        if (gap < out.worst_gap) out.worst_gap = gap;
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// The three-scheme contrast on the 16-outcome uniform source: identity
// binning, block binning with masses (3,9,2,2)/16, and the oblique
// two-hyperplane partition with masses (0.375, 0.531, 0.031, 0.063).
// ---------------------------------------------------------------------------

struct Example2Result {
  std::string csv;
  double joint_entropy = 0.0;
  double identity_information = 0.0;
  double block_entropy = 0.0;
  double block_information = 0.0;
  double hyper_entropy = 0.0;
  double hyper_information = 0.0;
};

inline Example2Result run_example2() {
  const FunctionTable table = FunctionTable::uniform(4, 4, [](int, int) { return 0.0; });
  Example2Result out;
  out.joint_entropy = shannon_entropy(table.pmf_flat());

  // Identity labeling: every outcome its own partition.
  std::vector<int> identity(16);
  for (int i = 0; i < 16; ++i) identity[static_cast<std::size_t>(i)] = i;
  out.identity_information = partition_information(table, identity);

  // Block labeling with masses 9/16, 3/16, 2/16, 2/16 laid out blockwise.
  std::vector<int> block(16, 0);
  for (int x1 = 0; x1 < 4; ++x1)
    for (int x2 = 0; x2 < 4; ++x2) {
      int label = 0;
      if (x1 <= 2 && x2 <= 2) label = 0;       // 9 cells
      else if (x1 <= 2) label = 1;             // 3 cells
      else if (x2 <= 1) label = 2;             // 2 cells
      else label = 3;                          // 2 cells
      block[static_cast<std::size_t>(x1 * 4 + x2)] = label;
    }
  std::vector<double> block_masses(4, 0.0);
  for (int i = 0; i < 16; ++i) block_masses[static_cast<std::size_t>(block[static_cast<std::size_t>(i)])] += 1.0 / 16.0;
  out.block_entropy = shannon_entropy(block_masses);
  out.block_information = partition_information(table, block);

  // Oblique partition masses come from region areas of the continuous
  // embedding, so they enter by mass vector rather than by cell labeling.
  const std::vector<double> hyper_masses{0.375, 0.531, 0.031, 0.063};
  out.hyper_entropy = shannon_entropy(hyper_masses);
  out.hyper_information = partition_information(out.joint_entropy, hyper_masses);

  out.csv = "scheme,partition_entropy,information\n";
  out.csv += "slepian-wolf," + detail::g17(out.joint_entropy) + "," +
             detail::g17(out.identity_information) + "\n";
  out.csv += "block," + detail::g17(out.block_entropy) + "," + detail::g17(out.block_information) +
             "\n";
  out.csv += "hyper," + detail::g17(out.hyper_entropy) + "," + detail::g17(out.hyper_information) +
             "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Coloring demos: the parity function where per-source classes decode f at
// one bit each, and the product-parity function whose merged groupings break
// the connectivity condition.
// ---------------------------------------------------------------------------

struct CccDemoResult {
  std::string csv;
  bool example3_satisfied = false;
  bool example3_decodable = false;
  double example3_r1 = 0.0;
  double example3_r2 = 0.0;
  bool example4_violated = false;
  bool witness_confirmed = false;  // f(3,1) = 1 != 0 = f(2,1)
  bool control_satisfied = false;
};

inline CccDemoResult run_ccc_demos() {
  CccDemoResult out;
  std::string& csv = out.csv;
  csv = "case,check,result\n";

  // Parity f(x1,x2) = (x1+x2) mod 2 on {0,1,2,3}^2, uniform.
  {
    const FunctionTable table = FunctionTable::uniform(
        4, 4, [](int x1, int x2) { return static_cast<double>((x1 + x2) % 2); });
    const Coloring parity{0, 1, 0, 1};
    const JointColoringFamily family = joint_classes(parity, parity, table);
    const CccReport report = check_ccc(family, table, ValidityMode::Enforce);
    const XorDemo demo = xor_equivalence_demo();
    out.example3_satisfied = report.satisfied;
    out.example3_decodable = is_decodable(parity, parity, table);
    out.example3_r1 = demo.report.bits_per_source[0];
    out.example3_r2 = demo.report.bits_per_source[1];
    csv += std::string("example3,ccc,") + (report.satisfied ? "satisfied" : "violated") + "\n";
    csv += std::string("example3,decodable,") + (out.example3_decodable ? "1" : "0") + "\n";
    csv += "example3,joint_classes," + std::to_string(family.classes.size()) + "\n";
    csv += "example3,R1," + detail::g17(out.example3_r1) + "\n";
    csv += "example3,R2," + detail::g17(out.example3_r2) + "\n";
    csv += std::string("example3,zero_error,") + (demo.zero_error ? "1" : "0") + "\n";
  }

  // Product parity f(x1,x2) = (x1*x2) mod 2 with x1 in {1,2,3,4}, x2 in {0,1}.
  {
    const FunctionTable table = FunctionTable::uniform(
        4, 2, [](int i1, int x2) { return static_cast<double>(((i1 + 1) * x2) % 2); });
    out.witness_confirmed = table.value(2, 1) == 1.0 && table.value(1, 1) == 0.0;
    csv += std::string("example4,witness_f(3;1)=1_f(2;1)=0,") +
           (out.witness_confirmed ? "confirmed" : "failed") + "\n";

    // The merged groupings: odd symbols {1,3} vs even {2,4} on source 1,
    // both symbols of source 2 lumped together (an improper coloring, so
    // the check runs in warning mode).
    const Coloring c1{0, 1, 0, 1};
    const Coloring c2{0, 0};
    const JointColoringFamily family = joint_classes(c1, c2, table);
    const CccReport report = check_ccc(family, table, ValidityMode::Warn);
    out.example4_violated = !report.satisfied;
    csv += std::string("example4,ccc,") + (report.satisfied ? "satisfied" : "violated") + "\n";
    csv += "example4,coloring_warnings," + std::to_string(report.validity_warnings.size()) + "\n";
    csv += std::string("example4,decodable,") + (is_decodable(c1, c2, table) ? "1" : "0") + "\n";
    for (std::size_t c = 0; c < report.classes.size(); ++c) {
      const auto& verdict = report.classes[c];
      if (!verdict.satisfied) {
        std::string points;
        for (const auto& [x1, x2] : verdict.points) {
          if (!points.empty()) points += ';';
          points += "(" + std::to_string(x1 + 1) + " " + std::to_string(x2) + ")";
        }
        csv += "example4,violating_class," + points + "\n";
      }
    }

    // The three merge links checked on value sets of the grouped blocks.
    const auto block_values = [&](int parity_class, int x2) {
      std::set<double> vals;
      for (int i1 = 0; i1 < 4; ++i1)
        if (c1[static_cast<std::size_t>(i1)] == parity_class) vals.insert(table.value(i1, x2));
      return vals;
    };
    const auto link = [&](int cls, int x2a, int x2b) {
      return block_values(cls, x2a) == block_values(cls, x2b);
    };
    csv += std::string("example4,link_even_x2_1_vs_0,") + (link(1, 1, 0) ? "preserved" : "violated") + "\n";
    const bool cross = block_values(1, 0) == block_values(0, 0);
    csv += std::string("example4,link_even_vs_odd_x2_0,") + (cross ? "preserved" : "violated") + "\n";
    csv += std::string("example4,link_odd_x2_0_vs_1,") + (link(0, 0, 1) ? "preserved" : "violated") + "\n";
  }

  // Constant function: every coloring is proper and every class passes.
  {
    const FunctionTable table = FunctionTable::uniform(3, 3, [](int, int) { return 7.0; });
    const Coloring c1{0, 0, 0}, c2{0, 0, 0};
    const CccReport report = check_ccc(joint_classes(c1, c2, table), table, ValidityMode::Enforce);
    out.control_satisfied = report.satisfied;
    csv += std::string("control_constant,ccc,") + (report.satisfied ? "satisfied" : "violated") + "\n";
  }
  return out;
}

// ---------------------------------------------------------------------------
// End-to-end pipeline: model -> arrangement -> helper -> encode/decode.
// ---------------------------------------------------------------------------

struct PipelineRow {
  CodingReport report;
  double distortion_se = 0.0;
  long rejects = 0;
  bool region_recovery_ok = true;
  bool all_regions_seen = true;
};

struct PipelineResult {
  std::vector<PipelineRow> rows;
  std::string csv;
};

struct PipelineOptions {
  std::vector<int> j_values{0, 1, 2, 3};
  std::size_t eval_samples = 10000;
  std::size_t helper_samples = 200000;
  std::string function = "sum";  // or "diff"
  SearchConfig search;
};

inline ClassModel model_from_config(const Config& cfg) {
  const int dim = static_cast<int>(cfg.get_int("dimension", 2));
  std::vector<Vector> means;
  for (int k = 1;; ++k) {
    const std::string key = "mean" + std::to_string(k);
    if (!cfg.has(key)) break;
    const std::vector<double> m = cfg.get_double_list(key, {});
    if (static_cast<int>(m.size()) != dim)
      throw std::invalid_argument("config: " + key + " must have 'dimension' entries");
    means.push_back(Eigen::Map<const Vector>(m.data(), dim));
  }
  if (means.empty()) {  // default two-class model
    means.push_back(Vector::Zero(dim));
    means.push_back(Vector::Zero(dim));
    means[0][0] = -2.0;
    means[1][0] = 2.0;
  }
  std::vector<double> cov_flat = cfg.get_double_list("covariance", {});
  Matrix cov = Matrix::Identity(dim, dim);
  if (!cov_flat.empty()) {
    if (static_cast<int>(cov_flat.size()) != dim * dim)
      throw std::invalid_argument("config: covariance must be row-major with dimension^2 entries");
    cov = Eigen::Map<const Matrix>(cov_flat.data(), dim, dim).transpose();
  }
  std::vector<double> counts = cfg.get_double_list("counts", {});
  if (counts.empty()) counts.assign(means.size(), 1.0);
  return ClassModel(std::move(means), std::move(cov), std::move(counts));
}

inline PipelineResult run_pipeline(const ClassModel& model, const PipelineOptions& opt) {
  const PairFunction f = [&opt](const Vector& a, const Vector& b) {
    return opt.function == "diff" ? a.sum() - b.sum() : a.sum() + b.sum();
  };
  const std::uint64_t seed = opt.search.seed;
  const FeatureSample eval1 = sample_features(model, opt.eval_samples, mix64(seed ^ 0x65763100ULL));
  const FeatureSample eval2 = sample_features(model, opt.eval_samples, mix64(seed ^ 0x65763200ULL));

  PipelineResult out;
  out.csv = "scheme,R1,R2,sum_rate,codebook_size,error,trials\n";
  for (int j : opt.j_values) {
    if (j < 0) throw std::invalid_argument("pipeline: J must be >= 0");
    Arrangement arr(model.dimension());
    if (j > 0) {
      SearchConfig sc = opt.search;
      arr = optimize_arrangement(model, j, sc).arrangement;
    }
    HelperBuildInfo info;
    const HelperPayload helper = build_helper(arr, model, f, opt.helper_samples, seed, &info);

    // Analytic per-hyperplane right-side masses under the mixture.
    std::vector<double> q;
    for (std::size_t idx = 0; idx < arr.size(); ++idx) {
      double mass = 0.0;
      for (std::size_t k = 0; k < model.class_count(); ++k) {
        const ProjectedClass pc = project_class(model, k, arr[idx]);
        mass += model.weight(k) * right_tail_prob(pc.mean, pc.sigma, arr[idx].offset());
      }
      q.push_back(mass);
    }

    PipelineRow row;
    row.all_regions_seen = info.all_regions_seen;
    double sum_abs = 0.0, sum_sq = 0.0;
    long decoded = 0;
    for (std::size_t t = 0; t < opt.eval_samples; ++t) {
      const Vector& x1 = eval1.points[t];
      const Vector& x2 = eval2.points[t];
      const SignWord tx1 = encode_source(helper, 1, x1);
      const SignWord tx2 = encode_source(helper, 2, x2);
      const DecodeResult dec = decode_joint(helper, tx1, tx2);
      if (!(dec.region1 == sign_word(arr, x1)) || !(dec.region2 == sign_word(arr, x2)))
        row.region_recovery_ok = false;
      if (!dec.ok) {
        ++row.rejects;
        continue;
      }
      const double err = std::abs(f(x1, x2) - dec.value);
      sum_abs += err;
      sum_sq += err * err;
      ++decoded;
    }
    const double mean = decoded > 0 ? sum_abs / static_cast<double>(decoded) : 0.0;
    const double var =
        decoded > 1 ? (sum_sq - static_cast<double>(decoded) * mean * mean) / static_cast<double>(decoded - 1)
                    : 0.0;
    row.distortion_se = decoded > 0 ? std::sqrt(std::max(0.0, var) / static_cast<double>(decoded)) : 0.0;
    row.report = CodingReport{"hyper-J" + std::to_string(j),
                              {static_cast<double>(j), static_cast<double>(j)},
                              2.0 * static_cast<double>(j),
                              hp_codebook_size(q),
                              mean,
                              static_cast<long>(opt.eval_samples)};
    std::ostringstream line;
    write_coding_report_row(row.report, line);
    out.csv += line.str();
    out.rows.push_back(std::move(row));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random-binning sweep CSV.
// ---------------------------------------------------------------------------

inline std::string run_cover_sweep(const std::vector<double>& pmf, int n,
                                   const std::vector<double>& rates,
                                   const std::vector<long>& seeds, long trials) {
  std::string csv = "R,seed,trials,error,e1,e2\n";
  for (double rate : rates)
    for (long seed : seeds) {
      const CoverResult r =
          cover_binning_simulate(pmf, n, rate, trials, static_cast<std::uint64_t>(seed));
      csv += detail::g17(rate) + "," + std::to_string(seed) + "," + std::to_string(r.trials) + "," +
             detail::g17(r.error_rate) + "," + detail::g17(r.e1_rate) + "," +
             detail::g17(r.e2_rate) + "\n";
    }
  return csv;
}

}  // namespace hyperbin

#endif  // HYPERBIN_EXPERIMENTS_HPP
