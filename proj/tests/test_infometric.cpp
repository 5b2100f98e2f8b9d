#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "hyperbin/infometric.hpp"
#include "oracles.hpp"

using namespace hyperbin;

TEST_CASE("binary_entropy basics") {
  CHECK(binary_entropy(0.5) == 1.0);
  CHECK(binary_entropy(0.0) == 0.0);
  CHECK(binary_entropy(1.0) == 0.0);
  CHECK(binary_entropy(9.0 / 16.0) == Catch::Approx(0.98869940828849750).epsilon(1e-12));
  CHECK_THROWS_AS(binary_entropy(-0.01), std::domain_error);
  CHECK_THROWS_AS(binary_entropy(1.01), std::domain_error);

  SECTION("symmetry, concavity midpoint, oracle agreement") {
    Rng rng(31);
    for (int t = 0; t < 200; ++t) {
      const double p = rng.uniform(0.001, 0.999);
      CHECK(binary_entropy(p) == Catch::Approx(binary_entropy(1.0 - p)).margin(1e-12));
      CHECK(binary_entropy(p) == Catch::Approx(oracles::binary_entropy_ld(p)).margin(1e-12));
      const double q = rng.uniform(0.001, 0.999);
      CHECK(binary_entropy(0.5 * (p + q)) >= 0.5 * (binary_entropy(p) + binary_entropy(q)) - 1e-12);
    }
  }

  SECTION("gradient matches log2((1-p)/p)") {
    const double eps = 1e-6;
    for (double p = 0.05; p <= 0.951; p += 0.05) {
      const double numeric = (binary_entropy(p + eps) - binary_entropy(p - eps)) / (2.0 * eps);
      CHECK(numeric == Catch::Approx(std::log2((1.0 - p) / p)).margin(1e-5));
    }
  }
}

TEST_CASE("shannon_entropy in bits") {
  std::vector<double> uniform16(16, 1.0 / 16.0);
  CHECK(shannon_entropy(uniform16) == 4.0);

  const std::vector<double> block{3.0 / 16.0, 9.0 / 16.0, 2.0 / 16.0, 2.0 / 16.0};
  CHECK(shannon_entropy(block) == Catch::Approx(1.67).margin(0.005));

  const std::vector<double> hyper{0.375, 0.531, 0.031, 0.063};
  CHECK(shannon_entropy(hyper) == Catch::Approx(1.42).margin(0.005));

  CHECK(shannon_entropy(block) == Catch::Approx(oracles::shannon_entropy_ld(block)).margin(1e-12));

  CHECK_THROWS_AS(shannon_entropy(std::vector<double>{0.5, 0.4}), std::domain_error);
  CHECK_THROWS_AS(shannon_entropy(std::vector<double>{1.2, -0.2}), std::domain_error);
}

TEST_CASE("partition_mi") {
  SECTION("single class is always zero") {
    Rng rng(8);
    for (int t = 0; t < 50; ++t) {
      const PartitionProfile profile({rng.uniform(0.0, 1.0)}, {rng.uniform(0.5, 10.0)});
      CHECK(partition_mi(profile) == 0.0);
    }
  }

  SECTION("worked two-class values") {
    const PartitionProfile a({0.99, 0.01}, {1.0, 1.0});
    CHECK(partition_mi(a) == Catch::Approx(0.91920686410408883).epsilon(1e-12));
    const PartitionProfile b({0.6, 0.9}, {1.0, 1.0});
    CHECK(partition_mi(b) == Catch::Approx(0.09130503043715793).epsilon(1e-12));
  }

  SECTION("profile validation") {
    CHECK_THROWS_AS(PartitionProfile({0.5, 1.2}, {1.0, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(PartitionProfile({0.5}, {0.0}), std::invalid_argument);
    CHECK_THROWS_AS(PartitionProfile({}, {}), std::invalid_argument);
  }

  SECTION("p_right is the count-weighted mass") {
    const PartitionProfile p({0.2, 0.8}, {3.0, 1.0});
    CHECK(p.p_right == Catch::Approx(0.35).epsilon(1e-12));
  }
}

TEST_CASE("symmetric sequence stats recursions") {
  SymmetricSequenceStats stats;
  std::vector<double> p{0.55, 0.7, 0.95, 0.6};
  double psum = 0.0, hsum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    stats.extend(p[i]);
    psum += p[i];
    hsum += binary_entropy(p[i]);
    CHECK(stats.pbar == Catch::Approx(psum / static_cast<double>(i + 1)).margin(1e-12));
    CHECK(stats.hbar == Catch::Approx(hsum / static_cast<double>(i + 1)).margin(1e-12));
  }
  CHECK(binary_entropy(stats.pstar()) == Catch::Approx(stats.hbar).margin(1e-9));
  CHECK(stats.pstar() <= 0.5);
}

TEST_CASE("mi_increment_bounds") {
  SECTION("worked example") {
    const auto b = mi_increment_bounds(std::vector<double>{0.6, 0.9});
    CHECK(b.lower == Catch::Approx(0.0).margin(1e-15));
    CHECK(b.upper == Catch::Approx(0.25097750043269371).epsilon(1e-12));
    CHECK(b.actual == Catch::Approx(0.09130503043715793).epsilon(1e-12));
  }

  SECTION("all-equal probabilities collapse to zero") {
    const auto b = mi_increment_bounds(std::vector<double>{0.7, 0.7, 0.7});
    CHECK(b.lower == Catch::Approx(0.0).margin(1e-15));
    CHECK(b.upper == Catch::Approx(0.0).margin(1e-15));
    CHECK(b.actual == Catch::Approx(0.0).margin(1e-15));
  }

  SECTION("ordered case stays inside the bounds") {
    const auto b = mi_increment_bounds(std::vector<double>{0.55, 0.7, 0.95});
    CHECK(b.actual >= b.lower - 1e-12);
    CHECK(b.actual <= b.upper + 1e-12);
  }

  SECTION("unconditional concavity lower bound over random instances") {
    Rng rng(123);
    for (int t = 0; t < 10000; ++t) {
      const std::size_t m = 1 + rng.below(8);
      std::vector<double> p(m + 1);
      for (double& v : p) v = rng.uniform(0.01, 0.99);
      const auto b = mi_increment_bounds(p);
      CHECK(b.actual >= b.lower - 1e-12);
    }
  }

  SECTION("upper bound under its preconditions") {
    Rng rng(321);
    int kept = 0;
    while (kept < 10000) {
      const std::size_t m = 1 + rng.below(8);
      std::vector<double> p(m + 1);
      for (double& v : p) v = rng.uniform(0.5, 1.0);
      std::sort(p.begin(), p.end());
      if (p.front() <= 0.5) continue;
      ++kept;
      const auto b = mi_increment_bounds(p);
      CHECK(b.actual <= b.upper + 1e-12);
    }
  }
}

TEST_CASE("mi_symmetric_partial_sums") {
  SECTION("constant sequence: everything stays at zero") {
    const auto sums = mi_symmetric_partial_sums([](std::size_t) { return 0.37; }, 50);
    for (double s : sums.exact) CHECK(s == Catch::Approx(0.0).margin(1e-12));
    for (double s : sums.series) CHECK(s == Catch::Approx(0.0).margin(1e-12));
    for (double s : sums.direct) CHECK(s == Catch::Approx(0.0).margin(1e-12));
  }

  SECTION("exact sums telescope onto the direct evaluation") {
    Rng rng(55);
    for (int t = 0; t < 20; ++t) {
      std::vector<double> p(201);
      for (double& v : p) v = rng.uniform(0.05, 0.95);
      const auto sums = mi_symmetric_partial_sums([&p](std::size_t k) { return p[k - 1]; }, 200);
      for (std::size_t i = 0; i < sums.exact.size(); ++i)
        CHECK(std::abs(sums.exact[i] - sums.direct[i]) <= 1e-10);
    }
  }

  SECTION("geometric approach to 1: series deltas shrink beyond T = 10") {
    const auto sums =
        mi_symmetric_partial_sums([](std::size_t k) { return 1.0 - std::exp2(-static_cast<double>(k)); }, 200);
    for (std::size_t i = 10; i < sums.series.size(); ++i) {
      const double cur = std::abs(sums.series[i] - sums.series[i - 1]);
      const double prev = std::abs(sums.series[i - 1] - sums.series[i - 2]);
      CHECK(cur <= prev + 1e-15);
    }
  }

  SECTION("generator domain is enforced") {
    CHECK_THROWS_AS(mi_symmetric_partial_sums([](std::size_t) { return 1.0; }, 5),
                    std::invalid_argument);
  }
}

TEST_CASE("proposition_audit reports rather than asserts") {
  AuditConfig cfg;
  const AuditReport report = proposition_audit(cfg, 500, 99);

  // Airtight pieces: concavity lower bound and exact telescoping.
  CHECK(report.lower_bound.violations == 0);
  CHECK(report.upper_bound.violations == 0);  // instances are sorted above 1/2
  CHECK(report.telescoping.violations == 0);
  CHECK(report.lower_bound.checks >= 500);

  // The proportional-counts monotonicity claim has a gapped proof; the audit
  // records whatever the instances show (violations are expected).
  CHECK(report.monotone_proportional.checks > 0);

  SECTION("degenerate all-equal instances show zero violations and zero margins") {
    AuditConfig tight;
    tight.p_lo = 0.7;
    tight.p_hi = 0.7 + 1e-15;
    const AuditReport degenerate = proposition_audit(tight, 50, 7);
    CHECK(degenerate.monotone_proportional.violations == 0);
    CHECK(degenerate.lower_bound.violations == 0);
    CHECK(std::abs(degenerate.monotone_proportional.worst_margin) <= 1e-12);
  }

  SECTION("CSV schema") {
    std::ostringstream out;
    write_audit_csv(report, out);
    const std::string csv = out.str();
    CHECK(csv.rfind("proposition,trial,M,lower,actual,upper,violated\n", 0) == 0);
    CHECK(csv.find("prop2,") != std::string::npos);
    CHECK(csv.find("prop3,") != std::string::npos);
    CHECK(csv.find("prop4,") != std::string::npos);
  }

  SECTION("trials must be positive") {
    CHECK_THROWS_AS(proposition_audit(cfg, 0, 1), std::invalid_argument);
  }
}
