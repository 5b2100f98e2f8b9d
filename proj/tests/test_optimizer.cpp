#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "hyperbin/optimizer.hpp"
#include "oracles.hpp"

using namespace hyperbin;

namespace {
Vector vec2(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}

// Dense sweep over angle x offset, the independent optimum for 2-D models.
double grid_best(const ClassModel& model, int angle_steps = 360, int offset_steps = 200) {
  double best = -1.0;
  double reach = 0.0;
  for (std::size_t k = 0; k < model.class_count(); ++k)
    reach = std::max(reach, model.mean(k).norm());
  const double sigma_top = std::sqrt(model.covariance().eigenvalues().real().maxCoeff());
  const double span = reach + 4.0 * sigma_top;
  for (int i = 0; i < angle_steps; ++i) {
    const double theta = M_PI * static_cast<double>(i) / static_cast<double>(angle_steps);
    const Vector a = vec2(std::cos(theta), std::sin(theta));
    for (int j = 0; j < offset_steps; ++j) {
      const double b = -span + 2.0 * span * static_cast<double>(j) / static_cast<double>(offset_steps - 1);
      best = std::max(best, evaluate_hyperplane(model, Hyperplane(a, b), CountMode::Given));
    }
  }
  return best;
}
}  // namespace

TEST_CASE("evaluate_hyperplane") {
  SECTION("single class scores zero everywhere") {
    const ClassModel m({vec2(1.0, -2.0)}, Matrix::Identity(2, 2), {3.0});
    Rng rng(4);
    for (int t = 0; t < 20; ++t) {
      const Hyperplane h(vec2(rng.gaussian(), rng.gaussian() + 3.0), rng.uniform(-2, 2));
      CHECK(evaluate_hyperplane(m, h, CountMode::Given) == Catch::Approx(0.0).margin(1e-12));
    }
  }

  SECTION("identical class means score ~zero") {
    const ClassModel m({vec2(0.5, 0.5), vec2(0.5, 0.5)}, Matrix::Identity(2, 2), {1.0, 2.0});
    Rng rng(5);
    for (int t = 0; t < 20; ++t) {
      const Hyperplane h(vec2(rng.gaussian(), rng.gaussian() + 2.0), rng.uniform(-2, 2));
      CHECK(evaluate_hyperplane(m, h, CountMode::Given) == Catch::Approx(0.0).margin(1e-9));
    }
  }

  SECTION("separated symmetric pair at the bisector") {
    const ClassModel m({vec2(-2.0, 0.0), vec2(2.0, 0.0)}, Matrix::Identity(2, 2), {1.0, 1.0});
    const double v = evaluate_hyperplane(m, Hyperplane(vec2(1.0, 0.0), 0.0), CountMode::Given);
    CHECK(v == Catch::Approx(0.84338491387489615).epsilon(1e-10));  // 1 - h(Q(2))
  }

  SECTION("dimension mismatch rejected") {
    const ClassModel m({vec2(0, 0)}, Matrix::Identity(2, 2), {1.0});
    Vector a3(3);
    a3 << 1, 0, 0;
    CHECK_THROWS_AS(evaluate_hyperplane(m, Hyperplane(a3, 0.0), CountMode::Given),
                    std::invalid_argument);
  }
}

TEST_CASE("optimize_hyperplane") {
  SearchConfig cfg;
  cfg.seed = 7;

  SECTION("symmetric two-class optimum is the perpendicular bisector") {
    const ClassModel m({vec2(-2.0, 0.0), vec2(2.0, 0.0)}, Matrix::Identity(2, 2), {1.0, 1.0});
    const OptimizationResult r = optimize_hyperplane(m, cfg);
    CHECK(r.objective >= 0.84);
    CHECK(std::abs(r.hyperplane().offset()) <= 0.2);
    CHECK(std::abs(r.hyperplane().normal().dot(vec2(1.0, 0.0))) >= 0.99);
    CHECK(r.gp_ok);
  }

  SECTION("objective equals re-evaluation on the returned hyperplane") {
    Rng rng(31337);
    for (int t = 0; t < 5; ++t) {
      const ClassModel m({vec2(rng.uniform(-3, 3), rng.uniform(-3, 3)),
                          vec2(rng.uniform(-3, 3), rng.uniform(-3, 3))},
                         Matrix::Identity(2, 2), {1.0, 1.0});
      SearchConfig c;
      c.seed = static_cast<std::uint64_t>(t);
      const OptimizationResult r = optimize_hyperplane(m, c);
      CHECK(std::abs(r.objective - evaluate_hyperplane(m, r.hyperplane(), CountMode::Given)) <=
            1e-10);
    }
  }

  SECTION("degenerate models return ~zero with gp_ok") {
    const ClassModel one({vec2(1.0, 1.0)}, Matrix::Identity(2, 2), {1.0});
    const OptimizationResult r1 = optimize_hyperplane(one, cfg);
    CHECK(r1.objective == Catch::Approx(0.0).margin(1e-9));
    CHECK(r1.gp_ok);

    const ClassModel twin({vec2(1.0, 1.0), vec2(1.0, 1.0)}, Matrix::Identity(2, 2), {1.0, 1.0});
    const OptimizationResult r2 = optimize_hyperplane(twin, cfg);
    CHECK(r2.objective <= 1e-6);
  }

  SECTION("trace is monotone nondecreasing") {
    const ClassModel m({vec2(-1.0, 1.0), vec2(2.0, 0.0)}, Matrix::Identity(2, 2), {2.0, 1.0});
    const OptimizationResult r = optimize_hyperplane(m, cfg);
    for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i] >= r.trace[i - 1] - 1e-15);
  }

  SECTION("seed determinism") {
    const ClassModel m({vec2(-1.0, 0.5), vec2(1.5, -0.5)}, Matrix::Identity(2, 2), {1.0, 2.0});
    const OptimizationResult a = optimize_hyperplane(m, cfg);
    const OptimizationResult b = optimize_hyperplane(m, cfg);
    CHECK(a.objective == b.objective);
    CHECK(a.hyperplane().normal() == b.hyperplane().normal());
    CHECK(a.hyperplane().offset() == b.hyperplane().offset());
    CHECK(a.trace == b.trace);
  }

  SECTION("dominates a dense grid on random two-class models") {
    Rng rng(12);
    for (int t = 0; t < 20; ++t) {
      Matrix l = Matrix::Zero(2, 2);
      l << rng.uniform(0.4, 1.4), 0.0, rng.uniform(-0.5, 0.5), rng.uniform(0.4, 1.4);
      const ClassModel m({vec2(rng.uniform(-3, 3), rng.uniform(-3, 3)),
                          vec2(rng.uniform(-3, 3), rng.uniform(-3, 3))},
                         l * l.transpose(), {rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)});
      SearchConfig c;
      c.seed = static_cast<std::uint64_t>(100 + t);
      const OptimizationResult r = optimize_hyperplane(m, c);
      CHECK(r.objective >= grid_best(m) - 1e-3);
    }
  }
}

TEST_CASE("optimize_arrangement") {
  SearchConfig cfg;
  cfg.seed = 21;
  cfg.mc_samples = 20000;
  cfg.restarts = 8;
  cfg.max_iterations = 80;

  SECTION("J = 1 reduces exactly to optimize_hyperplane") {
    const ClassModel m({vec2(-2.0, 0.0), vec2(2.0, 0.0)}, Matrix::Identity(2, 2), {1.0, 1.0});
    const OptimizationResult a = optimize_arrangement(m, 1, cfg);
    const OptimizationResult b = optimize_hyperplane(m, cfg);
    CHECK(a.objective == b.objective);
    CHECK(a.hyperplane().normal() == b.hyperplane().normal());
    CHECK(a.hyperplane().offset() == b.hyperplane().offset());
  }

  SECTION("four well-separated classes split into four sign words by J = 2") {
    const ClassModel m({vec2(-3.0, -3.0), vec2(-3.0, 3.0), vec2(3.0, -3.0), vec2(3.0, 3.0)},
                       0.1 * Matrix::Identity(2, 2), {1.0, 1.0, 1.0, 1.0});
    const OptimizationResult r = optimize_arrangement(m, 2, cfg);
    REQUIRE(r.arrangement.size() == 2);
    CHECK(r.gp_ok);
    std::set<std::uint64_t> words;
    for (std::size_t k = 0; k < m.class_count(); ++k)
      words.insert(sign_word(r.arrangement, m.mean(k)).bits());
    CHECK(words.size() == 4);
  }

  SECTION("per-step trace is nondecreasing and GP holds") {
    const ClassModel m({vec2(-2.0, -1.0), vec2(2.0, 0.5), vec2(0.0, 2.0)},
                       0.5 * Matrix::Identity(2, 2), {1.0, 1.0, 1.0});
    const OptimizationResult r = optimize_arrangement(m, 3, cfg);
    REQUIRE(r.arrangement.size() == 3);
    for (std::size_t i = 1; i < r.trace.size(); ++i) CHECK(r.trace[i] >= r.trace[i - 1] - 1e-12);
    CHECK(is_general_position(r.arrangement, 1e-9));
    CHECK(std::abs(r.objective - evaluate_arrangement(m, r.arrangement, cfg)) <= 1e-10);
  }

  SECTION("seed determinism for J = 2") {
    const ClassModel m({vec2(-1.0, -1.0), vec2(1.0, 1.0)}, Matrix::Identity(2, 2), {1.0, 1.0});
    const OptimizationResult a = optimize_arrangement(m, 2, cfg);
    const OptimizationResult b = optimize_arrangement(m, 2, cfg);
    CHECK(a.objective == b.objective);
    CHECK(arrangement_to_text(a.arrangement) == arrangement_to_text(b.arrangement));
  }

  SECTION("invalid J rejected") {
    const ClassModel m({vec2(0, 0)}, Matrix::Identity(2, 2), {1.0});
    CHECK_THROWS_AS(optimize_arrangement(m, 0, cfg), std::invalid_argument);
  }
}
