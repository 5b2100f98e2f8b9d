#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <set>

#include "hyperbin/geometry.hpp"
#include "oracles.hpp"

using namespace hyperbin;

namespace {
Vector vec2(double x, double y) {
  Vector v(2);
  v << x, y;
  return v;
}
}  // namespace

TEST_CASE("region_count matches the binomial sum") {
  CHECK(region_count(2, 3) == 7);
  CHECK(region_count(5, 0) == 1);
  CHECK(region_count(1, 0) == 1);
  CHECK(region_count(3, 5) == 26);  // 1 + 5 + 10 + 10

  SECTION("2^J whenever J <= s") {
    for (int s = 1; s <= 8; ++s)
      for (int J = 0; J <= s; ++J) CHECK(region_count(s, J) == (std::uint64_t{1} << J));
  }

  SECTION("agrees with the independent 128-bit sum on a grid") {
    for (int s = 1; s <= 6; ++s)
      for (int J = 0; J <= 30; ++J)
        CHECK(region_count(s, J) == static_cast<std::uint64_t>(oracles::region_count128(s, J)));
  }

  SECTION("large J stays exact") {
    CHECK(region_count(1, 64) == 65);
    CHECK(region_count(63, 64) == UINT64_MAX);  // 2^64 - 1
  }

  SECTION("rejections") {
    CHECK_THROWS_AS(region_count(0, 3), std::invalid_argument);
    CHECK_THROWS_AS(region_count(2, -1), std::invalid_argument);
    CHECK_THROWS_AS(region_count(2, 65), std::overflow_error);
    CHECK_THROWS_AS(region_count(64, 64), std::overflow_error);  // exactly 2^64
  }
}

TEST_CASE("max_feature_dim solves (n+1) J <= r(s,J)") {
  CHECK(max_feature_dim(3, 2) == 1);
  CHECK(max_feature_dim(1, 2) == 1);
  CHECK(max_feature_dim(5, 3) == 4);

  SECTION("matches brute force over the experiment grid") {
    for (int s = 1; s <= 5; ++s)
      for (int J = 1; J <= 20; ++J) CHECK(max_feature_dim(J, s) == oracles::nmax_bruteforce(J, s));
  }
}

TEST_CASE("hyperplane construction and sign conventions") {
  const Hyperplane h(vec2(2.0, 0.0), 4.0);  // normalizes to a=(1,0), b=2
  CHECK(h.normal()[0] == Catch::Approx(1.0));
  CHECK(h.offset() == Catch::Approx(2.0));
  CHECK(std::abs(h.normal().norm() - 1.0) <= 1e-12);
  CHECK_THROWS_AS(Hyperplane(vec2(0.0, 0.0), 1.0), std::invalid_argument);

  Arrangement axes(2);
  axes.add(Hyperplane(vec2(1.0, 0.0), 0.0));
  axes.add(Hyperplane(vec2(0.0, 1.0), 0.0));

  CHECK(sign_word(axes, vec2(1.0, -1.0)).to_string() == "10");
  CHECK(sign_word(axes, vec2(0.0, 0.0)).to_string() == "11");  // ties count as 1

  Arrangement three(2);
  three.add(Hyperplane(vec2(1.0, 0.0), 0.0));
  three.add(Hyperplane(vec2(0.0, 1.0), 0.0));
  three.add(Hyperplane(vec2(1.0, 1.0), 0.0));
  CHECK(sign_word(three, vec2(-1.0, -1.0)).to_string() == "000");

  CHECK_THROWS_AS(sign_word(axes, Vector::Zero(3)), std::invalid_argument);
}

TEST_CASE("general position checks") {
  Arrangement axes(2);
  axes.add(Hyperplane(vec2(1.0, 0.0), 0.0));
  axes.add(Hyperplane(vec2(0.0, 1.0), 0.0));
  CHECK(is_general_position(axes, 1e-9));

  Arrangement dup(2);
  dup.add(Hyperplane(vec2(1.0, 0.0), 0.0));
  dup.add(Hyperplane(vec2(1.0, 0.0), 1.0));
  CHECK_FALSE(is_general_position(dup, 1e-9));

  Arrangement three(2);
  three.add(Hyperplane(vec2(1.0, 0.0), 0.0));
  three.add(Hyperplane(vec2(0.0, 1.0), 0.0));
  three.add(Hyperplane(vec2(1.0, 1.0), 0.0));
  CHECK(is_general_position(three, 1e-9));

  CHECK_THROWS_AS(is_general_position(Arrangement(2)), std::invalid_argument);
}

TEST_CASE("project_point lands on the plane at the closest point") {
  const Hyperplane hx(vec2(1.0, 0.0), 0.0);
  CHECK((project_point(hx, vec2(3.0, 4.0)) - vec2(0.0, 4.0)).norm() < 1e-12);

  const Hyperplane hy(vec2(0.0, 1.0), 2.0);
  CHECK((project_point(hy, vec2(5.0, 5.0)) - vec2(5.0, 2.0)).norm() < 1e-12);

  const Hyperplane diag(vec2(1.0, 1.0), 0.0);
  CHECK((project_point(diag, vec2(1.0, 1.0)) - vec2(0.0, 0.0)).norm() < 1e-12);

  SECTION("idempotent and on-plane for random cases") {
    Rng rng(99);
    for (int t = 0; t < 200; ++t) {
      const int n = 2 + static_cast<int>(rng.below(3));
      Vector a(n), x(n);
      for (int i = 0; i < n; ++i) {
        a[i] = rng.gaussian();
        x[i] = 3.0 * rng.gaussian();
      }
      if (a.norm() < 1e-9) continue;
      const Hyperplane h(a, rng.uniform(-2.0, 2.0));
      const Vector px = project_point(h, x);
      CHECK(std::abs(h.normal().dot(px) - h.offset()) <= 1e-10);
      CHECK((project_point(h, px) - px).norm() <= 1e-10);
      // any other on-plane point is no closer
      Vector tangent(n);
      for (int i = 0; i < n; ++i) tangent[i] = rng.gaussian();
      tangent -= h.normal() * h.normal().dot(tangent);
      if (tangent.norm() > 1e-9) {
        const Vector other = px + tangent;
        CHECK((x - px).norm() <= (x - other).norm() + 1e-12);
      }
    }
  }
}

TEST_CASE("enumerate_regions is the Monte Carlo oracle for r(s,J)") {
  SECTION("single hyperplane gives two words") {
    Arrangement arr(2);
    arr.add(Hyperplane(vec2(1.0, 0.3), 0.1));
    CHECK(enumerate_regions(arr, 2.0, 2000, 7).words.size() == 2);
  }

  SECTION("three general-position lines give seven regions") {
    Arrangement arr(2);
    arr.add(Hyperplane(vec2(1.0, 0.0), 0.3));
    arr.add(Hyperplane(vec2(0.1, 1.0), -0.2));
    arr.add(Hyperplane(vec2(-0.7, 1.0), 0.4));
    const RegionSample sample = enumerate_regions(arr, 3.0, 100000, 11);
    CHECK(sample.gp_ok);
    CHECK(sample.words.size() == 7);
  }

  SECTION("two general-position lines give four regions") {
    Arrangement arr(2);
    arr.add(Hyperplane(vec2(1.0, 0.2), 0.0));
    arr.add(Hyperplane(vec2(-0.3, 1.0), 0.2));
    CHECK(enumerate_regions(arr, 2.0, 50000, 3).words.size() == 4);
  }

  SECTION("GP violation is flagged, zero samples rejected") {
    Arrangement dup(2);
    dup.add(Hyperplane(vec2(1.0, 0.0), 0.0));
    dup.add(Hyperplane(vec2(1.0, 0.0), 0.5));
    CHECK_FALSE(enumerate_regions(dup, 2.0, 1000, 1).gp_ok);
    CHECK_THROWS_AS(enumerate_regions(dup, 2.0, 0, 1), std::invalid_argument);
  }

  SECTION("random arrangements match region_count exactly") {
    Rng rng(2024);
    for (int t = 0; t < 40; ++t) {
      const int n = (t % 2 == 0) ? 2 : 3;
      const int J = 1 + t % 6;
      const auto random_arr = oracles::make_random_gp_arrangement(n, J, rng);
      const RegionSample sample =
          enumerate_regions(random_arr.arrangement, random_arr.box_halfwidth, 100000,
                            static_cast<std::uint64_t>(1000 + t));
      CHECK(sample.gp_ok);
      CHECK(sample.words.size() == region_count(n, J));
    }
  }

  SECTION("region convexity: sampled centroids stay in their region") {
    Rng rng(77);
    for (int t = 0; t < 10; ++t) {
      const int n = (t % 2 == 0) ? 2 : 3;
      const int J = 2 + t % 4;
      const auto random_arr = oracles::make_random_gp_arrangement(n, J, rng);
      const Arrangement& arr = random_arr.arrangement;
      std::map<SignWord, std::pair<Vector, std::size_t>> acc;
      Rng sampler(t + 5);
      Vector x(n);
      for (int i = 0; i < 20000; ++i) {
        for (int d = 0; d < n; ++d)
          x[d] = sampler.uniform(-random_arr.box_halfwidth, random_arr.box_halfwidth);
        const SignWord w = sign_word(arr, x);
        auto it = acc.find(w);
        if (it == acc.end())
          acc.emplace(w, std::make_pair(x, std::size_t{1}));
        else {
          it->second.first += x;
          ++it->second.second;
        }
      }
      for (const auto& [w, pair] : acc) {
        const Vector centroid = pair.first / static_cast<double>(pair.second);
        CHECK(sign_word(arr, centroid) == w);
      }
    }
  }
}

TEST_CASE("arrangement text round-trips bit-exactly") {
  Rng rng(5150);
  for (int t = 0; t < 25; ++t) {
    const int n = 2 + static_cast<int>(rng.below(3));
    const int J = 1 + static_cast<int>(rng.below(5));
    Arrangement arr(n);
    for (int j = 0; j < J; ++j) {
      Vector a(n);
      for (int i = 0; i < n; ++i) a[i] = rng.gaussian();
      arr.add(Hyperplane(a, rng.uniform(-3.0, 3.0)));
    }
    const std::string text = arrangement_to_text(arr);
    const Arrangement parsed = arrangement_from_text(text);
    CHECK(arrangement_to_text(parsed) == text);
    REQUIRE(parsed.size() == arr.size());
    for (std::size_t j = 0; j < arr.size(); ++j) {
      CHECK(parsed[j].normal() == arr[j].normal());
      CHECK(parsed[j].offset() == arr[j].offset());
    }
  }

  CHECK_THROWS_AS(arrangement_from_text(std::string("2")), std::invalid_argument);
  CHECK_THROWS_AS(arrangement_from_text(std::string("2 1\n0.5 0.5")), std::invalid_argument);
}
