#include <catch2/catch_amalgamated.hpp>

#include "spacobi/prox.hpp"
#include "spacobi/rng.hpp"

#include "oracle_helpers.hpp"

using namespace spacobi;

namespace {

std::vector<double> random_vec(Rng& rng, std::size_t d, double scale) {
  std::vector<double> v(d);
  for (double& x : v) x = scale * (2.0 * rng.uniform01() - 1.0);
  return v;
}

double dist2(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("sigma = 0 is the identity") {
  Rng rng(3);
  const auto x = random_vec(rng, 4, 5.0);
  for (ProxKind q : {ProxKind::L1, ProxKind::L2, ProxKind::Linf})
    REQUIRE(prox_norm(x, 0.0, q) == x);
}

TEST_CASE("L2 prox shrinks exactly to zero at sigma = ||x||") {
  const std::vector<double> x{3.0, 4.0};
  const auto v = prox_norm(x, 5.0, ProxKind::L2);
  REQUIRE(v == std::vector<double>{0.0, 0.0});
}

TEST_CASE("L2 prox derived example matches the ray-search oracle") {
  const std::vector<double> x{3.0, 4.0};
  const auto v = prox_norm(x, 2.5, ProxKind::L2);
  REQUIRE(v[0] == Catch::Approx(1.5).margin(1e-12));
  REQUIRE(v[1] == Catch::Approx(2.0).margin(1e-12));

  const auto ref = oracle::prox_l2_ray_search(x, 2.5);
  REQUIRE(dist2(v, ref) <= 1e-4);
}

TEST_CASE("L1 prox derived example matches componentwise search") {
  const std::vector<double> x{3.0, -1.0};
  const auto v = prox_norm(x, 2.0, ProxKind::L1);
  REQUIRE(v[0] == Catch::Approx(1.0).margin(1e-12));
  REQUIRE(v[1] == 0.0);

  const auto ref = oracle::prox_l1_grid_search(x, 2.0);
  REQUIRE(dist2(v, ref) <= 1e-4);
}

TEST_CASE("Linf prox has a subgradient-exact known case") {
  const std::vector<double> x{3.0, 1.0};
  const auto v = prox_norm(x, 1.0, ProxKind::Linf);
  REQUIRE(v[0] == Catch::Approx(2.0).margin(1e-12));
  REQUIRE(v[1] == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("L1-ball projection") {
  SECTION("inside the ball is untouched") {
    const std::vector<double> y{0.2, -0.3};
    REQUIRE(project_l1_ball(y) == y);
  }
  SECTION("projection lands on the ball and is closest") {
    Rng rng(17);
    for (int rep = 0; rep < 20; ++rep) {
      const auto y = random_vec(rng, 4, 2.0);
      const auto p = project_l1_ball(y);
      double l1 = 0.0;
      for (double v : p) l1 += std::fabs(v);
      REQUIRE(l1 <= 1.0 + 1e-12);
      // No random feasible point may be closer.
      for (int t = 0; t < 200; ++t) {
        auto cand = random_vec(rng, 4, 1.0);
        double c1 = 0.0;
        for (double v : cand) c1 += std::fabs(v);
        if (c1 > 1.0)
          for (double& v : cand) v /= c1;
        REQUIRE(dist2(p, y) <= dist2(cand, y) + 1e-12);
      }
    }
  }
}

TEST_CASE("firm nonexpansiveness") {
  Rng rng(29);
  for (ProxKind q : {ProxKind::L1, ProxKind::L2, ProxKind::Linf}) {
    for (double sigma : {0.1, 1.0, 10.0}) {
      for (int rep = 0; rep < 50; ++rep) {
        const auto x = random_vec(rng, 5, 4.0);
        const auto y = random_vec(rng, 5, 4.0);
        const auto px = prox_norm(x, sigma, q);
        const auto py = prox_norm(y, sigma, q);
        REQUIRE(dist2(px, py) <= dist2(x, y) + 1e-12);
      }
    }
  }
}

TEST_CASE("prox output beats random perturbations") {
  Rng rng(37);
  for (ProxKind q : {ProxKind::L1, ProxKind::L2, ProxKind::Linf}) {
    const int qi = q == ProxKind::L1 ? 1 : (q == ProxKind::L2 ? 2 : 3);
    for (double sigma : {0.1, 1.0, 10.0}) {
      for (int rep = 0; rep < 5; ++rep) {
        const std::size_t d = 1 + std::size_t(rng.uniform_below(5));
        const auto x = random_vec(rng, d, 3.0);
        const auto v = prox_norm(x, sigma, q);
        const double base = oracle::prox_objective(v, x, sigma, qi);
        for (int t = 0; t < 200; ++t) {
          auto cand = v;
          for (double& c : cand) c += 1e-3 * (2.0 * rng.uniform01() - 1.0);
          REQUIRE(base <= oracle::prox_objective(cand, x, sigma, qi) + 1e-12);
        }
      }
    }
  }
}

TEST_CASE("L2 shrinkage to zero happens iff ||x|| <= sigma") {
  Rng rng(41);
  for (int rep = 0; rep < 100; ++rep) {
    const auto x = random_vec(rng, 3, 2.0);
    const double sigma = 2.0 * rng.uniform01();
    const auto v = prox_norm(x, sigma, ProxKind::L2);
    const bool zero = std::all_of(v.begin(), v.end(),
                                  [](double t) { return t == 0.0; });
    REQUIRE(zero == (norm2({x.data(), x.size()}) <= sigma));
  }
}

TEST_CASE("prox(0) = 0 for every sigma and q") {
  const std::vector<double> zero(4, 0.0);
  for (ProxKind q : {ProxKind::L1, ProxKind::L2, ProxKind::Linf})
    for (double sigma : {0.0, 0.5, 100.0})
      REQUIRE(prox_norm(zero, sigma, q) == zero);
}

TEST_CASE("negative sigma is rejected") {
  REQUIRE_THROWS_AS(prox_norm(std::vector<double>{1.0}, -1.0, ProxKind::L2),
                    NegativeSigmaError);
}
