#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "jewel/bounds.hpp"
#include "jewel/compat.hpp"
#include "jewel/rng.hpp"

using namespace jewel;

namespace {

Eigen::VectorXd vec2(double a, double b) {
  Eigen::VectorXd v(2);
  v << a, b;
  return v;
}

double cloning_symmetric(int g, int d_eff) {
  return (g + double(d_eff)) / (g * (1.0 + d_eff));
}

}  // namespace

TEST_CASE("cloning region boundary at g = d = 2") {
  // LHS = RHS = 12 at s = (2/3, 2/3), evaluated at effective dimension 2
  const RegionParams params{2, 2, {}};
  CHECK(region_contains(Region::kCloning, vec2(2.0 / 3, 2.0 / 3), params));
  CHECK(!region_contains(Region::kCloning, vec2(2.0 / 3 + 1e-6, 2.0 / 3 + 1e-6),
                         params));
  CHECK(region_contains(Region::kCloning,
                        Eigen::VectorXd::Constant(2, cloning_symmetric(2, 2)),
                        params));
}

TEST_CASE("mub pair boundary in dimension 2 is the circle") {
  const RegionParams params{2, 2, {}};
  const double r = 0.7071;
  CHECK(region_contains(Region::kMubPair, vec2(r - 1e-4, r - 1e-4), params));
  CHECK(!region_contains(Region::kMubPair, vec2(r + 1e-4, r + 1e-4), params));
  CHECK(std::abs(mub_pair_boundary(1.0 / std::sqrt(2.0), 2) -
                 1.0 / std::sqrt(2.0)) < 1e-12);
}

TEST_CASE("qc region membership") {
  const RegionParams params{2, 2, {}};
  CHECK(region_contains(Region::kQc, vec2(1.0, 0.0), params));
  CHECK(!region_contains(Region::kQc, vec2(1.0, 0.01), params));
}

TEST_CASE("the two mub pair forms agree on a dense grid") {
  for (int d = 2; d <= 6; ++d) {
    const RegionParams params{2, d, {}};
    for (int i = 0; i < 100; ++i)
      for (int j = 0; j < 100; ++j)  // region_contains asserts the two forms
        region_contains(Region::kMubPair, vec2(i / 99.0, j / 99.0), params);
  }
  CHECK(true);
}

TEST_CASE("diamond-scaled region and its symmetric point") {
  const std::vector<int> k{3, 3};
  const RegionParams params{2, 2, k};
  const double s = 1.0 / (4.0 * std::sqrt(4.0));  // 1/((k-1)^2 sqrt(sum(k-1)))
  CHECK(region_contains(Region::kDiamondScaled,
                        Eigen::VectorXd::Constant(2, s), params));
  CHECK(!region_contains(Region::kDiamondScaled,
                         Eigen::VectorXd::Constant(2, s * 1.01), params));
}

TEST_CASE("diamond and cloning predicates are antitone in k") {
  Rng rng(8);
  const std::vector<std::vector<int>> shapes{{2, 2}, {2, 3}, {3, 3}, {3, 4}};
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::VectorXd s = vec2(0.4 * rng.uniform(), 0.4 * rng.uniform());
    for (size_t a = 0; a < shapes.size(); ++a)
      for (size_t b = a + 1; b < shapes.size(); ++b) {
        if (shapes[a][0] > shapes[b][0] || shapes[a][1] > shapes[b][1]) continue;
        const RegionParams small{2, 2, shapes[a]};
        const RegionParams big{2, 2, shapes[b]};
        if (region_contains(Region::kDiamondScaled, s, big))
          CHECK(region_contains(Region::kDiamondScaled, s, small));
        const int d_small = 2 * shapes[a][1];
        const int d_big = 2 * shapes[b][1];
        if (region_contains(Region::kCloning, s, RegionParams{2, d_big, {}}))
          CHECK(region_contains(Region::kCloning, s,
                                RegionParams{2, d_small, {}}));
      }
  }
}

TEST_CASE("report for two binary qubit POVMs") {
  const BoundReport rep = bound_report(2, 2, {2, 2});
  CHECK(rep.cloning_symmetric == doctest::Approx(0.6).epsilon(1e-12));
  CHECK(rep.symmetrization_point(0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(rep.diamond_qc_symmetric ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(rep.binary_qc.applicable);
  CHECK(rep.binary_qc.value == doctest::Approx(1.0 / std::sqrt(2.0)));
  CHECK(rep.mub_zhu.applicable);
  CHECK(rep.mub_designolle.value ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  CHECK(rep.planar_symmetric.applicable);
  CHECK(rep.planar_symmetric.value ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("report for three binary qubit POVMs") {
  const BoundReport rep = bound_report(3, 2, {2, 2, 2});
  CHECK(rep.cloning_symmetric == doctest::Approx(7.0 / 15).epsilon(1e-12));
  CHECK(rep.planar_symmetric.applicable);
  CHECK(rep.planar_symmetric.value == doctest::Approx(2.0 / 3).epsilon(1e-12));
}

TEST_CASE("report for two qutrit trine-outcome POVMs") {
  const BoundReport rep = bound_report(2, 3, {3, 3});
  CHECK(rep.cloning_symmetric == doctest::Approx(0.55).epsilon(1e-12));
  CHECK(rep.mub_designolle.applicable);
  CHECK(rep.mub_designolle.value ==
        doctest::Approx((std::sqrt(3.0) + 2) / (2 * (std::sqrt(3.0) + 1)))
            .epsilon(1e-12));
  CHECK(!rep.planar_symmetric.applicable);
  CHECK(rep.symmetrization_point(0) ==
        doctest::Approx(1.0 / 12).epsilon(1e-12));
}

TEST_CASE("inapplicable bounds carry reasons") {
  const BoundReport rep = bound_report(4, 2, {2, 2, 2, 2});
  CHECK(!rep.binary_qc.applicable);  // needs d >= 2^ceil(3/2) = 4
  CHECK(!rep.binary_qc.note.empty());
  CHECK(!rep.mub_zhu.applicable);  // only 3 mutually unbiased bases for d = 2
}

TEST_CASE("cloning beats the diamond bound for k = d >= 3, loses for qubits") {
  for (int d : {3, 4, 5})
    for (int g : {2, 3, 4, 5, 6}) {
      const BoundReport rep = bound_report(g, d, std::vector<int>(g, d));
      CHECK(rep.cloning_symmetric > rep.diamond_qc_symmetric);
    }
  for (int g : {2, 3, 4, 5}) {
    const BoundReport rep = bound_report(g, 2, std::vector<int>(g, 2));
    CHECK(rep.diamond_qc_symmetric > rep.cloning_symmetric);
  }
}

TEST_CASE("sampled lower bounds are SDP-compatible") {
  for (int g : {2, 3})
    for (int d : {2, 3})
      for (int k : {2, 3}) {
        const std::vector<int> shape(g, k);
        const BoundReport rep = bound_report(g, d, shape);
        for (std::uint64_t seed = 1; seed <= 2; ++seed) {
          const MeasurementSet set =
              random_set(d, shape, seed + 31 * g + 7 * d + k);
          for (double s :
               {rep.cloning_symmetric, rep.symmetrization_point(0),
                rep.diamond_qc_symmetric}) {
            const MeasurementSet noised = apply_noise(
                set, {NoiseModel::Kind::kBalanced,
                      std::vector<double>(g, s)});
            CHECK(joint_feasibility(noised).margin >= -1e-7);
          }
        }
      }
}

TEST_CASE("MUB robustness never exceeds the Designolle bound") {
  const std::vector<std::pair<int, int>> cases{{2, 3}, {3, 3}, {3, 4}};
  for (auto [d, g] : cases) {
    const double bound =
        (std::sqrt(double(d)) + g) / (g * (std::sqrt(double(d)) + 1.0));
    const double t = robustness(mub_povms(d, g), NoiseModel::Kind::kBalanced,
                                Eigen::VectorXd::Ones(g));
    CHECK(t <= bound + 1e-4);
  }
}

TEST_CASE("MUB directional robustness stays inside the Zhu ball") {
  Rng rng(5);
  for (int d : {2, 3}) {
    for (int trial = 0; trial < 3; ++trial) {
      Eigen::VectorXd u(2);
      u << 0.3 + rng.uniform(), 0.3 + rng.uniform();
      u /= u.norm();
      const double t =
          robustness(mub_povms(d, 2), NoiseModel::Kind::kBalanced, u);
      CHECK((t * u).squaredNorm() <= 1.0 + 1e-6);
    }
  }
  const double t3 = robustness(mub_povms(3, 3), NoiseModel::Kind::kBalanced,
                               Eigen::VectorXd::Ones(3));
  CHECK(3.0 * t3 * t3 <= 1.0 + 1e-6);
}

TEST_CASE("ray boundaries match the symmetric closed forms") {
  const RegionParams params{2, 4, {2, 2}};
  const Eigen::VectorXd sym = Eigen::VectorXd::Constant(2, 1.0);
  const double t =
      region_ray_boundary(Region::kCloning, sym, params);
  CHECK(t == doctest::Approx(cloning_symmetric(2, 4)).epsilon(1e-7));
  const double tq = region_ray_boundary(Region::kQc, sym, RegionParams{2, 2, {}});
  CHECK(tq == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-7));
}

TEST_CASE("bound_report rejects invalid input") {
  CHECK_THROWS_AS(bound_report(2, 2, {2}), std::invalid_argument);
  CHECK_THROWS_AS(bound_report(2, 2, {2, 1}), std::invalid_argument);
  CHECK_THROWS_AS(bound_report(2, 1, {2, 2}), std::invalid_argument);
}

TEST_CASE("bound table renders") {
  const std::string table = bound_table(bound_report(2, 2, {2, 2}));
  CHECK(table.find("0.707107") != std::string::npos);
  CHECK(table.find("cloning") != std::string::npos);
}
