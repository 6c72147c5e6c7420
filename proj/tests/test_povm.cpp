#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "jewel/povm.hpp"
#include "jewel/rng.hpp"

using namespace jewel;

namespace {

Povm z_basis_qubit() {
  Eigen::VectorXd e0(2), e1(2);
  e0 << 1, 0;
  e1 << 0, 1;
  return Povm(2, {HMat::diagonal(e0), HMat::diagonal(e1)});
}

Povm trivial_povm(int d, int k) {
  std::vector<HMat> effects(k, (1.0 / k) * HMat::identity(d));
  return Povm(d, std::move(effects));
}

double max_cross_gram_error(const Povm& a, const Povm& b, int d) {
  // both rank-1 projective; |<psi,phi>|^2 = tr(E F)
  double worst = 0.0;
  for (const HMat& e : a.effects())
    for (const HMat& f : b.effects())
      worst = std::max(worst,
                       std::abs((e.mat() * f.mat()).trace().real() - 1.0 / d));
  return worst;
}

}  // namespace

TEST_CASE("validate accepts the Z basis and trivial POVMs") {
  CHECK(validate(z_basis_qubit()).valid());
  CHECK(validate(trivial_povm(3, 3)).valid());
  CHECK(validate(trivial_povm(5, 3)).valid());
}

TEST_CASE("validate flags effects outside [0, I]") {
  Eigen::VectorXd v(2);
  v << 1.2, 0.0;
  const HMat e1 = HMat::diagonal(v);
  const Povm bad(2, {e1, HMat::identity(2) - e1});
  const ValidationReport rep = validate(bad);
  CHECK(!rep.valid());
  REQUIRE(rep.effect_issues.size() == 2);
  CHECK(rep.effect_issues[0].complement_min_eig < -1e-8);  // E1 not <= I
  CHECK(rep.effect_issues[1].min_eig < -1e-8);             // E2 not >= 0
}

TEST_CASE("balanced noise formulas") {
  const Povm z = z_basis_qubit();
  const Povm noisy = apply_noise(z, NoiseModel::Kind::kBalanced, 0.5);
  CHECK(std::abs(noisy.effect(0)(0, 0) - 0.75) < 1e-15);
  CHECK(std::abs(noisy.effect(0)(1, 1) - 0.25) < 1e-15);
  CHECK(std::abs(noisy.effect(1)(0, 0) - 0.25) < 1e-15);
  CHECK(std::abs(noisy.effect(1)(1, 1) - 0.75) < 1e-15);
}

TEST_CASE("noise weight 1 is the identity map, weight 0 erases the POVM") {
  const MeasurementSet set = random_set(3, {2, 3}, 5);
  const MeasurementSet same =
      apply_noise(set, {NoiseModel::Kind::kBalanced, {1.0, 1.0}});
  for (int i = 0; i < set.size(); ++i)
    for (int j = 0; j < set.povm(i).outcomes(); ++j)
      CHECK((same.povm(i).effect(j).mat() - set.povm(i).effect(j).mat())
                .norm() < 1e-14);
  const MeasurementSet flat =
      apply_noise(set, {NoiseModel::Kind::kBalanced, {0.0, 0.0}});
  for (int i = 0; i < set.size(); ++i)
    for (int j = 0; j < flat.povm(i).outcomes(); ++j) {
      const int k = flat.povm(i).outcomes();
      CHECK((flat.povm(i).effect(j).mat() -
             CMat::Identity(3, 3) / double(k))
                .norm() < 1e-14);
    }
}

TEST_CASE("balanced noise composes as a product of weights") {
  const MeasurementSet set = random_set(2, {3, 2}, 9);
  const MeasurementSet twice = apply_noise(
      apply_noise(set, {NoiseModel::Kind::kBalanced, {0.8, 0.5}}),
      {NoiseModel::Kind::kBalanced, {0.25, 0.6}});
  const MeasurementSet direct =
      apply_noise(set, {NoiseModel::Kind::kBalanced, {0.2, 0.3}});
  for (int i = 0; i < set.size(); ++i)
    for (int j = 0; j < set.povm(i).outcomes(); ++j)
      CHECK((twice.povm(i).effect(j).mat() - direct.povm(i).effect(j).mat())
                .norm() < 1e-14);
}

TEST_CASE("noise weights outside [0,1] are rejected") {
  CHECK_THROWS_AS(apply_noise(z_basis_qubit(), NoiseModel::Kind::kBalanced, 1.2),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_noise(z_basis_qubit(), NoiseModel::Kind::kLinear, -0.1),
                  std::invalid_argument);
}

TEST_CASE("coarse graining merges outcome groups") {
  Eigen::VectorXd a(3), b(3), c(3);
  a << 1, 0, 0;
  b << 0, 1, 0;
  c << 0, 0, 1;
  const Povm z3(3, {HMat::diagonal(a), HMat::diagonal(b), HMat::diagonal(c)});
  const Povm merged = coarse_grain(z3, {{0, 1}, {2}});
  REQUIRE(merged.outcomes() == 2);
  Eigen::VectorXd m0(3), m1(3);
  m0 << 1, 1, 0;
  m1 << 0, 0, 1;
  CHECK((merged.effect(0).mat() - HMat::diagonal(m0).mat()).norm() == 0.0);
  CHECK((merged.effect(1).mat() - HMat::diagonal(m1).mat()).norm() == 0.0);

  const Povm same = coarse_grain(z3, {{0}, {1}, {2}});
  for (int j = 0; j < 3; ++j)
    CHECK((same.effect(j).mat() - z3.effect(j).mat()).norm() == 0.0);

  const Povm all = coarse_grain(z3, {{0, 1, 2}});
  CHECK((all.effect(0).mat() - CMat::Identity(3, 3)).norm() == 0.0);
}

TEST_CASE("coarse graining rejects bad partitions") {
  const Povm z = z_basis_qubit();
  CHECK_THROWS_AS(coarse_grain(z, {{0, 0}, {1}}), std::invalid_argument);
  CHECK_THROWS_AS(coarse_grain(z, {{0}}), std::invalid_argument);
  CHECK_THROWS_AS(coarse_grain(z, {{0}, {1, 2}}), std::invalid_argument);
}

TEST_CASE("padding appends zero effects and preserves validity") {
  const Povm padded = pad_outcomes(z_basis_qubit(), 3);
  REQUIRE(padded.outcomes() == 3);
  CHECK(padded.effect(2).mat().norm() == 0.0);
  CHECK(validate(padded).valid());
  const Povm same = pad_outcomes(z_basis_qubit(), 2);
  CHECK(same.outcomes() == 2);
  CHECK_THROWS_AS(pad_outcomes(z_basis_qubit(), 1), std::invalid_argument);
}

TEST_CASE("structural transforms preserve validity on random sets") {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const MeasurementSet set = random_set(3, {3, 2}, seed);
    CHECK(validate(coarse_grain(set.povm(0), {{0, 2}, {1}})).valid());
    CHECK(validate(pad_outcomes(set.povm(1), 4)).valid());
    Rng rng(seed + 100);
    const MeasurementSet small = compress(set, rng.isometry(3, 2));
    CHECK(validate(small).valid());
    CHECK(small.dim() == 2);
  }
}

TEST_CASE("compress with the identity is trivial; selectors project") {
  const MeasurementSet set({z_basis_qubit()});
  const MeasurementSet same = compress(set, CMat::Identity(2, 2));
  CHECK((same.povm(0).effect(0).mat() - set.povm(0).effect(0).mat()).norm() ==
        0.0);
  CMat sel(2, 1);
  sel << 1, 0;
  const MeasurementSet scalar = compress(set, sel);
  CHECK(scalar.dim() == 1);
  CHECK(std::abs(scalar.povm(0).effect(0)(0, 0) - 1.0) < 1e-15);
  CHECK(std::abs(scalar.povm(0).effect(1)(0, 0)) < 1e-15);
}

TEST_CASE("compress rejects non-isometries") {
  CMat bad(2, 2);
  bad << 1, 0, 0, 2;
  CHECK_THROWS_AS(compress(MeasurementSet({z_basis_qubit()}), bad),
                  std::invalid_argument);
}

TEST_CASE("cyclic lift of the Z basis") {
  const Povm lifted = cyclic_lift(z_basis_qubit());
  REQUIRE(lifted.dim() == 4);
  Eigen::VectorXd f1(4), f2(4);
  f1 << 1, 0, 0, 1;
  f2 << 0, 1, 1, 0;
  CHECK((lifted.effect(0).mat() - HMat::diagonal(f1).mat()).norm() == 0.0);
  CHECK((lifted.effect(1).mat() - HMat::diagonal(f2).mat()).norm() == 0.0);
  CHECK(validate(lifted).valid());
}

TEST_CASE("cyclic lift has flat traces, so both noise models coincide") {
  const MeasurementSet set = random_set(3, {4}, 77);
  const Povm lifted = cyclic_lift(set.povm(0));
  CHECK(validate(lifted).valid());
  for (const HMat& f : lifted.effects())
    CHECK(std::abs(f.mat().trace().real() - 3.0) < 1e-12);
  const Povm trivial_lift = cyclic_lift(trivial_povm(2, 3));
  for (const HMat& f : trivial_lift.effects())
    CHECK((f.mat() - CMat::Identity(6, 6) / 3.0).norm() < 1e-14);
}

TEST_CASE("mub pair in dimension 2 is the Z and X bases") {
  const MeasurementSet set = mub_povms(2, 2);
  CHECK((set.povm(0).effect(0).mat() - z_basis_qubit().effect(0).mat()).norm() <
        1e-15);
  const HMat x_plus = 0.5 * (HMat::identity(2) + pauli_x());
  CHECK((set.povm(1).effect(0).mat() - x_plus.mat()).norm() < 1e-12);
  CHECK(max_cross_gram_error(set.povm(0), set.povm(1), 2) < 1e-10);
}

TEST_CASE("mub pair in dimension 3 is unbiased") {
  const MeasurementSet set = mub_povms(3, 2);
  CHECK(validate(set).valid());
  CHECK(max_cross_gram_error(set.povm(0), set.povm(1), 3) < 1e-10);
}

TEST_CASE("four mutually unbiased bases in dimension 3") {
  const MeasurementSet set = mub_povms(3, 4);
  CHECK(validate(set, 1e-10).valid());
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      CHECK(max_cross_gram_error(set.povm(i), set.povm(j), 3) < 1e-10);
}

TEST_CASE("three Pauli bases for qubits; unsupported counts rejected") {
  const MeasurementSet set = mub_povms(2, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      CHECK(max_cross_gram_error(set.povm(i), set.povm(j), 2) < 1e-12);
  CHECK_THROWS_AS(mub_povms(2, 4), std::invalid_argument);
  CHECK_THROWS_AS(mub_povms(4, 3), std::invalid_argument);
  CHECK(mub_povms(5, 6).size() == 6);
}

TEST_CASE("planar qubit effects at full strength") {
  const MeasurementSet set = planar_qubit_set(2, {1.0, 1.0});
  const HMat e1 = 0.5 * (HMat::identity(2) + pauli_y());
  const HMat e2 = 0.5 * (HMat::identity(2) - pauli_x());
  CHECK((set.povm(0).effect(0).mat() - e1.mat()).norm() < 1e-12);
  CHECK((set.povm(1).effect(0).mat() - e2.mat()).norm() < 1e-12);
}

TEST_CASE("planar qubit set at t = 0 is trivial") {
  const MeasurementSet set = planar_qubit_set(3, {0.0, 0.0, 0.0});
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 2; ++j)
      CHECK((set.povm(i).effect(j).mat() - 0.5 * CMat::Identity(2, 2)).norm() <
            1e-15);
}

TEST_CASE("trine effects are rank-1 projectors") {
  const MeasurementSet set = planar_qubit_set(3, {1.0, 1.0, 1.0});
  for (int i = 0; i < 3; ++i) {
    const CMat e = set.povm(i).effect(0).mat();
    CHECK((e * e - e).norm() < 1e-12);  // idempotent at |t| = 1
  }
}

TEST_CASE("random sets are reproducible and valid") {
  const MeasurementSet a = random_set(3, {2, 3}, 12345);
  const MeasurementSet b = random_set(3, {2, 3}, 12345);
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < a.povm(i).outcomes(); ++j)
      CHECK((a.povm(i).effect(j).mat() - b.povm(i).effect(j).mat()).norm() ==
            0.0);
  for (std::uint64_t seed = 0; seed < 1000; ++seed)
    CHECK(validate(random_set(2, {3}, seed)).valid());
}

TEST_CASE("random effects average to the trivial POVM") {
  const int draws = 2000;
  CMat mean = CMat::Zero(2, 2);
  for (int s = 0; s < draws; ++s)
    mean += random_set(2, {2}, 50000 + s).povm(0).effect(0).mat();
  mean /= draws;
  CHECK((mean - 0.5 * CMat::Identity(2, 2)).cwiseAbs().maxCoeff() < 0.05);
}

TEST_CASE("povm to spectrahedral tuple and back") {
  const std::vector<HMat> tuple = povm_to_tuple(z_basis_qubit());
  REQUIRE(tuple.size() == 1);
  CHECK((tuple[0].mat() - pauli_z().mat()).norm() == 0.0);

  const std::vector<HMat> trivial_tuple = povm_to_tuple(trivial_povm(2, 3));
  for (const HMat& b : trivial_tuple) CHECK(b.mat().norm() == 0.0);

  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Povm p = random_set(3, {4}, seed).povm(0);
    const Povm back = povm_from_tuple(4, povm_to_tuple(p));
    for (int j = 0; j < 4; ++j)
      CHECK((back.effect(j).mat() - p.effect(j).mat()).cwiseAbs().maxCoeff() <
            1e-14);
    const Povm back2 = povm_from_reduced(3, reduced_effects(p));
    for (int j = 0; j < 4; ++j)
      CHECK((back2.effect(j).mat() - p.effect(j).mat()).cwiseAbs().maxCoeff() <
            1e-14);
  }
}
