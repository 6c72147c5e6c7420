#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "jewel/rng.hpp"
#include "jewel/witness.hpp"

using namespace jewel;

namespace {

WitnessCandidate scaled_xy(double a) {
  return WitnessCandidate::binary({a * pauli_x(), a * pauli_y()});
}

WitnessCandidate random_binary(Rng& rng, int g, int n, double scale) {
  std::vector<HMat> blocks;
  for (int i = 0; i < g; ++i) blocks.push_back(rng.hermitian(n, scale));
  return WitnessCandidate::binary(std::move(blocks));
}

}  // namespace

TEST_CASE("scaled Pauli pair crosses the witness boundary at 1/sqrt(2)") {
  CHECK(is_witness_exact(scaled_xy(0.70)));
  CHECK(!is_witness_exact(scaled_xy(0.71)));
  CHECK(is_witness_exact(WitnessCandidate::binary(
      {HMat::zero(2), HMat::zero(2)})));
}

TEST_CASE("planar family is a witness exactly up to sin(pi/(2g))") {
  for (int g : {2, 3, 4}) {
    const double lambda = std::sin(std::numbers::pi / (2.0 * g));
    std::vector<HMat> at, above;
    for (int j = 1; j <= g; ++j) {
      at.push_back(lambda * planar_observable(g, j));
      above.push_back(1.02 * lambda * planar_observable(g, j));
    }
    CHECK(is_witness_exact(WitnessCandidate::binary(at)));
    CHECK(!is_witness_exact(WitnessCandidate::binary(above)));
  }
}

TEST_CASE("planar_witness sits on the boundary") {
  for (int g : {1, 2, 3, 5}) {
    const WitnessCandidate w = planar_witness(g);
    const Membership m = jewel_membership(w.shape, w.blocks);
    CHECK(m.member);
    CHECK(std::abs(m.slack) <= 1e-9);
  }
  const WitnessCandidate w2 = planar_witness(2);
  const double r = std::sin(std::numbers::pi / 4.0);
  CHECK((w2.blocks[0].mat() - (r * pauli_y()).mat()).norm() < 1e-12);
  CHECK((w2.blocks[1].mat() - (-r * pauli_x()).mat()).norm() < 1e-12);
  const WitnessCandidate w3 = planar_witness(3);
  CHECK(std::abs(0.5 * std::sqrt(w3.blocks[0].mat().squaredNorm() / 2.0) - 0.25) <
        1e-12);  // lambda = sin(pi/6) = 1/2, blocks norm sqrt(2)/2
  const WitnessCandidate w1 = planar_witness(1);
  CHECK((w1.blocks[0].mat() - (-1.0 * pauli_x()).mat()).norm() < 1e-12);
}

TEST_CASE("sdp margin on reference candidates") {
  CHECK(sdp_margin(WitnessCandidate::binary({pauli_z()})) ==
        doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sdp_margin(WitnessCandidate::binary({pauli_x(), pauli_y()})) ==
        doctest::Approx(0.5).epsilon(1e-6));
  CHECK(sdp_margin(scaled_xy(0.7)) ==
        doctest::Approx(1.0 / 1.4).epsilon(1e-5));
  CHECK(std::isinf(sdp_margin(
      WitnessCandidate::binary({HMat::zero(2), HMat::zero(2)}))));
}

TEST_CASE("sdp margin is homogeneous of degree -1") {
  Rng rng(42);
  const WitnessCandidate w = random_binary(rng, 2, 2, 0.6);
  const double base = sdp_margin(w);
  for (double c : {0.5, 2.0}) {
    WitnessCandidate scaled = w;
    for (HMat& b : scaled.blocks) b = c * b;
    CHECK(sdp_margin(scaled) == doctest::Approx(base / c).epsilon(1e-5));
  }
}

TEST_CASE("classification of the Pauli pair family") {
  const WitnessClassification not_w = classify(scaled_xy(1.0));
  CHECK(not_w.verdict == WitnessVerdict::kNotWitness);
  CHECK(not_w.rho == doctest::Approx(0.5).epsilon(1e-5));
  CHECK(not_w.theta_used == doctest::Approx(1.0 / std::sqrt(2.0)));

  const WitnessClassification wit = classify(scaled_xy(0.5));
  CHECK(wit.verdict == WitnessVerdict::kWitness);
  CHECK(wit.rho >= 1.0 - 1e-6);

  const WitnessClassification ind = classify(scaled_xy(0.7));
  CHECK(ind.verdict == WitnessVerdict::kIndeterminate);
  CHECK(ind.rho == doctest::Approx(1.0 / 1.4).epsilon(1e-4));
}

TEST_CASE("classification is consistent with the exact check") {
  Rng rng(1234);
  for (int trial = 0; trial < 40; ++trial) {
    const int g = 2 + (trial % 2);
    const int n = 2 + ((trial / 2) % 2);
    const WitnessCandidate w = random_binary(rng, g, n, 0.55);
    const bool exact = is_witness_exact(w);
    const WitnessClassification c = classify(w);
    if (c.verdict == WitnessVerdict::kWitness) CHECK(exact);
    if (exact) CHECK(c.rho >= 1.0 / std::sqrt(double(g)) - 1e-6);
    if (c.verdict == WitnessVerdict::kNotWitness) CHECK(!exact);
  }
}

TEST_CASE("general shapes classify witness or indeterminate only") {
  Rng rng(77);
  std::vector<HMat> blocks = {rng.hermitian(2, 0.1), rng.hermitian(2, 0.1),
                              rng.hermitian(2, 0.1)};
  const WitnessCandidate w(JewelShape({3, 2}), blocks);
  const WitnessClassification c = classify(w);
  CHECK((c.verdict == WitnessVerdict::kWitness ||
         c.verdict == WitnessVerdict::kIndeterminate));
}

TEST_CASE("planar witness certifies the orthogonal planar pair") {
  const WitnessApplication r =
      apply_witness(planar_witness(2), planar_qubit_set(2, {1.0, 1.0}));
  CHECK(r.max_eig == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
  CHECK(r.certified_incompatible);
}

TEST_CASE("witnesses never fire on trivial or compatible sets") {
  const WitnessApplication trivial =
      apply_witness(planar_witness(2), planar_qubit_set(2, {0.0, 0.0}));
  CHECK(trivial.max_eig == doctest::Approx(0.0));
  CHECK(!trivial.certified_incompatible);

  Rng rng(99);
  for (int trial = 0; trial < 10; ++trial) {
    const MeasurementSet set = apply_noise(
        random_set(2, {2, 2}, 1000 + trial),
        {NoiseModel::Kind::kBalanced, {0.4, 0.4}});
    REQUIRE(joint_feasibility(set).compatible);
    WitnessCandidate w = random_binary(rng, 2, 2, 0.4);
    if (!is_witness_exact(w)) continue;
    CHECK(!apply_witness(w, set).certified_incompatible);
  }
}

TEST_CASE("apply_witness refuses non-witnesses and shape mismatches") {
  CHECK_THROWS_AS(apply_witness(scaled_xy(1.0), planar_qubit_set(2, {1, 1})),
                  std::invalid_argument);
  CHECK_THROWS_AS(apply_witness(planar_witness(3), planar_qubit_set(2, {1, 1})),
                  std::invalid_argument);
}

TEST_CASE("planar sum bound holds for SDP-compatible planar sets") {
  Rng rng(31);
  for (int g : {2, 3}) {
    const double bound = 1.0 / std::sin(std::numbers::pi / (2.0 * g));
    for (int trial = 0; trial < 8; ++trial) {
      std::vector<double> t(g);
      double sum = 0.0;
      for (double& ti : t) {
        ti = rng.uniform();
        sum += ti;
      }
      const MeasurementSet set = planar_qubit_set(g, t);
      if (joint_feasibility(set).compatible) CHECK(sum <= bound + 1e-6);
    }
  }
}

TEST_CASE("exact sweep parallel/serial agreement") {
  Rng rng(55);
  for (int trial = 0; trial < 10; ++trial) {
    const WitnessCandidate w = random_binary(rng, 4, 2, 0.35);
    CHECK(is_witness_exact(w) == is_witness_exact_serial(w));
  }
}
