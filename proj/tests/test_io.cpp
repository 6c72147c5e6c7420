#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "jewel/io.hpp"
#include "jewel/rng.hpp"
#include "jewel/scan.hpp"

using namespace jewel;

TEST_CASE("complex matrices round-trip bit-exactly") {
  Rng rng(1);
  const HMat h = rng.hermitian(3);
  const Json j = to_json(h);
  const HMat back = hmat_from_json(j);
  CHECK((back.mat() - h.mat()).cwiseAbs().maxCoeff() == 0.0);
  CHECK(canonical_dump(to_json(back)) == canonical_dump(j));
}

TEST_CASE("canonical form is byte-stable across parse cycles") {
  const MeasurementSet set = random_set(3, {2, 3}, 99);
  const std::string s1 = canonical_dump(to_json(set));
  const std::string s2 =
      canonical_dump(to_json(set_from_json(Json::parse(s1))));
  CHECK(s1 == s2);
}

TEST_CASE("canonical form sorts keys and uses plain floats") {
  Json j;
  j["zeta"] = 0.5;
  j["alpha"] = 1;
  CHECK(canonical_dump(j) == "{\"alpha\":1,\"zeta\":0.5}");
  Json f = 1.0 / 3.0;
  CHECK(canonical_dump(f) == "0.33333333333333331");
}

TEST_CASE("measurement sets round-trip as values") {
  const MeasurementSet set = random_set(2, {2, 2, 3}, 7);
  const MeasurementSet back = set_from_json(to_json(set));
  REQUIRE(back.size() == set.size());
  for (int i = 0; i < set.size(); ++i)
    for (int j = 0; j < set.povm(i).outcomes(); ++j)
      CHECK((back.povm(i).effect(j).mat() - set.povm(i).effect(j).mat())
                .cwiseAbs()
                .maxCoeff() == 0.0);
}

TEST_CASE("witness candidates round-trip") {
  const WitnessCandidate w = planar_witness(3);
  const WitnessCandidate back = witness_from_json(to_json(w));
  CHECK(back.shape.k() == w.shape.k());
  for (size_t i = 0; i < w.blocks.size(); ++i)
    CHECK((back.blocks[i].mat() - w.blocks[i].mat()).cwiseAbs().maxCoeff() ==
          0.0);
  CHECK(canonical_dump(to_json(back)) == canonical_dump(to_json(w)));
}

TEST_CASE("free tuples round-trip and detect diagonality") {
  const FreeTuple t = jewel_tuple(JewelShape({2, 3}));
  const FreeTuple back = tuple_from_json(to_json(t));
  CHECK(back.dimD == t.dimD);
  CHECK(back.diagonal);
  for (size_t i = 0; i < t.matrices.size(); ++i)
    CHECK((back.matrices[i].mat() - t.matrices[i].mat()).cwiseAbs().maxCoeff() ==
          0.0);
}

TEST_CASE("parse errors name the offending path") {
  Json j = to_json(random_set(2, {2}, 1));
  j["povms"][0]["effects"][1][0][1] = Json::array({1.0});  // broken scalar
  try {
    set_from_json(j);
    FAIL("expected a parse failure");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("$.povms[0].effects[1][0][1]") != std::string::npos);
  }

  Json missing = Json::object();
  missing["dim"] = 2;
  try {
    set_from_json(missing);
    FAIL("expected a parse failure");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("$.povms") != std::string::npos);
  }
}

TEST_CASE("dimension mismatches are reported with their path") {
  Json j = to_json(random_set(2, {2, 2}, 3));
  j["povms"][1]["dim"] = 3;
  try {
    set_from_json(j);
    FAIL("expected a failure");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("$.povms[1]") != std::string::npos);
  }
}

TEST_CASE("verdict serialization carries the joint POVM on demand") {
  const MeasurementSet set = apply_noise(
      mub_povms(2, 2), {NoiseModel::Kind::kBalanced, {0.5, 0.5}});
  const CompatVerdict v = joint_feasibility(set);
  const Json with_joint = to_json(v, true);
  CHECK(with_joint["compatible"].get<bool>());
  CHECK(with_joint.contains("joint"));
  const Json without = to_json(v, false);
  CHECK(!without.contains("joint"));
  const Povm joint = povm_from_json(with_joint["joint"]);
  CHECK(joint.outcomes() == 4);
}

TEST_CASE("region scan CSV has the documented row count") {
  const MeasurementSet set = mub_povms(2, 2);
  ScanOptions opts;
  opts.n_random = 3;
  opts.seed = 5;
  const RegionScan scan = region_scan(set, opts);
  REQUIRE(scan.rows.size() == 3 + 2 + 1);  // randoms + axes + symmetric
  std::ostringstream os;
  write_csv(scan, os);
  const std::string csv = os.str();
  int newlines = 0;
  for (char c : csv) newlines += c == '\n';
  CHECK(newlines == 2 + 6);  // comment + header + rows
  CHECK(csv.find("# seed=5 model=balanced") == 0);
  CHECK(csv.find("bound_cloning") != std::string::npos);
}

TEST_CASE("scan rows are deterministic and ordered") {
  const MeasurementSet set = mub_povms(2, 2);
  ScanOptions a, b;
  a.n_random = b.n_random = 2;
  a.seed = b.seed = 11;
  b.parallel = false;
  const RegionScan sa = region_scan(set, a);
  const RegionScan sb = region_scan(set, b);
  REQUIRE(sa.rows.size() == sb.rows.size());
  for (size_t i = 0; i < sa.rows.size(); ++i) {
    CHECK((sa.rows[i].direction - sb.rows[i].direction).norm() == 0.0);
    CHECK(sa.rows[i].t_star == doctest::Approx(sb.rows[i].t_star).epsilon(1e-7));
  }
  // axis directions leave one POVM untouched and erase the other: t* = 1
  CHECK(sa.rows[0].t_star == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(sa.rows[1].t_star == doctest::Approx(1.0).epsilon(1e-6));
  // symmetric direction lands on the closed-form boundary point
  const double sym = sa.rows[2].s(0);
  CHECK(sym == doctest::Approx(0.707107).epsilon(1e-3));
}

TEST_CASE("a single POVM scans to the cap along its only axis") {
  const MeasurementSet single = random_set(3, {3}, 4);
  ScanOptions opts;
  opts.n_random = 2;
  const RegionScan scan = region_scan(single, opts);
  REQUIRE(scan.rows.size() == 4);  // axis + symmetric + 2 randoms, all equal
  for (const ScanRow& row : scan.rows)
    CHECK(row.t_star == doctest::Approx(1.0).epsilon(1e-6));
}
