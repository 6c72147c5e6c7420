#pragma once

#include <optional>
#include <vector>

#include "jewel/spectra.hpp"

namespace jewel {

/// Candidate incompatibility witness: an element of the matrix jewel for the
/// given outcome shape (binary shape = (2, ..., 2) recovers the matrix
/// diamond). Blocks X_{i,j} share a common size n.
struct WitnessCandidate {
  JewelShape shape;
  std::vector<HMat> blocks;

  WitnessCandidate(JewelShape s, std::vector<HMat> b);
  static WitnessCandidate binary(std::vector<HMat> x);  // shape (2,...,2)

  Eigen::Index n() const { return blocks.empty() ? 0 : blocks[0].dim(); }
  bool is_binary() const;
  bool is_zero() const;
};

/// Exact membership in the jewel: prod k_i vertex inequalities (2^g sign
/// inequalities in the binary case).
bool is_witness_exact(const WitnessCandidate& x, double tol = 1e-9);
bool is_witness_exact_serial(const WitnessCandidate& x, double tol = 1e-9);

/// Matrix-cube / cuboid relaxation: the largest rho admitting a unital
/// positive map from the cuboid's commutative domain with Phi(y_{s,j}) =
/// rho X_{s,j}, i.e. blocks P_{s,r} >= 0, sum P = I, and
/// (k_s/2)(P_{s,k_s} - P_{s,j}) = rho X_{s,j}. rho >= 1 certifies the free
/// inclusion and hence the witness property; X = 0 reports +infinity.
double sdp_margin(const WitnessCandidate& x, const SdpOptions& opts = {});

enum class WitnessVerdict { kWitness, kNotWitness, kIndeterminate };

const char* to_string(WitnessVerdict v);

struct WitnessClassification {
  WitnessVerdict verdict = WitnessVerdict::kIndeterminate;
  double rho = 0.0;
  double theta_used = 0.0;
};

/// Classifies from the SDP margin alone. Binary shapes use the complex
/// matrix-cube inclusion constant theta (default g^{-1/2}): rho >= 1 is a
/// witness, rho < theta is not, anything between is indeterminate. Other
/// shapes have no known theta and degrade to witness/indeterminate.
WitnessClassification classify(const WitnessCandidate& x,
                               std::optional<double> theta = {},
                               double tol = 1e-7, const SdpOptions& opts = {});

struct WitnessApplication {
  double max_eig = 0.0;
  bool certified_incompatible = false;  // one-sided certificate
};

/// Evaluates sum_{i,j} (2 E_j^{(i)} - (2/k_i) I) (x) X_{i,j} against a
/// verified witness; a top eigenvalue above 1 certifies incompatibility.
/// Refuses candidates that fail the exact witness check.
WitnessApplication apply_witness(const WitnessCandidate& x,
                                 const MeasurementSet& set, double tol = 1e-9);

/// The planar-qubit family scaled to the witness boundary: blocks
/// sin(pi/(2g)) (cos(j pi/g) sigma_x + sin(j pi/g) sigma_y), j = 1..g.
WitnessCandidate planar_witness(int g);

}  // namespace jewel
