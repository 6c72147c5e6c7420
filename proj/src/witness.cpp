#include "jewel/witness.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace jewel {

WitnessCandidate::WitnessCandidate(JewelShape s, std::vector<HMat> b)
    : shape(std::move(s)), blocks(std::move(b)) {
  if (static_cast<int>(blocks.size()) != shape.blocks())
    throw std::invalid_argument("WitnessCandidate: expected sum(k_i - 1) blocks");
  for (const HMat& blk : blocks)
    if (blk.dim() != blocks[0].dim())
      throw std::invalid_argument("WitnessCandidate: mixed block sizes");
}

WitnessCandidate WitnessCandidate::binary(std::vector<HMat> x) {
  JewelShape shape(std::vector<int>(x.size(), 2));
  return WitnessCandidate(std::move(shape), std::move(x));
}

bool WitnessCandidate::is_binary() const {
  for (int ki : shape.k())
    if (ki != 2) return false;
  return true;
}

bool WitnessCandidate::is_zero() const {
  for (const HMat& b : blocks)
    if (b.mat().cwiseAbs().maxCoeff() > 0.0) return false;
  return true;
}

bool is_witness_exact(const WitnessCandidate& x, double tol) {
  return jewel_membership(x.shape, x.blocks, tol).member;
}

bool is_witness_exact_serial(const WitnessCandidate& x, double tol) {
  return jewel_membership_serial(x.shape, x.blocks, tol).member;
}

double sdp_margin(const WitnessCandidate& x, const SdpOptions& opts) {
  if (x.is_zero()) return std::numeric_limits<double>::infinity();
  const Eigen::Index n = x.n();

  SdpProblem prob;
  std::vector<std::vector<int>> p_blocks(x.shape.groups());
  for (int s = 0; s < x.shape.groups(); ++s)
    for (int r = 0; r < x.shape.k()[s]; ++r)
      p_blocks[s].push_back(prob.add_block(static_cast<int>(n)));
  const int rho_blk = prob.add_block(1);

  std::vector<std::pair<int, double>> unital;
  for (const auto& group : p_blocks)
    for (int b : group) unital.emplace_back(b, 1.0);
  prob.add_matrix_equality(unital, {}, nullptr, CMat::Identity(n, n));

  int off = 0;
  for (int s = 0; s < x.shape.groups(); ++s) {
    const int k = x.shape.k()[s];
    for (int j = 0; j + 1 < k; ++j) {
      prob.add_matrix_equality(
          {{p_blocks[s][k - 1], k / 2.0}, {p_blocks[s][j], -k / 2.0}},
          {{rho_blk, CMat(-x.blocks[off + j].mat())}}, nullptr,
          CMat::Zero(n, n));
    }
    off += k - 1;
  }

  prob.sense = SdpSense::kMaximize;
  prob.add_objective(rho_blk, CMat::Ones(1, 1));
  SdpSolution sol = solve(prob, opts);
  if (sol.status != SdpStatus::kOptimal)
    throw std::runtime_error(std::string("sdp_margin: solver returned ") +
                             to_string(sol.status));
  return sol.x[rho_blk](0, 0).real();
}

const char* to_string(WitnessVerdict v) {
  switch (v) {
    case WitnessVerdict::kWitness: return "witness";
    case WitnessVerdict::kNotWitness: return "not_witness";
    case WitnessVerdict::kIndeterminate: return "indeterminate";
  }
  return "unknown";
}

WitnessClassification classify(const WitnessCandidate& x,
                               std::optional<double> theta, double tol,
                               const SdpOptions& opts) {
  WitnessClassification out;
  out.rho = sdp_margin(x, opts);
  if (x.is_binary()) {
    out.theta_used = theta.value_or(1.0 / std::sqrt(double(x.shape.groups())));
    if (out.rho >= 1.0 - tol)
      out.verdict = WitnessVerdict::kWitness;
    else if (out.rho < out.theta_used - tol)
      out.verdict = WitnessVerdict::kNotWitness;
    else
      out.verdict = WitnessVerdict::kIndeterminate;
  } else {
    // No inclusion constant is known for general cuboids.
    out.theta_used = 0.0;
    out.verdict = out.rho >= 1.0 - tol ? WitnessVerdict::kWitness
                                       : WitnessVerdict::kIndeterminate;
  }
  return out;
}

WitnessApplication apply_witness(const WitnessCandidate& x,
                                 const MeasurementSet& set, double tol) {
  if (!is_witness_exact(x, tol))
    throw std::invalid_argument("apply_witness: candidate fails the exact witness check");
  if (set.shape() != x.shape.k())
    throw std::invalid_argument("apply_witness: outcome shape mismatch");
  const Eigen::Index n = x.n();
  const Eigen::Index d = set.dim();
  CMat acc = CMat::Zero(d * n, d * n);
  int off = 0;
  for (int i = 0; i < set.size(); ++i) {
    const int k = set.povm(i).outcomes();
    for (int j = 0; j + 1 < k; ++j) {
      const HMat b =
          2.0 * set.povm(i).effect(j) - (2.0 / k) * HMat::identity(d);
      acc += kron(b, x.blocks[off + j]).mat();
    }
    off += k - 1;
  }
  WitnessApplication res;
  res.max_eig = acc.cwiseAbs().maxCoeff() == 0.0 ? 0.0 : eig_max(acc);
  res.certified_incompatible = res.max_eig > 1.0 + tol;
  return res;
}

WitnessCandidate planar_witness(int g) {
  if (g < 1) throw std::invalid_argument("planar_witness: g >= 1 required");
  const double lambda = std::sin(std::numbers::pi / (2.0 * g));
  std::vector<HMat> blocks;
  for (int j = 1; j <= g; ++j)
    blocks.push_back(lambda * planar_observable(g, j));
  return WitnessCandidate::binary(std::move(blocks));
}

}  // namespace jewel
