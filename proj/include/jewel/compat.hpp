#pragma once

#include <optional>
#include <vector>

#include "jewel/povm.hpp"
#include "jewel/sdp.hpp"

namespace jewel {

/// Row-major linearization of the joint-outcome multi-index
/// (j_1, ..., j_g) in [k_1] x ... x [k_g].
class JointIndex {
 public:
  explicit JointIndex(std::vector<int> shape);

  long total() const { return total_; }
  const std::vector<int>& shape() const { return shape_; }
  long linear(const std::vector<int>& idx) const;
  std::vector<int> unlinear(long lin) const;
  /// Component i of the multi-index behind linear index `lin`.
  int component(long lin, int i) const { return int(lin / strides_[i]) % shape_[i]; }

 private:
  std::vector<int> shape_;
  std::vector<long> strides_;
  long total_ = 1;
};

struct CompatVerdict {
  bool compatible = false;
  double margin = 0.0;  // max-margin value t*
  std::optional<Povm> joint;  // joint POVM over the linearized multi-index
  std::optional<Eigen::VectorXd> certificate;  // dual ray when incompatible
  double marginal_error = 0.0;  // re-verified reconstruction residual
};

/// Decides joint measurability by the phase-I margin SDP: maximize t subject
/// to G_eta - t I >= 0, the total-sum constraint, and the marginal equalities
/// (the last outcome of each POVM is implied). Compatible iff t* >= -tol.
CompatVerdict joint_feasibility(const MeasurementSet& set, double tol = 1e-7,
                                const SdpOptions& opts = {});

/// Directional noise robustness: the largest t in [0, 1/max_i a_i] such that
/// apply_noise with weights t*a leaves the set compatible. Solved as a single
/// SDP in which t enters every marginal equality affinely; `tol` is the
/// validation tolerance applied to the input set.
double robustness(const MeasurementSet& set, NoiseModel::Kind kind,
                  const Eigen::VectorXd& direction, double tol = 1e-7,
                  const SdpOptions& opts = {});

/// Independent oracle: bisection of joint_feasibility along the same ray.
double robustness_bisection(const MeasurementSet& set, NoiseModel::Kind kind,
                            const Eigen::VectorXd& direction,
                            double width = 1e-6, double feas_tol = 1e-7,
                            const SdpOptions& opts = {});

/// The Zhu operator G-bar(E) = |E°><E°| / tr E with E° = E - (tr E / d) I,
/// a rank <= 1 PSD matrix of size d^2; G-bar(0) = 0.
HMat gbar(const HMat& e);
HMat gbar(const Povm& p);  // sum over effects, zero effects skipped

struct ZhuResult {
  double value = 0.0;  // min tr H subject to H >= G-bar(E^(i)) for all i
  bool incompatible_certified = false;  // 1 + value > d + tol; one-sided
};

ZhuResult zhu_check(const MeasurementSet& set, double tol = 1e-7,
                    const SdpOptions& opts = {});

}  // namespace jewel
