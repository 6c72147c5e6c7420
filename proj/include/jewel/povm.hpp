#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "jewel/hermitian.hpp"

namespace jewel {

inline constexpr double kValidateTol = 1e-8;

HMat pauli_x();
HMat pauli_y();
HMat pauli_z();

/// Ordered list of effect operators on C^dim. Construction checks structure
/// (matching dimensions, at least one outcome); semantic validity (PSD
/// effects summing to the identity) is checked by validate().
class Povm {
 public:
  Povm(Eigen::Index dim, std::vector<HMat> effects);

  Eigen::Index dim() const { return dim_; }
  int outcomes() const { return static_cast<int>(effects_.size()); }
  const HMat& effect(int j) const { return effects_[j]; }
  const std::vector<HMat>& effects() const { return effects_; }

 private:
  Eigen::Index dim_;
  std::vector<HMat> effects_;
};

struct ValidationReport {
  struct EffectIssue {
    int index;
    double min_eig;             // of the effect
    double complement_min_eig;  // of I - effect
  };
  std::vector<EffectIssue> effect_issues;
  double sum_deviation = 0.0;  // ||sum_j E_j - I||_F
  bool sum_ok = true;

  bool valid() const { return effect_issues.empty() && sum_ok; }
  std::string describe() const;
};

ValidationReport validate(const Povm& p, double tol = kValidateTol);

/// g POVMs of common dimension; the outcome shape k = (k_1, ..., k_g) is
/// derived from the members.
class MeasurementSet {
 public:
  explicit MeasurementSet(std::vector<Povm> povms);

  Eigen::Index dim() const { return dim_; }
  int size() const { return static_cast<int>(povms_.size()); }
  const Povm& povm(int i) const { return povms_[i]; }
  const std::vector<Povm>& povms() const { return povms_; }
  std::vector<int> shape() const;

 private:
  Eigen::Index dim_;
  std::vector<Povm> povms_;
};

ValidationReport validate(const MeasurementSet& set, double tol = kValidateTol);

struct NoiseModel {
  enum class Kind { kBalanced, kLinear };
  Kind kind = Kind::kBalanced;
  std::vector<double> weights;  // s_i in [0, 1], one per POVM
};

/// Balanced: E -> s E + (1-s) I/k.  Linear: E -> s E + (1-s) (tr E / d) I.
MeasurementSet apply_noise(const MeasurementSet& set, const NoiseModel& model);
Povm apply_noise(const Povm& p, NoiseModel::Kind kind, double weight);

/// Merges outcomes along a partition of [0, k) into disjoint groups.
Povm coarse_grain(const Povm& p, const std::vector<std::vector<int>>& partition);

/// Appends k' - k zero effects.
Povm pad_outcomes(const Povm& p, int k_prime);
MeasurementSet pad_outcomes(const MeasurementSet& set, const std::vector<int>& k_prime);

/// Conjugates every effect by an isometry V (d x l, V^*V = I): E -> V^* E V.
MeasurementSet compress(const MeasurementSet& set, const CMat& v,
                        double tol = 1e-9);

/// F_j = E_j (+) E_{j+1} (+) ... (+) E_{j+k-1} with cyclic indices; the lifted
/// effects act on C^{kd} and satisfy tr F_j = d, so balanced and linear noise
/// coincide on the lift.
Povm cyclic_lift(const Povm& p);

/// Rank-1 projective POVMs of `count` mutually unbiased bases of C^d.
/// count = 2 works for every d (computational + Fourier basis); count up to
/// d+1 requires d prime (quadratic-phase construction, Pauli bases for d=2).
MeasurementSet mub_povms(int d, int count);
int max_mub_count(int d);

/// Binary qubit POVMs with effects (I + t_j X_j)/2 for the planar observables
/// X_j = cos(j pi / g) sigma_x + sin(j pi / g) sigma_y, j = 1..g.
MeasurementSet planar_qubit_set(int g, const std::vector<double>& t);
HMat planar_observable(int g, int j);  // X_j, 1-based j

/// Seeded random set: each POVM from independent Ginibre factors,
/// E_j = S^{-1/2} G_j G_j^* S^{-1/2} with S = sum_j G_j G_j^*.
MeasurementSet random_set(int d, const std::vector<int>& shape,
                          std::uint64_t seed);

// POVM <-> reduced tuple (drop / reconstruct the last effect) <-> the
// spectrahedral tuple B_j = 2 E_j - (2/k) I. All affine bijections.
std::vector<HMat> reduced_effects(const Povm& p);
Povm povm_from_reduced(Eigen::Index dim, const std::vector<HMat>& reduced);
std::vector<HMat> povm_to_tuple(const Povm& p);
Povm povm_from_tuple(int k, const std::vector<HMat>& tuple);

}  // namespace jewel
