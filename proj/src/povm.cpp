#include "jewel/povm.hpp"

#include <cmath>
#include <numbers>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "jewel/rng.hpp"

namespace jewel {

namespace {

bool is_prime(int n) {
  if (n < 2) return false;
  for (int p = 2; p * p <= n; ++p)
    if (n % p == 0) return false;
  return true;
}

Povm basis_to_povm(const CMat& basis) {
  const Eigen::Index d = basis.rows();
  std::vector<HMat> effects;
  effects.reserve(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const CVec v = basis.col(j);
    effects.push_back(HMat::symmetrized(v * v.adjoint()));
  }
  return Povm(d, std::move(effects));
}

}  // namespace

HMat pauli_x() {
  CMat m(2, 2);
  m << 0, 1, 1, 0;
  return HMat::symmetrized(m);
}

HMat pauli_y() {
  CMat m(2, 2);
  m << Complex(0, 0), Complex(0, -1), Complex(0, 1), Complex(0, 0);
  return HMat::symmetrized(m);
}

HMat pauli_z() {
  CMat m(2, 2);
  m << 1, 0, 0, -1;
  return HMat::symmetrized(m);
}

Povm::Povm(Eigen::Index dim, std::vector<HMat> effects)
    : dim_(dim), effects_(std::move(effects)) {
  if (dim < 1) throw std::invalid_argument("Povm: dimension must be positive");
  if (effects_.empty())
    throw std::invalid_argument("Povm: at least one outcome required");
  for (const HMat& e : effects_)
    if (e.dim() != dim)
      throw std::invalid_argument("Povm: effect dimension mismatch");
}

ValidationReport validate(const Povm& p, double tol) {
  ValidationReport rep;
  CMat sum = CMat::Zero(p.dim(), p.dim());
  for (int j = 0; j < p.outcomes(); ++j) {
    const HMat& e = p.effect(j);
    sum += e.mat();
    const double lo = eig_min(e);
    const double hi_slack = eig_min(HMat::identity(p.dim()) - e);
    if (lo < -tol || hi_slack < -tol)
      rep.effect_issues.push_back({j, lo, hi_slack});
  }
  rep.sum_deviation = (sum - CMat::Identity(p.dim(), p.dim())).norm();
  rep.sum_ok = rep.sum_deviation <= tol * std::sqrt(double(p.dim()));
  return rep;
}

std::string ValidationReport::describe() const {
  if (valid()) return "valid";
  std::ostringstream os;
  for (const auto& issue : effect_issues)
    os << "effect " << issue.index << ": min eig " << issue.min_eig
       << ", min eig of complement " << issue.complement_min_eig << "; ";
  if (!sum_ok) os << "effect sum deviates from identity by " << sum_deviation;
  return os.str();
}

MeasurementSet::MeasurementSet(std::vector<Povm> povms)
    : povms_(std::move(povms)) {
  if (povms_.empty())
    throw std::invalid_argument("MeasurementSet: at least one POVM required");
  dim_ = povms_.front().dim();
  for (const Povm& p : povms_)
    if (p.dim() != dim_)
      throw std::invalid_argument("MeasurementSet: mixed dimensions");
}

std::vector<int> MeasurementSet::shape() const {
  std::vector<int> k;
  k.reserve(povms_.size());
  for (const Povm& p : povms_) k.push_back(p.outcomes());
  return k;
}

ValidationReport validate(const MeasurementSet& set, double tol) {
  ValidationReport rep;
  for (int i = 0; i < set.size(); ++i) {
    ValidationReport r = validate(set.povm(i), tol);
    for (auto issue : r.effect_issues) rep.effect_issues.push_back(issue);
    rep.sum_deviation = std::max(rep.sum_deviation, r.sum_deviation);
    rep.sum_ok = rep.sum_ok && r.sum_ok;
  }
  return rep;
}

Povm apply_noise(const Povm& p, NoiseModel::Kind kind, double s) {
  if (s < 0.0 || s > 1.0)
    throw std::invalid_argument("apply_noise: weight outside [0, 1]");
  const Eigen::Index d = p.dim();
  const int k = p.outcomes();
  std::vector<HMat> noisy;
  noisy.reserve(k);
  for (int j = 0; j < k; ++j) {
    const HMat& e = p.effect(j);
    const double mix = kind == NoiseModel::Kind::kBalanced
                           ? 1.0 / k
                           : e.mat().trace().real() / double(d);
    noisy.push_back(s * e + (1.0 - s) * mix * HMat::identity(d));
  }
  return Povm(d, std::move(noisy));
}

MeasurementSet apply_noise(const MeasurementSet& set, const NoiseModel& model) {
  if (static_cast<int>(model.weights.size()) != set.size())
    throw std::invalid_argument("apply_noise: one weight per POVM required");
  std::vector<Povm> out;
  out.reserve(set.size());
  for (int i = 0; i < set.size(); ++i)
    out.push_back(apply_noise(set.povm(i), model.kind, model.weights[i]));
  return MeasurementSet(std::move(out));
}

Povm coarse_grain(const Povm& p,
                  const std::vector<std::vector<int>>& partition) {
  std::set<int> seen;
  int covered = 0;
  for (const auto& group : partition) {
    if (group.empty())
      throw std::invalid_argument("coarse_grain: empty outcome group");
    for (int j : group) {
      if (j < 0 || j >= p.outcomes())
        throw std::invalid_argument("coarse_grain: outcome index out of range");
      if (!seen.insert(j).second)
        throw std::invalid_argument("coarse_grain: overlapping groups");
      ++covered;
    }
  }
  if (covered != p.outcomes())
    throw std::invalid_argument("coarse_grain: partition does not cover all outcomes");
  std::vector<HMat> effects;
  effects.reserve(partition.size());
  for (const auto& group : partition) {
    HMat sum = HMat::zero(p.dim());
    for (int j : group) sum = sum + p.effect(j);
    effects.push_back(sum);
  }
  return Povm(p.dim(), std::move(effects));
}

Povm pad_outcomes(const Povm& p, int k_prime) {
  if (k_prime < p.outcomes())
    throw std::invalid_argument("pad_outcomes: target outcome count too small");
  std::vector<HMat> effects = p.effects();
  for (int j = p.outcomes(); j < k_prime; ++j)
    effects.push_back(HMat::zero(p.dim()));
  return Povm(p.dim(), std::move(effects));
}

MeasurementSet pad_outcomes(const MeasurementSet& set,
                            const std::vector<int>& k_prime) {
  if (static_cast<int>(k_prime.size()) != set.size())
    throw std::invalid_argument("pad_outcomes: one target per POVM required");
  std::vector<Povm> out;
  for (int i = 0; i < set.size(); ++i)
    out.push_back(pad_outcomes(set.povm(i), k_prime[i]));
  return MeasurementSet(std::move(out));
}

MeasurementSet compress(const MeasurementSet& set, const CMat& v, double tol) {
  if (v.rows() != set.dim())
    throw std::invalid_argument("compress: isometry row dimension mismatch");
  const Eigen::Index l = v.cols();
  if ((v.adjoint() * v - CMat::Identity(l, l)).norm() > tol * std::sqrt(double(l)))
    throw std::invalid_argument("compress: V is not an isometry");
  std::vector<Povm> out;
  for (int i = 0; i < set.size(); ++i) {
    std::vector<HMat> effects;
    for (const HMat& e : set.povm(i).effects())
      effects.push_back(HMat::symmetrized(v.adjoint() * e.mat() * v));
    out.push_back(Povm(l, std::move(effects)));
  }
  return MeasurementSet(std::move(out));
}

Povm cyclic_lift(const Povm& p) {
  const int k = p.outcomes();
  std::vector<HMat> lifted;
  lifted.reserve(k);
  for (int j = 0; j < k; ++j) {
    HMat f = p.effect(j);
    for (int r = 1; r < k; ++r) f = direct_sum(f, p.effect((j + r) % k));
    lifted.push_back(f);
  }
  return Povm(k * p.dim(), std::move(lifted));
}

int max_mub_count(int d) {
  if (d == 2) return 3;
  if (is_prime(d)) return d + 1;
  return 2;
}

MeasurementSet mub_povms(int d, int count) {
  if (d < 2) throw std::invalid_argument("mub_povms: dimension must be >= 2");
  if (count < 1 || count > max_mub_count(d))
    throw std::invalid_argument("mub_povms: " + std::to_string(count) +
                                " mutually unbiased bases not supported in dimension " +
                                std::to_string(d));
  std::vector<CMat> bases;
  bases.push_back(CMat::Identity(d, d));  // computational basis

  if (d == 2) {
    const double r = 1.0 / std::sqrt(2.0);
    CMat x(2, 2), y(2, 2);
    x << r, r, r, -r;                                          // sigma_x eigenbasis
    y << r, r, Complex(0, r), Complex(0, -r);                  // sigma_y eigenbasis
    bases.push_back(x);
    bases.push_back(y);
  } else {
    // Basis a has vectors v_b(l) = omega^{a l^2 + b l} / sqrt(d); a = 0 is the
    // Fourier basis, valid for every d, and a >= 1 needs d an odd prime.
    const int n_quadratic = is_prime(d) ? d : 1;
    for (int a = 0; a < n_quadratic; ++a) {
      CMat basis(d, d);
      for (int b = 0; b < d; ++b)
        for (int l = 0; l < d; ++l) {
          const long phase = (static_cast<long>(a) * l * l + static_cast<long>(b) * l) % d;
          const double arg = 2.0 * std::numbers::pi * double(phase) / double(d);
          basis(l, b) = Complex(std::cos(arg), std::sin(arg)) / std::sqrt(double(d));
        }
      bases.push_back(basis);
    }
  }

  std::vector<Povm> povms;
  for (int i = 0; i < count; ++i) povms.push_back(basis_to_povm(bases[i]));
  return MeasurementSet(std::move(povms));
}

HMat planar_observable(int g, int j) {
  const double a = double(j) * std::numbers::pi / double(g);
  return std::cos(a) * pauli_x() + std::sin(a) * pauli_y();
}

MeasurementSet planar_qubit_set(int g, const std::vector<double>& t) {
  if (g < 1) throw std::invalid_argument("planar_qubit_set: g must be >= 1");
  if (static_cast<int>(t.size()) != g)
    throw std::invalid_argument("planar_qubit_set: need one weight per POVM");
  std::vector<Povm> povms;
  for (int j = 1; j <= g; ++j) {
    if (t[j - 1] < 0.0 || t[j - 1] > 1.0)
      throw std::invalid_argument("planar_qubit_set: weights must lie in [0, 1]");
    const HMat e = 0.5 * (HMat::identity(2) + t[j - 1] * planar_observable(g, j));
    povms.push_back(Povm(2, {e, HMat::identity(2) - e}));
  }
  return MeasurementSet(std::move(povms));
}

MeasurementSet random_set(int d, const std::vector<int>& shape,
                          std::uint64_t seed) {
  if (d < 1) throw std::invalid_argument("random_set: dimension must be positive");
  Rng rng(seed);
  std::vector<Povm> povms;
  for (int k : shape) {
    if (k < 1) throw std::invalid_argument("random_set: outcome count must be positive");
    std::vector<CMat> wishart;
    CMat s = CMat::Zero(d, d);
    for (int j = 0; j < k; ++j) {
      const CMat g = rng.ginibre(d, d);
      wishart.push_back(g * g.adjoint());
      s += wishart.back();
    }
    Eigen::SelfAdjointEigenSolver<CMat> es(s);
    const CMat s_inv_sqrt = es.operatorInverseSqrt();
    std::vector<HMat> effects;
    for (int j = 0; j < k; ++j)
      effects.push_back(HMat::symmetrized(s_inv_sqrt * wishart[j] * s_inv_sqrt));
    povms.push_back(Povm(d, std::move(effects)));
  }
  return MeasurementSet(std::move(povms));
}

std::vector<HMat> reduced_effects(const Povm& p) {
  std::vector<HMat> out(p.effects().begin(), p.effects().end() - 1);
  return out;
}

Povm povm_from_reduced(Eigen::Index dim, const std::vector<HMat>& reduced) {
  HMat last = HMat::identity(dim);
  for (const HMat& e : reduced) {
    if (e.dim() != dim)
      throw std::invalid_argument("povm_from_reduced: dimension mismatch");
    last = last - e;
  }
  std::vector<HMat> effects = reduced;
  effects.push_back(last);
  return Povm(dim, std::move(effects));
}

std::vector<HMat> povm_to_tuple(const Povm& p) {
  const double shift = 2.0 / p.outcomes();
  std::vector<HMat> out;
  for (int j = 0; j + 1 < p.outcomes(); ++j)
    out.push_back(2.0 * p.effect(j) - shift * HMat::identity(p.dim()));
  return out;
}

Povm povm_from_tuple(int k, const std::vector<HMat>& tuple) {
  if (static_cast<int>(tuple.size()) != k - 1)
    throw std::invalid_argument("povm_from_tuple: expected k-1 matrices");
  if (tuple.empty())
    throw std::invalid_argument("povm_from_tuple: empty tuple");
  const Eigen::Index d = tuple.front().dim();
  std::vector<HMat> reduced;
  for (const HMat& b : tuple)
    reduced.push_back(0.5 * (b + (2.0 / k) * HMat::identity(d)));
  return povm_from_reduced(d, reduced);
}

}  // namespace jewel
