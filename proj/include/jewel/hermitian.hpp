#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

namespace jewel {

using Complex = std::complex<double>;
using CMat = Eigen::MatrixXcd;
using CVec = Eigen::VectorXcd;

inline constexpr double kHermitizeTol = 1e-9;

/// Dense Hermitian matrix over complex doubles.
///
/// Every instance satisfies m(i,j) == conj(m(j,i)) exactly: construction
/// passes through (M + M^*)/2, which is exactly conjugate-symmetric in IEEE
/// arithmetic. Values are immutable after construction, so they can be shared
/// freely between threads.
class HMat {
 public:
  HMat() = default;  // 0x0, the neutral element of direct_sum

  /// Symmetrizes M to (M + M^*)/2. Rejects input whose skew part is larger
  /// than `tol` relative to the largest entry magnitude (corrupt input).
  static HMat hermitize(const CMat& m, double tol = kHermitizeTol);

  /// Symmetrizes without the skew check. For internal results that are
  /// Hermitian by construction.
  static HMat symmetrized(const CMat& m);

  static HMat zero(Eigen::Index dim) { return HMat(CMat::Zero(dim, dim)); }
  static HMat identity(Eigen::Index dim) {
    return HMat(CMat::Identity(dim, dim));
  }
  static HMat diagonal(const Eigen::VectorXd& d) {
    return HMat(d.cast<Complex>().asDiagonal());
  }

  Eigen::Index dim() const { return m_.rows(); }
  const CMat& mat() const { return m_; }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  bool is_diagonal_real() const;

  HMat operator+(const HMat& o) const { return HMat(CMat(m_ + o.m_)); }
  HMat operator-(const HMat& o) const { return HMat(CMat(m_ - o.m_)); }
  HMat operator-() const { return HMat(CMat(-m_)); }
  friend HMat operator*(double s, const HMat& a) { return HMat(CMat(s * a.m_)); }
  HMat operator*(double s) const { return HMat(CMat(m_ * s)); }

 private:
  explicit HMat(CMat m) : m_(std::move(m)) {}
  CMat m_;
};

HMat kron(const HMat& a, const HMat& b);
HMat direct_sum(const HMat& a, const HMat& b);

/// Ascending eigenvalues and an orthonormal eigenbasis.
struct EigDecomp {
  Eigen::VectorXd values;
  CMat vectors;
};

/// Full Hermitian eigendecomposition; throws std::runtime_error if the
/// iteration does not converge.
EigDecomp eigh(const HMat& a);

double eig_min(const HMat& a);
double eig_max(const HMat& a);

/// Smallest / largest eigenvalue of a raw Hermitian Eigen matrix (the caller
/// guarantees Hermiticity).
double eig_min(const CMat& a);
double eig_max(const CMat& a);

/// Column-stacking vectorization; <vec(A), vec(B)> = tr(A^* B).
CVec vectorize(const HMat& a);

/// Real Hilbert-Schmidt inner product Re tr(A^* B).
double hs_inner(const HMat& a, const HMat& b);

double trace_re(const CMat& a);

}  // namespace jewel
