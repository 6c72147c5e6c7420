#include "jewel/hermitian.hpp"

#include <cmath>

namespace jewel {

HMat HMat::hermitize(const CMat& m, double tol) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("hermitize: matrix is not square");
  const double max_abs = m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
  const double skew =
      m.size() == 0 ? 0.0 : (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (skew > tol * std::max(1.0, max_abs))
    throw std::invalid_argument("hermitize: skew part " + std::to_string(skew) +
                                " exceeds tolerance");
  return symmetrized(m);
}

HMat HMat::symmetrized(const CMat& m) {
  if (m.rows() != m.cols())
    throw std::invalid_argument("hermitize: matrix is not square");
  return HMat(CMat((m + m.adjoint()) / 2.0));
}

bool HMat::is_diagonal_real() const {
  for (Eigen::Index i = 0; i < m_.rows(); ++i)
    for (Eigen::Index j = 0; j < m_.cols(); ++j) {
      if (i != j && m_(i, j) != Complex(0, 0)) return false;
      if (i == j && m_(i, i).imag() != 0.0) return false;
    }
  return true;
}

HMat kron(const HMat& a, const HMat& b) {
  const Eigen::Index da = a.dim(), db = b.dim();
  CMat out(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i)
    for (Eigen::Index j = 0; j < da; ++j)
      out.block(i * db, j * db, db, db) = a(i, j) * b.mat();
  return HMat::symmetrized(out);
}

HMat direct_sum(const HMat& a, const HMat& b) {
  CMat out = CMat::Zero(a.dim() + b.dim(), a.dim() + b.dim());
  out.topLeftCorner(a.dim(), a.dim()) = a.mat();
  out.bottomRightCorner(b.dim(), b.dim()) = b.mat();
  return HMat::symmetrized(out);
}

EigDecomp eigh(const HMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a.mat());
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eigh: eigendecomposition did not converge");
  return EigDecomp{es.eigenvalues(), es.eigenvectors()};
}

double eig_min(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eig_min: eigendecomposition did not converge");
  return es.eigenvalues()(0);
}

double eig_max(const CMat& a) {
  Eigen::SelfAdjointEigenSolver<CMat> es(a, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success)
    throw std::runtime_error("eig_max: eigendecomposition did not converge");
  return es.eigenvalues()(a.rows() - 1);
}

double eig_min(const HMat& a) { return eig_min(a.mat()); }
double eig_max(const HMat& a) { return eig_max(a.mat()); }

CVec vectorize(const HMat& a) {
  CVec v(a.dim() * a.dim());
  for (Eigen::Index j = 0; j < a.dim(); ++j)
    v.segment(j * a.dim(), a.dim()) = a.mat().col(j);
  return v;
}

double hs_inner(const HMat& a, const HMat& b) {
  return (a.mat().adjoint() * b.mat()).trace().real();
}

double trace_re(const CMat& a) { return a.trace().real(); }

}  // namespace jewel
