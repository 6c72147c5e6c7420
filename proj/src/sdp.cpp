#include "jewel/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <mutex>

namespace jewel {

void dump_sdp_problem(const SdpProblem& problem, const std::string& path);

namespace {

struct Stats {
  std::mutex mu;
  SolveStats s;
};

Stats& stats() {
  static Stats st;
  return st;
}

void record_solve(const SdpSolution& sol) {
  Stats& st = stats();
  std::lock_guard<std::mutex> lock(st.mu);
  st.s.total_solves++;
  if (sol.status == SdpStatus::kOptimal) {
    st.s.optimal_solves++;
    st.s.max_gap = std::max(st.s.max_gap, std::abs(sol.gap));
    st.s.max_primal_residual =
        std::max(st.s.max_primal_residual, sol.primal_residual);
    st.s.max_dual_residual =
        std::max(st.s.max_dual_residual, sol.dual_residual);
  }
}

// Real isometric vectorization of a Hermitian matrix plus the free-scalar
// coefficient; used for rank-revealing constraint deduplication.
Eigen::VectorXd real_vec(const std::vector<int>& dims,
                         const SdpConstraint& c, bool has_free) {
  int n = 0;
  for (int d : dims) n += d * d;
  Eigen::VectorXd v = Eigen::VectorXd::Zero(n + (has_free ? 1 : 0));
  std::vector<int> offsets(dims.size());
  for (size_t b = 0, off = 0; b < dims.size(); ++b) {
    offsets[b] = static_cast<int>(off);
    off += dims[b] * dims[b];
  }
  const double rt2 = std::sqrt(2.0);
  for (const SdpTerm& t : c.terms) {
    const int d = dims[t.block];
    int k = offsets[t.block];
    for (int p = 0; p < d; ++p) v(k++) += t.coeff(p, p).real();
    for (int p = 0; p < d; ++p)
      for (int q = p + 1; q < d; ++q) {
        v(k++) += rt2 * t.coeff(p, q).real();
        v(k++) += rt2 * t.coeff(p, q).imag();
      }
  }
  if (has_free) v(v.size() - 1) = c.free_coeff;
  return v;
}

struct Prepared {
  std::vector<int> dims;
  std::vector<CMat> cost;       // internal minimize sense
  double free_cost = 0.0;       // internal sense
  bool has_free = false;
  std::vector<int> kept;        // indices into problem.constraints
  std::vector<SdpConstraint> cons;  // kept constraints, coeffs symmetrized
  Eigen::VectorXd b;
  Eigen::VectorXd free_col;     // d_i per kept constraint
  // per block: list of (kept-constraint index, term index within constraint)
  std::vector<std::vector<std::pair<int, int>>> block_terms;
  double flip = 1.0;  // -1 when the user sense is maximize
  int orig_m = 0;
};

void validate_problem(const SdpProblem& p) {
  const int nb = static_cast<int>(p.block_dims.size());
  for (int d : p.block_dims)
    if (d <= 0) throw std::invalid_argument("sdp: nonpositive block dimension");
  for (size_t i = 0; i < p.objective.size(); ++i)
    if (p.objective[i].size() != 0 &&
        p.objective[i].rows() != p.block_dims[i])
      throw std::invalid_argument("sdp: objective dimension mismatch");
  for (const SdpConstraint& c : p.constraints)
    for (const SdpTerm& t : c.terms) {
      if (t.block < 0 || t.block >= nb)
        throw std::invalid_argument("sdp: constraint references unknown block");
      if (t.coeff.rows() != p.block_dims[t.block] ||
          t.coeff.cols() != p.block_dims[t.block])
        throw std::invalid_argument("sdp: constraint dimension mismatch");
    }
}

double max_abs(const Eigen::VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

// Verifies a Farkas-type certificate of primal infeasibility by direct
// arithmetic: sum_i y_i A_i <= tol, d'y ~ 0, b'y = 1.
bool verify_farkas(const Prepared& pp, const Eigen::VectorXd& y, double tol) {
  double by = 0.0;
  for (size_t i = 0; i < pp.cons.size(); ++i) by += y(i) * pp.b(i);
  if (by < 1.0 - 1e-6) return false;
  if (pp.has_free) {
    double dy = pp.free_col.dot(y);
    if (std::abs(dy) > tol) return false;
  }
  for (size_t blk = 0; blk < pp.dims.size(); ++blk) {
    CMat s = CMat::Zero(pp.dims[blk], pp.dims[blk]);
    for (auto [ci, ti] : pp.block_terms[blk])
      s += y(ci) * pp.cons[ci].terms[ti].coeff;
    if (s.cwiseAbs().maxCoeff() > 0 && eig_max(s) > tol) return false;
  }
  return true;
}

// Infeasible-start primal-dual path follower with the HKM direction and a
// Mehrotra predictor-corrector step, templated on the real scalar so that
// solves stalling at the double-precision conditioning frontier can be
// retried in extended precision.
template <typename Real>
class Ipm {
  using C = std::complex<Real>;
  using Mat = Eigen::Matrix<C, Eigen::Dynamic, Eigen::Dynamic>;
  using RVec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
  using RMat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

 public:
  Ipm(const Prepared& pp, const SdpOptions& opts) : pp_(pp), opts_(opts) {
    nb_ = static_cast<int>(pp.dims.size());
    m_ = static_cast<int>(pp.cons.size());
    n_tot_ = 0;
    for (int d : pp.dims) n_tot_ += d;
    data_scale_ = 1.0 + max_abs(pp.b);
    c_scale_ = 0.0;
    for (const CMat& c : pp.cost)
      if (c.size()) c_scale_ = std::max(c_scale_, c.cwiseAbs().maxCoeff());
    c_scale_ = std::max(c_scale_, std::abs(pp.free_cost));

    a_.resize(m_);
    for (int i = 0; i < m_; ++i)
      for (const SdpTerm& t : pp.cons[i].terms)
        a_[i].emplace_back(t.block, t.coeff.template cast<C>().eval());
    cost_.resize(nb_);
    for (int b = 0; b < nb_; ++b)
      if (b < static_cast<int>(pp.cost.size()) && pp.cost[b].size())
        cost_[b] = pp.cost[b].template cast<C>();
    b_ = pp.b.template cast<Real>();
    free_col_ = pp.free_col.template cast<Real>();
  }

  SdpSolution run() {
    initialize();
    SdpSolution sol;
    int stalls = 0;
    const bool trace = std::getenv("JEWEL_SDP_TRACE") != nullptr;
    for (iter_ = 0; iter_ < opts_.max_iterations; ++iter_) {
      compute_residuals();
      remember_best();
      if (trace)
        std::fprintf(stderr,
                     "it %3d  mu %9.2e  pinf %9.2e  dinf %9.2e  pobj %+.6e  "
                     "dobj %+.6e\n",
                     iter_, double(mu_), double(pinf_), double(dinf_),
                     double(pobj_), double(dobj_));
      if (converged()) return finish(SdpStatus::kOptimal);
      if (detect_infeasible(sol)) return sol;
      if (detect_unbounded()) return finish(SdpStatus::kUnbounded);
      if (!factorize() || !build_schur())
        return finish_from_best(SdpStatus::kNumericalFailure);

      // Predictor: affine scaling direction (sigma = 0).
      std::vector<Mat> rc(nb_);
      for (int b = 0; b < nb_; ++b) rc[b] = -x_[b] * z_[b];
      Direction aff;
      if (!newton_direction(rc, aff))
        return finish_from_best(SdpStatus::kNumericalFailure);

      const Real ap_aff = std::min(Real(1), max_step(x_, aff.dx));
      const Real ad_aff = std::min(Real(1), max_step(z_, aff.dz));
      Real mu_aff = 0;
      for (int b = 0; b < nb_; ++b)
        mu_aff += ((x_[b] + ap_aff * aff.dx[b]) * (z_[b] + ad_aff * aff.dz[b]))
                      .trace()
                      .real();
      mu_aff = std::max(mu_aff / n_tot_, Real(0));
      const Real sigma = std::clamp(Real(std::pow(double(mu_aff / mu_), 3.0)),
                                    Real(1e-10), Real(1));

      // Corrector with the Mehrotra second-order term.
      for (int b = 0; b < nb_; ++b)
        rc[b] = sigma * mu_ * Mat::Identity(pp_.dims[b], pp_.dims[b]) -
                x_[b] * z_[b] - aff.dx[b] * aff.dz[b];
      Direction dir;
      if (!newton_direction(rc, dir))
        return finish_from_best(SdpStatus::kNumericalFailure);

      const Real frac = Real(opts_.step_fraction);
      Real ap = std::min(Real(1), frac * max_step(x_, dir.dx));
      Real ad = std::min(Real(1), frac * max_step(z_, dir.dz));

      // Extra centrality correctors whenever the step collapses; they replace
      // the second-order term with the current direction's own cross term and
      // are kept only if they enlarge the step.
      for (int extra = 0; extra < 2 && std::min(ap, ad) < Real(0.5); ++extra) {
        for (int b = 0; b < nb_; ++b)
          rc[b] = sigma * mu_ * Mat::Identity(pp_.dims[b], pp_.dims[b]) -
                  x_[b] * z_[b] - dir.dx[b] * dir.dz[b];
        Direction retry;
        if (!newton_direction(rc, retry)) break;
        const Real rp = std::min(Real(1), frac * max_step(x_, retry.dx));
        const Real rd = std::min(Real(1), frac * max_step(z_, retry.dz));
        if (std::min(rp, rd) <= Real(1.01) * std::min(ap, ad)) break;
        dir = retry;
        ap = rp;
        ad = rd;
      }

      for (int b = 0; b < nb_; ++b) {
        x_[b] = symm(Mat(x_[b] + ap * dir.dx[b]));
        z_[b] = symm(Mat(z_[b] + ad * dir.dz[b]));
      }
      y_ += ad * dir.dy;
      f_ += ap * dir.df;

      if (ap < Real(1e-10) && ad < Real(1e-10)) {
        if (++stalls >= 3)
          return finish_from_best(SdpStatus::kNumericalFailure);
      } else {
        stalls = 0;
      }
      Real xmax = 0;
      for (const Mat& xb : x_) xmax = std::max(xmax, xb.cwiseAbs().maxCoeff());
      if (!std::isfinite(double(xmax)) || xmax > Real(1e14))
        return finish_from_best(SdpStatus::kNumericalFailure);
    }
    compute_residuals();
    remember_best();
    if (converged()) return finish(SdpStatus::kOptimal);
    SdpSolution s2;
    if (detect_infeasible(s2)) return s2;
    return finish_from_best(SdpStatus::kMaxIterations);
  }

 private:
  struct Direction {
    std::vector<Mat> dx, dz;
    RVec dy;
    Real df = 0;
  };

  static Mat symm(const Mat& m) { return (m + m.adjoint()) / Real(2); }

  static Real min_eig(const Mat& m) {
    Eigen::SelfAdjointEigenSolver<Mat> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues()(0);
  }

  void initialize() {
    // Constant Gram matrix of the constraint functionals on (X, f); used to
    // project Newton directions back onto the equality manifold. Its
    // conditioning is data-determined, unlike the Schur complement's.
    gram_ = RMat::Zero(m_, m_);
    for (int j = 0; j < m_; ++j)
      for (const auto& [blk, aj] : a_[j])
        for (auto [ci, ti] : pp_.block_terms[blk])
          gram_(ci, j) += (a_[ci][ti].second * aj).trace().real();
    if (pp_.has_free) gram_ += free_col_ * free_col_.transpose();
    gram_ = ((gram_ + gram_.transpose()) / Real(2)).eval();
    gram_llt_.compute(gram_);
    gram_ok_ = m_ > 0 && gram_llt_.info() == Eigen::Success;

    Real ratio = 1;
    for (int i = 0; i < m_; ++i) {
      Real na = 0;
      for (const auto& [blk, ai] : a_[i]) na += ai.squaredNorm();
      na = std::sqrt(na + free_col_(i) * free_col_(i));
      ratio = std::max(ratio, (1 + std::abs(b_(i))) / (1 + na));
    }
    const Real kp = std::max(Real(1), ratio);
    Real na_max = 0;
    for (int i = 0; i < m_; ++i)
      for (const auto& [blk, ai] : a_[i]) na_max = std::max(na_max, ai.norm());
    Real nc = 0;
    for (const Mat& c : cost_)
      if (c.size()) nc = std::max(nc, c.norm());
    const Real kd = 1 + std::max(na_max, nc);
    x_.resize(nb_);
    z_.resize(nb_);
    for (int b = 0; b < nb_; ++b) {
      x_[b] = kp * Mat::Identity(pp_.dims[b], pp_.dims[b]);
      z_[b] = kd * Mat::Identity(pp_.dims[b], pp_.dims[b]);
    }
    y_ = RVec::Zero(m_);
    f_ = 0;
  }

  void compute_residuals() {
    rp_ = b_;
    for (int i = 0; i < m_; ++i) {
      Real ax = free_col_(i) * f_;
      for (const auto& [blk, ai] : a_[i])
        ax += (ai * x_[blk]).trace().real();
      rp_(i) -= ax;
    }
    rd_.assign(nb_, Mat());
    for (int b = 0; b < nb_; ++b) {
      rd_[b] = -z_[b];
      if (cost_[b].size()) rd_[b] += cost_[b];
    }
    for (int i = 0; i < m_; ++i)
      for (const auto& [blk, ai] : a_[i]) rd_[blk] -= y_(i) * ai;
    rq_ = pp_.has_free ? Real(pp_.free_cost) - free_col_.dot(y_) : Real(0);

    pinf_ = m_ == 0 ? Real(0) : rp_.cwiseAbs().maxCoeff();
    dinf_ = std::abs(rq_);
    for (const Mat& r : rd_)
      dinf_ = std::max(dinf_, r.cwiseAbs().maxCoeff());

    pobj_ = Real(pp_.free_cost) * f_;
    for (int b = 0; b < nb_; ++b)
      if (cost_[b].size()) pobj_ += (cost_[b] * x_[b]).trace().real();
    dobj_ = b_.dot(y_);

    mu_ = 0;
    for (int b = 0; b < nb_; ++b) mu_ += (x_[b] * z_[b]).trace().real();
    mu_ /= n_tot_;
  }

  bool converged() const {
    return pinf_ <= Real(opts_.eps_feas) &&
           dinf_ <= Real(opts_.eps_feas) * (1 + Real(c_scale_)) &&
           std::abs(pobj_ - dobj_) <=
               Real(opts_.eps_gap) * (1 + std::abs(pobj_));
  }

  void remember_best() {
    const Real score =
        std::max({pinf_, dinf_,
                  std::abs(pobj_ - dobj_) / (1 + std::abs(pobj_))});
    if (!best_.set || score < best_.score) {
      best_.x = x_;
      best_.z = z_;
      best_.y = y_;
      best_.f = f_;
      best_.pinf = pinf_;
      best_.dinf = dinf_;
      best_.pobj = pobj_;
      best_.dobj = dobj_;
      best_.score = score;
      best_.set = true;
    }
  }

  SdpSolution finish_from_best(SdpStatus status) {
    if (best_.set) {
      x_ = best_.x;
      z_ = best_.z;
      y_ = best_.y;
      f_ = best_.f;
      pinf_ = best_.pinf;
      dinf_ = best_.dinf;
      pobj_ = best_.pobj;
      dobj_ = best_.dobj;
      if (converged()) return finish(SdpStatus::kOptimal);
    }
    return finish(status);
  }

  bool detect_infeasible(SdpSolution& out) {
    const Real by = dobj_;
    if (by <= Real(1e8) * Real(data_scale_)) return false;
    Eigen::VectorXd ray = (y_ / by).template cast<double>();
    if (!verify_farkas(pp_, ray, 1e-7)) return false;
    out = finish(SdpStatus::kPrimalInfeasible);
    out.farkas_ray = ray;
    return true;
  }

  bool detect_unbounded() const {
    return pobj_ < Real(-1e9) * (1 + Real(c_scale_)) * Real(data_scale_) &&
           pinf_ <= Real(1e-6);
  }

  bool factorize() {
    zinv_.resize(nb_);
    for (int b = 0; b < nb_; ++b) {
      Eigen::LLT<Mat> lz(z_[b]);
      if (lz.info() != Eigen::Success) return false;
      zinv_[b] = lz.solve(Mat::Identity(pp_.dims[b], pp_.dims[b]));
    }
    return true;
  }

  // Schur complement M_ij = Re tr(A_i X A_j Z^{-1}); symmetric positive
  // definite once dependent constraints have been removed, but its condition
  // number grows like 1/mu^2.
  bool build_schur() {
    schur_ = RMat::Zero(m_, m_);
    for (int j = 0; j < m_; ++j) {
      for (const auto& [blk, aj] : a_[j]) {
        const Mat u = x_[blk] * aj * zinv_[blk];
        for (auto [ci, ti] : pp_.block_terms[blk])
          schur_(ci, j) += (a_[ci][ti].second * u).trace().real();
      }
    }
    schur_ = ((schur_ + schur_.transpose()) / Real(2)).eval();
    schur_llt_.compute(schur_);
    if (schur_llt_.info() == Eigen::Success) {
      use_ldlt_ = false;
      return true;
    }
    schur_ldlt_.compute(schur_);
    use_ldlt_ = true;
    return schur_ldlt_.info() == Eigen::Success;
  }

  RVec raw_schur_solve(const RVec& r) const {
    if (use_ldlt_) return schur_ldlt_.solve(r);
    return schur_llt_.solve(r);
  }

  // One step of iterative refinement; the Schur matrix turns ill-conditioned
  // as mu -> 0 and the extra solve keeps the search direction usable longer.
  RVec schur_solve(const RVec& r) const {
    RVec x = raw_schur_solve(r);
    x += raw_schur_solve(r - schur_ * x);
    return x;
  }

  bool newton_direction(const std::vector<Mat>& rc, Direction& dir) {
    std::vector<Mat> g(nb_);
    for (int b = 0; b < nb_; ++b)
      g[b] = (rc[b] - x_[b] * rd_[b]) * zinv_[b];
    RVec r1 = rp_;
    for (int i = 0; i < m_; ++i)
      for (const auto& [blk, ai] : a_[i])
        r1(i) -= (ai * g[blk]).trace().real();

    bool solved = false;
    if (pp_.has_free) {
      const RVec v = schur_solve(r1);
      const RVec w = schur_solve(free_col_);
      const Real dw = free_col_.dot(w);
      if (dw > 0 && std::isfinite(double(dw)) && v.allFinite() &&
          w.allFinite()) {
        dir.df = (free_col_.dot(v) - rq_) / dw;
        dir.dy = v - dir.df * w;
        solved = dir.dy.allFinite() && std::isfinite(double(dir.df));
      }
      if (!solved) {
        // Bordered elimination breaks once the Schur matrix is numerically
        // singular; solve the augmented KKT system directly instead.
        RMat kkt = RMat::Zero(m_ + 1, m_ + 1);
        kkt.topLeftCorner(m_, m_) = schur_;
        kkt.topRightCorner(m_, 1) = free_col_;
        kkt.bottomLeftCorner(1, m_) = free_col_.transpose();
        RVec rhs(m_ + 1);
        rhs.head(m_) = r1;
        rhs(m_) = rq_;
        Eigen::FullPivLU<RMat> lu(kkt);
        RVec sol = lu.solve(rhs);
        sol += lu.solve(rhs - kkt * sol);
        if (sol.allFinite()) {
          dir.dy = sol.head(m_);
          dir.df = sol(m_);
          solved = true;
        }
      }
    } else {
      dir.df = 0;
      dir.dy = schur_solve(r1);
      solved = dir.dy.allFinite();
    }
    if (!solved) return false;

    dir.dz.resize(nb_);
    dir.dx.resize(nb_);
    for (int b = 0; b < nb_; ++b) dir.dz[b] = rd_[b];
    for (int i = 0; i < m_; ++i)
      for (const auto& [blk, ai] : a_[i]) dir.dz[blk] -= dir.dy(i) * ai;
    for (int b = 0; b < nb_; ++b) {
      // dX = G + X (A^*(dy)) Z^{-1}, with A^*(dy) = R_d - dZ.
      const Mat ady = rd_[b] - dir.dz[b];
      dir.dx[b] = symm(Mat(g[b] + x_[b] * ady * zinv_[b]));
      dir.dz[b] = symm(dir.dz[b]);
    }
    project_direction(dir);
    return true;
  }

  // The dX formula cancels catastrophically once Z^{-1} is huge, which floors
  // the primal residual above the target. The Gram projection restores
  // A(dX) + d df = r_p to rounding level; positive semidefiniteness is kept
  // by the fraction-to-boundary line search.
  void project_direction(Direction& dir) {
    if (!gram_ok_) return;
    RVec resid = rp_;
    for (int i = 0; i < m_; ++i) {
      Real adx = free_col_(i) * dir.df;
      for (const auto& [blk, ai] : a_[i])
        adx += (ai * dir.dx[blk]).trace().real();
      resid(i) -= adx;
    }
    RVec delta = gram_llt_.solve(resid);
    delta += gram_llt_.solve(resid - gram_ * delta);
    if (!delta.allFinite()) return;
    for (int i = 0; i < m_; ++i)
      for (const auto& [blk, ai] : a_[i]) dir.dx[blk] += delta(i) * ai;
    if (pp_.has_free) dir.df += free_col_.dot(delta);
  }

  // Largest alpha with P + alpha dP >= 0, via the Cholesky-whitened pencil.
  Real max_step(const std::vector<Mat>& p, const std::vector<Mat>& dp) {
    Real alpha = std::numeric_limits<Real>::infinity();
    for (int b = 0; b < nb_; ++b) {
      Eigen::LLT<Mat> llt(p[b]);
      if (llt.info() != Eigen::Success) return 0;
      const Mat t = llt.matrixL().solve(dp[b]);
      const Mat w = llt.matrixL().solve(t.adjoint()).adjoint();
      const Real lmin = min_eig(symm(w));
      if (lmin < Real(-1e-16)) alpha = std::min(alpha, -1 / lmin);
    }
    return alpha;
  }

  SdpSolution finish(SdpStatus status) {
    SdpSolution sol;
    sol.status = status;
    sol.x.resize(nb_);
    sol.z.resize(nb_);
    for (int b = 0; b < nb_; ++b) {
      sol.x[b] = x_[b].template cast<Complex>();
      sol.z[b] = z_[b].template cast<Complex>();
    }
    sol.iterations = iter_;
    sol.free_value = double(f_);
    sol.primal_residual = double(pinf_);
    sol.dual_residual = double(dinf_);
    sol.y = Eigen::VectorXd::Zero(pp_.orig_m);
    for (int i = 0; i < m_; ++i) sol.y(pp_.kept[i]) = pp_.flip * double(y_(i));
    if (pp_.flip < 0) {
      sol.primal_value = -double(pobj_);
      sol.dual_value = -double(dobj_);
      sol.gap = sol.dual_value - sol.primal_value;
    } else {
      sol.primal_value = double(pobj_);
      sol.dual_value = double(dobj_);
      sol.gap = sol.primal_value - sol.dual_value;
    }
    return sol;
  }

  const Prepared& pp_;
  const SdpOptions& opts_;
  int nb_ = 0, m_ = 0, iter_ = 0;
  Real n_tot_ = 0;
  double data_scale_ = 1.0, c_scale_ = 0.0;
  std::vector<std::vector<std::pair<int, Mat>>> a_;
  std::vector<Mat> cost_;
  RVec b_, free_col_;
  std::vector<Mat> x_, z_, rd_, zinv_;
  RVec y_, rp_;
  Real f_ = 0, rq_ = 0;
  Real pinf_ = 0, dinf_ = 0, pobj_ = 0, dobj_ = 0, mu_ = 0;
  RMat schur_;
  Eigen::LLT<RMat> schur_llt_;
  Eigen::LDLT<RMat> schur_ldlt_;
  bool use_ldlt_ = false;
  RMat gram_;
  Eigen::LLT<RMat> gram_llt_;
  bool gram_ok_ = false;

  struct Snapshot {
    std::vector<Mat> x, z;
    RVec y;
    Real f = 0, pinf = 0, dinf = 0, pobj = 0, dobj = 0;
    Real score = std::numeric_limits<Real>::infinity();
    bool set = false;
  };
  Snapshot best_;
};

}  // namespace

const char* to_string(SdpStatus s) {
  switch (s) {
    case SdpStatus::kOptimal: return "optimal";
    case SdpStatus::kPrimalInfeasible: return "primal_infeasible";
    case SdpStatus::kUnbounded: return "unbounded";
    case SdpStatus::kMaxIterations: return "max_iterations";
    case SdpStatus::kNumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

int SdpProblem::add_block(int dim) {
  if (dim <= 0) throw std::invalid_argument("sdp: nonpositive block dimension");
  block_dims.push_back(dim);
  return static_cast<int>(block_dims.size()) - 1;
}

void SdpProblem::enable_free_scalar(double cost) {
  has_free_scalar = true;
  free_cost = cost;
}

void SdpProblem::add_objective(int block, const CMat& c) {
  if (objective.size() < block_dims.size()) objective.resize(block_dims.size());
  if (objective[block].size() == 0)
    objective[block] = CMat::Zero(block_dims[block], block_dims[block]);
  objective[block] += HMat::symmetrized(c).mat();
}

void SdpProblem::add_constraint(SdpConstraint c) {
  for (SdpTerm& t : c.terms) t.coeff = HMat::symmetrized(t.coeff).mat();
  constraints.push_back(std::move(c));
}

void SdpProblem::add_matrix_equality(
    const std::vector<std::pair<int, double>>& scaled_blocks,
    const std::vector<std::pair<int, CMat>>& scalar_weights,
    const CMat* free_weight, const CMat& rhs) {
  const int d = static_cast<int>(rhs.rows());
  for (int idx = 0; idx < HermitianBasis::size(d); ++idx) {
    const CMat basis = HermitianBasis::element(d, idx);
    SdpConstraint c;
    for (auto& [blk, scale] : scaled_blocks)
      c.terms.push_back({blk, CMat(scale * basis)});
    for (auto& [blk, w] : scalar_weights) {
      CMat one(1, 1);
      one(0, 0) = HermitianBasis::component(w, idx);
      c.terms.push_back({blk, one});
    }
    if (free_weight) c.free_coeff = HermitianBasis::component(*free_weight, idx);
    c.rhs = HermitianBasis::component(rhs, idx);
    add_constraint(std::move(c));
  }
}

int SdpProblem::total_dim() const {
  int n = 0;
  for (int d : block_dims) n += d;
  return n;
}

CMat HermitianBasis::element(int d, int idx) {
  CMat b = CMat::Zero(d, d);
  if (idx < d) {
    b(idx, idx) = 1.0;
    return b;
  }
  int k = idx - d;
  for (int p = 0; p < d; ++p)
    for (int q = p + 1; q < d; ++q) {
      if (k == 0) {
        b(p, q) = 0.5;
        b(q, p) = 0.5;
        return b;
      }
      if (k == 1) {
        b(p, q) = Complex(0, 0.5);
        b(q, p) = Complex(0, -0.5);
        return b;
      }
      k -= 2;
    }
  throw std::invalid_argument("HermitianBasis: index out of range");
}

double HermitianBasis::component(const CMat& h, int idx) {
  const int d = static_cast<int>(h.rows());
  if (idx < d) return h(idx, idx).real();
  int k = idx - d;
  for (int p = 0; p < d; ++p)
    for (int q = p + 1; q < d; ++q) {
      if (k == 0) return h(p, q).real();
      if (k == 1) return h(p, q).imag();
      k -= 2;
    }
  throw std::invalid_argument("HermitianBasis: index out of range");
}

SdpSolution solve(const SdpProblem& problem, const SdpOptions& opts) {
  validate_problem(problem);
  if (!opts.dump_json_path.empty())
    dump_sdp_problem(problem, opts.dump_json_path);

  Prepared pp;
  pp.dims = problem.block_dims;
  pp.has_free = problem.has_free_scalar;
  pp.flip = problem.sense == SdpSense::kMaximize ? -1.0 : 1.0;
  pp.cost.resize(pp.dims.size());
  for (size_t b = 0; b < pp.dims.size(); ++b) {
    if (b < problem.objective.size() && problem.objective[b].size())
      pp.cost[b] = pp.flip * problem.objective[b];
  }
  pp.free_cost = pp.flip * problem.free_cost;

  const int m_orig = static_cast<int>(problem.constraints.size());
  pp.orig_m = m_orig;

  // Rank-revealing deduplication of the equality system. Dependent
  // constraints are dropped after a consistency check; an inconsistent
  // dependency yields a verified Farkas ray.
  Eigen::VectorXd b_orig(m_orig);
  for (int i = 0; i < m_orig; ++i) b_orig(i) = problem.constraints[i].rhs;
  std::vector<int> kept;
  if (m_orig > 0) {
    int nvec = pp.has_free ? 1 : 0;
    for (int d : pp.dims) nvec += d * d;
    Eigen::MatrixXd v(nvec, m_orig);
    for (int i = 0; i < m_orig; ++i)
      v.col(i) = real_vec(pp.dims, problem.constraints[i], pp.has_free);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(v);
    qr.setThreshold(opts.dedup_tol);
    const int rank = static_cast<int>(qr.rank());
    const auto perm = qr.colsPermutation().indices();
    std::vector<bool> is_kept(m_orig, false);
    for (int i = 0; i < rank; ++i) is_kept[perm(i)] = true;
    for (int i = 0; i < m_orig; ++i)
      if (is_kept[i]) kept.push_back(i);

    if (rank < m_orig) {
      Eigen::MatrixXd vk(nvec, rank);
      Eigen::VectorXd bk(rank);
      for (int i = 0; i < rank; ++i) {
        vk.col(i) = v.col(kept[i]);
        bk(i) = b_orig(kept[i]);
      }
      Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qrk(vk);
      const double bscale = 1.0 + max_abs(b_orig);
      for (int j = 0; j < m_orig; ++j) {
        if (is_kept[j]) continue;
        const Eigen::VectorXd coef = qrk.solve(v.col(j));
        const double delta = b_orig(j) - bk.dot(coef);
        if (std::abs(delta) > 1e-8 * bscale) {
          // Inconsistent equalities: y with A^*(y) = 0 and b'y = 1.
          Eigen::VectorXd ray = Eigen::VectorXd::Zero(m_orig);
          ray(j) = 1.0 / delta;
          for (int i = 0; i < rank; ++i) ray(kept[i]) = -coef(i) / delta;
          // Re-verify on the full system before surfacing.
          Prepared full;
          full.dims = pp.dims;
          full.has_free = pp.has_free;
          full.cons = problem.constraints;
          full.b = b_orig;
          full.free_col = Eigen::VectorXd::Zero(m_orig);
          for (int i = 0; i < m_orig; ++i)
            full.free_col(i) = problem.constraints[i].free_coeff;
          full.block_terms.resize(pp.dims.size());
          for (int i = 0; i < m_orig; ++i)
            for (size_t t = 0; t < full.cons[i].terms.size(); ++t)
              full.block_terms[full.cons[i].terms[t].block].emplace_back(
                  i, static_cast<int>(t));
          SdpSolution sol;
          sol.status = verify_farkas(full, ray, 1e-7)
                           ? SdpStatus::kPrimalInfeasible
                           : SdpStatus::kNumericalFailure;
          sol.farkas_ray = ray;
          sol.y = Eigen::VectorXd::Zero(m_orig);
          record_solve(sol);
          return sol;
        }
      }
    }
  }

  pp.kept = kept;
  pp.cons.reserve(kept.size());
  for (int i : kept) pp.cons.push_back(problem.constraints[i]);
  const int m = static_cast<int>(pp.cons.size());
  pp.b.resize(m);
  pp.free_col.resize(m);
  for (int i = 0; i < m; ++i) {
    pp.b(i) = pp.cons[i].rhs;
    pp.free_col(i) = pp.cons[i].free_coeff;
  }
  pp.block_terms.resize(pp.dims.size());
  for (int i = 0; i < m; ++i)
    for (size_t t = 0; t < pp.cons[i].terms.size(); ++t)
      pp.block_terms[pp.cons[i].terms[t].block].emplace_back(
          i, static_cast<int>(t));

  // A free scalar absent from every constraint is unbounded unless costless.
  if (pp.has_free && (m == 0 || pp.free_col.cwiseAbs().maxCoeff() == 0.0)) {
    if (pp.free_cost != 0.0) {
      SdpSolution sol;
      sol.status = SdpStatus::kUnbounded;
      sol.y = Eigen::VectorXd::Zero(m_orig);
      record_solve(sol);
      return sol;
    }
    pp.has_free = false;
  }

  Ipm<double> ipm(pp, opts);
  SdpSolution sol = ipm.run();
  if (sol.status == SdpStatus::kNumericalFailure ||
      sol.status == SdpStatus::kMaxIterations) {
    // Retry at extended precision: near-degenerate optima stall double
    // arithmetic a hair above the requested tolerances.
    Ipm<long double> retry(pp, opts);
    SdpSolution sol2 = retry.run();
    if (sol2.status == SdpStatus::kOptimal ||
        sol2.status == SdpStatus::kPrimalInfeasible)
      sol = std::move(sol2);
  }
  record_solve(sol);
  return sol;
}

MarginResult max_margin(const SdpProblem& equality_system,
                        const SdpOptions& opts) {
  for (const CMat& c : equality_system.objective)
    if (c.size() && c.cwiseAbs().maxCoeff() != 0.0)
      throw std::invalid_argument("max_margin: input must have no objective");
  if (equality_system.has_free_scalar)
    throw std::invalid_argument("max_margin: input must have no free scalar");

  SdpProblem shifted = equality_system;
  shifted.sense = SdpSense::kMaximize;
  shifted.enable_free_scalar(1.0);
  for (SdpConstraint& c : shifted.constraints) {
    double tr = 0.0;
    for (const SdpTerm& t : c.terms) tr += t.coeff.trace().real();
    c.free_coeff += tr;
  }

  SdpSolution sol = solve(shifted, opts);
  MarginResult res;
  res.status = sol.status;
  res.margin = sol.free_value;
  if (sol.status == SdpStatus::kOptimal ||
      sol.status == SdpStatus::kMaxIterations) {
    res.x = sol.x;
    for (size_t b = 0; b < res.x.size(); ++b)
      res.x[b] += sol.free_value *
                  CMat::Identity(res.x[b].rows(), res.x[b].cols());
  }
  res.solution = std::move(sol);
  return res;
}

SolveStats solve_stats() {
  Stats& st = stats();
  std::lock_guard<std::mutex> lock(st.mu);
  return st.s;
}

void reset_solve_stats() {
  Stats& st = stats();
  std::lock_guard<std::mutex> lock(st.mu);
  st.s = SolveStats{};
}

}  // namespace jewel
