#include "jewel/compat.hpp"

#include <cmath>
#include <stdexcept>

namespace jewel {

namespace {

void require_valid(const MeasurementSet& set, const char* who,
                   double tol = kValidateTol) {
  ValidationReport rep = validate(set, tol);
  if (!rep.valid())
    throw std::invalid_argument(std::string(who) +
                                ": set is not a valid POVM collection: " +
                                rep.describe());
}

// Shared layout for the joint-POVM equality system: one d-dim block per joint
// outcome eta, the total-sum constraint, and the marginal equalities for all
// but the last outcome of each POVM.
struct JointLayout {
  JointIndex index;
  std::vector<int> g_blocks;

  JointLayout(SdpProblem& prob, const MeasurementSet& set)
      : index(set.shape()) {
    for (long e = 0; e < index.total(); ++e)
      g_blocks.push_back(prob.add_block(static_cast<int>(set.dim())));
  }

  std::vector<std::pair<int, double>> all_blocks() const {
    std::vector<std::pair<int, double>> v;
    for (int b : g_blocks) v.emplace_back(b, 1.0);
    return v;
  }

  std::vector<std::pair<int, double>> marginal_blocks(int i, int j) const {
    std::vector<std::pair<int, double>> v;
    for (long e = 0; e < index.total(); ++e)
      if (index.component(e, i) == j) v.emplace_back(g_blocks[e], 1.0);
    return v;
  }
};

double marginal_reconstruction_error(const MeasurementSet& set,
                                     const JointIndex& index,
                                     const std::vector<CMat>& g) {
  double err = 0.0;
  for (int i = 0; i < set.size(); ++i)
    for (int j = 0; j < set.povm(i).outcomes(); ++j) {
      CMat sum = CMat::Zero(set.dim(), set.dim());
      for (long e = 0; e < index.total(); ++e)
        if (index.component(e, i) == j) sum += g[e];
      err = std::max(err, (sum - set.povm(i).effect(j).mat()).norm());
    }
  return err;
}

}  // namespace

JointIndex::JointIndex(std::vector<int> shape) : shape_(std::move(shape)) {
  if (shape_.empty())
    throw std::invalid_argument("JointIndex: empty shape");
  strides_.resize(shape_.size());
  for (int i = static_cast<int>(shape_.size()) - 1; i >= 0; --i) {
    if (shape_[i] < 1) throw std::invalid_argument("JointIndex: bad shape");
    strides_[i] = total_;
    total_ *= shape_[i];
  }
}

long JointIndex::linear(const std::vector<int>& idx) const {
  if (idx.size() != shape_.size())
    throw std::invalid_argument("JointIndex: arity mismatch");
  long lin = 0;
  for (size_t i = 0; i < shape_.size(); ++i) {
    if (idx[i] < 0 || idx[i] >= shape_[i])
      throw std::invalid_argument("JointIndex: index out of range");
    lin += idx[i] * strides_[i];
  }
  return lin;
}

std::vector<int> JointIndex::unlinear(long lin) const {
  std::vector<int> idx(shape_.size());
  for (size_t i = 0; i < shape_.size(); ++i) idx[i] = component(lin, i);
  return idx;
}

CompatVerdict joint_feasibility(const MeasurementSet& set, double tol,
                                const SdpOptions& opts) {
  require_valid(set, "joint_feasibility");
  const int d = static_cast<int>(set.dim());

  SdpProblem prob;
  JointLayout layout(prob, set);
  prob.add_matrix_equality(layout.all_blocks(), {}, nullptr,
                           CMat::Identity(d, d));
  for (int i = 0; i < set.size(); ++i)
    for (int j = 0; j + 1 < set.povm(i).outcomes(); ++j)
      prob.add_matrix_equality(layout.marginal_blocks(i, j), {}, nullptr,
                               set.povm(i).effect(j).mat());

  MarginResult res = max_margin(prob, opts);
  if (res.status != SdpStatus::kOptimal)
    throw std::runtime_error(std::string("joint_feasibility: solver returned ") +
                             to_string(res.status));

  CompatVerdict verdict;
  verdict.margin = res.margin;
  verdict.compatible = res.margin >= -tol;
  verdict.marginal_error =
      marginal_reconstruction_error(set, layout.index, res.x);
  std::vector<HMat> effects;
  effects.reserve(res.x.size());
  for (const CMat& g : res.x) effects.push_back(HMat::symmetrized(g));
  verdict.joint = Povm(d, std::move(effects));
  if (!verdict.compatible) verdict.certificate = res.solution.y;
  return verdict;
}

double robustness(const MeasurementSet& set, NoiseModel::Kind kind,
                  const Eigen::VectorXd& direction, double tol,
                  const SdpOptions& opts) {
  require_valid(set, "robustness", std::max(tol, kValidateTol));
  if (direction.size() != set.size())
    throw std::invalid_argument("robustness: one direction entry per POVM");
  if (direction.minCoeff() < 0.0 || direction.maxCoeff() <= 0.0)
    throw std::invalid_argument("robustness: direction must be nonnegative and nonzero");
  const int d = static_cast<int>(set.dim());
  const double cap = 1.0 / direction.maxCoeff();

  SdpProblem prob;
  JointLayout layout(prob, set);
  const int t_blk = prob.add_block(1);
  const int u_blk = prob.add_block(1);

  prob.add_matrix_equality(layout.all_blocks(), {}, nullptr,
                           CMat::Identity(d, d));
  for (int i = 0; i < set.size(); ++i) {
    const int k = set.povm(i).outcomes();
    for (int j = 0; j + 1 < k; ++j) {
      const CMat& e = set.povm(i).effect(j).mat();
      const double mix = kind == NoiseModel::Kind::kBalanced
                             ? 1.0 / k
                             : e.trace().real() / double(d);
      const CMat base = mix * CMat::Identity(d, d);
      // marginal = base + t * a_i (E_j - base)
      const CMat t_weight = -direction(i) * (e - base);
      prob.add_matrix_equality(layout.marginal_blocks(i, j),
                               {{t_blk, t_weight}}, nullptr, base);
    }
  }
  // t + u = cap keeps the weights t*a inside the noise model's domain.
  SdpConstraint capc;
  capc.terms.push_back({t_blk, CMat::Ones(1, 1)});
  capc.terms.push_back({u_blk, CMat::Ones(1, 1)});
  capc.rhs = cap;
  prob.add_constraint(std::move(capc));

  prob.sense = SdpSense::kMaximize;
  prob.add_objective(t_blk, CMat::Ones(1, 1));

  SdpSolution sol = solve(prob, opts);
  if (sol.status != SdpStatus::kOptimal)
    throw std::runtime_error(std::string("robustness: solver returned ") +
                             to_string(sol.status));
  return sol.x[t_blk](0, 0).real();
}

double robustness_bisection(const MeasurementSet& set, NoiseModel::Kind kind,
                            const Eigen::VectorXd& direction, double width,
                            double feas_tol, const SdpOptions& opts) {
  require_valid(set, "robustness_bisection");
  const double cap = 1.0 / direction.maxCoeff();
  auto compatible_at = [&](double t) {
    NoiseModel model{kind, {}};
    for (int i = 0; i < set.size(); ++i)
      model.weights.push_back(t * direction(i));
    return joint_feasibility(apply_noise(set, model), feas_tol, opts)
        .compatible;
  };
  if (compatible_at(cap)) return cap;
  double lo = 0.0, hi = cap;
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    (compatible_at(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

HMat gbar(const HMat& e) {
  const Eigen::Index d = e.dim();
  const double tr = e.mat().trace().real();
  const double scale = std::max(1.0, e.mat().norm());
  if (tr < -1e-12 * scale)
    throw std::invalid_argument("gbar: negative trace");
  if (tr <= 1e-14 * scale) {
    if (e.mat().norm() > 1e-12 * scale)
      throw std::invalid_argument("gbar: traceless nonzero effect");
    return HMat::zero(d * d);
  }
  const HMat traceless = e - (tr / double(d)) * HMat::identity(d);
  const CVec v = vectorize(traceless);
  return HMat::symmetrized(v * v.adjoint() / tr);
}

HMat gbar(const Povm& p) {
  HMat sum = HMat::zero(p.dim() * p.dim());
  for (const HMat& e : p.effects()) sum = sum + gbar(e);
  return sum;
}

ZhuResult zhu_check(const MeasurementSet& set, double tol,
                    const SdpOptions& opts) {
  const int d = static_cast<int>(set.dim());
  const int g = set.size();
  std::vector<HMat> gbars;
  gbars.reserve(g);
  for (const Povm& p : set.povms()) gbars.push_back(gbar(p));

  ZhuResult res;
  if (g == 1) {
    // min tr H with H >= G-bar and G-bar PSD is attained at H = G-bar.
    res.value = gbars[0].mat().trace().real();
  } else {
    // H = S_1 + G-bar_1; the equalities S_1 - S_i = G-bar_i - G-bar_1 make
    // every S_i = H - G-bar_i, so S_i >= 0 encodes H >= G-bar_i.
    SdpProblem prob;
    std::vector<int> s_blocks;
    for (int i = 0; i < g; ++i) s_blocks.push_back(prob.add_block(d * d));
    for (int i = 1; i < g; ++i)
      prob.add_matrix_equality({{s_blocks[0], 1.0}, {s_blocks[i], -1.0}}, {},
                               nullptr, (gbars[i] - gbars[0]).mat());
    prob.add_objective(s_blocks[0], CMat::Identity(d * d, d * d));
    SdpSolution sol = solve(prob, opts);
    if (sol.status != SdpStatus::kOptimal)
      throw std::runtime_error(std::string("zhu_check: solver returned ") +
                               to_string(sol.status));
    res.value = sol.primal_value + gbars[0].mat().trace().real();
  }
  res.incompatible_certified = 1.0 + res.value > double(d) + tol;
  return res;
}

}  // namespace jewel
