#include "jewel/spectra.hpp"

#include <cmath>
#include <stdexcept>

namespace jewel {

namespace {

Eigen::VectorXd diag_of(const HMat& m) { return m.mat().diagonal().real(); }

HMat diag_mat(const Eigen::VectorXd& d) { return HMat::diagonal(d); }

// max over diagonal entries e of lambda_max(sum_i c_i(e) X_i), evaluated with
// an OpenMP sweep or serially. `weight(e, i)` yields c_i(e).
template <typename WeightFn>
double sweep_max_eig(long entries, int m, const std::vector<HMat>& x,
                     WeightFn weight, bool parallel) {
  const Eigen::Index n = x.empty() ? 1 : x[0].dim();
  double worst = -std::numeric_limits<double>::infinity();
  if (parallel) {
#pragma omp parallel
    {
      double local = -std::numeric_limits<double>::infinity();
#pragma omp for schedule(dynamic, 8) nowait
      for (long e = 0; e < entries; ++e) {
        CMat acc = CMat::Zero(n, n);
        for (int i = 0; i < m; ++i) acc += weight(e, i) * x[i].mat();
        local = std::max(local, eig_max(acc));
      }
#pragma omp critical
      worst = std::max(worst, local);
    }
  } else {
    for (long e = 0; e < entries; ++e) {
      CMat acc = CMat::Zero(n, n);
      for (int i = 0; i < m; ++i) acc += weight(e, i) * x[i].mat();
      worst = std::max(worst, eig_max(acc));
    }
  }
  return worst;
}

Membership membership_impl(const FreeTuple& a, const std::vector<HMat>& x,
                           double tol, bool parallel) {
  if (static_cast<int>(x.size()) != a.size())
    throw std::invalid_argument("membership: tuple length mismatch");
  for (const HMat& xi : x)
    if (xi.dim() != (x.empty() ? 0 : x[0].dim()))
      throw std::invalid_argument("membership: mixed argument dimensions");
  if (a.size() == 0) return {true, 1.0};

  double max_eig_val;
  if (a.diagonal) {
    std::vector<Eigen::VectorXd> diags;
    diags.reserve(a.matrices.size());
    for (const HMat& ai : a.matrices) diags.push_back(diag_of(ai));
    max_eig_val = sweep_max_eig(
        a.dimD, a.size(), x,
        [&](long e, int i) { return diags[i](e); }, parallel);
  } else {
    const Eigen::Index n = x[0].dim();
    CMat big = CMat::Zero(a.dimD * n, a.dimD * n);
    for (int i = 0; i < a.size(); ++i)
      big += kron(a.matrices[i], x[i]).mat();
    max_eig_val = eig_max(big);
  }
  return {1.0 - max_eig_val >= -tol, 1.0 - max_eig_val};
}

Membership jewel_membership_impl(const JewelShape& shape,
                                 const std::vector<HMat>& x, double tol,
                                 bool parallel) {
  if (static_cast<int>(x.size()) != shape.blocks())
    throw std::invalid_argument("jewel_membership: expected sum(k_i - 1) blocks");
  const int g = shape.groups();
  const Eigen::Index n = x.empty() ? 1 : x[0].dim();
  for (const HMat& xi : x)
    if (xi.dim() != n)
      throw std::invalid_argument("jewel_membership: mixed block dimensions");

  // v_j^{(k)}(e) = -2/k + 2 delta_{e,j}: each vertex operator is the fixed
  // base -sum_i (2/k_i) S_i plus 2 X_{i, e_i} for groups with e_i < k_i - 1.
  std::vector<int> offset(g, 0);
  for (int i = 1; i < g; ++i) offset[i] = offset[i - 1] + shape.k()[i - 1] - 1;
  CMat base = CMat::Zero(n, n);
  for (int i = 0; i < g; ++i) {
    CMat s = CMat::Zero(n, n);
    for (int j = 0; j + 1 < shape.k()[i]; ++j) s += x[offset[i] + j].mat();
    base -= (2.0 / shape.k()[i]) * s;
  }

  JointIndex index(shape.k());
  const long entries = index.total();
  double worst = -std::numeric_limits<double>::infinity();
  if (parallel) {
#pragma omp parallel
    {
      double local = -std::numeric_limits<double>::infinity();
#pragma omp for schedule(dynamic, 8) nowait
      for (long e = 0; e < entries; ++e) {
        CMat acc = base;
        for (int i = 0; i < g; ++i) {
          const int ei = index.component(e, i);
          if (ei + 1 < shape.k()[i]) acc += 2.0 * x[offset[i] + ei].mat();
        }
        local = std::max(local, eig_max(acc));
      }
#pragma omp critical
      worst = std::max(worst, local);
    }
  } else {
    for (long e = 0; e < entries; ++e) {
      CMat acc = base;
      for (int i = 0; i < g; ++i) {
        const int ei = index.component(e, i);
        if (ei + 1 < shape.k()[i]) acc += 2.0 * x[offset[i] + ei].mat();
      }
      worst = std::max(worst, eig_max(acc));
    }
  }
  return {1.0 - worst >= -tol, 1.0 - worst};
}

}  // namespace

JewelShape::JewelShape(std::vector<int> k) : k_(std::move(k)) {
  if (k_.empty()) throw std::invalid_argument("JewelShape: empty shape");
  for (int ki : k_)
    if (ki < 2) throw std::invalid_argument("JewelShape: entries must be >= 2");
}

int JewelShape::blocks() const {
  int m = 0;
  for (int ki : k_) m += ki - 1;
  return m;
}

long JewelShape::vertex_count() const {
  long v = 1;
  for (int ki : k_) v *= ki;
  return v;
}

FreeTuple named_base_tuple(BaseKind kind, int param) {
  FreeTuple t;
  t.diagonal = true;
  switch (kind) {
    case BaseKind::kJewelBase: {
      const int k = param;
      if (k < 2) throw std::invalid_argument("jewel base needs k >= 2");
      t.dimD = k;
      t.label = "jewel_base(" + std::to_string(k) + ")";
      for (int j = 0; j < k - 1; ++j) {
        Eigen::VectorXd v = Eigen::VectorXd::Constant(k, -2.0 / k);
        v(j) += 2.0;
        t.matrices.push_back(diag_mat(v));
      }
      return t;
    }
    case BaseKind::kCuboidBase: {
      const int k = param;
      if (k < 2) throw std::invalid_argument("cuboid base needs k >= 2");
      t.dimD = k;
      t.label = "cuboid_base(" + std::to_string(k) + ")";
      for (int j = 0; j < k - 1; ++j) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(k);
        v(k - 1) = k / 2.0;
        v(j) = -k / 2.0;
        t.matrices.push_back(diag_mat(v));
      }
      return t;
    }
    case BaseKind::kCube: {
      const int g = param;
      if (g < 1) throw std::invalid_argument("cube needs g >= 1");
      t.dimD = 2 * g;
      t.label = "cube(" + std::to_string(g) + ")";
      for (int i = 0; i < g; ++i) {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(2 * g);
        v(i) = 1.0;
        v(g + i) = -1.0;
        t.matrices.push_back(diag_mat(v));
      }
      return t;
    }
    case BaseKind::kDiamond: {
      const int g = param;
      if (g < 1) throw std::invalid_argument("diamond needs g >= 1");
      FreeTuple d = jewel_tuple(JewelShape(std::vector<int>(g, 2)));
      d.label = "diamond(" + std::to_string(g) + ")";
      return d;
    }
  }
  throw std::invalid_argument("named_base_tuple: unknown kind");
}

FreeTuple product_tuple(const FreeTuple& a, const FreeTuple& b) {
  FreeTuple t;
  t.dimD = a.dimD + b.dimD;
  t.diagonal = a.diagonal && b.diagonal;
  t.label = "(" + a.label + ") x (" + b.label + ")";
  const HMat zero_a = HMat::zero(a.dimD);
  const HMat zero_b = HMat::zero(b.dimD);
  for (const HMat& ai : a.matrices) t.matrices.push_back(direct_sum(ai, zero_b));
  for (const HMat& bj : b.matrices) t.matrices.push_back(direct_sum(zero_a, bj));
  return t;
}

FreeTuple sum_tuple(const FreeTuple& a, const FreeTuple& b) {
  FreeTuple t;
  t.dimD = a.dimD * b.dimD;
  t.diagonal = a.diagonal && b.diagonal;
  t.label = "(" + a.label + ") + (" + b.label + ")";
  const HMat ia = HMat::identity(a.dimD);
  const HMat ib = HMat::identity(b.dimD);
  for (const HMat& ai : a.matrices) t.matrices.push_back(kron(ai, ib));
  for (const HMat& bj : b.matrices) t.matrices.push_back(kron(ia, bj));
  return t;
}

FreeTuple jewel_tuple(const JewelShape& shape) {
  FreeTuple t = named_base_tuple(BaseKind::kJewelBase, shape.k()[0]);
  for (int i = 1; i < shape.groups(); ++i)
    t = sum_tuple(t, named_base_tuple(BaseKind::kJewelBase, shape.k()[i]));
  t.label = "jewel(";
  for (int i = 0; i < shape.groups(); ++i)
    t.label += (i ? "," : "") + std::to_string(shape.k()[i]);
  t.label += ")";
  return t;
}

std::vector<Eigen::VectorXd> jewel_vertices(int k) {
  if (k < 2) throw std::invalid_argument("jewel_vertices: k >= 2 required");
  std::vector<Eigen::VectorXd> v;
  for (int i = 0; i < k - 1; ++i) {
    Eigen::VectorXd p = Eigen::VectorXd::Zero(k - 1);
    p(i) = -k / 2.0;
    v.push_back(p);
  }
  v.push_back(Eigen::VectorXd::Constant(k - 1, k / 2.0));
  return v;
}

std::vector<Eigen::VectorXd> cuboid_vertices(const JewelShape& shape) {
  JointIndex index(shape.k());
  std::vector<Eigen::VectorXd> out;
  out.reserve(index.total());
  for (long e = 0; e < index.total(); ++e) {
    Eigen::VectorXd p(shape.blocks());
    int off = 0;
    for (int s = 0; s < shape.groups(); ++s) {
      const int k = shape.k()[s];
      const int i = index.component(e, s);
      for (int j = 0; j + 1 < k; ++j)
        p(off + j) = -2.0 / k + (i == j ? 2.0 : 0.0);
      off += k - 1;
    }
    out.push_back(p);
  }
  return out;
}

Membership membership(const FreeTuple& a, const std::vector<HMat>& x,
                      double tol) {
  return membership_impl(a, x, tol, true);
}

Membership membership_serial(const FreeTuple& a, const std::vector<HMat>& x,
                             double tol) {
  return membership_impl(a, x, tol, false);
}

Membership jewel_membership(const JewelShape& shape,
                            const std::vector<HMat>& x, double tol) {
  return jewel_membership_impl(shape, x, tol, true);
}

Membership jewel_membership_serial(const JewelShape& shape,
                                   const std::vector<HMat>& x, double tol) {
  return jewel_membership_impl(shape, x, tol, false);
}

MeasurementSet tuple_to_measurements(const JewelShape& shape,
                                     const std::vector<HMat>& b) {
  if (static_cast<int>(b.size()) != shape.blocks())
    throw std::invalid_argument("tuple_to_measurements: expected sum(k_i - 1) blocks");
  std::vector<Povm> povms;
  int off = 0;
  for (int i = 0; i < shape.groups(); ++i) {
    const int k = shape.k()[i];
    std::vector<HMat> group(b.begin() + off, b.begin() + off + (k - 1));
    povms.push_back(povm_from_tuple(k, group));
    off += k - 1;
  }
  return MeasurementSet(std::move(povms));
}

CompatVerdict inclusion_check(const JewelShape& shape,
                              const std::vector<HMat>& b, double tol,
                              const SdpOptions& opts) {
  return joint_feasibility(tuple_to_measurements(shape, b), tol, opts);
}

bool inclusion_level1(const JewelShape& shape, const std::vector<HMat>& b,
                      double tol) {
  const MeasurementSet set = tuple_to_measurements(shape, b);
  return validate(set, tol).valid();
}

}  // namespace jewel
