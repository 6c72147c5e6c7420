#pragma once

#include <string>
#include <vector>

#include "jewel/compat.hpp"
#include "jewel/hermitian.hpp"

namespace jewel {

/// Defining tuple (A_1, ..., A_m) of a free spectrahedron
/// D_A = { X : sum_i A_i (x) X_i <= I }. The named constructions are all
/// diagonal; the flag lets membership avoid materializing Kronecker products.
struct FreeTuple {
  int dimD = 0;
  std::vector<HMat> matrices;
  bool diagonal = false;
  std::string label;

  int size() const { return static_cast<int>(matrices.size()); }
};

struct JewelShape {
  explicit JewelShape(std::vector<int> k);

  const std::vector<int>& k() const { return k_; }
  int groups() const { return static_cast<int>(k_.size()); }
  int blocks() const;         // sum (k_i - 1)
  long vertex_count() const;  // prod k_i

 private:
  std::vector<int> k_;
};

enum class BaseKind { kJewelBase, kCuboidBase, kDiamond, kCube };

/// jewel base k: the k-1 diagonals v_j(e) = -2/k + 2 delta_{e,j} on C^k;
/// cuboid base k: y_j = (k/2)(e_k - e_j) on C^k;
/// cube g: c_i = (e_i, -e_i) on C^{2g};
/// diamond g: the jewel with shape (2, ..., 2), diagonals on C^{2^g}.
FreeTuple named_base_tuple(BaseKind kind, int param);

/// Cartesian product: padded direct sums, level-1 set the product.
FreeTuple product_tuple(const FreeTuple& a, const FreeTuple& b);

/// Direct sum: A_i (x) I and I (x) B_j; level-1 sets must be bounded.
FreeTuple sum_tuple(const FreeTuple& a, const FreeTuple& b);

FreeTuple jewel_tuple(const JewelShape& shape);

/// Extremal points of the jewel base at level 1: -(k/2) e_i and (k/2)(1,..,1).
std::vector<Eigen::VectorXd> jewel_vertices(int k);

/// Extremal points of the matrix cuboid at level 1: concatenations of simplex
/// vertices w_i^{(k)}(j) = -2/k + 2 delta_{i,j} over the groups.
std::vector<Eigen::VectorXd> cuboid_vertices(const JewelShape& shape);

struct Membership {
  bool member = false;
  double slack = 0.0;  // 1 - max eig of the defining operator
};

/// Membership of X in D_A. Diagonal tuples decompose into one n x n test per
/// diagonal entry (run in parallel); dense tuples materialize the Kronecker
/// sum. The *_serial variants are the reference implementations.
Membership membership(const FreeTuple& a, const std::vector<HMat>& x,
                      double tol = 1e-9);
Membership membership_serial(const FreeTuple& a, const std::vector<HMat>& x,
                             double tol = 1e-9);

/// Jewel membership via the vertex sweep: checks the prod k_i inequalities
/// sum_{i,j} v_j^{(k_i)}(e_i) X_{i,j} <= I without building the tuple.
Membership jewel_membership(const JewelShape& shape,
                            const std::vector<HMat>& x, double tol = 1e-9);
Membership jewel_membership_serial(const JewelShape& shape,
                                   const std::vector<HMat>& x,
                                   double tol = 1e-9);

/// Converts a spectrahedral tuple B (blocks of size d, sum(k_i - 1) of them)
/// back to POVMs via E_j = (B_j + (2/k_i) I)/2 and last-effect completion.
MeasurementSet tuple_to_measurements(const JewelShape& shape,
                                     const std::vector<HMat>& b);

/// Inclusion of the matrix jewel into D_B at all levels, decided through the
/// joint-measurability SDP of the converted POVMs.
CompatVerdict inclusion_check(const JewelShape& shape,
                              const std::vector<HMat>& b, double tol = 1e-7,
                              const SdpOptions& opts = {});

/// Level-1 inclusion: every converted tuple is a valid POVM.
bool inclusion_level1(const JewelShape& shape, const std::vector<HMat>& b,
                      double tol = kValidateTol);

}  // namespace jewel
