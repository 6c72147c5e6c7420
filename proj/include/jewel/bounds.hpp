#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace jewel {

/// Closed-form compatibility regions. `params.d` is the dimension the named
/// region is evaluated at; for kCloning that is the effective dimension
/// (k_max * d when used as a lower bound for shape k).
enum class Region {
  kCloning,        // asymmetric cloning region at dimension d
  kQc,             // positive part of the Euclidean unit ball
  kDiamondScaled,  // (1/(k_i-1)^2) . QC_{sum(k_i-1)}
  kMubPair,        // canonically conjugated MUB pair, dimension d
  kZhuMub,         // sum lambda_i^2 <= 1
  kPlanarSum,      // sum s_i <= 1 / sin(pi/(2g))
};

struct RegionParams {
  int g = 0;
  int d = 0;
  std::vector<int> k;
};

bool region_contains(Region region, const Eigen::VectorXd& s,
                     const RegionParams& params);

/// The MUB-pair boundary curve mu(lambda) in dimension d.
double mub_pair_boundary(double lambda, int d);

/// Largest t with t * direction inside the region (bisection; direction
/// entrywise nonnegative, not all zero).
double region_ray_boundary(Region region, const Eigen::VectorXd& direction,
                           const RegionParams& params, double width = 1e-10);

struct BoundEntry {
  double value = 0.0;
  bool applicable = false;
  std::string note;
};

/// Assembled analytic lower/upper bounds on the balanced compatibility region
/// for given (g, d, k), mirroring the summary table.
struct BoundReport {
  int g = 0;
  int d = 0;
  std::vector<int> k;

  // Lower bounds: symmetric noise values guaranteed compatible.
  double cloning_symmetric = 0.0;           // (g + k_max d)/(g (1 + k_max d))
  Eigen::VectorXd symmetrization_point;     // s_i = 1/(2d(k_i - 1))
  double diamond_qc_symmetric = 0.0;        // (sum (k_i-1)^5)^{-1/2}

  // Upper bounds, each with its applicability condition.
  BoundEntry binary_qc;        // 1/sqrt(g), needs d >= 2^ceil((g-1)/2)
  BoundEntry mub_zhu;          // 1/sqrt(g), needs k = d^g and enough MUBs
  BoundEntry mub_designolle;   // (sqrt d + g)/(g (sqrt d + 1)), same scope
  BoundEntry planar_symmetric; // 1/(g sin(pi/(2g))), qubit binary only

  std::vector<std::string> notes;
};

BoundReport bound_report(int g, int d, const std::vector<int>& k);

std::string bound_table(const BoundReport& report);

}  // namespace jewel
