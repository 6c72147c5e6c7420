#pragma once

#include <string>
#include <vector>

#include "jewel/hermitian.hpp"

namespace jewel {

// Self-contained solver for small dense block-diagonal Hermitian SDPs in
// equality standard form,
//
//     min/max  sum_b <C_b, X_b> + q f
//     s.t.     sum_b <A_{i,b}, X_b> + d_i f = b_i     (i = 1..m)
//              X_b >= 0,   f in R free (optional single scalar),
//
// with the real inner product <A, B> = Re tr(A^* B). The algorithm is an
// infeasible-start primal-dual path follower with the HKM scaling direction
// and a Mehrotra predictor-corrector step; the size regime is a total block
// dimension of order 100, everything dense.

struct SdpTerm {
  int block = 0;
  CMat coeff;  // Hermitian, matching the block dimension
};

struct SdpConstraint {
  std::vector<SdpTerm> terms;
  double free_coeff = 0.0;
  double rhs = 0.0;
};

enum class SdpSense { kMinimize, kMaximize };

enum class SdpStatus {
  kOptimal,
  kPrimalInfeasible,
  kUnbounded,
  kMaxIterations,
  kNumericalFailure,
};

const char* to_string(SdpStatus s);

struct SdpProblem {
  std::vector<int> block_dims;
  std::vector<CMat> objective;  // per block; resized on demand, zero default
  bool has_free_scalar = false;
  double free_cost = 0.0;
  std::vector<SdpConstraint> constraints;
  SdpSense sense = SdpSense::kMinimize;

  int add_block(int dim);
  void enable_free_scalar(double cost);
  void add_objective(int block, const CMat& c);
  void add_constraint(SdpConstraint c);

  /// Expands the Hermitian matrix equality
  ///     sum (scale_b * X_b)  +  sum (w_j * x_j)  +  F * f  =  rhs
  /// into dim(rhs)^2 real scalar constraints. `scaled_blocks` are PSD blocks
  /// entering with a real scale, `scalar_weights` are 1x1 blocks whose value
  /// multiplies the given Hermitian weight matrix, and `free_weight` (may be
  /// null) is the coefficient matrix of the free scalar.
  void add_matrix_equality(
      const std::vector<std::pair<int, double>>& scaled_blocks,
      const std::vector<std::pair<int, CMat>>& scalar_weights,
      const CMat* free_weight, const CMat& rhs);

  int total_dim() const;
};

struct SdpOptions {
  double eps_gap = 1e-8;
  double eps_feas = 1e-8;
  double eps_psd = 1e-9;
  int max_iterations = 200;
  double step_fraction = 0.98;  // fraction-to-boundary
  double dedup_tol = 1e-10;     // rank threshold for constraint deduplication
  std::string dump_json_path;   // when set, the problem is dumped before solving
};

struct SdpSolution {
  SdpStatus status = SdpStatus::kNumericalFailure;
  std::vector<CMat> x;  // per-block Hermitian primal
  std::vector<CMat> z;  // per-block dual slack
  Eigen::VectorXd y;    // duals, indexed like the original constraints
  double free_value = 0.0;
  double primal_value = 0.0;
  double dual_value = 0.0;
  double gap = 0.0;  // primal_value - dual_value (minimize), reversed for maximize
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  Eigen::VectorXd farkas_ray;  // set when status == kPrimalInfeasible

  bool optimal() const { return status == SdpStatus::kOptimal; }
};

SdpSolution solve(const SdpProblem& problem, const SdpOptions& opts = {});

/// Phase-I margin maximization: given a pure equality system over PSD blocks
/// (no objective, no free scalar), computes
///     max t  s.t.  X_b - t I >= 0,  <A_i, X> = b_i,
/// by substituting X_b = Y_b + t I. A nonnegative margin (within tolerance)
/// certifies feasibility of the original PSD system. Unbounded status means
/// the equalities do not pin the total trace.
struct MarginResult {
  SdpStatus status = SdpStatus::kNumericalFailure;
  double margin = 0.0;
  std::vector<CMat> x;  // X_b = Y_b + t I at the optimum
  SdpSolution solution;
};

MarginResult max_margin(const SdpProblem& equality_system,
                        const SdpOptions& opts = {});

/// Aggregate telemetry over all Optimal solves in this process, used by the
/// acceptance suite to audit duality gaps and constraint residuals.
struct SolveStats {
  long optimal_solves = 0;
  long total_solves = 0;
  double max_gap = 0.0;
  double max_primal_residual = 0.0;
  double max_dual_residual = 0.0;
};

SolveStats solve_stats();
void reset_solve_stats();

/// Real orthonormal-style basis of Hermitian d x d matrices used to expand
/// matrix equalities: index order is diagonal entries, then (Re, Im) pairs of
/// the strict upper triangle, row-major.
struct HermitianBasis {
  static int size(int d) { return d * d; }
  static CMat element(int d, int idx);
  /// Component of a Hermitian matrix along element `idx`; equals
  /// Re tr(element * h).
  static double component(const CMat& h, int idx);
};

}  // namespace jewel
