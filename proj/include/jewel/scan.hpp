#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "jewel/bounds.hpp"
#include "jewel/compat.hpp"

namespace jewel {

struct ScanOptions {
  NoiseModel::Kind kind = NoiseModel::Kind::kBalanced;
  int n_random = 16;
  std::uint64_t seed = 1;
  bool parallel = true;
  double tol = 1e-7;
  SdpOptions sdp;
};

struct ScanRow {
  Eigen::VectorXd direction;  // unit-normalized, entrywise >= 0
  double t_star = 0.0;
  Eigen::VectorXd s;  // t_star * direction
  std::vector<double> bounds;  // per bound column; NaN when not applicable
  std::string status = "ok";
};

struct RegionScan {
  std::string set_label;
  NoiseModel::Kind kind = NoiseModel::Kind::kBalanced;
  std::uint64_t seed = 0;
  std::vector<std::string> bound_names;
  std::vector<ScanRow> rows;  // g axes, the symmetric direction, then randoms
};

/// Per-direction noise robustness of the set together with the analytic
/// region boundaries along each ray. Directions are the g axes, the symmetric
/// direction, and n_random seeded positive-orthant unit vectors; solves may
/// run concurrently but rows keep the input order. Solver failures are
/// recorded per row and the scan continues.
RegionScan region_scan(const MeasurementSet& set, const ScanOptions& opts);

/// CSV with one header row and one row per direction; floats use %.17g.
void write_csv(const RegionScan& scan, std::ostream& out);

}  // namespace jewel
