#include "jewel/scan.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

#include "jewel/rng.hpp"

namespace jewel {

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

struct BoundColumn {
  std::string name;
  Region region;
  RegionParams params;
  bool applicable;
};

std::vector<BoundColumn> bound_columns(const MeasurementSet& set) {
  const int g = set.size();
  const int d = static_cast<int>(set.dim());
  const std::vector<int> k = set.shape();
  const int k_max = *std::max_element(k.begin(), k.end());
  const bool binary = k_max == 2;

  std::vector<BoundColumn> cols;
  cols.push_back({"cloning", Region::kCloning,
                  RegionParams{g, k_max * d, k}, true});
  cols.push_back({"diamond", Region::kDiamondScaled, RegionParams{g, d, k}, true});
  const bool qc_ok = d >= (1 << static_cast<int>(std::ceil((g - 1) / 2.0)));
  cols.push_back({"qc", Region::kQc, RegionParams{g, d, k}, qc_ok});
  cols.push_back({"planar", Region::kPlanarSum, RegionParams{g, d, k},
                  d == 2 && binary && g >= 2});
  return cols;
}

void scan_one(const MeasurementSet& set, const ScanOptions& opts,
              const std::vector<BoundColumn>& cols, ScanRow& row) {
  try {
    row.t_star = robustness(set, opts.kind, row.direction, opts.tol, opts.sdp);
    row.s = row.t_star * row.direction;
    row.status = "ok";
  } catch (const std::exception& e) {
    row.t_star = kNan;
    row.s = Eigen::VectorXd::Constant(row.direction.size(), kNan);
    row.status = std::string("error: ") + e.what();
  }
  row.bounds.assign(cols.size(), kNan);
  for (size_t c = 0; c < cols.size(); ++c)
    if (cols[c].applicable)
      row.bounds[c] =
          region_ray_boundary(cols[c].region, row.direction, cols[c].params);
}

}  // namespace

RegionScan region_scan(const MeasurementSet& set, const ScanOptions& opts) {
  if (opts.n_random < 0)
    throw std::invalid_argument("region_scan: n_random must be >= 0");
  const int g = set.size();

  RegionScan scan;
  scan.kind = opts.kind;
  scan.seed = opts.seed;
  const std::vector<BoundColumn> cols = bound_columns(set);
  for (const BoundColumn& c : cols) scan.bound_names.push_back(c.name);

  std::vector<Eigen::VectorXd> dirs;
  for (int i = 0; i < g; ++i) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(g);
    e(i) = 1.0;
    dirs.push_back(e);
  }
  dirs.push_back(Eigen::VectorXd::Constant(g, 1.0 / std::sqrt(double(g))));
  Rng rng(opts.seed);
  for (int r = 0; r < opts.n_random; ++r) {
    Eigen::VectorXd v(g);
    do {
      for (int i = 0; i < g; ++i) v(i) = std::abs(rng.gaussian());
    } while (v.norm() == 0.0);
    dirs.push_back(v / v.norm());
  }

  scan.rows.resize(dirs.size());
  for (size_t i = 0; i < dirs.size(); ++i) scan.rows[i].direction = dirs[i];

  const long n = static_cast<long>(dirs.size());
  if (opts.parallel) {
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) scan_one(set, opts, cols, scan.rows[i]);
  } else {
    for (long i = 0; i < n; ++i) scan_one(set, opts, cols, scan.rows[i]);
  }
  return scan;
}

void write_csv(const RegionScan& scan, std::ostream& out) {
  auto num = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  out << "# seed=" << scan.seed << " model="
      << (scan.kind == NoiseModel::Kind::kBalanced ? "balanced" : "linear");
  if (!scan.set_label.empty()) out << " set=" << scan.set_label;
  out << "\n";
  const int g = scan.rows.empty() ? 0 : int(scan.rows[0].direction.size());
  for (int i = 0; i < g; ++i) out << "dir_" << (i + 1) << ",";
  out << "t_star";
  for (int i = 0; i < g; ++i) out << ",s_" << (i + 1);
  for (const std::string& b : scan.bound_names) out << ",bound_" << b;
  out << ",status\n";
  for (const ScanRow& row : scan.rows) {
    for (int i = 0; i < g; ++i) out << num(row.direction(i)) << ",";
    out << num(row.t_star);
    for (int i = 0; i < g; ++i) out << "," << num(row.s(i));
    for (double b : row.bounds) out << "," << num(b);
    out << "," << row.status << "\n";
  }
}

}  // namespace jewel
