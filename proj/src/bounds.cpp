#include "jewel/bounds.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "jewel/povm.hpp"

namespace jewel {

namespace {

bool is_prime_power(int n) {
  if (n < 2) return false;
  for (int p = 2; p <= n; ++p) {
    if (n % p) continue;
    int m = n;
    while (m % p == 0) m /= p;
    return m == 1;
  }
  return false;
}

void require_unit_box(const Eigen::VectorXd& s) {
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) < 0.0 || s(i) > 1.0)
      throw std::invalid_argument("region_contains: s outside [0,1]^g");
}

bool mub_pair_form_sqrt(double l, double m, int d) {
  return m <= mub_pair_boundary(l, d) + 1e-12;
}

bool mub_pair_form_quadratic(double l, double m, int d) {
  if (l + m <= 1.0 + 1e-12) return true;
  const double q =
      l * l + m * m + 2.0 * (d - 2) / double(d) * (1.0 - l) * (1.0 - m);
  return q <= 1.0 + 1e-12;
}

double boundary_residual_mub_pair(double l, double m, int d) {
  return std::min(std::abs(m - mub_pair_boundary(l, d)),
                  std::abs(l + m - 1.0));
}

}  // namespace

double mub_pair_boundary(double lambda, int d) {
  const double disc =
      (1.0 - d) * lambda * lambda + (d - 2) * lambda + 1.0;
  return (1.0 / d) * ((d - 2) * (1.0 - lambda) +
                      2.0 * std::sqrt(std::max(disc, 0.0)));
}

bool region_contains(Region region, const Eigen::VectorXd& s,
                     const RegionParams& params) {
  require_unit_box(s);
  switch (region) {
    case Region::kCloning: {
      const int g = static_cast<int>(s.size());
      const int d = params.d;
      if (d < 2) throw std::invalid_argument("cloning region needs d >= 2");
      const double b = double(d) * d - 1.0;
      double rhs = 0.0;
      for (Eigen::Index i = 0; i < s.size(); ++i)
        rhs += std::sqrt(s(i) * b + 1.0);
      rhs *= rhs;
      const double lhs =
          (g + d - 1.0) * (g - double(d) * d + d + b * s.sum());
      return lhs <= rhs + 1e-12;
    }
    case Region::kQc:
    case Region::kZhuMub:
      return s.squaredNorm() <= 1.0 + 1e-12;
    case Region::kDiamondScaled: {
      if (static_cast<int>(params.k.size()) != s.size())
        throw std::invalid_argument("diamond region needs the outcome shape");
      double acc = 0.0;
      for (Eigen::Index i = 0; i < s.size(); ++i) {
        const double km1 = params.k[i] - 1.0;
        const double c = s(i) * km1 * km1;
        acc += km1 * c * c;
      }
      return acc <= 1.0 + 1e-12;
    }
    case Region::kMubPair: {
      if (s.size() != 2)
        throw std::invalid_argument("mub_pair region is two-dimensional");
      if (params.d < 2) throw std::invalid_argument("mub_pair needs d >= 2");
      const bool a = mub_pair_form_sqrt(s(0), s(1), params.d);
      const bool b = mub_pair_form_quadratic(s(0), s(1), params.d);
      if (a != b &&
          boundary_residual_mub_pair(s(0), s(1), params.d) > 1e-9)
        throw std::logic_error("mub_pair: the two algebraic forms disagree");
      return a;
    }
    case Region::kPlanarSum: {
      const int g = static_cast<int>(s.size());
      return s.sum() <= 1.0 / std::sin(std::numbers::pi / (2.0 * g)) + 1e-12;
    }
  }
  throw std::invalid_argument("region_contains: unknown region");
}

double region_ray_boundary(Region region, const Eigen::VectorXd& direction,
                           const RegionParams& params, double width) {
  if (direction.maxCoeff() <= 0.0)
    throw std::invalid_argument("region_ray_boundary: direction must be nonzero");
  const double cap = 1.0 / direction.maxCoeff();
  auto inside = [&](double t) {
    return region_contains(region, t * direction, params);
  };
  if (inside(cap)) return cap;
  double lo = 0.0, hi = cap;
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    (inside(mid) ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

BoundReport bound_report(int g, int d, const std::vector<int>& k) {
  if (g < 1 || d < 2 || static_cast<int>(k.size()) != g)
    throw std::invalid_argument("bound_report: need g >= 1, d >= 2, |k| = g");
  for (int ki : k)
    if (ki < 2)
      throw std::invalid_argument("bound_report: outcome counts must be >= 2");

  BoundReport rep;
  rep.g = g;
  rep.d = d;
  rep.k = k;

  const int k_max = *std::max_element(k.begin(), k.end());
  const double kd = double(k_max) * d;
  rep.cloning_symmetric = (g + kd) / (g * (1.0 + kd));

  rep.symmetrization_point.resize(g);
  for (int i = 0; i < g; ++i)
    rep.symmetrization_point(i) = 1.0 / (2.0 * d * (k[i] - 1));

  double fifth = 0.0;
  for (int ki : k) fifth += std::pow(double(ki - 1), 5.0);
  rep.diamond_qc_symmetric = 1.0 / std::sqrt(fifth);

  const double rt_g = std::sqrt(double(g));
  const bool anticommuting_ok =
      d >= (1 << static_cast<int>(std::ceil((g - 1) / 2.0)));
  rep.binary_qc = {1.0 / rt_g, anticommuting_ok,
                   anticommuting_ok ? "" : "needs d >= 2^ceil((g-1)/2)"};

  bool k_is_d = true;
  for (int ki : k) k_is_d = k_is_d && ki == d;
  const int g_mub = is_prime_power(d) ? d + 1 : max_mub_count(d);
  const bool mub_ok = k_is_d && g <= g_mub;
  const std::string mub_note =
      mub_ok ? "" : "needs k = d and g <= " + std::to_string(g_mub) +
                        " mutually unbiased bases";
  rep.mub_zhu = {1.0 / rt_g, mub_ok, mub_note};
  rep.mub_designolle = {(std::sqrt(double(d)) + g) /
                            (g * (std::sqrt(double(d)) + 1.0)),
                        mub_ok, mub_note};

  const bool binary = k_max == 2;
  const bool planar_ok = d == 2 && binary && g >= 2;
  rep.planar_symmetric = {
      1.0 / (g * std::sin(std::numbers::pi / (2.0 * g))), planar_ok,
      planar_ok ? "" : "needs d = 2, binary outcomes, g >= 2"};

  // Sanity: no reported lower bound may exceed an applicable upper bound.
  double best_upper = 1.0;
  for (const BoundEntry* e :
       {&rep.binary_qc, &rep.mub_zhu, &rep.mub_designolle,
        &rep.planar_symmetric})
    if (e->applicable) best_upper = std::min(best_upper, e->value);
  const double worst_lower =
      std::max({rep.cloning_symmetric, rep.diamond_qc_symmetric,
                rep.symmetrization_point.maxCoeff()});
  if (worst_lower > best_upper + 1e-12)
    throw std::logic_error("bound_report: a lower bound exceeds an upper bound");

  return rep;
}

std::string bound_table(const BoundReport& rep) {
  std::ostringstream os;
  os << "bounds for g=" << rep.g << ", d=" << rep.d << ", k=(";
  for (size_t i = 0; i < rep.k.size(); ++i)
    os << (i ? "," : "") << rep.k[i];
  os << ")\n";
  auto line = [&os](const std::string& name, double value,
                    const std::string& note) {
    os << "  " << name;
    for (size_t i = name.size(); i < 26; ++i) os << ' ';
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", value);
    os << buf;
    if (!note.empty()) os << "   [" << note << "]";
    os << "\n";
  };
  os << "lower bounds (guaranteed compatible):\n";
  line("cloning", rep.cloning_symmetric, "");
  std::ostringstream pt;
  pt << "(";
  for (int i = 0; i < rep.symmetrization_point.size(); ++i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", rep.symmetrization_point(i));
    pt << (i ? "," : "") << buf;
  }
  pt << ")";
  os << "  symmetrization point      " << pt.str() << "\n";
  line("matrix diamond / QC", rep.diamond_qc_symmetric, "");
  os << "upper bounds (necessary conditions):\n";
  auto upper = [&](const std::string& name, const BoundEntry& e) {
    if (e.applicable)
      line(name, e.value, "");
    else
      os << "  " << name << std::string(name.size() < 26 ? 26 - name.size() : 1, ' ')
         << "n/a   [" << e.note << "]\n";
  };
  upper("anti-commuting / QC", rep.binary_qc);
  upper("MUB (Zhu)", rep.mub_zhu);
  upper("MUB (Designolle)", rep.mub_designolle);
  upper("planar qubit", rep.planar_symmetric);
  return os.str();
}

}  // namespace jewel
