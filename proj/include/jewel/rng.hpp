#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "jewel/hermitian.hpp"

namespace jewel {

/// Seeded random source. Uniform doubles are derived from the raw 64-bit
/// engine output so that streams are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  double uniform() {  // [0, 1)
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    have_spare_ = true;
    return u * f;
  }

  Complex cgaussian() { return Complex(gaussian(), gaussian()); }

  CMat ginibre(Eigen::Index rows, Eigen::Index cols) {
    CMat g(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i)
      for (Eigen::Index j = 0; j < cols; ++j) g(i, j) = cgaussian();
    return g;
  }

  HMat hermitian(Eigen::Index dim, double scale = 1.0) {
    return HMat::symmetrized(scale * ginibre(dim, dim));
  }

  /// Haar-distributed isometry with `cols` orthonormal columns in C^rows.
  CMat isometry(Eigen::Index rows, Eigen::Index cols) {
    Eigen::HouseholderQR<CMat> qr(ginibre(rows, cols));
    CMat q = qr.householderQ() * CMat::Identity(rows, cols);
    return q;
  }

  std::uint64_t raw() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace jewel
