// Benchmark comparing the OpenMP sweep kernels against their serial
// reference implementations: jewel vertex-sweep membership, the exact
// witness check, and the per-direction region scan.

#include <omp.h>

#include <cstdio>
#include <vector>

#include "jewel/rng.hpp"
#include "jewel/scan.hpp"
#include "jewel/spectra.hpp"
#include "jewel/witness.hpp"

using namespace jewel;

namespace {

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const double t0 = omp_get_wtime();
    f();
    best = std::min(best, omp_get_wtime() - t0);
  }
  return best;
}

void report(const char* name, double serial, double parallel) {
  std::printf("%-34s serial %8.3f ms   parallel %8.3f ms   speedup %.2fx\n",
              name, serial * 1e3, parallel * 1e3, serial / parallel);
}

}  // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());

  {
    // 2^12 vertex inequalities on 24x24 blocks
    Rng rng(1);
    const JewelShape shape(std::vector<int>(12, 2));
    std::vector<HMat> x;
    for (int b = 0; b < shape.blocks(); ++b) x.push_back(rng.hermitian(24, 0.1));
    volatile bool sink = false;
    const double ts = time_best_of(
        3, [&] { sink = jewel_membership_serial(shape, x).member; });
    const double tp =
        time_best_of(3, [&] { sink = jewel_membership(shape, x).member; });
    report("jewel membership (2^12, n=24)", ts, tp);
  }

  {
    // mixed-outcome sweep: 3^7 vertices on 16x16 blocks
    Rng rng(2);
    const JewelShape shape(std::vector<int>(7, 3));
    std::vector<HMat> x;
    for (int b = 0; b < shape.blocks(); ++b) x.push_back(rng.hermitian(16, 0.05));
    volatile double sink = 0;
    const double ts = time_best_of(
        3, [&] { sink = jewel_membership_serial(shape, x).slack; });
    const double tp =
        time_best_of(3, [&] { sink = jewel_membership(shape, x).slack; });
    report("jewel membership (3^7, n=16)", ts, tp);
  }

  {
    // exact witness check, 2^14 sign patterns
    Rng rng(3);
    std::vector<HMat> blocks;
    for (int i = 0; i < 14; ++i) blocks.push_back(rng.hermitian(12, 0.02));
    const WitnessCandidate w = WitnessCandidate::binary(blocks);
    volatile bool sink = false;
    const double ts =
        time_best_of(3, [&] { sink = is_witness_exact_serial(w); });
    const double tp = time_best_of(3, [&] { sink = is_witness_exact(w); });
    report("witness exact check (2^14, n=12)", ts, tp);
  }

  {
    // region scan: per-direction robustness SDPs
    const MeasurementSet set = mub_povms(2, 2);
    ScanOptions par, ser;
    par.n_random = ser.n_random = 13;
    par.seed = ser.seed = 7;
    ser.parallel = false;
    volatile double sink = 0;
    const double ts =
        time_best_of(2, [&] { sink = region_scan(set, ser).rows[0].t_star; });
    const double tp =
        time_best_of(2, [&] { sink = region_scan(set, par).rows[0].t_star; });
    report("region scan (16 directions)", ts, tp);
  }

  return 0;
}
