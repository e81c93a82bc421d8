// Compares the OpenMP-parallel kernels against their serial runs: identical
// results required, wall times reported.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "ringlat/band.hpp"
#include "ringlat/dimer.hpp"
#include "ringlat/one_atom.hpp"

using namespace ringlat;

namespace {

double now() {
  using clock = std::chrono::steady_clock;
  return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

void set_threads(int n) {
#ifdef _OPENMP
  omp_set_num_threads(n);
#else
  (void)n;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

template <class F>
double timed(F&& f) {
  double t0 = now();
  f();
  return now() - t0;
}

}  // namespace

int main() {
  const int nThreads = max_threads();
  std::printf("threads available: %d\n\n", nThreads);

  {  // Bloch band: one diagonalization per lattice momentum
    auto lat = RingLattice::make(64);
    auto rot = RotationSpec::from_phi(0.3, 1.0, lat);
    auto prob = ContinuumProblem::sinusoidal(lat, rot, 1.0, 10.0 * pi * pi / 2.0, 48);
    BlochSolution serial, parallel;
    set_threads(1);
    double ts = timed([&] { serial = solve_bloch(prob); });
    set_threads(nThreads);
    double tp = timed([&] { parallel = solve_bloch(prob); });
    double dev = 0;
    for (std::size_t i = 0; i < serial.band.size(); ++i)
      dev = std::max(dev, std::abs(serial.band[i].omega - parallel.band[i].omega));
    std::printf("bloch band (N=64, 97 plane waves): serial %.3fs  parallel %.3fs  speedup %.2fx  max|dE| %.1e\n",
                ts, tp, ts / tp, dev);
  }

  {  // Dimer sectors: one root-finding pass per total momentum
    const int N = 512;
    std::vector<std::vector<DimerState>> serial(N), parallel(N);
    auto solveAll = [&](std::vector<std::vector<DimerState>>& out) {
#pragma omp parallel for schedule(dynamic)
      for (int p = 0; p < N; ++p) out[p] = solve_dimer_spectrum(N, 2.0 * pi * p / N, 0.2, 1.0, 2.5);
    };
    set_threads(1);
    double ts = timed([&] { solveAll(serial); });
    set_threads(nThreads);
    double tp = timed([&] { solveAll(parallel); });
    double dev = 0;
    for (int p = 0; p < N; ++p)
      for (std::size_t k = 0; k < serial[p].size(); ++k)
        dev = std::max(dev, std::abs(serial[p][k].energy - parallel[p][k].energy));
    std::printf("dimer sectors (N=512, all P): serial %.3fs  parallel %.3fs  speedup %.2fx  max|dE| %.1e\n",
                ts, tp, ts / tp, dev);
  }

  {  // Dispersion sweep: independent phi samples
    HubbardParams hp{256, 1.0, 0.0, 0.0};
    const int points = 4001;
    auto sweep = [&](std::vector<double>& sums) {
#pragma omp parallel for schedule(static)
      for (int i = 0; i < points; ++i) {
        HubbardParams p = hp;
        p.phi = -pi + 2 * pi * i / (points - 1);
        double s = 0;
        for (auto& [q, w] : dispersion_spectrum(p)) s += w * w;
        sums[i] = s;
      }
    };
    std::vector<double> serial(points), parallel(points);
    set_threads(1);
    double ts = timed([&] { sweep(serial); });
    set_threads(nThreads);
    double tp = timed([&] { sweep(parallel); });
    double dev = 0;
    for (int i = 0; i < points; ++i) dev = std::max(dev, std::abs(serial[i] - parallel[i]));
    std::printf("dispersion sweep (N=256, 4001 points): serial %.3fs  parallel %.3fs  speedup %.2fx  max|d| %.1e\n",
                ts, tp, ts / tp, dev);
  }

  return 0;
}
