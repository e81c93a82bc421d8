#pragma once

// Ring-lattice geometry, momentum-grid conventions and rotation-phase
// bookkeeping shared by all other modules.  Units: hbar = 1.

#include <cmath>
#include <stdexcept>
#include <vector>

namespace ringlat {

inline constexpr double pi = 3.14159265358979323846;

// Canonical momentum interval is [-pi, pi), with +pi mapped to -pi.
double wrap_momentum(double q);

// Wrap an integer numerator (momentum = num * pi / N) into [-N, N).
int wrap_numerator(int num, int N);

struct RingLattice {
  int N = 0;     // site count
  double a = 1;  // lattice spacing
  double L = 0;  // circumference, L = N*a

  static RingLattice make(int N, double a = 1.0);
  bool even() const { return N % 2 == 0; }
  double site(int n) const { return n * a; }
  double wave_vector(int n) const { return 2.0 * pi * n / L; }
};

enum class GridKind { Integer, HalfInteger };

// A lattice momentum stored exactly as num*pi/N so that grid membership
// and modular comparisons need no floating tolerance.
struct GridPoint {
  int num = 0;  // numerator, in [-N, N)
  int N = 1;
  double value() const { return num * pi / N; }
};

struct MomentumGrid {
  GridKind kind = GridKind::Integer;
  int N = 0;
  std::vector<int> numerators;  // sorted ascending, in [-N, N)

  std::vector<double> values() const;
  GridPoint point(int i) const { return {numerators[i], N}; }
  std::size_t size() const { return numerators.size(); }
  bool contains_numerator(int num) const;
};

// Integer kind:      q = 2*pi*n/N, n = -N/2..N/2-1 (even N) or
//                    n = -(N-1)/2..(N-1)/2 (odd N).
// Half-integer kind: the integer grid shifted by pi/N.
// Equivalently: all multiples of pi/N in [-pi, pi) whose numerator has the
// even (integer) or odd (half-integer) parity.
MomentumGrid build_momentum_grid(const RingLattice& lattice, GridKind kind);

struct RotationSpec {
  double v = 0;    // rotation velocity
  double m = 1;    // atom mass
  double Phi = 0;  // end-to-end twist, Phi = m*v*L (hbar = 1)
  double phi = 0;  // per-site twist, phi = Phi/N
  double k_v = 0;  // m*v

  static RotationSpec from_velocity(double v, double m, const RingLattice& lat);
  static RotationSpec from_Phi(double Phi, double m, const RingLattice& lat);
  static RotationSpec from_phi(double phi, double m, const RingLattice& lat);
};

}  // namespace ringlat
