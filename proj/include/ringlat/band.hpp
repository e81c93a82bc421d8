#pragma once

// Continuum single-particle problem on the rotating ring: Bloch states under
// twisted boundary conditions in a plane-wave basis, Wannier construction
// with a fixed phase convention, and the complex tunneling element.
//
// Computational frame is the momentum-translated rotating frame; reported
// band frequencies follow the convention Omega_n = E_n - k_v^2/(2m) so that
// the V = 0 spectrum is (K_n^2 - k_v^2)/(2m).  hbar = 1.

#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "ringlat/lattice.hpp"

namespace ringlat {

using cdouble = std::complex<double>;

struct ContinuumProblem {
  RingLattice lattice;
  RotationSpec rotation;
  double mass = 1.0;
  std::function<double(double)> potential;  // periodic over a, real
  int basisCutoff = 16;                     // plane waves per Bloch momentum: 2M+1

  // Photon-recoil unit E_R = pi^2/(2 m a^2).
  double recoil() const { return pi * pi / (2.0 * mass * lattice.a * lattice.a); }

  // V(x) = V0 sin^2(pi x / a), the ideal optical lattice.
  static ContinuumProblem sinusoidal(const RingLattice& lat, const RotationSpec& rot,
                                     double mass, double V0, int cutoff = 16);
  // Piecewise-linear interpolation of (x, V) samples covering one period.
  static ContinuumProblem from_samples(const RingLattice& lat, const RotationSpec& rot,
                                       double mass,
                                       const std::vector<std::pair<double, double>>& samples,
                                       int cutoff = 16);
};

struct BlochState {
  int n = 0;        // lattice index, k_n = 2*pi*n/L
  double K = 0;     // Bloch wave vector K_n = k_n - k_v
  double omega = 0; // band frequency with the k_v^2/(2m) offset applied
  double rawEnergy = 0;                // eigenvalue of -(1/2m)d2/dx2 + V
  std::vector<cdouble> coeff;          // plane-wave coefficients, m = -M..M
};

struct BlochSolution {
  RingLattice lattice;
  RotationSpec rotation;
  double mass = 1;
  int cutoff = 16;
  std::vector<BlochState> band;        // lowest band, one state per k_n
  std::vector<std::string> diagnostics;

  // Psi_n(x) = (1/sqrt L) sum_m c_m exp(i (K_n + 2*pi*m/a) x)
  cdouble evaluate(const BlochState& s, double x) const;
  // max_x |Psi(x+L) - exp(-i k_v L) Psi(x)| over a sample grid
  double twisted_boundary_residual(const BlochState& s, int samples = 64) const;
};

// Diagonalizes -(1/2m)d2/dx2 + V(x) in the basis exp(i(K_n + 2*pi*m/a)x),
// |m| <= M, for every k_n on the integer grid; keeps the lowest band with
// the phase convention Psi_n(0) real and positive.
BlochSolution solve_bloch(const ContinuumProblem& problem);

struct WannierSet {
  BlochSolution bloch;  // phase-fixed states the set was built from

  // W(x) = W_0(x); W_n(x) = exp(-i k_v x_n) W(x - x_n) with the twist rule
  // W(y + L) = exp(-i k_v L) W(y) applied on wrap-around.
  cdouble evaluate_W0(double x) const;
  cdouble evaluate(int site, double x) const;

  // Gram matrix deviation max_{mn} |(W_m, W_n) - delta_mn|
  double orthonormality_residual() const;
  // Fraction of |W0|^2 within [-a/2, a/2)
  double central_fraction() const;
};

WannierSet build_wannier(const BlochSolution& solution);

struct TunnelingElement {
  double magnitude = 0;
  double theta = 0;          // phase of J
  cdouble J{0, 0};
  double magnitudeAtZeroPhi = 0;  // |J| recomputed at v = 0, same potential
  double magnitudeDeviation = 0;  // |J(phi)|/|J(0)| - 1
};

// J = -2 Int W*(x-a) (H'_v W)(x) dx by composite trapezoidal quadrature on
// the periodic sample grid.  Refuses when the Wannier function is not
// localized (e.g. V = 0).
TunnelingElement tunneling_element(const WannierSet& wannier, const ContinuumProblem& problem);

// Harmonic-well surrogate: w(x) is the Gaussian ground state of the
// quadratic fit to the well at x = 0, J evaluated against the rotating-frame
// Hamiltonian.  Used to report the construction-dependence of J.
TunnelingElement tunneling_element_harmonic(const ContinuumProblem& problem);

// Closed form for a harmonic well of frequency w0: J = w0 exp(-m w0 a^2),
// independent of the rotation phase.
double harmonic_tunneling(double trapFrequency, double mass, double a);

}  // namespace ringlat
