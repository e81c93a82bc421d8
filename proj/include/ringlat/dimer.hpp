#pragma once

// Two identical bosons on the rotating ring: exact finite-N eigenproblem in
// each total-momentum sector, closed-form large-N limits, dimer observables,
// adiabatic ramps, and a position-basis exact-diagonalization oracle.
//
// Sector convention: P = 2*pi*p/N with integer index p; sectors differing by
// 2*pi in P are identified (grid membership of P/2 +- q is the operative
// rule).  States use the boson-doubled inner product 2 sum_q A*(q) B(q).

#include <complex>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "ringlat/lattice.hpp"
#include "ringlat/one_atom.hpp"

namespace ringlat {

// Integer grid when P is an even multiple of pi/N, half-integer when odd,
// so that P/2 +- q each run once over all single-particle momenta.
MomentumGrid relative_grid(int N, double P);
int total_momentum_index(int N, double P);  // p with P = 2*pi*p/N; rejects off-grid P

// Omega(P, phi) = 2 J cos(P/2 - phi); may be negative or zero.
double omega_scale(double J, double P, double phi);

struct DimerState {
  int N = 0;
  int p = 0;          // total momentum index, P = 2*pi*p/N
  double P = 0;
  double Omega = 0;
  double energy = 0;  // E/hbar, unscaled
  double omega = 0;   // E/(hbar Omega); NaN in the Omega = 0 sector
  Eigen::VectorXcd A; // relative amplitudes over the full relative grid
  MomentumGrid grid;
  bool nearPole = false;  // root closer than 1e-10 to a kinetic pole

  bool bound(double tol = 1e-12) const { return std::abs(energy) > std::abs(Omega) + tol; }
};

// All eigenstates of the P sector.  U != 0 uses pole-bracketed root finding
// on g(E) = (1/N) sum_q 1/(E + Omega cos q) - 1/U; |Omega| below threshold
// routes to the analytic on-site branch {E = U, E = 0 x (D-1)}.
std::vector<DimerState> solve_dimer_spectrum(int N, double P, double phi, double J, double U);

// Large-N bound-state frequency sgn(U) sqrt(Omega^2 + U^2).
double bound_energy_largeN(double Omega, double U);

// The bound state of a sector: the root outside the continuum band.
DimerState bound_state(int N, double P, double phi, double J, double U);

// Large-N closed-form probability density for the single-particle lattice
// momentum q; integrates to 1 over [-pi, pi).
double momentum_density_largeN(double q, double P, double phi, double J, double U);
double dimensionless_coupling(double P, double phi, double J, double U);  // K(P)

// Probability of measuring single-particle momentum k, proportional to
// |A(P/2 - k)|^2, normalized over the integer grid.
std::vector<std::pair<double, double>> momentum_probabilities_finiteN(const DimerState& state);

// rms relative separation in sites, minimal image n in [-N/2, N/2).
// Rejects continuum states.
double rms_size(const DimerState& state);
double rms_of_amplitudes(const MomentumGrid& grid, const Eigen::VectorXcd& A);

// ---------------------------------------------------------------------------
// Exact-diagonalization oracle: position-basis two-boson Hamiltonian in the
// symmetric subspace (dimension N(N+1)/2), labelled by total momentum via
// the two-particle translation operator.

struct EdLevel {
  double energy = 0;
  int p = 0;  // total momentum index mod N
};

struct EdSpectrum {
  int N = 0;
  std::vector<EdLevel> levels;            // sorted by energy
  std::vector<double> sector_energies(int p) const;  // sorted, p taken mod N
};

EdSpectrum ed_oracle(int N, double phi, double J, double U, int maxN = 64);

// ---------------------------------------------------------------------------
// Adiabatic ramps of the rotation phase at fixed P.

struct DimerRampTrace {
  std::vector<double> times;
  std::vector<double> phis;
  std::vector<double> fidelities;  // |<bound(phi(t)) | psi(t)>|^2
  std::vector<double> rmsSizes;
  std::vector<double> peakMomenta;  // argmax of the momentum probabilities
  DimerState finalState;
  double normDrift = 0;
};

// Fixed-step RK4 integration of the sector Schroedinger equation with
// Omega(t) = 2 J cos(P/2 - phi(t)).  Norm drift beyond 1e-8 is an error.
DimerRampTrace evolve_dimer_ramp(const DimerState& initial, const RampSchedule& ramp,
                                 double J, double U, int samples = 200);

}  // namespace ringlat
