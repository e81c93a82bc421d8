#pragma once

// Two distinguishable atoms on the rotating ring (different tunnelings and
// rotation phases): the (Omega, beta) reduction, sector eigenproblem with
// unsymmetrized amplitudes, species-resolved momentum densities, and a
// distinguishable-particle exact-diagonalization oracle.
//
// Inner product is the plain sum_q A*(q) B(q).

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "ringlat/dimer.hpp"
#include "ringlat/lattice.hpp"

namespace ringlat {

struct HeteroParams {
  int N = 0;
  double J1 = 1, J2 = 1;
  double phi1 = 0, phi2 = 0;
  double U12 = 0;
};

void validate(const HeteroParams& p);

struct HeteroScales {
  double Omega = 0;  // sqrt(J1^2 + J2^2 + 2 J1 J2 cos(P - phi1 - phi2)), >= 0
  double beta = 0;   // branch-continuous internal phase offset
};

// Single-point evaluation; the atan branch follows the signs of the phasor
// components, which reproduces the identical-particle limit exactly.
HeteroScales hetero_scales(const HeteroParams& p, double P);

// Sweep handle carrying the unwrapping state: beta is kept continuous along
// the parameter path by tracking 2*pi jumps against the previous value.
class BetaSweep {
 public:
  HeteroScales next(const HeteroParams& p, double P);

 private:
  bool primed_ = false;
  double prevBeta_ = 0;
};

struct HeteroState {
  int N = 0;
  int p = 0;
  double P = 0;
  double Omega = 0;
  double beta = 0;
  double energy = 0;  // E/hbar
  double omega = 0;   // E/(hbar Omega)
  Eigen::VectorXcd A; // over the relative grid, sum |A|^2 = 1
  MomentumGrid grid;
  bool atPole = false;  // degenerate free level stuck at a kinetic pole
};

// All N eigenstates of the P sector: pole-bracketed roots of
// (1/N) sum_q 1/(omega + cos(q + beta)) = 1/K with K = U12/Omega, plus one
// level at each multiple pole (zero-sum amplitude combinations).
std::vector<HeteroState> solve_hetero_spectrum(const HeteroParams& p, double P);

// Large-N closed-form density for species 1 or 2 (the +-beta shift).
// Implemented for the equal-tunneling regime; unequal J is rejected.
double hetero_momentum_density(double q, const HeteroParams& p, double P, int species);

// Distinguishable-particle dense oracle, dimension N^2, sector-labelled by
// the two-particle translation operator.
EdSpectrum hetero_ed_oracle(const HeteroParams& p, int maxN = 64);

}  // namespace ringlat
