#pragma once

// One atom on the rotating ring in the tight-binding model: dispersion
// -J cos(q - phi), ground-state structure, group velocity, and exact time
// evolution under rotation ramps.  hbar = 1; energies are rotating-frame
// quantities, the momentum labels q correspond to lab-frame momenta q/a.

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "ringlat/lattice.hpp"

namespace ringlat {

struct HubbardParams {
  int N = 0;
  double J = 1;    // tunneling frequency, either sign
  double phi = 0;  // per-site rotation phase
  double U = 0;    // on-site interaction (used by the two-atom modules)
};

void validate(const HubbardParams& p);

// omega_q = -J cos(q - phi) on the integer grid; one entry per grid point.
std::vector<std::pair<double, double>> dispersion_spectrum(const HubbardParams& p);

double dispersion(const HubbardParams& p, double q);

struct GroundStateSet {
  std::vector<GridPoint> momenta;
  double energy = 0;
  bool degenerate() const { return momenta.size() > 1; }
};

GroundStateSet ground_state_set(const HubbardParams& p, double degeneracyTol = -1);

// Envelope drift velocity a J sin(q - phi); identical in RF and MTRF.
double group_velocity(double q, const HubbardParams& p, double a);

enum class Basis { Site, Momentum };

struct OneParticleState {
  int N = 0;
  Basis basis = Basis::Site;
  Eigen::VectorXcd amp;  // site index n (Site) or integer-grid index (Momentum)

  static OneParticleState site_delta(int N, int site);
  static OneParticleState gaussian_packet(int N, double center, double width, double q0 = 0);
  static OneParticleState momentum_eigenstate(int N, GridPoint q);

  OneParticleState to_momentum() const;
  OneParticleState to_site() const;
  double norm() const { return amp.norm(); }
};

struct RampSchedule {
  std::function<double(double)> phiOfT;
  double T = 0;       // duration
  double h = 1e-3;    // integrator / quadrature step

  static RampSchedule constant(double phi, double T, double h = 1e-3);
  // phi(t) = phi0 + (phi1-phi0) * sin^2(pi t / 2 T_ramp) for t < T_ramp,
  // then held at phi1 until T_total.
  static RampSchedule smooth(double phi0, double phi1, double Tramp, double Ttotal, double h = 1e-3);
};

struct Trajectory {
  std::vector<double> times;
  std::vector<OneParticleState> states;  // momentum basis
};

// Exact evolution: H(t) is diagonal in the momentum basis for every phi, so
// each amplitude only accumulates the phase exp(-i Int omega_q dt'); the
// populations |c_q|^2 are conserved by construction.  Warns (via returned
// flag on the schedule check) when max |dphi/dt| > 0.1 |J|.
Trajectory evolve_one_particle(const OneParticleState& state, const HubbardParams& p,
                               const RampSchedule& ramp, int samples = 64);

bool ramp_is_adiabatic(const RampSchedule& ramp, double J);

// |c_q|^2 on the integer grid.
std::vector<std::pair<double, double>> momentum_distribution(const OneParticleState& state);

// Dense position-space Hamiltonian with hopping phases exp(+-i phi), plus
// optional per-link gauge phases (phases[n] applied to the n -> n+1 link).
Eigen::MatrixXcd dense_hamiltonian(const HubbardParams& p,
                                   const std::vector<double>& linkPhases = {});

// Serial position-basis reference: fixed-step RK4 integration of the same
// H(t).  Used to cross-check the momentum-basis evolution.
OneParticleState evolve_dense_rk4(const OneParticleState& state, const HubbardParams& p,
                                  const RampSchedule& ramp);

// Circular-mean packet centroid in sites, continuous (unwrapped) against a
// reference value from the previous sample.
double ring_centroid(const OneParticleState& siteState, double reference = 0);

// Least-squares slope of centroid vs time.
double fit_velocity(const std::vector<double>& t, const std::vector<double>& centroid);

}  // namespace ringlat
