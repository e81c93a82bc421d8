#include "ringlat/one_atom.hpp"

#include <cmath>

namespace ringlat {

namespace {

std::vector<double> integer_grid(int N) {
  return build_momentum_grid(RingLattice::make(N), GridKind::Integer).values();
}

// Simpson integral of cos(q - phi(t)) over [0, t] with step ~h.
double phase_integral(double q, const RampSchedule& ramp, double t) {
  if (t <= 0) return 0;
  int n = std::max(2, int(std::ceil(t / ramp.h)));
  if (n % 2) ++n;
  const double dt = t / n;
  auto f = [&](double tt) { return std::cos(q - ramp.phiOfT(tt)); };
  double acc = f(0) + f(t);
  for (int j = 1; j < n; ++j) acc += (j % 2 ? 4.0 : 2.0) * f(j * dt);
  return acc * dt / 3.0;
}

}  // namespace

void validate(const HubbardParams& p) {
  if (p.N < 2) throw std::invalid_argument("HubbardParams: N must be >= 2");
  if (!std::isfinite(p.J) || !std::isfinite(p.phi) || !std::isfinite(p.U))
    throw std::invalid_argument("HubbardParams: parameters must be finite");
}

double dispersion(const HubbardParams& p, double q) { return -p.J * std::cos(q - p.phi); }

std::vector<std::pair<double, double>> dispersion_spectrum(const HubbardParams& p) {
  validate(p);
  std::vector<std::pair<double, double>> out;
  for (double q : integer_grid(p.N)) out.emplace_back(q, dispersion(p, q));
  return out;
}

GroundStateSet ground_state_set(const HubbardParams& p, double degeneracyTol) {
  validate(p);
  if (degeneracyTol < 0) degeneracyTol = 1e-9 * std::abs(p.J);
  auto grid = build_momentum_grid(RingLattice::make(p.N), GridKind::Integer);
  GroundStateSet out;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i)
    best = std::min(best, dispersion(p, grid.point(i).value()));
  out.energy = best;
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (dispersion(p, grid.point(i).value()) <= best + degeneracyTol)
      out.momenta.push_back(grid.point(i));
  return out;
}

double group_velocity(double q, const HubbardParams& p, double a) {
  validate(p);
  if (!(a > 0)) throw std::invalid_argument("group_velocity: lattice spacing must be > 0");
  return a * p.J * std::sin(q - p.phi);
}

OneParticleState OneParticleState::site_delta(int N, int site) {
  OneParticleState s;
  s.N = N;
  s.basis = Basis::Site;
  s.amp = Eigen::VectorXcd::Zero(N);
  s.amp(((site % N) + N) % N) = 1.0;
  return s;
}

OneParticleState OneParticleState::gaussian_packet(int N, double center, double width, double q0) {
  OneParticleState s;
  s.N = N;
  s.basis = Basis::Site;
  s.amp = Eigen::VectorXcd::Zero(N);
  for (int n = 0; n < N; ++n) {
    // minimal-image distance to the packet center on the ring
    double d = std::remainder(n - center, double(N));
    s.amp(n) = std::exp(-d * d / (2 * width * width)) *
               std::complex<double>(std::cos(q0 * n), std::sin(q0 * n));
  }
  s.amp.normalize();
  return s;
}

OneParticleState OneParticleState::momentum_eigenstate(int N, GridPoint q) {
  auto grid = build_momentum_grid(RingLattice::make(N), GridKind::Integer);
  OneParticleState s;
  s.N = N;
  s.basis = Basis::Momentum;
  s.amp = Eigen::VectorXcd::Zero(N);
  for (std::size_t i = 0; i < grid.size(); ++i)
    if (grid.numerators[i] == wrap_numerator(q.num, N)) s.amp(i) = 1.0;
  if (s.amp.norm() == 0) throw std::invalid_argument("momentum_eigenstate: q not on the integer grid");
  return s;
}

OneParticleState OneParticleState::to_momentum() const {
  if (basis == Basis::Momentum) return *this;
  auto qs = integer_grid(N);
  OneParticleState out;
  out.N = N;
  out.basis = Basis::Momentum;
  out.amp = Eigen::VectorXcd::Zero(N);
  for (int i = 0; i < N; ++i) {
    std::complex<double> acc(0, 0);
    for (int n = 0; n < N; ++n)
      acc += amp(n) * std::complex<double>(std::cos(qs[i] * n), -std::sin(qs[i] * n));
    out.amp(i) = acc / std::sqrt(double(N));
  }
  return out;
}

OneParticleState OneParticleState::to_site() const {
  if (basis == Basis::Site) return *this;
  auto qs = integer_grid(N);
  OneParticleState out;
  out.N = N;
  out.basis = Basis::Site;
  out.amp = Eigen::VectorXcd::Zero(N);
  for (int n = 0; n < N; ++n) {
    std::complex<double> acc(0, 0);
    for (int i = 0; i < N; ++i)
      acc += amp(i) * std::complex<double>(std::cos(qs[i] * n), std::sin(qs[i] * n));
    out.amp(n) = acc / std::sqrt(double(N));
  }
  return out;
}

RampSchedule RampSchedule::constant(double phi, double T, double h) {
  return {[phi](double) { return phi; }, T, h};
}

RampSchedule RampSchedule::smooth(double phi0, double phi1, double Tramp, double Ttotal, double h) {
  return {[=](double t) {
            if (t >= Tramp) return phi1;
            double s = std::sin(pi * t / (2 * Tramp));
            return phi0 + (phi1 - phi0) * s * s;
          },
          Ttotal, h};
}

bool ramp_is_adiabatic(const RampSchedule& ramp, double J) {
  double maxRate = 0;
  int n = std::max(4, int(ramp.T / ramp.h));
  for (int j = 0; j < n; ++j) {
    double t = ramp.T * (j + 0.5) / n;
    double d = std::abs(ramp.phiOfT(std::min(t + ramp.h, ramp.T)) - ramp.phiOfT(t)) / ramp.h;
    maxRate = std::max(maxRate, d);
  }
  return maxRate <= 0.1 * std::abs(J);
}

Trajectory evolve_one_particle(const OneParticleState& state, const HubbardParams& p,
                               const RampSchedule& ramp, int samples) {
  validate(p);
  if (std::abs(state.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("evolve_one_particle: state must be normalized");
  OneParticleState mom = state.to_momentum();
  auto qs = integer_grid(p.N);

  Trajectory traj;
  for (int s = 0; s <= samples; ++s) {
    double t = ramp.T * s / samples;
    OneParticleState st = mom;
    for (int i = 0; i < p.N; ++i) {
      // omega_q(t) = -J cos(q - phi(t)); amplitude phase exp(-i Int omega dt)
      double ph = p.J * phase_integral(qs[i], ramp, t);
      st.amp(i) *= std::complex<double>(std::cos(ph), std::sin(ph));
    }
    traj.times.push_back(t);
    traj.states.push_back(std::move(st));
  }
  return traj;
}

std::vector<std::pair<double, double>> momentum_distribution(const OneParticleState& state) {
  if (std::abs(state.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("momentum_distribution: state must be normalized");
  OneParticleState mom = state.to_momentum();
  auto qs = integer_grid(state.N);
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < state.N; ++i) out.emplace_back(qs[i], std::norm(mom.amp(i)));
  return out;
}

Eigen::MatrixXcd dense_hamiltonian(const HubbardParams& p, const std::vector<double>& linkPhases) {
  validate(p);
  if (!linkPhases.empty() && int(linkPhases.size()) != p.N)
    throw std::invalid_argument("dense_hamiltonian: need one gauge phase per link");
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(p.N, p.N);
  for (int n = 0; n < p.N; ++n) {
    int np = (n + 1) % p.N;
    double ph = p.phi + (linkPhases.empty() ? 0.0 : linkPhases[n]);
    std::complex<double> hop = -0.5 * p.J * std::complex<double>(std::cos(ph), std::sin(ph));
    H(np, n) += hop;
    H(n, np) += std::conj(hop);
  }
  return H;
}

OneParticleState evolve_dense_rk4(const OneParticleState& state, const HubbardParams& p,
                                  const RampSchedule& ramp) {
  validate(p);
  OneParticleState site = state.to_site();
  Eigen::VectorXcd c = site.amp;
  const std::complex<double> mi(0, -1);
  auto rhs = [&](double t, const Eigen::VectorXcd& v) -> Eigen::VectorXcd {
    HubbardParams pt = p;
    pt.phi = ramp.phiOfT(t);
    return mi * (dense_hamiltonian(pt) * v);
  };
  int n = std::max(1, int(std::ceil(ramp.T / ramp.h)));
  double dt = ramp.T / n;
  for (int j = 0; j < n; ++j) {
    double t = j * dt;
    Eigen::VectorXcd k1 = rhs(t, c);
    Eigen::VectorXcd k2 = rhs(t + dt / 2, c + (dt / 2) * k1);
    Eigen::VectorXcd k3 = rhs(t + dt / 2, c + (dt / 2) * k2);
    Eigen::VectorXcd k4 = rhs(t + dt, c + dt * k3);
    c += (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
  }
  site.amp = c;
  return site;
}

double ring_centroid(const OneParticleState& siteState, double reference) {
  OneParticleState s = siteState.to_site();
  std::complex<double> acc(0, 0);
  for (int n = 0; n < s.N; ++n)
    acc += std::norm(s.amp(n)) * std::complex<double>(std::cos(2 * pi * n / s.N), std::sin(2 * pi * n / s.N));
  double c = std::arg(acc) * s.N / (2 * pi);
  // unwrap against the reference so that a drifting packet has a continuous track
  double period = s.N;
  c += period * std::round((reference - c) / period);
  return c;
}

double fit_velocity(const std::vector<double>& t, const std::vector<double>& centroid) {
  if (t.size() != centroid.size() || t.size() < 2)
    throw std::invalid_argument("fit_velocity: need matching samples");
  double n = double(t.size()), st = 0, sc = 0, stt = 0, stc = 0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    st += t[i];
    sc += centroid[i];
    stt += t[i] * t[i];
    stc += t[i] * centroid[i];
  }
  return (n * stc - st * sc) / (n * stt - st * st);
}

}  // namespace ringlat
