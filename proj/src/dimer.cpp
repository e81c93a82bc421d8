#include "ringlat/dimer.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace ringlat {

namespace {

constexpr double kOmegaZeroFactor = 1e-12;
constexpr double kNearPoleFactor = 1e-10;

struct PoleSet {
  std::vector<double> position;  // -Omega cos q, sorted ascending, distinct
  std::vector<int> multiplicity;
};

// Poles grouped by |numerator| so that the q <-> -q boson degeneracy is
// collapsed exactly, without floating comparisons.
PoleSet pole_structure(const MomentumGrid& grid, double Omega) {
  std::map<int, int> groups;  // |num| -> multiplicity
  for (int s : grid.numerators) groups[std::abs(s)]++;
  PoleSet ps;
  for (auto& [absnum, mult] : groups) {
    ps.position.push_back(-Omega * std::cos(absnum * pi / grid.N));
    ps.multiplicity.push_back(mult);
  }
  std::vector<std::size_t> order(ps.position.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return ps.position[a] < ps.position[b]; });
  PoleSet sorted;
  for (auto i : order) {
    sorted.position.push_back(ps.position[i]);
    sorted.multiplicity.push_back(ps.multiplicity[i]);
  }
  return sorted;
}

double g_of(const PoleSet& ps, int N, double U, double e) {
  double acc = 0;
  for (std::size_t j = 0; j < ps.position.size(); ++j)
    acc += ps.multiplicity[j] / (e - ps.position[j]);
  return acc / N - 1.0 / U;
}

// Bisection on an interval with known signs at the open ends (+ at lo, - at
// hi); g is strictly decreasing there.
double bisect_root(const PoleSet& ps, int N, double U, double lo, double hi) {
  for (int it = 0; it < 200 && hi - lo > 0; ++it) {
    double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (g_of(ps, N, U, mid) > 0)
      lo = mid;
    else
      hi = mid;
  }
  double e = 0.5 * (lo + hi);
  // one Newton polish; g' = -(1/N) sum m/(e-c)^2
  double g = g_of(ps, N, U, e), gp = 0;
  for (std::size_t j = 0; j < ps.position.size(); ++j)
    gp -= ps.multiplicity[j] / ((e - ps.position[j]) * (e - ps.position[j]));
  gp /= N;
  if (gp != 0) {
    double e2 = e - g / gp;
    if (e2 > lo && e2 < hi) e = e2;
  }
  return e;
}

DimerState make_state(int N, int p, double P, double Omega, const MomentumGrid& grid, double energy,
                      double scale) {
  DimerState st;
  st.N = N;
  st.p = p;
  st.P = P;
  st.Omega = Omega;
  st.energy = energy;
  st.omega = (Omega != 0) ? energy / Omega : std::numeric_limits<double>::quiet_NaN();
  st.grid = grid;
  st.A.resize(grid.size());
  double minDist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double c = -Omega * std::cos(grid.point(int(i)).value());
    st.A(i) = 1.0 / (energy - c);
    minDist = std::min(minDist, std::abs(energy - c));
  }
  st.nearPole = minDist < kNearPoleFactor * scale;
  st.A /= std::sqrt(2.0 * st.A.squaredNorm());
  return st;
}

}  // namespace

int total_momentum_index(int N, double P) {
  double step = 2.0 * pi / N;
  int p = int(std::lround(P / step));
  if (std::abs(P - p * step) > 1e-9)
    throw std::invalid_argument("total momentum P must be a multiple of 2*pi/N");
  return p;
}

MomentumGrid relative_grid(int N, double P) {
  int p = total_momentum_index(N, P);
  auto lat = RingLattice::make(N);
  return build_momentum_grid(lat, (p % 2 == 0) ? GridKind::Integer : GridKind::HalfInteger);
}

double omega_scale(double J, double P, double phi) {
  if (!std::isfinite(J) || !std::isfinite(P) || !std::isfinite(phi))
    throw std::invalid_argument("omega_scale: non-finite input");
  return 2.0 * J * std::cos(0.5 * P - phi);
}

std::vector<DimerState> solve_dimer_spectrum(int N, double P, double phi, double J, double U) {
  if (N < 2) throw std::invalid_argument("solve_dimer_spectrum: N must be >= 2");
  const int p = total_momentum_index(N, P);
  const MomentumGrid grid = relative_grid(N, P);
  const double Omega = omega_scale(J, P, phi);
  const double scale = std::max({std::abs(J), std::abs(U), 1.0});
  const PoleSet ps = pole_structure(grid, Omega);
  const int D = int(ps.position.size());

  std::vector<DimerState> out;

  if (std::abs(Omega) < kOmegaZeroFactor * std::max(std::abs(J), 1.0)) {
    // Analytic on-site branch: the kinetic term vanishes in the sector
    // equation.  E = U with constant A (both atoms on one site), and E = 0
    // with multiplicity D-1 spanned by zero-sum symmetric vectors.
    DimerState onsite;
    onsite.N = N;
    onsite.p = p;
    onsite.P = P;
    onsite.Omega = Omega;
    onsite.energy = U;
    onsite.omega = std::numeric_limits<double>::quiet_NaN();
    onsite.grid = grid;
    onsite.A = Eigen::VectorXcd::Constant(grid.size(), 1.0 / std::sqrt(2.0 * grid.size()));

    // group indicator vectors, orthogonal to the constant within each pair
    std::vector<Eigen::VectorXcd> zeros;
    std::map<int, std::vector<int>> groups;
    for (std::size_t i = 0; i < grid.size(); ++i)
      groups[std::abs(grid.numerators[i])].push_back(int(i));
    std::vector<Eigen::VectorXcd> indicators;
    for (auto& [k, idx] : groups) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(grid.size());
      for (int i : idx) v(i) = 1.0;
      indicators.push_back(v);
    }
    for (std::size_t k = 1; k < indicators.size(); ++k) {
      Eigen::VectorXcd v = indicators[k];
      // Gram-Schmidt against the constant and earlier zero modes (doubled inner product)
      Eigen::VectorXcd c = Eigen::VectorXcd::Constant(grid.size(), 1.0);
      v -= (c.dot(v) / c.dot(c)) * c;
      for (auto& z : zeros) v -= (z.dot(v) / z.dot(z)) * z;
      if (v.norm() > 1e-12) {
        zeros.push_back(v);
        DimerState zst = onsite;
        zst.energy = 0;
        zst.A = v / std::sqrt(2.0 * v.squaredNorm());
        out.push_back(std::move(zst));
      }
    }
    out.push_back(std::move(onsite));
    std::sort(out.begin(), out.end(),
              [](const DimerState& a, const DimerState& b) { return a.energy < b.energy; });
    return out;
  }

  if (U == 0) {
    // free spectrum: E = -Omega cos q, symmetric combinations
    for (int j = 0; j < D; ++j) {
      DimerState st;
      st.N = N;
      st.p = p;
      st.P = P;
      st.Omega = Omega;
      st.energy = ps.position[j];
      st.omega = st.energy / Omega;
      st.grid = grid;
      st.A = Eigen::VectorXcd::Zero(grid.size());
      for (std::size_t i = 0; i < grid.size(); ++i) {
        double c = -Omega * std::cos(grid.point(int(i)).value());
        if (std::abs(c - ps.position[j]) < 1e-12 * std::max(1.0, std::abs(Omega))) st.A(i) = 1.0;
      }
      st.A /= std::sqrt(2.0 * st.A.squaredNorm());
      out.push_back(std::move(st));
    }
    return out;
  }

  // Transcendental path: one root strictly inside each interval between
  // consecutive poles, plus one root outside the band on the sign(U) side.
  for (int j = 0; j + 1 < D; ++j)
    out.push_back(make_state(N, p, P, Omega, grid,
                             bisect_root(ps, N, U, ps.position[j], ps.position[j + 1]), scale));

  const double margin = std::abs(U) + std::abs(Omega) + 1.0;
  if (U > 0) {
    double lo = ps.position.back(), hi = ps.position.back() + margin;
    if (g_of(ps, N, U, hi) >= 0)
      throw std::runtime_error("solve_dimer_spectrum: exterior bracket failed (root count bug)");
    out.push_back(make_state(N, p, P, Omega, grid, bisect_root(ps, N, U, lo, hi), scale));
  } else {
    double hi = ps.position.front(), lo = ps.position.front() - margin;
    if (g_of(ps, N, U, lo) <= 0)
      throw std::runtime_error("solve_dimer_spectrum: exterior bracket failed (root count bug)");
    // signs are flipped below the lowest pole: g -> -1/U > 0 at -inf
    double a = lo, b = hi;
    for (int it = 0; it < 200 && b - a > 0; ++it) {
      double mid = 0.5 * (a + b);
      if (mid <= a || mid >= b) break;
      if (g_of(ps, N, U, mid) > 0)
        a = mid;
      else
        b = mid;
    }
    out.push_back(make_state(N, p, P, Omega, grid, 0.5 * (a + b), scale));
  }

  if (int(out.size()) != D)
    throw std::runtime_error("solve_dimer_spectrum: root count does not match pole structure");
  std::sort(out.begin(), out.end(),
            [](const DimerState& a, const DimerState& b) { return a.energy < b.energy; });
  return out;
}

double bound_energy_largeN(double Omega, double U) {
  if (U == 0) throw std::invalid_argument("bound_energy_largeN: U must be nonzero");
  return (U > 0 ? 1.0 : -1.0) * std::sqrt(Omega * Omega + U * U);
}

DimerState bound_state(int N, double P, double phi, double J, double U) {
  auto spec = solve_dimer_spectrum(N, P, phi, J, U);
  return (U >= 0) ? spec.back() : spec.front();
}

double dimensionless_coupling(double P, double phi, double J, double U) {
  double Omega = omega_scale(J, P, phi);
  if (Omega == 0) return std::numeric_limits<double>::infinity();
  return U / Omega;
}

double momentum_density_largeN(double q, double P, double phi, double J, double U) {
  double denom = 2.0 * J * std::cos(0.5 * P - phi);
  if (std::abs(denom) < 1e-300 * std::abs(U)) return 1.0 / (2.0 * pi);  // |K| -> inf limit
  double K = U / denom;
  if (K == 0) throw std::invalid_argument("momentum_density_largeN: K must be nonzero");
  double root = std::sqrt(1.0 + K * K);
  double sgn = (K > 0) ? 1.0 : -1.0;
  double base = std::cos(q - 0.5 * P) + sgn * root;
  return std::abs(K * K * K) / (2.0 * pi * root * base * base);
}

std::vector<std::pair<double, double>> momentum_probabilities_finiteN(const DimerState& state) {
  const int N = state.N;
  auto single = build_momentum_grid(RingLattice::make(N), GridKind::Integer);
  std::vector<std::pair<double, double>> out;
  double total = 0;
  for (int knum : single.numerators) {
    int qnum = wrap_numerator(state.p - knum, N);
    auto it = std::lower_bound(state.grid.numerators.begin(), state.grid.numerators.end(), qnum);
    if (it == state.grid.numerators.end() || *it != qnum)
      throw std::logic_error("momentum_probabilities_finiteN: grid membership violated");
    double w = std::norm(state.A(it - state.grid.numerators.begin()));
    out.emplace_back(knum * pi / N, w);
    total += w;
  }
  for (auto& [q, w] : out) w /= total;
  return out;
}

double rms_of_amplitudes(const MomentumGrid& grid, const Eigen::VectorXcd& A) {
  const int N = grid.N;
  auto qs = grid.values();
  double num = 0, den = 0;
  const int lo = -(N / 2);
  for (int n = lo; n < lo + N; ++n) {
    std::complex<double> psi(0, 0);
    for (std::size_t i = 0; i < grid.size(); ++i)
      psi += A(i) * std::complex<double>(std::cos(qs[i] * n), std::sin(qs[i] * n));
    double w = std::norm(psi);
    num += double(n) * double(n) * w;
    den += w;
  }
  return std::sqrt(num / den);
}

double rms_size(const DimerState& state) {
  if (!state.bound() && !(state.Omega == 0))
    throw std::invalid_argument("rms_size: state lies in the continuum band; size is not meaningful");
  return rms_of_amplitudes(state.grid, state.A);
}

// ---------------------------------------------------------------------------

namespace {

int pair_index(int n1, int n2, int N) {
  // n1 <= n2; row-major over the upper triangle
  return n1 * N - n1 * (n1 - 1) / 2 + (n2 - n1);
}

}  // namespace

std::vector<double> EdSpectrum::sector_energies(int p) const {
  p = ((p % N) + N) % N;
  std::vector<double> out;
  for (const auto& l : levels)
    if (l.p == p) out.push_back(l.energy);
  std::sort(out.begin(), out.end());
  return out;
}

EdSpectrum ed_oracle(int N, double phi, double J, double U, int maxN) {
  if (N < 2) throw std::invalid_argument("ed_oracle: N must be >= 2");
  if (N > maxN) throw std::invalid_argument("ed_oracle: N exceeds the dense feasibility cap");
  const int dim = N * (N + 1) / 2;
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(dim, dim);

  const std::complex<double> hopF = -0.5 * J * std::complex<double>(std::cos(phi), std::sin(phi));
  const std::complex<double> hopB = std::conj(hopF);

  for (int n1 = 0; n1 < N; ++n1) {
    for (int n2 = n1; n2 < N; ++n2) {
      const int src = pair_index(n1, n2, N);
      const double srcNorm = (n1 == n2) ? std::sqrt(2.0) : 1.0;

      if (n1 == n2) H(src, src) += U;

      // apply sum_n [hopF b^+_{n+1} b_n + hopB b^+_n b_{n+1}]: move either
      // atom one site forward or backward; the matrix element carries the
      // ratio of the sqrt(1 + delta) normalization factors.
      auto add_hop = [&](int to, int other, std::complex<double> amp) {
        int a = std::min(to, other), b = std::max(to, other);
        double dstNorm = (a == b) ? std::sqrt(2.0) : 1.0;
        H(pair_index(a, b, N), src) += amp * dstNorm / srcNorm;
      };
      for (int which = 0; which < 2; ++which) {
        int n = which == 0 ? n1 : n2;
        int other = which == 0 ? n2 : n1;
        add_hop((n + 1) % N, other, hopF);
        add_hop((n - 1 + N) % N, other, hopB);
      }

      // translation by one site
      int a = (n1 + 1) % N, b = (n2 + 1) % N;
      T(pair_index(std::min(a, b), std::max(a, b), N), src) = 1.0;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  if (es.info() != Eigen::Success) throw std::runtime_error("ed_oracle: diagonalization failed");
  const Eigen::VectorXd evals = es.eigenvalues();
  const Eigen::MatrixXcd evecs = es.eigenvectors();

  const double scale = std::max(1.0, std::max(std::abs(evals(0)), std::abs(evals(dim - 1))));
  const double clusterTol = 1e-8 * scale;

  EdSpectrum out;
  out.N = N;
  int i = 0;
  while (i < dim) {
    int j = i + 1;
    while (j < dim && evals(j) - evals(j - 1) < clusterTol) ++j;
    const int k = j - i;
    Eigen::MatrixXcd V = evecs.middleCols(i, k);
    Eigen::MatrixXcd Tr = V.adjoint() * (T * V).eval();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> ces(Tr);
    for (int c = 0; c < k; ++c) {
      double theta = std::arg(ces.eigenvalues()(c));
      int p = int(std::lround(-theta * N / (2.0 * pi)));
      p = ((p % N) + N) % N;
      out.levels.push_back({evals(i + c), p});
    }
    i = j;
  }
  std::sort(out.levels.begin(), out.levels.end(),
            [](const EdLevel& a, const EdLevel& b) { return a.energy < b.energy; });
  return out;
}

// ---------------------------------------------------------------------------

DimerRampTrace evolve_dimer_ramp(const DimerState& initial, const RampSchedule& ramp, double J,
                                 double U, int samples) {
  const int N = initial.N;
  const double P = initial.P;
  const auto& grid = initial.grid;
  const std::size_t dim = grid.size();
  auto qs = grid.values();

  Eigen::VectorXd cosq(dim);
  for (std::size_t i = 0; i < dim; ++i) cosq(i) = std::cos(qs[i]);

  const double norm0 = std::sqrt(2.0) * initial.A.norm();
  if (std::abs(norm0 - 1.0) > 1e-8)
    throw std::invalid_argument("evolve_dimer_ramp: initial state must be unit-normalized");

  auto rhs = [&](double t, const Eigen::VectorXcd& A) -> Eigen::VectorXcd {
    double Om = omega_scale(J, P, ramp.phiOfT(t));
    std::complex<double> S = A.sum();
    Eigen::VectorXcd HA = (-Om) * cosq.cast<std::complex<double>>().cwiseProduct(A);
    HA.array() += (U / double(N)) * S;
    return std::complex<double>(0, -1) * HA;
  };

  DimerRampTrace trace;
  Eigen::VectorXcd A = initial.A;

  const int nsteps = std::max(1, int(std::ceil(ramp.T / ramp.h)));
  const double dt = (ramp.T > 0) ? ramp.T / nsteps : 0;
  const int stride = std::max(1, nsteps / std::max(1, samples));

  auto record = [&](double t) {
    DimerState st = initial;
    st.A = A;
    st.Omega = omega_scale(J, P, ramp.phiOfT(t));
    st.energy = std::numeric_limits<double>::quiet_NaN();
    trace.times.push_back(t);
    trace.phis.push_back(ramp.phiOfT(t));
    DimerState bs = bound_state(N, P, ramp.phiOfT(t), J, U);
    std::complex<double> ov = 2.0 * bs.A.dot(A);
    trace.fidelities.push_back(std::norm(ov));
    trace.rmsSizes.push_back(rms_of_amplitudes(grid, A));
    auto probs = momentum_probabilities_finiteN(st);
    auto best = std::max_element(probs.begin(), probs.end(),
                                 [](auto& a, auto& b) { return a.second < b.second; });
    trace.peakMomenta.push_back(best->first);
  };

  record(0.0);
  for (int s = 0; s < nsteps; ++s) {
    double t = s * dt;
    Eigen::VectorXcd k1 = rhs(t, A);
    Eigen::VectorXcd k2 = rhs(t + dt / 2, A + (dt / 2) * k1);
    Eigen::VectorXcd k3 = rhs(t + dt / 2, A + (dt / 2) * k2);
    Eigen::VectorXcd k4 = rhs(t + dt, A + dt * k3);
    A += (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    if ((s + 1) % stride == 0 || s + 1 == nsteps) record((s + 1) * dt);
  }

  trace.normDrift = std::abs(std::sqrt(2.0) * A.norm() - 1.0);
  if (trace.normDrift > 1e-8)
    throw std::runtime_error("evolve_dimer_ramp: norm drift exceeds 1e-8; reduce the step size");

  trace.finalState = initial;
  trace.finalState.A = A;
  trace.finalState.Omega = omega_scale(J, P, ramp.phiOfT(ramp.T));
  trace.finalState.energy = std::numeric_limits<double>::quiet_NaN();
  return trace;
}

}  // namespace ringlat
