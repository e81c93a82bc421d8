#include "ringlat/band.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace ringlat {

namespace {

using Eigen::MatrixXcd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

constexpr double kCutoffWeightTol = 1e-8;

// Fourier coefficients v_k = (1/a) Int_0^a V(x) exp(-i 2*pi*k*x/a) dx,
// k = 0..kmax, by the composite trapezoidal rule (spectral for periodic V).
std::vector<cdouble> potential_fourier(const ContinuumProblem& p, int kmax) {
  const int nv = std::max(4096, 8 * kmax);
  const double a = p.lattice.a;
  std::vector<double> samples(nv);
  for (int j = 0; j < nv; ++j) samples[j] = p.potential(a * j / nv);
  std::vector<cdouble> vk(kmax + 1, cdouble(0, 0));
  for (int k = 0; k <= kmax; ++k) {
    cdouble acc(0, 0);
    for (int j = 0; j < nv; ++j) {
      double ph = -2.0 * pi * k * j / double(nv);
      acc += samples[j] * cdouble(std::cos(ph), std::sin(ph));
    }
    vk[k] = acc / double(nv);
  }
  return vk;
}

// Uniform sample grid over [-L/2, L/2), dense enough that trapezoidal sums
// of lowest-band plane-wave products are exact.
int sample_count(const RingLattice& lat, int M) { return lat.N * (2 * M + 4); }

}  // namespace

ContinuumProblem ContinuumProblem::sinusoidal(const RingLattice& lat, const RotationSpec& rot,
                                              double mass, double V0, int cutoff) {
  ContinuumProblem p;
  p.lattice = lat;
  p.rotation = rot;
  p.mass = mass;
  p.basisCutoff = cutoff;
  const double a = lat.a;
  p.potential = [V0, a](double x) {
    double s = std::sin(pi * x / a);
    return V0 * s * s;
  };
  return p;
}

ContinuumProblem ContinuumProblem::from_samples(const RingLattice& lat, const RotationSpec& rot,
                                                double mass,
                                                const std::vector<std::pair<double, double>>& samples,
                                                int cutoff) {
  if (samples.size() < 2) throw std::invalid_argument("ContinuumProblem: need at least 2 potential samples");
  auto pts = samples;
  std::sort(pts.begin(), pts.end());
  const double a = lat.a;
  ContinuumProblem p;
  p.lattice = lat;
  p.rotation = rot;
  p.mass = mass;
  p.basisCutoff = cutoff;
  p.potential = [pts, a](double x) {
    double y = std::fmod(x - pts.front().first, a);
    if (y < 0) y += a;
    y += pts.front().first;
    auto it = std::upper_bound(pts.begin(), pts.end(), std::make_pair(y, 0.0));
    if (it == pts.begin()) return pts.front().second;
    if (it == pts.end()) {
      // interpolate between last sample and first (wrapped by one period)
      double x0 = pts.back().first, x1 = pts.front().first + a;
      double t = (x1 > x0) ? (y - x0) / (x1 - x0) : 0.0;
      return (1 - t) * pts.back().second + t * pts.front().second;
    }
    auto lo = std::prev(it);
    double t = (y - lo->first) / (it->first - lo->first);
    return (1 - t) * lo->second + t * it->second;
  };
  return p;
}

cdouble BlochSolution::evaluate(const BlochState& s, double x) const {
  const int M = cutoff;
  const double G = 2.0 * pi / lattice.a;
  cdouble acc(0, 0);
  for (int m = -M; m <= M; ++m) {
    double k = s.K + G * m;
    acc += s.coeff[m + M] * cdouble(std::cos(k * x), std::sin(k * x));
  }
  return acc / std::sqrt(lattice.L);
}

double BlochSolution::twisted_boundary_residual(const BlochState& s, int samples) const {
  const cdouble twist(std::cos(rotation.k_v * lattice.L), -std::sin(rotation.k_v * lattice.L));
  double worst = 0;
  for (int j = 0; j < samples; ++j) {
    double x = -lattice.L / 2 + lattice.L * j / samples;
    worst = std::max(worst, std::abs(evaluate(s, x + lattice.L) - twist * evaluate(s, x)));
  }
  return worst;
}

BlochSolution solve_bloch(const ContinuumProblem& problem) {
  if (problem.basisCutoff < 4) throw std::invalid_argument("solve_bloch: basisCutoff must be >= 4");
  if (!problem.potential) throw std::invalid_argument("solve_bloch: missing potential");
  const int N = problem.lattice.N;
  const int M = problem.basisCutoff;
  const int dim = 2 * M + 1;
  const double G = 2.0 * pi / problem.lattice.a;
  const double kv = problem.rotation.k_v;
  const double offset = kv * kv / (2.0 * problem.mass);

  auto vk = potential_fourier(problem, 2 * M);

  BlochSolution sol;
  sol.lattice = problem.lattice;
  sol.rotation = problem.rotation;
  sol.mass = problem.mass;
  sol.cutoff = M;
  sol.band.resize(N);

  MomentumGrid grid = build_momentum_grid(problem.lattice, GridKind::Integer);

  bool cutoffWarn = false;
  int failedIndex = -1;

#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < N; ++i) {
    const int n = grid.numerators[i] / 2;  // integer grid numerator = 2n
    const double K = problem.lattice.wave_vector(n) - kv;

    MatrixXcd H(dim, dim);
    for (int r = 0; r < dim; ++r) {
      for (int c = 0; c < dim; ++c) {
        int dk = r - c;
        cdouble v = (dk >= 0) ? vk[dk] : std::conj(vk[-dk]);
        H(r, c) = v;
      }
      double k = K + G * (r - M);
      H(r, r) += k * k / (2.0 * problem.mass);
    }

    Eigen::SelfAdjointEigenSolver<MatrixXcd> es(H);
    if (es.info() != Eigen::Success) {
#pragma omp critical
      failedIndex = n;
      continue;
    }

    BlochState st;
    st.n = n;
    st.K = K;
    st.rawEnergy = es.eigenvalues()(0);
    st.omega = st.rawEnergy - offset;
    st.coeff.resize(dim);
    VectorXcd c = es.eigenvectors().col(0);
    // phase convention: Psi_n(0) real and positive
    cdouble at0 = c.sum();
    if (std::abs(at0) > 0) c *= std::conj(at0) / std::abs(at0);
    for (int m = 0; m < dim; ++m) st.coeff[m] = c(m);

    double edgeWeight = std::norm(c(0)) + std::norm(c(dim - 1));
    if (edgeWeight > kCutoffWeightTol) {
#pragma omp critical
      cutoffWarn = true;
    }
    sol.band[i] = std::move(st);
  }

  if (failedIndex >= 0)
    throw std::runtime_error("solve_bloch: diagonalization failed at lattice index n=" +
                             std::to_string(failedIndex));
  if (cutoffWarn)
    sol.diagnostics.push_back("basis cutoff M may be too small: edge plane-wave weight exceeds 1e-8");
  return sol;
}

cdouble WannierSet::evaluate(int site, double x) const {
  const int N = bloch.lattice.N;
  const double xn = bloch.lattice.site(site);
  cdouble acc(0, 0);
  for (const auto& s : bloch.band) {
    double kn = bloch.lattice.wave_vector(s.n);
    acc += cdouble(std::cos(kn * xn), -std::sin(kn * xn)) * bloch.evaluate(s, x);
  }
  return acc / std::sqrt(double(N));
}

cdouble WannierSet::evaluate_W0(double x) const { return evaluate(0, x); }

double WannierSet::orthonormality_residual() const {
  const auto& lat = bloch.lattice;
  const int N = lat.N;
  const int nx = sample_count(lat, bloch.cutoff);
  const double dx = lat.L / nx;

  Eigen::MatrixXcd W(N, nx);
  for (int s = 0; s < N; ++s)
    for (int j = 0; j < nx; ++j) W(s, j) = evaluate(s, -lat.L / 2 + j * dx);

  Eigen::MatrixXcd gram = W * W.adjoint() * dx;
  double worst = 0;
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c)
      worst = std::max(worst, std::abs(gram(r, c) - (r == c ? 1.0 : 0.0)));
  return worst;
}

double WannierSet::central_fraction() const {
  const auto& lat = bloch.lattice;
  const int nx = sample_count(lat, bloch.cutoff);
  const double dx = lat.L / nx;
  double total = 0, central = 0;
  for (int j = 0; j < nx; ++j) {
    double x = -lat.L / 2 + j * dx;
    double w2 = std::norm(evaluate_W0(x));
    total += w2;
    if (x >= -lat.a / 2 && x < lat.a / 2) central += w2;
  }
  return central / total;
}

WannierSet build_wannier(const BlochSolution& solution) {
  if (int(solution.band.size()) != solution.lattice.N)
    throw std::invalid_argument("build_wannier: need one full band (N Bloch states)");
  // re-apply the phase convention: construction must not depend on incoming phases
  WannierSet set;
  set.bloch = solution;
  for (auto& s : set.bloch.band) {
    cdouble at0(0, 0);
    for (const auto& c : s.coeff) at0 += c;
    if (std::abs(at0) > 0) {
      cdouble rot = std::conj(at0) / std::abs(at0);
      for (auto& c : s.coeff) c *= rot;
    }
  }
  double residual = set.orthonormality_residual();
  if (residual > 1e-6)
    throw std::runtime_error("build_wannier: orthonormality residual " + std::to_string(residual) +
                             " exceeds tolerance (Gram matrix deviates from identity)");
  return set;
}

TunnelingElement tunneling_element(const WannierSet& wannier, const ContinuumProblem& problem) {
  const auto& lat = wannier.bloch.lattice;
  const int N = lat.N;

  // the V = 0 limit gives the sinc kernel with central fraction ~0.776;
  // any confining lattice pushes it above 0.9
  if (wannier.central_fraction() < 0.8)
    throw std::runtime_error(
        "tunneling_element: Wannier function is not localized within one lattice period "
        "(flat or absent lattice potential); tight-binding J is ill-defined");

  // J = -2 Int W*(x-a) (H'_v W)(x) dx on [-L/2, L/2).  With W expanded over
  // Bloch states, W(x-a) = N^{-1/2} sum exp(-i K a) Psi(x) and
  // (H'_v W)(x) = N^{-1/2} sum E Psi(x); trapezoid on the periodic grid.
  const int nx = sample_count(lat, wannier.bloch.cutoff);
  const double dx = lat.L / nx;
  cdouble acc(0, 0);
  for (int j = 0; j < nx; ++j) {
    double x = -lat.L / 2 + j * dx;
    cdouble wShift(0, 0), hw(0, 0);
    for (const auto& s : wannier.bloch.band) {
      cdouble psi = wannier.bloch.evaluate(s, x);
      cdouble phase(std::cos(s.K * lat.a), -std::sin(s.K * lat.a));
      wShift += phase * psi;
      hw += s.rawEnergy * psi;
    }
    acc += std::conj(wShift) * hw;
  }
  acc *= dx / double(N);

  TunnelingElement out;
  out.J = -2.0 * acc;
  out.magnitude = std::abs(out.J);
  out.theta = std::arg(out.J);

  if (std::abs(problem.rotation.v) > 0) {
    ContinuumProblem p0 = problem;
    p0.rotation = RotationSpec::from_velocity(0.0, problem.mass, problem.lattice);
    auto w0 = build_wannier(solve_bloch(p0));
    out.magnitudeAtZeroPhi = tunneling_element(w0, p0).magnitude;
  } else {
    out.magnitudeAtZeroPhi = out.magnitude;
  }
  out.magnitudeDeviation = out.magnitude / out.magnitudeAtZeroPhi - 1.0;
  return out;
}

TunnelingElement tunneling_element_harmonic(const ContinuumProblem& problem) {
  if (!problem.potential) throw std::invalid_argument("tunneling_element_harmonic: missing potential");
  const double a = problem.lattice.a;
  const double m = problem.mass;
  const double h = 1e-4 * a;
  double vpp = (problem.potential(h) - 2 * problem.potential(0.0) + problem.potential(-h)) / (h * h);
  if (!(vpp > 0))
    throw std::runtime_error("tunneling_element_harmonic: potential has no quadratic well at x=0");
  const double w0 = std::sqrt(vpp / m);
  const double alpha = m * w0;  // gaussian exponent scale, w ~ exp(-alpha x^2 / 2)
  const double mv = problem.rotation.k_v;
  const double phi = problem.rotation.phi;

  // H_v w = -(1/2m) w'' + i (mv/m) w' + (m v^2/2) w + V w, with the constant
  // -m v^2/2 cancelling the kinetic expansion term.
  auto gauss = [alpha](double x) {
    return std::pow(alpha / pi, 0.25) * std::exp(-alpha * x * x / 2.0);
  };
  const double L = problem.lattice.L;
  const int nx = 20000;
  const double dx = L / nx;
  cdouble acc(0, 0);
  for (int j = 0; j < nx; ++j) {
    double x = -L / 2 + j * dx;
    double w = gauss(x);
    double wp = -alpha * x * w;
    double wpp = (alpha * alpha * x * x - alpha) * w;
    cdouble hv = -wpp / (2 * m) + cdouble(0, 1) * (mv / m) * wp + problem.potential(x) * w;
    acc += gauss(x - a) * hv;
  }
  acc *= dx;

  TunnelingElement out;
  out.J = -2.0 * cdouble(std::cos(phi), -std::sin(phi)) * acc;
  out.magnitude = std::abs(out.J);
  out.theta = std::arg(out.J);
  out.magnitudeAtZeroPhi = out.magnitude;
  out.magnitudeDeviation = 0;
  return out;
}

double harmonic_tunneling(double trapFrequency, double mass, double a) {
  if (!(trapFrequency > 0)) throw std::invalid_argument("harmonic_tunneling: frequency must be > 0");
  return trapFrequency * std::exp(-mass * trapFrequency * a * a);
}

}  // namespace ringlat
