#include "ringlat/hetero.hpp"

#include <algorithm>
#include <cmath>

namespace ringlat {

namespace {

constexpr double kOmegaZeroFactor = 1e-12;
constexpr double kPoleMergeTol = 1e-12;

}  // namespace

void validate(const HeteroParams& p) {
  if (p.N < 2) throw std::invalid_argument("HeteroParams: N must be >= 2");
  for (double v : {p.J1, p.J2, p.phi1, p.phi2, p.U12})
    if (!std::isfinite(v)) throw std::invalid_argument("HeteroParams: parameters must be finite");
}

HeteroScales hetero_scales(const HeteroParams& p, double P) {
  validate(p);
  if (p.J1 == 0 && p.J2 == 0)
    throw std::invalid_argument("hetero_scales: J1 = J2 = 0 leaves no kinetic scale");
  const double theta = 0.5 * (P - p.phi1 - p.phi2);
  const double delta = 0.5 * (p.phi1 - p.phi2);
  HeteroScales s;
  s.Omega = std::sqrt(p.J1 * p.J1 + p.J2 * p.J2 + 2 * p.J1 * p.J2 * std::cos(2 * theta));
  // arg of (J1+J2) cos(theta) + i (J1-J2) sin(theta): the two-argument angle
  // keeps the arctan on the branch that matches the phasor quadrant.
  s.beta = std::atan2((p.J1 - p.J2) * std::sin(theta), (p.J1 + p.J2) * std::cos(theta)) - delta;
  return s;
}

HeteroScales BetaSweep::next(const HeteroParams& p, double P) {
  HeteroScales s = hetero_scales(p, P);
  if (primed_) s.beta += 2.0 * pi * std::round((prevBeta_ - s.beta) / (2.0 * pi));
  prevBeta_ = s.beta;
  primed_ = true;
  return s;
}

std::vector<HeteroState> solve_hetero_spectrum(const HeteroParams& prm, double P) {
  validate(prm);
  const int N = prm.N;
  const int p = total_momentum_index(N, P);
  const MomentumGrid grid = relative_grid(N, P);
  const HeteroScales sc = hetero_scales(prm, P);
  const double U = prm.U12;

  auto qs = grid.values();
  std::vector<double> poles(N);
  for (int i = 0; i < N; ++i) poles[i] = -sc.Omega * std::cos(qs[i] + sc.beta);

  auto make = [&](double energy, const Eigen::VectorXcd& A, bool atPole) {
    HeteroState st;
    st.N = N;
    st.p = p;
    st.P = P;
    st.Omega = sc.Omega;
    st.beta = sc.beta;
    st.energy = energy;
    st.omega = (sc.Omega != 0) ? energy / sc.Omega : std::numeric_limits<double>::quiet_NaN();
    st.grid = grid;
    st.A = A / A.norm();
    st.atPole = atPole;
    return st;
  };

  std::vector<HeteroState> out;

  if (sc.Omega < kOmegaZeroFactor * std::max(std::abs(prm.J1) + std::abs(prm.J2), 1.0)) {
    // kinetic term vanishes: E = U12 (uniform A) and E = 0 x (N-1)
    out.push_back(make(U, Eigen::VectorXcd::Constant(N, 1.0), false));
    for (int k = 1; k < N; ++k) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(N);
      // zero-sum basis: e_0 - e_k, orthogonalized lazily by the caller if needed
      v(0) = 1.0;
      v(k) = -1.0;
      out.push_back(make(0.0, v, false));
    }
  } else if (U == 0) {
    for (int i = 0; i < N; ++i) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(N);
      v(i) = 1.0;
      out.push_back(make(poles[i], v, false));
    }
  } else {
    // distinct poles with multiplicities
    std::vector<int> order(N);
    for (int i = 0; i < N; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](int a, int b) { return poles[a] < poles[b]; });
    const double mergeTol = kPoleMergeTol * std::max(1.0, sc.Omega);
    std::vector<double> distinct;
    std::vector<std::vector<int>> members;
    for (int i : order) {
      if (distinct.empty() || poles[i] - distinct.back() > mergeTol) {
        distinct.push_back(poles[i]);
        members.push_back({i});
      } else {
        members.back().push_back(i);
      }
    }
    const int D = int(distinct.size());

    // stuck levels at multiple poles: zero-sum combinations within the group
    for (int j = 0; j < D; ++j) {
      const auto& idx = members[j];
      for (std::size_t k = 1; k < idx.size(); ++k) {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(N);
        double w = -1.0 / double(k);
        for (std::size_t l = 0; l < k; ++l) v(idx[l]) = w;
        v(idx[k]) = 1.0;
        out.push_back(make(distinct[j], v, true));
      }
    }

    auto g = [&](double e) {
      double acc = 0;
      for (int j = 0; j < D; ++j) acc += double(members[j].size()) / (e - distinct[j]);
      return acc / N - 1.0 / U;
    };
    auto bisect = [&](double lo, double hi) {
      for (int it = 0; it < 200 && hi - lo > 0; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (g(mid) > 0)
          lo = mid;
        else
          hi = mid;
      }
      return 0.5 * (lo + hi);
    };
    auto amplitude = [&](double e) {
      Eigen::VectorXcd A(N);
      for (int i = 0; i < N; ++i) A(i) = 1.0 / (e - poles[i]);
      return A;
    };

    for (int j = 0; j + 1 < D; ++j) {
      double root = bisect(distinct[j], distinct[j + 1]);
      out.push_back(make(root, amplitude(root), false));
    }
    const double margin = std::abs(U) + sc.Omega + 1.0;
    double root;
    if (U > 0) {
      if (g(distinct.back() + margin) >= 0)
        throw std::runtime_error("solve_hetero_spectrum: exterior bracket failed (root count bug)");
      root = bisect(distinct.back(), distinct.back() + margin);
    } else {
      double lo = distinct.front() - margin, hi = distinct.front();
      if (g(lo) <= 0)
        throw std::runtime_error("solve_hetero_spectrum: exterior bracket failed (root count bug)");
      root = bisect(lo, hi);
    }
    out.push_back(make(root, amplitude(root), false));
  }

  if (int(out.size()) != N)
    throw std::runtime_error("solve_hetero_spectrum: level count does not match sector dimension");
  std::sort(out.begin(), out.end(),
            [](const HeteroState& a, const HeteroState& b) { return a.energy < b.energy; });
  return out;
}

double hetero_momentum_density(double q, const HeteroParams& prm, double P, int species) {
  validate(prm);
  if (species != 1 && species != 2)
    throw std::invalid_argument("hetero_momentum_density: species must be 1 or 2");
  if (std::abs(prm.J1 - prm.J2) > 1e-9 * (std::abs(prm.J1) + std::abs(prm.J2)))
    throw std::invalid_argument(
        "hetero_momentum_density: closed form is defined for equal tunnelings; "
        "use solve_hetero_spectrum for unequal J");
  const double J = prm.J1;
  const double denom = 2.0 * J * std::cos(0.5 * (P - prm.phi1 - prm.phi2));
  if (std::abs(denom) < 1e-300 * std::abs(prm.U12)) return 1.0 / (2.0 * pi);
  const double K = prm.U12 / denom;
  if (K == 0) throw std::invalid_argument("hetero_momentum_density: K must be nonzero");
  const double beta = hetero_scales(prm, P).beta;
  const double root = std::sqrt(1.0 + K * K);
  const double sgn = (K > 0) ? 1.0 : -1.0;
  const double shift = (species == 1) ? -beta : beta;
  const double base = sgn * root + std::cos(q - 0.5 * P + shift);
  return std::abs(K * K * K) / (2.0 * pi * root * base * base);
}

EdSpectrum hetero_ed_oracle(const HeteroParams& prm, int maxN) {
  validate(prm);
  const int N = prm.N;
  if (N > maxN) throw std::invalid_argument("hetero_ed_oracle: N exceeds the dense feasibility cap");
  const int dim = N * N;
  Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(dim, dim);
  Eigen::MatrixXd T = Eigen::MatrixXd::Zero(dim, dim);
  auto idx = [N](int n1, int n2) { return n1 * N + n2; };

  const std::complex<double> f1 = -0.5 * prm.J1 * std::complex<double>(std::cos(prm.phi1), std::sin(prm.phi1));
  const std::complex<double> f2 = -0.5 * prm.J2 * std::complex<double>(std::cos(prm.phi2), std::sin(prm.phi2));

  for (int n1 = 0; n1 < N; ++n1) {
    for (int n2 = 0; n2 < N; ++n2) {
      const int src = idx(n1, n2);
      if (n1 == n2) H(src, src) += prm.U12;
      H(idx((n1 + 1) % N, n2), src) += f1;
      H(idx((n1 - 1 + N) % N, n2), src) += std::conj(f1);
      H(idx(n1, (n2 + 1) % N), src) += f2;
      H(idx(n1, (n2 - 1 + N) % N), src) += std::conj(f2);
      T(idx((n1 + 1) % N, (n2 + 1) % N), src) = 1.0;
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H);
  if (es.info() != Eigen::Success) throw std::runtime_error("hetero_ed_oracle: diagonalization failed");
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

}  // namespace ringlat
