#include "ringlat/lattice.hpp"

#include <algorithm>

namespace ringlat {

double wrap_momentum(double q) {
  if (!std::isfinite(q)) throw std::invalid_argument("wrap_momentum: non-finite momentum");
  double r = std::remainder(q, 2.0 * pi);  // (-pi, pi], up to rounding
  if (r >= pi) r -= 2.0 * pi;
  if (r < -pi) r += 2.0 * pi;
  return r;
}

int wrap_numerator(int num, int N) {
  int twoN = 2 * N;
  int r = num % twoN;
  if (r < -N) r += twoN;
  if (r >= N) r -= twoN;
  return r;
}

RingLattice RingLattice::make(int N, double a) {
  if (N < 2) throw std::invalid_argument("RingLattice: N must be >= 2");
  if (!(a > 0) || !std::isfinite(a)) throw std::invalid_argument("RingLattice: spacing must be positive");
  return {N, a, N * a};
}

std::vector<double> MomentumGrid::values() const {
  std::vector<double> out;
  out.reserve(numerators.size());
  for (int num : numerators) out.push_back(num * pi / N);
  return out;
}

bool MomentumGrid::contains_numerator(int num) const {
  int w = wrap_numerator(num, N);
  return std::binary_search(numerators.begin(), numerators.end(), w);
}

MomentumGrid build_momentum_grid(const RingLattice& lattice, GridKind kind) {
  const int N = lattice.N;
  MomentumGrid grid;
  grid.kind = kind;
  grid.N = N;
  grid.numerators.reserve(N);
  const int parity = (kind == GridKind::Integer) ? 0 : 1;
  for (int num = -N; num < N; ++num) {
    if (((num % 2) + 2) % 2 == parity) grid.numerators.push_back(num);
  }
  return grid;
}

RotationSpec RotationSpec::from_velocity(double v, double m, const RingLattice& lat) {
  if (!std::isfinite(v)) throw std::invalid_argument("RotationSpec: non-finite velocity");
  if (!(m > 0)) throw std::invalid_argument("RotationSpec: mass must be positive");
  RotationSpec r;
  r.v = v;
  r.m = m;
  r.k_v = m * v;
  r.Phi = m * v * lat.L;
  r.phi = r.Phi / lat.N;
  return r;
}

RotationSpec RotationSpec::from_Phi(double Phi, double m, const RingLattice& lat) {
  return from_velocity(Phi / (m * lat.L), m, lat);
}

RotationSpec RotationSpec::from_phi(double phi, double m, const RingLattice& lat) {
  return from_Phi(phi * lat.N, m, lat);
}

}  // namespace ringlat
