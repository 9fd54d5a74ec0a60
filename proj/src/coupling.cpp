#include "casimir/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace casimir {

double g_scalar(int n, int m) {
  if (n == m) return 0.0;
  if ((n + m) % 2 == 0) return 0.0;
  const double nd = n;
  const double md = m;
  return 2.0 * md * nd / (md * md - nd * nd);
}

double g_tensor(int nx, int mx, int ny, int my) {
  if (nx == mx || ny == my) return 0.0;
  const double dx = static_cast<double>(mx) * mx - static_cast<double>(nx) * nx;
  const double dy = static_cast<double>(my) * my - static_cast<double>(ny) * ny;
  constexpr double inv_pi2 = 1.0 / (std::numbers::pi * std::numbers::pi);
  return inv_pi2 * (1.0 / dx - 1.0 / dy) * g_scalar(nx, mx) * g_scalar(ny, my);
}

ThetaValues theta_eval(const RotationProfile& profile, double t) {
  switch (profile.kind) {
    case ProfileKind::kSinusoidal: {
      const double s = std::sin(profile.Omega * t);
      const double c = std::cos(profile.Omega * t);
      const double eps = profile.epsilon;
      const double w = profile.Omega;
      return {eps * s, eps * w * c, -eps * w * w * s};
    }
    case ProfileKind::kConstantAcceleration: {
      const double a = profile.epsilon;
      return {0.5 * a * t * t, a * t, a};
    }
  }
  throw std::logic_error("unknown rotation profile");
}

double coupling_weight(const ModeIndex& m, const ModeIndex& n) {
  if (!selection_rule_allows(m, n)) return 0.0;
  switch (coupling_axis(m, n)) {
    case CouplingAxis::kXY:
      return 8.0 * g_tensor(n.nx(), m.nx(), n.ny(), m.ny());
    case CouplingAxis::kX:
      return g_scalar(n.nx(), m.nx());
    case CouplingAxis::kY:
      return -g_scalar(n.ny(), m.ny());
  }
  return 0.0;
}

CoupledSystem::CoupledSystem(std::vector<ModeIndex> basis, double L)
    : basis_(std::move(basis)), L_(L) {
  if (!(L > 0.0)) throw std::invalid_argument("L must be > 0");
  if (basis_.empty()) throw std::invalid_argument("basis must not be empty");
  {
    auto sorted = basis_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw std::invalid_argument("basis contains duplicate modes");
    }
  }
  omegas_.reserve(basis_.size());
  for (const auto& m : basis_) omegas_.push_back(mode_frequency(m, L_));

  row_start_.reserve(basis_.size() + 1);
  row_start_.push_back(0);
  for (const auto& m : basis_) {
    for (std::size_t j = 0; j < basis_.size(); ++j) {
      const double w = coupling_weight(m, basis_[j]);
      if (w != 0.0) entries_.push_back({j, w});
    }
    row_start_.push_back(entries_.size());
  }
}

double CoupledSystem::max_omega() const {
  return *std::max_element(omegas_.begin(), omegas_.end());
}

std::size_t CoupledSystem::find(const ModeIndex& mode) const {
  const auto it = std::find(basis_.begin(), basis_.end(), mode);
  return static_cast<std::size_t>(it - basis_.begin());
}

double CoupledSystem::weight(std::size_t m, std::size_t n) const {
  for (const auto& e : row(m)) {
    if (e.column == n) return e.weight;
  }
  return 0.0;
}

double CoupledSystem::weight(const ModeIndex& m, const ModeIndex& n) const {
  const std::size_t i = find(m);
  const std::size_t j = find(n);
  if (i == size() || j == size()) throw std::invalid_argument("mode not in basis");
  return weight(i, j);
}

CoupledSystem build_coupled_system(int n_max, int n_z, double L) {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  if (n_z < 1) throw std::invalid_argument("n_z must be >= 1");
  std::vector<ModeIndex> basis;
  basis.reserve(static_cast<std::size_t>(n_max) * n_max);
  for (int nx = 1; nx <= n_max; ++nx)
    for (int ny = 1; ny <= n_max; ++ny) basis.emplace_back(nx, ny, n_z);
  return CoupledSystem(std::move(basis), L);
}

void apply_weights(const CoupledSystem& system, std::span<const Complex> v,
                   std::span<Complex> out) {
  for (std::size_t m = 0; m < system.size(); ++m) {
    Complex acc{};
    for (const auto& e : system.row(m)) acc += e.weight * v[e.column];
    out[m] = acc;
  }
}

void assemble_rhs_into(const CoupledSystem& system, const ThetaValues& th, FrameTerms terms,
                       std::span<const Complex> c, std::span<const Complex> cdot,
                       std::span<Complex> scratch, std::span<Complex> out) {
  const std::size_t n = system.size();
  const auto& w = system.omegas();
  const bool centrifugal = terms == FrameTerms::kWithCentrifugal && th.theta_dot != 0.0;
  auto drive = scratch.first(n);
  if (centrifugal) {
    // drive_n = 2 theta_dot cdot_n + theta_ddot c_n - theta_dot^2 (W c)_n
    auto wc = scratch.subspan(n, n);
    apply_weights(system, c, wc);
    const double td2 = th.theta_dot * th.theta_dot;
    for (std::size_t i = 0; i < n; ++i) {
      drive[i] = 2.0 * th.theta_dot * cdot[i] + th.theta_ddot * c[i] - td2 * wc[i];
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      drive[i] = 2.0 * th.theta_dot * cdot[i] + th.theta_ddot * c[i];
    }
  }
  for (std::size_t m = 0; m < n; ++m) {
    Complex acc = -w[m] * w[m] * c[m];
    for (const auto& e : system.row(m)) acc += e.weight * drive[e.column];
    out[m] = acc;
  }
}

std::vector<Complex> assemble_rhs(const CoupledSystem& system, const RotationProfile& profile,
                                  double t, std::span<const Complex> c,
                                  std::span<const Complex> cdot, FrameTerms terms) {
  if (c.size() != system.size() || cdot.size() != system.size()) {
    throw std::invalid_argument("assemble_rhs: state has " + std::to_string(c.size()) + "/" +
                                std::to_string(cdot.size()) + " entries, basis has " +
                                std::to_string(system.size()));
  }
  std::vector<Complex> scratch(2 * system.size());
  std::vector<Complex> out(system.size());
  assemble_rhs_into(system, theta_eval(profile, t), terms, c, cdot, scratch, out);
  return out;
}

double slow_coupling_G(const ModeIndex& m, const ModeIndex& k, double Omega, double L) {
  if (m.nz() != k.nz()) {
    throw std::domain_error("G undefined: " + to_string(m) + " and " + to_string(k) +
                            " differ in n_z");
  }
  const bool dx = m.nx() != k.nx();
  const bool dy = m.ny() != k.ny();
  if (dx == dy) {
    throw std::domain_error("G requires modes differing along exactly one of x, y; got " +
                            to_string(m) + " and " + to_string(k));
  }
  const double g = dx ? g_scalar(m.nx(), k.nx()) : g_scalar(m.ny(), k.ny());
  const double wm = mode_frequency(m, L);
  const double wk = mode_frequency(k, L);
  return (2.0 * wm - Omega) * Omega / (4.0 * wk) * g;
}

}  // namespace casimir
