#pragma once

// Multiple-scale reduction of the rotating-cavity mode equations.
//
// With c_m = B_m(tau) e^{i omega_m t} + C_m(tau) e^{-i omega_m t} and
// tau = epsilon t, removing secular terms at a sum resonance
// omega_m + omega_n = Omega leaves the linear slow system
//
//   dB_m/dtau = sum_n A_mn C_n,    dC_m/dtau = sum_n A_mn B_n,
//
// where A_mn = -G_n^m for a partner differing along x and +G_n^m along y.

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "casimir/coupling.hpp"
#include "casimir/spectrum.hpp"

namespace casimir {

class SlowSystem {
 public:
  /// Direct construction from a coupling matrix (row-major, modes x modes).
  SlowSystem(std::vector<ModeIndex> modes, std::vector<double> omegas,
             std::vector<double> coupling, double Omega, double tau_scale);

  const std::vector<ModeIndex>& modes() const { return modes_; }
  const std::vector<double>& omegas() const { return omegas_; }
  std::size_t size() const { return modes_.size(); }
  double Omega() const { return Omega_; }
  double tau_scale() const { return tau_scale_; }

  /// A_mn by positions.
  double coupling(std::size_t m, std::size_t n) const { return coupling_[m * size() + n]; }
  const std::vector<double>& coupling_matrix() const { return coupling_; }

  std::optional<std::size_t> find(const ModeIndex& mode) const;

 private:
  std::vector<ModeIndex> modes_;
  std::vector<double> omegas_;
  std::vector<double> coupling_;
  double Omega_;
  double tau_scale_;
};

/// Signed slow coupling A_mn for partner n in the equation of mode m.
double slow_coupling_signed(const ModeIndex& m, const ModeIndex& n, double Omega, double L);

/// Modes are collected in order of first appearance (lo before hi).
/// Throws std::domain_error for xy-coupled or difference-frequency pairs.
SlowSystem build_slow_system(const std::vector<ResonantPair>& pairs, double Omega, double L,
                             double tau_scale = 0.0);

/// B and C as [mode x pump] matrices. Pumps are the system's own modes.
struct SlowAmplitudes {
  std::size_t n = 0;
  double tau = 0.0;
  std::vector<Complex> B;
  std::vector<Complex> C;

  SlowAmplitudes() = default;
  SlowAmplitudes(std::size_t size, double t) : n(size), tau(t), B(size * size), C(size * size) {}

  Complex& b(std::size_t mode, std::size_t pump) { return B[mode * n + pump]; }
  Complex& c(std::size_t mode, std::size_t pump) { return C[mode * n + pump]; }
  Complex b(std::size_t mode, std::size_t pump) const { return B[mode * n + pump]; }
  Complex c(std::size_t mode, std::size_t pump) const { return C[mode * n + pump]; }
};

/// B = 0, C_m^k = delta_mk / sqrt(2 omega_k).
SlowAmplitudes initial_slow_amplitudes(const SlowSystem& system);

struct GrowthExponent {
  double lambda_squared = 0.0;
  /// sqrt(lambda_squared) when amplifying, else sqrt(-lambda_squared).
  double rate = 0.0;
  bool amplifying = false;
};

/// Three-mode growth formula generalised to a hub with spokes:
/// lambda^2 = sum_s A_hs A_sh. Empty when the coupling graph is not a star.
std::optional<GrowthExponent> star_growth_exponent(const SlowSystem& system);

/// Largest real part of the eigenvalues of A (independent of the star formula).
GrowthExponent spectral_growth_exponent(const SlowSystem& system);

struct StarSolution {
  SlowAmplitudes amplitudes;
  GrowthExponent exponent;
};

/// Closed-form sinh/cosh (or sin/cos when lambda^2 < 0) solution of a
/// star-shaped slow system. Throws std::domain_error when not a star.
StarSolution solve_star_analytic(const SlowSystem& system, double tau);

/// lambda^2 = G^{111}_{121} G^{121}_{111} + G^{111}_{211} G^{211}_{111}.
double three_mode_lambda_squared(double Omega, double L);

/// Closed-form solution for modes (1,1,1), (1,2,1), (2,1,1) in that order.
/// Throws std::domain_error unless Omega = (sqrt3 + sqrt6) pi / L.
SlowAmplitudes solve_three_mode_analytic(double Omega, double L, double tau_f);

/// The three modes in the order used by solve_three_mode_analytic.
std::vector<ModeIndex> three_mode_set();

/// Fixed-step RK4 from the initial amplitudes. Samples every
/// `sample_every` steps plus the final state; the step is shrunk so an
/// integer number of steps lands exactly on tau_f.
std::vector<SlowAmplitudes> integrate_reduced(const SlowSystem& system, double tau_f,
                                              double dtau, std::size_t sample_every = 1);

/// RK4 from `start` to tau_to in equal steps no longer than max_step.
SlowAmplitudes advance_reduced(const SlowSystem& system, SlowAmplitudes start, double tau_to,
                               double max_step);

/// <N_m> = sum_k 2 omega_m |B_m^k|^2. Throws std::domain_error for unknown m.
double particle_number(const SlowAmplitudes& amps, const ModeIndex& m, const SlowSystem& system);

/// sum_m 2 omega_m (|C_m^k|^2 - |B_m^k|^2) for pump k.
double bogoliubov_form(const SlowAmplitudes& amps, const SlowSystem& system, std::size_t pump);

}  // namespace casimir
