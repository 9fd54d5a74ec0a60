#pragma once

// Real-time integration of the truncated coupled-mode system, used as the
// reference for the slow-time reduction.

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "casimir/coupling.hpp"
#include "casimir/spectrum.hpp"

namespace casimir {

/// Amplitudes in the co-rotating frame. `theta_dot` is the angular velocity
/// at time t.
struct DirectState {
  std::vector<Complex> c;
  std::vector<Complex> cdot;
  double t = 0.0;
  double theta_dot = 0.0;
};

using DirectSeries = std::vector<DirectState>;

/// Vacuum mode function of `pump`: c_n = delta_nk / sqrt(2 omega_k),
/// cdot_n = -i sqrt(omega_k / 2) delta_nk.
DirectState initial_direct_state(const CoupledSystem& system, const ModeIndex& pump);

/// Largest admissible step: 2 pi / (20 max(omega_max, Omega)).
double max_direct_step(const CoupledSystem& system, const RotationProfile& profile);

enum class Extraction {
  /// Lab-frame velocity via stopped_cavity_state.
  kStoppedCavity,
  /// Raw co-rotating cdot.
  kRotatingFrame,
};

struct DirectOptions {
  double t_f = 0.0;
  double dt = 0.0;
  std::size_t sample_every = 1;
  FrameTerms terms = FrameTerms::kWithCentrifugal;
  /// Frame in which the pump starts as its vacuum mode function. With
  /// kStoppedCavity the co-rotating velocity gets theta_dot(0) W c added, so
  /// the stopped-cavity readout gives N = 0 at t = 0.
  Extraction vacuum = Extraction::kStoppedCavity;
};

/// Classical RK4 on (c, cdot) with a fixed step. The step is shrunk so an
/// integer number of steps ends exactly at t_f. Samples at t = 0, every
/// `sample_every` steps, and at t_f.
///
/// Throws std::domain_error if the pump is not in the basis and
/// std::invalid_argument if dt exceeds max_direct_step (the message carries
/// the bound).
DirectSeries integrate_full(const CoupledSystem& system, const RotationProfile& profile,
                            const ModeIndex& pump, const DirectOptions& options);

/// Sum over modes of |cdot|^2 + omega^2 |c|^2.
double mode_energy(const DirectState& state, const std::vector<double>& omegas);

struct SlowPair {
  std::vector<Complex> B;
  std::vector<Complex> C;
};

/// Inverts c = B e^{i w t} + C e^{-i w t}, cdot = i w (B e^{i w t} - C e^{-i w t}).
SlowPair extract_slow_amplitudes(const DirectState& state, const std::vector<double>& omegas);

/// State seen if the cavity were stopped at this instant: the field and its
/// lab-frame time derivative are continuous, so cdot becomes
/// cdot - theta_dot W c and theta_dot becomes 0.
DirectState stopped_cavity_state(const CoupledSystem& system, const DirectState& state);

struct NumberSample {
  double t;
  double n;
};

/// One series per pump label, all sampled at the same times.
using PumpRuns = std::map<ModeIndex, DirectSeries>;

/// N_m(t) = sum over `pumps` of 2 omega_m |B_m^pump(t)|^2.
/// Throws std::domain_error when a pump run is missing or m is not in the basis.
std::vector<NumberSample> direct_particle_number(
    const PumpRuns& runs, const CoupledSystem& system, const ModeIndex& m,
    const std::vector<ModeIndex>& pumps, Extraction extraction = Extraction::kStoppedCavity);

struct GrowthFit {
  double lambda_fit = 0.0;
  double r_squared = 0.0;
  std::pair<double, double> window{0.0, 0.0};
  std::size_t samples = 0;
};

/// Least-squares slope of asinh(sqrt(N)) against tau inside [lo, hi].
/// Throws std::domain_error with fewer than 3 samples in the window or a
/// negative N.
GrowthFit fit_growth_rate(const std::vector<double>& tau, const std::vector<double>& n,
                          std::pair<double, double> window);

}  // namespace casimir
