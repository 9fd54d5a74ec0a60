#include "casimir/direct.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace casimir {

DirectState initial_direct_state(const CoupledSystem& system, const ModeIndex& pump) {
  const std::size_t k = system.find(pump);
  if (k == system.size()) {
    throw std::domain_error("pump " + to_string(pump) + " is not in the basis");
  }
  DirectState s;
  s.c.assign(system.size(), Complex{});
  s.cdot.assign(system.size(), Complex{});
  const double w = system.omegas()[k];
  s.c[k] = 1.0 / std::sqrt(2.0 * w);
  s.cdot[k] = Complex(0.0, -std::sqrt(w / 2.0));
  return s;
}

double max_direct_step(const CoupledSystem& system, const RotationProfile& profile) {
  double fastest = system.max_omega();
  if (profile.kind == ProfileKind::kSinusoidal) fastest = std::max(fastest, profile.Omega);
  return 2.0 * std::numbers::pi / (20.0 * fastest);
}

DirectSeries integrate_full(const CoupledSystem& system, const RotationProfile& profile,
                            const ModeIndex& pump, const DirectOptions& options) {
  DirectState y = initial_direct_state(system, pump);
  y.theta_dot = theta_eval(profile, 0.0).theta_dot;
  if (options.vacuum == Extraction::kStoppedCavity && y.theta_dot != 0.0) {
    std::vector<Complex> wc(system.size());
    apply_weights(system, y.c, wc);
    for (std::size_t i = 0; i < wc.size(); ++i) y.cdot[i] += y.theta_dot * wc[i];
  }
  if (!(options.t_f >= 0.0)) throw std::invalid_argument("t_f must be >= 0");
  if (!(options.dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  const double bound = max_direct_step(system, profile);
  if (options.dt > bound * (1.0 + 1e-12)) {
    std::ostringstream os;
    os.precision(17);
    os << "dt = " << options.dt << " exceeds the stability bound " << bound
       << " = 2 pi / (20 max(omega_max, Omega))";
    throw std::invalid_argument(os.str());
  }
  const std::size_t every = std::max<std::size_t>(1, options.sample_every);
  const auto steps = static_cast<std::size_t>(std::ceil(options.t_f / options.dt - 1e-9));
  const double h = steps > 0 ? options.t_f / static_cast<double>(steps) : 0.0;
  const std::size_t n = system.size();

  DirectSeries out;
  out.reserve(steps / every + 2);
  out.push_back(y);

  std::vector<Complex> scratch(2 * n), tc(n), tv(n);
  std::vector<Complex> k1c(n), k1v(n), k2c(n), k2v(n), k3c(n), k3v(n), k4c(n), k4v(n);

  for (std::size_t step = 1; step <= steps; ++step) {
    const double t0 = static_cast<double>(step - 1) * h;
    const ThetaValues th0 = theta_eval(profile, t0);
    const ThetaValues thm = theta_eval(profile, t0 + 0.5 * h);
    const ThetaValues th1 = theta_eval(profile, t0 + h);

    k1c = y.cdot;
    assemble_rhs_into(system, th0, options.terms, y.c, y.cdot, scratch, k1v);
    for (std::size_t i = 0; i < n; ++i) {
      tc[i] = y.c[i] + 0.5 * h * k1c[i];
      tv[i] = y.cdot[i] + 0.5 * h * k1v[i];
    }
    k2c = tv;
    assemble_rhs_into(system, thm, options.terms, tc, tv, scratch, k2v);
    for (std::size_t i = 0; i < n; ++i) {
      tc[i] = y.c[i] + 0.5 * h * k2c[i];
      tv[i] = y.cdot[i] + 0.5 * h * k2v[i];
    }
    k3c = tv;
    assemble_rhs_into(system, thm, options.terms, tc, tv, scratch, k3v);
    for (std::size_t i = 0; i < n; ++i) {
      tc[i] = y.c[i] + h * k3c[i];
      tv[i] = y.cdot[i] + h * k3v[i];
    }
    k4c = tv;
    assemble_rhs_into(system, th1, options.terms, tc, tv, scratch, k4v);
    for (std::size_t i = 0; i < n; ++i) {
      y.c[i] += h / 6.0 * (k1c[i] + 2.0 * k2c[i] + 2.0 * k3c[i] + k4c[i]);
      y.cdot[i] += h / 6.0 * (k1v[i] + 2.0 * k2v[i] + 2.0 * k3v[i] + k4v[i]);
    }
    y.t = step == steps ? options.t_f : static_cast<double>(step) * h;
    y.theta_dot = theta_eval(profile, y.t).theta_dot;
    if (step % every == 0 || step == steps) out.push_back(y);
  }
  return out;
}

double mode_energy(const DirectState& state, const std::vector<double>& omegas) {
  double e = 0.0;
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    e += std::norm(state.cdot[i]) + omegas[i] * omegas[i] * std::norm(state.c[i]);
  }
  return e;
}

SlowPair extract_slow_amplitudes(const DirectState& state, const std::vector<double>& omegas) {
  const std::size_t n = omegas.size();
  if (state.c.size() != n || state.cdot.size() != n) {
    throw std::invalid_argument("extract_slow_amplitudes: state and frequency list differ in size");
  }
  SlowPair out;
  out.B.resize(n);
  out.C.resize(n);
  for (std::size_t m = 0; m < n; ++m) {
    const double w = omegas[m];
    if (!(w > 0.0)) throw std::invalid_argument("mode frequencies must be > 0");
    const Complex v = state.cdot[m] / Complex(0.0, w);
    const Complex phase = std::polar(1.0, w * state.t);
    out.B[m] = 0.5 * (state.c[m] + v) / phase;
    out.C[m] = 0.5 * (state.c[m] - v) * phase;
  }
  return out;
}

DirectState stopped_cavity_state(const CoupledSystem& system, const DirectState& state) {
  DirectState out = state;
  if (state.theta_dot == 0.0) return out;
  std::vector<Complex> wc(system.size());
  apply_weights(system, state.c, wc);
  for (std::size_t i = 0; i < system.size(); ++i) out.cdot[i] -= state.theta_dot * wc[i];
  out.theta_dot = 0.0;
  return out;
}

std::vector<NumberSample> direct_particle_number(const PumpRuns& runs,
                                                 const CoupledSystem& system, const ModeIndex& m,
                                                 const std::vector<ModeIndex>& pumps,
                                                 Extraction extraction) {
  const std::size_t idx = system.find(m);
  if (idx == system.size()) throw std::domain_error("mode " + to_string(m) + " is not in the basis");
  std::vector<const DirectSeries*> series;
  for (const auto& p : pumps) {
    const auto it = runs.find(p);
    if (it == runs.end()) throw std::domain_error("missing direct run for pump " + to_string(p));
    series.push_back(&it->second);
  }
  if (series.empty()) return {};
  const std::size_t len = series.front()->size();
  for (const auto* s : series) {
    if (s->size() != len) throw std::domain_error("pump runs have different sample counts");
  }
  const double w = system.omegas()[idx];
  std::vector<NumberSample> out;
  out.reserve(len);
  for (std::size_t i = 0; i < len; ++i) {
    double total = 0.0;
    const double t = (*series.front())[i].t;
    for (const auto* s : series) {
      const DirectState& raw = (*s)[i];
      if (raw.t != t) throw std::domain_error("pump runs are sampled at different times");
      Complex cdot = raw.cdot[idx];
      if (extraction == Extraction::kStoppedCavity && raw.theta_dot != 0.0) {
        // Only row idx of W c is needed.
        for (const auto& e : system.row(idx)) cdot -= raw.theta_dot * e.weight * raw.c[e.column];
      }
      const Complex v = cdot / Complex(0.0, w);
      const Complex b = 0.5 * (raw.c[idx] + v) / std::polar(1.0, w * t);
      total += 2.0 * w * std::norm(b);
    }
    out.push_back({t, total});
  }
  return out;
}

GrowthFit fit_growth_rate(const std::vector<double>& tau, const std::vector<double>& n,
                          std::pair<double, double> window) {
  if (tau.size() != n.size()) throw std::invalid_argument("tau and N series differ in length");
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < tau.size(); ++i) {
    if (tau[i] < window.first || tau[i] > window.second) continue;
    if (!(n[i] >= 0.0)) throw std::domain_error("particle number must be >= 0");
    xs.push_back(tau[i]);
    ys.push_back(std::asinh(std::sqrt(n[i])));
  }
  if (xs.size() < 3) {
    throw std::domain_error("growth fit needs at least 3 samples in the window, got " +
                            std::to_string(xs.size()));
  }
  const double count = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= count;
  my /= count;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw std::domain_error("growth fit window has no spread in tau");
  GrowthFit fit;
  fit.lambda_fit = sxy / sxx;
  fit.window = window;
  fit.samples = xs.size();
  if (syy == 0.0) {
    fit.r_squared = 1.0;
  } else {
    fit.r_squared = std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0);
  }
  return fit;
}

}  // namespace casimir
