#include "casimir/msa.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace casimir {

SlowSystem::SlowSystem(std::vector<ModeIndex> modes, std::vector<double> omegas,
                       std::vector<double> coupling, double Omega, double tau_scale)
    : modes_(std::move(modes)),
      omegas_(std::move(omegas)),
      coupling_(std::move(coupling)),
      Omega_(Omega),
      tau_scale_(tau_scale) {
  if (omegas_.size() != modes_.size()) {
    throw std::invalid_argument("SlowSystem: one frequency per mode required");
  }
  if (coupling_.size() != modes_.size() * modes_.size()) {
    throw std::invalid_argument("SlowSystem: coupling matrix must be modes x modes");
  }
  for (double w : omegas_) {
    if (!(w > 0.0)) throw std::invalid_argument("SlowSystem: frequencies must be > 0");
  }
}

std::optional<std::size_t> SlowSystem::find(const ModeIndex& mode) const {
  for (std::size_t i = 0; i < modes_.size(); ++i) {
    if (modes_[i] == mode) return i;
  }
  return std::nullopt;
}

double slow_coupling_signed(const ModeIndex& m, const ModeIndex& n, double Omega, double L) {
  const double G = slow_coupling_G(n, m, Omega, L);
  return coupling_axis(m, n) == CouplingAxis::kX ? -G : G;
}

SlowSystem build_slow_system(const std::vector<ResonantPair>& pairs, double Omega, double L,
                             double tau_scale) {
  std::vector<ModeIndex> modes;
  auto index_of = [&modes](const ModeIndex& m) {
    for (std::size_t i = 0; i < modes.size(); ++i) {
      if (modes[i] == m) return i;
    }
    modes.push_back(m);
    return modes.size() - 1;
  };
  std::vector<std::pair<std::size_t, std::size_t>> links;
  for (const auto& p : pairs) {
    if (p.match != MatchKind::kSum) {
      throw std::domain_error("slow system supports sum-frequency resonances only; " +
                              to_string(p.lo) + "-" + to_string(p.hi) +
                              " is a difference-frequency match");
    }
    if (p.coupled_axis == CouplingAxis::kXY) {
      throw std::domain_error("unsupported pair geometry: " + to_string(p.lo) + " and " +
                              to_string(p.hi) + " differ along both x and y");
    }
    const std::size_t a = index_of(p.lo);
    const std::size_t b = index_of(p.hi);
    links.emplace_back(a, b);
  }

  const std::size_t n = modes.size();
  std::vector<double> omegas;
  omegas.reserve(n);
  for (const auto& m : modes) omegas.push_back(mode_frequency(m, L));

  std::vector<double> a(n * n, 0.0);
  for (const auto& [i, j] : links) {
    a[i * n + j] = slow_coupling_signed(modes[i], modes[j], Omega, L);
    a[j * n + i] = slow_coupling_signed(modes[j], modes[i], Omega, L);
  }
  return SlowSystem(std::move(modes), std::move(omegas), std::move(a), Omega, tau_scale);
}

SlowAmplitudes initial_slow_amplitudes(const SlowSystem& system) {
  SlowAmplitudes amps(system.size(), 0.0);
  for (std::size_t k = 0; k < system.size(); ++k) {
    amps.c(k, k) = 1.0 / std::sqrt(2.0 * system.omegas()[k]);
  }
  return amps;
}

namespace {

std::optional<std::size_t> star_hub(const SlowSystem& s) {
  const std::size_t n = s.size();
  if (n <= 1) return 0;
  for (std::size_t h = 0; h < n; ++h) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      for (std::size_t j = 0; j < n && ok; ++j) {
        if (s.coupling(i, j) != 0.0 && i != h && j != h) ok = false;
      }
      if (i != h && s.coupling(h, i) == 0.0 && s.coupling(i, h) == 0.0) ok = false;
    }
    if (ok) return h;
  }
  return std::nullopt;
}

GrowthExponent exponent_from_square(double lambda_sq) {
  GrowthExponent e;
  e.lambda_squared = lambda_sq;
  e.amplifying = lambda_sq > 0.0;
  e.rate = std::sqrt(std::abs(lambda_sq));
  return e;
}

}  // namespace

std::optional<GrowthExponent> star_growth_exponent(const SlowSystem& system) {
  const auto hub = star_hub(system);
  if (!hub) return std::nullopt;
  double sum = 0.0;
  for (std::size_t s = 0; s < system.size(); ++s) {
    if (s == *hub) continue;
    sum += system.coupling(*hub, s) * system.coupling(s, *hub);
  }
  return exponent_from_square(sum);
}

GrowthExponent spectral_growth_exponent(const SlowSystem& system) {
  const auto n = static_cast<Eigen::Index>(system.size());
  if (n == 0) return {};
  Eigen::MatrixXd a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = system.coupling(i, j);
  const Eigen::VectorXcd ev = Eigen::EigenSolver<Eigen::MatrixXd>(a, false).eigenvalues();
  double max_re = 0.0;
  double max_im = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    max_re = std::max(max_re, std::abs(ev(i).real()));
    max_im = std::max(max_im, std::abs(ev(i).imag()));
  }
  // Eigenvalues of A come in +/- pairs; a real part above roundoff means growth.
  const double scale = a.cwiseAbs().maxCoeff();
  if (max_re > 1e-10 * scale) return exponent_from_square(max_re * max_re);
  return exponent_from_square(-max_im * max_im);
}

StarSolution solve_star_analytic(const SlowSystem& system, double tau) {
  const auto hub_opt = star_hub(system);
  if (!hub_opt) throw std::domain_error("slow system is not star-shaped");
  const std::size_t h = *hub_opt;
  const GrowthExponent e = *star_growth_exponent(system);
  const std::size_t n = system.size();

  // growth(t) plays cosh, sine_like = sinh(l t)/l, cosine_minus_one = (cosh(l t) - 1)/l^2
  double growth = 1.0;
  double sine_like = tau;
  double cosine_minus_one = 0.5 * tau * tau;
  if (e.lambda_squared > 0.0) {
    const double l = e.rate;
    growth = std::cosh(l * tau);
    sine_like = std::sinh(l * tau) / l;
    cosine_minus_one = (growth - 1.0) / e.lambda_squared;
  } else if (e.lambda_squared < 0.0) {
    const double mu = e.rate;
    growth = std::cos(mu * tau);
    sine_like = std::sin(mu * tau) / mu;
    cosine_minus_one = (1.0 - growth) / (mu * mu);
  }

  SlowAmplitudes amps(n, tau);
  for (std::size_t k = 0; k < n; ++k) {
    const double c0 = 1.0 / std::sqrt(2.0 * system.omegas()[k]);
    if (k == h) {
      amps.c(h, k) = c0 * growth;
      for (std::size_t s = 0; s < n; ++s) {
        if (s != h) amps.b(s, k) = system.coupling(s, h) * c0 * sine_like;
      }
    } else {
      amps.b(h, k) = system.coupling(h, k) * c0 * sine_like;
      for (std::size_t s = 0; s < n; ++s) {
        if (s == h) continue;
        const double base = s == k ? c0 : 0.0;
        amps.c(s, k) =
            base + system.coupling(s, h) * system.coupling(h, k) * c0 * cosine_minus_one;
      }
    }
  }
  return {std::move(amps), e};
}

std::vector<ModeIndex> three_mode_set() {
  return {ModeIndex(1, 1, 1), ModeIndex(1, 2, 1), ModeIndex(2, 1, 1)};
}

namespace {

void require_three_mode_omega(double Omega, double L) {
  const double expected = three_mode_omega(L);
  if (!(std::abs(Omega - expected) <= 1e-9 * expected)) {
    throw std::domain_error("three-mode closed form requires Omega = (sqrt3 + sqrt6) pi / L");
  }
}

}  // namespace

double three_mode_lambda_squared(double Omega, double L) {
  require_three_mode_omega(Omega, L);
  const ModeIndex m111(1, 1, 1), m121(1, 2, 1), m211(2, 1, 1);
  // G_m^k is called as slow_coupling_G(m, k).
  return slow_coupling_G(m121, m111, Omega, L) * slow_coupling_G(m111, m121, Omega, L) +
         slow_coupling_G(m211, m111, Omega, L) * slow_coupling_G(m111, m211, Omega, L);
}

SlowAmplitudes solve_three_mode_analytic(double Omega, double L, double tau_f) {
  require_three_mode_omega(Omega, L);
  if (!(tau_f >= 0.0)) throw std::invalid_argument("tau_f must be >= 0");
  const ModeIndex m111(1, 1, 1), m121(1, 2, 1), m211(2, 1, 1);
  const double G_111_121 = slow_coupling_G(m121, m111, Omega, L);  // G^{111}_{121}
  const double G_121_111 = slow_coupling_G(m111, m121, Omega, L);  // G^{121}_{111}
  const double G_111_211 = slow_coupling_G(m211, m111, Omega, L);  // G^{111}_{211}
  const double G_211_111 = slow_coupling_G(m111, m211, Omega, L);  // G^{211}_{111}
  const double lambda_sq = G_111_121 * G_121_111 + G_111_211 * G_211_111;
  const double lambda = std::sqrt(lambda_sq);

  const double w111 = mode_frequency(m111, L);
  const double w121 = mode_frequency(m121, L);
  const double w211 = mode_frequency(m211, L);
  const double sh = std::sinh(lambda * tau_f);
  const double ch = std::cosh(lambda * tau_f);

  SlowAmplitudes a(3, tau_f);
  constexpr std::size_t i111 = 0, i121 = 1, i211 = 2;

  a.b(i111, i211) = -G_111_211 / std::sqrt(2.0 * w211) / lambda * sh;
  a.b(i111, i121) = G_111_121 / std::sqrt(2.0 * w121) / lambda * sh;
  a.b(i121, i111) = G_121_111 / std::sqrt(2.0 * w111) / lambda * sh;
  a.b(i211, i111) = -G_211_111 / std::sqrt(2.0 * w111) / lambda * sh;

  // C follows from dC = (coupling) B with the vacuum initial data.
  const double k = (ch - 1.0) / lambda_sq;
  a.c(i111, i111) = ch / std::sqrt(2.0 * w111);
  a.c(i121, i121) = (1.0 + G_121_111 * G_111_121 * k) / std::sqrt(2.0 * w121);
  a.c(i211, i121) = -G_211_111 * G_111_121 * k / std::sqrt(2.0 * w121);
  a.c(i211, i211) = (1.0 + G_211_111 * G_111_211 * k) / std::sqrt(2.0 * w211);
  a.c(i121, i211) = -G_121_111 * G_111_211 * k / std::sqrt(2.0 * w211);
  return a;
}

namespace {

/// Classical RK4 for dB = A C, dC = A B over all pumps.
class ReducedStepper {
 public:
  explicit ReducedStepper(const SlowSystem& system)
      : system_(system),
        n_(system.size()),
        k1_(n_, 0),
        k2_(n_, 0),
        k3_(n_, 0),
        k4_(n_, 0),
        tmp_(n_, 0) {}

  void step(SlowAmplitudes& y, double h) {
    deriv(y, k1_);
    axpy(y, 0.5 * h, k1_, tmp_);
    deriv(tmp_, k2_);
    axpy(y, 0.5 * h, k2_, tmp_);
    deriv(tmp_, k3_);
    axpy(y, h, k3_, tmp_);
    deriv(tmp_, k4_);
    for (std::size_t i = 0; i < y.B.size(); ++i) {
      y.B[i] += h / 6.0 * (k1_.B[i] + 2.0 * k2_.B[i] + 2.0 * k3_.B[i] + k4_.B[i]);
      y.C[i] += h / 6.0 * (k1_.C[i] + 2.0 * k2_.C[i] + 2.0 * k3_.C[i] + k4_.C[i]);
    }
  }

 private:
  void deriv(const SlowAmplitudes& s, SlowAmplitudes& d) const {
    for (std::size_t m = 0; m < n_; ++m) {
      for (std::size_t k = 0; k < n_; ++k) {
        Complex db{}, dc{};
        for (std::size_t j = 0; j < n_; ++j) {
          const double a = system_.coupling(m, j);
          if (a == 0.0) continue;
          db += a * s.c(j, k);
          dc += a * s.b(j, k);
        }
        d.b(m, k) = db;
        d.c(m, k) = dc;
      }
    }
  }

  static void axpy(const SlowAmplitudes& base, double f, const SlowAmplitudes& d,
                   SlowAmplitudes& out) {
    for (std::size_t i = 0; i < base.B.size(); ++i) {
      out.B[i] = base.B[i] + f * d.B[i];
      out.C[i] = base.C[i] + f * d.C[i];
    }
  }

  const SlowSystem& system_;
  std::size_t n_;
  SlowAmplitudes k1_, k2_, k3_, k4_, tmp_;
};

}  // namespace

SlowAmplitudes advance_reduced(const SlowSystem& system, SlowAmplitudes start, double tau_to,
                               double max_step) {
  if (!(max_step > 0.0)) throw std::invalid_argument("max_step must be > 0");
  if (start.n != system.size()) throw std::invalid_argument("amplitudes do not match system");
  const double span = tau_to - start.tau;
  if (span == 0.0) return start;
  const auto steps = static_cast<std::size_t>(std::ceil(std::abs(span) / max_step - 1e-9));
  const double h = span / static_cast<double>(std::max<std::size_t>(steps, 1));
  ReducedStepper stepper(system);
  for (std::size_t i = 0; i < std::max<std::size_t>(steps, 1); ++i) stepper.step(start, h);
  start.tau = tau_to;
  return start;
}

std::vector<SlowAmplitudes> integrate_reduced(const SlowSystem& system, double tau_f,
                                              double dtau, std::size_t sample_every) {
  if (!(dtau > 0.0)) throw std::invalid_argument("dtau must be > 0");
  if (!(tau_f >= 0.0)) throw std::invalid_argument("tau_f must be >= 0");
  if (sample_every == 0) sample_every = 1;

  const auto steps = static_cast<std::size_t>(std::ceil(tau_f / dtau - 1e-9));
  const double h = steps > 0 ? tau_f / static_cast<double>(steps) : 0.0;

  SlowAmplitudes y = initial_slow_amplitudes(system);
  std::vector<SlowAmplitudes> out;
  out.reserve(steps / sample_every + 2);
  out.push_back(y);

  ReducedStepper stepper(system);
  for (std::size_t step = 1; step <= steps; ++step) {
    stepper.step(y, h);
    y.tau = step == steps ? tau_f : static_cast<double>(step) * h;
    if (step % sample_every == 0 || step == steps) out.push_back(y);
  }
  return out;
}

double particle_number(const SlowAmplitudes& amps, const ModeIndex& m, const SlowSystem& system) {
  const auto idx = system.find(m);
  if (!idx) throw std::domain_error("mode " + to_string(m) + " is not in the slow system");
  const double w = system.omegas()[*idx];
  double n = 0.0;
  for (std::size_t k = 0; k < system.size(); ++k) n += 2.0 * w * std::norm(amps.b(*idx, k));
  return n;
}

double bogoliubov_form(const SlowAmplitudes& amps, const SlowSystem& system, std::size_t pump) {
  double q = 0.0;
  for (std::size_t m = 0; m < system.size(); ++m) {
    q += 2.0 * system.omegas()[m] * (std::norm(amps.c(m, pump)) - std::norm(amps.b(m, pump)));
  }
  return q;
}

}  // namespace casimir
