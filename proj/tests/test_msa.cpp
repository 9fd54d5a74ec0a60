#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "casimir/msa.hpp"

using namespace casimir;
using std::numbers::pi;

namespace {

const double kOmega = (std::sqrt(3.0) + std::sqrt(6.0)) * pi;
// High-precision evaluations of the closed forms at L = 1.
const double kLambdaSq = 4.65257613309258635610;
const double kLambda = 2.15698310913474386347;

SlowSystem three_mode_system() {
  return build_slow_system(find_resonant_pairs(kOmega, 1.0, 3, 1e-9), kOmega, 1.0);
}

SlowSystem hand_built(std::vector<double> a) {
  const std::size_t n = static_cast<std::size_t>(std::lround(std::sqrt(double(a.size()))));
  std::vector<ModeIndex> modes;
  std::vector<double> omegas;
  for (std::size_t i = 0; i < n; ++i) {
    modes.emplace_back(1, int(i) + 1, 1);
    omegas.push_back(1.0 + 0.5 * double(i));
  }
  return SlowSystem(modes, omegas, std::move(a), 1.0, 0.0);
}

double max_diff(const SlowAmplitudes& a, const SlowAmplitudes& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.B.size(); ++i) {
    d = std::max(d, std::abs(a.B[i] - b.B[i]));
    d = std::max(d, std::abs(a.C[i] - b.C[i]));
  }
  return d;
}

}  // namespace

TEST_CASE("three-mode growth exponent") {
  CHECK(three_mode_lambda_squared(kOmega, 1.0) == doctest::Approx(kLambdaSq).epsilon(1e-13));
  CHECK(three_mode_lambda_squared(kOmega, 1.0) ==
        doctest::Approx(std::sqrt(2.0) * pi * pi / 3.0).epsilon(1e-13));
  const auto sys = three_mode_system();
  const auto star = star_growth_exponent(sys);
  REQUIRE(star);
  CHECK(star->amplifying);
  CHECK(star->rate == doctest::Approx(kLambda).epsilon(1e-13));
  const auto eig = spectral_growth_exponent(sys);
  CHECK(eig.amplifying);
  CHECK(eig.rate == doctest::Approx(kLambda).epsilon(1e-12));
}

TEST_CASE("three-mode slow couplings") {
  const auto sys = three_mode_system();
  REQUIRE(sys.size() == 3);
  const auto i111 = *sys.find({1, 1, 1});
  const auto i121 = *sys.find({1, 2, 1});
  const auto i211 = *sys.find({2, 1, 1});
  const double r3 = pi / std::sqrt(3.0), r6 = pi / std::sqrt(6.0);
  CHECK(sys.coupling(i111, i121) == doctest::Approx(-r3));
  CHECK(sys.coupling(i111, i211) == doctest::Approx(r3));
  CHECK(sys.coupling(i121, i111) == doctest::Approx(-r6));
  CHECK(sys.coupling(i211, i111) == doctest::Approx(r6));
  CHECK(sys.coupling(i121, i211) == 0.0);
  CHECK(sys.coupling(i111, i111) == 0.0);
}

// Averaging the first-order rotating-frame force over the fast phase gives
// dB_m/dtau = Omega (2 w_m - Omega) / (4 w_m) W_mn C_n at exact resonance.
TEST_CASE("slow couplings agree with the secular projection of W") {
  std::vector<std::pair<ModeIndex, ModeIndex>> pairs{
      {{1, 1, 1}, {1, 2, 1}}, {{1, 1, 1}, {2, 1, 1}}, {{1, 1, 2}, {2, 1, 2}},
      {{2, 3, 1}, {2, 4, 1}}, {{3, 2, 3}, {4, 2, 3}}, {{1, 4, 2}, {1, 5, 2}}};
  for (const auto& [a, b] : pairs) {
    const double Omega = mode_frequency(a, 1.0) + mode_frequency(b, 1.0);
    for (const auto& [m, n] : {std::pair{a, b}, std::pair{b, a}}) {
      const double wm = mode_frequency(m, 1.0);
      const double projected = Omega * (2 * wm - Omega) / (4 * wm) * coupling_weight(m, n);
      CHECK(slow_coupling_signed(m, n, Omega, 1.0) == doctest::Approx(projected));
    }
    // (2 w_m - Omega)(2 w_n - Omega) = -(w_m - w_n)^2 with W antisymmetric: always amplifying.
    CHECK(slow_coupling_signed(a, b, Omega, 1.0) * slow_coupling_signed(b, a, Omega, 1.0) > 0.0);
  }
}

TEST_CASE("three-mode closed form") {
  const auto a0 = solve_three_mode_analytic(kOmega, 1.0, 0.0);
  const double w111 = std::sqrt(3.0) * pi, w121 = std::sqrt(6.0) * pi;
  for (std::size_t m = 0; m < 3; ++m) {
    for (std::size_t k = 0; k < 3; ++k) {
      CHECK(std::abs(a0.b(m, k)) == 0.0);
      const double expect = m == k ? 1.0 / std::sqrt(2.0 * (m == 0 ? w111 : w121)) : 0.0;
      CHECK(a0.c(m, k).real() == doctest::Approx(expect));
    }
  }
  const auto a1 = solve_three_mode_analytic(kOmega, 1.0, 1.0);
  CHECK(a1.b(1, 0).real() == doctest::Approx(-0.768675203563582528).epsilon(1e-12));
  CHECK_THROWS_AS(solve_three_mode_analytic(1.01 * kOmega, 1.0, 1.0), std::domain_error);
}

TEST_CASE("three-mode particle numbers") {
  const auto sys = three_mode_system();
  const auto ref = SlowSystem(three_mode_set(), {std::sqrt(3.0) * pi, std::sqrt(6.0) * pi,
                                                 std::sqrt(6.0) * pi},
                              std::vector<double>(9, 0.0), kOmega, 0.0);
  const std::vector<std::pair<double, double>> frozen{
      {0.5, 1.69017269331411534687}, {1.0, 18.1874257061552238378}, {2.0, 1395.87951809228426523}};
  for (const auto& [tau, n] : frozen) {
    const auto a = solve_three_mode_analytic(kOmega, 1.0, tau);
    CHECK(particle_number(a, {1, 1, 1}, ref) == doctest::Approx(n).epsilon(1e-12));
    CHECK(particle_number(a, {1, 2, 1}, ref) == doctest::Approx(n / 2).epsilon(1e-12));
    CHECK(particle_number(a, {2, 1, 1}, ref) == doctest::Approx(n / 2).epsilon(1e-12));
    const auto star = solve_star_analytic(sys, tau).amplitudes;
    CHECK(particle_number(star, {1, 1, 1}, sys) == doctest::Approx(n).epsilon(1e-12));
  }
  const auto none = initial_slow_amplitudes(sys);
  for (const auto& m : sys.modes()) CHECK(particle_number(none, m, sys) == 0.0);
  CHECK_THROWS_AS(particle_number(none, {3, 3, 1}, sys), std::domain_error);
}

TEST_CASE("reduced integration matches the closed form") {
  const auto sys = three_mode_system();
  const auto traj = integrate_reduced(sys, 2.0, 1e-4, 1000);
  REQUIRE(traj.back().tau == doctest::Approx(2.0));
  const auto exact = solve_three_mode_analytic(kOmega, 1.0, 2.0);
  // Reorder to the slow-system order.
  const auto three = three_mode_set();
  double d = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k = 0; k < 3; ++k) {
      const std::size_t ai = *sys.find(three[i]), ak = *sys.find(three[k]);
      d = std::max(d, std::abs(traj.back().b(ai, ak) - exact.b(i, k)));
      d = std::max(d, std::abs(traj.back().c(ai, ak) - exact.c(i, k)));
    }
  CHECK(d <= 1e-8);
}

TEST_CASE("particle number is monotone in tau") {
  const auto sys = three_mode_system();
  const auto traj = integrate_reduced(sys, 2.0, 1e-3, 10);
  for (std::size_t i = 1; i < traj.size(); ++i) {
    CHECK(particle_number(traj[i], {1, 1, 1}, sys) > particle_number(traj[i - 1], {1, 1, 1}, sys));
  }
}

TEST_CASE("Bogoliubov form is conserved") {
  const auto sys = three_mode_system();
  const auto traj = integrate_reduced(sys, 2.0, 1e-4, 100);
  for (const auto& a : traj) {
    for (std::size_t k = 0; k < sys.size(); ++k) {
      CHECK(std::abs(bogoliubov_form(a, sys, k) - 1.0) <= 1e-8);
    }
  }
}

TEST_CASE("single pair reduces to one product") {
  const auto pairs = find_resonant_pairs(kOmega, 1.0, 3, 1e-9);
  std::vector<ResonantPair> one;
  for (const auto& p : pairs)
    if (p.hi == ModeIndex(1, 2, 1)) one.push_back(p);
  REQUIRE(one.size() == 1);
  const auto sys = build_slow_system(one, kOmega, 1.0);
  REQUIRE(sys.size() == 2);
  const auto e = *star_growth_exponent(sys);
  CHECK(e.lambda_squared == doctest::Approx(slow_coupling_G({1, 2, 1}, {1, 1, 1}, kOmega, 1.0) *
                                            slow_coupling_G({1, 1, 1}, {1, 2, 1}, kOmega, 1.0)));
  CHECK(e.lambda_squared == doctest::Approx(kLambdaSq / 2));
  const auto numeric = integrate_reduced(sys, 1.5, 1e-4, 100000).back();
  CHECK(max_diff(numeric, solve_star_analytic(sys, 1.5).amplitudes) <= 1e-8);
}

TEST_CASE("empty pair list gives a frozen system") {
  const auto sys = build_slow_system({}, kOmega, 1.0);
  CHECK(sys.size() == 0);
  const auto traj = integrate_reduced(sys, 1.0, 0.1);
  CHECK(traj.back().B.empty());
  CHECK(spectral_growth_exponent(sys).rate == 0.0);
}

TEST_CASE("unsupported pairs are rejected") {
  const double Omega = mode_frequency({1, 1, 1}, 1.0) + mode_frequency({2, 2, 1}, 1.0);
  const auto xy = find_resonant_pairs(Omega, 1.0, 3, 1e-9);
  REQUIRE_FALSE(xy.empty());
  CHECK(xy.front().coupled_axis == CouplingAxis::kXY);
  CHECK_THROWS_AS(build_slow_system(xy, Omega, 1.0), std::domain_error);

  const double diff = mode_frequency({1, 2, 1}, 1.0) - mode_frequency({1, 1, 1}, 1.0);
  const auto dpairs = find_resonant_pairs({diff, 1.0, 3, 1e-9, true});
  REQUIRE_FALSE(dpairs.empty());
  CHECK_THROWS_AS(build_slow_system(dpairs, diff, 1.0), std::domain_error);
}

TEST_CASE("oscillating branch") {
  const auto sys = hand_built({0.0, 1.5, -0.6, 0.0});
  const auto e = *star_growth_exponent(sys);
  CHECK_FALSE(e.amplifying);
  CHECK(e.lambda_squared == doctest::Approx(-0.9));
  const auto eig = spectral_growth_exponent(sys);
  CHECK_FALSE(eig.amplifying);
  CHECK(eig.lambda_squared == doctest::Approx(-0.9));
  for (double tau : {0.3, 2.0, 7.0}) {
    const auto numeric = integrate_reduced(sys, tau, 1e-3, 1000000).back();
    CHECK(max_diff(numeric, solve_star_analytic(sys, tau).amplitudes) <= 1e-9);
  }
}

TEST_CASE("marginal branch") {
  const auto sys = hand_built({0.0, 1.5, 0.0, 0.0});
  const auto e = *star_growth_exponent(sys);
  CHECK(e.lambda_squared == 0.0);
  CHECK_FALSE(e.amplifying);
  const auto numeric = integrate_reduced(sys, 2.0, 1e-3, 1000000).back();
  CHECK(max_diff(numeric, solve_star_analytic(sys, 2.0).amplitudes) <= 1e-10);
}

TEST_CASE("random stars: closed form, spectrum and RK4 agree") {
  std::mt19937 rng(42);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t n = 2 + trial % 4;
    std::vector<double> a(n * n, 0.0);
    for (std::size_t s = 1; s < n; ++s) {
      a[s] = u(rng);
      a[s * n] = a[s] > 0 ? std::abs(u(rng)) : -std::abs(u(rng));
    }
    const auto sys = hand_built(a);
    const auto star = *star_growth_exponent(sys);
    const auto eig = spectral_growth_exponent(sys);
    CHECK(star.amplifying);
    CHECK(eig.rate == doctest::Approx(star.rate).epsilon(1e-10));
    const auto numeric = integrate_reduced(sys, 1.0, 1e-3, 1000000).back();
    CHECK(max_diff(numeric, solve_star_analytic(sys, 1.0).amplitudes) <= 1e-9);
  }
}

TEST_CASE("chains are not stars") {
  const auto sys = hand_built({0, 1, 0, 0,  //
                               1, 0, 1, 0,  //
                               0, 1, 0, 1,  //
                               0, 0, 1, 0});
  CHECK_FALSE(star_growth_exponent(sys));
  CHECK_THROWS_AS(solve_star_analytic(sys, 1.0), std::domain_error);
  // Path graph P4: eigenvalues 2 cos(k pi / 5).
  const auto eig = spectral_growth_exponent(sys);
  CHECK(eig.rate == doctest::Approx(2 * std::cos(pi / 5)));
}

TEST_CASE("advance matches a single integration") {
  const auto sys = three_mode_system();
  auto a = initial_slow_amplitudes(sys);
  a = advance_reduced(sys, a, 0.7, 1e-4);
  a = advance_reduced(sys, a, 1.3, 1e-4);
  const auto b = integrate_reduced(sys, 1.3, 1e-4, 100000).back();
  CHECK(max_diff(a, b) <= 1e-10);
  CHECK(a.tau == doctest::Approx(1.3));
}

TEST_CASE("nz = 2 block resonance") {
  const double Omega = mode_frequency({1, 1, 2}, 1.0) + mode_frequency({2, 1, 2}, 1.0);
  const auto pairs = find_resonant_pairs(Omega, 1.0, 4, 1e-9);
  REQUIRE_FALSE(pairs.empty());
  std::vector<ResonantPair> supported;
  for (const auto& p : pairs)
    if (p.coupled_axis != CouplingAxis::kXY) supported.push_back(p);
  const auto sys = build_slow_system(supported, Omega, 1.0);
  CHECK(sys.find({1, 1, 2}));
  CHECK(spectral_growth_exponent(sys).amplifying);
}
