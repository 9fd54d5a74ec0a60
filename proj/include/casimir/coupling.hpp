#pragma once

// Rotating-frame coupling of the truncated mode expansion.
//
// In the co-rotating frame the rotation enters through the operator
// -i J_z (2 theta_dot d/dt + theta_ddot). Projected onto the static sine
// modes it couples mode m to mode n with weight W_mn:
//
//   c''_m = -omega_m^2 c_m + sum_n W_mn (2 theta_dot c'_n + theta_ddot c_n)
//
//   W_mn = 8 g_tensor(n_x, m_x, n_y, m_y)   both x and y differ
//        =   g(n_x, m_x)                     only x differs
//        = - g(n_y, m_y)                     only y differs
//
// The explicit epsilon of the projected equation cancels against theta, so
// nothing here divides by epsilon.
//
// The first-order equation above drops the theta_dot^2 part of
// (d/dt - theta_dot W)^2. Kept, it adds -theta_dot^2 (W W c)_m to the right
// hand side. Without it the iterated first-order coupling shifts the
// resonance by O(epsilon^2), about 0.1% of Omega at epsilon = 0.01.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "casimir/spectrum.hpp"

namespace casimir {

using Complex = std::complex<double>;

/// g_nm = (1 - (-1)^(m+n)) m n / (m^2 - n^2), zero for n == m.
double g_scalar(int n, int m);

/// (1/pi^2) (1/(mx^2 - nx^2) - 1/(my^2 - ny^2)) g(nx, mx) g(ny, my),
/// zero when nx == mx or ny == my.
double g_tensor(int nx, int mx, int ny, int my);

struct ThetaValues {
  double theta;
  double theta_dot;
  double theta_ddot;
};

/// Rotation angle about z as a function of time.
///
/// Sinusoidal: theta = epsilon sin(Omega t).
/// Constant acceleration: theta_ddot = alpha, starting from rest at theta = 0;
/// `epsilon` holds alpha and `Omega` is unused.
struct RotationProfile {
  ProfileKind kind = ProfileKind::kSinusoidal;
  double epsilon = 0.0;
  double Omega = 0.0;

  static RotationProfile sinusoidal(double epsilon, double Omega) {
    return {ProfileKind::kSinusoidal, epsilon, Omega};
  }
  static RotationProfile constant_acceleration(double alpha) {
    return {ProfileKind::kConstantAcceleration, alpha, 0.0};
  }
};

ThetaValues theta_eval(const RotationProfile& profile, double t);

enum class FrameTerms {
  /// theta_dot^2 term dropped.
  kFirstOrder,
  /// Full frame transformation including -theta_dot^2 W^2.
  kWithCentrifugal,
};

/// Truncated basis plus the sparse rotation coupling in CSR layout.
/// Immutable after construction.
class CoupledSystem {
 public:
  struct Entry {
    std::size_t column;
    double weight;
  };

  /// Modes in different n_z blocks are allowed and never couple.
  CoupledSystem(std::vector<ModeIndex> basis, double L);

  const std::vector<ModeIndex>& basis() const { return basis_; }
  const std::vector<double>& omegas() const { return omegas_; }
  double L() const { return L_; }
  std::size_t size() const { return basis_.size(); }
  std::size_t nonzeros() const { return entries_.size(); }
  double max_omega() const;

  /// Position of `mode` in the basis, or size() when absent.
  std::size_t find(const ModeIndex& mode) const;
  bool contains(const ModeIndex& mode) const { return find(mode) < size(); }

  /// W_mn by basis positions (0 when not stored).
  double weight(std::size_t m, std::size_t n) const;
  double weight(const ModeIndex& m, const ModeIndex& n) const;

  /// Stored couplings of row m.
  std::span<const Entry> row(std::size_t m) const {
    return {entries_.data() + row_start_[m], row_start_[m + 1] - row_start_[m]};
  }

 private:
  std::vector<ModeIndex> basis_;
  std::vector<double> omegas_;
  double L_;
  std::vector<std::size_t> row_start_;
  std::vector<Entry> entries_;
};

/// Coupling weight of partner n in the equation for mode m, zero when the
/// selection rules forbid it.
double coupling_weight(const ModeIndex& m, const ModeIndex& n);

/// Basis (n_x, n_y, n_z) with n_x, n_y in [1, n_max], ordered x-major.
CoupledSystem build_coupled_system(int n_max, int n_z, double L);

/// Second derivative of every mode amplitude. Linear in (c, cdot). Throws
/// std::invalid_argument on dimension mismatch.
std::vector<Complex> assemble_rhs(const CoupledSystem& system, const RotationProfile& profile,
                                  double t, std::span<const Complex> c,
                                  std::span<const Complex> cdot,
                                  FrameTerms terms = FrameTerms::kWithCentrifugal);

/// Allocation-free variant for the integrators. `scratch` needs 2 * size()
/// entries, `out` size().
void assemble_rhs_into(const CoupledSystem& system, const ThetaValues& th, FrameTerms terms,
                       std::span<const Complex> c, std::span<const Complex> cdot,
                       std::span<Complex> scratch, std::span<Complex> out);

/// out = W v.
void apply_weights(const CoupledSystem& system, std::span<const Complex> v,
                   std::span<Complex> out);

/// Slow-time coupling G_m^k = (2 omega_m - Omega) Omega / (4 omega_k) g(m_i, k_i),
/// with i the single axis along which m and k differ. Throws std::domain_error
/// when m and k differ along both x and y, along z, or not at all.
double slow_coupling_G(const ModeIndex& m, const ModeIndex& k, double Omega, double L);

}  // namespace casimir
