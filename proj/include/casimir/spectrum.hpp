#pragma once

// Static spectrum of the cubic Dirichlet cavity and search for mode pairs
// that the swinging rotation couples resonantly.
//
// Units: c = 1. Frequencies are in units of c/L when L = 1.

#include <compare>
#include <string>
#include <vector>

namespace casimir {

/// Mode label (n_x, n_y, n_z) of the static cavity. All components are >= 1.
class ModeIndex {
 public:
  ModeIndex(int nx, int ny, int nz);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  int nz() const { return nz_; }

  /// "nx_ny_nz", used for CSV column names and JSON keys.
  std::string label() const;

  friend auto operator<=>(const ModeIndex&, const ModeIndex&) = default;

 private:
  int nx_;
  int ny_;
  int nz_;
};

std::string to_string(const ModeIndex& m);

enum class ProfileKind { kSinusoidal, kConstantAcceleration };

/// Drive that makes (1,1,1) resonate with (1,2,1) and (2,1,1): (sqrt(3) + sqrt(6)) * pi / L.
double three_mode_omega(double L);

/// Physical setup. `epsilon` may be zero (static cavity reference runs).
struct CavityConfig {
  double L = 1.0;
  double epsilon = 0.01;
  double Omega = three_mode_omega(1.0);
  ProfileKind profile = ProfileKind::kSinusoidal;
};

/// Peak rim speed bound: epsilon * Omega * L must stay below this.
inline constexpr double kMaxRimSpeed = 1.0;
/// Above this the neglected O(theta_dot^2) terms stop being small.
inline constexpr double kRimSpeedWarning = 0.2;

/// Throws std::invalid_argument naming the violated bound. Returns a warning
/// message (empty if none) when the small-velocity assumption is stretched.
std::string validate(const CavityConfig& config);

/// Which axes carry differing indices between the two modes of a pair.
enum class CouplingAxis { kX, kY, kXY };

std::string to_string(CouplingAxis axis);

enum class MatchKind { kSum, kDifference };

struct ResonantPair {
  ModeIndex lo;
  ModeIndex hi;
  double detuning;  // omega_lo + omega_hi - Omega (sum) or |omega_hi - omega_lo| - Omega
  CouplingAxis coupled_axis;
  MatchKind match = MatchKind::kSum;
};

/// pi/L * sqrt(nx^2 + ny^2 + nz^2)
double mode_frequency(const ModeIndex& n, double L);

/// Default matching tolerance, 1e-9 * pi / L.
double default_tolerance(double L);

/// True when the rotation couples m and n at all: same n_z, and along every
/// axis where the indices differ their sum is odd. Equal modes never couple.
bool selection_rule_allows(const ModeIndex& m, const ModeIndex& n);

/// Axis tag for two modes that differ along x and/or y.
CouplingAxis coupling_axis(const ModeIndex& m, const ModeIndex& n);

struct ResonanceSearch {
  double Omega = 0.0;
  double L = 1.0;
  int max_index = 1;
  double tol = 0.0;
  /// Also report |omega_m - omega_n| = Omega matches.
  bool include_difference = false;
};

/// Every unordered coupled pair with components <= max_index whose
/// frequency sum matches Omega within tol. Sorted by |detuning|, then by
/// (lo, hi). Throws std::invalid_argument for max_index < 1 or tol <= 0.
std::vector<ResonantPair> find_resonant_pairs(const ResonanceSearch& search);

inline std::vector<ResonantPair> find_resonant_pairs(double Omega, double L, int max_index,
                                                     double tol) {
  return find_resonant_pairs(ResonanceSearch{Omega, L, max_index, tol, false});
}

/// Modes of the search box (n_z fixed) sorted by frequency, then index.
std::vector<ModeIndex> modes_by_frequency(int n_max, int n_z, double L);

}  // namespace casimir
