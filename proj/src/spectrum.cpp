#include "casimir/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace casimir {

ModeIndex::ModeIndex(int nx, int ny, int nz) : nx_(nx), ny_(ny), nz_(nz) {
  if (nx < 1 || ny < 1 || nz < 1) {
    throw std::invalid_argument("mode indices must be >= 1, got (" + std::to_string(nx) + "," +
                                std::to_string(ny) + "," + std::to_string(nz) + ")");
  }
}

std::string ModeIndex::label() const {
  return std::to_string(nx_) + "_" + std::to_string(ny_) + "_" + std::to_string(nz_);
}

std::string to_string(const ModeIndex& m) {
  return "(" + std::to_string(m.nx()) + "," + std::to_string(m.ny()) + "," +
         std::to_string(m.nz()) + ")";
}

std::string to_string(CouplingAxis axis) {
  switch (axis) {
    case CouplingAxis::kX:
      return "x";
    case CouplingAxis::kY:
      return "y";
    case CouplingAxis::kXY:
      return "xy";
  }
  return "?";
}

double three_mode_omega(double L) {
  return (std::sqrt(3.0) + std::sqrt(6.0)) * std::numbers::pi / L;
}

double default_tolerance(double L) { return 1e-9 * std::numbers::pi / L; }

std::string validate(const CavityConfig& config) {
  if (!(config.L > 0.0) || !std::isfinite(config.L)) {
    throw std::invalid_argument("cavity length L must be > 0");
  }
  if (!(config.epsilon >= 0.0) || !std::isfinite(config.epsilon)) {
    throw std::invalid_argument("epsilon must be >= 0");
  }
  if (!(config.Omega > 0.0) || !std::isfinite(config.Omega)) {
    throw std::invalid_argument("Omega must be > 0");
  }
  if (config.profile == ProfileKind::kSinusoidal) {
    const double rim = config.epsilon * config.Omega * config.L;
    if (rim >= kMaxRimSpeed) {
      std::ostringstream os;
      os << "epsilon*Omega*L = " << rim << " must be < " << kMaxRimSpeed;
      throw std::invalid_argument(os.str());
    }
    if (rim > kRimSpeedWarning) {
      std::ostringstream os;
      os << "epsilon*Omega*L = " << rim << " exceeds " << kRimSpeedWarning
         << "; first-order rotation terms may be inaccurate";
      return os.str();
    }
  }
  return {};
}

double mode_frequency(const ModeIndex& n, double L) {
  const double s = static_cast<double>(n.nx()) * n.nx() + static_cast<double>(n.ny()) * n.ny() +
                   static_cast<double>(n.nz()) * n.nz();
  return std::numbers::pi / L * std::sqrt(s);
}

bool selection_rule_allows(const ModeIndex& m, const ModeIndex& n) {
  if (m.nz() != n.nz()) return false;
  const bool dx = m.nx() != n.nx();
  const bool dy = m.ny() != n.ny();
  if (!dx && !dy) return false;
  if (dx && (m.nx() + n.nx()) % 2 == 0) return false;
  if (dy && (m.ny() + n.ny()) % 2 == 0) return false;
  return true;
}

CouplingAxis coupling_axis(const ModeIndex& m, const ModeIndex& n) {
  const bool dx = m.nx() != n.nx();
  const bool dy = m.ny() != n.ny();
  if (dx && dy) return CouplingAxis::kXY;
  if (dx) return CouplingAxis::kX;
  if (dy) return CouplingAxis::kY;
  throw std::invalid_argument("modes " + to_string(m) + " and " + to_string(n) +
                              " agree along x and y");
}

std::vector<ResonantPair> find_resonant_pairs(const ResonanceSearch& search) {
  if (search.max_index < 1) throw std::invalid_argument("max_index must be >= 1");
  if (!(search.tol > 0.0)) throw std::invalid_argument("tol must be > 0");
  if (!(search.L > 0.0)) throw std::invalid_argument("L must be > 0");

  const int n = search.max_index;
  std::vector<ResonantPair> out;
  for (int nz = 1; nz <= n; ++nz) {
    std::vector<ModeIndex> block;
    for (int nx = 1; nx <= n; ++nx)
      for (int ny = 1; ny <= n; ++ny) block.emplace_back(nx, ny, nz);

    for (std::size_t i = 0; i < block.size(); ++i) {
      for (std::size_t j = i; j < block.size(); ++j) {
        const ModeIndex& a = block[i];
        const ModeIndex& b = block[j];
        if (!selection_rule_allows(a, b)) continue;
        const double wa = mode_frequency(a, search.L);
        const double wb = mode_frequency(b, search.L);
        const bool a_low = wa < wb || (wa == wb && a < b);
        const ModeIndex& lo = a_low ? a : b;
        const ModeIndex& hi = a_low ? b : a;

        const double sum_detuning = wa + wb - search.Omega;
        if (std::abs(sum_detuning) <= search.tol) {
          out.push_back({lo, hi, sum_detuning, coupling_axis(a, b), MatchKind::kSum});
        }
        if (search.include_difference) {
          const double diff_detuning = std::abs(wa - wb) - search.Omega;
          if (std::abs(diff_detuning) <= search.tol) {
            out.push_back({lo, hi, diff_detuning, coupling_axis(a, b), MatchKind::kDifference});
          }
        }
      }
    }
  }
  std::sort(out.begin(), out.end(), [](const ResonantPair& p, const ResonantPair& q) {
    const double dp = std::abs(p.detuning);
    const double dq = std::abs(q.detuning);
    if (dp != dq) return dp < dq;
    if (p.lo != q.lo) return p.lo < q.lo;
    return p.hi < q.hi;
  });
  return out;
}

std::vector<ModeIndex> modes_by_frequency(int n_max, int n_z, double L) {
  if (n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  std::vector<ModeIndex> modes;
  for (int nx = 1; nx <= n_max; ++nx)
    for (int ny = 1; ny <= n_max; ++ny) modes.emplace_back(nx, ny, n_z);
  std::stable_sort(modes.begin(), modes.end(), [L](const ModeIndex& a, const ModeIndex& b) {
    const double wa = mode_frequency(a, L);
    const double wb = mode_frequency(b, L);
    if (wa != wb) return wa < wb;
    return a < b;
  });
  return modes;
}

}  // namespace casimir
