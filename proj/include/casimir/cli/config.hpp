#pragma once

// Run configuration shared by every subcommand. Loaded from a single JSON
// document; command-line flags override individual keys. Defaults reproduce
// the three-mode resonance (L = 1, epsilon = 0.01,
// Omega = (sqrt3 + sqrt6) pi, N_max = 5, n_z = 1).

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "casimir/coupling.hpp"
#include "casimir/spectrum.hpp"

namespace casimir::cli {

enum class OutputFormat { kCsv, kJson };

struct SweepRange {
  double omega_min = 0.0;
  double omega_max = 0.0;
  int steps = 0;
};

struct CompareTolerances {
  double n_rel = 0.05;
  double lambda_rel = 0.05;
};

struct RunConfig {
  CavityConfig cavity;
  /// Constant-acceleration profile only; unset means alpha = epsilon Omega / t_f,
  /// so the final angular velocity matches the sinusoidal peak.
  std::optional<double> alpha;
  int n_max = 5;
  int n_z = 1;
  /// Empty means the resonant set at Omega.
  std::vector<ModeIndex> pumps;
  bool all_pumps = false;
  double t_f = 200.0;
  std::optional<double> tau_f;
  double dt = 0.005;
  double dtau = 1e-4;
  int sample_every = 10;
  std::optional<double> tol;
  std::optional<int> max_index;
  bool include_difference = false;
  bool first_order_frame = false;
  std::pair<double, double> fit_window{0.5, 2.0};
  CompareTolerances compare;
  SweepRange sweep;
  ModeIndex track{1, 1, 1};
  std::string out_dir = ".";
  OutputFormat format = OutputFormat::kCsv;

  double tolerance() const { return tol.value_or(default_tolerance(cavity.L)); }
  int search_max_index() const { return max_index.value_or(n_max); }
  FrameTerms frame_terms() const {
    return first_order_frame ? FrameTerms::kFirstOrder : FrameTerms::kWithCentrifugal;
  }
};

/// Unknown keys are rejected so typos do not silently fall back to defaults.
RunConfig config_from_json(const nlohmann::json& doc);
RunConfig load_config(const std::string& path);
nlohmann::json config_to_json(const RunConfig& config);

/// Throws std::invalid_argument naming the violated bound. Returns any
/// non-fatal warning from the cavity check.
std::string validate(const RunConfig& config);

ModeIndex parse_mode(const std::string& text);

}  // namespace casimir::cli
