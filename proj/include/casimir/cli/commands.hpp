#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "casimir/cli/config.hpp"
#include "casimir/direct.hpp"
#include "casimir/msa.hpp"

namespace casimir::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfigError = 1;
inline constexpr int kExitToleranceBreach = 2;

/// Sinusoidal runs end on a whole number of drive periods; other profiles
/// keep the requested t_f.
double rounded_final_time(const RunConfig& config);

/// Sum-frequency pairs inside the configured n_z block.
std::vector<ResonantPair> resonant_pairs(const RunConfig& config);

/// Configured pumps, or the modes of the resonant set, or (1,1,n_z).
std::vector<ModeIndex> select_pumps(const RunConfig& config, const CoupledSystem& system,
                                    const std::vector<ResonantPair>& pairs);

RotationProfile make_profile(const RunConfig& config, double t_f);

/// One integrate_full per pump. Pumps run concurrently up to `threads`.
PumpRuns run_pumps(const RunConfig& config, const CoupledSystem& system,
                   const RotationProfile& profile, const std::vector<ModeIndex>& pumps,
                   double t_f, unsigned threads = 1);

/// CASIMIR_SWING_THREADS, 0 or unset meaning hardware concurrency.
unsigned worker_threads();

int cmd_spectrum(const RunConfig& config, std::ostream& out);
int cmd_resonances(const RunConfig& config, std::ostream& out);
int cmd_msa(const RunConfig& config, std::ostream& out);
int cmd_direct(const RunConfig& config, std::ostream& out);
int cmd_compare(const RunConfig& config, std::ostream& out);
int cmd_sweep(const RunConfig& config, std::ostream& out);

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace casimir::cli
