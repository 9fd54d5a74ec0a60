#include "casimir/cli/commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "casimir/cli/csv.hpp"

namespace casimir::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

json mode_json(const ModeIndex& m) { return json::array({m.nx(), m.ny(), m.nz()}); }

std::string out_path(const RunConfig& config, const std::string& name) {
  fs::create_directories(config.out_dir);
  return (fs::path(config.out_dir) / name).string();
}

void write_json(const std::string& path, const json& doc) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open " + path + " for writing");
  f << doc.dump(2) << '\n';
}

/// Series tables go to CSV or JSON depending on --format.
class TableSink {
 public:
  TableSink(const RunConfig& config, const std::string& stem, std::vector<std::string> header)
      : format_(config.format), header_(std::move(header)) {
    if (format_ == OutputFormat::kCsv) {
      path_ = out_path(config, stem + ".csv");
      csv_.emplace(path_, header_);
    } else {
      path_ = out_path(config, stem + ".json");
      doc_ = {{"header", header_}, {"rows", json::array()}};
    }
  }

  void row(const std::vector<double>& values) {
    if (csv_) csv_->row(values);
    else doc_["rows"].push_back(values);
  }
  void row(const std::vector<std::string>& fields) {
    if (csv_) csv_->row(fields);
    else doc_["rows"].push_back(fields);
  }

  const std::string& path() const { return path_; }

  ~TableSink() {
    if (!csv_) {
      try {
        write_json(path_, doc_);
      } catch (...) {
      }
    }
  }

 private:
  OutputFormat format_;
  std::vector<std::string> header_;
  std::string path_;
  std::optional<CsvWriter> csv_;
  json doc_;
};

std::string warn_line(const std::string& w) { return w.empty() ? "" : "warning: " + w + "\n"; }

json pairs_json(const std::vector<ResonantPair>& pairs) {
  json arr = json::array();
  for (const auto& p : pairs) {
    arr.push_back({{"lo", mode_json(p.lo)},
                   {"hi", mode_json(p.hi)},
                   {"detuning", p.detuning},
                   {"axis", to_string(p.coupled_axis)},
                   {"match", p.match == MatchKind::kSum ? "sum" : "difference"}});
  }
  return arr;
}

double slow_tau_f(const RunConfig& config) {
  if (config.tau_f) return *config.tau_f;
  return config.cavity.epsilon * rounded_final_time(config);
}

struct MsaPlan {
  std::vector<ResonantPair> pairs;
  std::optional<SlowSystem> system;
  std::string inapplicable_reason;
};

MsaPlan plan_msa(const RunConfig& config) {
  MsaPlan plan;
  plan.pairs = resonant_pairs(config);
  if (plan.pairs.empty()) {
    plan.inapplicable_reason = "no sum-frequency resonance at this Omega";
    return plan;
  }
  plan.system = build_slow_system(plan.pairs, config.cavity.Omega, config.cavity.L,
                                  config.cavity.epsilon);
  return plan;
}

bool is_three_mode_case(const RunConfig& config) {
  const double expected = three_mode_omega(config.cavity.L);
  return config.n_z == 1 && std::abs(config.cavity.Omega - expected) <= 1e-9 * expected;
}

GrowthExponent msa_exponent(const SlowSystem& system) {
  if (auto star = star_growth_exponent(system)) return *star;
  return spectral_growth_exponent(system);
}

/// Mode whose particle number drives the growth fit.
ModeIndex fit_mode(const RunConfig& config, const std::vector<ModeIndex>& tracked) {
  if (std::find(tracked.begin(), tracked.end(), config.track) != tracked.end()) return config.track;
  return tracked.front();
}

json fit_json(const std::optional<GrowthFit>& fit, const std::string& why) {
  if (!fit) return {{"lambda_fit", nullptr}, {"r_squared", nullptr}, {"reason", why}};
  return {{"lambda_fit", fit->lambda_fit},
          {"r_squared", fit->r_squared},
          {"window", json::array({fit->window.first, fit->window.second})},
          {"samples", fit->samples}};
}

std::optional<GrowthFit> try_fit(const std::vector<double>& tau, const std::vector<double>& n,
                                 std::pair<double, double> window, std::string& why) {
  try {
    return fit_growth_rate(tau, n, window);
  } catch (const std::domain_error& e) {
    why = e.what();
    return std::nullopt;
  }
}

Extraction extraction_for(const RunConfig& config) {
  return config.first_order_frame ? Extraction::kRotatingFrame : Extraction::kStoppedCavity;
}

struct DirectOutcome {
  CoupledSystem system;
  std::vector<ModeIndex> pumps;
  double t_f = 0.0;
  PumpRuns runs;
  std::map<ModeIndex, std::vector<NumberSample>> numbers;
  std::vector<double> tau;
};

DirectOutcome run_direct(const RunConfig& config, const std::vector<ResonantPair>& pairs,
                         unsigned threads) {
  DirectOutcome d{build_coupled_system(config.n_max, config.n_z, config.cavity.L), {}, 0.0, {}, {}, {}};
  d.pumps = select_pumps(config, d.system, pairs);
  d.t_f = rounded_final_time(config);
  const RotationProfile profile = make_profile(config, d.t_f);
  d.runs = run_pumps(config, d.system, profile, d.pumps, d.t_f, threads);
  for (const auto& m : d.pumps) {
    d.numbers[m] = direct_particle_number(d.runs, d.system, m, d.pumps, extraction_for(config));
  }
  if (!d.system.contains(config.track)) {
    throw std::invalid_argument("tracked mode " + to_string(config.track) + " is not in the basis");
  }
  if (!d.numbers.count(config.track)) {
    d.numbers[config.track] =
        direct_particle_number(d.runs, d.system, config.track, d.pumps, extraction_for(config));
  }
  for (const auto& s : d.numbers.begin()->second) d.tau.push_back(config.cavity.epsilon * s.t);
  return d;
}

std::vector<double> values(const std::vector<NumberSample>& s) {
  std::vector<double> v;
  v.reserve(s.size());
  for (const auto& x : s) v.push_back(x.n);
  return v;
}

std::pair<double, double> clipped_window(const RunConfig& config, double tau_end) {
  return {config.fit_window.first, std::min(config.fit_window.second, tau_end)};
}

}  // namespace

double rounded_final_time(const RunConfig& config) {
  if (config.cavity.profile != ProfileKind::kSinusoidal) return config.t_f;
  const double period = 2.0 * std::numbers::pi / config.cavity.Omega;
  const double cycles = std::floor(config.t_f / period + 1e-9);
  return cycles * period;
}

std::vector<ResonantPair> resonant_pairs(const RunConfig& config) {
  ResonanceSearch search{config.cavity.Omega, config.cavity.L, config.search_max_index(),
                         config.tolerance(), false};
  auto all = find_resonant_pairs(search);
  std::vector<ResonantPair> out;
  for (const auto& p : all) {
    if (p.lo.nz() == config.n_z) out.push_back(p);
  }
  return out;
}

std::vector<ModeIndex> select_pumps(const RunConfig& config, const CoupledSystem& system,
                                    const std::vector<ResonantPair>& pairs) {
  if (config.all_pumps) return system.basis();
  if (!config.pumps.empty()) return config.pumps;
  std::vector<ModeIndex> pumps;
  for (const auto& p : pairs) {
    for (const auto& m : {p.lo, p.hi}) {
      if (system.contains(m) && std::find(pumps.begin(), pumps.end(), m) == pumps.end()) {
        pumps.push_back(m);
      }
    }
  }
  if (pumps.empty()) pumps.emplace_back(1, 1, config.n_z);
  return pumps;
}

RotationProfile make_profile(const RunConfig& config, double t_f) {
  if (config.cavity.profile == ProfileKind::kSinusoidal) {
    return RotationProfile::sinusoidal(config.cavity.epsilon, config.cavity.Omega);
  }
  const double alpha =
      config.alpha.value_or(t_f > 0.0 ? config.cavity.epsilon * config.cavity.Omega / t_f : 0.0);
  return RotationProfile::constant_acceleration(alpha);
}

unsigned worker_threads() {
  unsigned n = 0;
  if (const char* env = std::getenv("CASIMIR_SWING_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) n = static_cast<unsigned>(v);
  }
  if (n == 0) n = std::max(1u, std::thread::hardware_concurrency());
  return n;
}

namespace {

/// Runs job(i) for i in [0, count) on up to `threads` workers.
template <typename Job>
void parallel_for(std::size_t count, unsigned threads, Job job) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(count)));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) job(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(count);
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          job(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

}  // namespace

PumpRuns run_pumps(const RunConfig& config, const CoupledSystem& system,
                   const RotationProfile& profile, const std::vector<ModeIndex>& pumps, double t_f,
                   unsigned threads) {
  DirectOptions opts{t_f, config.dt, static_cast<std::size_t>(config.sample_every),
                     config.frame_terms(), extraction_for(config)};
  std::vector<DirectSeries> results(pumps.size());
  parallel_for(pumps.size(), threads,
               [&](std::size_t i) { results[i] = integrate_full(system, profile, pumps[i], opts); });
  PumpRuns runs;
  for (std::size_t i = 0; i < pumps.size(); ++i) runs[pumps[i]] = std::move(results[i]);
  return runs;
}

int cmd_spectrum(const RunConfig& config, std::ostream& out) {
  const auto modes = modes_by_frequency(config.n_max, config.n_z, config.cavity.L);
  TableSink sink(config, "spectrum", {"mode", "nx", "ny", "nz", "omega"});
  for (const auto& m : modes) {
    const double w = mode_frequency(m, config.cavity.L);
    sink.row(std::vector<std::string>{m.label(), std::to_string(m.nx()), std::to_string(m.ny()),
                                      std::to_string(m.nz()), format_double(w)});
    out << to_string(m) << ' ' << format_double(w) << '\n';
  }
  out << "wrote " << sink.path() << '\n';
  return kExitOk;
}

int cmd_resonances(const RunConfig& config, std::ostream& out) {
  ResonanceSearch search{config.cavity.Omega, config.cavity.L, config.search_max_index(),
                         config.tolerance(), config.include_difference};
  const auto pairs = find_resonant_pairs(search);
  std::vector<std::string> header{"lo", "hi", "detuning", "axis"};
  if (config.include_difference) header.push_back("match");
  TableSink sink(config, "resonances", header);
  for (const auto& p : pairs) {
    std::vector<std::string> row{p.lo.label(), p.hi.label(), format_double(p.detuning),
                                 to_string(p.coupled_axis)};
    if (config.include_difference) row.push_back(p.match == MatchKind::kSum ? "sum" : "difference");
    sink.row(row);
    out << to_string(p.lo) << " - " << to_string(p.hi) << "  detuning " << format_double(p.detuning)
        << "  axis " << to_string(p.coupled_axis) << '\n';
  }
  out << pairs.size() << " pair(s); wrote " << sink.path() << '\n';
  return kExitOk;
}

int cmd_msa(const RunConfig& config, std::ostream& out) {
  const MsaPlan plan = plan_msa(config);
  const double tau_f = slow_tau_f(config);
  json summary = {{"command", "msa"},
                  {"parameters", config_to_json(config)},
                  {"tau_f", tau_f},
                  {"pairs", pairs_json(plan.pairs)}};
  if (!plan.system) {
    summary["applicable"] = false;
    summary["reason"] = plan.inapplicable_reason;
    write_json(out_path(config, "msa_summary.json"), summary);
    out << "MSA inapplicable: " << plan.inapplicable_reason << '\n';
    return kExitOk;
  }
  const SlowSystem& sys = *plan.system;
  const GrowthExponent e = msa_exponent(sys);
  const GrowthExponent spectral = spectral_growth_exponent(sys);
  const bool analytic = is_three_mode_case(config);

  const auto per_sample =
      static_cast<std::size_t>(std::max(1.0, std::round(0.01 / config.dtau)));
  const auto traj = integrate_reduced(sys, tau_f, config.dtau, per_sample);

  std::vector<std::string> header{"tau"};
  for (const auto& m : sys.modes()) header.push_back("N_" + m.label());
  if (analytic) {
    for (const auto& m : sys.modes()) header.push_back("N_" + m.label() + "_analytic");
  }
  for (const auto& m : sys.modes()) {
    for (const auto& k : sys.modes()) {
      const std::string s = "m" + m.label() + "_k" + k.label();
      for (const char* part : {"B_re_", "B_im_", "C_re_", "C_im_"}) header.push_back(part + s);
    }
  }
  TableSink sink(config, "msa", header);

  // Analytic mode order is fixed; map it onto the slow-system order.
  const auto three = three_mode_set();
  std::vector<std::size_t> to_analytic;
  if (analytic) {
    for (const auto& m : sys.modes()) {
      to_analytic.push_back(static_cast<std::size_t>(
          std::find(three.begin(), three.end(), m) - three.begin()));
    }
  }
  double max_diff = 0.0;
  for (const auto& a : traj) {
    std::vector<double> row{a.tau};
    for (const auto& m : sys.modes()) row.push_back(particle_number(a, m, sys));
    if (analytic) {
      const auto exact = solve_three_mode_analytic(config.cavity.Omega, config.cavity.L, a.tau);
      const SlowSystem ref(three, {mode_frequency(three[0], config.cavity.L),
                                   mode_frequency(three[1], config.cavity.L),
                                   mode_frequency(three[2], config.cavity.L)},
                           std::vector<double>(9, 0.0), config.cavity.Omega, 0.0);
      for (const auto& m : sys.modes()) row.push_back(particle_number(exact, m, ref));
      for (std::size_t i = 0; i < sys.size(); ++i) {
        for (std::size_t k = 0; k < sys.size(); ++k) {
          max_diff = std::max(max_diff, std::abs(a.b(i, k) - exact.b(to_analytic[i], to_analytic[k])));
          max_diff = std::max(max_diff, std::abs(a.c(i, k) - exact.c(to_analytic[i], to_analytic[k])));
        }
      }
    }
    for (std::size_t i = 0; i < sys.size(); ++i) {
      for (std::size_t k = 0; k < sys.size(); ++k) {
        row.push_back(a.b(i, k).real());
        row.push_back(a.b(i, k).imag());
        row.push_back(a.c(i, k).real());
        row.push_back(a.c(i, k).imag());
      }
    }
    sink.row(row);
  }

  const SlowAmplitudes& last = traj.back();
  json numbers = json::object();
  for (const auto& m : sys.modes()) numbers[m.label()] = particle_number(last, m, sys);
  summary["applicable"] = true;
  summary["modes"] = json::array();
  for (const auto& m : sys.modes()) summary["modes"].push_back(mode_json(m));
  summary["lambda_squared"] = e.lambda_squared;
  summary["lambda"] = e.rate;
  summary["amplifying"] = e.amplifying;
  summary["lambda_squared_spectral"] = spectral.lambda_squared;
  summary["analytic"] = analytic;
  summary["N"] = numbers;
  if (analytic) summary["max_abs_diff_analytic_numeric"] = max_diff;
  summary["bogoliubov_form"] = json::array();
  for (std::size_t k = 0; k < sys.size(); ++k) {
    summary["bogoliubov_form"].push_back(bogoliubov_form(last, sys, k));
  }
  write_json(out_path(config, "msa_summary.json"), summary);

  out << "lambda^2 = " << format_double(e.lambda_squared) << ", lambda = " << format_double(e.rate)
      << (e.amplifying ? "" : " (non-amplifying resonance)") << '\n';
  for (const auto& m : sys.modes()) {
    out << "N" << to_string(m) << "(tau_f = " << tau_f << ") = " << format_double(numbers[m.label()].get<double>())
        << '\n';
  }
  if (analytic) out << "max |analytic - numeric| = " << max_diff << '\n';
  out << "wrote " << sink.path() << '\n';
  return kExitOk;
}

int cmd_direct(const RunConfig& config, std::ostream& out) {
  const auto pairs = resonant_pairs(config);
  DirectOutcome d = run_direct(config, pairs, worker_threads());

  std::vector<ModeIndex> tracked = d.pumps;
  if (std::find(tracked.begin(), tracked.end(), config.track) == tracked.end()) {
    tracked.push_back(config.track);
  }

  std::vector<std::string> header{"t", "tau"};
  for (const auto& m : tracked) {
    for (const auto& k : d.pumps) {
      const std::string s = "m" + m.label() + "_k" + k.label();
      for (const char* part : {"absc_", "B_re_", "B_im_", "C_re_", "C_im_"}) header.push_back(part + s);
    }
  }
  for (const auto& m : tracked) header.push_back("N_" + m.label());
  TableSink sink(config, "direct", header);

  const std::size_t samples = d.tau.size();
  for (std::size_t i = 0; i < samples; ++i) {
    const double t = d.runs.at(d.pumps.front())[i].t;
    std::vector<double> row{t, d.tau[i]};
    std::map<ModeIndex, SlowPair> slow;
    for (const auto& k : d.pumps) {
      const DirectState& raw = d.runs.at(k)[i];
      const DirectState st =
          config.first_order_frame ? raw : stopped_cavity_state(d.system, raw);
      slow[k] = extract_slow_amplitudes(st, d.system.omegas());
    }
    for (const auto& m : tracked) {
      const std::size_t idx = d.system.find(m);
      for (const auto& k : d.pumps) {
        const auto& sp = slow.at(k);
        row.push_back(std::abs(d.runs.at(k)[i].c[idx]));
        row.push_back(sp.B[idx].real());
        row.push_back(sp.B[idx].imag());
        row.push_back(sp.C[idx].real());
        row.push_back(sp.C[idx].imag());
      }
    }
    for (const auto& m : tracked) row.push_back(d.numbers.at(m)[i].n);
    sink.row(row);
  }

  const ModeIndex fm = fit_mode(config, tracked);
  std::string why;
  const auto fit = config.cavity.epsilon > 0.0
                       ? try_fit(d.tau, values(d.numbers.at(fm)), clipped_window(config, d.tau.back()), why)
                       : std::nullopt;
  if (config.cavity.epsilon == 0.0) why = "epsilon = 0: slow time does not advance";

  json numbers = json::object();
  for (const auto& m : tracked) numbers[m.label()] = d.numbers.at(m).back().n;
  json summary = {{"command", "direct"},
                  {"parameters", config_to_json(config)},
                  {"t_f_requested", config.t_f},
                  {"t_f", d.t_f},
                  {"tau_f", config.cavity.epsilon * d.t_f},
                  {"frame_terms", config.first_order_frame ? "first-order" : "with-centrifugal"},
                  {"pumps", json::array()},
                  {"fit_mode", mode_json(fm)},
                  {"fit", fit_json(fit, why)},
                  {"N", numbers},
                  {"g_tensor_unvalidated", config.cavity.L != 1.0 && config.n_max >= 2}};
  for (const auto& p : d.pumps) summary["pumps"].push_back(mode_json(p));
  write_json(out_path(config, "direct_summary.json"), summary);

  if (d.t_f != config.t_f) {
    out << "t_f rounded down to " << format_double(d.t_f) << " (whole drive periods)\n";
  }
  for (const auto& m : tracked) {
    out << "N" << to_string(m) << "(t_f) = " << format_double(numbers[m.label()].get<double>()) << '\n';
  }
  if (fit) {
    out << "lambda_fit = " << format_double(fit->lambda_fit) << " (r^2 = " << fit->r_squared
        << ")\n";
  } else {
    out << "no growth fit: " << why << '\n';
  }
  out << "wrote " << sink.path() << '\n';
  return kExitOk;
}

int cmd_compare(const RunConfig& config, std::ostream& out) {
  const MsaPlan plan = plan_msa(config);
  DirectOutcome d = run_direct(config, plan.pairs, worker_threads());
  const auto window = clipped_window(config, d.tau.back());

  json report = {{"command", "compare"},
                 {"parameters", config_to_json(config)},
                 {"t_f", d.t_f},
                 {"tau_f", config.cavity.epsilon * d.t_f},
                 {"window", json::array({window.first, window.second})},
                 {"tolerances",
                  {{"n_rel_tol", config.compare.n_rel}, {"lambda_rel_tol", config.compare.lambda_rel}}}};

  bool pass = true;
  std::string fit_why;

  if (!plan.system) {
    report["msa_applicable"] = false;
    report["reason"] = plan.inapplicable_reason;
    const ModeIndex fm = fit_mode(config, d.pumps);
    const auto fit = config.cavity.epsilon > 0.0
                         ? try_fit(d.tau, values(d.numbers.at(fm)), window, fit_why)
                         : std::nullopt;
    report["direct"] = {{"fit_mode", mode_json(fm)}, {"fit", fit_json(fit, fit_why)}};
    report["pass"] = true;
    write_json(out_path(config, "compare_report.json"), report);
    out << "MSA inapplicable (" << plan.inapplicable_reason << "); direct-only report\n";
    return kExitOk;
  }

  const SlowSystem& sys = *plan.system;
  const GrowthExponent e = msa_exponent(sys);
  report["msa_applicable"] = true;
  report["lambda_msa"] = e.rate;
  report["amplifying"] = e.amplifying;

  // MSA amplitudes on the direct sampling grid.
  std::vector<SlowAmplitudes> msa_at;
  msa_at.reserve(d.tau.size());
  SlowAmplitudes a = initial_slow_amplitudes(sys);
  for (double tau : d.tau) {
    a = advance_reduced(sys, a, tau, config.dtau);
    msa_at.push_back(a);
  }

  json modes = json::array();
  for (const auto& m : sys.modes()) {
    if (!d.numbers.count(m)) continue;
    const auto& nd = d.numbers.at(m);
    double max_rel = 0.0;
    double max_abs = 0.0;
    std::size_t used = 0;
    json per_tau = json::array();
    for (std::size_t i = 0; i < d.tau.size(); ++i) {
      const double nm = particle_number(msa_at[i], m, sys);
      max_abs = std::max(max_abs, std::abs(nd[i].n - nm));
      if (d.tau[i] < window.first || d.tau[i] > window.second || nm <= 0.0) continue;
      const double rel = std::abs(nd[i].n - nm) / nm;
      max_rel = std::max(max_rel, rel);
      ++used;
      per_tau.push_back({d.tau[i], nd[i].n, nm, rel});
    }
    const bool ok = used == 0 ? max_abs <= 1e-12 : max_rel <= config.compare.n_rel;
    pass = pass && ok;
    modes.push_back({{"mode", mode_json(m)},
                     {"max_rel_error", max_rel},
                     {"samples", used},
                     {"pass", ok},
                     {"per_tau", per_tau}});
  }
  report["modes"] = modes;

  const ModeIndex fm = fit_mode(config, sys.modes());
  std::optional<GrowthFit> fit;
  if (config.cavity.epsilon > 0.0 && e.amplifying) {
    fit = try_fit(d.tau, values(d.numbers.at(fm)), window, fit_why);
  } else {
    fit_why = config.cavity.epsilon > 0.0 ? "MSA resonance is non-amplifying" : "epsilon = 0";
  }
  report["fit_mode"] = mode_json(fm);
  report["fit"] = fit_json(fit, fit_why);
  if (fit) {
    const double rel = std::abs(fit->lambda_fit - e.rate) / e.rate;
    const bool ok = rel <= config.compare.lambda_rel;
    report["lambda_rel_error"] = rel;
    report["lambda_pass"] = ok;
    pass = pass && ok;
  }
  report["pass"] = pass;
  write_json(out_path(config, "compare_report.json"), report);

  for (const auto& m : modes) {
    out << "N" << m["mode"].dump() << ": max relative error " << m["max_rel_error"].get<double>()
        << (m["pass"].get<bool>() ? " ok" : " FAIL") << '\n';
  }
  if (fit) {
    out << "lambda_fit = " << format_double(fit->lambda_fit) << " vs lambda_msa = "
        << format_double(e.rate) << '\n';
  }
  out << (pass ? "PASS" : "FAIL") << '\n';
  return pass ? kExitOk : kExitToleranceBreach;
}

int cmd_sweep(const RunConfig& config, std::ostream& out) {
  const SweepRange& r = config.sweep;
  if (r.steps < 1) throw std::invalid_argument("sweep needs steps >= 1");
  if (!(r.omega_min > 0.0) || !(r.omega_max >= r.omega_min)) {
    throw std::invalid_argument("sweep needs 0 < omega_min <= omega_max");
  }
  if (r.steps > 1 && r.omega_max == r.omega_min) {
    throw std::invalid_argument("sweep with several steps needs omega_min < omega_max");
  }
  std::vector<double> grid;
  for (int i = 0; i < r.steps; ++i) {
    grid.push_back(r.steps == 1 ? r.omega_min
                                : r.omega_min + (r.omega_max - r.omega_min) * i / (r.steps - 1));
  }
  // Pumps are fixed across the grid so the points are comparable.
  const auto system = build_coupled_system(config.n_max, config.n_z, config.cavity.L);
  const auto pumps = select_pumps(config, system, resonant_pairs(config));
  for (double w : grid) {
    RunConfig point = config;
    point.cavity.Omega = w;
    validate(point);
  }

  struct Row {
    double omega;
    std::optional<GrowthFit> fit;
    double n_final;
  };
  std::vector<Row> rows(grid.size());
  parallel_for(grid.size(), worker_threads(), [&](std::size_t i) {
    RunConfig point = config;
    point.cavity.Omega = grid[i];
    point.pumps = pumps;
    point.all_pumps = false;
    DirectOutcome d = run_direct(point, {}, 1);
    std::string why;
    const auto& n = d.numbers.at(config.track);
    std::optional<GrowthFit> fit;
    if (point.cavity.epsilon > 0.0) {
      fit = try_fit(d.tau, values(n), clipped_window(point, d.tau.back()), why);
    }
    rows[i] = {grid[i], fit, n.back().n};
  });

  TableSink sink(config, "sweep", {"Omega", "lambda_fit", "N_" + config.track.label()});
  for (const auto& row : rows) {
    sink.row(std::vector<double>{row.omega, row.fit ? row.fit->lambda_fit : std::nan(""),
                                 row.n_final});
    out << format_double(row.omega) << ' '
        << (row.fit ? format_double(row.fit->lambda_fit) : std::string("nan")) << ' '
        << format_double(row.n_final) << '\n';
  }
  out << "wrote " << sink.path() << '\n';
  return kExitOk;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Particle creation in a cavity swinging about its z-axis"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::string format;
  std::optional<double> omega, epsilon, tf, tauf, dt, tol, L, alpha;
  std::string profile;
  std::optional<int> nmax, nz;
  std::vector<std::string> pumps;
  bool all_pumps = false, difference = false, first_order = false;
  double omega_min = 0.0, omega_max = 0.0;
  int steps = 0;

  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--format", format, "table format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--omega", omega, "drive frequency Omega");
  app.add_option("--epsilon", epsilon, "rotation amplitude epsilon");
  app.add_option("--L", L, "cavity side length");
  app.add_option("--profile", profile, "rotation profile")
      ->check(CLI::IsMember({"sinusoidal", "constant-acceleration"}));
  app.add_option("--alpha", alpha, "angular acceleration (constant-acceleration profile)");
  app.add_option("--nmax", nmax, "per-axis truncation N_max");
  app.add_option("--nz", nz, "n_z block");
  app.add_option("--tf", tf, "final time t");
  app.add_option("--tauf", tauf, "final slow time (msa)");
  app.add_option("--dt", dt, "integration step");
  app.add_option("--tol", tol, "frequency-match tolerance");
  app.add_option("--pump", pumps, "pump mode nx,ny,nz (repeatable)");
  app.add_flag("--all-pumps", all_pumps, "use every basis mode as a pump");
  app.add_flag("--difference", difference, "also report difference-frequency matches");
  app.add_flag("--first-order-frame", first_order,
               "drop the theta_dot^2 frame term and read B in the rotating frame");

  auto* spectrum = app.add_subcommand("spectrum", "mode frequencies up to N_max");
  auto* resonances = app.add_subcommand("resonances", "resonantly coupled mode pairs at Omega");
  auto* msa = app.add_subcommand("msa", "slow-time reduction");
  auto* direct = app.add_subcommand("direct", "real-time integration");
  auto* compare = app.add_subcommand("compare", "slow-time reduction vs real-time integration");
  auto* sweep = app.add_subcommand("sweep", "direct runs over an Omega grid");
  sweep->add_option("--omega-min", omega_min)->required();
  sweep->add_option("--omega-max", omega_max)->required();
  sweep->add_option("--steps", steps)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }

  try {
    RunConfig config = config_path.empty() ? config_from_json(nlohmann::json::object())
                                           : load_config(config_path);
    if (L) {
      config.cavity.L = *L;
      if (!omega) config.cavity.Omega = three_mode_omega(*L);
    }
    if (omega) config.cavity.Omega = *omega;
    if (epsilon) config.cavity.epsilon = *epsilon;
    if (profile == "sinusoidal") config.cavity.profile = ProfileKind::kSinusoidal;
    if (profile == "constant-acceleration") config.cavity.profile = ProfileKind::kConstantAcceleration;
    if (alpha) config.alpha = *alpha;
    if (nz) {
      config.n_z = *nz;
      config.track = ModeIndex(config.track.nx(), config.track.ny(), *nz);
    }
    if (nmax) config.n_max = *nmax;
    if (tf) config.t_f = *tf;
    if (tauf) config.tau_f = *tauf;
    if (dt) config.dt = *dt;
    if (tol) config.tol = *tol;
    if (!out_dir.empty()) config.out_dir = out_dir;
    if (format == "json") config.format = OutputFormat::kJson;
    if (format == "csv") config.format = OutputFormat::kCsv;
    if (!pumps.empty()) {
      config.pumps.clear();
      for (const auto& p : pumps) config.pumps.push_back(parse_mode(p));
    }
    if (all_pumps) config.all_pumps = true;
    if (difference) config.include_difference = true;
    if (first_order) config.first_order_frame = true;
    if (*sweep) config.sweep = {omega_min, omega_max, steps};

    const std::string warning = validate(config);
    err << warn_line(warning);

    if (*spectrum) return cmd_spectrum(config, out);
    if (*resonances) return cmd_resonances(config, out);
    if (*msa) return cmd_msa(config, out);
    if (*direct) return cmd_direct(config, out);
    if (*compare) return cmd_compare(config, out);
    if (*sweep) return cmd_sweep(config, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfigError;
  }
  return kExitConfigError;
}

}  // namespace casimir::cli
