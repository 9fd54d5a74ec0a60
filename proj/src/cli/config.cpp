#include "casimir/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

namespace casimir::cli {

using nlohmann::json;

namespace {

ModeIndex mode_from_json(const json& j) {
  if (j.is_string()) return parse_mode(j.get<std::string>());
  if (!j.is_array() || j.size() != 3) {
    throw std::invalid_argument("mode must be [nx, ny, nz] or \"nx,ny,nz\"");
  }
  return ModeIndex(j.at(0).get<int>(), j.at(1).get<int>(), j.at(2).get<int>());
}

json mode_to_json(const ModeIndex& m) { return json::array({m.nx(), m.ny(), m.nz()}); }

ProfileKind profile_from_string(const std::string& s) {
  if (s == "sinusoidal") return ProfileKind::kSinusoidal;
  if (s == "constant-acceleration") return ProfileKind::kConstantAcceleration;
  throw std::invalid_argument("profile must be sinusoidal or constant-acceleration, got " + s);
}

std::string profile_to_string(ProfileKind k) {
  return k == ProfileKind::kSinusoidal ? "sinusoidal" : "constant-acceleration";
}

}  // namespace

ModeIndex parse_mode(const std::string& text) {
  std::string s;
  for (char ch : text) {
    if (ch == '(' || ch == ')' || ch == ' ') continue;
    s.push_back(ch == '_' ? ',' : ch);
  }
  std::istringstream is(s);
  int v[3];
  char sep1 = 0, sep2 = 0;
  if (!(is >> v[0] >> sep1 >> v[1] >> sep2 >> v[2]) || sep1 != ',' || sep2 != ',' ||
      is.peek() != EOF) {
    throw std::invalid_argument("cannot parse mode '" + text + "' (expected nx,ny,nz)");
  }
  return ModeIndex(v[0], v[1], v[2]);
}

RunConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("config must be a JSON object");
  static const std::set<std::string> known = {
      "L",        "epsilon",     "Omega",      "profile",     "alpha",
      "n_max",    "n_z",         "pumps",      "all_pumps",   "t_f",
      "tau_f",    "dt",          "dtau",       "sample_every", "tol",
      "max_index", "include_difference", "first_order_frame", "fit_window",
      "compare",  "sweep",       "track",      "out",         "format"};
  for (const auto& [key, _] : doc.items()) {
    if (!known.count(key)) throw std::invalid_argument("unknown config key '" + key + "'");
  }
  RunConfig c;
  try {
    if (doc.contains("L")) c.cavity.L = doc["L"].get<double>();
    if (doc.contains("Omega")) c.cavity.Omega = doc["Omega"].get<double>();
    else c.cavity.Omega = three_mode_omega(c.cavity.L);
    if (doc.contains("epsilon")) c.cavity.epsilon = doc["epsilon"].get<double>();
    if (doc.contains("profile")) c.cavity.profile = profile_from_string(doc["profile"].get<std::string>());
    if (doc.contains("alpha")) c.alpha = doc["alpha"].get<double>();
    if (doc.contains("n_max")) c.n_max = doc["n_max"].get<int>();
    if (doc.contains("n_z")) c.n_z = doc["n_z"].get<int>();
    if (doc.contains("pumps")) {
      for (const auto& p : doc["pumps"]) c.pumps.push_back(mode_from_json(p));
    }
    if (doc.contains("all_pumps")) c.all_pumps = doc["all_pumps"].get<bool>();
    if (doc.contains("t_f")) c.t_f = doc["t_f"].get<double>();
    if (doc.contains("tau_f")) c.tau_f = doc["tau_f"].get<double>();
    if (doc.contains("dt")) c.dt = doc["dt"].get<double>();
    if (doc.contains("dtau")) c.dtau = doc["dtau"].get<double>();
    if (doc.contains("sample_every")) c.sample_every = doc["sample_every"].get<int>();
    if (doc.contains("tol")) c.tol = doc["tol"].get<double>();
    if (doc.contains("max_index")) c.max_index = doc["max_index"].get<int>();
    if (doc.contains("include_difference")) c.include_difference = doc["include_difference"].get<bool>();
    if (doc.contains("first_order_frame")) c.first_order_frame = doc["first_order_frame"].get<bool>();
    if (doc.contains("fit_window")) {
      const auto& w = doc["fit_window"];
      if (!w.is_array() || w.size() != 2) throw std::invalid_argument("fit_window must be [lo, hi]");
      c.fit_window = {w[0].get<double>(), w[1].get<double>()};
    }
    if (doc.contains("compare")) {
      const auto& cmp = doc["compare"];
      c.compare.n_rel = cmp.value("n_rel_tol", c.compare.n_rel);
      c.compare.lambda_rel = cmp.value("lambda_rel_tol", c.compare.lambda_rel);
    }
    if (doc.contains("sweep")) {
      const auto& sw = doc["sweep"];
      c.sweep.omega_min = sw.at("omega_min").get<double>();
      c.sweep.omega_max = sw.at("omega_max").get<double>();
      c.sweep.steps = sw.at("steps").get<int>();
    }
    if (doc.contains("track")) c.track = mode_from_json(doc["track"]);
    else c.track = ModeIndex(1, 1, c.n_z);
    if (doc.contains("out")) c.out_dir = doc["out"].get<std::string>();
    if (doc.contains("format")) {
      const auto f = doc["format"].get<std::string>();
      if (f == "csv") c.format = OutputFormat::kCsv;
      else if (f == "json") c.format = OutputFormat::kJson;
      else throw std::invalid_argument("format must be csv or json, got " + f);
    }
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config " + path);
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("config " + path + " is not valid JSON: " + e.what());
  }
  return config_from_json(doc);
}

json config_to_json(const RunConfig& c) {
  json j;
  j["L"] = c.cavity.L;
  j["epsilon"] = c.cavity.epsilon;
  j["Omega"] = c.cavity.Omega;
  j["profile"] = profile_to_string(c.cavity.profile);
  if (c.alpha) j["alpha"] = *c.alpha;
  j["n_max"] = c.n_max;
  j["n_z"] = c.n_z;
  j["pumps"] = json::array();
  for (const auto& p : c.pumps) j["pumps"].push_back(mode_to_json(p));
  j["all_pumps"] = c.all_pumps;
  j["t_f"] = c.t_f;
  if (c.tau_f) j["tau_f"] = *c.tau_f;
  j["dt"] = c.dt;
  j["dtau"] = c.dtau;
  j["sample_every"] = c.sample_every;
  j["tol"] = c.tolerance();
  j["max_index"] = c.search_max_index();
  j["include_difference"] = c.include_difference;
  j["first_order_frame"] = c.first_order_frame;
  j["fit_window"] = json::array({c.fit_window.first, c.fit_window.second});
  j["compare"] = {{"n_rel_tol", c.compare.n_rel}, {"lambda_rel_tol", c.compare.lambda_rel}};
  if (c.sweep.steps > 0) {
    j["sweep"] = {{"omega_min", c.sweep.omega_min},
                  {"omega_max", c.sweep.omega_max},
                  {"steps", c.sweep.steps}};
  }
  j["track"] = mode_to_json(c.track);
  return j;
}

std::string validate(const RunConfig& c) {
  const std::string warning = casimir::validate(c.cavity);
  if (c.n_max < 1) throw std::invalid_argument("n_max must be >= 1");
  if (c.n_z < 1) throw std::invalid_argument("n_z must be >= 1");
  if (!(c.t_f >= 0.0)) throw std::invalid_argument("t_f must be >= 0");
  if (c.tau_f && !(*c.tau_f >= 0.0)) throw std::invalid_argument("tau_f must be >= 0");
  if (!(c.dt > 0.0)) throw std::invalid_argument("dt must be > 0");
  if (!(c.dtau > 0.0)) throw std::invalid_argument("dtau must be > 0");
  if (c.sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");
  if (!(c.tolerance() > 0.0)) throw std::invalid_argument("tol must be > 0");
  if (c.search_max_index() < 1) throw std::invalid_argument("max_index must be >= 1");
  if (!(c.fit_window.first < c.fit_window.second)) {
    throw std::invalid_argument("fit_window must satisfy lo < hi");
  }
  if (!(c.compare.n_rel > 0.0) || !(c.compare.lambda_rel > 0.0)) {
    throw std::invalid_argument("compare tolerances must be > 0");
  }
  if (c.alpha && !std::isfinite(*c.alpha)) throw std::invalid_argument("alpha must be finite");
  for (const auto& p : c.pumps) {
    if (p.nz() != c.n_z || p.nx() > c.n_max || p.ny() > c.n_max) {
      throw std::invalid_argument("pump " + to_string(p) + " lies outside the basis (n_max = " +
                                  std::to_string(c.n_max) + ", n_z = " + std::to_string(c.n_z) +
                                  ")");
    }
  }
  if (c.track.nz() != c.n_z || c.track.nx() > c.n_max || c.track.ny() > c.n_max) {
    throw std::invalid_argument("tracked mode " + to_string(c.track) + " lies outside the basis");
  }
  return warning;
}

}  // namespace casimir::cli
