// Experiment configuration: strict JSON parsing (unknown keys rejected by
// name, no silent defaults for physics parameters).
#pragma once

#include <array>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "specgeo/carleman.hpp"
#include "specgeo/surface.hpp"

namespace specgeo {

using json = nlohmann::json;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FamilySpec {
  enum class Kind { Torus, Zonal, Revolution } kind = Kind::Torus;
  int k_min = 1, k_max = 1;  // torus k = (k, k2)
  int k2 = 0;
  double phase = 0.0;
  int l_min = 1, l_max = 1;  // zonal
  int m = 0, j_min = 1, j_max = 1, grid_size = 512;  // revolution
};

struct ExperimentConfig {
  std::string experiment;
  ModelSurface surface = ModelSurface::flat_torus(kTwoPi, kTwoPi);
  FamilySpec family;
  bool has_family = false;

  int grid_n = 256;
  int order = 32;
  unsigned seed = 1;

  // three-sphere / carleman weight
  double epsilon = 0.5;
  double t0 = -0.5;

  // doubling / three-sphere / lower-bound sweeps
  int centers = 50;
  std::vector<double> radii;
  std::string norm = "both";  // "l2" | "sup" | "both"

  // carleman
  int samples = 50;
  int radial_degree = 3;
  std::vector<std::pair<double, bool>> potentials;  // (lambda, perturbed)
  int tau_steps = 20;
  double tau_span = 10.0;
  std::string variant = "both";  // "ball" | "annulus" | "both"
  double inner_radius = 0.05;

  // measure experiments
  std::vector<double> levels;

  // growth / df-check
  int complex_grid_n = 256;
  Point center{0.0, 0.0};
  int max_order = 10;
  double c1 = 1.0;

  // fit
  std::vector<std::pair<double, double>> fit_samples;

  // per-experiment pass/fail thresholds (named, validated per experiment)
  std::map<std::string, double> checks;

  std::string canonical;  // serialized config, hashed into outputs
};

namespace detail {

inline void reject_unknown(const json& obj, const std::set<std::string>& allowed,
                           const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key \"" + it.key() + "\" in " + where);
}

inline const json& require(const json& obj, const std::string& key,
                           const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw ConfigError("missing key \"" + key + "\" in " + where);
  return *it;
}

inline ModelSurface parse_surface(const json& s) {
  if (!s.is_object()) throw ConfigError("\"surface\" must be an object");
  std::string kind = require(s, "kind", "surface").get<std::string>();
  if (kind == "torus") {
    reject_unknown(s, {"kind", "periods"}, "surface");
    std::array<double, 2> p{kTwoPi, kTwoPi};
    if (s.contains("periods")) {
      auto v = s["periods"].get<std::vector<double>>();
      if (v.size() != 2) throw ConfigError("surface.periods needs 2 entries");
      p = {v[0], v[1]};
    }
    return ModelSurface::flat_torus(p[0], p[1]);
  }
  if (kind == "sphere") {
    reject_unknown(s, {"kind", "radius"}, "surface");
    double r = s.contains("radius") ? s["radius"].get<double>() : 1.0;
    return ModelSurface::sphere(r);
  }
  if (kind == "revolution") {
    reject_unknown(s, {"kind", "profile", "radius"}, "surface");
    std::string prof = require(s, "profile", "surface").get<std::string>();
    if (prof != "sphere")
      throw ConfigError("unknown surface.profile \"" + prof + "\"");
    double r = s.contains("radius") ? s["radius"].get<double>() : 1.0;
    return ModelSurface::revolution(sphere_profile(r));
  }
  throw ConfigError("unknown surface.kind \"" + kind + "\"");
}

inline FamilySpec parse_family(const json& f) {
  if (!f.is_object()) throw ConfigError("\"family\" must be an object");
  std::string kind = require(f, "kind", "family").get<std::string>();
  FamilySpec spec;
  if (kind == "torus") {
    reject_unknown(f, {"kind", "k_min", "k_max", "k2", "phase"}, "family");
    spec.kind = FamilySpec::Kind::Torus;
    spec.k_min = require(f, "k_min", "family").get<int>();
    spec.k_max = require(f, "k_max", "family").get<int>();
    if (f.contains("k2")) spec.k2 = f["k2"].get<int>();
    if (f.contains("phase")) spec.phase = f["phase"].get<double>();
  } else if (kind == "zonal") {
    reject_unknown(f, {"kind", "l_min", "l_max"}, "family");
    spec.kind = FamilySpec::Kind::Zonal;
    spec.l_min = require(f, "l_min", "family").get<int>();
    spec.l_max = require(f, "l_max", "family").get<int>();
  } else if (kind == "revolution") {
    reject_unknown(f, {"kind", "m", "j_min", "j_max", "grid_size"}, "family");
    spec.kind = FamilySpec::Kind::Revolution;
    spec.m = require(f, "m", "family").get<int>();
    spec.j_min = require(f, "j_min", "family").get<int>();
    spec.j_max = require(f, "j_max", "family").get<int>();
    if (f.contains("grid_size")) spec.grid_size = f["grid_size"].get<int>();
  } else {
    throw ConfigError("unknown family.kind \"" + kind + "\"");
  }
  if (spec.k_min > spec.k_max || spec.l_min > spec.l_max || spec.j_min > spec.j_max)
    throw ConfigError("family: empty index range");
  return spec;
}

// Keys accepted per experiment, beyond the common set.
inline const std::map<std::string, std::set<std::string>>& experiment_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"spectrum", {}},
      {"doubling", {"centers", "radii", "norm"}},
      {"three-sphere", {"centers", "radii", "epsilon", "t0"}},
      {"carleman",
       {"epsilon", "t0", "samples", "radial_degree", "potentials", "tau_steps",
        "tau_span", "variant", "inner_radius"}},
      {"critical-measure", {"levels"}},
      {"nodal-measure", {}},
      {"growth", {"complex_grid_n", "center", "max_order", "c1"}},
      {"df-check", {"complex_grid_n", "center"}},
      {"fit", {"samples"}},
  };
  return keys;
}

}  // namespace detail

inline ExperimentConfig parse_config(const json& j) {
  if (!j.is_object()) throw ConfigError("config root must be an object");
  ExperimentConfig cfg;
  cfg.experiment =
      detail::require(j, "experiment", "config").get<std::string>();
  auto it = detail::experiment_keys().find(cfg.experiment);
  if (it == detail::experiment_keys().end())
    throw ConfigError("unknown experiment \"" + cfg.experiment + "\"");

  std::set<std::string> allowed = {"experiment", "surface", "family",
                                   "grid_n",     "order",   "seed",
                                   "checks"};
  allowed.insert(it->second.begin(), it->second.end());
  detail::reject_unknown(j, allowed, "config");

  if (j.contains("surface")) cfg.surface = detail::parse_surface(j["surface"]);
  if (j.contains("family")) {
    cfg.family = detail::parse_family(j["family"]);
    cfg.has_family = true;
  }
  if (j.contains("grid_n")) cfg.grid_n = j["grid_n"].get<int>();
  if (j.contains("order")) cfg.order = j["order"].get<int>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<unsigned>();
  if (cfg.grid_n < 8 || cfg.order < 4)
    throw ConfigError("grid_n/order out of range");

  if (j.contains("epsilon")) cfg.epsilon = j["epsilon"].get<double>();
  if (j.contains("t0")) cfg.t0 = j["t0"].get<double>();
  if (j.contains("centers")) cfg.centers = j["centers"].get<int>();
  if (j.contains("radii")) cfg.radii = j["radii"].get<std::vector<double>>();
  if (j.contains("norm")) {
    cfg.norm = j["norm"].get<std::string>();
    if (cfg.norm != "l2" && cfg.norm != "sup" && cfg.norm != "both")
      throw ConfigError("norm must be \"l2\", \"sup\" or \"both\"");
  }
  if (j.contains("samples") && cfg.experiment != "fit")
    cfg.samples = j["samples"].get<int>();
  if (j.contains("radial_degree"))
    cfg.radial_degree = j["radial_degree"].get<int>();
  if (j.contains("potentials")) {
    for (const auto& p : j["potentials"]) {
      detail::reject_unknown(p, {"lambda", "perturbed"}, "potentials entry");
      double lam = detail::require(p, "lambda", "potentials entry").get<double>();
      bool pert = p.contains("perturbed") && p["perturbed"].get<bool>();
      cfg.potentials.emplace_back(lam, pert);
    }
  }
  if (j.contains("tau_steps")) cfg.tau_steps = j["tau_steps"].get<int>();
  if (j.contains("tau_span")) cfg.tau_span = j["tau_span"].get<double>();
  if (j.contains("variant")) {
    cfg.variant = j["variant"].get<std::string>();
    if (cfg.variant != "ball" && cfg.variant != "annulus" && cfg.variant != "both")
      throw ConfigError("variant must be \"ball\", \"annulus\" or \"both\"");
  }
  if (j.contains("inner_radius")) cfg.inner_radius = j["inner_radius"].get<double>();
  if (j.contains("levels")) cfg.levels = j["levels"].get<std::vector<double>>();
  if (j.contains("complex_grid_n"))
    cfg.complex_grid_n = j["complex_grid_n"].get<int>();
  if (j.contains("center")) {
    auto v = j["center"].get<std::vector<double>>();
    if (v.size() != 2) throw ConfigError("center needs 2 entries");
    cfg.center = {v[0], v[1]};
  }
  if (j.contains("max_order")) cfg.max_order = j["max_order"].get<int>();
  if (j.contains("c1")) cfg.c1 = j["c1"].get<double>();
  if (cfg.experiment == "fit") {
    for (const auto& s : detail::require(j, "samples", "config")) {
      auto v = s.get<std::vector<double>>();
      if (v.size() != 2) throw ConfigError("fit sample needs [lambda, measure]");
      cfg.fit_samples.emplace_back(v[0], v[1]);
    }
  }
  if (j.contains("checks")) {
    if (!j["checks"].is_object()) throw ConfigError("\"checks\" must be an object");
    for (auto cit = j["checks"].begin(); cit != j["checks"].end(); ++cit)
      cfg.checks[cit.key()] = cit.value().get<double>();
  }
  cfg.canonical = j.dump();
  return cfg;
}

inline ExperimentConfig parse_config_string(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(j);
}

}  // namespace specgeo
