// Experiment runner: turns a parsed config into result tables, plots, and a
// pass/fail summary. Deterministic given (config, seed); rows may be computed
// in parallel but are always assembled in index order.
#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <future>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "specgeo/config.hpp"
#include "specgeo/fit.hpp"
#include "specgeo/growth.hpp"
#include "specgeo/measure.hpp"
#include "specgeo/svg.hpp"
#include "specgeo/table.hpp"
#include "specgeo/uniqueness.hpp"

namespace specgeo {

inline const char* kToolVersion = "specgeo 1.0.0";

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool less_is_pass = true;  // pass when value <= threshold (else >=)
  bool pass = false;
};

struct ExperimentResult {
  std::vector<ResultTable> tables;
  std::vector<std::pair<std::string, PlotRequest>> plots;  // (file stem, plot)
  std::vector<CheckResult> checks;
  bool pass = true;
};

namespace detail {

inline double threshold(const ExperimentConfig& cfg, const std::string& name,
                        double fallback) {
  auto it = cfg.checks.find(name);
  return it == cfg.checks.end() ? fallback : it->second;
}

inline void add_check(ExperimentResult& res, const std::string& name,
                      double value, double thr, bool less_is_pass = true) {
  CheckResult c;
  c.name = name;
  c.value = value;
  c.threshold = thr;
  c.less_is_pass = less_is_pass;
  c.pass = less_is_pass ? value <= thr : value >= thr;
  res.pass = res.pass && c.pass;
  res.checks.push_back(c);
}

struct FamilyMember {
  std::string id;       // e.g. "k=3", "l=5", "m=0,j=2"
  long long index = 0;  // k, l, or j
  EigenPair pair;
};

inline std::vector<FamilyMember> build_family(const ExperimentConfig& cfg) {
  if (!cfg.has_family) throw ConfigError("experiment requires a \"family\"");
  std::vector<FamilyMember> out;
  switch (cfg.family.kind) {
    case FamilySpec::Kind::Torus: {
      if (cfg.surface.kind() != ModelSurface::Kind::FlatTorus)
        throw ConfigError("torus family requires a torus surface");
      for (int k = cfg.family.k_min; k <= cfg.family.k_max; ++k)
        out.push_back({"k=" + std::to_string(k), k,
                       torus_eigenpair(cfg.surface.periods(), {k, cfg.family.k2},
                                       cfg.family.phase)});
      break;
    }
    case FamilySpec::Kind::Zonal: {
      if (cfg.surface.kind() != ModelSurface::Kind::Sphere)
        throw ConfigError("zonal family requires a sphere surface");
      for (int l = cfg.family.l_min; l <= cfg.family.l_max; ++l)
        out.push_back({"l=" + std::to_string(l), l,
                       sphere_zonal_eigenpair(cfg.surface.radius(), l)});
      break;
    }
    case FamilySpec::Kind::Revolution: {
      if (cfg.surface.kind() != ModelSurface::Kind::Revolution)
        throw ConfigError("revolution family requires a revolution surface");
      SturmLiouvilleSpec spec{cfg.surface, cfg.family.m, cfg.family.grid_size};
      for (int j = cfg.family.j_min; j <= cfg.family.j_max; ++j)
        out.push_back({"m=" + std::to_string(cfg.family.m) +
                           ",j=" + std::to_string(j),
                       j, revolution_eigenpair(spec, j)});
      break;
    }
  }
  return out;
}

// Deterministic parallel map: results land in index order.
template <typename Fn>
inline void parallel_rows(int n, int jobs, Fn&& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::atomic<int> next{0};
  for (int t = 0; t < std::min(jobs, n); ++t)
    pool.emplace_back([&]() {
      for (int i = next++; i < n; i = next++) fn(i);
    });
  for (auto& th : pool) th.join();
}

// Measure grids must resolve the valley of |grad u| around critical curves,
// whose width shrinks like 1/lambda; scale the configured base grid with
// sqrt(lambda).
inline int scaled_grid(int base, double lambda) {
  return base * std::max(1, static_cast<int>(std::ceil(std::sqrt(lambda) / 3.0)));
}

// ---------------------------------------------------------------- spectrum

inline ExperimentResult run_spectrum(const ExperimentConfig& cfg, int jobs) {
  auto family = build_family(cfg);
  ExperimentResult res;
  ResultTable t;
  t.name = "spectrum";
  t.columns = {"id", "lambda", "residual", "tolerance"};
  std::vector<std::vector<Cell>> rows(family.size());
  parallel_rows(static_cast<int>(family.size()), jobs, [&](int i) {
    const auto& m = family[i];
    double tol = m.pair.provenance.family == Provenance::Family::Revolution
                     ? 1e-4 * m.pair.lambda
                     : 1e-6;
    double r = eigen_residual(m.pair, cfg.surface, cfg.order);
    rows[i] = {m.id, m.pair.lambda, r, tol};
  });
  double worst_margin = 0.0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    t.add_row(rows[i]);
    worst_margin = std::max(
        worst_margin, std::get<double>(rows[i][2]) / std::get<double>(rows[i][3]));
  }
  res.tables.push_back(std::move(t));
  add_check(res, "max_residual_over_tolerance", worst_margin,
            threshold(cfg, "max_residual_over_tolerance", 1.0));
  return res;
}

// ---------------------------------------------------------------- doubling

inline ExperimentResult run_doubling(const ExperimentConfig& cfg, int jobs) {
  auto family = build_family(cfg);
  std::vector<double> radii =
      cfg.radii.empty() ? std::vector<double>{0.05, 0.1, 0.2, 0.4} : cfg.radii;
  auto centers = low_discrepancy_centers(cfg.surface, cfg.centers, cfg.seed);
  bool do_l2 = cfg.norm != "sup";
  bool do_sup = cfg.norm != "l2";
  ExperimentResult res;
  ResultTable t;
  t.name = "doubling";
  t.columns = {"id", "lambda", "sqrt_lambda", "max_index_l2", "max_index_sup"};
  std::vector<std::vector<Cell>> rows(family.size());
  parallel_rows(static_cast<int>(family.size()), jobs, [&](int i) {
    const auto& m = family[i];
    double l2 = 0.0, sup = 0.0;
    if (do_l2)
      l2 = doubling_sweep(m.pair, cfg.surface, centers, radii, NormKind::L2,
                          cfg.order)
               .max_index;
    if (do_sup)
      sup = doubling_sweep(m.pair, cfg.surface, centers, radii,
                           NormKind::SupNorm, cfg.order)
                .max_index;
    rows[i] = {m.id, m.pair.lambda, std::sqrt(m.pair.lambda), l2, sup};
  });
  PlotRequest plot;
  plot.title = "max doubling index vs sqrt(lambda)";
  plot.x_label = "sqrt(lambda)";
  plot.y_label = "max doubling index";
  double c1 = threshold(cfg, "c1", 0.2);
  double c2 = threshold(cfg, "c2", 2.0);
  long long violations = 0;
  for (auto& row : rows) {
    auto& t2 = row;
    double sl = std::get<double>(t2[2]);
    double worst = std::max(std::get<double>(t2[3]), std::get<double>(t2[4]));
    if (worst > c1 * sl + c2) ++violations;
    plot.points.emplace_back(sl, worst);
    t.add_row(row);
  }
  res.tables.push_back(std::move(t));
  res.plots.emplace_back("doubling_vs_sqrt_lambda", std::move(plot));
  add_check(res, "violations_of_c1_sqrt_lambda_plus_c2",
            static_cast<double>(violations), 0.0);
  return res;
}

// ------------------------------------------------------------- three-sphere

inline ExperimentResult run_three_sphere(const ExperimentConfig& cfg, int jobs) {
  auto family = build_family(cfg);
  WeightParams params(cfg.epsilon, cfg.t0);
  std::vector<double> radii =
      cfg.radii.empty() ? std::vector<double>{0.05, 0.1, 0.2, 0.4} : cfg.radii;
  auto centers = low_discrepancy_centers(cfg.surface, cfg.centers, cfg.seed);
  ExperimentResult res;
  ResultTable t;
  t.name = "three_sphere";
  t.columns = {"id", "lambda", "R", "max_required_c", "max_required_c_swapped",
               "skipped_centers"};
  struct Row {
    std::vector<Cell> cells;
  };
  std::vector<std::vector<std::vector<Cell>>> rows(family.size());
  parallel_rows(static_cast<int>(family.size()), jobs, [&](int i) {
    const auto& m = family[i];
    for (double R : radii) {
      double worst = -1e300, worst_sw = -1e300;
      long long skipped = 0;
      for (const Point& c : centers) {
        try {
          auto rep = three_sphere_check(m.pair, cfg.surface, c, R, params,
                                        cfg.order);
          worst = std::max(worst, rep.required_c);
          worst_sw = std::max(worst_sw, rep.required_c_swapped);
        } catch (const std::exception&) {
          ++skipped;  // numerically trivial norm at this center; recorded
        }
      }
      rows[i].push_back(
          {m.id, m.pair.lambda, R, worst, worst_sw, skipped});
    }
  });
  double cmax = -1e300;
  for (auto& group : rows)
    for (auto& row : group) {
      cmax = std::max(cmax, std::max(std::get<double>(row[3]),
                                     std::get<double>(row[4])));
      t.add_row(row);
    }
  res.tables.push_back(std::move(t));
  add_check(res, "max_required_c_both_orientations", cmax,
            threshold(cfg, "c_max", 0.5));
  return res;
}

// ---------------------------------------------------------------- carleman

inline ExperimentResult run_carleman(const ExperimentConfig& cfg, int jobs) {
  (void)jobs;  // the node-table cache dominates; single-threaded is fine
  if (cfg.surface.kind() != ModelSurface::Kind::FlatTorus)
    throw ConfigError("carleman experiment requires a torus surface");
  WeightParams params(cfg.epsilon, cfg.t0);
  ExperimentResult res;

  // Admissibility of the weight on a grid reaching deep into t -> -inf.
  std::vector<double> tgrid;
  for (int i = 0; i < 400; ++i)
    tgrid.push_back(-30.0 + (params.T0 + 30.0) * i / 399.0);
  auto adm = check_weight_admissibility(params, tgrid);
  add_check(res, "weight_admissible", adm.ok() ? 1.0 : 0.0, 1.0, false);

  std::vector<CarlemanPotential> pots;
  if (cfg.potentials.empty())
    pots = {{1.0, false}, {25.0, false}, {100.0, false}, {25.0, true}};
  else
    for (auto [lam, pert] : cfg.potentials) pots.push_back({lam, pert});
  std::vector<double> taus;
  for (const auto& W : pots) {
    double tmin = tau_min_for(W);
    for (int i = 0; i < cfg.tau_steps; ++i)
      taus.push_back(tmin * std::pow(cfg.tau_span,
                                     static_cast<double>(i) /
                                         std::max(1, cfg.tau_steps - 1)));
  }
  std::sort(taus.begin(), taus.end());

  Point chart_center{0.5 * cfg.surface.periods()[0],
                     0.5 * cfg.surface.periods()[1]};
  double outer = 0.9 * params.max_radius();
  ResultTable t;
  t.name = "carleman";
  t.columns = {"variant", "c_star",      "argmax_sample", "argmax_tau",
               "c_star_refined", "rel_change", "failures"};
  auto run_variant = [&](const std::string& name, const Region& support,
                         bool include_delta) {
    std::vector<TestFunction> samples;
    for (int s = 0; s < cfg.samples; ++s)
      samples.emplace_back(cfg.seed + s, support, s % 4, cfg.radial_degree);
    auto cal = calibrate_carleman_constant(samples, pots, taus, params,
                                           cfg.surface, cfg.order, include_delta);
    auto cal2 = calibrate_carleman_constant(samples, pots, taus, params,
                                            cfg.surface, 2 * cfg.order,
                                            include_delta);
    double rel = std::abs(cal2.c_star - cal.c_star) / cal.c_star;
    t.add_row({name, cal.c_star, static_cast<long long>(cal.argmax_sample),
               cal.argmax_tau, cal2.c_star, rel,
               static_cast<long long>(cal.failures.size())});
    add_check(res, "c_star_" + name, cal.c_star,
              threshold(cfg, "c_star_max", 1.0));
    add_check(res, "c_star_stability_" + name, rel,
              threshold(cfg, "stability_tol", 0.05));
  };
  if (cfg.variant != "annulus")
    run_variant("ball", Region::ball(chart_center, outer), false);
  if (cfg.variant != "ball")
    run_variant("annulus",
                Region::annulus(chart_center, cfg.inner_radius, outer), true);
  res.tables.push_back(std::move(t));
  return res;
}

// ------------------------------------------------------- measure experiments

inline ExperimentResult run_critical_measure(const ExperimentConfig& cfg,
                                             int jobs) {
  auto family = build_family(cfg);
  ExperimentResult res;
  ResultTable t;
  t.name = "critical_measure";
  std::string idcol = cfg.family.kind == FamilySpec::Kind::Torus   ? "k"
                      : cfg.family.kind == FamilySpec::Kind::Zonal ? "l"
                                                                   : "j";
  t.columns = {idcol, "lambda", "H1_estimate", "verdict"};
  std::vector<std::vector<Cell>> rows(family.size());
  parallel_rows(static_cast<int>(family.size()), jobs, [&](int i) {
    const auto& m = family[i];
    MeasureEstimate est = critical_measure(
        m.pair, cfg.surface, scaled_grid(cfg.grid_n, m.pair.lambda), cfg.levels);
    std::string verdict = est.verdict == SetDimension::Curve    ? "Curve"
                          : est.verdict == SetDimension::Points ? "Points"
                                                                : "Unknown";
    rows[i] = {m.index, m.pair.lambda, est.extrapolated, verdict};
  });
  std::vector<std::pair<double, double>> samples;
  for (auto& row : rows) {
    if (std::get<std::string>(row[3]) == "Curve" &&
        std::get<double>(row[2]) > 0.0)
      samples.emplace_back(std::get<double>(row[1]), std::get<double>(row[2]));
    t.add_row(row);
  }
  res.tables.push_back(std::move(t));
  if (samples.size() >= 3) {
    PowerLawFit fit = scaling_fit(samples);
    PlotRequest plot;
    plot.title = "critical-set measure vs lambda";
    plot.x_label = "lambda";
    plot.y_label = "H1 estimate";
    plot.log_log = true;
    plot.points = samples;
    plot.has_fit = true;
    // write_svg_plot works in log10; convert the natural-log fit
    plot.fit_slope = fit.slope;
    plot.fit_intercept = fit.intercept / std::log(10.0);
    res.plots.emplace_back("critical_measure_scaling", std::move(plot));
    add_check(res, "fit_slope_deviation", std::abs(fit.slope - 0.5),
              threshold(cfg, "slope_tol", 0.02));
    add_check(res, "fit_r_squared", fit.r_squared,
              threshold(cfg, "r2_min", 0.999), false);
  }
  return res;
}

inline ExperimentResult run_nodal_measure(const ExperimentConfig& cfg, int jobs) {
  auto family = build_family(cfg);
  ExperimentResult res;
  ResultTable t;
  t.name = "nodal_measure";
  t.columns = {"id", "lambda", "H1"};
  std::vector<std::vector<Cell>> rows(family.size());
  parallel_rows(static_cast<int>(family.size()), jobs, [&](int i) {
    const auto& m = family[i];
    double h1 = nodal_measure(m.pair, cfg.surface,
                              scaled_grid(cfg.grid_n, m.pair.lambda));
    rows[i] = {m.id, m.pair.lambda, h1};
  });
  std::vector<std::pair<double, double>> samples;
  for (auto& row : rows) {
    samples.emplace_back(std::get<double>(row[1]), std::get<double>(row[2]));
    t.add_row(row);
  }
  res.tables.push_back(std::move(t));
  if (samples.size() >= 3) {
    PowerLawFit fit = scaling_fit(samples);
    PlotRequest plot;
    plot.title = "nodal measure vs lambda";
    plot.x_label = "lambda";
    plot.y_label = "H1";
    plot.log_log = true;
    plot.points = samples;
    plot.has_fit = true;
    plot.fit_slope = fit.slope;
    plot.fit_intercept = fit.intercept / std::log(10.0);
    res.plots.emplace_back("nodal_measure_scaling", std::move(plot));
    add_check(res, "fit_slope_deviation", std::abs(fit.slope - 0.5),
              threshold(cfg, "slope_tol", 0.02));
  }
  return res;
}

// ------------------------------------------------------------------ growth

inline ExperimentResult run_growth(const ExperimentConfig& cfg, int jobs) {
  auto family = build_family(cfg);
  ExperimentResult res;
  ResultTable t;
  t.name = "growth";
  t.columns = {"id",           "lambda",        "sup_complex",
               "sup_real_half", "alpha_growth", "alpha_over_sqrt_lambda",
               "taylor_min_c"};
  std::vector<std::vector<Cell>> rows(family.size());
  parallel_rows(static_cast<int>(family.size()), jobs, [&](int i) {
    const auto& m = family[i];
    GrowthReport g = growth_exponent(m.pair, cfg.surface, cfg.center,
                                     cfg.complex_grid_n, cfg.order);
    TaylorReport tay = taylor_derivative_check(m.pair, cfg.surface, cfg.center,
                                               cfg.max_order, cfg.c1, cfg.order);
    rows[i] = {m.id,
               m.pair.lambda,
               g.sup_complex,
               g.sup_real_half,
               g.alpha_growth,
               g.alpha_growth / std::sqrt(m.pair.lambda),
               tay.minimal_c};
  });
  double worst_alpha = 0.0, worst_taylor = 0.0;
  PlotRequest plot;
  plot.title = "growth exponent vs sqrt(lambda)";
  plot.x_label = "sqrt(lambda)";
  plot.y_label = "alpha_growth";
  for (auto& row : rows) {
    worst_alpha = std::max(worst_alpha, std::get<double>(row[5]));
    worst_taylor = std::max(worst_taylor, std::get<double>(row[6]));
    plot.points.emplace_back(std::sqrt(std::get<double>(row[1])),
                             std::get<double>(row[4]));
    t.add_row(row);
  }
  res.tables.push_back(std::move(t));
  res.plots.emplace_back("growth_vs_sqrt_lambda", std::move(plot));
  add_check(res, "max_alpha_over_sqrt_lambda", worst_alpha,
            threshold(cfg, "alpha_max", 2.5));
  add_check(res, "max_taylor_min_c", worst_taylor,
            threshold(cfg, "taylor_c_max", 1.5));
  return res;
}

inline ExperimentResult run_df_check(const ExperimentConfig& cfg, int jobs) {
  auto family = build_family(cfg);
  (void)jobs;
  std::vector<EigenPair> pairs;
  for (auto& m : family) pairs.push_back(m.pair);
  DfRelationReport rep = df_relation_check(pairs, cfg.surface, cfg.center,
                                           cfg.grid_n, cfg.complex_grid_n);
  ExperimentResult res;
  ResultTable t;
  t.name = "df_check";
  t.columns = {"id", "lambda", "alpha_growth", "measure", "ratio"};
  for (std::size_t i = 0; i < family.size(); ++i) {
    const auto& e = rep.entries[i];
    t.add_row({family[i].id, e.lambda, e.alpha_growth, e.measure, e.ratio});
  }
  res.tables.push_back(std::move(t));
  add_check(res, "max_measure_over_alpha", rep.max_ratio,
            threshold(cfg, "ratio_max", 0.5));
  return res;
}

// -------------------------------------------------------------------- fit

inline ExperimentResult run_fit(const ExperimentConfig& cfg, int jobs) {
  (void)jobs;
  PowerLawFit fit = scaling_fit(cfg.fit_samples);
  ExperimentResult res;
  ResultTable t;
  t.name = "fit";
  t.columns = {"slope", "intercept", "prefactor", "r_squared"};
  t.add_row({fit.slope, fit.intercept, fit.prefactor(), fit.r_squared});
  res.tables.push_back(std::move(t));
  PlotRequest plot;
  plot.title = "power-law fit";
  plot.x_label = "lambda";
  plot.y_label = "measure";
  plot.log_log = true;
  plot.points = cfg.fit_samples;
  plot.has_fit = true;
  plot.fit_slope = fit.slope;
  plot.fit_intercept = fit.intercept / std::log(10.0);
  res.plots.emplace_back("fit", std::move(plot));
  add_check(res, "fit_slope_deviation", std::abs(fit.slope - 0.5),
            threshold(cfg, "slope_tol", 0.02));
  return res;
}

}  // namespace detail

inline ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                       int jobs = 1) {
  using Runner =
      std::function<ExperimentResult(const ExperimentConfig&, int)>;
  static const std::map<std::string, Runner> dispatch = {
      {"spectrum", detail::run_spectrum},
      {"doubling", detail::run_doubling},
      {"three-sphere", detail::run_three_sphere},
      {"carleman", detail::run_carleman},
      {"critical-measure", detail::run_critical_measure},
      {"nodal-measure", detail::run_nodal_measure},
      {"growth", detail::run_growth},
      {"df-check", detail::run_df_check},
      {"fit", detail::run_fit},
  };
  auto it = dispatch.find(cfg.experiment);
  if (it == dispatch.end())
    throw ConfigError("unknown experiment \"" + cfg.experiment + "\"");
  return it->second(cfg, jobs);
}

// Writes <out>/<experiment>.csv (extra tables get suffixed names),
// <out>/summary.json and one SVG per plot.
inline void emit_report(const ExperimentConfig& cfg, ExperimentResult& result,
                        const std::string& out_dir, double wall_time_s) {
  if (result.tables.empty())
    throw std::invalid_argument("emit_report: no tables");
  std::string hash = fnv1a_hex(cfg.canonical);
  auto open_out = [&](const std::string& name) {
    std::ofstream os(out_dir + "/" + name, std::ios::binary);
    if (!os)
      throw std::runtime_error("cannot write " + out_dir + "/" + name);
    return os;
  };
  for (std::size_t i = 0; i < result.tables.size(); ++i) {
    auto& table = result.tables[i];
    table.config_hash = hash;
    table.tool_version = kToolVersion;
    table.wall_time_s = wall_time_s;
    std::string name =
        i == 0 ? cfg.experiment + ".csv" : cfg.experiment + "_" + table.name + ".csv";
    auto os = open_out(name);
    write_csv(table, os);
  }
  for (auto& [stem, plot] : result.plots) {
    auto os = open_out(stem + ".svg");
    write_svg_plot(plot, os);
  }
  json summary;
  summary["experiment"] = cfg.experiment;
  summary["config_hash"] = hash;
  summary["tool_version"] = kToolVersion;
  summary["wall_time_s"] = wall_time_s;
  summary["pass"] = result.pass;
  json checks = json::object();
  for (const auto& c : result.checks) {
    checks[c.name] = {{"value", c.value},
                      {"threshold", c.threshold},
                      {"comparison", c.less_is_pass ? "<=" : ">="},
                      {"pass", c.pass}};
  }
  summary["checks"] = checks;
  auto os = open_out("summary.json");
  os << summary.dump(2) << "\n";
}

}  // namespace specgeo
