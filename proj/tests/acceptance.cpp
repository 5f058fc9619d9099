// Acceptance harness: one pass/fail line per criterion, nonzero exit on any
// failure. Thresholds mirror the shipped experiment configs.
#include <chrono>
#include <cstdio>
#include <vector>

#include "specgeo/experiments.hpp"
#include "specgeo/legendre.hpp"

using namespace specgeo;

namespace {

int g_failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  }
};

void report(int criterion, bool pass, const char* detail, double seconds) {
  std::printf("%s criterion %2d: %s (%.1f s)\n", pass ? "PASS" : "FAIL",
              criterion, detail, seconds);
  if (!pass) ++g_failures;
}

const std::array<double, 2> kPeriods = {kTwoPi, kTwoPi};

std::vector<EigenPair> torus_family(int k_min, int k_max) {
  std::vector<EigenPair> out;
  for (int k = k_min; k <= k_max; ++k)
    out.push_back(torus_eigenpair(kPeriods, {k, 0}));
  return out;
}

std::vector<EigenPair> zonal_family(int l_min, int l_max) {
  std::vector<EigenPair> out;
  for (int l = l_min; l <= l_max; ++l)
    out.push_back(sphere_zonal_eigenpair(1.0, l));
  return out;
}

// Bisection roots of P_l'(cos t) on (0, pi): the interior critical latitudes
// of the zonal mode.
std::vector<double> critical_latitudes(int l) {
  std::vector<double> out;
  const int N = 20000;
  auto g = [&](double t) { return legendre_dp(l, std::cos(t)); };
  for (int i = 1; i < N; ++i) {
    double a = kPi * i / N, b = kPi * (i + 1) / N;
    if (g(a) == 0.0) {
      out.push_back(a);
      continue;
    }
    if (g(a) * g(b) < 0.0) {
      for (int it = 0; it < 80; ++it) {
        double m = 0.5 * (a + b);
        (g(a) * g(m) <= 0.0 ? b : a) = m;
      }
      out.push_back(0.5 * (a + b));
    }
  }
  return out;
}

// ------------------------------------------------------------- criterion 1
void criterion_1(const ModelSurface& torus) {
  Timer timer;
  bool pass = true;
  char detail[160];
  double worst_rel = 0.0;
  std::vector<std::pair<double, double>> samples;
  for (int k = 2; k <= 10; ++k) {
    auto pair = torus_eigenpair(kPeriods, {k, 0});
    auto est = critical_measure(pair, torus,
                                detail::scaled_grid(256, pair.lambda));
    double truth = 4.0 * kPi * k;
    worst_rel = std::max(worst_rel,
                         std::abs(est.extrapolated - truth) / truth);
    pass = pass && est.verdict == SetDimension::Curve;
    samples.emplace_back(pair.lambda, est.extrapolated);
  }
  PowerLawFit fit = scaling_fit(samples);
  pass = pass && worst_rel <= 0.02 && std::abs(fit.slope - 0.5) <= 0.02 &&
         fit.r_squared >= 0.999 && timer.seconds() <= 120.0;
  std::snprintf(detail, sizeof(detail),
                "torus measure vs 4*pi*k: worst rel %.4f, slope %.4f, r2 %.6f",
                worst_rel, fit.slope, fit.r_squared);
  report(1, pass, detail, timer.seconds());
}

// ------------------------------------------------------------- criterion 2
void criterion_2(const ModelSurface& sphere) {
  Timer timer;
  bool counts_ok = true;
  double worst_rel = 0.0;
  std::vector<double> xs, measured, oracle;
  for (int l = 2; l <= 15; ++l) {
    auto lats = critical_latitudes(l);
    counts_ok = counts_ok && static_cast<int>(lats.size()) == l - 1;
    double truth = 0.0;
    for (double t : lats) truth += kTwoPi * std::sin(t);
    auto pair = sphere_zonal_eigenpair(1.0, l);
    auto est = critical_measure(pair, sphere,
                                detail::scaled_grid(256, pair.lambda));
    worst_rel = std::max(worst_rel,
                         std::abs(est.extrapolated - truth) / truth);
    xs.push_back(std::sqrt(pair.lambda));
    measured.push_back(est.extrapolated);
    oracle.push_back(truth);
  }
  double slope_ratio =
      linear_fit(xs, measured).slope / linear_fit(xs, oracle).slope;
  bool pass = counts_ok && worst_rel <= 0.03 &&
              std::abs(slope_ratio - 1.0) <= 0.05;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "zonal latitude counts %s, worst measure rel %.4f, "
                "linear slope ratio %.4f",
                counts_ok ? "exact" : "WRONG", worst_rel, slope_ratio);
  report(2, pass, detail, timer.seconds());
}

// ------------------------------------------------------------- criterion 3
void criterion_3(const ModelSurface& torus, const ModelSurface& sphere) {
  Timer timer;
  std::vector<std::pair<double, double>> nt, nz;
  for (int k = 1; k <= 10; ++k) {
    auto p = torus_eigenpair(kPeriods, {k, 0});
    nt.emplace_back(p.lambda,
                    nodal_measure(p, torus, detail::scaled_grid(256, p.lambda)));
  }
  for (int l = 2; l <= 15; ++l) {
    auto p = sphere_zonal_eigenpair(1.0, l);
    nz.emplace_back(p.lambda,
                    nodal_measure(p, sphere, detail::scaled_grid(256, p.lambda)));
  }
  double st = scaling_fit(nt).slope, sz = scaling_fit(nz).slope;
  bool pass = std::abs(st - 0.5) <= 0.02 && std::abs(sz - 0.5) <= 0.02;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "nodal scaling slopes: torus %.4f, zonal %.4f", st, sz);
  report(3, pass, detail, timer.seconds());
}

// ------------------------------------------------------------- criterion 4
void criterion_4(const ModelSurface& torus, const ModelSurface& sphere) {
  Timer timer;
  const std::vector<double> radii = {0.05, 0.1, 0.2, 0.4};
  const double c1 = 0.2, c2 = 2.0;
  int violations = 0;
  double worst_margin = 0.0;
  auto sweep_family = [&](const std::vector<EigenPair>& family,
                          const ModelSurface& surface) {
    auto centers = low_discrepancy_centers(surface, 50, 1);
    for (const auto& pair : family) {
      double bound = c1 * std::sqrt(pair.lambda) + c2;
      for (NormKind kind : {NormKind::L2, NormKind::SupNorm}) {
        double idx =
            doubling_sweep(pair, surface, centers, radii, kind, 32).max_index;
        if (idx > bound) ++violations;
        worst_margin = std::max(worst_margin, idx / bound);
      }
    }
  };
  sweep_family(torus_family(1, 10), torus);
  sweep_family(zonal_family(1, 15), sphere);
  bool pass = violations == 0 && timer.seconds() <= 300.0;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "doubling index <= 0.2*sqrt(lambda)+2.0 (L2 and sup): "
                "%d violations, worst index/bound %.3f",
                violations, worst_margin);
  report(4, pass, detail, timer.seconds());
}

// ------------------------------------------------------------- criterion 5
void criterion_5(const ModelSurface& torus, const ModelSurface& sphere) {
  Timer timer;
  WeightParams params(0.5, -0.5);
  const std::vector<double> radii = {0.05, 0.1, 0.2, 0.4};
  // calibrated sweep maximum 0.830 plus a 10% margin
  const double c_max = 0.913;
  int violations = 0;
  double worst = -1e300;
  auto sweep_family = [&](const std::vector<EigenPair>& family,
                          const ModelSurface& surface) {
    auto centers = low_discrepancy_centers(surface, 50, 1);
    for (const auto& pair : family)
      for (double R : radii)
        for (const Point& c : centers) {
          try {
            auto rep = three_sphere_check(pair, surface, c, R, params, 32);
            double v = std::max(rep.required_c, rep.required_c_swapped);
            worst = std::max(worst, v);
            if (v > c_max) ++violations;
          } catch (const std::exception&) {
            // numerically trivial gradient norm at this center; skip
          }
        }
  };
  sweep_family(torus_family(1, 10), torus);
  sweep_family(zonal_family(1, 15), sphere);
  bool pass = violations == 0;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "three-sphere required_c (both orientations) <= %.3f: "
                "%d violations, sweep max %.4f",
                c_max, violations, worst);
  report(5, pass, detail, timer.seconds());
}

// --------------------------------------------------------- criteria 6 and 7
void criterion_6(const ModelSurface& torus) {
  Timer timer;
  WeightParams params(0.5, -0.5);
  std::vector<CarlemanPotential> pots = {
      {1.0, false}, {25.0, false}, {100.0, false}, {25.0, true}};
  std::vector<double> taus;
  for (const auto& W : pots) {
    double tmin = tau_min_for(W);
    for (int i = 0; i < 20; ++i)
      taus.push_back(tmin * std::pow(10.0, i / 19.0));
  }
  std::sort(taus.begin(), taus.end());
  Point center{kPi, kPi};
  double outer = 0.9 * params.max_radius();
  bool pass = true;
  double cb = 0.0, ca = 0.0, sb = 0.0, sa = 0.0;
  {
    std::vector<TestFunction> samples;
    Region support = Region::ball(center, outer);
    for (int s = 0; s < 50; ++s) samples.emplace_back(1 + s, support, s % 4, 3);
    auto cal = calibrate_carleman_constant(samples, pots, taus, params, torus,
                                           32, false);
    auto cal2 = calibrate_carleman_constant(samples, pots, taus, params, torus,
                                            64, false);
    cb = cal.c_star;
    sb = std::abs(cal2.c_star - cal.c_star) / cal.c_star;
    pass = pass && cal.failures.empty() && cb <= 0.65 && sb <= 0.05;
  }
  {
    std::vector<TestFunction> samples;
    Region support = Region::annulus(center, 0.05, outer);
    for (int s = 0; s < 50; ++s) samples.emplace_back(1 + s, support, s % 4, 3);
    auto cal = calibrate_carleman_constant(samples, pots, taus, params, torus,
                                           32, true);
    auto cal2 = calibrate_carleman_constant(samples, pots, taus, params, torus,
                                            64, true);
    ca = cal.c_star;
    sa = std::abs(cal2.c_star - cal.c_star) / cal.c_star;
    pass = pass && cal.failures.empty() && ca <= 0.67 && sa <= 0.05;
  }
  pass = pass && timer.seconds() <= 300.0;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "Carleman C*: ball %.4f (stab %.1e), annulus %.4f (stab %.1e)",
                cb, sb, ca, sa);
  report(6, pass, detail, timer.seconds());
}

void criterion_7() {
  Timer timer;
  WeightParams params(0.5, -0.5);
  std::vector<double> grid;
  for (int i = 0; i < 400; ++i)
    grid.push_back(-60.0 + (params.T0 + 60.0) * i / 399.0);
  auto adm = check_weight_admissibility(params, grid);
  // spot checks of the closed forms f(t) = t - e^{eps t}, phi = -f(ln r)
  auto w = weight_eval_t(params, -4.0);
  bool spots =
      std::abs(w.f - (-4.0 - std::exp(-2.0))) < 1e-15 &&
      std::abs(w.fp - (1.0 - 0.5 * std::exp(-2.0))) < 1e-15 &&
      std::abs(weight_eval_r(params, 0.5).phi -
               (std::log(2.0) + std::sqrt(0.5))) < 1e-15;
  bool pass = adm.ok() && spots;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "weight admissibility on (eps, T0) = (0.5, -0.5): f' in "
                "[%.4f, %.4f], left-end divergence %.2e, spot checks %s",
                adm.fp_min, adm.fp_max, adm.left_end_value,
                spots ? "exact" : "WRONG");
  report(7, pass, detail, timer.seconds());
}

// ------------------------------------------------------------- criterion 8
void criterion_8(const ModelSurface& torus) {
  Timer timer;
  double worst = 0.0;
  auto centers = low_discrepancy_centers(torus, 10, 1);
  for (int k = 1; k <= 10; ++k) {
    auto pair = torus_eigenpair(kPeriods, {k, 0});
    for (double a : {0.25, 0.5})
      for (double R : {0.2, 0.5})
        for (const Point& c : centers)
          worst = std::max(worst,
                           elliptic_gradient_check(pair, torus, c, R, a, 32));
  }
  bool pass = worst <= 1.1;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "elliptic gradient ratio over a in {1/4,1/2}, R in {0.2,0.5}: "
                "max %.4f <= 1.1",
                worst);
  report(8, pass, detail, timer.seconds());
}

// ------------------------------------------------------------- criterion 9
void criterion_9(const ModelSurface& torus, const ModelSurface& sphere) {
  Timer timer;
  auto ct = low_discrepancy_centers(torus, 20, 1);
  auto cs = low_discrepancy_centers(sphere, 20, 1);
  bool pass = true;
  double c_half = 0.0, c_one = 0.0;
  for (double R : {0.5, 1.0}) {
    double worst = 0.0;
    for (const auto& pair : torus_family(1, 10))
      worst = std::max(worst, -std::log(global_lower_bound_check(
                                  pair, torus, R, ct, 32)) /
                                  std::sqrt(pair.lambda));
    for (const auto& pair : zonal_family(1, 15))
      worst = std::max(worst, -std::log(global_lower_bound_check(
                                  pair, sphere, R, cs, 32)) /
                                  std::sqrt(pair.lambda));
    (R == 0.5 ? c_half : c_one) = worst;
  }
  pass = c_half <= 3.5 && c_one <= 2.0;
  char detail[160];
  std::snprintf(detail, sizeof(detail),
                "-ln(min ratio)/sqrt(lambda): C_{0.5} = %.3f <= 3.5, "
                "C_{1.0} = %.3f <= 2.0",
                c_half, c_one);
  report(9, pass, detail, timer.seconds());
}

// ------------------------------------------------------------ criterion 10
void criterion_10(const ModelSurface& torus) {
  Timer timer;
  bool pass = true;
  double worst_alpha = 0.0, last_alpha = 0.0, worst_taylor = 0.0;
  double worst_cosh_err = 0.0;
  for (int k = 2; k <= 10; ++k) {
    auto pair = torus_eigenpair(kPeriods, {k, 0});
    auto g = growth_exponent(pair, torus, {0.0, 0.0});
    double ratio = g.alpha_growth / std::sqrt(pair.lambda);
    worst_alpha = std::max(worst_alpha, ratio);
    last_alpha = ratio;
    double closed = 2.0 * std::log(std::cosh(static_cast<double>(k))) / k;
    worst_cosh_err = std::max(worst_cosh_err, std::abs(ratio - closed));
  }
  for (int k = 1; k <= 10; ++k) {
    auto pair = torus_eigenpair(kPeriods, {k, 0});
    worst_taylor = std::max(
        worst_taylor,
        taylor_derivative_check(pair, torus, {0.0, 0.0}, 10).minimal_c);
  }
  auto df = df_relation_check(torus_family(2, 10), torus, {0.0, 0.0});
  pass = worst_alpha <= 2.5 && std::abs(last_alpha - 2.0) <= 0.3 &&
         worst_cosh_err <= 1e-3 && worst_taylor <= 1.5 && df.max_ratio <= 0.5;
  char detail[200];
  std::snprintf(detail, sizeof(detail),
                "alpha/sqrt(lambda) max %.3f (k=10: %.3f, cosh err %.1e), "
                "taylor min C max %.3f, measure/alpha max %.4f",
                worst_alpha, last_alpha, worst_cosh_err, worst_taylor,
                df.max_ratio);
  report(10, pass, detail, timer.seconds());
}

// ------------------------------------------------------------ criterion 11
void criterion_11(const ModelSurface& torus, const ModelSurface& sphere) {
  Timer timer;
  bool pass = true;
  double worst_res = 0.0;
  for (const auto& pair : torus_family(2, 10)) {
    double r = eigen_residual(pair, torus, 32);
    worst_res = std::max(worst_res, r);
    pass = pass && r < 1e-6;
  }
  for (const auto& pair : zonal_family(2, 15))
    pass = pass && eigen_residual(pair, sphere, 32) < 1e-6;
  auto rev = ModelSurface::revolution(sphere_profile(1.0));
  SturmLiouvilleSpec spec{rev, 0, 1024};
  double worst_spec = 0.0;
  for (int j = 1; j <= 6; ++j) {  // lambda = l(l+1) <= 42 < 50
    auto pair = revolution_eigenpair(spec, j);
    pass = pass && eigen_residual(pair, rev, 32) <= 1e-4 * pair.lambda;
    double exact = static_cast<double>(j) * (j + 1);
    worst_spec = std::max(worst_spec, std::abs(pair.lambda - exact) / exact);
  }
  pass = pass && worst_spec <= 1e-3;
  // finite-difference consistency of the analytic gradients
  double gt = gradient_consistency_check(torus_eigenpair(kPeriods, {3, 2}),
                                         torus, 500);
  double gz = gradient_consistency_check(sphere_zonal_eigenpair(1.0, 5),
                                         sphere, 500);
  pass = pass && gt < 1e-8 && gz < 1e-6 * (1.0 + std::sqrt(30.0));
  // hessian consistency via the differentiated eigen-system on the flat chart
  auto centers = low_discrepancy_centers(torus, 100, 3);
  double sys = eigen_system_residual(torus_eigenpair(kPeriods, {2, 1}), torus,
                                     centers);
  pass = pass && sys < 1e-5;
  char detail[200];
  std::snprintf(detail, sizeof(detail),
                "residuals (worst torus %.1e), gradient FD %.1e / %.1e, "
                "eigen-system %.1e, revolution spectrum rel err %.1e",
                worst_res, gt, gz, sys, worst_spec);
  report(11, pass, detail, timer.seconds());
}

}  // namespace

int main() {
  auto torus = ModelSurface::flat_torus(kTwoPi, kTwoPi);
  auto sphere = ModelSurface::sphere(1.0);
  criterion_1(torus);
  criterion_2(sphere);
  criterion_3(torus, sphere);
  criterion_4(torus, sphere);
  criterion_5(torus, sphere);
  criterion_6(torus);
  criterion_7();
  criterion_8(torus);
  criterion_9(torus, sphere);
  criterion_10(torus);
  criterion_11(torus, sphere);
  if (g_failures) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all 11 criteria passed\n");
  return 0;
}
