// Donnelly-Fefferman growth of F = sum |du/dx_i|^2: polydisc sup of the
// analytic continuation, growth exponent alpha, measure-vs-growth relation,
// and the Taylor derivative bound on closed-form families.
#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "specgeo/measure.hpp"
#include "specgeo/norms.hpp"
#include "specgeo/spectrum.hpp"

namespace specgeo {

// F in chart coordinates (raw partials, no metric factors): its zero set is
// exactly the critical set of u in the chart.
inline ScalarField F_field(const EigenPair& pair) {
  auto partial = pair.partial;
  return [partial](Point p) {
    Vec2 d = partial(p);
    return d[0] * d[0] + d[1] * d[1];
  };
}

// Analytic continuation of F for the closed-form families; entire in both
// chart coordinates (trig for the torus, P_l(cos z) for zonal harmonics).
inline std::complex<double> complex_F(const EigenPair& pair,
                                      std::complex<double> z1,
                                      std::complex<double> z2) {
  using C = std::complex<double>;
  switch (pair.provenance.family) {
    case Provenance::Family::ClosedFormTorus: {
      double w1 = pair.provenance.w1, w2 = pair.provenance.w2;
      C zeta = w1 * z1 + w2 * z2 + pair.provenance.phase;
      C c = std::cos(zeta);
      return (w1 * w1 + w2 * w2) * c * c;
    }
    case Provenance::Family::ClosedFormZonal: {
      int l = pair.provenance.l;
      C w = std::cos(z1);
      C dth = -std::sin(z1) * legendre_dp(l, w);  // d/dtheta P_l(cos theta)
      (void)z2;  // zonal: no phi dependence
      return dth * dth;
    }
    case Provenance::Family::Revolution:
      throw std::invalid_argument(
          "complex_F: no closed-form continuation for Revolution pairs");
  }
  return C(0.0);
}

// Sup of |F| over the distinguished boundary of the polydisc
// {|z_i - c_i| = complex_radius} (maximum principle).
inline double complex_sup(const EigenPair& pair, Point chart_center,
                          double complex_radius, int grid_n) {
  if (complex_radius < 0.0)
    throw std::invalid_argument("complex_sup: radius >= 0");
  if (grid_n < 16) throw std::invalid_argument("complex_sup: grid_n >= 16");
  if (pair.provenance.family == Provenance::Family::Revolution)
    throw std::invalid_argument("complex_sup: unsupported family (Revolution)");
  using C = std::complex<double>;
  double best = 0.0;
  bool z2_matters = pair.provenance.family == Provenance::Family::ClosedFormTorus &&
                    pair.provenance.w2 != 0.0;
  int n2 = z2_matters ? grid_n : 1;
  for (int a = 0; a < grid_n; ++a) {
    double t1 = kTwoPi * a / grid_n;
    C z1 = C(chart_center.x1, 0.0) + complex_radius * C(std::cos(t1), std::sin(t1));
    for (int b = 0; b < n2; ++b) {
      double t2 = kTwoPi * b / n2;
      C z2 = C(chart_center.x2, 0.0) + complex_radius * C(std::cos(t2), std::sin(t2));
      best = std::max(best, std::abs(complex_F(pair, z1, z2)));
    }
  }
  return best;
}

struct GrowthReport {
  double lambda = 0.0;
  double sup_complex = 0.0;    // sup |F| over the polydisc of radius 1
  double sup_real_half = 0.0;  // sup F over the real chart ball B(1/2)
  double alpha_growth = 0.0;   // ln(sup_complex / sup_real_half)
  double measured_measure = 0.0;
};

inline GrowthReport growth_exponent(const EigenPair& pair,
                                    const ModelSurface& surface,
                                    Point chart_center, int grid_n = 256,
                                    int order = 32) {
  (void)surface;  // the chart-coordinate sup needs no metric
  GrowthReport rep;
  rep.lambda = pair.lambda;
  rep.sup_complex = complex_sup(pair, chart_center, 1.0, grid_n);
  ScalarField F = F_field(pair);
  // Real sup over the euclidean chart ball of radius 1/2 (dense grid; the
  // chart metric plays no role in a sup).
  double best = 0.0;
  int m = 4 * order;
  for (int i = -m; i <= m; ++i)
    for (int j = -m; j <= m; ++j) {
      double x = 0.5 * i / m, y = 0.5 * j / m;
      if (x * x + y * y > 0.25) continue;
      best = std::max(best, F({chart_center.x1 + x, chart_center.x2 + y}));
    }
  rep.sup_real_half = best;
  if (rep.sup_real_half < 1e-14)
    throw std::runtime_error("growth_exponent: F numerically vanishing on B(1/2)");
  rep.alpha_growth = std::log(rep.sup_complex / rep.sup_real_half);
  return rep;
}

struct DfRelationEntry {
  double lambda = 0.0;
  double alpha_growth = 0.0;
  double measure = 0.0;  // H^1(C_u intersect B(1/4)) in the chart
  double ratio = 0.0;    // measure / alpha_growth
};

struct DfRelationReport {
  std::vector<DfRelationEntry> entries;
  double max_ratio = 0.0;
};

// Theorem-4.1-style relation: critical-set measure inside the real quarter
// ball vs the growth exponent, per family member; the ratio should stay
// bounded across the family.
inline DfRelationReport df_relation_check(const std::vector<EigenPair>& family,
                                          const ModelSurface& surface,
                                          Point chart_center, int grid_n = 192,
                                          int complex_grid_n = 256) {
  if (family.empty())
    throw std::invalid_argument("df_relation_check: empty family");
  DfRelationReport rep;
  for (const EigenPair& pair : family) {
    GrowthReport g = growth_exponent(pair, surface, chart_center, complex_grid_n);
    MeasureEstimate m =
        critical_measure_in_ball(pair, surface, chart_center, 0.25, grid_n);
    DfRelationEntry e;
    e.lambda = pair.lambda;
    e.alpha_growth = g.alpha_growth;
    e.measure = m.extrapolated;
    e.ratio = g.alpha_growth > 0.0 ? e.measure / g.alpha_growth : 0.0;
    rep.entries.push_back(e);
    rep.max_ratio = std::max(rep.max_ratio, e.ratio);
  }
  return rep;
}

struct TaylorReport {
  double minimal_c = 0.0;   // smallest C validating the derivative bound
  int beta1 = 0, beta2 = 0; // multi-index attaining it
  double grad_sup = 0.0;    // sup |grad u| over B(c1/sqrt(lambda))
};

namespace detail {

// |D^(b1,b2) u| at the chart point for the closed-form families.
inline double chart_derivative_abs(const EigenPair& pair, Point p, int b1, int b2) {
  switch (pair.provenance.family) {
    case Provenance::Family::ClosedFormTorus: {
      double w1 = pair.provenance.w1, w2 = pair.provenance.w2;
      double zeta = w1 * p.x1 + w2 * p.x2 + pair.provenance.phase;
      int n = b1 + b2;
      return std::pow(std::abs(w1), b1) * std::pow(std::abs(w2), b2) *
             std::abs(std::sin(zeta + 0.5 * kPi * n));
    }
    case Provenance::Family::ClosedFormZonal: {
      if (b2 > 0) return 0.0;  // no phi dependence
      // P_l(cos t) = sum c_m cos((l-2m) t); differentiate term by term.
      std::vector<double> c = legendre_cosine_coeffs(pair.provenance.l);
      double acc = 0.0;
      for (int m = 0; m <= pair.provenance.l; ++m) {
        double freq = pair.provenance.l - 2 * m;
        acc += c[m] * std::pow(freq, b1) *
               std::cos(freq * p.x1 + 0.5 * kPi * b1);
      }
      return std::abs(acc);
    }
    case Provenance::Family::Revolution:
      throw std::invalid_argument(
          "chart_derivative_abs: unsupported family (Revolution)");
  }
  return 0.0;
}

}  // namespace detail

// Smallest C with |D^beta u(p)| <= beta! C^|beta| sqrt(lambda)^|beta| *
// sup_{B(p, c1/sqrt(lambda))} |grad u| for all 1 <= |beta| <= max_order.
inline TaylorReport taylor_derivative_check(const EigenPair& pair,
                                            const ModelSurface& surface,
                                            Point p, int max_order,
                                            double c1 = 1.0, int order = 32) {
  if (max_order < 1 || max_order > 12)
    throw std::invalid_argument("taylor_derivative_check: max_order in [1,12]");
  if (pair.provenance.family == Provenance::Family::Revolution)
    throw std::invalid_argument(
        "taylor_derivative_check: unsupported family (Revolution)");
  double sl = std::sqrt(pair.lambda);
  ScalarField gm = grad_magnitude_field(pair, surface);
  TaylorReport rep;
  rep.grad_sup = norm_over_region(gm, surface, Region::ball(p, c1 / sl),
                                  NormKind::SupNorm, order);
  if (rep.grad_sup < 1e-14)
    throw std::runtime_error("taylor_derivative_check: gradient sup vanishes");
  auto fact = [](int n) {
    double v = 1.0;
    for (int k = 2; k <= n; ++k) v *= k;
    return v;
  };
  for (int n = 1; n <= max_order; ++n)
    for (int b1 = 0; b1 <= n; ++b1) {
      int b2 = n - b1;
      double d = detail::chart_derivative_abs(pair, p, b1, b2);
      if (d <= 0.0) continue;
      double c = std::pow(
          d / (fact(b1) * fact(b2) * std::pow(sl, n) * rep.grad_sup),
          1.0 / n);
      if (c > rep.minimal_c) {
        rep.minimal_c = c;
        rep.beta1 = b1;
        rep.beta2 = b2;
      }
    }
  return rep;
}

}  // namespace specgeo
