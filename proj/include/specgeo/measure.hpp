// Hausdorff-measure estimation for nodal and critical sets: shrinking
// level sets of |grad u| with the transversal factor-2 rule, Morse point
// extraction, and the scaling-law fits.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "specgeo/fit.hpp"
#include "specgeo/levelset.hpp"
#include "specgeo/spectrum.hpp"

namespace specgeo {

inline double nodal_measure(const EigenPair& pair, const ModelSurface& surface,
                            int grid_n) {
  ScalarField u = [&pair](Point p) { return pair.value(p); };
  return total_length(extract_level_set(u, surface, 0.0, grid_n));
}

enum class SetDimension { Curve, Points, Unknown };

struct CriticalPoint {
  Point location;
  enum class Type { Maximum, Minimum, Saddle, Degenerate, Unresolved } type;
  double det_hessian = 0.0;
};

// Newton on grad u = 0 from sign-change seeds, with Hessian classification.
inline std::vector<CriticalPoint> critical_points(const EigenPair& pair,
                                                  const ModelSurface& surface,
                                                  int grid_n) {
  if (grid_n < 128) throw std::invalid_argument("critical_points: grid_n >= 128");
  LevelGrid grid = default_grid(surface, grid_n);
  double h1 = grid.h1(), h2 = grid.h2();
  int m1 = grid.periodic1 ? grid.n1 : grid.n1 + 1;
  int m2 = grid.periodic2 ? grid.n2 : grid.n2 + 1;
  std::vector<Vec2> g(static_cast<std::size_t>(m1) * m2);
  double usup = 0.0;
  for (int i = 0; i < m1; ++i)
    for (int j = 0; j < m2; ++j) {
      Point p{grid.x1a + h1 * i, grid.x2a + h2 * j};
      g[static_cast<std::size_t>(i) * m2 + j] = pair.partial(p);
      usup = std::max(usup, std::abs(pair.value(p)));
    }
  auto at = [&](int i, int j) {
    if (grid.periodic1) i %= grid.n1;
    if (grid.periodic2) j %= grid.n2;
    return g[static_cast<std::size_t>(i) * m2 + j];
  };
  double degen_tol = 1e-8 * pair.lambda * pair.lambda * usup * usup;
  double grad_scale = std::sqrt(pair.lambda) * usup;

  std::vector<CriticalPoint> out;
  std::vector<Point> accepted;  // nondegenerate roots for dedup
  auto already_found = [&](Point p) {
    for (const Point& q : accepted) {
      double d1 = grid.periodic1 ? wrap_diff(p.x1, q.x1, grid.x1b - grid.x1a)
                                 : p.x1 - q.x1;
      double d2 = grid.periodic2 ? wrap_diff(p.x2, q.x2, grid.x2b - grid.x2a)
                                 : p.x2 - q.x2;
      if (std::sqrt(d1 * d1 + d2 * d2) < 1e-6) return true;
    }
    return false;
  };

  for (int i = 0; i < grid.n1; ++i)
    for (int j = 0; j < grid.n2; ++j) {
      // Seed: both gradient components change sign over the cell corners.
      bool flip1 = false, flip2 = false;
      double min1 = 1e300, max1 = -1e300, min2 = 1e300, max2 = -1e300;
      for (int a = 0; a <= 1; ++a)
        for (int b = 0; b <= 1; ++b) {
          Vec2 v = at(i + a, j + b);
          min1 = std::min(min1, v[0]);
          max1 = std::max(max1, v[0]);
          min2 = std::min(min2, v[1]);
          max2 = std::max(max2, v[1]);
        }
      flip1 = min1 <= 0.0 && max1 >= 0.0;
      flip2 = min2 <= 0.0 && max2 >= 0.0;
      if (!flip1 || !flip2) continue;

      Point p{grid.x1a + h1 * (i + 0.5), grid.x2a + h2 * (j + 0.5)};
      Mat2 H0 = pair.hessian(p);
      double det0 = H0[0] * H0[3] - H0[1] * H0[2];
      if (std::abs(det0) < degen_tol) {
        // Singular Hessian along the seed: flag, no Newton.
        if (std::sqrt(std::pow(pair.partial(p)[0], 2) +
                      std::pow(pair.partial(p)[1], 2)) <
            0.5 * grad_scale * std::max(h1, h2) * 4.0)
          out.push_back({surface.canonical(p), CriticalPoint::Type::Degenerate, det0});
        continue;
      }
      bool converged = false;
      for (int it = 0; it < 50; ++it) {
        Vec2 gv = pair.partial(p);
        Mat2 H = pair.hessian(p);
        double det = H[0] * H[3] - H[1] * H[2];
        if (std::abs(det) < degen_tol) break;
        double dx1 = (H[3] * gv[0] - H[1] * gv[1]) / det;
        double dx2 = (-H[2] * gv[0] + H[0] * gv[1]) / det;
        // Keep the iterate near its seed cell.
        double cap = 2.0 * std::max(h1, h2);
        double step = std::sqrt(dx1 * dx1 + dx2 * dx2);
        if (step > cap) {
          dx1 *= cap / step;
          dx2 *= cap / step;
        }
        p = {p.x1 - dx1, p.x2 - dx2};
        if (step < 1e-12) {
          converged = true;
          break;
        }
      }
      if (!converged) {
        out.push_back({surface.canonical(p), CriticalPoint::Type::Unresolved, 0.0});
        continue;
      }
      Point cp = surface.canonical(p);
      if (already_found(cp)) continue;
      accepted.push_back(cp);
      Mat2 H = pair.hessian(p);
      double det = H[0] * H[3] - H[1] * H[2];
      CriticalPoint::Type type;
      if (std::abs(det) < degen_tol)
        type = CriticalPoint::Type::Degenerate;
      else if (det < 0.0)
        type = CriticalPoint::Type::Saddle;
      else
        type = (H[0] + H[3] < 0.0) ? CriticalPoint::Type::Maximum
                                   : CriticalPoint::Type::Minimum;
      out.push_back({cp, type, det});
    }
  return out;
}

struct MeasureEstimate {
  std::vector<double> levels;         // decreasing delta_j
  std::vector<double> level_lengths;  // total length of {|grad u| = delta_j}
  double extrapolated = 0.0;          // H^1 estimate (Richardson limit / 2)
  SetDimension verdict = SetDimension::Unknown;
  int point_count = 0;
};

namespace detail {

// Default geometric level sequence delta_j = delta_0 2^{-j}, j = 0..4.
// Marching squares only sees the valley of |grad u| around a critical curve
// when its width 2 delta / |Hess| exceeds a grid cell, so the finest level
// is kept above h * lambda * sup|u| (the natural Hessian scale); when that
// floor collides with sup|grad u| the sequence is clamped and the oscillation
// check downstream reports verdict-withheld.
inline std::vector<double> default_levels(double fmax, double h, double lambda,
                                          double usup) {
  double slope = lambda * usup;
  double d0 = std::max(0.1 * fmax, std::min(0.5 * fmax, 16.0 * h * slope));
  std::vector<double> levels;
  for (int j = 0; j <= 4; ++j) levels.push_back(d0 * std::pow(2.0, -j));
  return levels;
}

}  // namespace detail

// H^1 of the critical set via shrinking level sets of |grad u|: a
// transversally degenerate curve contributes two nearby level curves whose
// total length converges to twice the measure; isolated nondegenerate points
// give L(delta) = Theta(delta).
inline MeasureEstimate critical_measure(const EigenPair& pair,
                                        const ModelSurface& surface, int grid_n,
                                        std::vector<double> levels = {}) {
  ScalarField f = grad_magnitude_field(pair, surface);
  if (levels.empty()) {
    double fmax = norm_over_surface(f, surface, NormKind::SupNorm, 24);
    ScalarField uabs = [&pair](Point p) { return std::abs(pair.value(p)); };
    double usup = norm_over_surface(uabs, surface, NormKind::SupNorm, 24);
    double h = default_grid(surface, grid_n).h1();
    levels = detail::default_levels(fmax, h, pair.lambda, usup);
  }
  if (levels.size() < 5)
    throw std::invalid_argument(
        "critical_measure: need a geometric level sequence with J >= 4");
  for (std::size_t j = 1; j < levels.size(); ++j)
    if (levels[j] >= levels[j - 1])
      throw std::invalid_argument("critical_measure: levels must decrease");

  MeasureEstimate est;
  est.levels = levels;
  for (double d : levels)
    est.level_lengths.push_back(total_length(extract_level_set(f, surface, d, grid_n)));

  double L0 = est.level_lengths.front();
  double Lj = est.level_lengths[est.level_lengths.size() - 1];
  double Lj1 = est.level_lengths[est.level_lengths.size() - 2];
  if (L0 <= 0.0 || Lj / L0 < 0.2) {
    est.verdict = SetDimension::Points;
    est.extrapolated = 0.5 * std::max(0.0, 2.0 * Lj - Lj1);
    est.point_count = 0;
    for (const auto& cp : critical_points(pair, surface, std::max(grid_n, 128)))
      if (cp.type != CriticalPoint::Type::Unresolved) ++est.point_count;
    return est;
  }
  if (std::abs(Lj - Lj1) > 0.2 * Lj1) {
    est.verdict = SetDimension::Unknown;  // verdict withheld, raw data returned
    return est;
  }
  est.verdict = SetDimension::Curve;
  est.extrapolated = 0.5 * std::max(0.0, 2.0 * Lj - Lj1);
  return est;
}

// H^1 of the critical set clipped to the euclidean chart ball B(center, r),
// same shrinking-level construction as critical_measure. The extraction grid
// is the bounding square of the ball; segments are kept when their midpoint
// lies inside the ball.
inline MeasureEstimate critical_measure_in_ball(const EigenPair& pair,
                                                const ModelSurface& surface,
                                                Point center, double r,
                                                int grid_n,
                                                std::vector<double> levels = {}) {
  if (r <= 0.0) throw std::invalid_argument("critical_measure_in_ball: r > 0");
  if (grid_n < 64)
    throw std::invalid_argument("critical_measure_in_ball: grid_n >= 64");
  ScalarField f = grad_magnitude_field(pair, surface);
  LevelGrid grid{center.x1 - r, center.x1 + r, center.x2 - r, center.x2 + r,
                 grid_n,        grid_n,        false,          false};
  if (levels.empty()) {
    double fmax = 0.0, usup = 0.0;
    for (int i = 0; i <= 64; ++i)
      for (int j = 0; j <= 64; ++j) {
        Point p{grid.x1a + 2.0 * r * i / 64.0, grid.x2a + 2.0 * r * j / 64.0};
        fmax = std::max(fmax, f(p));
        usup = std::max(usup, std::abs(pair.value(p)));
      }
    if (fmax <= 0.0) fmax = 1e-300;
    levels = detail::default_levels(fmax, grid.h1(), pair.lambda, usup);
  }
  for (std::size_t j = 1; j < levels.size(); ++j)
    if (levels[j] >= levels[j - 1])
      throw std::invalid_argument("critical_measure_in_ball: levels must decrease");

  MeasureEstimate est;
  est.levels = levels;
  for (double d : levels) {
    double len = 0.0;
    for (const Polyline& pl : extract_level_set(f, surface, d, grid)) {
      std::size_t n = pl.points.size();
      std::size_t nsegs = n - 1 + (pl.closed ? 1 : 0);
      for (std::size_t s = 0; s < nsegs; ++s) {
        Point a = pl.points[s], b = pl.points[(s + 1) % n];
        Point mid{0.5 * (a.x1 + b.x1), 0.5 * (a.x2 + b.x2)};
        double d1 = mid.x1 - center.x1, d2 = mid.x2 - center.x2;
        if (d1 * d1 + d2 * d2 > r * r) continue;
        Vec2 g = surface.metric_diag(surface.canonical(mid));
        double e1 = b.x1 - a.x1, e2 = b.x2 - a.x2;
        len += std::sqrt(g[0] * e1 * e1 + g[1] * e2 * e2);
      }
    }
    est.level_lengths.push_back(len);
  }
  if (est.levels.size() >= 2) {
    double Lj = est.level_lengths[est.level_lengths.size() - 1];
    double Lj1 = est.level_lengths[est.level_lengths.size() - 2];
    est.extrapolated = 0.5 * std::max(0.0, 2.0 * Lj - Lj1);
    double L0 = est.level_lengths.front();
    if (L0 <= 0.0 || Lj / L0 < 0.2)
      est.verdict = SetDimension::Points;
    else if (std::abs(Lj - Lj1) > 0.2 * Lj1)
      est.verdict = SetDimension::Unknown;
    else
      est.verdict = SetDimension::Curve;
  }
  return est;
}

}  // namespace specgeo
