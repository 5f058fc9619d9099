// Quantitative-uniqueness experiments: three-sphere inequality, gradient
// doubling, global lower bounds, elliptic gradient estimate.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "specgeo/carleman.hpp"
#include "specgeo/norms.hpp"
#include "specgeo/spectrum.hpp"

namespace specgeo {

struct AlphaWeights {
  double A_R = 0.0;
  double B_R = 0.0;
  double alpha = 0.0;  // A/(A+B), in (0,1)
};

// A_R = phi(R/4) - phi(R), B_R = -(phi(3R/2) - phi(R)).
inline AlphaWeights alpha_from_weight(const WeightParams& params, double R) {
  if (R <= 0.0 || 1.5 * R > params.max_radius() + 1e-12)
    throw std::invalid_argument("alpha_from_weight: R out of weight range");
  AlphaWeights w;
  w.A_R = params.phi(R / 4.0) - params.phi(R);
  w.B_R = -(params.phi(1.5 * R) - params.phi(R));
  w.alpha = w.A_R / (w.A_R + w.B_R);
  return w;
}

struct ThreeSphereReport {
  Point center;
  double R = 0.0;
  double alpha = 0.0;
  double A_R = 0.0, B_R = 0.0;
  double norm_half = 0.0, norm_R = 0.0, norm_2R = 0.0;
  // [ln N_R - alpha ln N_{R/2} - (1-alpha) ln N_{2R}] / sqrt(lambda)
  double required_c = 0.0;
  // Same with the exponents swapped (the proof's final display).
  double required_c_swapped = 0.0;
};

inline ThreeSphereReport three_sphere_check(const EigenPair& pair,
                                            const ModelSurface& surface,
                                            Point center, double R,
                                            const WeightParams& params,
                                            int order = 32) {
  if (2.0 * R > surface.injectivity_radius())
    throw std::invalid_argument("three_sphere_check: 2R exceeds injectivity bound");
  AlphaWeights w = alpha_from_weight(params, R);
  ScalarField f = grad_magnitude_field(pair, surface);
  ThreeSphereReport rep;
  rep.center = center;
  rep.R = R;
  rep.alpha = w.alpha;
  rep.A_R = w.A_R;
  rep.B_R = w.B_R;
  rep.norm_half = norm_over_region(f, surface, Region::ball(center, 0.5 * R),
                                   NormKind::L2, order);
  rep.norm_R =
      norm_over_region(f, surface, Region::ball(center, R), NormKind::L2, order);
  rep.norm_2R = norm_over_region(f, surface, Region::ball(center, 2.0 * R),
                                 NormKind::L2, order);
  if (rep.norm_half < 1e-14 || rep.norm_R < 1e-14 || rep.norm_2R < 1e-14)
    throw std::runtime_error("three_sphere_check: numerically trivial gradient norm");
  double sl = std::sqrt(pair.lambda);
  rep.required_c = (std::log(rep.norm_R) - w.alpha * std::log(rep.norm_half) -
                    (1.0 - w.alpha) * std::log(rep.norm_2R)) /
                   sl;
  rep.required_c_swapped = (std::log(rep.norm_R) - w.alpha * std::log(rep.norm_2R) -
                            (1.0 - w.alpha) * std::log(rep.norm_half)) /
                           sl;
  return rep;
}

struct DoublingReport {
  Point center;
  double r = 0.0;
  NormKind kind = NormKind::L2;
  double lambda = 0.0;
  double index = 0.0;  // ln(||grad u||_{B_2r} / ||grad u||_{B_r})
};

inline DoublingReport doubling_index(const EigenPair& pair,
                                     const ModelSurface& surface, Point center,
                                     double r, NormKind kind, int order = 32) {
  if (2.0 * r > surface.injectivity_radius())
    throw std::invalid_argument("doubling_index: 2r exceeds injectivity bound");
  ScalarField f = grad_magnitude_field(pair, surface);
  double inner = norm_over_region(f, surface, Region::ball(center, r), kind, order);
  if (inner < 1e-14)
    throw std::runtime_error("doubling_index: inner norm numerically trivial");
  double outer =
      norm_over_region(f, surface, Region::ball(center, 2.0 * r), kind, order);
  return {center, r, kind, pair.lambda, std::log(outer / inner)};
}

struct SweepResult {
  double max_index = -1e300;
  DoublingReport argmax;
};

// Deterministic max over (center, radius); lexicographic tie-break.
inline SweepResult doubling_sweep(const EigenPair& pair, const ModelSurface& surface,
                                  const std::vector<Point>& centers,
                                  const std::vector<double>& radii, NormKind kind,
                                  int order = 32) {
  if (centers.empty() || radii.empty())
    throw std::invalid_argument("doubling_sweep: empty sweep");
  std::vector<Point> cs = centers;
  std::sort(cs.begin(), cs.end(), [](Point a, Point b) {
    return a.x1 != b.x1 ? a.x1 < b.x1 : a.x2 < b.x2;
  });
  std::vector<double> rs = radii;
  std::sort(rs.begin(), rs.end());
  SweepResult out;
  for (const Point& c : cs)
    for (double r : rs) {
      DoublingReport rep = doubling_index(pair, surface, c, r, kind, order);
      if (rep.index > out.max_index) {
        out.max_index = rep.index;
        out.argmax = rep;
      }
    }
  return out;
}

// min over centers of ||grad u||_{B_R} / ||grad u||_{L2(M)}.
inline double global_lower_bound_check(const EigenPair& pair,
                                       const ModelSurface& surface, double R,
                                       const std::vector<Point>& center_grid,
                                       int order = 32) {
  if (center_grid.empty())
    throw std::invalid_argument("global_lower_bound_check: empty center grid");
  ScalarField f = grad_magnitude_field(pair, surface);
  double global = norm_over_surface(f, surface, NormKind::L2, order);
  double worst = 1e300;
  for (const Point& c : center_grid) {
    double local = norm_over_region(f, surface, Region::ball(c, R), NormKind::L2, order);
    worst = std::min(worst, local / global);
  }
  return worst;
}

// ||grad u||_{A_{R/8, R/4}} / ||grad u||_{L2(M)}.
inline double annulus_lower_bound_check(const EigenPair& pair,
                                        const ModelSurface& surface, double R,
                                        Point center, int order = 32) {
  ScalarField f = grad_magnitude_field(pair, surface);
  double global = norm_over_surface(f, surface, NormKind::L2, order);
  double local = norm_over_region(f, surface, Region::annulus(center, R / 8.0, R / 4.0),
                                  NormKind::L2, order);
  return local / global;
}

// With V = grad u, returns ||grad V||_{B_{(1-a)R}} / [(1/((1-a)R) + sqrt(lambda))
// ||V||_{B_R}]; grad V taken as the chart Hessian (Frobenius norm).
inline double elliptic_gradient_check(const EigenPair& pair,
                                      const ModelSurface& surface, Point center,
                                      double R, double a, int order = 32) {
  if (!(a > 0.0 && a < 1.0))
    throw std::invalid_argument("elliptic_gradient_check: a in (0,1)");
  if (R > surface.injectivity_radius())
    throw std::invalid_argument("elliptic_gradient_check: R exceeds injectivity bound");
  ScalarField hess_frob = [&pair](Point p) {
    Mat2 h = pair.hessian(p);
    return std::sqrt(h[0] * h[0] + h[1] * h[1] + h[2] * h[2] + h[3] * h[3]);
  };
  ScalarField v_mag = [&pair](Point p) {
    Vec2 d = pair.partial(p);
    return std::sqrt(d[0] * d[0] + d[1] * d[1]);
  };
  double num = norm_over_region(hess_frob, surface,
                                Region::ball(center, (1.0 - a) * R), NormKind::L2, order);
  double den =
      norm_over_region(v_mag, surface, Region::ball(center, R), NormKind::L2, order);
  if (den < 1e-14)
    throw std::runtime_error("elliptic_gradient_check: ||V|| numerically trivial");
  return num / (den * (1.0 / ((1.0 - a) * R) + std::sqrt(pair.lambda)));
}

// Residual of the differentiated eigen-system on flat charts, where the
// commutator coefficients vanish: max_i |Delta V_i + lambda V_i|.
inline double eigen_system_residual(const EigenPair& pair,
                                    const ModelSurface& surface,
                                    const std::vector<Point>& sample_points,
                                    double h = 1e-3) {
  if (surface.kind() != ModelSurface::Kind::FlatTorus)
    throw std::invalid_argument(
        "eigen_system_residual: commutator-free check needs a flat chart");
  double worst = 0.0;
  for (const Point& p : sample_points) {
    for (int comp = 0; comp < 2; ++comp) {
      auto V = [&](Point q) { return pair.partial(q)[comp]; };
      auto lap_at = [&](double hh) {
        return (V({p.x1 + hh, p.x2}) + V({p.x1 - hh, p.x2}) +
                V({p.x1, p.x2 + hh}) + V({p.x1, p.x2 - hh}) - 4.0 * V(p)) /
               (hh * hh);
      };
      double lap = (4.0 * lap_at(0.5 * h) - lap_at(h)) / 3.0;
      worst = std::max(worst, std::abs(lap + pair.lambda * V(p)));
    }
  }
  return worst;
}

// Deterministic low-discrepancy center grid (Halton bases 2 and 3 with a
// seeded Cranley-Patterson shift), scaled to the chart fundamental domain.
inline std::vector<Point> low_discrepancy_centers(const ModelSurface& surface,
                                                  int count, unsigned seed = 1) {
  auto halton = [](int i, int base) {
    double f = 1.0, r = 0.0;
    for (int n = i; n > 0; n /= base) {
      f /= base;
      r += f * (n % base);
    }
    return r;
  };
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double s1 = unif(rng), s2 = unif(rng);
  std::vector<Point> out;
  out.reserve(count);
  for (int i = 0; i < count; ++i) {
    double u1 = std::fmod(halton(i + 1, 2) + s1, 1.0);
    double u2 = std::fmod(halton(i + 1, 3) + s2, 1.0);
    switch (surface.kind()) {
      case ModelSurface::Kind::FlatTorus:
        out.push_back({surface.periods()[0] * u1, surface.periods()[1] * u2});
        break;
      case ModelSurface::Kind::Sphere:
        // Area-uniform: cos(theta) uniform in (-1,1).
        out.push_back({std::acos(1.0 - 2.0 * u1), kTwoPi * u2});
        break;
      case ModelSurface::Kind::Revolution:
        out.push_back(
            {surface.profile().length * (0.1 + 0.8 * u1), kTwoPi * u2});
        break;
    }
  }
  return out;
}

}  // namespace specgeo
