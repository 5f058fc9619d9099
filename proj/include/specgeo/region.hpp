// Geodesic balls/annuli and positive quadrature rules incorporating the
// Riemannian volume element.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "specgeo/surface.hpp"

namespace specgeo {

struct Region {
  enum class Kind { Ball, Annulus };
  Kind kind = Kind::Ball;
  Point center;
  double inner = 0.0;  // 0 for balls
  double outer = 0.0;

  static Region ball(Point center, double radius) {
    if (radius <= 0.0) throw std::invalid_argument("Region: radius must be positive");
    return {Kind::Ball, center, 0.0, radius};
  }
  static Region annulus(Point center, double inner, double outer) {
    if (inner <= 0.0 || outer <= inner)
      throw std::invalid_argument("Region: need 0 < inner < outer");
    return {Kind::Annulus, center, inner, outer};
  }
};

struct QuadratureRule {
  std::vector<Point> nodes;
  std::vector<double> weights;

  double integrate(const std::function<double(Point)>& f) const {
    double acc = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
    return acc;
  }
  double weight_sum() const {
    double acc = 0.0;
    for (double w : weights) acc += w;
    return acc;
  }
};

namespace detail {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton on the recurrence.
inline void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
  x.resize(n);
  w.resize(n);
  for (int i = 0; i < n; ++i) {
    double xi = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = xi;
      for (int k = 2; k <= n; ++k) {
        double p2 = ((2 * k - 1) * xi * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      pp = n * (xi * p1 - p0) / (xi * xi - 1.0);
      double dx = p1 / pp;
      xi -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    x[n - 1 - i] = xi;
    w[n - 1 - i] = 2.0 / ((1.0 - xi * xi) * pp * pp);
  }
}

inline void check_region(const ModelSurface& surface, const Region& region) {
  if (region.outer <= 0.0) throw std::invalid_argument("region: degenerate radius");
  if (region.outer > surface.injectivity_radius())
    throw std::invalid_argument("region: radius exceeds injectivity radius");
}

}  // namespace detail

// Polar tensor-product rule: radial Gauss-Legendre (2*order nodes) times
// equispaced angular nodes (4*order), weights carrying the Jacobi-field
// area element.
inline QuadratureRule region_quadrature(const ModelSurface& surface,
                                        const Region& region, int order) {
  if (order < 1) throw std::invalid_argument("region_quadrature: order >= 1");
  detail::check_region(surface, region);
  int nr = 2 * order, na = 4 * order;
  std::vector<double> gx, gw;
  detail::gauss_legendre(nr, gx, gw);

  QuadratureRule rule;
  rule.nodes.reserve(static_cast<std::size_t>(nr) * na);
  rule.weights.reserve(static_cast<std::size_t>(nr) * na);
  double a = region.inner, b = region.outer;
  double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double wa = kTwoPi / na;

  if (surface.kind() == ModelSurface::Kind::Revolution) {
    // One geodesic integration per direction, sampled at all radii.
    std::vector<double> radii(nr);
    for (int i = 0; i < nr; ++i) radii[i] = mid + half * gx[i];
    for (int j = 0; j < na; ++j) {
      double psi = kTwoPi * j / na;
      auto states = detail::rev_geodesic(surface.profile(), region.center, psi,
                                         radii);
      for (int i = 0; i < nr; ++i) {
        Point p = surface.canonical({states[i].s, states[i].phi});
        rule.nodes.push_back(p);
        rule.weights.push_back(half * gw[i] * wa * std::max(states[i].J, 0.0));
      }
    }
    return rule;
  }

  for (int i = 0; i < nr; ++i) {
    double r = mid + half * gx[i];
    for (int j = 0; j < na; ++j) {
      double psi = kTwoPi * j / na;
      auto e = surface.exp_map(region.center, r, psi);
      rule.nodes.push_back(e.point);
      rule.weights.push_back(half * gw[i] * wa * e.jacobi);
    }
  }
  return rule;
}

// Riemannian area via the same volume element as region_quadrature.
inline double area(const ModelSurface& surface, const Region& region) {
  detail::check_region(surface, region);
  double a = region.inner, b = region.outer;
  switch (surface.kind()) {
    case ModelSurface::Kind::FlatTorus:
      return kPi * (b * b - a * a);
    case ModelSurface::Kind::Sphere: {
      double R = surface.radius();
      return kTwoPi * R * R * (std::cos(a / R) - std::cos(b / R));
    }
    case ModelSurface::Kind::Revolution: {
      // No closed form: integrate the Jacobi field at high order.
      QuadratureRule rule = region_quadrature(surface, region, 48);
      return rule.weight_sum();
    }
  }
  return 0.0;
}

// Quadrature over the whole surface (tensor chart rule).
inline QuadratureRule full_surface_quadrature(const ModelSurface& surface,
                                              int order) {
  if (order < 1) throw std::invalid_argument("full_surface_quadrature: order >= 1");
  QuadratureRule rule;
  switch (surface.kind()) {
    case ModelSurface::Kind::FlatTorus: {
      int n1 = 8 * order, n2 = 8 * order;
      auto [p1, p2] = surface.periods();
      double w = p1 * p2 / (static_cast<double>(n1) * n2);
      for (int i = 0; i < n1; ++i)
        for (int j = 0; j < n2; ++j) {
          rule.nodes.push_back({p1 * i / n1, p2 * j / n2});
          rule.weights.push_back(w);
        }
      return rule;
    }
    case ModelSurface::Kind::Sphere: {
      // Gauss-Legendre in cos(theta) times equispaced phi.
      int nt = 4 * order, np = 8 * order;
      std::vector<double> gx, gw;
      detail::gauss_legendre(nt, gx, gw);
      double R = surface.radius();
      double wp = kTwoPi / np;
      for (int i = 0; i < nt; ++i) {
        double th = std::acos(gx[i]);
        for (int j = 0; j < np; ++j) {
          rule.nodes.push_back({th, kTwoPi * j / np});
          rule.weights.push_back(R * R * gw[i] * wp);
        }
      }
      return rule;
    }
    case ModelSurface::Kind::Revolution: {
      int ns = 8 * order, np = 8 * order;
      std::vector<double> gx, gw;
      detail::gauss_legendre(ns, gx, gw);
      double L = surface.profile().length;
      double wp = kTwoPi / np;
      for (int i = 0; i < ns; ++i) {
        double s = 0.5 * L * (1.0 + gx[i]);
        double rho = surface.profile().rho(s);
        for (int j = 0; j < np; ++j) {
          rule.nodes.push_back({s, kTwoPi * j / np});
          rule.weights.push_back(0.5 * L * gw[i] * wp * rho);
        }
      }
      return rule;
    }
  }
  return rule;
}

}  // namespace specgeo
