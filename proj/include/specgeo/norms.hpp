// L2 and sup norms of scalar/gradient fields over regions; the workhorse
// for every inequality check.
#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <stdexcept>

#include "specgeo/region.hpp"
#include "specgeo/spectrum.hpp"
#include "specgeo/surface.hpp"

namespace specgeo {

enum class NormKind { L2, SupNorm };

using ScalarField = std::function<double(Point)>;

// |grad u|_g as a scalar field.
inline ScalarField grad_magnitude_field(const EigenPair& pair,
                                        const ModelSurface& surface) {
  return [&pair, &surface](Point p) { return pair.grad_norm(surface, p); };
}

namespace detail {

// Two-stage sup: dense polar scan, then local grid refinement around the
// best node.
inline double sup_over_region(const ScalarField& field, const ModelSurface& surface,
                              const Region& region, int order) {
  int nr = std::max(8, 4 * order), na = std::max(16, 8 * order);
  double a = region.inner, b = region.outer;
  double best = -1.0, br = a, bpsi = 0.0;
  for (int i = 0; i <= nr; ++i) {
    double r = a + (b - a) * i / nr;
    if (r <= 0.0) r = 1e-9;
    for (int j = 0; j < na; ++j) {
      double psi = kTwoPi * j / na;
      double v = std::abs(field(surface.exp_map(region.center, r, psi).point));
      if (v > best) {
        best = v;
        br = r;
        bpsi = psi;
      }
    }
  }
  double hr = (b - a) / nr, hp = kTwoPi / na;
  for (int round = 0; round < 6; ++round) {
    double nbr = br, nbpsi = bpsi;
    for (int i = -3; i <= 3; ++i)
      for (int j = -3; j <= 3; ++j) {
        double r = std::clamp(br + i * hr / 3.0, std::max(a, 1e-9), b);
        double psi = bpsi + j * hp / 3.0;
        double v = std::abs(field(surface.exp_map(region.center, r, psi).point));
        if (v > best) {
          best = v;
          nbr = r;
          nbpsi = psi;
        }
      }
    br = nbr;
    bpsi = nbpsi;
    hr /= 3.0;
    hp /= 3.0;
  }
  return best;
}

}  // namespace detail

inline double norm_over_region(const ScalarField& field, const ModelSurface& surface,
                               const Region& region, NormKind kind, int order = 32) {
  if (order < 1) throw std::invalid_argument("norm_over_region: order >= 1");
  if (kind == NormKind::SupNorm)
    return detail::sup_over_region(field, surface, region, order);
  QuadratureRule rule = region_quadrature(surface, region, order);
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    double v = field(rule.nodes[i]);
    acc += rule.weights[i] * v * v;
  }
  return std::sqrt(std::max(acc, 0.0));
}

inline double norm_over_surface(const ScalarField& field, const ModelSurface& surface,
                                NormKind kind, int order = 32) {
  QuadratureRule rule = full_surface_quadrature(surface, order);
  if (kind == NormKind::SupNorm) {
    double best = 0.0;
    for (const Point& p : rule.nodes) best = std::max(best, std::abs(field(p)));
    return best;
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    double v = field(rule.nodes[i]);
    acc += rule.weights[i] * v * v;
  }
  return std::sqrt(std::max(acc, 0.0));
}

// Max over random points of |partial - central difference of value|,
// componentwise; guards every downstream gradient computation.
inline double gradient_consistency_check(const EigenPair& pair,
                                         const ModelSurface& surface,
                                         int sample_count, unsigned seed = 7,
                                         double h = 1e-5) {
  if (sample_count < 1)
    throw std::invalid_argument("gradient_consistency_check: sample_count >= 1");
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double worst = 0.0;
  for (int s = 0; s < sample_count; ++s) {
    Point p;
    switch (surface.kind()) {
      case ModelSurface::Kind::FlatTorus:
        p = {surface.periods()[0] * unif(rng), surface.periods()[1] * unif(rng)};
        break;
      case ModelSurface::Kind::Sphere:
        p = {0.1 + (kPi - 0.2) * unif(rng), kTwoPi * unif(rng)};
        break;
      case ModelSurface::Kind::Revolution:
        p = {surface.profile().length * (0.1 + 0.8 * unif(rng)), kTwoPi * unif(rng)};
        break;
    }
    Vec2 d = pair.partial(p);
    double fd1 = (pair.value({p.x1 + h, p.x2}) - pair.value({p.x1 - h, p.x2})) / (2 * h);
    double fd2 = (pair.value({p.x1, p.x2 + h}) - pair.value({p.x1, p.x2 - h})) / (2 * h);
    worst = std::max({worst, std::abs(d[0] - fd1), std::abs(d[1] - fd2)});
  }
  return worst;
}

}  // namespace specgeo
