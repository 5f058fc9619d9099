// Eigenpairs of the Laplace-Beltrami operator: closed-form families on the
// torus and sphere, Sturm-Liouville families on surfaces of revolution.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <memory>
#include <random>
#include <stdexcept>

#include "specgeo/legendre.hpp"
#include "specgeo/region.hpp"
#include "specgeo/spline.hpp"
#include "specgeo/surface.hpp"

namespace specgeo {

struct Provenance {
  enum class Family { ClosedFormTorus, ClosedFormZonal, Revolution };
  Family family = Family::ClosedFormTorus;
  int k1 = 0, k2 = 0;      // torus frequency vector
  double w1 = 0.0, w2 = 0.0;  // chart frequencies 2 pi k_i / period_i
  double phase = 0.0;      // torus phase
  int l = 0;               // zonal degree
  double radius = 1.0;     // sphere radius
  int m = 0, j = 0;        // revolution angular mode / radial index
};

// Eigenvalue with chart evaluators: u, chart partial derivatives, and the
// chart Hessian (raw coordinate second partials, symmetric).
struct EigenPair {
  double lambda = 0.0;
  std::function<double(Point)> value;
  std::function<Vec2(Point)> partial;
  std::function<Mat2(Point)> hessian;
  Provenance provenance;

  // Contravariant gradient components g^{ij} d_j u.
  Vec2 grad(const ModelSurface& surface, Point p) const {
    Vec2 g = surface.metric_diag(p);
    Vec2 d = partial(p);
    return {d[0] / g[0], g[1] > 1e-300 ? d[1] / g[1] : 0.0};
  }
  // Riemannian |grad u| at p.
  double grad_norm(const ModelSurface& surface, Point p) const {
    return std::sqrt(surface.covector_norm_sq(p, partial(p)));
  }
};

inline EigenPair torus_eigenpair(const std::array<double, 2>& periods,
                                 std::array<int, 2> k, double phase = 0.0) {
  if (k[0] == 0 && k[1] == 0)
    throw std::invalid_argument("torus_eigenpair: zero frequency vector");
  double w1 = kTwoPi * k[0] / periods[0];
  double w2 = kTwoPi * k[1] / periods[1];
  EigenPair pair;
  pair.lambda = w1 * w1 + w2 * w2;
  pair.value = [=](Point p) { return std::sin(w1 * p.x1 + w2 * p.x2 + phase); };
  pair.partial = [=](Point p) -> Vec2 {
    double c = std::cos(w1 * p.x1 + w2 * p.x2 + phase);
    return {w1 * c, w2 * c};
  };
  pair.hessian = [=](Point p) -> Mat2 {
    double s = std::sin(w1 * p.x1 + w2 * p.x2 + phase);
    return {-w1 * w1 * s, -w1 * w2 * s, -w1 * w2 * s, -w2 * w2 * s};
  };
  pair.provenance.family = Provenance::Family::ClosedFormTorus;
  pair.provenance.k1 = k[0];
  pair.provenance.k2 = k[1];
  pair.provenance.w1 = w1;
  pair.provenance.w2 = w2;
  pair.provenance.phase = phase;
  return pair;
}

// Zonal harmonic u = P_l(cos theta), lambda = l(l+1)/R^2.
inline EigenPair sphere_zonal_eigenpair(double radius, int l) {
  if (l < 1)
    throw std::invalid_argument(
        "sphere_zonal_eigenpair: l >= 1 (constants excluded)");
  EigenPair pair;
  pair.lambda = static_cast<double>(l) * (l + 1) / (radius * radius);
  pair.value = [l](Point p) { return legendre_p(l, std::cos(p.x1)); };
  pair.partial = [l](Point p) -> Vec2 {
    double c = std::cos(p.x1), s = std::sin(p.x1);
    return {-s * legendre_dp(l, c), 0.0};
  };
  pair.hessian = [l](Point p) -> Mat2 {
    double c = std::cos(p.x1), s = std::sin(p.x1);
    double d2 = -c * legendre_dp(l, c) + s * s * legendre_d2p(l, c);
    return {d2, 0.0, 0.0, 0.0};
  };
  pair.provenance.family = Provenance::Family::ClosedFormZonal;
  pair.provenance.l = l;
  pair.provenance.radius = radius;
  return pair;
}

struct SturmLiouvilleSpec {
  ModelSurface surface;  // must be a surface of revolution
  int angular_mode = 0;
  int grid_size = 512;
};

// Separated mode u = cos(m phi) g(s); g from the radial Sturm-Liouville
// problem discretized by symmetric second-order finite differences on a
// cell-centered grid (zero-flux pole conditions arise naturally from
// rho -> 0 at the endpoints).
inline EigenPair revolution_eigenpair(const SturmLiouvilleSpec& spec, int j) {
  if (spec.surface.kind() != ModelSurface::Kind::Revolution)
    throw std::invalid_argument("revolution_eigenpair: surface must be Revolution");
  if (spec.grid_size < 64)
    throw std::invalid_argument("revolution_eigenpair: grid_size >= 64");
  if (j < 1) throw std::invalid_argument("revolution_eigenpair: j >= 1");
  if (j > spec.grid_size / 8)
    throw std::invalid_argument(
        "revolution_eigenpair: j too large for the grid (need j <= grid_size/8)");
  const auto& prof = spec.surface.profile();
  int n = spec.grid_size;
  int m = spec.angular_mode;
  double L = prof.length;
  double h = L / n;

  std::vector<double> rho_c(n), rho_f(n + 1);
  for (int i = 0; i < n; ++i) rho_c[i] = prof.rho((i + 0.5) * h);
  for (int i = 0; i <= n; ++i) rho_f[i] = prof.rho(i * h);
  for (int i = 0; i < n; ++i)
    if (rho_c[i] <= 0.0)
      throw std::invalid_argument("revolution_eigenpair: profile not positive");

  // Self-adjoint operator wrt weight rho: L g = -(rho g')'/rho + m^2 g/rho^2.
  // Symmetrize with D = diag(sqrt(rho_c)).
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    double diag = (rho_f[i] + rho_f[i + 1]) / (h * h * rho_c[i]) +
                  static_cast<double>(m) * m / (rho_c[i] * rho_c[i]);
    A(i, i) = diag;
    if (i + 1 < n) {
      double off = -rho_f[i + 1] / (h * h * std::sqrt(rho_c[i] * rho_c[i + 1]));
      A(i, i + 1) = off;
      A(i + 1, i) = off;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("revolution_eigenpair: eigensolve failed");

  // For m = 0 the first mode is the constant (lambda ~ 0); skip it.
  int index = (m == 0) ? j : j - 1;
  double lambda = solver.eigenvalues()(index);
  Eigen::VectorXd vec = solver.eigenvectors().col(index);

  // Undo the symmetrization and normalize sup |g| = 1.
  std::vector<double> g(n);
  double scale = 0.0;
  for (int i = 0; i < n; ++i) {
    g[i] = vec(i) / std::sqrt(rho_c[i]);
    scale = std::max(scale, std::abs(g[i]));
  }
  int imax = 0;
  for (int i = 0; i < n; ++i)
    if (std::abs(g[i]) > std::abs(g[imax])) imax = i;
  double sign = g[imax] > 0 ? 1.0 : -1.0;
  for (int i = 0; i < n; ++i) g[i] = sign * g[i] / scale;

  // Extend by symmetry across the poles for spline continuity:
  // even reflection for m = 0 (Neumann), odd for m >= 1 (Dirichlet).
  int pad = 3;
  std::vector<double> ext(n + 2 * pad);
  double refl = (m == 0) ? 1.0 : -1.0;
  for (int i = 0; i < n; ++i) ext[pad + i] = g[i];
  for (int i = 0; i < pad; ++i) {
    ext[pad - 1 - i] = refl * g[i];
    ext[n + pad + i] = refl * g[n - 1 - i];
  }
  auto spline = std::make_shared<CubicSpline>(0.5 * h - pad * h, h, std::move(ext));

  EigenPair pair;
  pair.lambda = lambda;
  double mm = m;
  pair.value = [spline, mm](Point p) {
    return spline->value(p.x1) * std::cos(mm * p.x2);
  };
  pair.partial = [spline, mm](Point p) -> Vec2 {
    return {spline->deriv(p.x1) * std::cos(mm * p.x2),
            -mm * spline->value(p.x1) * std::sin(mm * p.x2)};
  };
  pair.hessian = [spline, mm](Point p) -> Mat2 {
    double c = std::cos(mm * p.x2), s = std::sin(mm * p.x2);
    double d12 = -mm * spline->deriv(p.x1) * s;
    return {spline->deriv2(p.x1) * c, d12, d12, -mm * mm * spline->value(p.x1) * c};
  };
  pair.provenance.family = Provenance::Family::Revolution;
  pair.provenance.m = m;
  pair.provenance.j = j;
  return pair;
}

// ||Delta u + lambda u||_L2(M) / ||u||_L2(M), Laplacian by Richardson-
// extrapolated flux finite differences in the chart with metric terms.
inline double fd_laplacian(const EigenPair& pair, const ModelSurface& surface,
                           Point p, double h) {
  auto flux_div = [&](double hh) {
    double acc = 0.0;
    double sg = surface.sqrt_gamma(p);
    double u0 = pair.value(p);
    const std::array<Point, 2> dirs = {Point{1.0, 0.0}, Point{0.0, 1.0}};
    for (int d = 0; d < 2; ++d) {
      auto shift = [&](double t) {
        return Point{p.x1 + t * dirs[d].x1, p.x2 + t * dirs[d].x2};
      };
      auto coeff = [&](Point q) {
        Vec2 g = surface.metric_diag(q);
        return surface.sqrt_gamma(q) / g[d];
      };
      double ap = coeff(shift(0.5 * hh));
      double am = coeff(shift(-0.5 * hh));
      acc += (ap * (pair.value(shift(hh)) - u0) - am * (u0 - pair.value(shift(-hh)))) /
             (hh * hh);
    }
    return acc / sg;
  };
  double d1 = flux_div(h);
  double d2 = flux_div(0.5 * h);
  return (4.0 * d2 - d1) / 3.0;
}

inline double eigen_residual(const EigenPair& pair, const ModelSurface& surface,
                             int order = 16) {
  QuadratureRule rule = full_surface_quadrature(surface, order);
  double h = 1e-2 / std::sqrt(1.0 + pair.lambda);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    Point p = rule.nodes[i];
    // Keep finite-difference stencils away from chart singularities.
    if (surface.kind() != ModelSurface::Kind::FlatTorus) {
      double top = (surface.kind() == ModelSurface::Kind::Sphere)
                       ? kPi
                       : surface.profile().length;
      if (p.x1 < 4.0 * h || p.x1 > top - 4.0 * h) continue;
    }
    double u = pair.value(p);
    double r = fd_laplacian(pair, surface, p, h) + pair.lambda * u;
    num += rule.weights[i] * r * r;
    den += rule.weights[i] * u * u;
  }
  if (den <= 0.0) throw std::runtime_error("eigen_residual: u vanishes");
  return std::sqrt(num / den);
}

}  // namespace specgeo
