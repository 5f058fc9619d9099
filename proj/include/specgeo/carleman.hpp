// Carleman weight family f(t) = t - e^{eps t}, phi = -f(ln r), and the
// numerical harness for the weighted inequalities on compactly supported
// test functions. All weighted norms are computed in log space.
#pragma once

#include <cmath>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "specgeo/logspace.hpp"
#include "specgeo/region.hpp"
#include "specgeo/surface.hpp"

namespace specgeo {

struct WeightParams {
  double epsilon = 0.5;  // in (0,1)
  double T0 = -0.5;      // negative

  WeightParams() = default;
  WeightParams(double eps, double t0) : epsilon(eps), T0(t0) {
    if (!(eps > 0.0 && eps < 1.0))
      throw std::invalid_argument("WeightParams: epsilon in (0,1)");
    if (!(t0 < 0.0)) throw std::invalid_argument("WeightParams: T0 < 0");
  }

  double f(double t) const { return t - std::exp(epsilon * t); }
  double fp(double t) const { return 1.0 - epsilon * std::exp(epsilon * t); }
  double fpp(double t) const {
    return -epsilon * epsilon * std::exp(epsilon * t);
  }
  // phi(r) = -f(ln r) = -ln r + r^eps.
  double phi(double r) const {
    if (r <= 0.0) throw std::invalid_argument("phi: r > 0 required");
    return -std::log(r) + std::pow(r, epsilon);
  }
  double max_radius() const { return std::exp(T0); }
};

// Default parameters for a surface: eps = 1/2 and T0 tied to the injectivity
// bound, clamped negative so the weight domain is nonempty.
inline WeightParams default_weight_params(const ModelSurface& surface) {
  double r0 = surface.injectivity_radius();
  return WeightParams(0.5, std::min(std::log(r0), -0.5));
}

struct WeightEval {
  double f, fp, fpp, phi;
};

inline WeightEval weight_eval_t(const WeightParams& params, double t) {
  if (t > params.T0)
    throw std::invalid_argument("weight_eval: t must be <= T0");
  return {params.f(t), params.fp(t), params.fpp(t), -params.f(t)};
}

inline WeightEval weight_eval_r(const WeightParams& params, double r) {
  if (r <= 0.0) throw std::invalid_argument("weight_eval: r > 0 required");
  return weight_eval_t(params, std::log(r));
}

struct AdmissibilityReport {
  bool fp_bounds_hold = false;
  bool divergence_holds = false;
  double fp_min = 0.0, fp_max = 0.0;
  double left_end_value = 0.0;  // -e^{-t} f''(t) at the left end of the grid
  bool ok() const { return fp_bounds_hold && divergence_holds; }
};

// Verifies conditions: 1 - eps e^{eps T0} <= f' <= 1 on the grid, and
// -e^{-t} f'' strictly increasing toward -infinity, exceeding 1e3 at the
// left end when the grid reaches far enough.
inline AdmissibilityReport check_weight_admissibility(
    const WeightParams& params, const std::vector<double>& t_grid) {
  if (t_grid.size() < 100)
    throw std::invalid_argument("check_weight_admissibility: need >= 100 points");
  for (double t : t_grid)
    if (t > params.T0)
      throw std::invalid_argument("check_weight_admissibility: grid outside (-inf, T0]");
  std::vector<double> ts = t_grid;
  std::sort(ts.begin(), ts.end());
  AdmissibilityReport rep;
  double lower = 1.0 - params.epsilon * std::exp(params.epsilon * params.T0);
  rep.fp_min = 1e300;
  rep.fp_max = -1e300;
  bool monotone = true;
  double prev = -1e300;
  for (std::size_t i = ts.size(); i-- > 0;) {
    // walk right-to-left: -e^{-t} f'' must increase as t decreases
    double t = ts[i];
    double fp = params.fp(t);
    rep.fp_min = std::min(rep.fp_min, fp);
    rep.fp_max = std::max(rep.fp_max, fp);
    // -e^{-t} f'' = eps^2 e^{(eps-1)t}, evaluated directly so deep grids do
    // not hit inf * 0.
    double d = params.epsilon * params.epsilon *
               std::exp((params.epsilon - 1.0) * t);
    if (d <= prev) monotone = false;
    prev = d;
  }
  rep.left_end_value = params.epsilon * params.epsilon *
                       std::exp((params.epsilon - 1.0) * ts.front());
  rep.fp_bounds_hold = rep.fp_min >= lower - 1e-12 && rep.fp_max <= 1.0 + 1e-12;
  rep.divergence_holds = monotone && rep.left_end_value > 1e3;
  return rep;
}

// Smooth compactly supported test function on a flat chart around a center:
// u(r, psi) = bump(r) * poly(r) * (A cos(m psi) + B sin(m psi)), with all
// derivatives in closed form.
class TestFunction {
 public:
  TestFunction(unsigned seed, const Region& support, int angular_mode,
               int radial_degree)
      : center_(support.center), m_(angular_mode) {
    if (radial_degree < 0)
      throw std::invalid_argument("TestFunction: radial_degree >= 0");
    if (support.kind == Region::Kind::Annulus) {
      a_ = support.inner;
      b_ = support.outer;
    } else {
      a_ = support.outer / 8.0;
      b_ = support.outer;
    }
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    coeffs_.resize(radial_degree + 1);
    for (double& c : coeffs_) c = unif(rng);
    // Avoid the all-tiny degenerate draw.
    coeffs_[0] += (coeffs_[0] >= 0.0 ? 1.0 : -1.0);
    A_ = unif(rng);
    B_ = unif(rng);
  }

  double inner() const { return a_; }
  double outer() const { return b_; }
  int angular_mode() const { return m_; }
  Point center() const { return center_; }

  struct PolarEval {
    double u, ur, urr, upsi_over_r, lap;  // lap = flat chart Laplacian
    double grad_sq() const { return ur * ur + upsi_over_r * upsi_over_r; }
  };

  PolarEval eval(double r, double psi) const {
    if (r <= a_ || r >= b_) return {0.0, 0.0, 0.0, 0.0, 0.0};
    double w = b_ - a_;
    double x = (r - a_) / w;
    double chi, dchi, d2chi;
    bump(x, chi, dchi, d2chi);
    dchi /= w;
    d2chi /= w * w;
    double p = 0.0, dp = 0.0, d2p = 0.0;
    for (std::size_t k = coeffs_.size(); k-- > 0;) {
      d2p = d2p * x + 2.0 * dp;
      dp = dp * x + p;
      p = p * x + coeffs_[k];
    }
    dp /= w;
    d2p /= w * w;
    double T = A_ * std::cos(m_ * psi) + B_ * std::sin(m_ * psi);
    double rad = chi * p;
    double drad = dchi * p + chi * dp;
    double d2rad = d2chi * p + 2.0 * dchi * dp + chi * d2p;
    PolarEval e;
    e.u = rad * T;
    e.ur = drad * T;
    e.urr = d2rad * T;
    double Tp = m_ * (-A_ * std::sin(m_ * psi) + B_ * std::cos(m_ * psi));
    e.upsi_over_r = rad * Tp / r;
    e.lap = (d2rad + drad / r - m_ * m_ * rad / (r * r)) * T;
    return e;
  }

  // Chart-point evaluation (flat torus chart around the center).
  double value_at(const ModelSurface& surface, Point p) const {
    auto [r, psi] = polar_of(surface, p);
    return eval(r, psi).u;
  }
  double laplacian_at(const ModelSurface& surface, Point p) const {
    auto [r, psi] = polar_of(surface, p);
    return eval(r, psi).lap;
  }

  std::pair<double, double> polar_of(const ModelSurface& surface, Point p) const {
    double d1 = wrap_diff(p.x1, center_.x1, surface.periods()[0]);
    double d2 = wrap_diff(p.x2, center_.x2, surface.periods()[1]);
    return {std::sqrt(d1 * d1 + d2 * d2), std::atan2(d2, d1)};
  }

 private:
  static void bump(double x, double& chi, double& dchi, double& d2chi) {
    auto s = [](double y) { return std::exp(-1.0 / y); };
    double s1 = s(x), s2 = s(1.0 - x);
    double ds1 = s1 / (x * x);
    double ds2 = -s2 / ((1.0 - x) * (1.0 - x));
    double d2s1 = s1 * (1.0 / (x * x * x * x) - 2.0 / (x * x * x));
    double d2s2 = s2 * (1.0 / std::pow(1.0 - x, 4) - 2.0 / std::pow(1.0 - x, 3));
    chi = s1 * s2;
    dchi = ds1 * s2 + s1 * ds2;
    d2chi = d2s1 * s2 + 2.0 * ds1 * ds2 + s1 * d2s2;
  }

  Point center_;
  double a_ = 0.0, b_ = 0.0;
  int m_ = 0;
  double A_ = 1.0, B_ = 0.0;
  std::vector<double> coeffs_;
};

inline TestFunction make_test_function(unsigned seed, const Region& support,
                                       int angular_mode, int radial_degree) {
  return TestFunction(seed, support, angular_mode, radial_degree);
}

// Potential W: the eigenvalue case (constant lambda) or the perturbed
// family W = lambda (1 + 0.1 sin x1) with closed-form C1 norm.
struct CarlemanPotential {
  double lambda = 1.0;
  bool perturbed = false;

  double value(Point chart_point) const {
    return perturbed ? lambda * (1.0 + 0.1 * std::sin(chart_point.x1)) : lambda;
  }
  double c1_norm() const { return perturbed ? 1.2 * lambda : lambda; }
};

inline double tau_min_for(const CarlemanPotential& W) {
  return 2.0 * std::sqrt(W.c1_norm()) + 10.0;
}

// Both sides of the weighted inequality, stored as log-norms.
struct CarlemanSides {
  double tau = 0.0;
  double delta = 0.0;  // inner support radius
  double log_lhs = kNegInf;        // log ||r^2 e^{tau phi}(Delta u + W u)||
  double log_u_term = kNegInf;     // log ||r^{eps/2} e^{tau phi} u||
  double log_grad_term = kNegInf;  // log ||r^{1+eps/2} e^{tau phi} grad u||
  double log_rinv_term = kNegInf;  // log ||r^{-1} e^{tau phi} u||
  bool include_delta_term = false;
  bool below_tau_threshold = false;

  double log_rhs_total() const {
    LogSumExp acc;
    acc.add(1.5 * std::log(tau) + log_u_term);
    acc.add(0.5 * std::log(tau) + log_grad_term);
    if (include_delta_term)
      acc.add(std::log(tau) + std::log(delta) + log_rinv_term);
    return acc.value();
  }
  double ratio() const { return std::exp(log_rhs_total() - log_lhs); }
};

namespace detail {

// Cached radial x angular node table over the support annulus, with the
// radial variable t = ln r (Gauss-Legendre in t).
struct CarlemanNodes {
  std::vector<double> t, logw;  // per node: t = ln r, log of dV weight
  std::vector<double> u, grad_sq, lap;
  std::vector<Point> chart;  // chart location, for evaluating W
};

inline CarlemanNodes carleman_nodes(const TestFunction& u,
                                    const ModelSurface& surface, int order) {
  int nr = 6 * order, na = 2 * order;
  std::vector<double> gx, gw;
  gauss_legendre(nr, gx, gw);
  double ta = std::log(u.inner()), tb = std::log(u.outer());
  double mid = 0.5 * (ta + tb), half = 0.5 * (tb - ta);
  double wpsi = kTwoPi / na;
  CarlemanNodes nodes;
  std::size_t total = static_cast<std::size_t>(nr) * na;
  nodes.t.reserve(total);
  nodes.logw.reserve(total);
  nodes.u.reserve(total);
  nodes.grad_sq.reserve(total);
  nodes.lap.reserve(total);
  nodes.chart.reserve(total);
  for (int i = 0; i < nr; ++i) {
    double t = mid + half * gx[i];
    double r = std::exp(t);
    double logw = std::log(half * gw[i] * wpsi) + 2.0 * t;  // dV = e^{2t} dt dpsi
    for (int j = 0; j < na; ++j) {
      double psi = kTwoPi * j / na;
      auto e = u.eval(r, psi);
      nodes.t.push_back(t);
      nodes.logw.push_back(logw);
      nodes.u.push_back(e.u);
      nodes.grad_sq.push_back(e.grad_sq());
      nodes.lap.push_back(e.lap);
      Point c = u.center();
      nodes.chart.push_back(surface.canonical(
          {c.x1 + r * std::cos(psi), c.x2 + r * std::sin(psi)}));
    }
  }
  return nodes;
}

// log ||r^s e^{tau phi} X||: values_sq holds X^2 per node.
inline double log_weighted_norm(const CarlemanNodes& nodes,
                                const std::vector<double>& values_sq,
                                double s, double tau, const WeightParams& params) {
  LogSumExp acc;
  for (std::size_t i = 0; i < nodes.t.size(); ++i) {
    if (values_sq[i] <= 0.0) continue;
    double t = nodes.t[i];
    double phi = -params.f(t);
    acc.add(nodes.logw[i] + 2.0 * (s * t + tau * phi) + std::log(values_sq[i]));
  }
  return 0.5 * acc.value();
}

inline CarlemanSides sides_from_nodes(const CarlemanNodes& nodes,
                                      const TestFunction& u,
                                      const CarlemanPotential& W, double tau,
                                      const WeightParams& params,
                                      bool include_delta) {
  std::size_t n = nodes.t.size();
  std::vector<double> res_sq(n), u_sq(n);
  bool degenerate = true;
  for (std::size_t i = 0; i < n; ++i) {
    double res = nodes.lap[i] + W.value(nodes.chart[i]) * nodes.u[i];
    res_sq[i] = res * res;
    u_sq[i] = nodes.u[i] * nodes.u[i];
    if (u_sq[i] > 1e-300) degenerate = false;
  }
  if (degenerate)
    throw std::invalid_argument("carleman_sides: degenerate test function");
  CarlemanSides out;
  out.tau = tau;
  out.delta = u.inner();
  out.include_delta_term = include_delta;
  out.below_tau_threshold = tau < tau_min_for(W);
  out.log_lhs = log_weighted_norm(nodes, res_sq, 2.0, tau, params);
  out.log_u_term = log_weighted_norm(nodes, u_sq, 0.5 * params.epsilon, tau, params);
  out.log_grad_term =
      log_weighted_norm(nodes, nodes.grad_sq, 1.0 + 0.5 * params.epsilon, tau, params);
  if (include_delta)
    out.log_rinv_term = log_weighted_norm(nodes, u_sq, -1.0, tau, params);
  return out;
}

}  // namespace detail

inline CarlemanSides carleman_sides(const TestFunction& u,
                                    const CarlemanPotential& W, double tau,
                                    const WeightParams& params,
                                    const ModelSurface& surface, int order = 32,
                                    bool include_delta = false) {
  if (surface.kind() != ModelSurface::Kind::FlatTorus)
    throw std::invalid_argument("carleman_sides: flat chart (torus) required");
  if (u.outer() > params.max_radius() + 1e-12)
    throw std::invalid_argument("carleman_sides: support exceeds e^{T0}");
  if (tau < 1.0) throw std::invalid_argument("carleman_sides: tau >= 1");
  auto nodes = detail::carleman_nodes(u, surface, order);
  return detail::sides_from_nodes(nodes, u, W, tau, params, include_delta);
}

// Vector analog: componentwise application and summed squared norms.
inline CarlemanSides vector_carleman_sides(const TestFunction& u1,
                                           const TestFunction& u2, double lambda,
                                           double tau, const WeightParams& params,
                                           const ModelSurface& surface,
                                           int order = 32,
                                           bool include_delta = false) {
  CarlemanPotential W{lambda, false};
  auto combine = [](double la, double lb) {
    LogSumExp acc;
    acc.add(2.0 * la);
    acc.add(2.0 * lb);
    return 0.5 * acc.value();
  };
  std::optional<CarlemanSides> s1, s2;
  try {
    s1 = carleman_sides(u1, W, tau, params, surface, order, include_delta);
  } catch (const std::invalid_argument&) {
  }
  try {
    s2 = carleman_sides(u2, W, tau, params, surface, order, include_delta);
  } catch (const std::invalid_argument&) {
  }
  if (!s1 && !s2)
    throw std::invalid_argument("vector_carleman_sides: degenerate test function");
  if (!s1) return *s2;
  if (!s2) return *s1;
  CarlemanSides out = *s1;
  out.log_lhs = combine(s1->log_lhs, s2->log_lhs);
  out.log_u_term = combine(s1->log_u_term, s2->log_u_term);
  out.log_grad_term = combine(s1->log_grad_term, s2->log_grad_term);
  if (include_delta) out.log_rinv_term = combine(s1->log_rinv_term, s2->log_rinv_term);
  out.delta = std::min(u1.inner(), u2.inner());
  return out;
}

struct CalibrationResult {
  double c_star = 0.0;
  int argmax_sample = -1;
  double argmax_tau = 0.0;
  CarlemanPotential argmax_potential;
  // (sample index, tau) cells where the evaluation failed outright.
  std::vector<std::pair<int, double>> failures;
};

// C* = max over samples, potentials and tau of rhs_total / lhs; the estimate
// asserts this is finite uniformly, and the harness reports the witness.
inline CalibrationResult calibrate_carleman_constant(
    const std::vector<TestFunction>& samples,
    const std::vector<CarlemanPotential>& potentials,
    const std::vector<double>& tau_grid, const WeightParams& params,
    const ModelSurface& surface, int order = 32, bool include_delta = false) {
  if (samples.size() < 1)
    throw std::invalid_argument("calibrate_carleman_constant: no samples");
  CalibrationResult out;
  int degenerate_count = 0;
  for (int si = 0; si < static_cast<int>(samples.size()); ++si) {
    detail::CarlemanNodes nodes;
    try {
      nodes = detail::carleman_nodes(samples[si], surface, order);
    } catch (const std::exception&) {
      ++degenerate_count;
      continue;
    }
    for (const auto& W : potentials) {
      for (double tau : tau_grid) {
        if (tau < tau_min_for(W)) continue;
        CarlemanSides sides;
        try {
          sides = detail::sides_from_nodes(nodes, samples[si], W, tau, params,
                                           include_delta);
        } catch (const std::invalid_argument&) {
          ++degenerate_count;
          goto next_sample;
        }
        if (!std::isfinite(sides.log_lhs)) {
          out.failures.emplace_back(si, tau);
          continue;
        }
        double ratio = sides.ratio();
        if (ratio > out.c_star) {
          out.c_star = ratio;
          out.argmax_sample = si;
          out.argmax_tau = tau;
          out.argmax_potential = W;
        }
      }
    }
  next_sample:;
  }
  if (degenerate_count == static_cast<int>(samples.size()))
    throw std::invalid_argument("calibrate_carleman_constant: all samples degenerate");
  return out;
}

}  // namespace specgeo
