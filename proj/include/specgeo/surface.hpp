// Model analytic surfaces: flat tori, round spheres, surfaces of revolution.
// Charts, metrics, geodesic distance and polar quadrature over geodesic
// balls and annuli.
#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace specgeo {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Point {
  double x1 = 0.0;
  double x2 = 0.0;
};

using Vec2 = std::array<double, 2>;
// Symmetric 2x2, row-major: {a11, a12, a21, a22}.
using Mat2 = std::array<double, 4>;

inline double wrap_periodic(double x, double period) {
  double y = std::fmod(x, period);
  if (y < 0.0) y += period;
  return y;
}

// Signed difference a - b reduced to (-period/2, period/2].
inline double wrap_diff(double a, double b, double period) {
  double d = std::fmod(a - b, period);
  if (d > 0.5 * period) d -= period;
  if (d <= -0.5 * period) d += period;
  return d;
}

struct RevolutionProfile {
  // rho(s): distance to the axis, s arclength on [0, length].
  std::function<double(double)> rho;
  std::function<double(double)> drho;
  std::function<double(double)> ddrho;
  double length = 0.0;
};

// The sphere of radius R written as a surface of revolution, profile
// rho(s) = R sin(s/R) on [0, pi R].
inline RevolutionProfile sphere_profile(double radius = 1.0) {
  RevolutionProfile p;
  p.rho = [radius](double s) { return radius * std::sin(s / radius); };
  p.drho = [radius](double s) { return std::cos(s / radius); };
  p.ddrho = [radius](double s) { return -std::sin(s / radius) / radius; };
  p.length = kPi * radius;
  return p;
}

class ModelSurface {
 public:
  enum class Kind { FlatTorus, Sphere, Revolution };

  static ModelSurface flat_torus(double period1, double period2) {
    if (period1 <= 0.0 || period2 <= 0.0)
      throw std::invalid_argument("flat_torus: periods must be positive");
    ModelSurface s;
    s.kind_ = Kind::FlatTorus;
    s.periods_ = {period1, period2};
    return s;
  }

  static ModelSurface sphere(double radius) {
    if (radius <= 0.0)
      throw std::invalid_argument("sphere: radius must be positive");
    ModelSurface s;
    s.kind_ = Kind::Sphere;
    s.radius_ = radius;
    return s;
  }

  static ModelSurface revolution(RevolutionProfile profile) {
    if (profile.length <= 0.0)
      throw std::invalid_argument("revolution: profile length must be positive");
    ModelSurface s;
    s.kind_ = Kind::Revolution;
    s.profile_ = std::move(profile);
    return s;
  }

  Kind kind() const { return kind_; }
  const std::array<double, 2>& periods() const { return periods_; }
  double radius() const { return radius_; }
  const RevolutionProfile& profile() const { return profile_; }

  // Reduce chart coordinates to the canonical fundamental domain.
  Point canonical(Point p) const {
    switch (kind_) {
      case Kind::FlatTorus:
        return {wrap_periodic(p.x1, periods_[0]), wrap_periodic(p.x2, periods_[1])};
      case Kind::Sphere: {
        double th = wrap_periodic(p.x1, kTwoPi);
        double ph = p.x2;
        if (th > kPi) {
          th = kTwoPi - th;
          ph += kPi;
        }
        return {th, wrap_periodic(ph, kTwoPi)};
      }
      case Kind::Revolution: {
        double s = std::clamp(p.x1, 0.0, profile_.length);
        return {s, wrap_periodic(p.x2, kTwoPi)};
      }
    }
    return p;
  }

  // Diagonal metric components (g11, g22) in the chart.
  Vec2 metric_diag(Point p) const {
    switch (kind_) {
      case Kind::FlatTorus:
        return {1.0, 1.0};
      case Kind::Sphere: {
        double s = std::sin(p.x1);
        return {radius_ * radius_, radius_ * radius_ * s * s};
      }
      case Kind::Revolution: {
        double r = profile_.rho(p.x1);
        return {1.0, r * r};
      }
    }
    return {1.0, 1.0};
  }

  double sqrt_gamma(Point p) const {
    Vec2 g = metric_diag(p);
    return std::sqrt(g[0] * g[1]);
  }

  // Riemannian squared norm of a chart covector (partial derivatives).
  double covector_norm_sq(Point p, Vec2 partials) const {
    Vec2 g = metric_diag(p);
    double n = partials[0] * partials[0] / g[0];
    if (g[1] > 1e-300) n += partials[1] * partials[1] / g[1];
    return n;
  }

  double total_area() const {
    switch (kind_) {
      case Kind::FlatTorus:
        return periods_[0] * periods_[1];
      case Kind::Sphere:
        return 4.0 * kPi * radius_ * radius_;
      case Kind::Revolution: {
        // 2*pi * integral of rho over [0, L], Gauss-Legendre.
        double acc = 0.0;
        int n = 512;
        for (int i = 0; i < n; ++i) {
          double a = profile_.length * i / n;
          double b = profile_.length * (i + 1) / n;
          double m = 0.5 * (a + b), h = 0.5 * (b - a);
          const double x = 0.5773502691896257;
          acc += h * (profile_.rho(m - h * x) + profile_.rho(m + h * x));
        }
        return kTwoPi * acc;
      }
    }
    return 0.0;
  }

  // Closed-form (torus, sphere) or conservative (revolution) lower bound on
  // the injectivity radius; all region radii must stay below it.
  double injectivity_radius() const {
    switch (kind_) {
      case Kind::FlatTorus:
        return 0.5 * std::min(periods_[0], periods_[1]);
      case Kind::Sphere:
        return kPi * radius_;
      case Kind::Revolution: {
        double L = profile_.length;
        double min_rho = 1e300, max_k = 0.0;
        int n = 400;
        for (int i = 1; i < n; ++i) {
          double s = L * i / n;
          double r = profile_.rho(s);
          if (s >= 0.1 * L && s <= 0.9 * L) min_rho = std::min(min_rho, r);
          if (r > 1e-8) max_k = std::max(max_k, std::abs(-profile_.ddrho(s) / r));
        }
        double focal = max_k > 0.0 ? kPi / std::sqrt(max_k) : 1e300;
        return std::min({0.5 * L, kPi * min_rho, focal});
      }
    }
    return 0.0;
  }

  double geodesic_distance(Point p, Point q) const;

  // Exponential map from `center` at geodesic radius r in direction angle
  // psi; also returns the Jacobi field J(r) so that the area element in
  // geodesic polar coordinates is J dr dpsi.
  struct ExpResult {
    Point point;
    double jacobi = 0.0;
  };
  ExpResult exp_map(Point center, double r, double psi) const;

 private:
  Kind kind_ = Kind::FlatTorus;
  std::array<double, 2> periods_ = {kTwoPi, kTwoPi};
  double radius_ = 1.0;
  RevolutionProfile profile_;
};

namespace detail {

struct Vec3 {
  double x, y, z;
};
inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator*(double s, Vec3 a) { return {s * a.x, s * a.y, s * a.z}; }
inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
inline Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline Vec3 normalize(Vec3 a) {
  double n = std::sqrt(dot(a, a));
  return {a.x / n, a.y / n, a.z / n};
}

inline Vec3 sphere_chart_to_vec(Point p) {
  return {std::sin(p.x1) * std::cos(p.x2), std::sin(p.x1) * std::sin(p.x2),
          std::cos(p.x1)};
}

inline Point sphere_vec_to_chart(Vec3 v) {
  double th = std::acos(std::clamp(v.z, -1.0, 1.0));
  double ph = std::atan2(v.y, v.x);
  if (ph < 0.0) ph += kTwoPi;
  return {th, ph};
}

// Orthonormal tangent frame at a sphere chart point, deterministic at poles.
inline void sphere_frame(Point c, Vec3& n, Vec3& e1, Vec3& e2) {
  n = sphere_chart_to_vec(c);
  Vec3 zaxis{0.0, 0.0, 1.0};
  Vec3 t = cross(zaxis, n);
  if (dot(t, t) < 1e-24) t = {1.0, 0.0, 0.0};
  e1 = normalize(t);
  e2 = cross(n, e1);
}

// Geodesic + Jacobi-field integration on a surface of revolution.
// State: s, v = ds/dl, phi, J, J'. Clairaut constant c = rho(s0) sin(psi).
struct RevGeoState {
  double s, v, phi, J, dJ;
};

inline void rev_geo_derivs(const RevolutionProfile& prof, const RevGeoState& st,
                           double c, RevGeoState& d) {
  double rho = prof.rho(st.s);
  double rho3 = rho * rho * rho;
  double K = 0.0;
  if (rho > 1e-10) K = -prof.ddrho(st.s) / rho;
  d.s = st.v;
  d.v = rho > 1e-10 ? c * c * prof.drho(st.s) / rho3 : 0.0;
  d.phi = rho > 1e-10 ? c / (rho * rho) : 0.0;
  d.J = st.dJ;
  d.dJ = -K * st.J;
}

inline RevGeoState rev_geo_step(const RevolutionProfile& prof, RevGeoState st,
                                double c, double h) {
  auto add = [](RevGeoState a, double w, const RevGeoState& b) {
    a.s += w * b.s;
    a.v += w * b.v;
    a.phi += w * b.phi;
    a.J += w * b.J;
    a.dJ += w * b.dJ;
    return a;
  };
  RevGeoState k1, k2, k3, k4;
  rev_geo_derivs(prof, st, c, k1);
  rev_geo_derivs(prof, add(st, 0.5 * h, k1), c, k2);
  rev_geo_derivs(prof, add(st, 0.5 * h, k2), c, k3);
  rev_geo_derivs(prof, add(st, h, k3), c, k4);
  RevGeoState out = st;
  out = add(out, h / 6.0, k1);
  out = add(out, h / 3.0, k2);
  out = add(out, h / 3.0, k3);
  out = add(out, h / 6.0, k4);
  return out;
}

// Reflect through a pole (rho -> 0 endpoint) when the profile closes there.
inline void rev_geo_clamp(const RevolutionProfile& prof, RevGeoState& st) {
  if (st.s < 0.0) {
    if (prof.rho(0.0) < 1e-9) {
      st.s = -st.s;
      st.v = -st.v;
      st.phi += kPi;
    } else {
      st.s = 0.0;
    }
  } else if (st.s > prof.length) {
    if (prof.rho(prof.length) < 1e-9) {
      st.s = 2.0 * prof.length - st.s;
      st.v = -st.v;
      st.phi += kPi;
    } else {
      st.s = prof.length;
    }
  }
}

// Integrate the geodesic from (s0, phi0) with initial angle psi, sampling the
// state at the requested arclengths (must be increasing).
inline std::vector<RevGeoState> rev_geodesic(const RevolutionProfile& prof,
                                             Point start, double psi,
                                             const std::vector<double>& stops,
                                             double h = 1e-3) {
  double rho0 = prof.rho(start.x1);
  double c = rho0 * std::sin(psi);
  RevGeoState st{start.x1, std::cos(psi), start.x2, 0.0, 1.0};
  std::vector<RevGeoState> out;
  out.reserve(stops.size());
  double l = 0.0;
  for (double target : stops) {
    while (l < target - 1e-15) {
      double step = std::min(h, target - l);
      st = rev_geo_step(prof, st, c, step);
      rev_geo_clamp(prof, st);
      l += step;
    }
    out.push_back(st);
  }
  return out;
}

}  // namespace detail

inline ModelSurface::ExpResult ModelSurface::exp_map(Point center, double r,
                                                     double psi) const {
  switch (kind_) {
    case Kind::FlatTorus: {
      Point p{center.x1 + r * std::cos(psi), center.x2 + r * std::sin(psi)};
      return {canonical(p), r};
    }
    case Kind::Sphere: {
      detail::Vec3 n, e1, e2;
      detail::sphere_frame(center, n, e1, e2);
      double a = r / radius_;
      detail::Vec3 dir = std::cos(psi) * e1 + std::sin(psi) * e2;
      detail::Vec3 v = std::cos(a) * n + std::sin(a) * dir;
      return {detail::sphere_vec_to_chart(v), radius_ * std::sin(a)};
    }
    case Kind::Revolution: {
      auto states = detail::rev_geodesic(profile_, center, psi, {r});
      const auto& st = states.front();
      Point p{st.s, wrap_periodic(st.phi, kTwoPi)};
      return {p, std::max(st.J, 0.0)};
    }
  }
  return {};
}

inline double ModelSurface::geodesic_distance(Point p, Point q) const {
  switch (kind_) {
    case Kind::FlatTorus: {
      double d1 = wrap_diff(p.x1, q.x1, periods_[0]);
      double d2 = wrap_diff(p.x2, q.x2, periods_[1]);
      return std::sqrt(d1 * d1 + d2 * d2);
    }
    case Kind::Sphere: {
      detail::Vec3 a = detail::sphere_chart_to_vec(p);
      detail::Vec3 b = detail::sphere_chart_to_vec(q);
      return radius_ * std::acos(std::clamp(detail::dot(a, b), -1.0, 1.0));
    }
    case Kind::Revolution: {
      // Shooting on the initial angle; miss distance measured in the chart
      // metric at q, refined by golden section.
      p = canonical(p);
      q = canonical(q);
      double dphi0 = wrap_diff(q.x2, p.x2, kTwoPi);
      if (std::abs(dphi0) < 1e-12) {
        double direct = std::abs(q.x1 - p.x1);
        // A meridian is a geodesic; for nearby points it is minimizing.
        if (direct < 0.4 * injectivity_radius()) return direct;
      }
      // Search horizon: must cover the diameter, bounded by the profile
      // length plus half the largest parallel circle.
      double max_rho = 0.0;
      for (int i = 0; i <= 200; ++i)
        max_rho = std::max(max_rho, profile_.rho(profile_.length * i / 200));
      double lmax = 1.2 * (profile_.length + kPi * max_rho);
      int nsteps = 800;
      std::vector<double> stops(nsteps);
      for (int i = 0; i < nsteps; ++i) stops[i] = lmax * (i + 1) / nsteps;
      Vec2 gq = metric_diag(q);
      auto closest = [&](double psi, double& at_len) {
        auto tr = detail::rev_geodesic(profile_, p, psi, stops, lmax / 4000.0);
        std::vector<double> miss(nsteps);
        double best = 1e300;
        for (int i = 0; i < nsteps; ++i) {
          double ds = tr[i].s - q.x1;
          double dp = wrap_diff(tr[i].phi, q.x2, kTwoPi);
          miss[i] = std::sqrt(gq[0] * ds * ds + gq[1] * dp * dp);
          best = std::min(best, miss[i]);
        }
        // A closed geodesic can pass near q more than once; take the
        // earliest near-minimal approach, not the absolute minimum.
        at_len = stops[nsteps - 1];
        for (int i = 0; i < nsteps; ++i)
          if (miss[i] <= best + lmax / nsteps) {
            at_len = stops[i];
            break;
          }
        return best;
      };
      // Coarse scan over the shooting angle.
      int ncoarse = 64;
      double best_psi = 0.0, best_miss = 1e300;
      for (int i = 0; i < ncoarse; ++i) {
        double psi = kTwoPi * i / ncoarse;
        double at;
        double m = closest(psi, at);
        if (m < best_miss) {
          best_miss = m;
          best_psi = psi;
        }
      }
      // Golden-section refinement around the best angle.
      double a = best_psi - kTwoPi / ncoarse, b = best_psi + kTwoPi / ncoarse;
      const double gr = 0.6180339887498949;
      double x1 = b - gr * (b - a), x2 = a + gr * (b - a), at1, at2;
      double f1 = closest(x1, at1), f2 = closest(x2, at2);
      for (int it = 0; it < 48; ++it) {
        if (f1 < f2) {
          b = x2;
          x2 = x1;
          f2 = f1;
          at2 = at1;
          x1 = b - gr * (b - a);
          f1 = closest(x1, at1);
        } else {
          a = x1;
          x1 = x2;
          f1 = f2;
          at1 = at2;
          x2 = a + gr * (b - a);
          f2 = closest(x2, at2);
        }
      }
      double psi = f1 < f2 ? x1 : x2;
      double len_hint = f1 < f2 ? at1 : at2;
      // Polish the arclength along the chosen direction.
      double lo = std::max(0.0, len_hint - 2.0 * lmax / nsteps);
      double hi = std::min(lmax, len_hint + 2.0 * lmax / nsteps);
      auto miss_at = [&](double l) {
        auto tr = detail::rev_geodesic(profile_, p, psi, {l}, lmax / 4000.0);
        double ds = tr[0].s - q.x1;
        double dp = wrap_diff(tr[0].phi, q.x2, kTwoPi);
        return gq[0] * ds * ds + gq[1] * dp * dp;
      };
      double la = hi - gr * (hi - lo), lb = lo + gr * (hi - lo);
      double fa = miss_at(la), fb = miss_at(lb);
      for (int it = 0; it < 60; ++it) {
        if (fa < fb) {
          hi = lb;
          lb = la;
          fb = fa;
          la = hi - gr * (hi - lo);
          fa = miss_at(la);
        } else {
          lo = la;
          la = lb;
          fa = fb;
          lb = lo + gr * (hi - lo);
          fb = miss_at(lb);
        }
      }
      return 0.5 * (lo + hi);
    }
  }
  return 0.0;
}

}  // namespace specgeo
