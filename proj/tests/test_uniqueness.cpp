#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "specgeo/uniqueness.hpp"

using namespace specgeo;
using Catch::Approx;

namespace {

const std::array<double, 2> kPeriods = {kTwoPi, kTwoPi};

// Probe field with |grad u| identically 1 on the flat torus: norms over balls
// scale exactly like the radius, giving closed-form doubling and three-sphere
// quantities.
EigenPair constant_gradient_probe() {
  EigenPair pair;
  pair.lambda = 4.0;
  pair.value = [](Point p) { return p.x1; };
  pair.partial = [](Point) -> Vec2 { return {1.0, 0.0}; };
  pair.hessian = [](Point) -> Mat2 { return {0.0, 0.0, 0.0, 0.0}; };
  return pair;
}

EigenPair scaled(const EigenPair& pair, double c) {
  EigenPair out = pair;
  auto v = pair.value;
  auto d = pair.partial;
  auto h = pair.hessian;
  out.value = [v, c](Point p) { return c * v(p); };
  out.partial = [d, c](Point p) -> Vec2 {
    Vec2 g = d(p);
    return {c * g[0], c * g[1]};
  };
  out.hessian = [h, c](Point p) -> Mat2 {
    Mat2 m = h(p);
    return {c * m[0], c * m[1], c * m[2], c * m[3]};
  };
  return out;
}

}  // namespace

TEST_CASE("alpha weights closed forms") {
  WeightParams params(0.5, -0.5);
  auto w = alpha_from_weight(params, 0.1);
  double A = std::log(4.0) - (std::sqrt(0.1) - std::sqrt(0.025));
  double B = std::log(1.5) - (std::sqrt(0.15) - std::sqrt(0.1));
  CHECK(w.A_R == Approx(A).margin(1e-14));
  CHECK(w.B_R == Approx(B).margin(1e-14));
  CHECK(w.A_R == Approx(1.2282).margin(5e-4));
  CHECK(w.B_R == Approx(0.3344).margin(5e-4));
  CHECK(w.alpha == Approx(0.786).margin(5e-3));

  // epsilon -> 0: the power corrections vanish, alpha -> ln4 / ln6.
  WeightParams tiny(1e-7, -0.5);
  auto w0 = alpha_from_weight(tiny, 0.1);
  CHECK(w0.alpha == Approx(std::log(4.0) / std::log(6.0)).margin(1e-5));

  for (double R = 0.01; R <= 0.4; R += 0.01) {
    auto wr = alpha_from_weight(params, R);
    CHECK(wr.A_R > 0.0);
    CHECK(wr.B_R > 0.0);
    CHECK(wr.alpha > 0.0);
    CHECK(wr.alpha < 1.0);
  }
  CHECK_THROWS_AS(alpha_from_weight(params, 0.5), std::invalid_argument);
  CHECK_THROWS_AS(alpha_from_weight(params, -0.1), std::invalid_argument);
}

TEST_CASE("three-sphere check on the constant-gradient probe") {
  auto torus = ModelSurface::flat_torus(kTwoPi, kTwoPi);
  WeightParams params(0.5, -0.5);
  auto probe = constant_gradient_probe();
  double R = 0.2;
  auto rep = three_sphere_check(probe, torus, {2.0, 3.0}, R, params, 24);
  // Norms scale like the radius, so required_c * sqrt(lambda) = (2a-1) ln2.
  double expected = (2.0 * rep.alpha - 1.0) * std::log(2.0);
  CHECK(rep.required_c * std::sqrt(probe.lambda) ==
        Approx(expected).margin(1e-10));
  CHECK(rep.required_c_swapped * std::sqrt(probe.lambda) ==
        Approx(-expected).margin(1e-10));
  CHECK(rep.norm_R == Approx(std::sqrt(kPi) * R).margin(1e-10));
}

TEST_CASE("three-sphere check is refinement-stable and scale-invariant") {
  auto torus = ModelSurface::flat_torus(kTwoPi, kTwoPi);
  WeightParams params(0.5, -0.5);
  auto pair = torus_eigenpair(kPeriods, {5, 0});
  auto a = three_sphere_check(pair, torus, {0.0, 0.0}, 0.2, params, 32);
  auto b = three_sphere_check(pair, torus, {0.0, 0.0}, 0.2, params, 64);
  CHECK(a.required_c == Approx(b.required_c).margin(1e-4));

  auto big = scaled(pair, 10.0);
  big.lambda = pair.lambda;
  auto c = three_sphere_check(big, torus, {0.0, 0.0}, 0.2, params, 32);
  CHECK(c.required_c == Approx(a.required_c).margin(1e-12));

  CHECK_THROWS_AS(three_sphere_check(pair, torus, {0, 0}, 2.0, params, 16),
                  std::invalid_argument);
}

TEST_CASE("doubling index closed form and properties") {
  auto torus = ModelSurface::flat_torus(kTwoPi, kTwoPi);
  auto probe = constant_gradient_probe();
  auto rep = doubling_index(probe, torus, {1.0, 1.0}, 0.1, NormKind::L2, 24);
  CHECK(rep.index == Approx(std::log(2.0)).margin(1e-10));

  auto pair = torus_eigenpair(kPeriods, {1, 0});
  double i32 = doubling_index(pair, torus, {0.5 * kPi, 0.0}, 0.3, NormKind::L2, 32).index;
  double i64 = doubling_index(pair, torus, {0.5 * kPi, 0.0}, 0.3, NormKind::L2, 64).index;
  CHECK(i32 == Approx(i64).margin(1e-4));

  double isup =
      doubling_index(pair, torus, {0.5 * kPi, 0.0}, 0.3, NormKind::SupNorm, 32).index;
  CHECK(isup >= 0.0);

  // region monotonicity: the index never goes (numerically) negative
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> unif(0.0, kTwoPi);
  auto pair2 = torus_eigenpair(kPeriods, {3, 2});
  for (int i = 0; i < 10; ++i) {
    Point c{unif(rng), unif(rng)};
    CHECK(doubling_index(pair2, torus, c, 0.25, NormKind::L2, 24).index >= -1e-8);
  }

  CHECK_THROWS_AS(doubling_index(pair, torus, {0, 0}, 2.0, NormKind::L2, 16),
                  std::invalid_argument);
}

TEST_CASE("doubling sweep is a deterministic order-independent max") {
  auto torus = ModelSurface::flat_torus(kTwoPi, kTwoPi);
  auto pair = torus_eigenpair(kPeriods, {2, 1});
  std::vector<Point> centers = {{0.3, 1.0}, {2.0, 0.4}, {1.1, 5.0}};
  std::vector<double> radii = {0.1, 0.2, 0.4};

  auto single = doubling_sweep(pair, torus, {centers[0]}, {0.2}, NormKind::L2, 16);
  auto direct = doubling_index(pair, torus, centers[0], 0.2, NormKind::L2, 16);
  CHECK(single.max_index == Approx(direct.index).margin(1e-15));

  auto fwd = doubling_sweep(pair, torus, centers, radii, NormKind::L2, 16);
  std::vector<Point> rev_c(centers.rbegin(), centers.rend());
  std::vector<double> rev_r(radii.rbegin(), radii.rend());
  auto bwd = doubling_sweep(pair, torus, rev_c, rev_r, NormKind::L2, 16);
  CHECK(fwd.max_index == bwd.max_index);
  CHECK(fwd.argmax.center.x1 == bwd.argmax.center.x1);
  CHECK(fwd.argmax.r == bwd.argmax.r);

  CHECK_THROWS_AS(doubling_sweep(pair, torus, {}, radii, NormKind::L2, 16),
                  std::invalid_argument);
}

TEST_CASE("global lower bound on gradient norms") {
  auto torus = ModelSurface::flat_torus(kTwoPi, kTwoPi);
  // A ball of radius 1 contains full periods of cos^2(4 x1): the local/global
  // ratio is approximately the square root of the area fraction.
  auto pair = torus_eigenpair(kPeriods, {4, 0});
  auto centers = low_discrepancy_centers(torus, 20, 1);
  double ratio = global_lower_bound_check(pair, torus, 1.0, centers, 24);
  CHECK(ratio == Approx(std::sqrt(1.0 / (4.0 * kPi))).epsilon(0.05));

  auto sph = ModelSurface::sphere(1.0);
  auto zonal = sphere_zonal_eigenpair(1.0, 2);
  auto sc = low_discrepancy_centers(sph, 50, 2);
  CHECK(global_lower_bound_check(zonal, sph, 1.0, sc, 24) > 0.0);

  // homogeneity
  auto big = scaled(pair, 3.0);
  big.lambda = pair.lambda;
  CHECK(global_lower_bound_check(big, torus, 1.0, centers, 24) ==
        Approx(ratio).margin(1e-12));

  CHECK_THROWS_AS(global_lower_bound_check(pair, torus, 1.0, {}, 16),
                  std::invalid_argument);
}

TEST_CASE("annulus lower bound") {
  auto torus = ModelSurface::flat_torus(kTwoPi, kTwoPi);
  auto pair = torus_eigenpair(kPeriods, {1, 0});
  double a32 = annulus_lower_bound_check(pair, torus, 1.0, {0.0, 0.0}, 32);
  double a64 = annulus_lower_bound_check(pair, torus, 1.0, {0.0, 0.0}, 64);
  CHECK(a32 == Approx(a64).margin(1e-4));

  ScalarField f = grad_magnitude_field(pair, torus);
  double ring = norm_over_region(f, torus, Region::annulus({0, 0}, 0.125, 0.25),
                                 NormKind::L2, 32);
  double ball =
      norm_over_region(f, torus, Region::ball({0, 0}, 0.25), NormKind::L2, 32);
  CHECK(ring <= ball + 1e-12);

  auto big = scaled(pair, 2.0);
  big.lambda = pair.lambda;
  CHECK(annulus_lower_bound_check(big, torus, 1.0, {0.0, 0.0}, 32) ==
        Approx(a32).margin(1e-12));
}

TEST_CASE("elliptic gradient estimate") {
  auto torus = ModelSurface::flat_torus(kTwoPi, kTwoPi);
  for (int k : {1, 3, 6}) {
    auto pair = torus_eigenpair(kPeriods, {k, 0});
    // ||grad V|| <= k ||V|| pointwise, so the ratio is below k/(1/((1-a)R)+k).
    double r = elliptic_gradient_check(pair, torus, {1.0, 1.0}, 1.0, 0.5, 24);
    CHECK(r < static_cast<double>(k) / (1.0 / 0.5 + k) + 1e-10);
    CHECK(r < 1.0);
  }
  auto pair = torus_eigenpair(kPeriods, {3, 0});
  double mid = elliptic_gradient_check(pair, torus, {1.0, 1.0}, 1.0, 0.5, 24);
  double close = elliptic_gradient_check(pair, torus, {1.0, 1.0}, 1.0, 0.97, 24);
  CHECK(close < mid);
  CHECK(close < 0.12);

  double o32 = elliptic_gradient_check(pair, torus, {1.0, 1.0}, 1.0, 0.5, 32);
  double o64 = elliptic_gradient_check(pair, torus, {1.0, 1.0}, 1.0, 0.5, 64);
  CHECK(o32 == Approx(o64).margin(1e-4));

  CHECK_THROWS_AS(elliptic_gradient_check(pair, torus, {0, 0}, 1.0, 1.5, 16),
                  std::invalid_argument);
  CHECK_THROWS_AS(elliptic_gradient_check(pair, torus, {0, 0}, 4.0, 0.5, 16),
                  std::invalid_argument);
}

TEST_CASE("differentiated eigen-system residual on flat charts") {
  auto torus = ModelSurface::flat_torus(kTwoPi, kTwoPi);
  auto pair = torus_eigenpair(kPeriods, {2, 1});
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> unif(0.0, kTwoPi);
  std::vector<Point> pts;
  for (int i = 0; i < 100; ++i) pts.push_back({unif(rng), unif(rng)});

  CHECK(eigen_system_residual(pair, torus, pts) < 1e-6);

  EigenPair bad = pair;
  bad.lambda += 1.0;
  double vsup = 0.0;
  for (const Point& p : pts) {
    Vec2 d = pair.partial(p);
    vsup = std::max({vsup, std::abs(d[0]), std::abs(d[1])});
  }
  CHECK(eigen_system_residual(bad, torus, pts) >= 0.1 * vsup);

  auto sph = ModelSurface::sphere(1.0);
  CHECK_THROWS_AS(
      eigen_system_residual(sphere_zonal_eigenpair(1.0, 2), sph, pts),
      std::invalid_argument);
}

TEST_CASE("low-discrepancy centers are deterministic in the seed") {
  auto torus = ModelSurface::flat_torus(kTwoPi, kTwoPi);
  auto a = low_discrepancy_centers(torus, 25, 4);
  auto b = low_discrepancy_centers(torus, 25, 4);
  auto c = low_discrepancy_centers(torus, 25, 5);
  REQUIRE(a.size() == 25);
  bool same = true, differs = false;
  for (int i = 0; i < 25; ++i) {
    if (a[i].x1 != b[i].x1 || a[i].x2 != b[i].x2) same = false;
    if (a[i].x1 != c[i].x1) differs = true;
  }
  CHECK(same);
  CHECK(differs);

  auto sph = ModelSurface::sphere(1.0);
  for (const Point& p : low_discrepancy_centers(sph, 30, 1)) {
    CHECK(p.x1 >= 0.0);
    CHECK(p.x1 <= kPi);
  }
}
