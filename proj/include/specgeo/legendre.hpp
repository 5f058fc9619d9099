// Legendre polynomials by upward recurrence, with first and second
// derivatives; works over real and complex arguments.
#pragma once

#include <cmath>
#include <complex>
#include <vector>

namespace specgeo {

template <typename T>
T legendre_p(int l, T x) {
  if (l == 0) return T(1);
  T p0 = T(1), p1 = x;
  for (int k = 2; k <= l; ++k) {
    T p2 = (T(2 * k - 1) * x * p1 - T(k - 1) * p0) / T(k);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

// d/dx P_l(x) via the derivative recurrence; at x = +-1 the closed form
// l(l+1)/2 * (+-1)^(l+1) is used.
template <typename T>
T legendre_dp(int l, T x) {
  if (l == 0) return T(0);
  T denom = T(1) - x * x;
  if (std::abs(denom) < 1e-12) {
    double sign = (std::real(x) > 0.0) ? 1.0 : ((l % 2 == 0) ? -1.0 : 1.0);
    return T(sign * 0.5 * l * (l + 1));
  }
  return T(l) * (legendre_p(l - 1, x) - x * legendre_p(l, x)) / denom;
}

// Second derivative from the Legendre ODE: (1-x^2) P'' = 2x P' - l(l+1) P.
template <typename T>
T legendre_d2p(int l, T x) {
  T denom = T(1) - x * x;
  if (std::abs(denom) < 1e-8) denom = T(1e-8);
  return (T(2) * x * legendre_dp(l, x) - T(l * (l + 1)) * legendre_p(l, x)) / denom;
}

// Cosine expansion: P_l(cos t) = sum_{m=0}^{l} c_m cos((l-2m) t).
// c_m = binom(2m,m) binom(2l-2m,l-m) / 4^l.
inline std::vector<double> legendre_cosine_coeffs(int l) {
  std::vector<double> c(l + 1);
  auto central = [](int m) {
    // binom(2m, m) / 4^m
    double v = 1.0;
    for (int j = 1; j <= m; ++j) v *= (2.0 * j - 1.0) / (2.0 * j);
    return v;
  };
  for (int m = 0; m <= l; ++m) c[m] = central(m) * central(l - m);
  return c;
}

}  // namespace specgeo
