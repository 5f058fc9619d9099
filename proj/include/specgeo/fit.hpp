// Least-squares fitting helpers for the scaling-law experiments.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace specgeo {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

inline LinearFit linear_fit(const std::vector<double>& xs,
                            const std::vector<double>& ys) {
  std::size_t n = xs.size();
  if (n != ys.size() || n < 2)
    throw std::invalid_argument("linear_fit: need >= 2 matching samples");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  double denom = n * sxx - sx * sx;
  if (std::abs(denom) < 1e-300) throw std::invalid_argument("linear_fit: degenerate xs");
  LinearFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0, ss_tot = 0, mean = sy / n;
  for (std::size_t i = 0; i < n; ++i) {
    double pred = fit.slope * xs[i] + fit.intercept;
    ss_res += (ys[i] - pred) * (ys[i] - pred);
    ss_tot += (ys[i] - mean) * (ys[i] - mean);
  }
  fit.r_squared = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

struct PowerLawFit {
  std::vector<std::pair<double, double>> samples;  // (lambda, measure)
  double slope = 0.0;      // exponent of lambda
  double intercept = 0.0;  // ln prefactor
  double r_squared = 0.0;
  double prefactor() const { return std::exp(intercept); }
};

// Least squares on (ln lambda, ln measure); slope 0.5 is the sqrt(lambda) law.
inline PowerLawFit scaling_fit(
    const std::vector<std::pair<double, double>>& samples) {
  if (samples.size() < 3)
    throw std::invalid_argument("scaling_fit: need >= 3 samples");
  std::vector<double> xs, ys;
  for (auto [lam, m] : samples) {
    if (m <= 0.0) throw std::invalid_argument("scaling_fit: nonpositive measure");
    if (lam <= 0.0) throw std::invalid_argument("scaling_fit: nonpositive lambda");
    xs.push_back(std::log(lam));
    ys.push_back(std::log(m));
  }
  LinearFit lf = linear_fit(xs, ys);
  PowerLawFit out;
  out.samples = samples;
  out.slope = lf.slope;
  out.intercept = lf.intercept;
  out.r_squared = lf.r_squared;
  return out;
}

}  // namespace specgeo
