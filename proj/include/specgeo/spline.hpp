// Natural cubic spline on a uniform grid, with first/second derivatives.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace specgeo {

class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(double x0, double dx, std::vector<double> y)
      : x0_(x0), dx_(dx), y_(std::move(y)) {
    int n = static_cast<int>(y_.size());
    if (n < 3) throw std::invalid_argument("CubicSpline: need >= 3 samples");
    // Solve tridiagonal system for second derivatives m_i (natural ends).
    m_.assign(n, 0.0);
    std::vector<double> diag(n, 2.0), rhs(n, 0.0), c(n, 0.0);
    for (int i = 1; i < n - 1; ++i)
      rhs[i] = 6.0 * (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]) / (dx_ * dx_);
    // Thomas algorithm with off-diagonals 0.5 (after normalizing by 2? keep raw):
    // system: 0.5*m[i-1] + 2*m[i] + 0.5*m[i+1] ... actually standard uniform:
    // m[i-1] + 4 m[i] + m[i+1] = rhs[i]*? Use: (dx/6)(m[i-1]+4m[i]+m[i+1]) form.
    // Rewrite directly: m[i-1] + 4*m[i] + m[i+1] = rhs[i].
    for (int i = 1; i < n - 1; ++i) diag[i] = 4.0;
    c[1] = 1.0 / diag[1];
    rhs[1] = rhs[1] / diag[1];
    for (int i = 2; i < n - 1; ++i) {
      double denom = diag[i] - c[i - 1];
      c[i] = 1.0 / denom;
      rhs[i] = (rhs[i] - rhs[i - 1]) / denom;
    }
    for (int i = n - 3; i >= 1; --i) rhs[i] -= c[i] * rhs[i + 1];
    for (int i = 1; i < n - 1; ++i) m_[i] = rhs[i];
  }

  double xmin() const { return x0_; }
  double xmax() const { return x0_ + dx_ * (static_cast<double>(y_.size()) - 1.0); }

  double value(double x) const { return eval(x, 0); }
  double deriv(double x) const { return eval(x, 1); }
  double deriv2(double x) const { return eval(x, 2); }

 private:
  double eval(double x, int order) const {
    int n = static_cast<int>(y_.size());
    double t = (x - x0_) / dx_;
    int i = static_cast<int>(std::floor(t));
    i = std::max(0, std::min(n - 2, i));
    double a = x0_ + i * dx_;
    double u = x - a;               // in [0, dx]
    double v = dx_ - u;
    double h = dx_;
    double ma = m_[i], mb = m_[i + 1], ya = y_[i], yb = y_[i + 1];
    if (order == 0) {
      return ma * v * v * v / (6 * h) + mb * u * u * u / (6 * h) +
             (ya / h - ma * h / 6) * v + (yb / h - mb * h / 6) * u;
    }
    if (order == 1) {
      return -ma * v * v / (2 * h) + mb * u * u / (2 * h) -
             (ya / h - ma * h / 6) + (yb / h - mb * h / 6);
    }
    return ma * v / h + mb * u / h;
  }

  double x0_ = 0.0, dx_ = 1.0;
  std::vector<double> y_, m_;
};

}  // namespace specgeo
