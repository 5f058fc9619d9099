// Log-space accumulation for weighted norms whose integrands overflow
// double range (e^{tau phi} with tau |ln r| large).
#pragma once

#include <cmath>
#include <limits>
#include <vector>

namespace specgeo {

inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// log(sum exp(terms)), streaming running-max variant.
class LogSumExp {
 public:
  void add(double log_term) {
    if (log_term == kNegInf) return;
    if (log_term > max_) {
      sum_ = sum_ * std::exp(max_ - log_term) + 1.0;
      max_ = log_term;
    } else {
      sum_ += std::exp(log_term - max_);
    }
  }
  double value() const {
    if (sum_ == 0.0) return kNegInf;
    return max_ + std::log(sum_);
  }

 private:
  double max_ = kNegInf;
  double sum_ = 0.0;
};

inline double log_sum_exp(const std::vector<double>& terms) {
  LogSumExp acc;
  for (double t : terms) acc.add(t);
  return acc.value();
}

}  // namespace specgeo
