#pragma once

#include <cmath>
#include <cstdint>

namespace aassim {

/// Quantization guard: ceil/floor of analytically exact ratios must not be
/// perturbed by the last-ulp error of double division (e.g. log2(2)/(1/3)
/// evaluating to 3.0000000000000004). The guard is far below any spacing
/// the planner can produce at desk scale.
inline constexpr double kQuantizeGuard = 1e-9;

inline std::int64_t guarded_ceil(double x) {
  return static_cast<std::int64_t>(std::ceil(x - kQuantizeGuard));
}

inline std::int64_t guarded_floor(double x) {
  return static_cast<std::int64_t>(std::floor(x + kQuantizeGuard));
}

/// Compensated accumulator for probability and entropy sums.
class KahanSum {
 public:
  void add(double value) {
    const double y = value - compensation_;
    const double t = sum_ + y;
    compensation_ = (t - sum_) - y;
    sum_ = t;
  }
  double value() const { return sum_; }

 private:
  double sum_ = 0.0;
  double compensation_ = 0.0;
};

/// p * log2(p) with the 0 * log 0 = 0 convention.
inline double plog2p(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace aassim
