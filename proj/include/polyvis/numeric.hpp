#pragma once

#include <cstdint>
#include <functional>

namespace polyvis {

/// Counter-based generator: output i is the SplitMix64 finalizer applied to
/// seed + (i + 1) * 0x9E3779B97F4A7C15. Any index can be drawn directly.
std::uint64_t counter_bits(std::uint64_t seed, std::uint64_t counter);
/// Uniform double in [0, 1) from the top 53 bits of counter_bits.
double counter_uniform(std::uint64_t seed, std::uint64_t counter);

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x);
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  bool converged = true;
};

/// Adaptive Gauss-Kronrod (7/15) quadrature of f over [a, b]. Stops when the
/// estimated error is below max(rel_tol * |value|, abs_tol).
QuadResult integrate(const std::function<double(double)>& f, double a, double b, double rel_tol,
                     double abs_tol = 0.0, int max_intervals = 4000);

}  // namespace polyvis
