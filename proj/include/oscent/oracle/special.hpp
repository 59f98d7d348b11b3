#pragma once

// Hermite polynomials, normalized Hermite-Gaussian functions and double factorials.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "oscent/errors.hpp"

namespace oscent::oracle {

inline constexpr int kMaxHermiteOrder = 300;

/// Physicists' H_n(x) by H_{n+1} = 2x H_n - 2n H_{n-1}.
inline double hermite(int n, double x) {
  if (n < 0) throw InvalidArgument("hermite: negative order");
  double h0 = 1.0;
  if (n == 0) return h0;
  double h1 = 2.0 * x;
  for (int k = 1; k < n; ++k) {
    const double h2 = 2.0 * x * h1 - 2.0 * k * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

namespace detail {

/// phi_n(t) without the order cap; the running values are rescaled so large |t|
/// neither overflows nor underflows early.
inline double hermite_function_any(int n, double t) {
  double log_scale = -0.5 * t * t;
  double p0 = std::pow(std::numbers::pi, -0.25);
  if (n == 0) return p0 * std::exp(log_scale);
  double p1 = std::sqrt(2.0) * t * p0;
  for (int k = 1; k < n; ++k) {
    const double p2 = std::sqrt(2.0 / (k + 1)) * t * p1 - std::sqrt(static_cast<double>(k) / (k + 1)) * p0;
    p0 = p1;
    p1 = p2;
    if (std::abs(p1) > 1e150) {
      p0 *= 1e-150;
      p1 *= 1e-150;
      log_scale += 150.0 * std::log(10.0);
    }
  }
  return p1 * std::exp(log_scale);
}

}  // namespace detail

/// phi_n(t) = (2^n n! sqrt(pi))^{-1/2} H_n(t) e^{-t^2/2}, via the normalized recurrence.
inline double hermite_function(int n, double t) {
  if (n < 0) throw InvalidArgument("hermite_function: negative order");
  if (n > kMaxHermiteOrder) {
    throw InvalidArgument("hermite_function: order " + std::to_string(n) + " exceeds " +
                          std::to_string(kMaxHermiteOrder));
  }
  return detail::hermite_function_any(n, t);
}

/// psi_n^{(gamma)}(y) = gamma^{1/4} phi_n(sqrt(gamma) y), normalized in L^2(R).
inline double hg_function(int n, double gamma, double y) {
  if (!(gamma > 0.0)) throw InvalidArgument("hg_function: gamma must be positive");
  return std::pow(gamma, 0.25) * hermite_function(n, std::sqrt(gamma) * y);
}

/// n!! with (-1)!! = 0!! = 1. Exact in 64 bits up to n = 33.
inline std::uint64_t double_factorial(int n) {
  if (n < -1) throw InvalidArgument("double_factorial: n must be >= -1");
  if (n > 33) throw InvalidArgument("double_factorial: n > 33 overflows 64 bits");
  std::uint64_t out = 1;
  for (int k = n; k > 1; k -= 2) out *= static_cast<std::uint64_t>(k);
  return out;
}

inline double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0));
}

}  // namespace oscent::oracle
