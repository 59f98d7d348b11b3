#pragma once

// Gauss-Hermite and Gauss-Legendre rules. Hermite rules carry weight-stripped
// weights w_i e^{t_i^2}, so that  int f(t) dt ~ sum_i w_i f(t_i)  for integrands
// that decay like a Gaussian but are not written as e^{-t^2} times a polynomial.

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include "oscent/errors.hpp"
#include "oscent/oracle/special.hpp"

namespace oscent::oracle {

enum class QuadratureKind { GaussHermite, GaussLegendre };

struct QuadratureRule {
  QuadratureKind kind = QuadratureKind::GaussHermite;
  int order = 0;
  double half_width = 1.0;  ///< Legendre only: nodes live on [-half_width, half_width]
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

inline QuadratureRule build_hermite(int order) {
  const Eigen::Index n = order;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
  for (Eigen::Index k = 1; k < n; ++k) sub(k - 1) = std::sqrt(0.5 * static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  QuadratureRule rule;
  rule.kind = QuadratureKind::GaussHermite;
  rule.order = order;
  rule.nodes.resize(static_cast<std::size_t>(order));
  rule.weights.resize(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) {
    double t = es.eigenvalues()(i);
    // Newton on phi_N; phi_N' = sqrt(2N) phi_{N-1} - t phi_N
    for (int it = 0; it < 3; ++it) {
      const double pn = hermite_function_any(order, t);
      const double pm = hermite_function_any(order - 1, t);
      const double dp = std::sqrt(2.0 * order) * pm - t * pn;
      if (dp == 0.0) break;
      t -= pn / dp;
    }
    // Christoffel function of the normalized Hermite functions
    double sum = 0.0, p0 = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * t * t), p1 = std::sqrt(2.0) * t * p0;
    sum += p0 * p0;
    if (order > 1) sum += p1 * p1;
    for (int k = 1; k + 1 < order; ++k) {
      const double p2 = std::sqrt(2.0 / (k + 1)) * t * p1 - std::sqrt(static_cast<double>(k) / (k + 1)) * p0;
      p0 = p1;
      p1 = p2;
      sum += p1 * p1;
    }
    rule.nodes[static_cast<std::size_t>(i)] = t;
    rule.weights[static_cast<std::size_t>(i)] = 1.0 / sum;
  }
  return rule;
}

inline QuadratureRule build_legendre(int order) {
  const Eigen::Index n = order;
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(n);
  Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
  for (Eigen::Index k = 1; k < n; ++k) {
    const double kk = static_cast<double>(k);
    sub(k - 1) = kk / std::sqrt(4.0 * kk * kk - 1.0);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  QuadratureRule rule;
  rule.kind = QuadratureKind::GaussLegendre;
  rule.order = order;
  for (int i = 0; i < order; ++i) {
    double x = es.eigenvalues()(i), dp = 1.0;
    for (int it = 0; it < 4; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 1; k < order; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0, p1 = x;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      x -= p1 / dp;
    }
    rule.nodes.push_back(x);
    rule.weights.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  }
  return rule;
}

}  // namespace detail

/// Cached Gauss-Hermite rule of the given order (weight-stripped weights).
inline const QuadratureRule& gauss_hermite(int order) {
  if (order < 1 || order > 1024) throw InvalidArgument("gauss_hermite: order must be in [1, 1024]");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<QuadratureRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[order];
  if (!slot) slot = std::make_unique<QuadratureRule>(detail::build_hermite(order));
  return *slot;
}

/// Gauss-Legendre rule on [-half_width, half_width].
inline QuadratureRule gauss_legendre(int order, double half_width = 1.0) {
  if (order < 1 || order > 1024) throw InvalidArgument("gauss_legendre: order must be in [1, 1024]");
  if (!(half_width > 0.0)) throw InvalidArgument("gauss_legendre: half width must be positive");
  QuadratureRule rule = detail::build_legendre(order);
  rule.half_width = half_width;
  for (auto& x : rule.nodes) x *= half_width;
  for (auto& w : rule.weights) w *= half_width;
  return rule;
}

}  // namespace oscent::oracle
