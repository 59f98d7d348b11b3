#pragma once

// Quadrature checks of the Gaussian-kernel identities: eigenpairs of
// T_sigma(x, y) = exp(-(x^2 + 2 sigma x y + y^2)/2), its moment integrals, and
// polynomial-times-Gaussian integrals over R^n.

#include <Eigen/Dense>

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "oscent/errors.hpp"
#include "oscent/oracle/quadrature.hpp"
#include "oscent/oracle/special.hpp"

namespace oscent::oracle {

/// Integrates f over R^n with a Gauss-Hermite tensor rule after x = center + L t.
/// Exact for f = exp(-t^T t) * polynomial(t) up to the rule's degree.
inline double tensor_integrate(const Eigen::VectorXd& center, const Eigen::MatrixXd& L, int order,
                               const std::function<double(const Eigen::VectorXd&)>& f) {
  const auto n = center.size();
  const auto& rule = gauss_hermite(order);
  const double jac = std::abs(L.determinant());
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  Eigen::VectorXd t(n), x(n);
  double sum = 0.0;
  if (n == 0) return f(center);
  while (true) {
    double w = 1.0;
    for (Eigen::Index a = 0; a < n; ++a) {
      t(a) = rule.nodes[static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
      w *= rule.weights[static_cast<std::size_t>(idx[static_cast<std::size_t>(a)])];
    }
    x.noalias() = center + L * t;
    sum += w * f(x);
    Eigen::Index a = 0;
    for (; a < n; ++a) {
      if (++idx[static_cast<std::size_t>(a)] < order) break;
      idx[static_cast<std::size_t>(a)] = 0;
    }
    if (a == n) break;
  }
  return jac * sum;
}

/// Affine map that turns exp(-x^T M x / 2) into exp(-t^T t): L = sqrt(2) chol(M)^{-T}.
inline Eigen::MatrixXd gaussian_map(const Eigen::MatrixXd& M) {
  Eigen::LLT<Eigen::MatrixXd> llt(0.5 * (M + M.transpose()));
  if (llt.info() != Eigen::Success) throw DegenerateMatrix("gaussian_map: quadratic form is not positive definite");
  const auto n = M.rows();
  Eigen::MatrixXd Linv = llt.matrixU().solve(Eigen::MatrixXd::Identity(n, n));
  return std::sqrt(2.0) * Linv;
}

struct GaussKernel {
  double sigma = 0.0;
  double kappa = 1.0;

  explicit GaussKernel(double s) : sigma(s) {
    if (!(std::abs(s) < 1.0)) throw InvalidArgument("GaussKernel: |sigma| must be < 1");
    kappa = std::sqrt(1.0 - s * s);
  }

  double operator()(double x, double y) const { return std::exp(-0.5 * (x * x + 2.0 * sigma * x * y + y * y)); }

  /// xi_n = sqrt(2 pi / (1 + kappa)) (-sigma / (1 + kappa))^n
  double xi(int n) const {
    return std::sqrt(2.0 * std::numbers::pi / (1.0 + kappa)) * std::pow(-sigma / (1.0 + kappa), n);
  }
};

struct EigenCheck {
  double residual = 0.0;
  double xi = 0.0;
};

/// sup over check points x of |int T(x,y) psi_n(y) dy - xi_n psi_n(x)|, psi_n = psi_n^{(kappa)}.
inline EigenCheck t_sigma_eigencheck(const GaussKernel& T, int n, int order = 120, int check_points = 41) {
  EigenCheck out;
  out.xi = T.xi(n);
  const double a = 1.0 + T.kappa;  // y-integrand is exp(-a y^2 / 2 - sigma x y) * poly
  const double reach = (std::sqrt(2.0 * n + 1.0) + 3.0) / std::sqrt(T.kappa);
  Eigen::MatrixXd L(1, 1);
  L(0, 0) = std::sqrt(2.0 / a);
  for (int i = 0; i < check_points; ++i) {
    const double x = -reach + 2.0 * reach * i / (check_points - 1);
    Eigen::VectorXd c(1);
    c(0) = -T.sigma * x / a;
    const double lhs = tensor_integrate(c, L, order, [&](const Eigen::VectorXd& y) {
      return T(x, y(0)) * hg_function(n, T.kappa, y(0));
    });
    out.residual = std::max(out.residual, std::abs(lhs - out.xi * hg_function(n, T.kappa, x)));
  }
  return out;
}

struct Moments {
  double m_x = 0.0, m_xx = 0.0, m_xy = 0.0;  ///< quadrature
  double a_x = 0.0, a_xx = 0.0, a_xy = 0.0;  ///< closed forms
  double max_error() const {
    return std::max({std::abs(m_x - a_x), std::abs(m_xx - a_xx), std::abs(m_xy - a_xy)});
  }
};

/// <T^f>_n = int int f(x,y) T(x,y) psi_n(x) psi_n(y) dx dy for f = x, x^2, x y.
inline Moments moment_integrals(const GaussKernel& T, int n, int order = 120) {
  Moments m;
  Eigen::MatrixXd Q(2, 2);
  Q << 1.0 + T.kappa, T.sigma, T.sigma, 1.0 + T.kappa;
  const Eigen::MatrixXd L = gaussian_map(Q);
  const Eigen::VectorXd c = Eigen::VectorXd::Zero(2);
  auto base = [&](const Eigen::VectorXd& z) {
    return T(z(0), z(1)) * hg_function(n, T.kappa, z(0)) * hg_function(n, T.kappa, z(1));
  };
  m.m_x = tensor_integrate(c, L, order, [&](const Eigen::VectorXd& z) { return z(0) * base(z); });
  m.m_xx = tensor_integrate(c, L, order, [&](const Eigen::VectorXd& z) { return z(0) * z(0) * base(z); });
  m.m_xy = tensor_integrate(c, L, order, [&](const Eigen::VectorXd& z) { return z(0) * z(1) * base(z); });

  const double xi = T.xi(n);
  const double mu2 = (1.0 - T.sigma) / (1.0 + T.sigma);
  const double mu = std::sqrt(mu2);
  m.a_x = 0.0;
  m.a_xx = (2.0 * n + 1.0) * xi / (2.0 * T.kappa);
  // 2 (mu^2+1)/(mu^2-1) n xi_n = -2 n xi_n / sigma, written so sigma = 0 stays finite
  double pole_term = 0.0;
  if (n > 0) {
    pole_term = 2.0 * n * std::sqrt(2.0 * std::numbers::pi / (1.0 + T.kappa)) *
                std::pow(-T.sigma, n - 1) / std::pow(1.0 + T.kappa, n);
  }
  m.a_xy = (pole_term + (mu - 1.0) / (mu + 1.0) * xi) / (2.0 * T.kappa);
  return m;
}

struct IntegralCheck {
  double analytic = 0.0;
  double numeric = 0.0;
  double scale = 0.0;  ///< size of the integrand's natural magnitude, used for relative errors
  double relative_error() const { return std::abs(analytic - numeric) / scale; }
};

/// int exp(-x^T A x / 2 + J^T x) (K^T x)^l dx, closed form against tensor quadrature.
inline IntegralCheck generalized_gaussian_integral(const Eigen::MatrixXd& A, const Eigen::VectorXd& J,
                                                   const Eigen::VectorXd& K, int l, int order = 0) {
  const auto n = A.rows();
  if (A.cols() != n || J.size() != n || K.size() != n) throw InvalidArgument("generalized_gaussian_integral: shapes");
  if (n < 1 || n > 4) throw InvalidArgument("generalized_gaussian_integral: dimension must be 1..4");
  if (l < 0 || l > 8) throw InvalidArgument("generalized_gaussian_integral: l must be in 0..8");
  Eigen::LLT<Eigen::MatrixXd> llt(A);
  if (llt.info() != Eigen::Success) throw DegenerateMatrix("generalized_gaussian_integral: A is not SPD");
  const Eigen::VectorXd AJ = llt.solve(J);
  const double kaj = K.dot(AJ);
  const double kak = K.dot(llt.solve(K));
  const double detA = llt.matrixLLT().diagonal().prod();
  const double pref = std::sqrt(std::pow(2.0 * std::numbers::pi, static_cast<double>(n))) / detA *
                      std::exp(0.5 * J.dot(AJ));
  IntegralCheck out;
  double series = 0.0;
  for (int j = 0; 2 * j <= l; ++j) {
    series += static_cast<double>(double_factorial(2 * j - 1)) * binomial(l, 2 * j) *
              std::pow(kaj, l - 2 * j) * std::pow(kak, j);
  }
  out.analytic = pref * series;
  out.scale = pref * std::pow(std::abs(kaj) + std::sqrt(kak), l);
  if (!(out.scale > 0.0)) out.scale = pref;
  if (order <= 0) order = std::max(16, l + 8);
  const Eigen::MatrixXd L = gaussian_map(A);
  out.numeric = tensor_integrate(AJ, L, order, [&](const Eigen::VectorXd& x) {
    return std::exp(-0.5 * x.dot(A * x) + J.dot(x)) * std::pow(K.dot(x), l);
  });
  return out;
}

}  // namespace oscent::oracle
