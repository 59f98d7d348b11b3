#pragma once

// Brute-force matrix elements of reduced eigenstates on very small lattices.
//
// For an eigenstate Psi_alpha of the full system, the reduced state on Lambda_0,
// conjugated by (O f)(x) = |det F|^{1/2} f(F x), has matrix elements
//   <Psi_m, rho_hat Psi_n> = int du g_m(u) g_n(u),
//   g_n(u) = |det F|^{1/2} int dx Psi_alpha(F x, u) Psi_n^{(kappa)}(x),
// with u the complement coordinates. Both integrals are done by tensor
// Gauss-Hermite quadrature directly on the wave function; only the choice of
// quadrature centre and scale uses the Gaussian part of the integrand.

#include <Eigen/Dense>

#include <cmath>
#include <numbers>
#include <vector>

#include "oscent/errors.hpp"
#include "oscent/hamiltonian.hpp"
#include "oscent/lattice.hpp"
#include "oscent/oracle/gaussian.hpp"
#include "oscent/oracle/quadrature.hpp"
#include "oscent/oracle/special.hpp"
#include "oscent/spectral.hpp"

namespace oscent::oracle {

inline constexpr std::size_t kMaxBruteForceSites = 3;

struct BruteForceOptions {
  int start_order = 16;
  int max_order = 256;
  double tolerance = 1e-9;  ///< successive orders must agree to this (max abs entry)
};

struct GramResult {
  Eigen::MatrixXd gram;                    ///< <Psi_m, rho_hat Psi_n> over the basis box
  std::vector<std::vector<int>> basis;     ///< occupation vectors, first mode fastest
  int order = 0;
  bool converged = false;
  double last_change = 0.0;
};

class ReducedStateOracle {
 public:
  /// alpha: occupation numbers of the normal modes of h (ascending frequency order).
  ReducedStateOracle(const CouplingMatrix& h, const Region& r, std::vector<int> alpha)
      : alpha_(std::move(alpha)), inside_(r.inside()), outside_(r.outside()) {
    const auto N = h.size();
    if (N > kMaxBruteForceSites) {
      throw InvalidArgument("reduced_state_bruteforce: refusing |L| = " + std::to_string(N) + " > " +
                            std::to_string(kMaxBruteForceSites));
    }
    if (alpha_.size() != N) throw InvalidArgument("reduced_state_bruteforce: alpha has the wrong length");
    for (int a : alpha_) {
      if (a < 0) throw InvalidArgument("reduced_state_bruteforce: negative occupation in alpha");
    }
    sd_ = sym_eig(h);
    hsqrt_ = spd_sqrt(sd_);
    const auto blocks = partition_blocks(hsqrt_, r);
    const auto sspec = symplectic_spectrum(blocks);
    F_ = sspec.F;
    kappa_ = sspec.kappa;
    mu_ = sspec.mu;
    det_f_sqrt_ = std::sqrt(std::abs(F_.determinant()));
    norm0_ = std::pow(sd_.gamma.prod() / std::pow(std::numbers::pi, static_cast<double>(N)), 0.25);

    const Eigen::MatrixXd FtAF = F_.transpose() * blocks.A * F_;
    Mx_ = 0.5 * (FtAF + FtAF.transpose());
    Mx_.diagonal() += kappa_;
    Eigen::LLT<Eigen::MatrixXd> mllt(Mx_);
    if (mllt.info() != Eigen::Success) throw DegenerateMatrix("reduced_state_bruteforce: inner form not SPD");
    shift_ = -mllt.solve(F_.transpose() * blocks.C);  // x*(u) = shift_ * u
    const Eigen::MatrixXd P = blocks.B - blocks.C.transpose() * F_ * mllt.solve(F_.transpose() * blocks.C);
    Lx_ = gaussian_map(Mx_);
    Lu_ = gaussian_map(2.0 * P);
  }

  const Eigen::VectorXd& mu() const { return mu_; }
  const Eigen::VectorXd& kappa() const { return kappa_; }

  /// Gram matrix over the box {0..per_mode-1}^{|L0|} at a fixed quadrature order.
  GramResult gram_at(int per_mode, int order) const {
    const auto m = static_cast<std::size_t>(kappa_.size());
    const auto c = outside_.size();
    GramResult out;
    out.order = order;
    out.basis = box(per_mode, m);
    const auto nb = out.basis.size();
    const auto& rule = gauss_hermite(order);

    // inner nodes and per-axis Hermite-Gaussian tables
    const std::size_t n_inner = ipow(static_cast<std::size_t>(order), m);
    std::vector<Eigen::VectorXd> tnodes(n_inner);
    std::vector<double> tw(n_inner);
    for (std::size_t i = 0; i < n_inner; ++i) {
      Eigen::VectorXd t(static_cast<Eigen::Index>(m));
      double w = 1.0;
      std::size_t rem = i;
      for (std::size_t a = 0; a < m; ++a) {
        const auto q = rem % static_cast<std::size_t>(order);
        rem /= static_cast<std::size_t>(order);
        t(static_cast<Eigen::Index>(a)) = rule.nodes[q];
        w *= rule.weights[q];
      }
      tnodes[i] = t;
      tw[i] = w;
    }
    const double jac_x = std::abs(Lx_.determinant());
    const double jac_u = std::abs(Lu_.determinant());

    const std::size_t n_outer = ipow(static_cast<std::size_t>(order), c);
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(nb), static_cast<Eigen::Index>(nb));
    Eigen::VectorXd g(static_cast<Eigen::Index>(nb));
    Eigen::VectorXd z(static_cast<Eigen::Index>(inside_.size() + outside_.size()));
    std::vector<std::vector<double>> hg(m, std::vector<double>(static_cast<std::size_t>(per_mode)));
    for (std::size_t o = 0; o < n_outer; ++o) {
      Eigen::VectorXd s(static_cast<Eigen::Index>(c));
      double wu = 1.0;
      std::size_t rem = o;
      for (std::size_t a = 0; a < c; ++a) {
        const auto q = rem % static_cast<std::size_t>(order);
        rem /= static_cast<std::size_t>(order);
        s(static_cast<Eigen::Index>(a)) = rule.nodes[q];
        wu *= rule.weights[q];
      }
      const Eigen::VectorXd u = Lu_ * s;
      const Eigen::VectorXd xc = shift_ * u;
      g.setZero();
      for (std::size_t i = 0; i < n_inner; ++i) {
        const Eigen::VectorXd x = xc + Lx_ * tnodes[i];
        const Eigen::VectorXd fx = F_ * x;
        for (std::size_t a = 0; a < inside_.size(); ++a) z(static_cast<Eigen::Index>(inside_[a])) = fx(static_cast<Eigen::Index>(a));
        for (std::size_t a = 0; a < c; ++a) z(static_cast<Eigen::Index>(outside_[a])) = u(static_cast<Eigen::Index>(a));
        const double psi = tw[i] * wave(z);
        for (std::size_t a = 0; a < m; ++a) {
          for (int n = 0; n < per_mode; ++n) {
            hg[a][static_cast<std::size_t>(n)] = hg_function(n, kappa_(static_cast<Eigen::Index>(a)), x(static_cast<Eigen::Index>(a)));
          }
        }
        for (std::size_t b = 0; b < nb; ++b) {
          double v = psi;
          for (std::size_t a = 0; a < m; ++a) v *= hg[a][static_cast<std::size_t>(out.basis[b][a])];
          g(static_cast<Eigen::Index>(b)) += v;
        }
      }
      g *= jac_x * det_f_sqrt_;
      G.noalias() += wu * g * g.transpose();
    }
    out.gram = jac_u * 0.5 * (G + G.transpose());
    return out;
  }

  /// Doubles the order until two successive Gram matrices agree.
  GramResult gram(int per_mode, const BruteForceOptions& opt = {}) const {
    GramResult prev = gram_at(per_mode, opt.start_order);
    for (int order = 2 * opt.start_order; order <= opt.max_order; order *= 2) {
      GramResult next = gram_at(per_mode, order);
      next.last_change = (next.gram - prev.gram).cwiseAbs().maxCoeff();
      if (next.last_change <= opt.tolerance) {
        next.converged = true;
        return next;
      }
      prev = std::move(next);
    }
    return prev;
  }

 private:
  static std::size_t ipow(std::size_t b, std::size_t e) {
    std::size_t r = 1;
    while (e--) r *= b;
    return r;
  }

  static std::vector<std::vector<int>> box(int per_mode, std::size_t m) {
    if (per_mode < 1) throw InvalidArgument("reduced_state_bruteforce: per_mode must be >= 1");
    std::vector<std::vector<int>> out;
    std::vector<int> n(m, 0);
    while (true) {
      out.push_back(n);
      std::size_t a = 0;
      for (; a < m; ++a) {
        if (++n[a] < per_mode) break;
        n[a] = 0;
      }
      if (a == m) break;
    }
    return out;
  }

  /// Psi_alpha(z) = norm0 exp(-z^T h^{1/2} z / 2) prod_k H_{alpha_k}(sqrt(gamma_k) y_k) / sqrt(2^a a!), y = V^T z.
  double wave(const Eigen::VectorXd& z) const {
    double v = norm0_ * std::exp(-0.5 * z.dot(hsqrt_ * z));
    for (std::size_t k = 0; k < alpha_.size(); ++k) {
      const int a = alpha_[k];
      if (a == 0) continue;
      const auto kk = static_cast<Eigen::Index>(k);
      const double y = sd_.V.col(kk).dot(z);
      const double lognorm = 0.5 * (a * std::log(2.0) + std::lgamma(a + 1.0));
      v *= hermite(a, std::sqrt(sd_.gamma(kk)) * y) * std::exp(-lognorm);
    }
    return v;
  }

  std::vector<int> alpha_;
  std::vector<std::size_t> inside_, outside_;
  SpectralData sd_;
  Eigen::MatrixXd hsqrt_, F_, Mx_, shift_, Lx_, Lu_;
  Eigen::VectorXd kappa_, mu_;
  double det_f_sqrt_ = 1.0;
  double norm0_ = 1.0;
};

struct BruteForceValue {
  double value = 0.0;
  int order = 0;
  bool converged = false;
};

/// Single diagonal element <Psi_n, rho_hat_alpha Psi_n>.
inline BruteForceValue reduced_state_bruteforce(const CouplingMatrix& h, const Region& r, const std::vector<int>& alpha,
                                                const std::vector<int>& n, const BruteForceOptions& opt = {}) {
  ReducedStateOracle oracle(h, r, alpha);
  if (n.size() != static_cast<std::size_t>(oracle.kappa().size())) {
    throw InvalidArgument("reduced_state_bruteforce: occupation vector has the wrong length");
  }
  int per_mode = 1;
  for (int v : n) {
    if (v < 0) throw InvalidArgument("reduced_state_bruteforce: negative occupation");
    per_mode = std::max(per_mode, v + 1);
  }
  const auto g = oracle.gram(per_mode, opt);
  std::size_t idx = 0, stride = 1;
  for (std::size_t a = 0; a < n.size(); ++a) {
    idx += static_cast<std::size_t>(n[a]) * stride;
    stride *= static_cast<std::size_t>(per_mode);
  }
  return {g.gram(static_cast<Eigen::Index>(idx), static_cast<Eigen::Index>(idx)), g.order, g.converged};
}

/// 2 log Tr sqrt(rho) from the Gram matrix eigenvalues (truncated basis).
inline double half_renyi_from_gram(const Eigen::MatrixXd& G) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (G + G.transpose()), Eigen::EigenvaluesOnly);
  double s = 0.0;
  for (double v : es.eigenvalues()) s += std::sqrt(std::max(v, 0.0));
  return 2.0 * std::log(s);
}

}  // namespace oscent::oracle
