#pragma once

// The verification table behind `oscent verify`: Gaussian-kernel identities
// against quadrature, plus formula-vs-brute-force checks on a 2-site chain.

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "oscent/entanglement.hpp"
#include "oscent/hamiltonian.hpp"
#include "oscent/lattice.hpp"
#include "oscent/oracle/gaussian.hpp"
#include "oscent/oracle/reduced_state.hpp"
#include "oscent/rng.hpp"
#include "oscent/spectral.hpp"

namespace oscent::oracle {

struct VerifyRow {
  std::string name;
  double error = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  double seconds = 0.0;
};

struct VerifyOptions {
  double tolerance = 1e-8;            ///< kernel, moment and integral identities
  double bruteforce_tolerance = 1e-6; ///< formula vs brute-force reduced states
  int order = 120;
  int random_instances = 50;
  std::uint64_t seed = 20240611;
};

inline Eigen::MatrixXd random_spd(std::size_t n, std::uint64_t seed, std::uint64_t instance) {
  Eigen::MatrixXd M(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  std::uint64_t c = 0;
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    for (Eigen::Index j = 0; j < M.cols(); ++j) M(i, j) = 2.0 * rng::uniform01(seed, instance, c++) - 1.0;
  }
  Eigen::MatrixXd A = M.transpose() * M;
  A.diagonal().array() += 0.5;
  return A;
}

inline std::vector<VerifyRow> run_verify(const VerifyOptions& opt = {}) {
  using clock = std::chrono::steady_clock;
  std::vector<VerifyRow> rows;
  auto timed = [&](std::string name, double tol, auto&& body) {
    const auto t0 = clock::now();
    VerifyRow row{std::move(name), 0.0, tol, false, 0.0};
    row.error = body();
    row.pass = std::isfinite(row.error) && row.error <= tol;
    row.seconds = std::chrono::duration<double>(clock::now() - t0).count();
    rows.push_back(row);
  };

  timed("gauss-hermite: int exp(-x^2) = sqrt(pi)", 1e-12, [&] {
    const auto& rule = gauss_hermite(40);
    double s = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) s += rule.weights[i] * std::exp(-rule.nodes[i] * rule.nodes[i]);
    return std::abs(s - std::sqrt(std::numbers::pi));
  });

  timed("hermite-gaussian orthonormality (n <= 10)", 1e-10, [&] {
    double worst = 0.0;
    const auto& rule = gauss_hermite(200);
    for (int a = 0; a <= 10; ++a) {
      for (int b = a; b <= 10; ++b) {
        double s = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
          s += rule.weights[i] * hg_function(a, 1.7, rule.nodes[i] / std::sqrt(1.7)) *
               hg_function(b, 1.7, rule.nodes[i] / std::sqrt(1.7));
        }
        s /= std::sqrt(1.7);
        worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
      }
    }
    return worst;
  });

  const double sigmas[] = {-0.9, -0.5, -0.1};
  timed("T_sigma eigenpairs (sigma in {-0.9,-0.5,-0.1}, n <= 10)", opt.tolerance, [&] {
    double worst = 0.0;
    for (double s : sigmas) {
      for (int n = 0; n <= 10; ++n) worst = std::max(worst, t_sigma_eigencheck(GaussKernel(s), n, opt.order).residual);
    }
    return worst;
  });

  timed("T_sigma moments x, x^2, xy (n <= 8)", opt.tolerance, [&] {
    double worst = 0.0;
    for (double s : sigmas) {
      for (int n = 0; n <= 8; ++n) worst = std::max(worst, moment_integrals(GaussKernel(s), n, opt.order).max_error());
    }
    return worst;
  });

  timed("polynomial-Gaussian integrals (" + std::to_string(opt.random_instances) + " random SPD, l <= 6)",
        opt.tolerance, [&] {
          double worst = 0.0;
          for (int i = 0; i < opt.random_instances; ++i) {
            const auto inst = static_cast<std::uint64_t>(i);
            const std::size_t n = 1 + static_cast<std::size_t>(i % 3);
            const auto A = random_spd(n, opt.seed, inst);
            Eigen::VectorXd J(static_cast<Eigen::Index>(n)), K(static_cast<Eigen::Index>(n));
            for (Eigen::Index a = 0; a < J.size(); ++a) {
              J(a) = 2.0 * rng::uniform01(opt.seed + 1, inst, static_cast<std::uint64_t>(a)) - 1.0;
              K(a) = 2.0 * rng::uniform01(opt.seed + 2, inst, static_cast<std::uint64_t>(a)) - 1.0;
            }
            const int l = i % 7;
            worst = std::max(worst, generalized_gaussian_integral(A, J, K, l).relative_error());
          }
          return worst;
        });

  // 2-site chain h = [[2,-1],[-1,2]], L0 = {0}
  auto lat = make_box(1, {2});
  const auto h = assemble_anderson(lat, {1.0, 1.0});
  const Region r(lat, {0});
  const auto sd = sym_eig(h);
  const auto blocks = partition_blocks(spd_sqrt(sd), r);
  const auto sspec = symplectic_spectrum(blocks);

  timed("reduced ground state eigenvalues, 2-site", opt.bruteforce_tolerance, [&] {
    ReducedStateOracle o(h, r, {0, 0});
    const auto g = o.gram(6);
    double worst = g.converged ? 0.0 : 1.0;
    for (int n = 0; n < 6; ++n) {
      const double mu = sspec.mu(0);
      const double expect = 2.0 / (1.0 + mu) * std::pow((mu - 1.0) / (mu + 1.0), n);
      worst = std::max(worst, std::abs(g.gram(n, n) - expect));
      for (int m = 0; m < 6; ++m) {
        if (m != n) worst = std::max(worst, std::abs(g.gram(n, m)));
      }
    }
    return worst;
  });

  timed("single-excitation diagonals, 2-site", opt.bruteforce_tolerance, [&] {
    double worst = 0.0;
    for (std::size_t k = 0; k < 2; ++k) {
      std::vector<int> alpha(2, 0);
      alpha[k] = 1;
      ReducedStateOracle o(h, r, alpha);
      const auto g = o.gram(6);
      if (!g.converged) worst = 1.0;
      const auto prof = excitation_profile(sd, r, blocks, sspec, k);
      for (int n = 0; n < 6; ++n) {
        worst = std::max(worst, std::abs(g.gram(n, n) - excited_diagonal(prof, sspec, {n})));
      }
    }
    return worst;
  });

  return rows;
}

}  // namespace oscent::oracle
