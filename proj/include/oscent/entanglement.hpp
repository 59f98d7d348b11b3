#pragma once

// Entropies of the reduced ground state and bounds for single-excitation
// eigenstates.
//
// Conventions: E_eps = (1/(1-eps)) sum_j log f_eps(mu_j) for eps < 1, the von
// Neumann formula at eps = 1, and the logarithmic negativity is E_{1/2}.
// Excitation indices k are zero based and refer to the ascending eigenvalues
// of h.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <vector>

#include "oscent/errors.hpp"
#include "oscent/spectral.hpp"

namespace oscent {

/// Floor below which a negative diagonal element is an error instead of rounding noise.
inline constexpr double kDiagonalFloor = 1e-12;

namespace detail {

inline void check_eps(double eps, bool allow_one) {
  if (!(eps > 0.0) || eps > 1.0 || (!allow_one && eps == 1.0) || !std::isfinite(eps)) {
    std::ostringstream msg;
    msg << "eps = " << eps << " is outside " << (allow_one ? "(0, 1]" : "(0, 1)");
    throw DomainError(msg.str());
  }
}

inline void check_mu(double x) {
  if (!(x >= 1.0) || !std::isfinite(x)) {
    std::ostringstream msg;
    msg << "symplectic eigenvalue " << x << " is below 1";
    throw DomainError(msg.str());
  }
}

/// x log x with 0 log 0 = 0.
inline double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

}  // namespace detail

/// log f_eps(x) without cancellation. With a = (x+1)/2, b = (x-1)/2 and t = 1 - eps,
/// a^eps - b^eps = 1 + a expm1(-t log a) - b expm1(-t log b) because a - b = 1.
inline double log_f_eps(double x, double eps) {
  detail::check_mu(x);
  detail::check_eps(eps, false);
  const double a = 0.5 * (x + 1.0);
  const double b = 0.5 * (x - 1.0);
  const double t = 1.0 - eps;
  double inner = a * std::expm1(-t * std::log(a));
  if (b > 0.0) inner -= b * std::expm1(-t * std::log(b));
  return -std::log1p(inner);
}

inline double f_eps(double x, double eps) { return std::exp(log_f_eps(x, eps)); }

/// sqrt(2) / (sqrt(x+1) - sqrt(x-1)), written without the subtraction.
inline double f_half(double x) {
  detail::check_mu(x);
  return (std::sqrt(x + 1.0) + std::sqrt(x - 1.0)) / std::sqrt(2.0);
}

inline double von_neumann_term(double mu) {
  detail::check_mu(mu);
  return detail::xlogx(0.5 * (mu + 1.0)) - detail::xlogx(0.5 * (mu - 1.0));
}

inline double ground_renyi(const Eigen::VectorXd& mu, double eps) {
  detail::check_eps(eps, true);
  double sum = 0.0;
  if (eps == 1.0) {
    for (double m : mu) sum += von_neumann_term(m);
    return sum;
  }
  for (double m : mu) sum += log_f_eps(m, eps);
  return sum / (1.0 - eps);
}

inline double ground_renyi(const SymplecticSpectrum& s, double eps) { return ground_renyi(s.mu, eps); }
inline double von_neumann(const SymplecticSpectrum& s) { return ground_renyi(s.mu, 1.0); }

/// N = E_{1/2} = 2 sum_j log f_{1/2}(mu_j); 2 log f_{1/2}(mu) = asinh(sqrt(mu^2 - 1)).
inline double log_negativity(const Eigen::VectorXd& mu) {
  double sum = 0.0;
  for (double m : mu) sum += 2.0 * std::log(f_half(m));
  return sum;
}
inline double log_negativity(const SymplecticSpectrum& s) { return log_negativity(s.mu); }

struct ExcitationProfile {
  std::size_t k = 0;
  double gamma = 0.0;
  Eigen::VectorXd v_in;          ///< (v_k) restricted to Lambda_0
  Eigen::VectorXd v_out;         ///< (v_k) restricted to the complement
  Eigen::VectorXd nu;            ///< gamma_k^{-1} S (v_k)_in
  double inner_energy = 0.0;     ///< nu^T S^{-1} nu
  double complement_energy = 0.0;///< (v_k)_out^T B^{-1} (v_k)_out
  Eigen::VectorXd Q;             ///< Q_{k,j}, j over symplectic modes
  double nu_route_gap = 0.0;     ///< |gamma^{-1} S v_in - (v_in - C B^{-1} v_out)|_inf

  double identity_value() const { return gamma * (inner_energy + complement_energy); }
  double q_sum() const { return Q.sum(); }
};

namespace detail {

inline Eigen::VectorXd gather(const Eigen::VectorXd& v, const std::vector<std::size_t>& idx) {
  Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t i = 0; i < idx.size(); ++i) out(static_cast<Eigen::Index>(i)) = v(static_cast<Eigen::Index>(idx[i]));
  return out;
}

}  // namespace detail

inline ExcitationProfile excitation_profile(const SpectralData& sd, const Region& r, const BipartitionBlocks& b,
                                            const SymplecticSpectrum& s, std::size_t k) {
  if (k >= sd.size()) {
    throw InvalidArgument("excitation_profile: k = " + std::to_string(k) + " out of range for " +
                          std::to_string(sd.size()) + " modes");
  }
  ExcitationProfile p;
  p.k = k;
  p.gamma = sd.gamma(static_cast<Eigen::Index>(k));
  const Eigen::VectorXd v = sd.V.col(static_cast<Eigen::Index>(k));
  p.v_in = detail::gather(v, r.inside());
  p.v_out = detail::gather(v, r.outside());
  p.nu = b.S * p.v_in / p.gamma;
  const Eigen::VectorXd binv_out = b.B_llt.solve(p.v_out);
  const Eigen::VectorXd nu_alt = p.v_in - b.C * binv_out;
  p.nu_route_gap = (p.nu - nu_alt).cwiseAbs().maxCoeff();
  p.inner_energy = p.nu.dot(b.S_llt.solve(p.nu));
  p.complement_energy = p.v_out.dot(binv_out);
  const Eigen::MatrixXd W = s.F2.transpose() * s.A_inv_sqrt;
  const Eigen::VectorXd an = W * p.nu;
  const Eigen::VectorXd bv = W * p.v_in;
  p.Q = p.gamma * (s.mu2.array() * an.array().square() + bv.array().square());
  return p;
}

inline std::vector<ExcitationProfile> excitation_profiles(const SpectralData& sd, const Region& r,
                                                          const BipartitionBlocks& b, const SymplecticSpectrum& s) {
  std::vector<ExcitationProfile> out;
  out.reserve(sd.size());
  for (std::size_t k = 0; k < sd.size(); ++k) out.push_back(excitation_profile(sd, r, b, s, k));
  return out;
}

namespace detail {

/// Ground-state factor g(n) = (2/(1+mu)) r^n, r = (mu-1)/(mu+1).
inline double ground_factor(double mu, std::int64_t n) {
  const double r = (mu - 1.0) / (mu + 1.0);
  return 2.0 / (1.0 + mu) * std::pow(r, static_cast<double>(n));
}

/// g(n) * 2 mu n / (mu^2 - 1) rewritten without the pole at mu = 1.
inline double excited_factor(double mu, std::int64_t n) {
  if (n == 0) return 0.0;
  const double r = (mu - 1.0) / (mu + 1.0);
  return static_cast<double>(n) * (2.0 / (1.0 + mu)) * std::pow(r, static_cast<double>(n - 1)) *
         (2.0 * mu / ((mu + 1.0) * (mu + 1.0)));
}

}  // namespace detail

/// Diagonal entry <Psi_n, rho_hat Psi_n> of the reduced single-excitation state in the
/// eigenbasis of the reduced ground state.
inline double excited_diagonal(const ExcitationProfile& p, const SymplecticSpectrum& s,
                               const std::vector<std::int64_t>& n) {
  const auto m = s.size();
  if (n.size() != m) throw InvalidArgument("excited_diagonal: occupation vector has the wrong length");
  if (static_cast<std::size_t>(p.Q.size()) != m) throw InvalidArgument("excited_diagonal: profile/spectrum mismatch");
  std::vector<double> g(m), e(m);
  double base = 1.0, shift = 1.0;
  for (std::size_t j = 0; j < m; ++j) {
    if (n[j] < 0) throw InvalidArgument("excited_diagonal: negative occupation");
    const double mu = s.mu(static_cast<Eigen::Index>(j));
    g[j] = detail::ground_factor(mu, n[j]);
    e[j] = detail::excited_factor(mu, n[j]);
    base *= g[j];
    shift -= mu / (mu + 1.0) * p.Q(static_cast<Eigen::Index>(j));
  }
  double value = base * shift;
  for (std::size_t j = 0; j < m; ++j) {
    if (e[j] == 0.0) continue;
    double term = p.Q(static_cast<Eigen::Index>(j)) * e[j];
    for (std::size_t l = 0; l < m; ++l) {
      if (l != j) term *= g[l];
    }
    value += term;
  }
  if (value < 0.0) {
    if (value < -kDiagonalFloor) {
      std::ostringstream msg;
      msg << "excited_diagonal: negative value " << value;
      throw DegenerateMatrix(msg.str());
    }
    value = 0.0;
  }
  return value;
}

/// Per-mode occupation cutoff N with r^N below `tail` (at least 1).
inline std::int64_t occupation_cutoff(double mu, double tail = 1e-14) {
  detail::check_mu(mu);
  const double r = (mu - 1.0) / (mu + 1.0);
  if (r <= 0.0) return 2;
  const double n = std::ceil(std::log(tail) / std::log(r));
  // the n r^{n-1} terms decay more slowly; pad to cover them
  const double pad = std::ceil(std::log(n + 1.0) / -std::log(r)) + 2.0;
  return static_cast<std::int64_t>(std::min(n + pad, 1e7));
}

struct TraceCheck {
  double trace = 0.0;
  std::vector<std::int64_t> cutoffs;
};

/// Sum of excited_diagonal over the box prod_j {0, .., N_j - 1}. The expression is
/// separable per mode, so the box sum is assembled from 1D sums.
inline TraceCheck excited_trace(const ExcitationProfile& p, const SymplecticSpectrum& s) {
  const auto m = s.size();
  TraceCheck tc;
  std::vector<double> s0(m, 0.0), s1(m, 0.0);
  double shift = 1.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double mu = s.mu(static_cast<Eigen::Index>(j));
    const auto N = occupation_cutoff(mu);
    tc.cutoffs.push_back(N);
    for (std::int64_t n = 0; n < N; ++n) {
      s0[j] += detail::ground_factor(mu, n);
      s1[j] += detail::excited_factor(mu, n);
    }
    shift -= mu / (mu + 1.0) * p.Q(static_cast<Eigen::Index>(j));
  }
  double base = 1.0;
  for (double v : s0) base *= v;
  double total = base * shift;
  for (std::size_t j = 0; j < m; ++j) {
    double term = p.Q(static_cast<Eigen::Index>(j)) * s1[j];
    for (std::size_t l = 0; l < m; ++l) {
      if (l != j) term *= s0[l];
    }
    total += term;
  }
  tc.trace = total;
  return tc;
}

/// 2 log sum_n sqrt(diag_n) over an explicit box {0..N-1}^m; an upper bound on the
/// 1/2-Renyi entropy of the reduced excited state. Refuses boxes above `max_states`.
inline double diagonal_renyi_bound(const ExcitationProfile& p, const SymplecticSpectrum& s, std::int64_t per_mode,
                                   std::int64_t max_states = 4'000'000) {
  const auto m = s.size();
  if (per_mode < 1) throw InvalidArgument("diagonal_renyi_bound: per_mode must be >= 1");
  double states = 1.0;
  for (std::size_t j = 0; j < m; ++j) states *= static_cast<double>(per_mode);
  if (states > static_cast<double>(max_states)) throw InvalidArgument("diagonal_renyi_bound: truncation box too large");
  std::vector<std::int64_t> n(m, 0);
  double sum = 0.0;
  while (true) {
    sum += std::sqrt(excited_diagonal(p, s, n));
    std::size_t ax = 0;
    for (; ax < m; ++ax) {
      if (++n[ax] < per_mode) break;
      n[ax] = 0;
    }
    if (ax == m) break;
  }
  return 2.0 * std::log(sum);
}

struct ExcitedBound {
  double computed = 0.0;
  std::optional<double> theorem;  ///< 2N + 4 log|Lambda_0|, only when |Lambda_0| > 1
};

/// computed = 2 log[(1 + sum_j Q_j^{1/2} f_{1/2}(mu_j)) prod_l f_{1/2}(mu_l)].
inline ExcitedBound excited_half_renyi_bound(const ExcitationProfile& p, const SymplecticSpectrum& s) {
  double lin = 1.0, log_prod = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    const double f = f_half(s.mu(static_cast<Eigen::Index>(j)));
    lin += std::sqrt(std::max(p.Q(static_cast<Eigen::Index>(j)), 0.0)) * f;
    log_prod += std::log(f);
  }
  ExcitedBound out;
  out.computed = 2.0 * (std::log(lin) + log_prod);
  if (s.size() > 1) out.theorem = 2.0 * log_negativity(s) + 4.0 * std::log(static_cast<double>(s.size()));
  return out;
}

/// log 3 + 2 E_{1/2}; needs |Lambda_0|^2 <= |Lambda|.
inline double ensemble_bound(const SymplecticSpectrum& s, std::size_t lattice_size, std::size_t region_size) {
  if (region_size * region_size > lattice_size) {
    throw HypothesisViolated("ensemble_bound: |L0|^2 = " + std::to_string(region_size * region_size) +
                             " exceeds |L| = " + std::to_string(lattice_size));
  }
  return std::log(3.0) + 2.0 * ground_renyi(s, 0.5);
}

}  // namespace oscent
