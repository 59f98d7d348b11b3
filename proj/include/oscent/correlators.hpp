#pragma once

// Singular eigenfunction correlators |<delta_j, h^{-1/2} delta_k>|, the
// correlator bound on ground-state entropies, and exponential decay fits.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "oscent/errors.hpp"
#include "oscent/hamiltonian.hpp"
#include "oscent/lattice.hpp"
#include "oscent/spectral.hpp"

namespace oscent {

/// Means below this are treated as underflow and left out of decay fits.
inline constexpr double kUnderflowMean = 1e-300;

struct CorrelatorTable {
  Eigen::MatrixXd values;  ///< |(h^{-1/2})_{jk}|
  std::shared_ptr<const Lattice> lattice;
};

inline CorrelatorTable correlator_table(const Eigen::MatrixXd& h_inv_sqrt, std::shared_ptr<const Lattice> lattice) {
  if (!lattice || static_cast<std::size_t>(h_inv_sqrt.rows()) != lattice->size()) {
    throw InvalidArgument("correlator_table: matrix does not match the lattice");
  }
  Eigen::MatrixXd v = h_inv_sqrt.cwiseAbs();
  v = 0.5 * (v + v.transpose());
  return {std::move(v), std::move(lattice)};
}

inline CorrelatorTable correlator_table(const CouplingMatrix& h) {
  return correlator_table(spd_inv_sqrt(h), h.lattice);
}

/// Default D = sqrt(4d + k_max), the almost-sure bound on ||h^{1/2}|| for the Anderson model.
inline double default_D(std::size_t d, double k_max) { return std::sqrt(4.0 * static_cast<double>(d) + k_max); }

/// (D^{p/2}/p) sum_{k in L0, j in L0^c} |<delta_k, h^{-1/2} delta_j>|^{p/2}.
inline double gs_correlator_bound(const CorrelatorTable& t, const Region& r, double p, double D) {
  if (!(p > 0.0) || p > 1.0) throw DomainError("gs_correlator_bound: p must be in (0, 1]");
  if (!(D > 0.0)) throw DomainError("gs_correlator_bound: D must be positive");
  if (static_cast<std::size_t>(t.values.rows()) != r.lattice().size()) {
    throw InvalidArgument("gs_correlator_bound: table does not match region");
  }
  double sum = 0.0;
  for (auto k : r.inside()) {
    for (auto j : r.outside()) {
      sum += std::pow(t.values(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)), 0.5 * p);
    }
  }
  return std::pow(D, 0.5 * p) / p * sum;
}

/// (1/p) sum_j (mu_j^2 - 1)^{p/2}, which sits between E_eps and the correlator bound.
inline double symplectic_p_sum(const Eigen::VectorXd& mu, double p) {
  double sum = 0.0;
  for (double m : mu) sum += std::pow(std::max(m * m - 1.0, 0.0), 0.5 * p);
  return sum / p;
}

/// Running averages of |.|^s binned by l1 distance.
class DecayAccumulator {
 public:
  explicit DecayAccumulator(double s) : s_(s) {
    if (!(s > 0.0) || s > 1.0) throw DomainError("decay: s must be in (0, 1]");
  }

  void add(const CorrelatorTable& t) {
    if (!t.lattice) throw InvalidArgument("decay: table without lattice");
    if (!lattice_) {
      lattice_ = t.lattice;
    } else if (lattice_->lengths() != t.lattice->lengths()) {
      throw InvalidArgument("decay: tables come from different lattices");
    }
    const auto n = static_cast<std::size_t>(t.values.rows());
    for (std::size_t j = 0; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        auto& bin = bins_[lattice_->distance(j, k)];
        bin.first += std::pow(t.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)), s_);
        bin.second += 1;
      }
    }
    ++tables_;
  }

  double s() const { return s_; }
  std::size_t tables() const { return tables_; }

  /// distance -> mean of |.|^s over pairs and tables
  std::map<std::int64_t, double> means() const {
    std::map<std::int64_t, double> out;
    for (const auto& [r, bin] : bins_) out[r] = bin.first / static_cast<double>(bin.second);
    return out;
  }

 private:
  double s_;
  std::shared_ptr<const Lattice> lattice_;
  std::map<std::int64_t, std::pair<double, std::uint64_t>> bins_;
  std::size_t tables_ = 0;
};

struct DecayFit {
  double eta = 0.0;
  double C = 0.0;
  double s = 0.0;
  double residual = 0.0;      ///< RMS of log-space residuals
  double eta_stderr = 0.0;
  std::int64_t r_min = 0, r_max = 0;
  std::size_t points = 0;
  std::vector<std::string> warnings;
};

/// Least squares of log(mean) against distance for distances >= 1.
inline DecayFit decay_fit(const std::map<std::int64_t, double>& means, double s) {
  DecayFit fit;
  fit.s = s;
  std::vector<double> xs, ys;
  for (const auto& [r, m] : means) {
    if (r < 1) continue;
    if (!(m >= kUnderflowMean)) {
      fit.warnings.push_back("distance " + std::to_string(r) + " dropped: mean below underflow threshold");
      continue;
    }
    xs.push_back(static_cast<double>(r));
    ys.push_back(std::log(m));
  }
  if (xs.size() < 3) throw InsufficientData("decay_fit: fewer than 3 distances with usable data");
  const double n = static_cast<double>(xs.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double e = ys[i] - (intercept + slope * xs[i]);
    rss += e * e;
  }
  fit.eta = -slope;
  fit.C = std::exp(intercept);
  fit.residual = std::sqrt(rss / n);
  fit.eta_stderr = xs.size() > 2 ? std::sqrt(rss / (n - 2.0) / sxx) : 0.0;
  fit.r_min = static_cast<std::int64_t>(xs.front());
  fit.r_max = static_cast<std::int64_t>(xs.back());
  fit.points = xs.size();
  return fit;
}

inline DecayFit decay_fit(const std::vector<CorrelatorTable>& tables, double s) {
  DecayAccumulator acc(s);
  for (const auto& t : tables) acc.add(t);
  return decay_fit(acc.means(), s);
}

/// sum_{k in Z^d} exp(-eta |k|_1 / 2) = ((1 + e^{-eta/2}) / (1 - e^{-eta/2}))^d.
inline double lattice_exp_sum(double eta, std::size_t d) {
  if (!(eta > 0.0)) throw DomainError("lattice_exp_sum: eta must be positive (sum diverges)");
  const double q = std::exp(-0.5 * eta);
  return std::pow((1.0 + q) / (1.0 - q), static_cast<double>(d));
}

inline double tilde_C(double C, double eta, double s, double D, std::size_t d) {
  if (!(s > 0.0) || s > 1.0) throw DomainError("tilde_C: s must be in (0, 1]");
  if (!(C > 0.0) || !(D > 0.0)) throw DomainError("tilde_C: C and D must be positive");
  const double sum = lattice_exp_sum(eta, d);
  return std::pow(D, 0.5 * s) * C / s * sum * sum;
}

inline void write_correlator_csv(std::ostream& os, const CorrelatorTable& t) {
  char buf[64];
  os << "j,k,distance,value\n";
  const auto n = static_cast<std::size_t>(t.values.rows());
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = 0; k < n; ++k) {
      std::snprintf(buf, sizeof buf, "%.15g", t.values(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(k)));
      os << j << ',' << k << ',' << t.lattice->distance(j, k) << ',' << buf << '\n';
    }
  }
}

}  // namespace oscent
