#pragma once

// Disorder Monte Carlo over Anderson realizations: per-realization entropies
// and bounds, aggregation, area-law fits and the CSV / gnuplot writers.
//
// Every realization is a pure function of (master seed, realization index), so
// results do not depend on the number of worker threads.

#include <Eigen/Dense>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include "oscent/correlators.hpp"
#include "oscent/entanglement.hpp"
#include "oscent/errors.hpp"
#include "oscent/hamiltonian.hpp"
#include "oscent/lattice.hpp"
#include "oscent/spectral.hpp"

namespace oscent {

/// Sub-box (corner + lengths) or an explicit site list.
struct RegionSpec {
  std::optional<Site> corner;
  std::vector<std::int64_t> lengths;
  std::vector<Site> sites;

  Region build(std::shared_ptr<const Lattice> lat) const {
    if (corner) return Region::sub_box(std::move(lat), *corner, lengths);
    if (sites.empty()) throw InvalidArgument("region: give either corner/lengths or a non-empty site list");
    return Region::from_sites(std::move(lat), sites);
  }
};

struct HamiltonianSpec {
  enum class Kind { Anderson, Custom } kind = Kind::Anderson;
  double k_max = 1.0;
  std::vector<double> springs;  ///< fixed springs; overrides sampling when non-empty
  Eigen::MatrixXd matrix;       ///< custom kind
};

struct ExcitationPolicy {
  enum class Kind { All, Range, Worst, None } kind = Kind::All;
  std::size_t first = 0, last = 0;  ///< Range: inclusive, zero based
};

struct ExperimentConfig {
  std::size_t dimension = 1;
  std::vector<std::int64_t> lengths{2};
  std::vector<RegionSpec> regions;
  HamiltonianSpec hamiltonian;
  std::size_t realizations = 1;
  std::vector<double> eps{0.5, 1.0};
  ExcitationPolicy excitations;
  double p = 1.0;
  double s = 0.5;
  std::optional<double> D;
  std::uint64_t seed = 0;
  unsigned threads = 0;  ///< 0: hardware concurrency

  void validate() const {
    if (realizations < 1) throw InvalidArgument("config: realizations must be >= 1");
    if (regions.empty()) throw InvalidArgument("config: no region given");
    if (eps.empty()) throw InvalidArgument("config: eps list is empty");
    for (double e : eps) {
      if (!(e > 0.0) || e > 1.0) throw DomainError("config: eps values must lie in (0, 1]");
    }
    if (!(p > 0.0) || p > 1.0) throw DomainError("config: p must lie in (0, 1]");
    if (!(s > 0.0) || s > 1.0) throw DomainError("config: s must lie in (0, 1]");
    if (D && !(*D > 0.0)) throw DomainError("config: D must be positive");
    if (hamiltonian.kind == HamiltonianSpec::Kind::Anderson && hamiltonian.springs.empty() &&
        !(hamiltonian.k_max > 0.0)) {
      throw InvalidArgument("config: k_max must be positive");
    }
  }

  double resolved_D() const {
    if (D) return *D;
    if (hamiltonian.kind == HamiltonianSpec::Kind::Anderson) {
      double kmax = hamiltonian.k_max;
      for (double k : hamiltonian.springs) kmax = std::max(kmax, k);
      return default_D(dimension, kmax);
    }
    return 0.0;  // custom: filled in from ||h^{1/2}|| per realization
  }
};

/// The coupling matrix of realization `index`.
inline CouplingMatrix realization_matrix(const ExperimentConfig& cfg, std::shared_ptr<const Lattice> lat,
                                         std::uint64_t index) {
  const auto& hs = cfg.hamiltonian;
  if (hs.kind == HamiltonianSpec::Kind::Custom) return assemble_custom(std::move(lat), hs.matrix);
  if (!hs.springs.empty()) return assemble_anderson(std::move(lat), hs.springs);
  DisorderModel model{hs.k_max, cfg.seed};
  const auto springs = sample_springs(model, *lat, index);
  return assemble_anderson(std::move(lat), springs);
}

struct ExcitedRecord {
  std::size_t k = 0;
  double computed = 0.0;
  std::optional<double> theorem;
};

/// Everything computed for one matrix and one region.
struct EntropyReport {
  std::vector<double> eps;
  std::vector<double> entropy;  ///< E_eps for each eps
  double von_neumann = 0.0;
  double log_negativity = 0.0;
  std::vector<ExcitedRecord> excited;
  std::optional<double> ensemble;
  std::string ensemble_note;
  std::vector<double> mu;
};

struct Analysis {
  SpectralData sd;
  Eigen::MatrixXd hsqrt;
  BipartitionBlocks blocks;
  SymplecticSpectrum sspec;
};

inline Analysis analyze(const CouplingMatrix& h, const Region& r) {
  Analysis a;
  a.sd = sym_eig(h);
  a.hsqrt = spd_sqrt(a.sd);
  a.blocks = partition_blocks(a.hsqrt, r);
  a.sspec = symplectic_spectrum(a.blocks);
  return a;
}

inline std::vector<std::size_t> selected_excitations(const ExcitationPolicy& pol, std::size_t n) {
  std::vector<std::size_t> ks;
  switch (pol.kind) {
    case ExcitationPolicy::Kind::None:
      break;
    case ExcitationPolicy::Kind::Range:
      if (pol.first > pol.last || pol.last >= n) {
        throw InvalidArgument("excitations: range [" + std::to_string(pol.first) + ", " + std::to_string(pol.last) +
                              "] is outside 0.." + std::to_string(n - 1));
      }
      for (auto k = pol.first; k <= pol.last; ++k) ks.push_back(k);
      break;
    case ExcitationPolicy::Kind::All:
    case ExcitationPolicy::Kind::Worst:
      for (std::size_t k = 0; k < n; ++k) ks.push_back(k);
      break;
  }
  return ks;
}

inline EntropyReport entropy_report(const Analysis& a, const Region& r, const std::vector<double>& eps,
                                    const ExcitationPolicy& pol) {
  EntropyReport rep;
  rep.eps = eps;
  for (double e : eps) rep.entropy.push_back(ground_renyi(a.sspec, e));
  rep.von_neumann = von_neumann(a.sspec);
  rep.log_negativity = log_negativity(a.sspec);
  rep.mu.assign(a.sspec.mu.begin(), a.sspec.mu.end());
  for (auto k : selected_excitations(pol, a.sd.size())) {
    const auto prof = excitation_profile(a.sd, r, a.blocks, a.sspec, k);
    const auto b = excited_half_renyi_bound(prof, a.sspec);
    rep.excited.push_back({k, b.computed, b.theorem});
  }
  if (pol.kind == ExcitationPolicy::Kind::Worst && !rep.excited.empty()) {
    auto worst = *std::max_element(rep.excited.begin(), rep.excited.end(),
                                   [](const auto& x, const auto& y) { return x.computed < y.computed; });
    rep.excited = {worst};
  }
  try {
    rep.ensemble = ensemble_bound(a.sspec, r.lattice().size(), r.size());
  } catch (const HypothesisViolated& e) {
    rep.ensemble_note = e.what();
  }
  return rep;
}

struct RealizationRecord {
  std::uint64_t index = 0;
  bool pd_ok = false;
  std::string error;
  double min_eigenvalue = 0.0;
  double sqrt_norm = 0.0;
  double D = 0.0;
  bool D_satisfied = false;
  EntropyReport report;
  double gs_bound = 0.0;
  double mu_min = 1.0, mu_max = 1.0;
};

struct Stat {
  double mean = 0.0;
  double se = 0.0;
  std::size_t count = 0;
};

/// Welford accumulation; feed values in a fixed order for reproducible means.
class Welford {
 public:
  void add(double x) {
    ++n_;
    const double d = x - mean_;
    mean_ += d / static_cast<double>(n_);
    m2_ += d * (x - mean_);
  }
  Stat stat() const {
    Stat s;
    s.count = n_;
    s.mean = mean_;
    s.se = n_ > 1 ? std::sqrt(m2_ / static_cast<double>(n_ - 1) / static_cast<double>(n_)) : 0.0;
    return s;
  }

 private:
  std::size_t n_ = 0;
  double mean_ = 0.0, m2_ = 0.0;
};

struct ScanResult {
  std::size_t lattice_size = 0, region_size = 0, boundary_size = 0;
  std::vector<RealizationRecord> records;  ///< sorted by realization index
  std::size_t failed = 0;
  std::vector<std::pair<std::string, Stat>> aggregates;  ///< in a fixed order

  const Stat* aggregate(const std::string& name) const {
    for (const auto& [n, s] : aggregates) {
      if (n == name) return &s;
    }
    return nullptr;
  }
};

inline std::string eps_label(double e) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "E_eps=%.15g", e);
  return buf;
}

inline RealizationRecord run_realization(const ExperimentConfig& cfg, const Region& r, std::uint64_t index) {
  RealizationRecord rec;
  rec.index = index;
  try {
    const auto h = realization_matrix(cfg, r.lattice_ptr(), index);
    double D = cfg.resolved_D();
    auto rep = validate_assumptions(h, D > 0.0 ? D : 1.0);
    if (D <= 0.0) {
      D = rep.sqrt_norm;
      rep.D = D;
      rep.D_satisfied = true;
    }
    rec.min_eigenvalue = rep.min_eigenvalue;
    rec.sqrt_norm = rep.sqrt_norm;
    rec.D = D;
    rec.D_satisfied = rep.D_satisfied;
    if (!rep.is_positive_definite) {
      rec.error = "coupling matrix is not positive definite";
      return rec;
    }
    const auto a = analyze(h, r);
    rec.report = entropy_report(a, r, cfg.eps, cfg.excitations);
    const auto table = correlator_table(spd_inv_sqrt(a.sd), r.lattice_ptr());
    rec.gs_bound = gs_correlator_bound(table, r, cfg.p, D);
    rec.mu_min = a.sspec.mu.minCoeff();
    rec.mu_max = a.sspec.mu.maxCoeff();
    rec.pd_ok = true;
  } catch (const DegenerateMatrix& e) {
    rec.error = e.what();
    rec.pd_ok = false;
  }
  return rec;
}

inline unsigned resolve_threads(unsigned requested) {
  if (requested > 0) return requested;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

/// Runs fn(i) for i in [0, n) on a small pool; fn must only write to slot i.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(n, 1))));
  if (threads == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < n; i = next++) fn(i);
      } catch (...) {
        errors[t] = std::current_exception();
        next = n;
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

inline ScanResult run_scan(const ExperimentConfig& cfg, const RegionSpec& spec) {
  cfg.validate();
  auto lat = make_box(cfg.dimension, cfg.lengths);
  const Region r = spec.build(lat);
  if (r.complement_size() == 0) throw InvalidArgument("scan: region must leave a non-empty complement");
  ScanResult res;
  res.lattice_size = lat->size();
  res.region_size = r.size();
  res.boundary_size = inner_boundary(r).size();
  res.records.resize(cfg.realizations);
  parallel_for(cfg.realizations, resolve_threads(cfg.threads),
               [&](std::size_t i) { res.records[i] = run_realization(cfg, r, static_cast<std::uint64_t>(i)); });

  std::vector<Welford> w_eps(cfg.eps.size());
  Welford w_vn, w_ln, w_gs, w_th, w_cm, w_ens;
  bool any_theorem = false, any_excited = false, any_ensemble = false;
  for (const auto& rec : res.records) {
    if (!rec.pd_ok) {
      ++res.failed;
      continue;
    }
    for (std::size_t e = 0; e < cfg.eps.size(); ++e) w_eps[e].add(rec.report.entropy[e]);
    w_vn.add(rec.report.von_neumann);
    w_ln.add(rec.report.log_negativity);
    w_gs.add(rec.gs_bound);
    if (!rec.report.excited.empty()) {
      any_excited = true;
      double worst = rec.report.excited.front().computed;
      for (const auto& x : rec.report.excited) worst = std::max(worst, x.computed);
      w_cm.add(worst);
      if (rec.report.excited.front().theorem) {
        any_theorem = true;
        w_th.add(*rec.report.excited.front().theorem);
      }
    }
    if (rec.report.ensemble) {
      any_ensemble = true;
      w_ens.add(*rec.report.ensemble);
    }
  }
  if (res.failed == res.records.size()) throw DegenerateMatrix("scan: every realization failed the positivity check");
  for (std::size_t e = 0; e < cfg.eps.size(); ++e) res.aggregates.emplace_back(eps_label(cfg.eps[e]), w_eps[e].stat());
  res.aggregates.emplace_back("von_neumann", w_vn.stat());
  res.aggregates.emplace_back("log_negativity", w_ln.stat());
  res.aggregates.emplace_back("gs_correlator_bound", w_gs.stat());
  if (any_excited) res.aggregates.emplace_back("excited_computed_bound_max", w_cm.stat());
  if (any_theorem) res.aggregates.emplace_back("excited_theorem_bound", w_th.stat());
  if (any_ensemble) res.aggregates.emplace_back("ensemble_bound", w_ens.stat());
  return res;
}

inline std::vector<ScanResult> run_scan(const ExperimentConfig& cfg) {
  std::vector<ScanResult> out;
  for (const auto& spec : cfg.regions) out.push_back(run_scan(cfg, spec));
  return out;
}

struct ArealawPoint {
  double region_size = 0.0;
  double boundary_size = 0.0;
  double value = 0.0;
};

struct LineFit {
  double slope = NAN, intercept = NAN, slope_se = NAN, residual = NAN;
  bool defined = false;
};

inline LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  LineFit f;
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i], my += y[i];
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (!(sxx > 1e-300)) return f;  // all x equal: slope undefined
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double rss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - f.intercept - f.slope * x[i];
    rss += e * e;
  }
  f.residual = std::sqrt(rss / n);
  f.slope_se = x.size() > 2 ? std::sqrt(rss / (n - 2.0) / sxx) : 0.0;
  f.defined = true;
  return f;
}

struct ArealawFit {
  LineFit vs_boundary;
  LineFit vs_log_size;
};

inline ArealawFit arealaw_fit(const std::vector<ArealawPoint>& pts) {
  std::vector<double> rs;
  for (const auto& p : pts) rs.push_back(p.region_size);
  std::sort(rs.begin(), rs.end());
  if (std::unique(rs.begin(), rs.end()) - rs.begin() < 3) {
    throw InsufficientData("arealaw_fit: need at least 3 distinct region sizes");
  }
  std::vector<double> xb, xl, y;
  for (const auto& p : pts) {
    xb.push_back(p.boundary_size);
    xl.push_back(std::log(p.region_size));
    y.push_back(p.value);
  }
  return {fit_line(xb, y), fit_line(xl, y)};
}

/// Points from scans using the mean excited theorem bound.
inline std::vector<ArealawPoint> arealaw_points(const std::vector<ScanResult>& scans,
                                                const std::string& quantity = "excited_theorem_bound") {
  std::vector<ArealawPoint> pts;
  for (const auto& s : scans) {
    if (const auto* st = s.aggregate(quantity)) {
      pts.push_back({static_cast<double>(s.region_size), static_cast<double>(s.boundary_size), st->mean});
    }
  }
  return pts;
}

inline std::string fmt15(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

inline const char* kScanCsvHeader =
    "realization_index,lattice_size,region_size,boundary_size,eps,E_eps_ground,log_negativity,excited_k,"
    "excited_computed_bound,excited_theorem_bound,gs_correlator_bound_p,pd_ok\n";

/// One row per (realization, eps, excitation); excitation fields are empty when none are requested.
inline void write_scan_csv(std::ostream& os, const std::vector<ScanResult>& scans, bool header = true) {
  if (header) os << kScanCsvHeader;
  for (const auto& s : scans) {
    const std::string geo =
        std::to_string(s.lattice_size) + ',' + std::to_string(s.region_size) + ',' + std::to_string(s.boundary_size);
    for (const auto& rec : s.records) {
      if (!rec.pd_ok) {
        os << rec.index << ',' << geo << ",,,,,,,,0\n";
        continue;
      }
      const auto& rep = rec.report;
      for (std::size_t e = 0; e < rep.eps.size(); ++e) {
        const std::string head = std::to_string(rec.index) + ',' + geo + ',' + fmt15(rep.eps[e]) + ',' +
                                 fmt15(rep.entropy[e]) + ',' + fmt15(rep.log_negativity) + ',';
        const std::string tail = ',' + fmt15(rec.gs_bound) + ",1\n";
        if (rep.excited.empty()) {
          os << head << ",," << tail;
          continue;
        }
        for (const auto& x : rep.excited) {
          os << head << x.k << ',' << fmt15(x.computed) << ',' << (x.theorem ? fmt15(*x.theorem) : std::string())
             << tail;
        }
      }
    }
  }
}

/// Whitespace-separated table for plotting scaling against region size.
inline void write_gnuplot(std::ostream& os, const std::vector<ScanResult>& scans) {
  os << "# region_size boundary_size log_region_size";
  const std::vector<std::string> cols{"log_negativity", "von_neumann", "gs_correlator_bound",
                                      "excited_computed_bound_max", "excited_theorem_bound"};
  for (const auto& c : cols) os << ' ' << c << "_mean " << c << "_se";
  os << '\n';
  for (const auto& s : scans) {
    os << s.region_size << ' ' << s.boundary_size << ' ' << fmt15(std::log(static_cast<double>(s.region_size)));
    for (const auto& c : cols) {
      if (const auto* st = s.aggregate(c)) {
        os << ' ' << fmt15(st->mean) << ' ' << fmt15(st->se);
      } else {
        os << " nan nan";
      }
    }
    os << '\n';
  }
}

}  // namespace oscent
