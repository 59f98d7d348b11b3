// oscent: entanglement entropies and bounds for disordered oscillator lattices.
//
// Exit codes: 0 success, 1 computation failure (or a failed verify row), 2 usage
// or configuration error.

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "oscent/correlators.hpp"
#include "oscent/entanglement.hpp"
#include "oscent/experiments.hpp"
#include "oscent/io.hpp"
#include "oscent/oracle/verify.hpp"
#include "oscent/version.hpp"

namespace fs = std::filesystem;
using namespace oscent;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string command;
  std::string config;
  std::string out = "oscent-out";
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
  std::string eps;
  std::optional<double> p, s, tolerance;
  std::vector<std::string> argv;
  mutable std::optional<ExperimentConfig> resolved;  ///< set once the config has been loaded
};

std::vector<double> parse_eps_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(tok, &used);
    } catch (const std::exception&) {
      throw UsageError("--eps: '" + tok + "' is not a number");
    }
    if (used != tok.size()) throw UsageError("--eps: '" + tok + "' is not a number");
    if (!(v > 0.0) || v > 1.0) throw UsageError("--eps: " + tok + " is outside (0, 1]");
    out.push_back(v);
  }
  if (out.empty()) throw UsageError("--eps: empty list");
  return out;
}

ExperimentConfig resolve_config(const Options& o) {
  // flag values are checked before the config file is touched
  std::optional<std::vector<double>> eps;
  if (!o.eps.empty()) eps = parse_eps_list(o.eps);
  if (o.p && (!(*o.p > 0.0) || *o.p > 1.0)) throw UsageError("--p must lie in (0, 1]");
  if (o.s && (!(*o.s > 0.0) || *o.s > 1.0)) throw UsageError("--s must lie in (0, 1]");
  if (o.config.empty()) throw UsageError(o.command + ": --config is required");

  ExperimentConfig cfg;
  try {
    cfg = load_config(o.config);
    if (eps) cfg.eps = *eps;
    if (o.p) cfg.p = *o.p;
    if (o.s) cfg.s = *o.s;
    if (o.seed) cfg.seed = *o.seed;
    if (o.threads) {
      cfg.threads = *o.threads;
    } else if (const char* env = std::getenv("OSCENT_THREADS"); env && *env) {
      cfg.threads = static_cast<unsigned>(std::stoul(env));
    }
    cfg.validate();
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  o.resolved = cfg;
  return cfg;
}

void write_manifest(const Options& o, const std::optional<ExperimentConfig>& cfg, const std::vector<std::string>& files,
                    const std::string& error = {}) {
  json m;
  m["tool"] = "oscent";
  m["version"] = OSCENT_VERSION;
  m["command"] = o.command;
  m["argv"] = o.argv;
  m["eigen_version"] = std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                       std::to_string(EIGEN_MINOR_VERSION);
  m["compiler"] = __VERSION__;
  if (cfg) {
    m["config"] = config_to_json(*cfg);
    m["seed"] = cfg->seed;
    m["threads"] = resolve_threads(cfg->threads);
  }
  m["outputs"] = files;
  m["status"] = error.empty() ? "ok" : "failed";
  if (!error.empty()) m["error"] = error;
  write_json(fs::path(o.out) / "manifest.json", m);
}

/// Failed computations still leave a manifest behind, so the failing input can be rerun.
int computation_failure(const Options& o, const char* prefix, const std::exception& e) {
  std::fprintf(stderr, "%s: %s\n", prefix, e.what());
  try {
    fs::create_directories(o.out);
    write_manifest(o, o.resolved, {}, e.what());
  } catch (const std::exception& w) {
    std::fprintf(stderr, "warning: could not write manifest: %s\n", w.what());
  }
  return 1;
}

void print_kv(const std::string& key, double v) { std::printf("  %-28s %s\n", key.c_str(), fmt15(v).c_str()); }

struct Single {
  CouplingMatrix h;
  AssumptionReport assumptions;
  Region region;
  Analysis analysis;
};

Single single_realization(const ExperimentConfig& cfg, const RegionSpec& spec) {
  auto lat = make_box(cfg.dimension, cfg.lengths);
  Region r = spec.build(lat);
  auto h = realization_matrix(cfg, lat, 0);
  double D = cfg.resolved_D();
  auto rep = validate_assumptions(h, D > 0.0 ? D : 1.0);
  if (D <= 0.0) rep = validate_assumptions(h, rep.sqrt_norm);
  if (!rep.is_positive_definite) {
    throw DegenerateMatrix("coupling matrix is not positive definite (smallest eigenvalue " +
                           fmt15(rep.min_eigenvalue) + ")");
  }
  auto a = analyze(h, r);
  return {std::move(h), rep, std::move(r), std::move(a)};
}

json assumptions_json(const AssumptionReport& a) {
  return {{"positive_definite", a.is_positive_definite},
          {"min_eigenvalue", num(a.min_eigenvalue)},
          {"sqrt_norm", num(a.sqrt_norm)},
          {"D", num(a.D)},
          {"D_satisfied", a.D_satisfied}};
}

int cmd_entropy(const Options& o, bool excited) {
  auto cfg = resolve_config(o);
  ExcitationPolicy pol = excited ? cfg.excitations : ExcitationPolicy{ExcitationPolicy::Kind::None};
  json out = json::array();
  for (std::size_t ri = 0; ri < cfg.regions.size(); ++ri) {
    auto sr = single_realization(cfg, cfg.regions[ri]);
    const auto rep = entropy_report(sr.analysis, sr.region, cfg.eps, pol);
    std::printf("region %zu: |L| = %zu, |L0| = %zu, |dL0| = %zu\n", ri, sr.region.lattice().size(),
                sr.region.size(), inner_boundary(sr.region).size());
    for (std::size_t e = 0; e < rep.eps.size(); ++e) print_kv("E_" + fmt15(rep.eps[e]), rep.entropy[e]);
    print_kv("von_neumann", rep.von_neumann);
    print_kv("log_negativity", rep.log_negativity);
    for (const auto& x : rep.excited) {
      std::printf("  k = %-5zu computed_bound %s  theorem_bound %s\n", x.k, fmt15(x.computed).c_str(),
                  x.theorem ? fmt15(*x.theorem).c_str() : "n/a");
    }
    json j = to_json(rep);
    j["region_index"] = ri;
    j["assumptions"] = assumptions_json(sr.assumptions);
    out.push_back(j);
  }
  fs::create_directories(o.out);
  const std::string name = excited ? "excited_entropy.json" : "ground_entropy.json";
  write_json(fs::path(o.out) / name, out);
  write_manifest(o, cfg, {name});
  return 0;
}

int cmd_ensemble(const Options& o) {
  auto cfg = resolve_config(o);
  json out = json::array();
  for (std::size_t ri = 0; ri < cfg.regions.size(); ++ri) {
    auto sr = single_realization(cfg, cfg.regions[ri]);
    const double b = ensemble_bound(sr.analysis.sspec, sr.region.lattice().size(), sr.region.size());
    std::printf("region %zu: ensemble bound log 3 + 2 E_1/2 = %s\n", ri, fmt15(b).c_str());
    out.push_back({{"region_index", ri},
                   {"ensemble_bound", num(b)},
                   {"E_half", num(ground_renyi(sr.analysis.sspec, 0.5))}});
  }
  fs::create_directories(o.out);
  write_json(fs::path(o.out) / "ensemble_bound.json", out);
  write_manifest(o, cfg, {"ensemble_bound.json"});
  return 0;
}

int cmd_correlators(const Options& o) {
  auto cfg = resolve_config(o);
  fs::create_directories(o.out);
  std::vector<std::string> files;
  json out;
  auto lat = make_box(cfg.dimension, cfg.lengths);
  auto sr = single_realization(cfg, cfg.regions.front());
  const auto table = correlator_table(spd_inv_sqrt(sr.analysis.sd), lat);
  {
    std::ofstream csv(fs::path(o.out) / "correlators.csv");
    write_correlator_csv(csv, table);
    files.push_back("correlators.csv");
  }
  const double D = sr.assumptions.D;
  json regions = json::array();
  for (std::size_t ri = 0; ri < cfg.regions.size(); ++ri) {
    const Region r = cfg.regions[ri].build(lat);
    const double b = gs_correlator_bound(table, r, cfg.p, D);
    std::printf("region %zu: gs correlator bound (p = %s, D = %s) = %s\n", ri, fmt15(cfg.p).c_str(),
                fmt15(D).c_str(), fmt15(b).c_str());
    regions.push_back({{"region_index", ri}, {"gs_correlator_bound", num(b)}});
  }
  out["p"] = num(cfg.p);
  out["D"] = num(D);
  out["regions"] = regions;

  if (cfg.realizations > 1 && cfg.hamiltonian.kind == HamiltonianSpec::Kind::Anderson) {
    std::vector<CorrelatorTable> tables(cfg.realizations);
    parallel_for(cfg.realizations, resolve_threads(cfg.threads), [&](std::size_t i) {
      const auto h = realization_matrix(cfg, lat, i);
      tables[i] = correlator_table(h);
    });
    DecayAccumulator acc(cfg.s);
    for (const auto& t : tables) acc.add(t);
    try {
      const auto fit = decay_fit(acc.means(), cfg.s);
      for (const auto& w : fit.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
      std::printf("decay fit (s = %s, %zu realizations): eta = %s +- %s, C = %s, residual = %s, r in [%lld, %lld]\n",
                  fmt15(cfg.s).c_str(), cfg.realizations, fmt15(fit.eta).c_str(), fmt15(fit.eta_stderr).c_str(),
                  fmt15(fit.C).c_str(), fmt15(fit.residual).c_str(), static_cast<long long>(fit.r_min),
                  static_cast<long long>(fit.r_max));
      json jf = to_json(fit);
      if (fit.eta > 0.0) {
        const double tc = tilde_C(fit.C, fit.eta, cfg.s, D, cfg.dimension);
        jf["tilde_C"] = num(tc);
        std::printf("  tilde C = %s (empirical)\n", fmt15(tc).c_str());
      }
      out["decay_fit"] = jf;
    } catch (const InsufficientData& e) {
      std::fprintf(stderr, "warning: %s\n", e.what());
      out["decay_fit"] = {{"error", e.what()}};
    }
  }
  write_json(fs::path(o.out) / "correlators.json", out);
  files.push_back("correlators.json");
  write_manifest(o, cfg, files);
  return 0;
}

int cmd_scan(const Options& o) {
  auto cfg = resolve_config(o);
  const auto scans = run_scan(cfg);
  fs::create_directories(o.out);
  {
    std::ofstream csv(fs::path(o.out) / "scan.csv");
    write_scan_csv(csv, scans);
  }
  {
    std::ofstream dat(fs::path(o.out) / "scan.dat");
    write_gnuplot(dat, scans);
  }
  json summary;
  summary["regions"] = json::array();
  for (const auto& s : scans) {
    summary["regions"].push_back(to_json(s));
    std::printf("|L0| = %zu, |dL0| = %zu, %zu realizations (%zu failed)\n", s.region_size, s.boundary_size,
                s.records.size(), s.failed);
    for (const auto& [name, st] : s.aggregates) {
      std::printf("  %-28s %s +- %s\n", name.c_str(), fmt15(st.mean).c_str(), fmt15(st.se).c_str());
    }
  }
  try {
    const auto fit = arealaw_fit(arealaw_points(scans));
    summary["arealaw_fit"] = {{"quantity", "excited_theorem_bound"},
                              {"vs_boundary", to_json(fit.vs_boundary)},
                              {"vs_log_region_size", to_json(fit.vs_log_size)}};
    if (fit.vs_log_size.defined) {
      std::printf("area-law fit: slope vs log|L0| = %s +- %s\n", fmt15(fit.vs_log_size.slope).c_str(),
                  fmt15(fit.vs_log_size.slope_se).c_str());
    }
  } catch (const InsufficientData&) {
  }
  write_json(fs::path(o.out) / "scan_summary.json", summary);
  write_manifest(o, cfg, {"scan.csv", "scan.dat", "scan_summary.json"});
  return 0;
}

int cmd_verify(const Options& o) {
  oracle::VerifyOptions vo;
  if (o.tolerance) {
    if (!(*o.tolerance > 0.0)) throw UsageError("--tolerance must be positive");
    vo.tolerance = *o.tolerance;
  }
  if (o.seed) vo.seed = *o.seed;
  const auto rows = oracle::run_verify(vo);
  bool ok = true;
  json out = json::array();
  std::printf("%-62s %-10s %-10s %s\n", "identity", "error", "tolerance", "result");
  for (const auto& r : rows) {
    std::printf("%-62s %-10.3e %-10.1e %s\n", r.name.c_str(), r.error, r.tolerance, r.pass ? "PASS" : "FAIL");
    ok = ok && r.pass;
    out.push_back({{"name", r.name}, {"error", num(r.error)}, {"tolerance", num(r.tolerance)}, {"pass", r.pass}});
  }
  fs::create_directories(o.out);
  write_json(fs::path(o.out) / "verify.json", out);
  write_manifest(o, std::nullopt, {"verify.json"});
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  for (int i = 0; i < argc; ++i) o.argv.emplace_back(argv[i]);

  CLI::App app{"Entanglement entropies and bounds for disordered harmonic oscillator lattices"};
  app.set_version_flag("--version", OSCENT_VERSION);
  app.require_subcommand(1, 1);
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config, "JSON config file");
    sub->add_option("--out", o.out, "output directory")->capture_default_str();
    sub->add_option("--threads", o.threads, "worker threads (env OSCENT_THREADS)");
    sub->add_option("--seed", o.seed, "master seed");
    sub->add_option("--eps", o.eps, "comma separated eps values in (0, 1]");
    sub->add_option("--p", o.p, "correlator bound exponent in (0, 1]");
    sub->add_option("--s", o.s, "fractional moment for the decay fit, in (0, 1]");
    sub->add_option("--tolerance", o.tolerance, "verify: tolerance for the quadrature identities");
  };
  const std::vector<std::pair<std::string, std::string>> cmds{
      {"ground-entropy", "Renyi, von Neumann entropies and log negativity of the reduced ground state"},
      {"excited-entropy", "1/2-Renyi bounds for single-excitation eigenstates"},
      {"ensemble-bound", "log 3 + 2 E_1/2 bound for the uniform single-excitation ensemble"},
      {"correlators", "correlator table, ground-state bound and disorder-averaged decay fit"},
      {"scan", "disorder Monte Carlo over one or more regions"},
      {"verify", "quadrature checks of the Gaussian identities and brute-force reduced states"}};
  for (const auto& [name, help] : cmds) add_common(app.add_subcommand(name, help));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  o.command = app.get_subcommands().front()->get_name();

  try {
    if (o.command == "verify") return cmd_verify(o);
    if (o.command == "ground-entropy") return cmd_entropy(o, false);
    if (o.command == "excited-entropy") return cmd_entropy(o, true);
    if (o.command == "ensemble-bound") return cmd_ensemble(o);
    if (o.command == "correlators") return cmd_correlators(o);
    if (o.command == "scan") return cmd_scan(o);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const InvalidArgument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const HypothesisViolated& e) {
    return computation_failure(o, "hypothesis violated", e);
  } catch (const std::exception& e) {
    return computation_failure(o, "error", e);
  }
  return 2;
}
