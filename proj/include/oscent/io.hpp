#pragma once

// JSON configs and JSON output.
//
// Config schema (all keys optional unless noted):
//   lattice      {"dimension": d, "lengths": [L_1, ..., L_d]}                (required)
//   region       {"corner": [...], "lengths": [...]} or {"sites": [[...], ...]}
//   regions      [region, ...]            several regions (scan); replaces "region"
//   hamiltonian  {"kind": "anderson", "k_max": 8}
//                {"kind": "anderson", "springs": [k_1, ..., k_N]}
//                {"kind": "custom", "matrix": [[...], ...]} or {"kind": "custom", "matrix_file": "h.csv"}
//   realizations R (default 1)
//   eps          [0.5, 1]
//   excitations  "all" | "worst" | "none" | {"first": i, "last": j}  (zero based)
//   p, s         correlator exponents (defaults 1 and 0.5)
//   D            bound on ||h^{1/2}|| (default sqrt(4 d + k_max), or ||h^{1/2}|| for custom)
//   seed         master seed (default 0)
//   threads      worker threads (default: hardware)

#include <filesystem>
#include <fstream>
#include <string>

#include "json.hpp"
#include "oscent/correlators.hpp"
#include "oscent/errors.hpp"
#include "oscent/experiments.hpp"
#include "oscent/hamiltonian.hpp"

namespace oscent {

using json = nlohmann::ordered_json;

/// A double rounded to 15 significant digits, so dumps are stable across platforms.
inline json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  return std::stod(fmt15(x));
}

namespace detail {

inline const json& need(const json& j, const char* key, const char* where) {
  if (!j.contains(key)) throw InvalidArgument(std::string("config: missing \"") + key + "\" in " + where);
  return j.at(key);
}

inline RegionSpec parse_region(const json& j) {
  if (!j.is_object()) throw InvalidArgument("config: region must be an object");
  RegionSpec r;
  if (j.contains("sites")) {
    for (const auto& s : j.at("sites")) r.sites.push_back(s.get<Site>());
  } else {
    r.corner = need(j, "corner", "region").get<Site>();
    r.lengths = need(j, "lengths", "region").get<std::vector<std::int64_t>>();
  }
  return r;
}

}  // namespace detail

inline ExperimentConfig parse_config(const json& j, const std::filesystem::path& base_dir = {}) {
  try {
    ExperimentConfig c;
    const auto& lat = detail::need(j, "lattice", "config");
    c.dimension = detail::need(lat, "dimension", "lattice").get<std::size_t>();
    c.lengths = detail::need(lat, "lengths", "lattice").get<std::vector<std::int64_t>>();
    if (j.contains("regions")) {
      for (const auto& r : j.at("regions")) c.regions.push_back(detail::parse_region(r));
    } else if (j.contains("region")) {
      c.regions.push_back(detail::parse_region(j.at("region")));
    }
    if (j.contains("hamiltonian")) {
      const auto& h = j.at("hamiltonian");
      const auto kind = h.value("kind", std::string("anderson"));
      if (kind == "anderson") {
        c.hamiltonian.kind = HamiltonianSpec::Kind::Anderson;
        c.hamiltonian.k_max = h.value("k_max", 1.0);
        if (h.contains("springs")) c.hamiltonian.springs = h.at("springs").get<std::vector<double>>();
      } else if (kind == "custom") {
        c.hamiltonian.kind = HamiltonianSpec::Kind::Custom;
        if (h.contains("matrix")) {
          const auto rows = h.at("matrix").get<std::vector<std::vector<double>>>();
          if (rows.empty()) throw InvalidArgument("config: empty custom matrix");
          c.hamiltonian.matrix.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
          for (std::size_t i = 0; i < rows.size(); ++i) {
            if (rows[i].size() != rows[0].size()) throw InvalidArgument("config: ragged custom matrix");
            for (std::size_t k = 0; k < rows[i].size(); ++k) {
              c.hamiltonian.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
            }
          }
        } else {
          std::filesystem::path p = detail::need(h, "matrix_file", "hamiltonian").get<std::string>();
          if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
          c.hamiltonian.matrix = load_dense_matrix(p.string());
        }
      } else {
        throw InvalidArgument("config: unknown hamiltonian kind \"" + kind + "\"");
      }
    }
    c.realizations = j.value("realizations", std::size_t{1});
    if (j.contains("eps")) c.eps = j.at("eps").get<std::vector<double>>();
    if (j.contains("excitations")) {
      const auto& e = j.at("excitations");
      if (e.is_string()) {
        const auto s = e.get<std::string>();
        if (s == "all") c.excitations.kind = ExcitationPolicy::Kind::All;
        else if (s == "worst") c.excitations.kind = ExcitationPolicy::Kind::Worst;
        else if (s == "none") c.excitations.kind = ExcitationPolicy::Kind::None;
        else throw InvalidArgument("config: unknown excitation policy \"" + s + "\"");
      } else {
        c.excitations.kind = ExcitationPolicy::Kind::Range;
        c.excitations.first = detail::need(e, "first", "excitations").get<std::size_t>();
        c.excitations.last = detail::need(e, "last", "excitations").get<std::size_t>();
      }
    }
    c.p = j.value("p", c.p);
    c.s = j.value("s", c.s);
    if (j.contains("D") && !j.at("D").is_null()) c.D = j.at("D").get<double>();
    c.seed = j.value("seed", std::uint64_t{0});
    c.threads = j.value("threads", 0u);
    return c;
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("config: ") + e.what());
  }
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("config file not found: " + path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument("config: " + path + ": " + e.what());
  }
  return parse_config(j, std::filesystem::path(path).parent_path());
}

inline json region_to_json(const RegionSpec& r) {
  json j;
  if (r.corner) {
    j["corner"] = *r.corner;
    j["lengths"] = r.lengths;
  } else {
    j["sites"] = r.sites;
  }
  return j;
}

/// Fully resolved config (custom matrices inlined at full precision), enough to rerun the computation.
inline json config_to_json(const ExperimentConfig& c) {
  json j;
  j["lattice"] = {{"dimension", c.dimension}, {"lengths", c.lengths}};
  j["regions"] = json::array();
  for (const auto& r : c.regions) j["regions"].push_back(region_to_json(r));
  json h;
  if (c.hamiltonian.kind == HamiltonianSpec::Kind::Anderson) {
    h["kind"] = "anderson";
    h["k_max"] = c.hamiltonian.k_max;
    if (!c.hamiltonian.springs.empty()) {
      h["springs"] = json::array();
      for (double k : c.hamiltonian.springs) h["springs"].push_back(k);
    }
  } else {
    h["kind"] = "custom";
    h["matrix"] = json::array();
    for (Eigen::Index i = 0; i < c.hamiltonian.matrix.rows(); ++i) {
      json row = json::array();
      for (Eigen::Index k = 0; k < c.hamiltonian.matrix.cols(); ++k) row.push_back(c.hamiltonian.matrix(i, k));
      h["matrix"].push_back(row);
    }
  }
  j["hamiltonian"] = h;
  j["realizations"] = c.realizations;
  j["eps"] = json::array();
  for (double e : c.eps) j["eps"].push_back(num(e));
  switch (c.excitations.kind) {
    case ExcitationPolicy::Kind::All: j["excitations"] = "all"; break;
    case ExcitationPolicy::Kind::Worst: j["excitations"] = "worst"; break;
    case ExcitationPolicy::Kind::None: j["excitations"] = "none"; break;
    case ExcitationPolicy::Kind::Range:
      j["excitations"] = {{"first", c.excitations.first}, {"last", c.excitations.last}};
      break;
  }
  j["p"] = num(c.p);
  j["s"] = num(c.s);
  j["D"] = c.D ? num(*c.D) : json(nullptr);
  j["seed"] = c.seed;
  j["threads"] = c.threads;
  return j;
}

inline json to_json(const EntropyReport& r) {
  json j;
  j["eps"] = json::array();
  j["renyi_entropy"] = json::array();
  for (std::size_t i = 0; i < r.eps.size(); ++i) {
    j["eps"].push_back(num(r.eps[i]));
    j["renyi_entropy"].push_back(num(r.entropy[i]));
  }
  j["von_neumann_entropy"] = num(r.von_neumann);
  j["log_negativity"] = num(r.log_negativity);
  j["symplectic_eigenvalues"] = json::array();
  for (double m : r.mu) j["symplectic_eigenvalues"].push_back(num(m));
  j["excitations"] = json::array();
  for (const auto& x : r.excited) {
    j["excitations"].push_back({{"k", x.k},
                                {"computed_bound", num(x.computed)},
                                {"theorem_bound", x.theorem ? num(*x.theorem) : json(nullptr)}});
  }
  j["ensemble_bound"] = r.ensemble ? num(*r.ensemble) : json(nullptr);
  if (!r.ensemble_note.empty()) j["ensemble_bound_note"] = r.ensemble_note;
  return j;
}

inline json to_json(const Stat& s) { return {{"mean", num(s.mean)}, {"se", num(s.se)}, {"count", s.count}}; }

inline json to_json(const ScanResult& s) {
  json j;
  j["lattice_size"] = s.lattice_size;
  j["region_size"] = s.region_size;
  j["boundary_size"] = s.boundary_size;
  j["realizations"] = s.records.size();
  j["failed_realizations"] = s.failed;
  json agg;
  for (const auto& [name, st] : s.aggregates) agg[name] = to_json(st);
  j["aggregates"] = agg;
  return j;
}

inline json to_json(const LineFit& f) {
  if (!f.defined) return {{"defined", false}};
  return {{"defined", true},
          {"slope", num(f.slope)},
          {"slope_se", num(f.slope_se)},
          {"intercept", num(f.intercept)},
          {"residual", num(f.residual)}};
}

inline json to_json(const DecayFit& f) {
  json j{{"eta", num(f.eta)},           {"eta_se", num(f.eta_stderr)}, {"C", num(f.C)},
         {"s", num(f.s)},               {"residual", num(f.residual)}, {"r_min", f.r_min},
         {"r_max", f.r_max},            {"points", f.points},          {"status", "empirical"}};
  if (!f.warnings.empty()) j["warnings"] = f.warnings;
  return j;
}

inline void write_json(const std::filesystem::path& p, const json& j) {
  std::ofstream out(p);
  if (!out) throw InvalidArgument("cannot write " + p.string());
  out << j.dump(2) << '\n';
}

}  // namespace oscent
