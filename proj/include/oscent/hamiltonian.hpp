#pragma once

// The single-particle coupling matrix h of H = p^T p + x^T h x: the
// random-spring (Anderson) model, user-supplied matrices, and the positivity /
// norm checks the entanglement bounds rely on.

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "oscent/errors.hpp"
#include "oscent/lattice.hpp"
#include "oscent/rng.hpp"

namespace oscent {

/// Smallest eigenvalue must exceed this fraction of ||h|| to count as positive definite.
inline constexpr double kPdTolerance = 1e-10;
/// Relative asymmetry accepted for user-supplied matrices before they are symmetrized.
inline constexpr double kSymTolerance = 1e-12;

struct CouplingMatrix {
  Eigen::MatrixXd h;
  std::shared_ptr<const Lattice> lattice;

  std::size_t size() const { return static_cast<std::size_t>(h.rows()); }
};

/// Springs k_j i.i.d. uniform on [0, k_max].
struct DisorderModel {
  double k_max = 1.0;
  std::uint64_t seed = 0;

  void validate() const {
    if (!(k_max > 0.0) || !std::isfinite(k_max)) throw InvalidArgument("DisorderModel: k_max must be positive");
  }
};

struct AssumptionReport {
  bool is_positive_definite = false;
  double min_eigenvalue = 0.0;
  double sqrt_norm = 0.0;  ///< ||h^{1/2}|| = sqrt(largest eigenvalue)
  double D = 0.0;
  bool D_satisfied = false;
};

inline std::vector<double> sample_springs(const DisorderModel& model, const Lattice& lattice,
                                          std::uint64_t realization_index) {
  model.validate();
  std::vector<double> k(lattice.size());
  for (std::size_t j = 0; j < k.size(); ++j) k[j] = model.k_max * rng::uniform01(model.seed, realization_index, j);
  return k;
}

/// h_{jj} = (#neighbours of j inside the box) + k_j, h_{jk} = -1 for nearest neighbours.
inline CouplingMatrix assemble_anderson(std::shared_ptr<const Lattice> lattice, const std::vector<double>& springs) {
  if (!lattice) throw InvalidArgument("assemble_anderson: null lattice");
  const auto n = lattice->size();
  if (springs.size() != n) {
    throw InvalidArgument("assemble_anderson: expected " + std::to_string(n) + " springs, got " +
                          std::to_string(springs.size()));
  }
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    if (!(springs[j] >= 0.0)) throw InvalidArgument("assemble_anderson: springs must be nonnegative");
    const auto& nb = lattice->neighbors(j);
    const auto jj = static_cast<Eigen::Index>(j);
    h(jj, jj) = static_cast<double>(nb.size()) + springs[j];
    for (auto k : nb) h(jj, static_cast<Eigen::Index>(k)) = -1.0;
  }
  return {std::move(h), std::move(lattice)};
}

inline CouplingMatrix assemble_custom(std::shared_ptr<const Lattice> lattice, const Eigen::MatrixXd& entries) {
  if (!lattice) throw InvalidArgument("assemble_custom: null lattice");
  if (entries.rows() != entries.cols()) throw InvalidArgument("assemble_custom: matrix is not square");
  if (static_cast<std::size_t>(entries.rows()) != lattice->size()) {
    throw InvalidArgument("assemble_custom: matrix size " + std::to_string(entries.rows()) +
                          " does not match lattice size " + std::to_string(lattice->size()));
  }
  if (!entries.allFinite()) throw InvalidArgument("assemble_custom: non-finite entries");
  const double scale = std::max(entries.cwiseAbs().maxCoeff(), 1e-300);
  const double asym = (entries - entries.transpose()).cwiseAbs().maxCoeff();
  if (asym > kSymTolerance * scale) {
    std::ostringstream msg;
    msg << "assemble_custom: matrix is not symmetric (max |h_jk - h_kj| = " << asym << ")";
    throw InvalidArgument(msg.str());
  }
  Eigen::MatrixXd h = 0.5 * (entries + entries.transpose());
  return {std::move(h), std::move(lattice)};
}

inline AssumptionReport validate_assumptions(const CouplingMatrix& h, double D) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.h, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw DegenerateMatrix("validate_assumptions: eigensolver failed");
  const auto& ev = es.eigenvalues();
  AssumptionReport r;
  r.min_eigenvalue = ev.minCoeff();
  const double top = ev.maxCoeff();
  const double norm = ev.cwiseAbs().maxCoeff();
  r.is_positive_definite = r.min_eigenvalue > kPdTolerance * norm;
  r.sqrt_norm = std::sqrt(std::max(top, 0.0));
  r.D = D;
  r.D_satisfied = r.sqrt_norm <= D;
  return r;
}

/// Dense matrix from text: one row per line, entries separated by commas (or blanks).
/// Blank lines and lines starting with '#' are skipped.
inline Eigen::MatrixXd parse_dense_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    for (auto& c : line) {
      if (c == ',' || c == ';' || c == '\t' || c == '\r') c = ' ';
    }
    std::istringstream ls(line);
    std::vector<double> row;
    std::string tok;
    while (ls >> tok) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(tok, &used));
        if (used != tok.size()) throw std::invalid_argument(tok);
      } catch (const std::exception&) {
        throw InvalidArgument("parse_dense_matrix: bad number '" + tok + "'");
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InvalidArgument("parse_dense_matrix: ragged rows");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidArgument("parse_dense_matrix: empty matrix");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

inline Eigen::MatrixXd load_dense_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open matrix file '" + path + "'");
  return parse_dense_matrix(in);
}

}  // namespace oscent
