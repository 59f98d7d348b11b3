#pragma once

// Dense linear algebra for the ground-state analysis: eigendecomposition of h,
// SPD square roots, the Lambda_0 / complement block split of h^{1/2}, the Schur
// complement S = A - C B^{-1} C^T and the symplectic spectrum derived from it.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "oscent/errors.hpp"
#include "oscent/hamiltonian.hpp"
#include "oscent/lattice.hpp"

namespace oscent {

/// mu_j^2 in [1 - kMuClip, 1) is rounded to 1; anything lower is an error.
inline constexpr double kMuClip = 1e-10;

struct SpectralData {
  Eigen::VectorXd gamma2;  ///< eigenvalues of h, ascending
  Eigen::VectorXd gamma;   ///< sqrt(gamma2)
  Eigen::MatrixXd V;       ///< columns v_j

  std::size_t size() const { return static_cast<std::size_t>(gamma.size()); }
};

namespace detail {

inline Eigen::MatrixXd symmetrized(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

/// Largest-magnitude entry of every column made positive; first one wins on near ties.
inline void fix_signs(Eigen::MatrixXd& V) {
  for (Eigen::Index c = 0; c < V.cols(); ++c) {
    const double top = V.col(c).cwiseAbs().maxCoeff();
    for (Eigen::Index r = 0; r < V.rows(); ++r) {
      if (std::abs(V(r, c)) >= top * (1.0 - 1e-12)) {
        if (V(r, c) < 0) V.col(c) *= -1.0;
        break;
      }
    }
  }
}

struct SymEig {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

inline SymEig sym_eig_raw(const Eigen::MatrixXd& m, const char* who) {
  if (m.rows() != m.cols()) throw InvalidArgument(std::string(who) + ": matrix is not square");
  if (m.rows() == 0) throw InvalidArgument(std::string(who) + ": empty matrix");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(symmetrized(m));
  if (es.info() != Eigen::Success) throw DegenerateMatrix(std::string(who) + ": eigensolver did not converge");
  SymEig out{es.eigenvalues(), es.eigenvectors()};
  fix_signs(out.vectors);
  return out;
}

inline void require_pd(const Eigen::VectorXd& ev, const char* who) {
  const double norm = ev.cwiseAbs().maxCoeff();
  if (!(ev.minCoeff() > kPdTolerance * norm)) {
    std::ostringstream msg;
    msg << who << ": matrix is not positive definite (smallest eigenvalue " << ev.minCoeff() << ")";
    throw DegenerateMatrix(msg.str());
  }
}

inline Eigen::MatrixXd spectral_function(const SymEig& e, const Eigen::VectorXd& fvals) {
  Eigen::MatrixXd out = e.vectors * fvals.asDiagonal() * e.vectors.transpose();
  return symmetrized(out);
}

}  // namespace detail

inline SpectralData sym_eig(const Eigen::MatrixXd& h) {
  auto e = detail::sym_eig_raw(h, "sym_eig");
  detail::require_pd(e.values, "sym_eig");
  SpectralData sd;
  sd.gamma2 = e.values;
  sd.gamma = e.values.cwiseSqrt();
  sd.V = std::move(e.vectors);
  return sd;
}
inline SpectralData sym_eig(const CouplingMatrix& h) { return sym_eig(h.h); }

inline Eigen::MatrixXd spd_sqrt(const SpectralData& sd) {
  Eigen::MatrixXd out = sd.V * sd.gamma.asDiagonal() * sd.V.transpose();
  return detail::symmetrized(out);
}
inline Eigen::MatrixXd spd_inv_sqrt(const SpectralData& sd) {
  Eigen::MatrixXd out = sd.V * sd.gamma.cwiseInverse().asDiagonal() * sd.V.transpose();
  return detail::symmetrized(out);
}

inline Eigen::MatrixXd spd_sqrt(const Eigen::MatrixXd& h) { return spd_sqrt(sym_eig(h)); }
inline Eigen::MatrixXd spd_inv_sqrt(const Eigen::MatrixXd& h) { return spd_inv_sqrt(sym_eig(h)); }
inline Eigen::MatrixXd spd_sqrt(const CouplingMatrix& h) { return spd_sqrt(h.h); }
inline Eigen::MatrixXd spd_inv_sqrt(const CouplingMatrix& h) { return spd_inv_sqrt(h.h); }

/// h^{1/2} = [[A, C], [C^T, B]] with Lambda_0 rows first.
struct BipartitionBlocks {
  Eigen::MatrixXd A, B, C;
  Eigen::MatrixXd S;  ///< Schur complement A - C B^{-1} C^T
  Eigen::LLT<Eigen::MatrixXd> B_llt;
  Eigen::LLT<Eigen::MatrixXd> S_llt;

  Eigen::Index inner_size() const { return A.rows(); }
  Eigen::Index outer_size() const { return B.rows(); }
};

namespace detail {

inline Eigen::MatrixXd take(const Eigen::MatrixXd& m, const std::vector<std::size_t>& rows,
                            const std::vector<std::size_t>& cols) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          m(static_cast<Eigen::Index>(rows[i]), static_cast<Eigen::Index>(cols[j]));
    }
  }
  return out;
}

inline Eigen::LLT<Eigen::MatrixXd> checked_llt(const Eigen::MatrixXd& m, const char* what) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) throw DegenerateMatrix(std::string("partition_blocks: ") + what + " is not positive definite");
  const Eigen::VectorXd d = llt.matrixLLT().diagonal();
  const double ratio = d.minCoeff() / d.maxCoeff();
  if (!(ratio * ratio > kPdTolerance)) {
    throw DegenerateMatrix(std::string("partition_blocks: ") + what + " is numerically singular");
  }
  return llt;
}

}  // namespace detail

inline BipartitionBlocks partition_blocks(const Eigen::MatrixXd& hsqrt, const Region& r) {
  if (static_cast<std::size_t>(hsqrt.rows()) != r.lattice().size() || hsqrt.rows() != hsqrt.cols()) {
    throw InvalidArgument("partition_blocks: matrix size does not match the lattice");
  }
  if (r.size() == 0) throw InvalidArgument("partition_blocks: region is empty");
  if (r.complement_size() == 0) throw InvalidArgument("partition_blocks: region has empty complement");
  BipartitionBlocks b;
  b.A = detail::symmetrized(detail::take(hsqrt, r.inside(), r.inside()));
  b.B = detail::symmetrized(detail::take(hsqrt, r.outside(), r.outside()));
  b.C = detail::take(hsqrt, r.inside(), r.outside());
  b.B_llt = detail::checked_llt(b.B, "B");
  b.S = detail::symmetrized(b.A - b.C * b.B_llt.solve(b.C.transpose()));
  b.S_llt = detail::checked_llt(b.S, "Schur complement");
  return b;
}

struct SymplecticSpectrum {
  Eigen::VectorXd mu;      ///< ascending, >= 1
  Eigen::VectorXd mu2;
  Eigen::VectorXd sigma;   ///< (1 - mu^2) / (1 + mu^2)
  Eigen::VectorXd kappa;   ///< 2 mu / (1 + mu^2)
  Eigen::MatrixXd F2;      ///< orthogonal, eigenvectors of A^{1/2} S^{-1} A^{1/2}
  Eigen::MatrixXd F;       ///< A^{-1/2} F2 diag(2 mu^2 / (1 + mu^2))^{1/2}
  Eigen::MatrixXd A_sqrt;
  Eigen::MatrixXd A_inv_sqrt;

  std::size_t size() const { return static_cast<std::size_t>(mu.size()); }
};

/// Spectrum from a plain list of mu values (tests and what-if runs; F2 = F = identity).
inline SymplecticSpectrum spectrum_from_mu(const std::vector<double>& mus) {
  SymplecticSpectrum s;
  const auto n = static_cast<Eigen::Index>(mus.size());
  s.mu.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double m = mus[static_cast<std::size_t>(j)];
    if (!(m >= 1.0) || !std::isfinite(m)) throw DomainError("spectrum_from_mu: symplectic eigenvalues must be >= 1");
    s.mu(j) = m;
  }
  std::sort(s.mu.begin(), s.mu.end());
  s.mu2 = s.mu.array().square();
  s.sigma = (1.0 - s.mu2.array()) / (1.0 + s.mu2.array());
  s.kappa = 2.0 * s.mu.array() / (1.0 + s.mu2.array());
  s.F2 = s.F = s.A_sqrt = s.A_inv_sqrt = Eigen::MatrixXd::Identity(n, n);
  return s;
}

inline SymplecticSpectrum symplectic_spectrum(const BipartitionBlocks& b) {
  const auto ea = detail::sym_eig_raw(b.A, "symplectic_spectrum");
  detail::require_pd(ea.values, "symplectic_spectrum");
  SymplecticSpectrum s;
  s.A_sqrt = detail::spectral_function(ea, ea.values.cwiseSqrt());
  s.A_inv_sqrt = detail::spectral_function(ea, ea.values.cwiseSqrt().cwiseInverse());

  const Eigen::MatrixXd M = detail::symmetrized(s.A_sqrt * b.S_llt.solve(s.A_sqrt));
  auto em = detail::sym_eig_raw(M, "symplectic_spectrum");
  s.mu2 = em.values;
  for (Eigen::Index j = 0; j < s.mu2.size(); ++j) {
    if (s.mu2(j) < 1.0) {
      if (s.mu2(j) < 1.0 - kMuClip) {
        std::ostringstream msg;
        msg << "symplectic_spectrum: mu^2 = " << s.mu2(j) << " is below 1";
        throw DegenerateMatrix(msg.str());
      }
      s.mu2(j) = 1.0;
    }
  }
  s.mu = s.mu2.cwiseSqrt();
  s.sigma = (1.0 - s.mu2.array()) / (1.0 + s.mu2.array());
  s.kappa = 2.0 * s.mu.array() / (1.0 + s.mu2.array());
  s.F2 = std::move(em.vectors);
  const Eigen::VectorXd scale = (2.0 * s.mu2.array() / (1.0 + s.mu2.array())).sqrt();
  s.F = s.A_inv_sqrt * s.F2 * scale.asDiagonal();
  return s;
}

/// Theta = A^{-1/2} C B^{-1} C^T A^{-1/2}.
inline Eigen::MatrixXd theta(const BipartitionBlocks& b, const SymplecticSpectrum& s) {
  return detail::symmetrized(s.A_inv_sqrt * b.C * b.B_llt.solve(b.C.transpose()) * s.A_inv_sqrt);
}

/// Gamma = diag(S^{-1}, A), position block first.
inline Eigen::MatrixXd covariance_matrix(const BipartitionBlocks& b) {
  const auto n = b.A.rows();
  Eigen::MatrixXd G = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  G.topLeftCorner(n, n) = detail::symmetrized(b.S_llt.solve(Eigen::MatrixXd::Identity(n, n)));
  G.bottomRightCorner(n, n) = b.A;
  return G;
}

/// Positive eigenvalues of i J Gamma, ascending. Computed from the Hermitian matrix
/// i Gamma^{1/2} J Gamma^{1/2}, which is similar to i J Gamma.
inline Eigen::VectorXd covariance_symplectic_eigenvalues(const Eigen::MatrixXd& G) {
  if (G.rows() != G.cols() || G.rows() % 2 != 0) throw InvalidArgument("covariance matrix must be 2n x 2n");
  const auto n = G.rows() / 2;
  const Eigen::MatrixXd g = spd_sqrt(G);
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  J.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  J.bottomLeftCorner(n, n) = -Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd K = g * J * g;  // antisymmetric
  const Eigen::MatrixXcd H = std::complex<double>(0.0, 1.0) * (0.5 * (K - K.transpose())).cast<std::complex<double>>();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H, Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw DegenerateMatrix("covariance_symplectic_eigenvalues: eigensolver failed");
  return es.eigenvalues().tail(n);
}

}  // namespace oscent
