#include <gtest/gtest.h>

#include <random>

#include "oscent/entanglement.hpp"
#include "oscent/hamiltonian.hpp"
#include "oscent/spectral.hpp"

using namespace oscent;

namespace {

struct System {
  CouplingMatrix h;
  Region r;
  SpectralData sd;
  BipartitionBlocks b;
  SymplecticSpectrum s;
};

System make_system(CouplingMatrix h, std::vector<std::size_t> inside) {
  Region r(h.lattice, inside);
  auto sd = sym_eig(h);
  auto b = partition_blocks(spd_sqrt(sd), r);
  auto s = symplectic_spectrum(b);
  return {std::move(h), std::move(r), std::move(sd), std::move(b), std::move(s)};
}

System decoupled_two_site() {
  auto lat = make_box(1, {2});
  Eigen::MatrixXd m = Eigen::Vector2d(0.7, 2.5).asDiagonal();
  return make_system(assemble_custom(lat, m), {0});
}

System two_site() { return make_system(assemble_anderson(make_box(1, {2}), {1, 1}), {0}); }

}  // namespace

TEST(FEps, Examples) {
  for (double e : {0.1, 0.5, 0.9}) EXPECT_DOUBLE_EQ(f_eps(1.0, e), 1.0);
  EXPECT_NEAR(f_eps(1.25, 0.5), std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(f_half(1.25), std::sqrt(2.0), 1e-15);
  for (double x : {1.1, 2.0, 10.0}) {
    EXPECT_LE(f_half(x), std::sqrt(x * x - 1.0) + 1.0);
    EXPECT_NEAR(f_half(x), f_eps(x, 0.5), 1e-13 * f_half(x));
    EXPECT_NEAR(f_half(x), 1.0 / (std::sqrt((x + 1) / 2) - std::sqrt((x - 1) / 2)), 1e-12 * f_half(x));
  }
}

TEST(FEps, DomainErrors) {
  EXPECT_THROW(f_eps(0.9, 0.5), DomainError);
  EXPECT_THROW(f_eps(2.0, 0.0), DomainError);
  EXPECT_THROW(f_eps(2.0, 1.0), DomainError);
  EXPECT_THROW(ground_renyi(Eigen::VectorXd::Ones(2), 1.5), DomainError);
}

TEST(GroundRenyi, ProductStateIsZero) {
  const Eigen::VectorXd mu = Eigen::VectorXd::Ones(3);
  for (double e : {0.2, 0.5, 1.0}) EXPECT_EQ(ground_renyi(mu, e), 0.0);
}

TEST(GroundRenyi, TwoSite) {
  const auto sys = two_site();
  EXPECT_NEAR(ground_renyi(sys.s, 0.5), 0.274653072167027, 1e-13);
  EXPECT_NEAR(ground_renyi(sys.s, 0.5), 2.0 * std::log(f_half(sys.s.mu(0))), 1e-15);
}

TEST(GroundRenyi, NonIncreasingInEps) {
  const Eigen::VectorXd one = Eigen::VectorXd::Constant(1, 1.5);
  double prev = ground_renyi(one, 0.3);
  for (double e : {0.5, 0.9, 1.0}) {
    const double v = ground_renyi(one, e);
    EXPECT_LE(v, prev);
    prev = v;
  }
  std::mt19937_64 gen(8);
  std::uniform_real_distribution<double> u(1.0, 6.0);
  for (int t = 0; t < 100; ++t) {
    Eigen::VectorXd mu(5);
    for (auto& m : mu) m = u(gen);
    double last = ground_renyi(mu, 0.1);
    for (int k = 2; k <= 10; ++k) {
      const double v = ground_renyi(mu, 0.1 * k);
      EXPECT_LE(v, last + 1e-12);
      last = v;
    }
  }
}

TEST(GroundRenyi, VonNeumannLimit) {
  std::mt19937_64 gen(9);
  std::uniform_real_distribution<double> u(1.0, 20.0);
  for (int t = 0; t < 50; ++t) {
    Eigen::VectorXd mu(6);
    for (auto& m : mu) m = u(gen);
    EXPECT_LE(std::abs(ground_renyi(mu, 1.0 - 1e-6) - ground_renyi(mu, 1.0)), 1e-4);
  }
}

TEST(LogNegativity, Examples) {
  EXPECT_EQ(log_negativity(Eigen::VectorXd::Ones(1)), 0.0);
  EXPECT_NEAR(log_negativity(Eigen::VectorXd::Constant(1, 1.25)), std::log(2.0), 1e-15);
  const Eigen::Vector3d mu(1.0, 1.7, 4.2);
  EXPECT_NEAR(log_negativity(mu), ground_renyi(Eigen::VectorXd(mu), 0.5), 1e-14);
  for (double m : {1.0, 1.3, 7.0}) EXPECT_NEAR(2.0 * std::log(f_half(m)), std::asinh(std::sqrt(m * m - 1)), 1e-14);
}

TEST(ExcitationProfile, DecoupledInsideSaturatesTheSum) {
  const auto sys = decoupled_two_site();
  const auto p = excitation_profile(sys.sd, sys.r, sys.b, sys.s, 0);
  EXPECT_NEAR(std::abs(p.nu(0)), 1.0, 1e-14);
  EXPECT_NEAR(p.Q(0), 2.0, 1e-14);
  EXPECT_NEAR(p.identity_value(), 1.0, 1e-14);
}

TEST(ExcitationProfile, DecoupledOutsideIsZero) {
  const auto sys = decoupled_two_site();
  const auto p = excitation_profile(sys.sd, sys.r, sys.b, sys.s, 1);
  EXPECT_EQ(p.v_in(0), 0.0);
  EXPECT_EQ(p.nu(0), 0.0);
  EXPECT_EQ(p.Q(0), 0.0);
  EXPECT_THROW(excitation_profile(sys.sd, sys.r, sys.b, sys.s, 2), InvalidArgument);
}

TEST(ExcitationProfile, SumRulesOnRandomChains) {
  auto lat = make_box(1, {10});
  for (std::uint64_t k = 0; k < 20; ++k) {
    const auto sys = make_system(assemble_anderson(lat, sample_springs({3.0, 21}, *lat, k)), {3, 4, 5, 6});
    const auto ps = excitation_profiles(sys.sd, sys.r, sys.b, sys.s);
    Eigen::VectorXd col = Eigen::VectorXd::Zero(4);
    for (const auto& p : ps) {
      EXPECT_GE(p.Q.minCoeff(), 0.0);
      EXPECT_LE(p.q_sum(), 2.0 + 1e-9);
      EXPECT_NEAR(p.identity_value(), 1.0, 1e-8);
      EXPECT_LE(p.nu_route_gap, 1e-10);
      col += p.Q;
    }
    for (double c : col) EXPECT_NEAR(c, 2.0, 1e-8);
  }
}

TEST(ExcitedDiagonal, DecoupledLimit) {
  const auto sys = decoupled_two_site();
  const auto p = excitation_profile(sys.sd, sys.r, sys.b, sys.s, 0);
  EXPECT_NEAR(excited_diagonal(p, sys.s, {0}), 0.0, 1e-14);
  EXPECT_NEAR(excited_diagonal(p, sys.s, {1}), 1.0, 1e-14);
  EXPECT_EQ(excited_diagonal(p, sys.s, {2}), 0.0);
  EXPECT_THROW(excited_diagonal(p, sys.s, {0, 1}), InvalidArgument);
  EXPECT_THROW(excited_diagonal(p, sys.s, {-1}), InvalidArgument);
}

TEST(ExcitedDiagonal, TwoSiteFrozenValues) {
  // reference values from the quadrature oracle
  const auto sys = two_site();
  const double mu = sys.s.mu(0);
  const auto g = excitation_profile(sys.sd, sys.r, sys.b, sys.s, 0);
  EXPECT_NEAR(detail::ground_factor(mu, 0), 2.0 / (1.0 + mu), 1e-15);
  EXPECT_NEAR(2.0 / (1.0 + mu), 0.981376010702573, 1e-13);
  double sum = 0.0;
  for (std::int64_t n = 0; n < 40; ++n) sum += excited_diagonal(g, sys.s, {n});
  EXPECT_NEAR(sum, 1.0, 1e-12);
}

TEST(ExcitedDiagonal, NonNegativeAndNormalized) {
  auto lat = make_box(2, {4, 4});
  const auto box = Region::sub_box(lat, {1, 1}, {2, 2});
  for (std::uint64_t k = 0; k < 5; ++k) {
    const auto sys = make_system(assemble_anderson(lat, sample_springs({8.0, 2}, *lat, k)), box.inside());
    for (const auto& p : excitation_profiles(sys.sd, sys.r, sys.b, sys.s)) {
      const auto tc = excited_trace(p, sys.s);
      EXPECT_NEAR(tc.trace, 1.0, 1e-6);
      std::vector<std::int64_t> n(4, 0);
      for (int t = 0; t < 81; ++t) {
        int rem = t;
        for (auto& v : n) v = rem % 3, rem /= 3;
        EXPECT_GE(excited_diagonal(p, sys.s, n), 0.0);
      }
    }
  }
}

TEST(ExcitedBound, DecoupledCases) {
  const auto sys = decoupled_two_site();
  const auto in = excited_half_renyi_bound(excitation_profile(sys.sd, sys.r, sys.b, sys.s, 0), sys.s);
  EXPECT_NEAR(in.computed, 2.0 * std::log(1.0 + std::sqrt(2.0)), 1e-14);
  EXPECT_NEAR(in.computed, 1.76274717403909, 1e-13);
  EXPECT_FALSE(in.theorem.has_value());
  const auto out = excited_half_renyi_bound(excitation_profile(sys.sd, sys.r, sys.b, sys.s, 1), sys.s);
  EXPECT_EQ(out.computed, 0.0);
}

TEST(ExcitedBound, ComputedBelowTheoremOnRandomChains) {
  auto lat = make_box(1, {12});
  for (std::uint64_t k = 0; k < 20; ++k) {
    const auto sys = make_system(assemble_anderson(lat, sample_springs({8.0, 4}, *lat, k)), {4, 5, 6, 7});
    const double N = log_negativity(sys.s);
    for (const auto& p : excitation_profiles(sys.sd, sys.r, sys.b, sys.s)) {
      const auto b = excited_half_renyi_bound(p, sys.s);
      ASSERT_TRUE(b.theorem.has_value());
      EXPECT_LE(b.computed, *b.theorem);
      EXPECT_LE(b.computed, 2.0 * N + 2.0 * std::log(1.0 + std::sqrt(2.0) * 4.0) + 1e-12);
      // the computed bound dominates the exact diagonal bound on a truncated box
      EXPECT_LE(diagonal_renyi_bound(p, sys.s, 6), b.computed + 1e-10);
    }
  }
}

TEST(EnsembleBound, Examples) {
  const auto dec = spectrum_from_mu({1.0, 1.0});
  EXPECT_NEAR(ensemble_bound(dec, 9, 2), std::log(3.0), 1e-15);
  EXPECT_THROW(ensemble_bound(dec, 9, 4), HypothesisViolated);
  EXPECT_NO_THROW(ensemble_bound(dec, 16, 4));

  auto lat = make_box(1, {100});
  const auto box = Region::sub_box(lat, {45}, {10});
  const auto sys = make_system(assemble_anderson(lat, sample_springs({8.0, 1}, *lat, 0)), box.inside());
  const double e = ensemble_bound(sys.s, 100, 10);
  EXPECT_TRUE(std::isfinite(e));
  EXPECT_NEAR(e, std::log(3.0) + 2.0 * ground_renyi(sys.s, 0.5), 1e-14);
}
