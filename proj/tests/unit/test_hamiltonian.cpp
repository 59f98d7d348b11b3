#include <gtest/gtest.h>

#include <sstream>

#include "oscent/hamiltonian.hpp"
#include "oscent/spectral.hpp"

using namespace oscent;

TEST(SampleSprings, SupportAndDeterminism) {
  auto lat = make_box(2, {5, 5});
  const DisorderModel m{1.0, 42};
  const auto a = sample_springs(m, *lat, 7);
  const auto b = sample_springs(m, *lat, 7);
  EXPECT_EQ(a, b);
  for (double k : a) {
    EXPECT_GE(k, 0.0);
    EXPECT_LE(k, 1.0);
  }
  EXPECT_NE(a, sample_springs(m, *lat, 8));
  EXPECT_NE(a, sample_springs(DisorderModel{1.0, 43}, *lat, 7));
}

TEST(SampleSprings, MeanWithinThreeSigma) {
  auto lat = make_box(1, {1000});
  const DisorderModel m{3.0, 5};
  double sum = 0.0;
  std::size_t count = 0;
  for (std::uint64_t r = 0; r < 100; ++r) {
    for (double k : sample_springs(m, *lat, r)) sum += k, ++count;
  }
  ASSERT_EQ(count, 100000u);
  const double mean = sum / static_cast<double>(count);
  EXPECT_NEAR(mean, 1.5, 3.0 * 3.0 / std::sqrt(12.0 * 1e5));
}

TEST(SampleSprings, RejectsNonPositiveKmax) {
  auto lat = make_box(1, {3});
  EXPECT_THROW(sample_springs(DisorderModel{0.0, 1}, *lat, 0), InvalidArgument);
}

TEST(AssembleAnderson, TwoSite) {
  auto lat = make_box(1, {2});
  const auto h = assemble_anderson(lat, {1, 1});
  Eigen::Matrix2d want;
  want << 2, -1, -1, 2;
  EXPECT_EQ(h.h, Eigen::MatrixXd(want));
  const auto sd = sym_eig(h);
  EXPECT_NEAR(sd.gamma2(0), 1.0, 1e-14);
  EXPECT_NEAR(sd.gamma2(1), 3.0, 1e-14);
}

TEST(AssembleAnderson, SpringFreeChainIsTheLaplacian) {
  auto lat = make_box(1, {3});
  const auto h = assemble_anderson(lat, {0, 0, 0});
  EXPECT_EQ(h.h.diagonal(), Eigen::Vector3d(1, 2, 1));
  EXPECT_EQ(h.h(0, 1), -1.0);
  EXPECT_EQ(h.h(0, 2), 0.0);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.h);
  EXPECT_GE(es.eigenvalues().minCoeff(), -1e-14);
  EXPECT_LT(es.eigenvalues().minCoeff(), 1e-12);
  // Laplacian rows sum to zero, in the interior and on the edge alike
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_EQ(h.h.row(i).sum(), 0.0);
}

TEST(AssembleAnderson, LengthMismatch) {
  auto lat = make_box(1, {3});
  EXPECT_THROW(assemble_anderson(lat, {1, 1}), InvalidArgument);
}

TEST(AssembleAnderson, RandomRealizationsArePositiveAndBounded) {
  const double kmax = 5.0;
  auto lat = make_box(2, {6, 6});
  for (std::uint64_t r = 0; r < 30; ++r) {
    const auto h = assemble_anderson(lat, sample_springs({kmax, 99}, *lat, r));
    EXPECT_EQ(h.h, h.h.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h.h);
    EXPECT_GT(es.eigenvalues().minCoeff(), 0.0);
    EXPECT_LE(es.eigenvalues().maxCoeff(), 4.0 * 2 + kmax);
    for (Eigen::Index i = 0; i < h.h.rows(); ++i) {
      EXPECT_GE(h.h(i, i), h.h.row(i).cwiseAbs().sum() - h.h(i, i));
    }
  }
}

TEST(AssembleCustom, IdentityAndErrors) {
  auto lat = make_box(1, {3});
  const auto h = assemble_custom(lat, Eigen::MatrixXd::Identity(3, 3));
  EXPECT_EQ(h.h, Eigen::MatrixXd::Identity(3, 3));
  EXPECT_THROW(assemble_custom(lat, Eigen::MatrixXd::Identity(3, 2)), InvalidArgument);
  EXPECT_THROW(assemble_custom(lat, Eigen::MatrixXd::Identity(2, 2)), InvalidArgument);
  Eigen::MatrixXd bad = Eigen::MatrixXd::Identity(3, 3);
  bad(0, 1) = 1.0;
  EXPECT_THROW(assemble_custom(lat, bad), InvalidArgument);
}

TEST(AssembleCustom, SymmetrizesRoundTripNoise) {
  auto lat = make_box(1, {2});
  Eigen::MatrixXd m(2, 2);
  m << 2, -1, -1 + 1e-15, 2;
  const auto h = assemble_custom(lat, m);
  EXPECT_EQ(h.h(0, 1), h.h(1, 0));
}

TEST(ValidateAssumptions, Examples) {
  auto lat = make_box(1, {2});
  const auto id = validate_assumptions(assemble_custom(lat, Eigen::MatrixXd::Identity(2, 2)), 1.0);
  EXPECT_TRUE(id.is_positive_definite);
  EXPECT_NEAR(id.sqrt_norm, 1.0, 1e-15);
  EXPECT_TRUE(id.D_satisfied);

  const auto two = validate_assumptions(assemble_anderson(lat, {1, 1}), 2.0);
  EXPECT_TRUE(two.is_positive_definite);
  EXPECT_NEAR(two.sqrt_norm, std::sqrt(3.0), 1e-14);
  EXPECT_TRUE(two.D_satisfied);
  EXPECT_FALSE(validate_assumptions(assemble_anderson(lat, {1, 1}), 1.5).D_satisfied);

  Eigen::MatrixXd m(2, 2);
  m << 1, 2, 2, 1;
  const auto bad = validate_assumptions(assemble_custom(lat, m), 3.0);
  EXPECT_FALSE(bad.is_positive_definite);
  EXPECT_NEAR(bad.min_eigenvalue, -1.0, 1e-14);
}

TEST(ParseDenseMatrix, CommasSpacesAndComments) {
  std::istringstream in("# chain\n2, -1\n-1  2\n\n");
  const auto m = parse_dense_matrix(in);
  ASSERT_EQ(m.rows(), 2);
  EXPECT_EQ(m(0, 1), -1.0);
  EXPECT_EQ(m(1, 1), 2.0);
  std::istringstream ragged("1 2\n3\n");
  EXPECT_THROW(parse_dense_matrix(ragged), InvalidArgument);
}
