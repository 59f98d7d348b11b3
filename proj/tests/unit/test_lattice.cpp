#include <gtest/gtest.h>

#include <random>

#include "oscent/lattice.hpp"

using namespace oscent;

TEST(Lattice, OneDimensionalEnumeration) {
  const Lattice lat(1, {4});
  ASSERT_EQ(lat.size(), 4u);
  for (std::size_t i = 0; i < 4; ++i) {
    EXPECT_EQ(lat.site(i), Site{static_cast<std::int64_t>(i)});
    EXPECT_EQ(lat.index_of(lat.site(i)), i);
  }
}

TEST(Lattice, TwoByTwoIsLexicographic) {
  const Lattice lat(2, {2, 2});
  const std::vector<Site> want{{0, 0}, {0, 1}, {1, 0}, {1, 1}};
  EXPECT_EQ(lat.sites(), want);
}

TEST(Lattice, RejectsBadShapes) {
  EXPECT_THROW(Lattice(0, {}), InvalidArgument);
  EXPECT_THROW(Lattice(2, {3}), InvalidArgument);
  EXPECT_THROW(Lattice(1, {0}), InvalidArgument);
  EXPECT_THROW(Lattice(1, {-2}), InvalidArgument);
}

TEST(Lattice, NeighboursStayInsideTheBox) {
  const Lattice lat(2, {3, 3});
  EXPECT_EQ(lat.neighbors(lat.index_of({0, 0})).size(), 2u);
  EXPECT_EQ(lat.neighbors(lat.index_of({0, 1})).size(), 3u);
  EXPECT_EQ(lat.neighbors(lat.index_of({1, 1})).size(), 4u);
}

TEST(L1Distance, Examples) {
  EXPECT_EQ(l1_distance(Site{0, 0}, Site{1, 2}), 3);
  EXPECT_EQ(l1_distance(Site{5}, Site{5}), 0);
  EXPECT_EQ(l1_distance(Site{1, 1, 1}, Site{0, 0, 0}), 3);
  EXPECT_THROW(l1_distance(Site{1}, Site{1, 2}), InvalidArgument);
}

TEST(L1Distance, IsAMetric) {
  std::mt19937_64 gen(17);
  std::uniform_int_distribution<std::int64_t> u(-20, 20);
  for (int t = 0; t < 500; ++t) {
    Site a(3), b(3), c(3);
    for (int i = 0; i < 3; ++i) a[i] = u(gen), b[i] = u(gen), c[i] = u(gen);
    EXPECT_EQ(l1_distance(a, b), l1_distance(b, a));
    EXPECT_LE(l1_distance(a, c), l1_distance(a, b) + l1_distance(b, c));
    EXPECT_EQ(l1_distance(a, b) == 0, a == b);
  }
}

TEST(InnerBoundary, ChainPrefix) {
  auto lat = make_box(1, {6});
  const Region r(lat, {0, 1, 2});
  EXPECT_EQ(inner_boundary(r), std::vector<std::size_t>{2});
}

TEST(InnerBoundary, WholeLatticeHasNoBoundary) {
  auto lat = make_box(1, {6});
  const Region r(lat, {0, 1, 2, 3, 4, 5});
  EXPECT_TRUE(inner_boundary(r).empty());
}

TEST(InnerBoundary, LeftColumnOfThreeByThree) {
  auto lat = make_box(2, {3, 3});
  const auto r = Region::sub_box(lat, {0, 0}, {3, 1});
  EXPECT_EQ(inner_boundary(r).size(), 3u);
  EXPECT_EQ(inner_boundary(r), r.inside());
}

TEST(InnerBoundary, SubsetOfRegionOnRandomRegions) {
  auto lat = make_box(2, {6, 5});
  std::mt19937_64 gen(3);
  for (int t = 0; t < 200; ++t) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < lat->size(); ++i) {
      if (gen() % 3 == 0) idx.push_back(i);
    }
    const Region r(lat, idx);
    const auto b = inner_boundary(r);
    EXPECT_LE(b.size(), r.size());
    for (auto i : b) EXPECT_TRUE(r.contains(i));
  }
}

TEST(Region, SubBoxMustFit) {
  auto lat = make_box(2, {4, 4});
  EXPECT_THROW(Region::sub_box(lat, {3, 3}, {2, 2}), InvalidArgument);
  EXPECT_EQ(Region::sub_box(lat, {1, 1}, {2, 3}).size(), 6u);
}

TEST(Region, RejectsDuplicatesAndStrays) {
  auto lat = make_box(1, {4});
  EXPECT_THROW(Region(lat, {1, 1}), InvalidArgument);
  EXPECT_THROW(Region(lat, {4}), InvalidArgument);
}

TEST(Region, ConnectivityCheck) {
  auto lat = make_box(1, {6});
  EXPECT_TRUE(is_connected(Region(lat, {1, 2, 3})));
  EXPECT_FALSE(is_connected(Region(lat, {0, 2})));
}
