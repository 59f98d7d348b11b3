#include <gtest/gtest.h>

#include <sstream>

#include "oscent/experiments.hpp"
#include "oscent/io.hpp"

using namespace oscent;

namespace {

ExperimentConfig chain_config(std::size_t realizations, unsigned threads) {
  ExperimentConfig c;
  c.dimension = 1;
  c.lengths = {24};
  RegionSpec r;
  r.corner = Site{8};
  r.lengths = {5};
  c.regions = {r};
  c.hamiltonian.k_max = 8.0;
  c.realizations = realizations;
  c.eps = {0.5, 0.75, 1.0};
  c.excitations.kind = ExcitationPolicy::Kind::All;
  c.seed = 12345;
  c.threads = threads;
  return c;
}

std::string csv_of(const ExperimentConfig& c) {
  std::ostringstream os;
  write_scan_csv(os, run_scan(c));
  return os.str();
}

}  // namespace

TEST(RunScan, DecoupledLatticeHasNoEntanglement) {
  ExperimentConfig c;
  c.dimension = 1;
  c.lengths = {4};
  c.regions = {RegionSpec{Site{1}, {2}, {}}};
  c.hamiltonian.kind = HamiltonianSpec::Kind::Custom;
  c.hamiltonian.matrix = Eigen::Vector4d(0.5, 1.0, 2.0, 3.0).asDiagonal();
  c.eps = {0.3, 0.5, 1.0};
  const auto res = run_scan(c);
  ASSERT_EQ(res.size(), 1u);
  ASSERT_EQ(res[0].records.size(), 1u);
  for (double e : res[0].records[0].report.entropy) EXPECT_EQ(e, 0.0);
  EXPECT_EQ(res[0].records[0].gs_bound, 0.0);
}

TEST(RunScan, ByteIdenticalAcrossThreadCounts) {
  const auto one = csv_of(chain_config(40, 1));
  const auto eight = csv_of(chain_config(40, 8));
  EXPECT_EQ(one, eight);
  EXPECT_EQ(std::count(one.begin(), one.end(), '\n'), 1 + 40 * 3 * 24);
}

TEST(RunScan, AggregatesAreRecordMeans) {
  const auto res = run_scan(chain_config(30, 4))[0];
  EXPECT_EQ(res.lattice_size, 24u);
  EXPECT_EQ(res.region_size, 5u);
  EXPECT_EQ(res.boundary_size, 2u);
  EXPECT_EQ(res.failed, 0u);
  double sum = 0.0;
  for (const auto& r : res.records) sum += r.report.entropy[0];
  const auto* st = res.aggregate("E_eps=0.5");
  ASSERT_NE(st, nullptr);
  EXPECT_NEAR(st->mean, sum / 30.0, 1e-13);
  EXPECT_EQ(st->count, 30u);
  EXPECT_EQ(res.aggregate("ensemble_bound"), nullptr);  // 25 > 24
  EXPECT_NE(res.aggregate("excited_theorem_bound"), nullptr);
}

TEST(RunScan, EveryRecordSatisfiesTheBounds) {
  const auto scans = run_scan(chain_config(30, 2));
  for (const auto& rec : scans[0].records) {
    ASSERT_TRUE(rec.pd_ok);
    EXPECT_TRUE(rec.D_satisfied);
    EXPECT_GE(rec.mu_min, 1.0);
    for (double e : rec.report.entropy) EXPECT_LE(e, rec.gs_bound);
    for (const auto& x : rec.report.excited) {
      ASSERT_TRUE(x.theorem.has_value());
      EXPECT_LE(x.computed, *x.theorem);
    }
  }
}

TEST(RunScan, StandardErrorsShrinkLikeInverseRootR) {
  auto c = chain_config(50, 0);
  c.excitations.kind = ExcitationPolicy::Kind::None;
  c.eps = {0.5};
  std::vector<double> se;
  for (std::size_t R : {50u, 200u, 800u}) {
    c.realizations = R;
    se.push_back(run_scan(c)[0].aggregate("E_eps=0.5")->se);
  }
  EXPECT_NEAR(se[0] / se[1], 2.0, 0.4);
  EXPECT_NEAR(se[1] / se[2], 2.0, 0.4);
}

TEST(RunScan, RegionMustLeaveAComplement) {
  auto c = chain_config(1, 1);
  c.regions = {RegionSpec{Site{0}, {24}, {}}};
  EXPECT_THROW(run_scan(c), InvalidArgument);
}

TEST(RunScan, NonPositiveCustomMatrixFailsEveryRealization) {
  ExperimentConfig c;
  c.regions = {RegionSpec{std::nullopt, {}, {Site{0}}}};
  c.hamiltonian.kind = HamiltonianSpec::Kind::Custom;
  c.hamiltonian.matrix.resize(2, 2);
  c.hamiltonian.matrix << 1, 2, 2, 1;
  EXPECT_THROW(run_scan(c), DegenerateMatrix);
}

TEST(ConfigValidation, Rejections) {
  auto c = chain_config(1, 1);
  c.eps = {1.5};
  EXPECT_THROW(c.validate(), DomainError);
  c = chain_config(0, 1);
  EXPECT_THROW(c.validate(), InvalidArgument);
  c = chain_config(1, 1);
  c.p = 0.0;
  EXPECT_THROW(c.validate(), DomainError);
  c = chain_config(1, 1);
  c.regions.clear();
  EXPECT_THROW(c.validate(), InvalidArgument);
}

TEST(Excitations, Selection) {
  ExcitationPolicy p;
  p.kind = ExcitationPolicy::Kind::Range;
  p.first = 2;
  p.last = 4;
  EXPECT_EQ(selected_excitations(p, 6), (std::vector<std::size_t>{2, 3, 4}));
  p.last = 6;
  EXPECT_THROW(selected_excitations(p, 6), InvalidArgument);
  p.kind = ExcitationPolicy::Kind::None;
  EXPECT_TRUE(selected_excitations(p, 6).empty());
}

TEST(ParallelFor, PropagatesExceptions) {
  EXPECT_THROW(parallel_for(100, 4,
                            [](std::size_t i) {
                              if (i == 37) throw DomainError("boom");
                            }),
               DomainError);
  std::vector<int> hit(1000, 0);
  parallel_for(hit.size(), 8, [&](std::size_t i) { hit[i] += 1; });
  EXPECT_EQ(std::count(hit.begin(), hit.end(), 1), 1000);
}

TEST(ArealawFit, SyntheticSlopes) {
  std::vector<ArealawPoint> log_pts, bnd_pts;
  for (double l : {4.0, 8.0, 16.0, 32.0}) log_pts.push_back({l, 2.0, 4.0 * std::log(l) + 1.0});
  const std::vector<std::pair<double, double>> sizes{{4, 4}, {9, 8}, {16, 12}, {25, 16}};
  for (const auto& [n, b] : sizes) bnd_pts.push_back({n, b, 7.0 * b});
  EXPECT_NEAR(arealaw_fit(log_pts).vs_log_size.slope, 4.0, 1e-8);
  EXPECT_FALSE(arealaw_fit(log_pts).vs_boundary.defined);
  EXPECT_NEAR(arealaw_fit(bnd_pts).vs_boundary.slope, 7.0, 1e-8);
  EXPECT_NEAR(arealaw_fit(bnd_pts).vs_boundary.residual, 0.0, 1e-12);
  log_pts.resize(2);
  EXPECT_THROW(arealaw_fit(log_pts), InsufficientData);
}

TEST(FitLine, StandardError) {
  const auto f = fit_line({0, 1, 2, 3}, {0.1, 0.9, 2.1, 2.9});
  EXPECT_NEAR(f.slope, 0.96, 1e-12);
  EXPECT_NEAR(f.intercept, 0.06, 1e-12);
  EXPECT_NEAR(f.slope_se, std::sqrt(0.032 / 2.0 / 5.0), 1e-12);
}

TEST(Welford, MatchesTwoPass) {
  Welford w;
  const std::vector<double> xs{1.5, 2.5, -0.5, 4.0, 3.25};
  for (double x : xs) w.add(x);
  double m = 0.0;
  for (double x : xs) m += x;
  m /= 5.0;
  double v = 0.0;
  for (double x : xs) v += (x - m) * (x - m);
  v /= 4.0;
  EXPECT_NEAR(w.stat().mean, m, 1e-15);
  EXPECT_NEAR(w.stat().se, std::sqrt(v / 5.0), 1e-15);
}

TEST(ScanCsv, Format) {
  auto c = chain_config(2, 1);
  c.excitations.kind = ExcitationPolicy::Kind::Worst;
  c.eps = {0.5};
  const auto csv = csv_of(c);
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);
  EXPECT_EQ(line + "\n", kScanCsvHeader);
  std::getline(in, line);
  EXPECT_EQ(line.rfind("0,24,5,2,0.5,", 0), 0u);
  EXPECT_EQ(std::count(line.begin(), line.end(), ','), 11);
  EXPECT_EQ(line.substr(line.size() - 2), ",1");
}

TEST(Config, ParseAndRoundTrip) {
  const auto j = json::parse(R"({
    "lattice": {"dimension": 2, "lengths": [4, 5]},
    "regions": [{"corner": [1, 1], "lengths": [2, 2]}, {"sites": [[0, 0], [0, 1]]}],
    "hamiltonian": {"kind": "anderson", "k_max": 6},
    "realizations": 7, "eps": [0.5, 1], "excitations": {"first": 0, "last": 3},
    "p": 0.5, "s": 0.25, "seed": 99, "threads": 3
  })");
  const auto c = parse_config(j);
  EXPECT_EQ(c.lengths, (std::vector<std::int64_t>{4, 5}));
  ASSERT_EQ(c.regions.size(), 2u);
  EXPECT_EQ(c.regions[1].sites.size(), 2u);
  EXPECT_EQ(c.hamiltonian.k_max, 6.0);
  EXPECT_EQ(c.excitations.kind, ExcitationPolicy::Kind::Range);
  EXPECT_EQ(c.excitations.last, 3u);
  EXPECT_EQ(c.seed, 99u);
  EXPECT_NEAR(c.resolved_D(), std::sqrt(14.0), 1e-15);
  const auto again = parse_config(config_to_json(c));
  EXPECT_EQ(config_to_json(again).dump(), config_to_json(c).dump());
}

TEST(Config, Errors) {
  EXPECT_THROW(parse_config(json::parse(R"({"region": {}})")), InvalidArgument);
  EXPECT_THROW(parse_config(json::parse(R"({"lattice": {"dimension": 1, "lengths": [3]},
                                            "hamiltonian": {"kind": "magnetic"}})")),
               InvalidArgument);
  EXPECT_THROW(parse_config(json::parse(R"({"lattice": {"dimension": "one", "lengths": [3]}})")), InvalidArgument);
  EXPECT_THROW(load_config("/nonexistent/config.json"), InvalidArgument);
}

TEST(Config, NumbersRoundTo15Digits) {
  EXPECT_EQ(num(0.1 + 0.2).dump(), "0.3");
  EXPECT_TRUE(num(std::nan("")).is_null());
}
