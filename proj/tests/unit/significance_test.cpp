#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "generators.hpp"
#include "gramprof/error.hpp"
#include "gramprof/stats.hpp"
#include "oracles.hpp"

namespace gramprof {
namespace {

TEST(MannWhitney, CompleteSeparationThreeVsSix) {
  const std::vector<double> xs{1, 2, 3};
  const std::vector<double> ys{4, 5, 6, 7, 8, 9};
  const StatTestResult r = mann_whitney(xs, ys);
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_NEAR(r.p_value, 2.0 / 84.0, 1e-12);
  EXPECT_EQ(r.method, "mann-whitney-exact");
  EXPECT_NEAR(mann_whitney(ys, xs).p_value, 2.0 / 84.0, 1e-12);
  EXPECT_EQ(mann_whitney(ys, xs).statistic, 18.0);
}

TEST(MannWhitney, IdenticalTiedValues) {
  const std::vector<double> xs{0.5, 0.5};
  const StatTestResult r = mann_whitney(xs, xs);
  EXPECT_EQ(r.p_value, 1.0);
  EXPECT_EQ(r.statistic, 2.0);
}

TEST(MannWhitney, Errors) {
  const std::vector<double> one{1.0};
  const std::vector<double> none;
  try {
    mann_whitney(one, none);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptySample);
  }
  const std::vector<double> big(13, 1.0);
  MwuOptions exact;
  exact.mode = MwuMode::kExact;
  try {
    mann_whitney(big, one, exact);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kExactTooLarge);
  }
  const std::vector<double> nan{std::nan("")};
  EXPECT_THROW(mann_whitney(nan, one), Error);
}

TEST(MannWhitney, AutoSwitchesToMonteCarlo) {
  std::vector<double> xs, ys;
  for (int i = 0; i < 8; ++i) xs.push_back(i);
  for (int i = 0; i < 8; ++i) ys.push_back(100 + i);
  MwuOptions o;
  o.seed = 9;
  o.reps = 2000;
  const StatTestResult r = mann_whitney(xs, ys, o);
  EXPECT_EQ(r.method, "mann-whitney-monte-carlo");
  EXPECT_EQ(r.statistic, 0.0);
  EXPECT_LE(r.p_value, 3.0 / 2001.0);
  EXPECT_EQ(mann_whitney(xs, ys, o).p_value, r.p_value);
}

TEST(MannWhitneyProperty, ExactMatchesEnumeration) {
  SplitMix64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t nx = testing::pick(rng, 1, 6);
    const std::size_t ny = testing::pick(rng, 1, 12 - nx);
    std::vector<double> xs(nx), ys(ny);
    for (auto& v : xs) v = static_cast<double>(rng.below(5));
    for (auto& v : ys) v = static_cast<double>(rng.below(5));
    const auto oracle = testing::mwu_enumerate(xs, ys);
    const StatTestResult r = mann_whitney(xs, ys);
    ASSERT_EQ(r.method, "mann-whitney-exact");
    EXPECT_NEAR(r.statistic, oracle.u, 1e-9);
    EXPECT_NEAR(r.p_value, oracle.p, 1e-12);
  }
}

TEST(MannWhitneyProperty, InvariantUnderMonotoneTransform) {
  SplitMix64 rng(19);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> xs(testing::pick(rng, 1, 5)), ys(testing::pick(rng, 1, 6));
    for (auto& v : xs) v = rng.uniform();
    for (auto& v : ys) v = rng.uniform();
    auto f = [](double v) { return std::exp(3.0 * v) - 7.0; };
    std::vector<double> fx, fy;
    for (double v : xs) fx.push_back(f(v));
    for (double v : ys) fy.push_back(f(v));
    const auto a = mann_whitney(xs, ys);
    const auto b = mann_whitney(fx, fy);
    EXPECT_EQ(a.statistic, b.statistic);
    EXPECT_EQ(a.p_value, b.p_value);
  }
}

TEST(MannWhitneyProperty, MonteCarloNearExact) {
  SplitMix64 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> xs(5), ys(6);
    for (auto& v : xs) v = rng.uniform();
    for (auto& v : ys) v = rng.uniform() + 0.2;
    MwuOptions mc;
    mc.mode = MwuMode::kMonteCarlo;
    mc.reps = 20000;
    mc.seed = rng.next();
    EXPECT_NEAR(mann_whitney(xs, ys, mc).p_value, mann_whitney(xs, ys).p_value, 0.02);
  }
}

std::vector<std::pair<std::string, double>> keyed(const std::vector<double>& p) {
  std::vector<std::pair<std::string, double>> out;
  for (std::size_t i = 0; i < p.size(); ++i) out.emplace_back("k" + std::to_string(i), p[i]);
  return out;
}

TEST(BhFdr, HandExample) {
  const auto r = bh_fdr(keyed({0.01, 0.02, 0.03, 0.04}));
  ASSERT_EQ(r.size(), 4u);
  for (const auto& a : r) EXPECT_NEAR(a.p_adjusted, 0.04, 1e-15);
  EXPECT_EQ(r[2].key, "k2");
  EXPECT_EQ(r[2].p_value, 0.03);
}

TEST(BhFdr, SingleValueUnchanged) {
  const auto r = bh_fdr(keyed({0.037}));
  EXPECT_EQ(r[0].p_adjusted, 0.037);
}

TEST(BhFdr, ExplicitFamilySize) {
  const auto r = bh_fdr(keyed({2.0 / 84.0}), 3);
  EXPECT_NEAR(r[0].p_adjusted, 6.0 / 84.0, 1e-15);
}

TEST(BhFdr, Errors) {
  try {
    bh_fdr(keyed({0.5, 1.5}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidP);
  }
  EXPECT_THROW(bh_fdr(keyed({std::nan("")})), Error);
  EXPECT_THROW(bh_fdr(keyed({-0.1})), Error);
  try {
    bh_fdr(keyed({0.1, 0.2}), 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInvalidArgument);
  }
  EXPECT_TRUE(bh_fdr(keyed({})).empty());
}

TEST(BhFdrProperty, MatchesDefinitionAndIsMonotone) {
  SplitMix64 rng(29);
  for (int trial = 0; trial < 300; ++trial) {
    const std::size_t n = testing::pick(rng, 1, 40);
    std::vector<double> p(n);
    for (auto& v : p) v = testing::coin(rng, 0.2) ? 0.0238 : rng.uniform();
    const std::size_t m = n + testing::pick(rng, 0, 50);
    const auto got = bh_fdr(keyed(p), m);
    const auto want = testing::bh_reference(p, m);
    std::vector<std::pair<double, double>> by_p;
    for (std::size_t i = 0; i < n; ++i) {
      EXPECT_NEAR(got[i].p_adjusted, want[i], 1e-12);
      EXPECT_GE(got[i].p_adjusted, got[i].p_value);
      EXPECT_LE(got[i].p_adjusted, 1.0);
      by_p.emplace_back(got[i].p_value, got[i].p_adjusted);
    }
    std::sort(by_p.begin(), by_p.end());
    for (std::size_t i = 1; i < n; ++i) EXPECT_LE(by_p[i - 1].second, by_p[i].second);
    std::size_t rejected = 0;
    for (const auto& a : got) rejected += a.p_adjusted <= 0.05;
    EXPECT_EQ(rejected, testing::bh_rejections(p, m, 0.05));
  }
}

}  // namespace
}  // namespace gramprof
