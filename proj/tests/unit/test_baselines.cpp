#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "acctest/baselines.hpp"
#include "acctest/errors.hpp"
#include "acctest/rng.hpp"

using namespace acctest;

namespace {
// Brute force: largest k with #{p <= alpha k / m} >= k.
std::size_t bh_reference(const std::vector<double>& p, double alpha, double m) {
  std::size_t best = 0;
  for (std::size_t k = 1; k <= p.size(); ++k) {
    const double thr = alpha * static_cast<double>(k) / m;
    const auto below = static_cast<std::size_t>(std::count_if(p.begin(), p.end(), [&](double v) { return v <= thr; }));
    if (below >= k) best = k;
  }
  return best;
}
}  // namespace

TEST(Bh, HandExample) {
  const auto r = bh_select(std::vector<double>{0.01, 0.02, 0.5}, 0.05);
  EXPECT_EQ(r.count, 2u);
  EXPECT_EQ(r.threshold_index, 2u);
  EXPECT_EQ(r.indices, (std::vector<std::size_t>{0, 1}));
}

TEST(Bh, Extremes) {
  EXPECT_EQ(bh_select(std::vector<double>(5, 1.0), 0.2).count, 0u);
  EXPECT_EQ(bh_select(std::vector<double>(5, 0.0), 0.2).count, 5u);
  EXPECT_EQ(bh_select(std::vector<double>{0.0, 0.3}, 0.0).count, 1u);
  EXPECT_EQ(bh_select(std::vector<double>{0.001, 0.3}, 0.0).count, 0u);
  EXPECT_THROW(bh_select(std::vector<double>{}, 0.1), DomainError);
  EXPECT_THROW(bh_select(std::vector<double>{0.1}, 1.5), DomainError);
}

TEST(Bh, MatchesBruteForceAndIsMonotone) {
  Rng rng(3);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> p(60);
    for (auto& v : p) v = rng.bernoulli(0.3) ? std::pow(rng.uniform(), 6.0) : rng.uniform();
    std::size_t prev = 0;
    for (double alpha = 0.0; alpha <= 1.0; alpha += 0.05) {
      const auto r = bh_select(p, alpha);
      ASSERT_EQ(r.count, bh_reference(p, alpha, 60.0));
      ASSERT_EQ(r.count, r.indices.size());
      EXPECT_GE(r.count, prev);
      prev = r.count;
    }
  }
}

TEST(Bh, TiesAreDeterministic) {
  const std::vector<double> p{0.02, 0.01, 0.02, 0.9};
  const auto r = bh_select(p, 0.1);
  EXPECT_EQ(r.count, 3u);
  EXPECT_EQ(r.indices, (std::vector<std::size_t>{0, 1, 2}));
}

TEST(Storey, NullEstimateClamp) {
  EXPECT_EQ(storey_null_estimate(std::vector<double>{0.01, 0.5, 0.95, 0.99}, 0.9), 4.0);
  EXPECT_EQ(storey_null_estimate(std::vector<double>{0.01, 0.5}, 0.9), 1.0);
  std::vector<double> p(20, 0.5);
  p[0] = 0.95;
  p[1] = 0.97;
  EXPECT_NEAR(storey_null_estimate(p, 0.9), 20.0, 1e-12);
  EXPECT_THROW(storey_null_estimate(p, 1.0), DomainError);
}

TEST(Storey, ReducesToBhWhenEstimateIsN) {
  std::vector<double> p(20);
  for (std::size_t i = 0; i < 20; ++i) p[i] = 0.004 * static_cast<double>(i);
  p[18] = 0.95;
  p[19] = 0.99;
  EXPECT_EQ(storey_select(p, 0.1, 0.9).indices, bh_select(p, 0.1).indices);
}

TEST(Storey, SupersetOfBhAndMatchesBruteForce) {
  Rng rng(9);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> p(80);
    for (auto& v : p) v = rng.bernoulli(0.4) ? std::pow(rng.uniform(), 5.0) : rng.uniform();
    const double m0 = storey_null_estimate(p, 0.9);
    for (double alpha : {0.05, 0.1, 0.3}) {
      const auto s = storey_select(p, alpha);
      const auto b = bh_select(p, alpha);
      ASSERT_EQ(s.count, bh_reference(p, alpha, m0));
      EXPECT_TRUE(std::includes(s.indices.begin(), s.indices.end(), b.indices.begin(), b.indices.end()));
    }
  }
}
