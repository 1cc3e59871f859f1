#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "mmal/stats.hpp"
#include "mmal/swarm/rng.hpp"

using namespace mmal::stats;

namespace {

GroupedSamples textbook() { return {{"a", {1, 2, 3}}, {"b", {2, 3, 4}}, {"c", {3, 4, 5}}}; }

}  // namespace

TEST(GroupMeans, Examples) {
  EXPECT_EQ(group_sample_means(std::vector<double>{1, 3, 2, 4}, 2), (std::vector<double>{2, 3}));
  EXPECT_EQ(group_sample_means(std::vector<double>(450, 1.0), 15).size(), 30u);
  for (double m : group_sample_means(std::vector<double>(60, 2.5), 15)) EXPECT_EQ(m, 2.5);
  EXPECT_THROW(group_sample_means(std::vector<double>(7, 1.0), 2), std::invalid_argument);
  EXPECT_THROW(group_sample_means(std::vector<double>(4, 1.0), 0), std::invalid_argument);
}

TEST(GroupMeans, PreserveGrandMean) {
  mmal::swarm::Rng rng(1);
  std::vector<double> raw(90);
  double sum = 0;
  for (auto& v : raw) sum += v = rng.uniform(-10, 10);
  double msum = 0;
  for (double m : group_sample_means(raw, 15)) msum += m;
  EXPECT_NEAR(msum / 6, sum / 90, 1e-12);
}

TEST(Anova, Textbook) {
  auto r = anova_oneway(textbook());
  EXPECT_NEAR(r.f_statistic, 3.0, 1e-12);
  EXPECT_NEAR(r.ss_between, 6.0, 1e-12);
  EXPECT_NEAR(r.ss_within, 6.0, 1e-12);
  EXPECT_EQ(r.df_between, 2u);
  EXPECT_EQ(r.df_within, 6u);
  EXPECT_NEAR(r.grand_mean, 3.0, 1e-12);
}

TEST(Anova, DegreesOfFreedomForThirtyMeans) {
  GroupedSamples g(3);
  mmal::swarm::Rng rng(2);
  for (auto& grp : g)
    for (int i = 0; i < 30; ++i) grp.values.push_back(rng.uniform01());
  auto r = anova_oneway(g);
  EXPECT_EQ(r.df_between, 2u);
  EXPECT_EQ(r.df_within, 87u);
}

TEST(Anova, Degenerate) {
  GroupedSamples same{{"a", {1, 2, 3}}, {"b", {1, 2, 3}}};
  EXPECT_EQ(anova_oneway(same).f_statistic, 0.0);
  GroupedSamples flat{{"a", {1, 1}}, {"b", {2, 2}}};
  EXPECT_EQ(anova_oneway(flat).f_statistic, std::numeric_limits<double>::infinity());
  GroupedSamples constant{{"a", {4, 4}}, {"b", {4, 4}}};
  EXPECT_EQ(anova_oneway(constant).f_statistic, 0.0);
  EXPECT_THROW(anova_oneway({{"a", {1, 2}}}), std::invalid_argument);
  EXPECT_THROW(anova_oneway({{"a", {1, 2}}, {"b", {1}}}), std::invalid_argument);
}

TEST(Anova, SumOfSquaresIdentity) {
  mmal::swarm::Rng rng(3);
  for (int rep = 0; rep < 1000; ++rep) {
    GroupedSamples g(2 + rng.index(4));
    for (auto& grp : g)
      for (std::size_t i = 0, n = 2 + rng.index(10); i < n; ++i) grp.values.push_back(rng.uniform(-50, 50));
    auto r = anova_oneway(g);
    double total = 0;
    for (const auto& grp : g)
      for (double v : grp.values) total += (v - r.grand_mean) * (v - r.grand_mean);
    EXPECT_NEAR(total, r.ss_between + r.ss_within, 1e-9 * std::max(1.0, total));
  }
}

TEST(Anova, ShiftAndScaleInvariant) {
  mmal::swarm::Rng rng(4);
  for (int rep = 0; rep < 50; ++rep) {
    GroupedSamples g(3), shifted(3), scaled(3);
    const double shift = rng.uniform(-100, 100), scale = rng.uniform(0.1, 10);
    for (std::size_t a = 0; a < 3; ++a)
      for (int i = 0; i < 6; ++i) {
        const double v = rng.uniform(0, 10) + static_cast<double>(a);
        g[a].values.push_back(v);
        shifted[a].values.push_back(v + shift);
        scaled[a].values.push_back(v * scale);
      }
    const double f = anova_oneway(g).f_statistic;
    EXPECT_NEAR(anova_oneway(shifted).f_statistic, f, 1e-8 * f);
    EXPECT_NEAR(anova_oneway(scaled).f_statistic, f, 1e-8 * f);
  }
}

TEST(Distributions, TQuantileTable) {
  EXPECT_NEAR(student_t_quantile(0.975, 1), 12.7062, 1e-3);
  EXPECT_NEAR(student_t_quantile(0.975, 6), 2.4469, 1e-3);
  EXPECT_NEAR(student_t_quantile(0.975, 30), 2.0423, 1e-3);
  EXPECT_NEAR(student_t_quantile(0.975, 87), 1.9876, 1e-3);
  EXPECT_NEAR(student_t_quantile(0.975, 6), 2.4469118511449692, 1e-8);
  EXPECT_NEAR(student_t_quantile(0.025, 6), -2.4469118511449692, 1e-8);
  EXPECT_EQ(student_t_quantile(0.5, 6), 0.0);
}

TEST(Distributions, CdfRoundTrip) {
  for (double df : {1.0, 3.5, 12.0, 87.0})
    for (double p : {0.01, 0.2, 0.5, 0.9, 0.999}) EXPECT_NEAR(student_t_cdf(student_t_quantile(p, df), df), p, 1e-9);
  EXPECT_NEAR(student_t_cdf(0.0, 4), 0.5, 1e-15);
  EXPECT_NEAR(regularized_incomplete_beta(2, 3, 0.4), 0.5248, 1e-12);
}

TEST(Distributions, FQuantile) {
  EXPECT_NEAR(f_quantile(0.95, 2, 87), 3.101295756667187, 1e-8);
  EXPECT_NEAR(f_quantile(0.95, 3, 8), 4.06618055135116, 1e-8);
  EXPECT_NEAR(f_cdf(f_quantile(0.9, 5, 11), 5, 11), 0.9, 1e-10);
  EXPECT_EQ(f_cdf(-1.0, 2, 3), 0.0);
}

TEST(PooledIntervals, Textbook) {
  auto ci = pooled_confidence_intervals(textbook(), 0.95);
  ASSERT_EQ(ci.size(), 3u);
  const double expect = 2.4469118511449692 / std::sqrt(3.0);
  for (const auto& c : ci) EXPECT_NEAR(c.half_width, expect, 1e-8);
  EXPECT_NEAR(ci[0].half_width, 1.4128, 1e-4);
  EXPECT_NEAR(ci[1].mean, 3.0, 1e-12);
  EXPECT_NEAR(ci[1].lower(), 3.0 - expect, 1e-8);
}

TEST(PooledIntervals, DegenerateAndMonotone) {
  GroupedSamples same{{"a", {2, 2, 2}}, {"b", {2, 2, 2}}};
  for (const auto& c : pooled_confidence_intervals(same, 0.95)) EXPECT_EQ(c.half_width, 0.0);
  double prev = 0;
  for (double conf : {0.5, 0.8, 0.9, 0.95, 0.99, 0.999, 0.99999}) {
    const double h = pooled_confidence_intervals(textbook(), conf)[0].half_width;
    EXPECT_GT(h, prev);
    prev = h;
  }
  EXPECT_THROW(pooled_confidence_intervals({{"a", {1, 2}}, {"b", {1, 2, 3}}}, 0.95), std::invalid_argument);
  EXPECT_THROW(pooled_confidence_intervals(textbook(), 1.0), std::invalid_argument);
}
