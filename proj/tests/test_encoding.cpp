#include <gtest/gtest.h>

#include <algorithm>
#include <vector>

#include "oracles.hpp"

using namespace mmal::encoding;

namespace {

std::vector<std::size_t> ranks_1based(const std::vector<double>& x) {
  auto order = random_keys_decode(x).order;
  for (auto& r : order) ++r;
  return order;
}

std::vector<std::size_t> models_1based(const std::vector<double>& x, const std::vector<std::size_t>& levels) {
  auto slots = multiple_random_keys_decode(x, levels).slots;
  for (auto& m : slots) ++m;
  return slots;
}

}  // namespace

TEST(RandomKeys, Examples) {
  EXPECT_EQ(ranks_1based({0.5, -1.1, 2.4}), (std::vector<std::size_t>{2, 1, 3}));
  EXPECT_EQ(ranks_1based({-3, 0, 1, 8, 9}), (std::vector<std::size_t>{1, 2, 3, 4, 5}));
  EXPECT_EQ(ranks_1based({0.0, 0.0}), (std::vector<std::size_t>{1, 2}));
}

TEST(RandomKeys, AlwaysAPermutation) {
  mmal::swarm::Rng rng(2);
  for (int rep = 0; rep < 200; ++rep) {
    std::vector<double> x(1 + rng.index(30));
    for (auto& v : x) v = std::round(rng.uniform(-5, 5));  // plenty of ties
    auto order = random_keys_decode(x).order;
    std::sort(order.begin(), order.end());
    for (std::size_t i = 0; i < order.size(); ++i) ASSERT_EQ(order[i], i);
  }
}

TEST(MultipleRandomKeys, Examples) {
  EXPECT_EQ(models_1based({0.7, -0.3, 0.4}, {2, 1}), (std::vector<std::size_t>{2, 1, 1}));
  EXPECT_EQ(models_1based({9, -2, 4, 0}, {4}), (std::vector<std::size_t>{1, 1, 1, 1}));
  EXPECT_EQ(models_1based({3, 1, 2}, {1, 1, 1}), (std::vector<std::size_t>{3, 1, 2}));
}

TEST(MultipleRandomKeys, LengthMismatchRejected) {
  const std::vector<std::size_t> levels{2, 2};
  EXPECT_THROW(multiple_random_keys_decode(std::vector<double>{1, 2, 3}, levels), std::invalid_argument);
}

TEST(MultipleRandomKeys, MatchesMaskingDecoder) {
  mmal::swarm::Rng rng(5);
  for (int rep = 0; rep < 300; ++rep) {
    std::vector<std::size_t> levels(1 + rng.index(5));
    std::size_t total = 0;
    for (auto& p : levels) total += p = rng.index(5);
    std::vector<double> x(total);
    for (auto& v : x) v = std::round(rng.uniform(-4, 4) * 2) / 2;
    const auto got = multiple_random_keys_decode(x, levels);
    EXPECT_EQ(got.slots, oracle::masking_decode(x, levels));
    EXPECT_TRUE(matches_plan(got, levels));
  }
}

TEST(Decoders, RankOnlyDependence) {
  mmal::swarm::Rng rng(8);
  const std::vector<std::size_t> levels{3, 1, 4, 2};
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> x(10), shifted(10), scaled(10);
    const double shift = rng.uniform(-100, 100), scale = rng.uniform(0.1, 10);
    for (std::size_t j = 0; j < x.size(); ++j) {
      x[j] = std::round(rng.uniform(-20, 20));
      shifted[j] = x[j] + shift;
      scaled[j] = x[j] * scale;
    }
    EXPECT_EQ(random_keys_decode(x).order, random_keys_decode(shifted).order);
    EXPECT_EQ(random_keys_decode(x).order, random_keys_decode(scaled).order);
    EXPECT_EQ(multiple_random_keys_decode(x, levels).slots, multiple_random_keys_decode(shifted, levels).slots);
    EXPECT_EQ(multiple_random_keys_decode(x, levels).slots, multiple_random_keys_decode(scaled, levels).slots);
  }
}

TEST(MatchesPlan, DetectsWrongCounts) {
  const std::vector<std::size_t> levels{1, 2};
  EXPECT_TRUE(matches_plan(ModelSequence{{1, 0, 1}}, levels));
  EXPECT_FALSE(matches_plan(ModelSequence{{1, 0, 0}}, levels));
  EXPECT_FALSE(matches_plan(ModelSequence{{1, 0, 2}}, levels));
}
