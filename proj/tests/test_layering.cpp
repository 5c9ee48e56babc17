#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "supcast/error.hpp"
#include "supcast/layering.hpp"

using namespace supcast;

namespace {

std::vector<Chunk> chunks_with(const std::vector<double>& variances, std::size_t len = 4) {
  std::vector<Chunk> out;
  for (std::size_t i = 0; i < variances.size(); ++i) {
    Chunk c;
    c.id = i;
    c.rows = 1;
    c.cols = len;
    c.coeffs.assign(len, std::sqrt(variances[i]));
    c.variance = variances[i];
    out.push_back(c);
  }
  return out;
}

std::vector<double> variances(const std::vector<Chunk>& cs) {
  std::vector<double> v;
  for (const auto& c : cs) v.push_back(c.variance);
  return v;
}

}  // namespace

TEST(PlanBandwidth, CifExamples) {
  EXPECT_EQ(plan_bandwidth(256, 1584, 0.5), 128u);
  EXPECT_EQ(plan_bandwidth(256, 1584, 0.25), 64u);
  EXPECT_EQ(plan_bandwidth(256, 1584, 1.0), 128u);
  EXPECT_EQ(plan_bandwidth_orthogonal(256, 1584, 0.5), 128u);
  EXPECT_EQ(plan_bandwidth_orthogonal(256, 1584, 1.0), 256u);
  EXPECT_EQ(plan_bandwidth_orthogonal(256, 1584, 0.25), 64u);
}

TEST(PlanBandwidth, RejectsBadInputs) {
  EXPECT_THROW(plan_bandwidth(256, 1584, 0.0), InputError);
  EXPECT_THROW(plan_bandwidth(256, 1584, 1.5), InputError);
  EXPECT_THROW(plan_bandwidth(256, 1583, 0.5), InputError);
  EXPECT_THROW(plan_bandwidth(256, 0, 0.5), InputError);
}

TEST(Bisect, KeepsAllWhenPairsCover) {
  const auto plan = bisect_layers(chunks_with({1, 9, 0.25, 4}), 2);
  EXPECT_EQ(variances(plan.bl), (std::vector<double>{9, 4}));
  EXPECT_EQ(variances(plan.el), (std::vector<double>{1, 0.25}));
  EXPECT_TRUE(plan.discarded.empty());
  EXPECT_EQ(plan.m, 2u);
}

TEST(Bisect, DropsWeakest) {
  const auto plan = bisect_layers(chunks_with({9, 4, 1, 0.25}), 1);
  EXPECT_EQ(variances(plan.bl), (std::vector<double>{9}));
  EXPECT_EQ(variances(plan.el), (std::vector<double>{4}));
  EXPECT_EQ(plan.discarded, (std::vector<std::size_t>{2, 3}));
  EXPECT_DOUBLE_EQ(plan.discarded_variance, 1.25);
  EXPECT_DOUBLE_EQ(plan.discarded_energy, 1.25 * 4);
}

TEST(Bisect, TiesResolvedById) {
  const auto plan = bisect_layers(chunks_with({2, 2, 2, 2, 2, 2}), 2);
  EXPECT_EQ(plan.bl[0].id, 0u);
  EXPECT_EQ(plan.bl[1].id, 1u);
  EXPECT_EQ(plan.el[0].id, 2u);
  EXPECT_EQ(plan.el[1].id, 3u);
  EXPECT_EQ(plan.discarded, (std::vector<std::size_t>{4, 5}));
  EXPECT_EQ(rank_by_variance(chunks_with({1, 3, 3, 0})), (std::vector<std::size_t>{1, 2, 0, 3}));
}

TEST(Bisect, RejectsImpossibleRequests) {
  EXPECT_THROW(bisect_layers(chunks_with({1, 2, 3}), 2), InputError);
  EXPECT_THROW(bisect_layers(chunks_with({1, 2}), 0), InputError);
}

TEST(Bisect, PropertiesOnRandomInputs) {
  std::mt19937_64 rng(12);
  std::exponential_distribution<double> e(0.1);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 2 + rng() % 40;
    std::vector<double> v(n);
    for (auto& x : v) x = std::round(e(rng) * 4) / 4;  // coarse values force ties
    auto chunks = chunks_with(v);
    const std::size_t m = 1 + rng() % (n / 2);
    const auto plan = bisect_layers(chunks, m);

    double bl = 0, el = 0, total = 0;
    for (const auto& c : plan.bl) bl += c.variance;
    for (const auto& c : plan.el) el += c.variance;
    for (const auto& c : chunks) total += c.energy();
    EXPECT_GE(bl, el);
    const double kept = (bl + el) * 4;
    EXPECT_NEAR(plan.discarded_energy, total - kept, 1e-9 * std::max(1.0, total));

    std::shuffle(chunks.begin(), chunks.end(), rng);
    const auto again = bisect_layers(chunks, m);
    for (std::size_t i = 0; i < m; ++i) {
      EXPECT_EQ(again.bl[i].id, plan.bl[i].id);
      EXPECT_EQ(again.el[i].id, plan.el[i].id);
    }
    auto d1 = plan.discarded, d2 = again.discarded;
    std::sort(d1.begin(), d1.end());
    std::sort(d2.begin(), d2.end());
    EXPECT_EQ(d1, d2);
  }
}
