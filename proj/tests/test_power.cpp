#include <gtest/gtest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "supcast/error.hpp"
#include "supcast/power.hpp"
#include "supcast_tools/verify.hpp"

using namespace supcast;

namespace {

LinkParams link(double hn, double hf, double s2) {
  LinkParams l;
  l.h_n = hn;
  l.h_f = hf;
  l.sigma2 = s2;
  return l;
}

}  // namespace

TEST(Preallocate, SqrtVarianceExample) {
  const std::vector<double> bl{4}, el{1};
  const auto b = preallocate(bl, el, 3.0);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_NEAR(b[0].p_bl, 2.0, 1e-12);
  EXPECT_NEAR(b[0].p_el, 1.0, 1e-12);
  const auto oracle = verify::lagrangian_powers({4, 1}, 3.0);
  EXPECT_NEAR(oracle[0], 2.0, 1e-9);
  EXPECT_NEAR(oracle[1], 1.0, 1e-9);
}

TEST(Preallocate, EqualVariancesShareEqually) {
  const std::vector<double> bl(5, 3.0), el(5, 3.0);
  for (const auto& b : preallocate(bl, el, 7.0)) {
    EXPECT_NEAR(b.p_bl, 0.7, 1e-12);
    EXPECT_NEAR(b.p_el, 0.7, 1e-12);
  }
}

TEST(Preallocate, ZeroVarianceGetsNothing) {
  const std::vector<double> bl{1, 0}, el{0, 0};
  const auto b = preallocate(bl, el, 5.0);
  EXPECT_DOUBLE_EQ(b[0].p_bl, 5.0);
  EXPECT_EQ(b[0].p_el, 0.0);
  EXPECT_EQ(b[1].p_bl, 0.0);
  EXPECT_EQ(b[1].p_el, 0.0);
}

TEST(Preallocate, RejectsBadInput) {
  const std::vector<double> one{1}, two{1, 2}, zeros{0};
  EXPECT_THROW(preallocate(one, two, 1.0), InputError);
  EXPECT_THROW(preallocate(zeros, zeros, 1.0), InputError);
  EXPECT_THROW(preallocate(one, one, -1.0), InputError);
}

TEST(Reallocate, DeadNearUserGetsNoEl) {
  const auto g = reallocate_pair(4.0, 1.0, 2.0, link(0.0, 0.5, 0.1));
  EXPECT_EQ(g.g_el, 0.0);
  EXPECT_NEAR(g.g_bl * g.g_bl * 4.0, 2.0, 1e-12);
}

TEST(Reallocate, EmptyElGoesAllToBl) {
  const auto g = reallocate_pair(4.0, 0.0, 2.0, link(1.0, 0.5, 0.1));
  EXPECT_EQ(g.g_el, 0.0);
  EXPECT_NEAR(g.g_bl * g.g_bl * 4.0, 2.0, 1e-12);
}

TEST(Reallocate, ReferenceCaseMatchesGrid) {
  const auto l = link(1.0, 0.5, 0.1);
  const auto g = reallocate_pair(4.0, 1.0, 2.0, l);
  const double achieved = pair_distortion(4.0, 1.0, g.g_bl, g.g_el, l);
  const auto grid = verify::grid_search_pair(4.0, 1.0, 2.0, l);
  EXPECT_LE(achieved, grid.distortion * 1.01);
  EXPECT_LE(g.g_el * g.g_el * 1.0, g.g_bl * g.g_bl * 4.0);
  EXPECT_LE(g.g_bl * g.g_bl * 4.0 + g.g_el * g.g_el, 2.0 + 1e-9);
}

TEST(Reallocate, ConstraintsHoldAndBudgetIsUsed) {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> u(-4.0, 4.0);
  for (int i = 0; i < 2000; ++i) {
    const double lb = std::exp(u(rng) * 2);
    const double le = lb * std::exp(u(rng) - 4.0);
    const double p = std::exp(u(rng));
    const auto l = link(std::exp(u(rng) / 2), std::exp(u(rng) / 2), std::exp(u(rng)));
    const auto g = reallocate_pair(lb, le, p, l);
    const double a = g.g_bl * g.g_bl * lb;
    const double b = g.g_el * g.g_el * le;
    EXPECT_LE(b, a);
    EXPECT_LE(a + b, p + 1e-9);
    EXPECT_NEAR(a + b, p, 1e-9 * p);
  }
}

TEST(Reallocate, RejectsInconsistentInputs) {
  EXPECT_THROW(reallocate_pair(0.0, 1.0, 1.0, link(1, 1, 1)), InputError);
  EXPECT_THROW(reallocate_pair(1.0, 1.0, 1.0, link(1, 1, 0)), InputError);
  const auto g = reallocate_pair(0.0, 0.0, 1.0, link(1, 1, 1));
  EXPECT_EQ(g.g_bl, 0.0);
  EXPECT_EQ(g.g_el, 0.0);
}

TEST(Distortion, NearClosedForms) {
  EXPECT_DOUBLE_EQ(distortion_near(3.0, 0.0, 1.0, 0.5), 3.0);
  EXPECT_DOUBLE_EQ(distortion_near(1.0, 1.0, 1.0, 1.0), 0.5);
  EXPECT_LT(distortion_near(1.0, 1.0, 1.0, 1e-12), 1e-11);
}

TEST(Distortion, FarClosedForms) {
  EXPECT_NEAR(distortion_far(4.0, 1.0, 1.0, 1.0, 1.0, 1.0), 4.0 * 2.0 / 6.0, 1e-12);
  EXPECT_DOUBLE_EQ(distortion_far(2.0, 1.0, 0.7, 0.0, 0.8, 0.3),
                   distortion_near(2.0, 0.7, 0.8, 0.3));
  // interference-limited asymptote
  const double big = distortion_far(4.0, 1.0, 1.0, 0.5, 1e6, 1.0);
  EXPECT_NEAR(big, 4.0 * 0.25 / (4.0 + 0.25), 1e-6);
}

TEST(Distortion, PairIsSumAndMonotoneInNoise) {
  const auto l = link(0.9, 0.4, 0.2);
  EXPECT_DOUBLE_EQ(pair_distortion(5.0, 2.0, 0.0, 0.0, l), 7.0);
  EXPECT_DOUBLE_EQ(pair_distortion(5.0, 2.0, 0.6, 0.3, l),
                   distortion_near(2.0, 0.3, l.h_n, 0.2) +
                       distortion_far(5.0, 2.0, 0.6, 0.3, l.h_f, 0.2));
  double prev = 0.0;
  for (double s2 = 0.01; s2 < 10.0; s2 *= 1.3) {
    const double d = pair_distortion(5.0, 2.0, 0.6, 0.3, link(0.9, 0.4, s2));
    EXPECT_GT(d, prev);
    prev = d;
  }
}

TEST(Distortion, PhaseInvariant) {
  const auto l = link(0.9, 0.4, 0.2);
  LinkParams r = l;
  const auto rot = std::polar(1.0, 1.1);
  r.h_n *= rot;
  r.h_f *= std::polar(1.0, -2.3);
  EXPECT_NEAR(pair_distortion(5.0, 2.0, 0.6, 0.3, l), pair_distortion(5.0, 2.0, 0.6, 0.3, r),
              1e-12);
  const auto a = reallocate_pair(5.0, 2.0, 3.0, l);
  const auto b = reallocate_pair(5.0, 2.0, 3.0, r);
  EXPECT_NEAR(a.g_el, b.g_el, 1e-12);
}

TEST(SoftcastAllocate, Examples) {
  const std::vector<double> two{4, 1};
  const auto g = softcast_allocate(two, 3.0);
  EXPECT_NEAR(g[0], std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(g[1], 1.0, 1e-12);
  const std::vector<double> one{2.5};
  EXPECT_NEAR(softcast_allocate(one, 4.0)[0], std::sqrt(4.0 / 2.5), 1e-12);
  const std::vector<double> same{3, 3, 3};
  const auto e = softcast_allocate(same, 1.0);
  EXPECT_DOUBLE_EQ(e[0], e[1]);
  EXPECT_DOUBLE_EQ(e[1], e[2]);
}
