#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "supcast/channel.hpp"
#include "supcast/error.hpp"
#include "supcast/power.hpp"
#include "supcast_tools/verify.hpp"

using namespace supcast;

namespace {

std::vector<double> gaussian(std::size_t n, double var, Rng& rng) {
  std::normal_distribution<double> d(0.0, std::sqrt(var));
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

double mse(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += (a[k] - b[k]) * (a[k] - b[k]);
  return s / static_cast<double>(a.size());
}

}  // namespace

TEST(PathLoss, Amplitude) {
  EXPECT_DOUBLE_EQ(path_loss_amplitude({0.0, 2.0, Zone::near}, 1.0), 1.0);
  EXPECT_NEAR(path_loss_amplitude({std::sqrt(3.0), 2.0, Zone::near}, 1.0), 0.5, 1e-12);
  EXPECT_NEAR(path_loss_amplitude({1000.0, 2.0, Zone::far}), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_THROW(path_loss_amplitude({-1.0, 2.0, Zone::near}), InputError);
}

TEST(Gain, RayleighMomentAndScaling) {
  Rng a(5), b(5);
  const UserGeometry far{std::sqrt(3.0), 2.0, Zone::far};
  EXPECT_NEAR(std::abs(sample_gain(far, a, 1.0)), std::abs(sample_rayleigh(b)) / 2.0, 1e-12);
  Rng rng(6);
  double power = 0.0;
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) power += std::norm(sample_gain({0.0, 2.0, Zone::near}, rng));
  EXPECT_NEAR(power / kDraws, 1.0, 0.02);
}

TEST(Packing, ExamplesAndEnergy) {
  const std::vector<double> ones{1.0, 1.0};
  const auto s = pack_complex(ones);
  ASSERT_EQ(s.size(), 1u);
  EXPECT_NEAR(s[0].real(), 1.0 / std::numbers::sqrt2, 1e-15);
  EXPECT_NEAR(s[0].imag(), 1.0 / std::numbers::sqrt2, 1e-15);
  EXPECT_NEAR(std::norm(s[0]), 1.0, 1e-15);

  const std::vector<double> zeros(8, 0.0);
  for (const auto& z : pack_complex(zeros)) EXPECT_EQ(z, std::complex<double>{});

  Rng rng(7);
  const auto x = gaussian(1000, 3.0, rng);
  const auto sym = pack_complex(x);
  double ex = 0.0, es = 0.0;
  for (double v : x) ex += v * v;
  for (const auto& v : sym) es += std::norm(v);
  EXPECT_NEAR(es, ex / 2.0, 1e-9 * ex);
  const auto back = unpack_complex(sym);
  for (std::size_t k = 0; k < x.size(); ++k) EXPECT_NEAR(back[k], x[k], 1e-12);

  const std::vector<double> odd{1.0, 2.0, 3.0};
  EXPECT_THROW(pack_complex(odd), InputError);
}

TEST(Transmit, NoiselessSingleLayer) {
  Rng rng(8);
  const auto bl = pack_complex(gaussian(64, 2.0, rng));
  const ChannelState st{{0.3, -0.4}, 0.0};
  const auto y = transmit_pair(bl, {}, 1.7, 0.0, st, rng);
  for (std::size_t k = 0; k < y.size(); ++k) EXPECT_EQ(y[k], st.h * (1.7 * bl[k]));
}

TEST(Transmit, NoiseMomentAndZeroInput) {
  Rng rng(9);
  const std::size_t n = 1'000'000;
  const auto bl = pack_complex(gaussian(2 * n, 1.0, rng));
  const auto el = pack_complex(gaussian(2 * n, 0.5, rng));
  const ChannelState st{{0.8, 0.1}, 0.3};
  const auto y = transmit_pair(bl, el, 0.9, 0.5, st, rng);
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += std::norm(y[k] - st.h * (0.9 * bl[k] + 0.5 * el[k]));
  EXPECT_NEAR(acc / n / 0.3, 1.0, 0.02);

  const SymbolStream zeros(n);
  const auto w = transmit_pair(zeros, {}, 1.0, 0.0, st, rng);
  double pw = 0.0;
  for (const auto& v : w) pw += std::norm(v);
  EXPECT_NEAR(pw / n / 0.3, 1.0, 0.02);

  const SymbolStream short_el(3);
  EXPECT_THROW(transmit_pair(zeros, short_el, 1.0, 1.0, st, rng), InputError);
}

TEST(ReceiveFar, NoiselessBlOnlyIsExact) {
  Rng rng(10);
  const auto x = gaussian(200, 5.0, rng);
  const auto sym = pack_complex(x);
  const ChannelState st{{0.2, 0.7}, 1e-18};
  const auto y = transmit_pair(sym, {}, 0.8, 0.0, st, rng);
  const auto est = receive_far(y, 0.8, 0.0, 5.0, 0.0, st);
  for (std::size_t k = 0; k < x.size(); ++k) EXPECT_NEAR(est[k], x[k], 1e-6);
}

TEST(ReceiveFar, ZeroVarianceSourceDecodesToZero) {
  Rng rng(11);
  const SymbolStream y(10, {1.0, -2.0});
  for (double v : receive_far(y, 1.0, 0.5, 0.0, 1.0, ChannelState{{1.0, 0.0}, 1.0}))
    EXPECT_EQ(v, 0.0);
}

TEST(ReceiveFar, MatchesClosedFormReferenceCase) {
  Rng rng(12);
  const ChannelState st{{1.0, 0.0}, 1.0};
  const auto mc = verify::monte_carlo_mse(4.0, 1.0, 1.0, 1.0, st, st, 1'000'000, rng);
  EXPECT_NEAR(mc.far_bl / (4.0 * 2.0 / 6.0), 1.0, 0.03);
}

TEST(ReceiveNear, MatchesClosedFormReferenceCase) {
  Rng rng(13);
  const ChannelState st{{1.0, 0.0}, 1.0};
  const auto mc = verify::monte_carlo_mse(1.0, 1.0, 1.0, 1.0, st, st, 1'000'000, rng);
  EXPECT_NEAR(mc.near_el / 0.5, 1.0, 0.03);
}

TEST(ReceiveNear, NoiselessRecoversBothLayers) {
  Rng rng(14);
  const auto bl = gaussian(400, 9.0, rng);
  const auto el = gaussian(400, 1.0, rng);
  const auto bs = pack_complex(bl), es = pack_complex(el);
  const ChannelState st{{0.6, 0.6}, 1e-20};
  const auto y = transmit_pair(bs, es, 0.7, 0.3, st, rng);
  const auto dec = receive_near(y, bs, 0.7, 0.3, 9.0, 1.0, st);
  for (std::size_t k = 0; k < el.size(); ++k) EXPECT_NEAR(dec.el[k], el[k], 1e-6);
  // the BL estimate still treats the EL as interference
  EXPECT_NEAR(mse(dec.bl, bl),
              distortion_far(9.0, 1.0, 0.7, 0.3, st.h, st.sigma2), 0.05 * 9.0);
}

TEST(ReceiveNear, UnsentElDecodesToZero) {
  Rng rng(15);
  const auto bl = gaussian(1000, 4.0, rng);
  const auto el = gaussian(1000, 2.0, rng);
  const auto bs = pack_complex(bl), es = pack_complex(el);
  const ChannelState st{{0.9, 0.0}, 0.1};
  const auto y = transmit_pair(bs, es, 0.5, 0.0, st, rng);
  const auto dec = receive_near(y, bs, 0.5, 0.0, 4.0, 2.0, st);
  for (double v : dec.el) EXPECT_EQ(v, 0.0);
  EXPECT_NEAR(mse(dec.el, el), 2.0, 0.3);
}

TEST(Llse, LinearInObservation) {
  Rng rng(16);
  const ChannelState st{{0.4, 0.3}, 0.2};
  SymbolStream y1(50), y2(50), mix(50);
  std::normal_distribution<double> n;
  for (std::size_t k = 0; k < 50; ++k) {
    y1[k] = {n(rng), n(rng)};
    y2[k] = {n(rng), n(rng)};
    mix[k] = 2.5 * y1[k] - 0.75 * y2[k];
  }
  const auto a = receive_far(y1, 0.8, 0.3, 3.0, 1.0, st);
  const auto b = receive_far(y2, 0.8, 0.3, 3.0, 1.0, st);
  const auto c = receive_far(mix, 0.8, 0.3, 3.0, 1.0, st);
  for (std::size_t k = 0; k < c.size(); ++k) EXPECT_NEAR(c[k], 2.5 * a[k] - 0.75 * b[k], 1e-12);
}

TEST(Llse, PhaseInvariantMse) {
  const std::size_t n = 400'000;
  Rng src(17);
  const auto bl = gaussian(n, 4.0, src);
  const auto el = gaussian(n, 1.0, src);
  const auto bs = pack_complex(bl), es = pack_complex(el);
  double ref_far = 0.0, ref_near = 0.0;
  for (double theta : {0.0, 0.9, 2.7}) {
    Rng rng(18);
    const ChannelState st{std::polar(0.7, theta), 0.2};
    const auto y = transmit_pair(bs, es, 0.8, 0.4, st, rng);
    const auto dec = receive_near(y, bs, 0.8, 0.4, 4.0, 1.0, st);
    const double f = mse(dec.bl, bl), e = mse(dec.el, el);
    if (theta == 0.0) {
      ref_far = f;
      ref_near = e;
    } else {
      EXPECT_NEAR(f / ref_far, 1.0, 0.02);
      EXPECT_NEAR(e / ref_near, 1.0, 0.02);
    }
  }
}
