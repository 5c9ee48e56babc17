#include "supcast/channel.hpp"

#include <cmath>
#include <numbers>

#include "supcast/error.hpp"

namespace supcast {
namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

// LLSE gain for x in y = a x + n, E|x|^2 = var, E|n|^2 = noise.
std::complex<double> llse_gain(std::complex<double> a, double var, double noise) {
  const double denom = std::norm(a) * var + noise;
  if (var == 0.0 || denom == 0.0) return {0.0, 0.0};
  return std::conj(a) * var / denom;
}

std::vector<double> scale_and_unpack(std::span<const std::complex<double>> y,
                                     std::complex<double> gain) {
  SymbolStream est(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) est[k] = gain * y[k];
  return unpack_complex(est);
}

}  // namespace

double path_loss_amplitude(const UserGeometry& geom, double reference_m) {
  if (geom.distance_m < 0.0 || !(geom.eta > 0.0) || !(reference_m > 0.0))
    throw InputError("user geometry requires distance >= 0, eta > 0 and a positive reference");
  return 1.0 / std::sqrt(1.0 + std::pow(geom.distance_m / reference_m, geom.eta));
}

std::complex<double> sample_rayleigh(Rng& rng) {
  std::normal_distribution<double> n(0.0, kInvSqrt2);
  const double re = n(rng);
  const double im = n(rng);
  return {re, im};
}

std::complex<double> sample_gain(const UserGeometry& geom, Rng& rng, double reference_m) {
  return sample_rayleigh(rng) * path_loss_amplitude(geom, reference_m);
}

SymbolStream pack_complex(std::span<const double> coeffs) {
  if (coeffs.size() % 2 != 0) throw InputError("cannot pack an odd number of coefficients");
  SymbolStream out(coeffs.size() / 2);
  // 1-based odd positions 1,3,5,... are 0-based indices 0,2,4,...
  for (std::size_t k = 0; k < out.size(); ++k)
    out[k] = {coeffs[2 * k] * kInvSqrt2, coeffs[2 * k + 1] * kInvSqrt2};
  return out;
}

std::vector<double> unpack_complex(std::span<const std::complex<double>> symbols) {
  std::vector<double> out(2 * symbols.size());
  for (std::size_t k = 0; k < symbols.size(); ++k) {
    out[2 * k] = symbols[k].real() * std::numbers::sqrt2;
    out[2 * k + 1] = symbols[k].imag() * std::numbers::sqrt2;
  }
  return out;
}

SymbolStream transmit_pair(std::span<const std::complex<double>> bl,
                           std::span<const std::complex<double>> el, double g_bl, double g_el,
                           const ChannelState& state, Rng& rng) {
  if (!el.empty() && el.size() != bl.size())
    throw InputError("BL and EL symbol streams must have equal length");
  if (!(state.sigma2 >= 0.0)) throw InputError("noise variance must be non-negative");
  const double noise_std = std::sqrt(0.5 * state.sigma2);
  std::normal_distribution<double> n(0.0, 1.0);
  SymbolStream y(bl.size());
  for (std::size_t k = 0; k < bl.size(); ++k) {
    std::complex<double> x = g_bl * bl[k];
    if (!el.empty()) x += g_el * el[k];
    const double wr = n(rng);
    const double wi = n(rng);
    y[k] = state.h * x + noise_std * std::complex<double>(wr, wi);
  }
  return y;
}

std::vector<double> receive_far(std::span<const std::complex<double>> y, double g_bl, double g_el,
                                double lambda_bl, double lambda_el, const ChannelState& state) {
  const double interference = std::norm(state.h) * g_el * g_el * lambda_el + state.sigma2;
  return scale_and_unpack(y, llse_gain(state.h * g_bl, lambda_bl, interference));
}

NearDecode receive_near(std::span<const std::complex<double>> y,
                        std::span<const std::complex<double>> bl_sent, double g_bl, double g_el,
                        double lambda_bl, double lambda_el, const ChannelState& state) {
  if (bl_sent.size() != y.size())
    throw InputError("SIC reference stream length differs from the received stream");
  SymbolStream residual(y.size());
  for (std::size_t k = 0; k < y.size(); ++k) residual[k] = y[k] - state.h * g_bl * bl_sent[k];
  NearDecode out;
  out.bl = receive_far(y, g_bl, g_el, lambda_bl, lambda_el, state);
  out.el = scale_and_unpack(residual, llse_gain(state.h * g_el, lambda_el, state.sigma2));
  return out;
}

}  // namespace supcast
