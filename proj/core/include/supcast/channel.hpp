#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace supcast {

using Rng = std::mt19937_64;
using SymbolStream = std::vector<std::complex<double>>;

enum class Zone { near, far };

inline constexpr double kDefaultPathLossReference = 1000.0;  // metres

struct UserGeometry {
  double distance_m = 0.0;
  double eta = 2.0;
  Zone zone = Zone::near;
};

struct ChannelState {
  std::complex<double> h;
  double sigma2 = 1.0;
};

/// Amplitude attenuation 1 / sqrt(1 + (d / d_ref)^eta).
double path_loss_amplitude(const UserGeometry& geom,
                           double reference_m = kDefaultPathLossReference);

/// Standard circularly-symmetric complex Gaussian draw, E|r|^2 = 1.
std::complex<double> sample_rayleigh(Rng& rng);

/// Rayleigh gain scaled by path loss: h = r / sqrt(1 + (d / d_ref)^eta).
std::complex<double> sample_gain(const UserGeometry& geom, Rng& rng,
                                 double reference_m = kDefaultPathLossReference);

/// Odd-index coefficients on I, even-index on Q, scaled by 1/sqrt(2) so each
/// symbol carries the coefficients' mean square energy. Throws InputError on
/// odd length.
SymbolStream pack_complex(std::span<const double> coeffs);
std::vector<double> unpack_complex(std::span<const std::complex<double>> symbols);

/// y_k = h (g_bl x_bl,k + g_el x_el,k) + w_k with w_k ~ CN(0, sigma2).
/// An empty `el` stream sends the BL alone.
SymbolStream transmit_pair(std::span<const std::complex<double>> bl,
                           std::span<const std::complex<double>> el, double g_bl, double g_el,
                           const ChannelState& state, Rng& rng);

/// Per-symbol LLSE of the BL source, EL plus noise treated as interference of
/// variance |h|^2 g_el^2 lambda_el + sigma2. Returns real coefficients.
std::vector<double> receive_far(std::span<const std::complex<double>> y, double g_bl, double g_el,
                                double lambda_bl, double lambda_el, const ChannelState& state);

struct NearDecode {
  std::vector<double> bl;
  std::vector<double> el;
};

/// Near-user reception. The BL estimate is the same interference-limited LLSE
/// a far user computes (with this user's gain). Cancellation is perfect: the
/// transmitted BL symbols `bl_sent` are removed from y exactly, and the EL is
/// then recovered by LLSE against noise alone.
NearDecode receive_near(std::span<const std::complex<double>> y,
                        std::span<const std::complex<double>> bl_sent, double g_bl, double g_el,
                        double lambda_bl, double lambda_el, const ChannelState& state);

}  // namespace supcast
