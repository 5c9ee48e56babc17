#include "supcast/power.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "supcast/error.hpp"

namespace supcast {

std::vector<double> sqrt_variance_powers(std::span<const double> lambdas, double p_total) {
  if (!(p_total >= 0.0) || !std::isfinite(p_total))
    throw InputError("power budget must be finite and non-negative");
  double norm = 0.0;
  for (double l : lambdas) {
    if (!(l >= 0.0) || !std::isfinite(l))
      throw InputError("chunk variances must be finite and non-negative");
    norm += std::sqrt(l);
  }
  if (norm <= 0.0) throw InputError("no signal energy: every chunk variance is zero");
  std::vector<double> out(lambdas.size());
  for (std::size_t k = 0; k < lambdas.size(); ++k)
    out[k] = std::sqrt(lambdas[k]) / norm * p_total;
  return out;
}

std::vector<PairBudget> preallocate(std::span<const double> lambdas_bl,
                                    std::span<const double> lambdas_el, double p_total) {
  if (lambdas_bl.size() != lambdas_el.size())
    throw InputError("BL and EL variance lists must have equal length");
  std::vector<double> all(lambdas_bl.begin(), lambdas_bl.end());
  all.insert(all.end(), lambdas_el.begin(), lambdas_el.end());
  const auto powers = sqrt_variance_powers(all, p_total);
  const std::size_t m = lambdas_bl.size();
  std::vector<PairBudget> out(m);
  for (std::size_t i = 0; i < m; ++i) out[i] = {powers[i], powers[m + i]};
  return out;
}

ScalingPair reallocate_pair(double lambda_bl, double lambda_el, double p_pair,
                            const LinkParams& link) {
  if (!(lambda_bl >= 0.0) || !(lambda_el >= 0.0))
    throw InputError("chunk variances must be non-negative");
  if (lambda_bl == 0.0 && lambda_el > 0.0)
    throw InputError("BL chunk has zero variance while its EL partner does not");
  if (!(p_pair >= 0.0)) throw InputError("pair power must be non-negative");
  if (!(link.sigma2 > 0.0)) throw InputError("noise variance must be positive");

  if (lambda_bl == 0.0 || p_pair == 0.0) return {};
  if (lambda_el == 0.0) return {std::sqrt(p_pair / lambda_bl), 0.0};

  const double hn2 = std::norm(link.h_n);
  const double hf2 = std::norm(link.h_f);
  const double s2 = link.sigma2;
  const double cap = 0.5 * p_pair;

  double el_power = 0.0;
  if (hn2 == 0.0) {
    el_power = 0.0;
  } else if (hf2 == 0.0) {
    // far user receives nothing; only the near user's term depends on b
    el_power = cap;
  } else {
    const double g2 = std::sqrt(s2 * (hf2 * p_pair + s2) / (lambda_bl * lambda_el * hn2 * hf2)) -
                      s2 / (hn2 * lambda_el);
    el_power = std::clamp(g2 * lambda_el, 0.0, cap);
  }

  ScalingPair g{std::sqrt((p_pair - el_power) / lambda_bl), std::sqrt(el_power / lambda_el)};
  while (g.g_el > 0.0 && g.g_el * g.g_el * lambda_el > g.g_bl * g.g_bl * lambda_bl)
    g.g_el = std::nextafter(g.g_el, 0.0);
  return g;
}

double distortion_near(double lambda_el, double g_el, std::complex<double> h_n, double sigma2) {
  if (lambda_el == 0.0) return 0.0;
  return lambda_el * sigma2 / (std::norm(h_n) * g_el * g_el * lambda_el + sigma2);
}

double distortion_far(double lambda_bl, double lambda_el, double g_bl, double g_el,
                      std::complex<double> h_f, double sigma2) {
  if (lambda_bl == 0.0) return 0.0;
  const double hf2 = std::norm(h_f);
  const double interference = hf2 * g_el * g_el * lambda_el + sigma2;
  return lambda_bl * interference / (hf2 * g_bl * g_bl * lambda_bl + interference);
}

double pair_distortion(double lambda_bl, double lambda_el, double g_bl, double g_el,
                       const LinkParams& link) {
  return distortion_near(lambda_el, g_el, link.h_n, link.sigma2) +
         distortion_far(lambda_bl, lambda_el, g_bl, g_el, link.h_f, link.sigma2);
}

std::vector<double> softcast_allocate(std::span<const double> lambdas, double p_total) {
  auto powers = sqrt_variance_powers(lambdas, p_total);
  for (std::size_t k = 0; k < lambdas.size(); ++k)
    powers[k] = lambdas[k] > 0.0 ? std::sqrt(powers[k] / lambdas[k]) : 0.0;
  return powers;
}

}  // namespace supcast
