#pragma once

#include <complex>
#include <span>
#include <vector>

namespace supcast {

/// Stage-one budgets for the i-th BL and i-th EL chunk (positional, not yet a
/// scheduled pair).
struct PairBudget {
  double p_bl = 0.0;
  double p_el = 0.0;
  double p_pair() const { return p_bl + p_el; }
};

/// Amplitude scaling applied to every coefficient of a BL/EL chunk.
struct ScalingPair {
  double g_bl = 0.0;
  double g_el = 0.0;
};

/// Channel seen by the optimisation: the worst near user, the worst far user,
/// a shared noise variance and the GOP power budget.
struct LinkParams {
  std::complex<double> h_n;
  std::complex<double> h_f;
  double sigma2 = 1.0;
  double p_total = 1.0;
};

/// Power split proportional to sqrt(lambda); zero-variance entries receive 0.
std::vector<double> sqrt_variance_powers(std::span<const double> lambdas, double p_total);

/// Stage one: distributes p_total over all BL and EL chunks in proportion to
/// sqrt(lambda). Element i holds the budgets of BL chunk i and EL chunk i.
std::vector<PairBudget> preallocate(std::span<const double> lambdas_bl,
                                    std::span<const double> lambdas_el, double p_total);

/// Stage two: optimal split of one pair's power between its layers.
///
/// The total is used in full. With b the EL power, the objective reduces to a
/// convex function of b whose stationary point is clamped to [0, p_pair / 2]
/// (the upper bound keeps the EL weaker than the BL for SIC).
ScalingPair reallocate_pair(double lambda_bl, double lambda_el, double p_pair,
                            const LinkParams& link);

/// LLSE distortion of an EL chunk after perfect interference cancellation.
double distortion_near(double lambda_el, double g_el, std::complex<double> h_n, double sigma2);

/// LLSE distortion of a BL chunk with the EL treated as Gaussian interference.
double distortion_far(double lambda_bl, double lambda_el, double g_bl, double g_el,
                      std::complex<double> h_f, double sigma2);

/// distortion_near + distortion_far. Excludes the far user's constant loss of
/// all EL chunks.
double pair_distortion(double lambda_bl, double lambda_el, double g_bl, double g_el,
                       const LinkParams& link);

/// Orthogonal per-chunk scaling: P_i proportional to sqrt(lambda_i),
/// g_i = sqrt(P_i / lambda_i).
std::vector<double> softcast_allocate(std::span<const double> lambdas, double p_total);

}  // namespace supcast
