#pragma once

// Brute-force oracles and the property suites behind `supcast verify`.

#include <complex>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "supcast/channel.hpp"
#include "supcast/matching.hpp"
#include "supcast/power.hpp"

namespace supcast::verify {

struct CheckResult {
  std::string name;
  double measured = 0.0;
  double threshold = 0.0;
  std::string relation;  // "<", "<=", ">" or ">="
  bool pass = false;
  std::string detail;
};

CheckResult make_check(std::string name, double measured, std::string relation, double threshold,
                       std::string detail = {});

struct GridOptimum {
  double p_bl = 0.0;
  double p_el = 0.0;
  double distortion = 0.0;
};

/// Minimises the pair distortion over the feasible set p_bl + p_el <= p_pair,
/// p_el <= p_bl by a 2-D grid: a coarse pass over the whole triangle, then a
/// 1e-4 * p_pair lattice around the coarse winner.
GridOptimum grid_search_pair(double lambda_bl, double lambda_el, double p_pair,
                             const LinkParams& link);

struct MonteCarloMse {
  double near_el = 0.0;  // EL error at a near user
  double far_bl = 0.0;   // BL error at a far user
};

/// Sends `samples` Gaussian coefficients per layer through the channel model
/// and measures the LLSE error per coefficient.
MonteCarloMse monte_carlo_mse(double lambda_bl, double lambda_el, double g_bl, double g_el,
                              const ChannelState& near, const ChannelState& far,
                              std::size_t samples, Rng& rng);

/// Minimiser of sum lambda_k / P_k subject to sum P_k = p_total, found by
/// bisection on the Lagrange multiplier.
std::vector<double> lagrangian_powers(const std::vector<double>& lambdas, double p_total);

DistortionMatrix uniform_distortion_matrix(std::size_t m, Rng& rng);

/// D-matrix built the way the encoder builds it for one-frame GOPs of
/// synthetic CIF video cut into 16 chunks (64 or 256 for larger m): the 2m strongest
/// chunks are bisected into layers, the link is the worst of five users per
/// ring at an SNR drawn from {5,...,25} dB, and P^t = 2m.
DistortionMatrix realistic_distortion_matrix(std::size_t m, Rng& rng);

std::vector<CheckResult> matching_suite(std::uint64_t seed = 1);
std::vector<CheckResult> power_suite(std::uint64_t seed = 2);
std::vector<CheckResult> distortion_suite(std::uint64_t seed = 3);

}  // namespace supcast::verify
