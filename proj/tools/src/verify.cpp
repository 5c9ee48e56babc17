#include "supcast_tools/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "supcast/layering.hpp"
#include "supcast/pipeline.hpp"

namespace supcast::verify {
namespace {

double log_uniform(Rng& rng, double lo, double hi) {
  std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
  return std::exp(u(rng));
}

// Pair distortion written in layer powers instead of scalings.
double pair_objective(double lambda_bl, double lambda_el, double p_bl, double p_el,
                      const LinkParams& link) {
  const double hn2 = std::norm(link.h_n);
  const double hf2 = std::norm(link.h_f);
  const double s = link.sigma2;
  const double near = lambda_el * s / (hn2 * p_el + s);
  const double far = lambda_bl * (hf2 * p_el + s) / (hf2 * (p_bl + p_el) + s);
  return near + far;
}

LinkParams random_link(Rng& rng) {
  UserLayout layout;
  const auto users = place_users(layout, 2.0, rng);
  std::complex<double> hn{}, hf{};
  double best_n = std::numeric_limits<double>::infinity();
  double best_f = best_n;
  for (const auto& u : users) {
    const auto h = sample_gain(u, rng);
    double& best = u.zone == Zone::near ? best_n : best_f;
    if (std::abs(h) < best) {
      best = std::abs(h);
      (u.zone == Zone::near ? hn : hf) = h;
    }
  }
  std::uniform_int_distribution<int> snr_pick(0, 4);
  const double snr_db = 5.0 * (1 + snr_pick(rng));
  LinkParams link;
  link.h_n = hn;
  link.h_f = hf;
  link.sigma2 = 1.0 / std::pow(10.0, snr_db / 10.0);
  return link;
}

// Single-frame GOPs of synthetic CIF video, chunked on an N x N grid.
const std::vector<ChunkedGop>& frame_pool(std::size_t chunks_per_side) {
  static const auto build = [](std::size_t nc) {
    std::vector<ChunkedGop> pool;
    for (std::uint64_t seed = 1; seed <= 4; ++seed)
      for (const auto& gop : synthetic_video(SyntheticKind::moving_pattern, 352, 288, 1, 8, seed))
        pool.push_back(chunk_gop(gop, nc));
    return pool;
  };
  static const auto n4 = build(4);
  static const auto n8 = build(8);
  static const auto n16 = build(16);
  return chunks_per_side == 4 ? n4 : chunks_per_side == 8 ? n8 : n16;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

CheckResult make_check(std::string name, double measured, std::string relation, double threshold,
                       std::string detail) {
  CheckResult r;
  r.name = std::move(name);
  r.measured = measured;
  r.threshold = threshold;
  r.relation = std::move(relation);
  if (r.relation == "<=") r.pass = measured <= threshold;
  else if (r.relation == "<") r.pass = measured < threshold;
  else if (r.relation == ">=") r.pass = measured >= threshold;
  else if (r.relation == ">") r.pass = measured > threshold;
  else throw std::invalid_argument("unknown relation '" + r.relation + "'");
  r.detail = std::move(detail);
  return r;
}

GridOptimum grid_search_pair(double lambda_bl, double lambda_el, double p_pair,
                             const LinkParams& link) {
  GridOptimum best{0.0, 0.0, std::numeric_limits<double>::infinity()};
  auto consider = [&](double a, double b) {
    if (a < 0.0 || b < 0.0 || b > a || a + b > p_pair * (1.0 + 1e-12)) return;
    const double d = pair_objective(lambda_bl, lambda_el, a, b, link);
    if (d < best.distortion) best = {a, b, d};
  };

  constexpr int kCoarse = 500;
  const double coarse = p_pair / kCoarse;
  for (int i = 0; i <= kCoarse; ++i)
    for (int j = 0; j <= i && i + j <= kCoarse; ++j) consider(i * coarse, j * coarse);

  const double fine = p_pair * 1e-4;
  const int span = static_cast<int>(std::lround(coarse / fine));
  const double a0 = best.p_bl;
  const double b0 = best.p_el;
  for (int i = -span; i <= span; ++i)
    for (int j = -span; j <= span; ++j) consider(a0 + i * fine, b0 + j * fine);
  return best;
}

MonteCarloMse monte_carlo_mse(double lambda_bl, double lambda_el, double g_bl, double g_el,
                              const ChannelState& near, const ChannelState& far,
                              std::size_t samples, Rng& rng) {
  std::normal_distribution<double> bl_dist(0.0, std::sqrt(lambda_bl));
  std::normal_distribution<double> el_dist(0.0, std::sqrt(lambda_el));
  std::vector<double> bl(samples), el(samples);
  for (auto& x : bl) x = bl_dist(rng);
  for (auto& x : el) x = el_dist(rng);
  const auto bl_sym = pack_complex(bl);
  const auto el_sym = pack_complex(el);

  auto mse = [&](const std::vector<double>& est, const std::vector<double>& truth) {
    double acc = 0.0;
    for (std::size_t k = 0; k < truth.size(); ++k) acc += (est[k] - truth[k]) * (est[k] - truth[k]);
    return acc / static_cast<double>(truth.size());
  };

  MonteCarloMse out;
  const auto y_near = transmit_pair(bl_sym, el_sym, g_bl, g_el, near, rng);
  const auto dec = receive_near(y_near, bl_sym, g_bl, g_el, lambda_bl, lambda_el, near);
  out.near_el = mse(dec.el, el);
  const auto y_far = transmit_pair(bl_sym, el_sym, g_bl, g_el, far, rng);
  out.far_bl = mse(receive_far(y_far, g_bl, g_el, lambda_bl, lambda_el, far), bl);
  return out;
}

std::vector<double> lagrangian_powers(const std::vector<double>& lambdas, double p_total) {
  // Stationarity gives P_k = sqrt(lambda_k / mu); find mu with sum P_k = p_total.
  auto total_at = [&](double mu) {
    double s = 0.0;
    for (double l : lambdas) s += std::sqrt(l / mu);
    return s;
  };
  double lo = 1e-300, hi = 1e300;
  for (int it = 0; it < 4000 && hi / lo > 1.0 + 1e-15; ++it) {
    const double mid = std::sqrt(lo * hi);
    if (total_at(mid) > p_total) lo = mid;
    else hi = mid;
  }
  const double mu = std::sqrt(lo * hi);
  std::vector<double> out;
  for (double l : lambdas) out.push_back(std::sqrt(l / mu));
  return out;
}

DistortionMatrix uniform_distortion_matrix(std::size_t m, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  DistortionMatrix d(m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) d(i, j) = u(rng);
  return d;
}

DistortionMatrix realistic_distortion_matrix(std::size_t m, Rng& rng) {
  if (m == 0 || 2 * m > 256) throw std::invalid_argument("realistic instances need 1 <= m <= 128");
  const auto& pool = frame_pool(2 * m <= 16 ? 4 : 2 * m <= 64 ? 8 : 16);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  const auto layers = bisect_layers(pool[pick(rng)].chunks, m);
  std::vector<double> bl, el;
  for (const auto& c : layers.bl) bl.push_back(c.variance);
  for (const auto& c : layers.el) el.push_back(c.variance);
  auto link = random_link(rng);
  link.p_total = 2.0 * static_cast<double>(m);
  const auto budgets = preallocate(bl, el, link.p_total);
  return build_distortion_matrix(bl, el, budgets, link);
}

std::vector<CheckResult> matching_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  Rng rng(seed);

  std::size_t violations = 0;
  std::size_t worst_proposals = 0;
  std::uniform_int_distribution<std::size_t> size_pick(2, 32);
  for (int inst = 0; inst < 1000; ++inst) {
    const std::size_t m = size_pick(rng);
    const auto d = uniform_distortion_matrix(m, rng);
    for (auto driver : {Driver::bl, Driver::el}) {
      const auto r = becma(d, driver);
      worst_proposals = std::max(worst_proposals, r.proposals * 1000 / (m * m));
      if (!r.matching.is_bijection() || !is_stable(r.matching, d) || r.proposals > m * m)
        ++violations;
    }
  }
  out.push_back(make_check("becma stability, 1000 random instances M in [2,32], both drivers",
                           static_cast<double>(violations), "<=", 0.0,
                           "max proposals/M^2 = " + fmt(worst_proposals / 1000.0)));

  constexpr int kInstances = 500;
  std::size_t within = 0;
  double gap_sum = 0.0, gap_el_sum = 0.0, driver_diff = 0.0;
  std::size_t within_el = 0;
  for (int inst = 0; inst < kInstances; ++inst) {
    const auto d = realistic_distortion_matrix(7, rng);
    const double best = total_distortion(exhaustive_match(d), d);
    const double t_bl = total_distortion(becma(d, Driver::bl).matching, d);
    const double t_el = total_distortion(becma(d, Driver::el).matching, d);
    if (t_bl <= 1.05 * best) ++within;
    if (t_el <= 1.05 * best) ++within_el;
    gap_sum += t_bl / best - 1.0;
    gap_el_sum += t_el / best - 1.0;
    driver_diff += std::abs(t_bl - t_el) / best;
  }
  out.push_back(make_check("BL-driven becma within 5% of exhaustive (fraction of 500 7x7)",
                           within / double(kInstances), ">=", 0.95));
  out.push_back(make_check("BL-driven becma mean gap to exhaustive", gap_sum / kInstances, "<=",
                           0.02));
  out.push_back(make_check("EL-driven becma within 5% of exhaustive (fraction of 500 7x7)",
                           within_el / double(kInstances), ">=", 0.95));
  out.push_back(make_check("EL-driven becma mean gap to exhaustive", gap_el_sum / kInstances,
                           "<=", 0.02));
  out.push_back(make_check("mean BL/EL driver difference relative to exhaustive", driver_diff / kInstances,
                           "<=", 0.02));
  return out;
}

std::vector<CheckResult> power_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  Rng rng(seed);

  double worst_excess = -std::numeric_limits<double>::infinity();
  std::size_t constraint_violations = 0;
  for (int draw = 0; draw < 200; ++draw) {
    const double lambda_bl = log_uniform(rng, 1e-2, 1e4);
    const double lambda_el = lambda_bl * log_uniform(rng, 1e-3, 1.0);
    const double p_pair = log_uniform(rng, 0.05, 20.0);
    LinkParams link = random_link(rng);
    link.sigma2 *= log_uniform(rng, 0.1, 10.0);
    const auto g = reallocate_pair(lambda_bl, lambda_el, p_pair, link);
    const double a = g.g_bl * g.g_bl * lambda_bl;
    const double b = g.g_el * g.g_el * lambda_el;
    if (b > a || a + b > p_pair + 1e-9) ++constraint_violations;
    const double achieved = pair_distortion(lambda_bl, lambda_el, g.g_bl, g.g_el, link);
    const auto grid = grid_search_pair(lambda_bl, lambda_el, p_pair, link);
    worst_excess = std::max(worst_excess, achieved / grid.distortion - 1.0);
  }
  out.push_back(make_check("reallocate_pair vs 2-D grid minimum, worst relative excess (200 draws)",
                           worst_excess, "<=", 0.01));
  out.push_back(make_check("constraint (sum power, EL below BL) violations",
                           static_cast<double>(constraint_violations), "<=", 0.0));

  double worst_sum = 0.0, worst_dev = 0.0;
  std::uniform_int_distribution<std::size_t> size_pick(1, 64);
  for (int inst = 0; inst < 200; ++inst) {
    const std::size_t m = size_pick(rng);
    std::vector<double> bl(m), el(m);
    for (std::size_t i = 0; i < m; ++i) {
      bl[i] = log_uniform(rng, 1e-2, 1e5);
      el[i] = log_uniform(rng, 1e-3, 1e3);
    }
    const double p_total = log_uniform(rng, 0.1, 1000.0);
    const auto budgets = preallocate(bl, el, p_total);
    double sum = 0.0;
    for (const auto& b : budgets) sum += b.p_pair();
    worst_sum = std::max(worst_sum, std::abs(sum - p_total) / p_total);

    std::vector<double> all(bl);
    all.insert(all.end(), el.begin(), el.end());
    const auto oracle = lagrangian_powers(all, p_total);
    for (std::size_t i = 0; i < m; ++i) {
      worst_dev = std::max(worst_dev, std::abs(budgets[i].p_bl - oracle[i]) / oracle[i]);
      worst_dev = std::max(worst_dev, std::abs(budgets[i].p_el - oracle[m + i]) / oracle[m + i]);
    }
  }
  out.push_back(make_check("pre-allocation budget sum, worst relative error", worst_sum, "<=",
                           1e-9));
  out.push_back(make_check("pre-allocation vs Lagrangian oracle, worst relative deviation",
                           worst_dev, "<=", 1e-3));
  return out;
}

std::vector<CheckResult> distortion_suite(std::uint64_t seed) {
  std::vector<CheckResult> out;
  Rng rng(seed);
  constexpr std::size_t kSamples = 1'000'000;
  constexpr int kSets = 24;
  double worst_near = 0.0, worst_far = 0.0;
  for (int set = 0; set < kSets; ++set) {
    const double lambda_bl = log_uniform(rng, 1.0, 1e4);
    const double lambda_el = lambda_bl * log_uniform(rng, 1e-3, 1.0);
    const double p_pair = log_uniform(rng, 0.1, 10.0);
    const double el_share = std::uniform_real_distribution<double>(0.02, 0.5)(rng);
    const double g_bl = std::sqrt(p_pair * (1.0 - el_share) / lambda_bl);
    const double g_el = std::sqrt(p_pair * el_share / lambda_el);
    const double snr_db = std::uniform_real_distribution<double>(0.0, 30.0)(rng);
    const double sigma2 = p_pair / std::pow(10.0, snr_db / 10.0);
    ChannelState near{sample_rayleigh(rng) * 1.2, sigma2};
    ChannelState far{sample_rayleigh(rng) * 0.6, sigma2};

    const auto mc = monte_carlo_mse(lambda_bl, lambda_el, g_bl, g_el, near, far, kSamples, rng);
    const double near_cf = distortion_near(lambda_el, g_el, near.h, sigma2);
    const double far_cf = distortion_far(lambda_bl, lambda_el, g_bl, g_el, far.h, sigma2);
    worst_near = std::max(worst_near, std::abs(mc.near_el - near_cf) / near_cf);
    worst_far = std::max(worst_far, std::abs(mc.far_bl - far_cf) / far_cf);
  }
  out.push_back(make_check("near-user EL distortion vs Monte-Carlo (24 sets, 1e6 coeffs)",
                           worst_near, "<=", 0.03));
  out.push_back(make_check("far-user BL distortion vs Monte-Carlo (24 sets, 1e6 coeffs)",
                           worst_far, "<=", 0.03));
  return out;
}

}  // namespace supcast::verify
