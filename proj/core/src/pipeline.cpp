#include "supcast/pipeline.hpp"

#include <algorithm>
#include <bit>
#include <atomic>
#include <cmath>
#include <future>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>

#include "supcast/error.hpp"

namespace supcast {
namespace {

struct Layered {
  LayerPlan layers;
  std::vector<double> lambda_bl;
  std::vector<double> lambda_el;
};

Layered layer(const ChunkedGop& source, const Scenario& scenario) {
  if (source.chunks.empty()) throw InputError("GOP produced no chunks");
  const std::size_t m_prime =
      plan_bandwidth(source.chunks.size(), source.chunks.front().size(), scenario.beta);
  Layered out{bisect_layers(source.chunks, m_prime), {}, {}};
  for (const auto& c : out.layers.bl) out.lambda_bl.push_back(c.variance);
  for (const auto& c : out.layers.el) out.lambda_el.push_back(c.variance);
  return out;
}

void fill_layer_bookkeeping(TransmissionPlan& plan, const LayerPlan& layers) {
  plan.discarded = layers.discarded;
  plan.discarded_variance = layers.discarded_variance;
  plan.discarded_energy = layers.discarded_energy;
  plan.m = layers.m;
  plan.el_energy = 0.0;
  for (const auto& c : layers.el) plan.el_energy += c.energy();
}

LinkParams worst_link(const Scenario& scenario, std::span<const ChannelState> states,
                      double p_total) {
  if (states.size() != scenario.users.size())
    throw InputError("one channel state per user is required");
  const auto near = worst_user(scenario.users, states, Zone::near);
  const auto far = worst_user(scenario.users, states, Zone::far);
  if (!near || !far) throw InputError("superposed schemes need at least one near and one far user");
  return {states[*near].h, states[*far].h, scenario.sigma2(), p_total};
}

double accumulate_error(std::span<const double> decoded, std::span<const double> truth) {
  double acc = 0.0;
  for (std::size_t k = 0; k < truth.size(); ++k) {
    const double e = decoded[k] - truth[k];
    acc += e * e;
  }
  return acc;
}

}  // namespace

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::supcast_bl: return "supcast_bl";
    case Scheme::supcast_el: return "supcast_el";
    case Scheme::softcast: return "softcast";
    case Scheme::noma_ra: return "noma_ra";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  for (auto s : {Scheme::supcast_bl, Scheme::supcast_el, Scheme::softcast, Scheme::noma_ra})
    if (name == to_string(s)) return s;
  if (name == "supcast") return Scheme::supcast_bl;
  throw InputError("unknown scheme '" + std::string(name) +
                   "' (expected supcast_bl, supcast_el, softcast or noma_ra)");
}

std::string_view to_string(Zone zone) { return zone == Zone::near ? "near" : "far"; }

std::vector<UserGeometry> place_users(const UserLayout& layout, double eta, Rng& rng) {
  if (!(layout.near_min_m >= 0.0) || layout.near_max_m < layout.near_min_m ||
      layout.far_max_m < layout.far_min_m || layout.far_min_m < 0.0)
    throw InputError("user ring radii must be non-negative and ordered");
  std::vector<UserGeometry> users;
  users.reserve(2 * layout.users_per_zone);
  auto ring = [&](double r0, double r1, Zone zone) {
    std::uniform_real_distribution<double> area(r0 * r0, r1 * r1);
    for (std::size_t k = 0; k < layout.users_per_zone; ++k)
      users.push_back({std::sqrt(area(rng)), eta, zone});
  };
  ring(layout.near_min_m, layout.near_max_m, Zone::near);
  ring(layout.far_min_m, layout.far_max_m, Zone::far);
  return users;
}

double Scenario::sigma2() const { return p_chunk / std::pow(10.0, snr_db / 10.0); }

ChunkedGop chunk_gop(const Gop& gop, std::size_t chunks_per_side) {
  const auto volume = forward_3d_dct(gop);
  return {volume.dims, chunks_per_side, partition_chunks(volume, chunks_per_side)};
}

std::optional<std::size_t> worst_user(std::span<const UserGeometry> users,
                                      std::span<const ChannelState> states, Zone zone) {
  std::optional<std::size_t> best;
  for (std::size_t u = 0; u < users.size() && u < states.size(); ++u) {
    if (users[u].zone != zone) continue;
    if (!best || std::abs(states[u].h) < std::abs(states[*best].h)) best = u;
  }
  return best;
}

TransmissionPlan encode_supcast(const ChunkedGop& source, const Scenario& scenario,
                                std::span<const ChannelState> states, Driver driver) {
  const Layered l = layer(source, scenario);
  TransmissionPlan plan;
  plan.scheme = driver == Driver::bl ? Scheme::supcast_bl : Scheme::supcast_el;
  plan.dims = source.dims;
  fill_layer_bookkeeping(plan, l.layers);
  plan.p_total = scenario.p_chunk * static_cast<double>(2 * l.layers.m);
  plan.link = worst_link(scenario, states, plan.p_total);

  const auto budgets = preallocate(l.lambda_bl, l.lambda_el, plan.p_total);
  DistortionMatrix d = build_distortion_matrix(l.lambda_bl, l.lambda_el, budgets, plan.link);
  const MatchResult match = becma(d, driver);
  plan.matching = match.matching;
  plan.proposals = match.proposals;

  plan.slots.reserve(plan.m);
  for (std::size_t i = 0; i < plan.m; ++i) {
    const std::size_t j = match.matching.partner[i];
    Slot s;
    s.bl = l.layers.bl[i].id;
    s.el = l.layers.el[j].id;
    s.lambda_bl = l.lambda_bl[i];
    s.lambda_el = l.lambda_el[j];
    s.g = reallocate_pair(s.lambda_bl, s.lambda_el, budgets[i].p_bl + budgets[j].p_el, plan.link);
    plan.slots.push_back(s);
  }
  plan.distortion = std::move(d);
  return plan;
}

TransmissionPlan encode_supcast(const Gop& gop, const Scenario& scenario,
                                std::span<const ChannelState> states, Driver driver) {
  return encode_supcast(chunk_gop(gop, scenario.chunks_per_side), scenario, states, driver);
}

TransmissionPlan encode_softcast(const ChunkedGop& source, const Scenario& scenario) {
  if (source.chunks.empty()) throw InputError("GOP produced no chunks");
  const std::size_t keep = plan_bandwidth_orthogonal(
      source.chunks.size(), source.chunks.front().size(), scenario.beta);
  if (keep == 0) throw InputError("nothing to transmit: bandwidth admits no chunk");
  const auto order = rank_by_variance(source.chunks);

  TransmissionPlan plan;
  plan.scheme = Scheme::softcast;
  plan.dims = source.dims;
  plan.m = keep;
  plan.p_total = scenario.p_chunk * static_cast<double>(keep);
  plan.link.sigma2 = scenario.sigma2();
  plan.link.p_total = plan.p_total;

  std::vector<double> lambdas;
  lambdas.reserve(keep);
  for (std::size_t k = 0; k < keep; ++k) lambdas.push_back(source.chunks[order[k]].variance);
  const auto g = softcast_allocate(lambdas, plan.p_total);
  for (std::size_t k = 0; k < keep; ++k) {
    Slot s;
    s.bl = order[k];
    s.lambda_bl = lambdas[k];
    s.g = {g[k], 0.0};
    plan.slots.push_back(s);
  }
  for (std::size_t k = keep; k < order.size(); ++k) {
    const Chunk& c = source.chunks[order[k]];
    plan.discarded.push_back(c.id);
    plan.discarded_variance += c.variance;
    plan.discarded_energy += c.energy();
  }
  return plan;
}

TransmissionPlan encode_softcast(const Gop& gop, const Scenario& scenario) {
  return encode_softcast(chunk_gop(gop, scenario.chunks_per_side), scenario);
}

TransmissionPlan encode_noma_ra(const ChunkedGop& source, const Scenario& scenario,
                                std::uint64_t seed) {
  const Layered l = layer(source, scenario);
  TransmissionPlan plan;
  plan.scheme = Scheme::noma_ra;
  plan.dims = source.dims;
  fill_layer_bookkeeping(plan, l.layers);
  plan.p_total = scenario.p_chunk * static_cast<double>(2 * l.layers.m);
  plan.link.sigma2 = scenario.sigma2();
  plan.link.p_total = plan.p_total;

  std::vector<double> all(l.lambda_bl);
  all.insert(all.end(), l.lambda_el.begin(), l.lambda_el.end());
  const auto g = softcast_allocate(all, plan.p_total);
  plan.matching = random_match(plan.m, seed);
  for (std::size_t i = 0; i < plan.m; ++i) {
    const std::size_t j = plan.matching.partner[i];
    Slot s;
    s.bl = l.layers.bl[i].id;
    s.el = l.layers.el[j].id;
    s.lambda_bl = l.lambda_bl[i];
    s.lambda_el = l.lambda_el[j];
    s.g = {g[i], g[plan.m + j]};
    plan.slots.push_back(s);
  }
  return plan;
}

TransmissionPlan encode_noma_ra(const Gop& gop, const Scenario& scenario, std::uint64_t seed) {
  return encode_noma_ra(chunk_gop(gop, scenario.chunks_per_side), scenario, seed);
}

TransmissionPlan encode(const ChunkedGop& source, const Scenario& scenario,
                        std::span<const ChannelState> states, std::uint64_t schedule_seed) {
  switch (scenario.scheme) {
    case Scheme::supcast_bl: return encode_supcast(source, scenario, states, Driver::bl);
    case Scheme::supcast_el: return encode_supcast(source, scenario, states, Driver::el);
    case Scheme::softcast: return encode_softcast(source, scenario);
    case Scheme::noma_ra: return encode_noma_ra(source, scenario, schedule_seed);
  }
  throw InputError("unknown scheme");
}

UserOutcome simulate_user(const TransmissionPlan& plan, const ChunkedGop& source,
                          const Gop& reference, std::size_t user_id, const UserGeometry& user,
                          const ChannelState& state, Rng& rng, bool clamp) {
  if (plan.dims != source.dims) throw InputError("plan and source GOP dimensions differ");
  const bool superposed = plan.scheme != Scheme::softcast;
  const bool decodes_el = superposed && user.zone == Zone::near;
  const double pixels = static_cast<double>(source.dims.size());

  std::vector<Chunk> decoded;
  decoded.reserve(2 * plan.slots.size());
  double llse_error = 0.0;

  for (const Slot& slot : plan.slots) {
    const Chunk& bl = source.chunks.at(slot.bl);
    const SymbolStream bl_symbols = pack_complex(bl.coeffs);
    SymbolStream el_symbols;
    if (slot.el) el_symbols = pack_complex(source.chunks.at(*slot.el).coeffs);

    const SymbolStream y = transmit_pair(bl_symbols, el_symbols, slot.g.g_bl,
                                         slot.el ? slot.g.g_el : 0.0, state, rng);
    Chunk bl_hat = bl;
    if (decodes_el) {
      const Chunk& el = source.chunks.at(*slot.el);
      NearDecode out = receive_near(y, bl_symbols, slot.g.g_bl, slot.g.g_el, slot.lambda_bl,
                                    slot.lambda_el, state);
      bl_hat.coeffs = std::move(out.bl);
      Chunk el_hat = el;
      el_hat.coeffs = std::move(out.el);
      llse_error += accumulate_error(el_hat.coeffs, el.coeffs);
      decoded.push_back(std::move(el_hat));
    } else {
      const double g_el = slot.el ? slot.g.g_el : 0.0;
      bl_hat.coeffs = receive_far(y, slot.g.g_bl, g_el, slot.lambda_bl, slot.lambda_el, state);
    }
    llse_error += accumulate_error(bl_hat.coeffs, bl.coeffs);
    decoded.push_back(std::move(bl_hat));
  }

  Gop recon = inverse_3d_dct(assemble_chunks(decoded, source.dims));
  if (clamp) clamp_pixels(recon);

  RunResult r;
  r.scheme = plan.scheme;
  r.user_id = user_id;
  r.zone = user.zone;
  r.distance_m = user.distance_m;
  r.psnr_db = psnr(reference, recon);
  double total = 0.0;
  for (std::size_t t = 0; t < reference.size(); ++t)
    total += frame_mse(reference.frames[t], recon.frames[t]);
  r.mse_total = total / static_cast<double>(reference.size());
  r.mse_llse = llse_error / pixels;
  r.mse_discarded = plan.discarded_energy / pixels;
  r.mse_undecodable_el = (superposed && !decodes_el) ? plan.el_energy / pixels : 0.0;
  return {std::move(recon), r};
}

Rng derive_stream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> labels) {
  std::vector<std::uint32_t> words;
  words.reserve(2 * (labels.size() + 1));
  auto push = [&](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(master_seed);
  for (auto v : labels) push(v);
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

std::uint64_t stream_label(StreamTag tag) { return static_cast<std::uint64_t>(tag); }
std::uint64_t stream_label(double value) { return std::bit_cast<std::uint64_t>(value); }

namespace {

constexpr std::uint64_t kGeometry = static_cast<std::uint64_t>(StreamTag::geometry);
constexpr std::uint64_t kFading = static_cast<std::uint64_t>(StreamTag::fading);
constexpr std::uint64_t kNoise = static_cast<std::uint64_t>(StreamTag::noise);
constexpr std::uint64_t kSchedule = static_cast<std::uint64_t>(StreamTag::schedule);

struct SeedOutput {
  // indexed [scheme][snr][beta][user]
  std::vector<RunResult> rows;
};

SeedOutput run_seed(const std::vector<Gop>& video, const std::vector<ChunkedGop>& chunked,
                    const Sweep& sweep, std::uint64_t seed) {
  Rng geometry_rng = derive_stream(sweep.master_seed, {kGeometry, seed});
  const auto users = place_users(sweep.layout, sweep.eta, geometry_rng);
  const std::size_t n_users = users.size();
  const std::size_t n_snr = sweep.snrs_db.size();
  const std::size_t n_beta = sweep.betas.size();
  const std::size_t n_scheme = sweep.schemes.size();

  SeedOutput out;
  out.rows.resize(n_scheme * n_snr * n_beta * n_users);
  auto index = [&](std::size_t s, std::size_t k, std::size_t b, std::size_t u) {
    return ((s * n_snr + k) * n_beta + b) * n_users + u;
  };
  std::vector<double> psnr_acc(out.rows.size(), 0.0);
  std::vector<double> mse_acc(4 * out.rows.size(), 0.0);

  for (std::size_t g = 0; g < video.size(); ++g) {
    std::vector<std::complex<double>> gains(n_users);
    for (std::size_t u = 0; u < n_users; ++u) {
      Rng fading = derive_stream(sweep.master_seed, {kFading, seed, g, u});
      gains[u] = sample_gain(users[u], fading, sweep.path_loss_reference_m);
    }
    for (std::size_t b = 0; b < n_beta; ++b) {
      for (std::size_t k = 0; k < n_snr; ++k) {
        Scenario sc;
        sc.users = users;
        sc.eta = sweep.eta;
        sc.snr_db = sweep.snrs_db[k];
        sc.beta = sweep.betas[b];
        sc.gop_size = video[g].size();
        sc.chunks_per_side = sweep.chunks_per_side;
        sc.p_chunk = sweep.p_chunk;
        sc.seed = seed;
        sc.path_loss_reference_m = sweep.path_loss_reference_m;
        sc.clamp_pixels = sweep.clamp_pixels;
        std::vector<ChannelState> states(n_users);
        for (std::size_t u = 0; u < n_users; ++u) states[u] = {gains[u], sc.sigma2()};

        for (std::size_t s = 0; s < n_scheme; ++s) {
          sc.scheme = sweep.schemes[s];
          Rng schedule_rng = derive_stream(sweep.master_seed, {kSchedule, seed, g, stream_label(sc.beta)});
          const std::uint64_t schedule_seed = schedule_rng();
          const TransmissionPlan plan = encode(chunked[g], sc, states, schedule_seed);
          for (std::size_t u = 0; u < n_users; ++u) {
            Rng noise = derive_stream(sweep.master_seed,
                                      {kNoise, seed, g, u, stream_label(sc.snr_db), stream_label(sc.beta)});
            const UserOutcome o = simulate_user(plan, chunked[g], video[g], u, users[u], states[u],
                                                noise, sc.clamp_pixels);
            const std::size_t idx = index(s, k, b, u);
            RunResult& row = out.rows[idx];
            row = o.result;
            row.seed = seed;
            row.snr_db = sc.snr_db;
            row.beta = sc.beta;
            psnr_acc[idx] += o.result.psnr_db;
            mse_acc[4 * idx + 0] += o.result.mse_total;
            mse_acc[4 * idx + 1] += o.result.mse_llse;
            mse_acc[4 * idx + 2] += o.result.mse_discarded;
            mse_acc[4 * idx + 3] += o.result.mse_undecodable_el;
          }
        }
      }
    }
  }
  const double n_gops = static_cast<double>(video.size());
  for (std::size_t idx = 0; idx < out.rows.size(); ++idx) {
    RunResult& row = out.rows[idx];
    row.psnr_db = psnr_acc[idx] / n_gops;
    row.mse_total = mse_acc[4 * idx + 0] / n_gops;
    row.mse_llse = mse_acc[4 * idx + 1] / n_gops;
    row.mse_discarded = mse_acc[4 * idx + 2] / n_gops;
    row.mse_undecodable_el = mse_acc[4 * idx + 3] / n_gops;
  }
  return out;
}

}  // namespace

std::vector<RunResult> run_experiment(const std::vector<Gop>& video, const Sweep& sweep) {
  if (video.empty()) throw InputError("experiment needs at least one GOP");
  if (sweep.snrs_db.empty() || sweep.betas.empty() || sweep.schemes.empty() || sweep.seeds.empty())
    throw InputError("sweep grid must name at least one SNR, beta, scheme and seed");
  for (double beta : sweep.betas)
    if (!(beta > 0.0) || beta > 1.0) throw InputError("beta must lie in (0, 1]");

  std::vector<ChunkedGop> chunked;
  chunked.reserve(video.size());
  for (const auto& gop : video) chunked.push_back(chunk_gop(gop, sweep.chunks_per_side));

  std::vector<SeedOutput> per_seed(sweep.seeds.size());
  const std::size_t threads = std::max<std::size_t>(1, std::min(sweep.threads, sweep.seeds.size()));
  if (threads == 1) {
    for (std::size_t k = 0; k < sweep.seeds.size(); ++k)
      per_seed[k] = run_seed(video, chunked, sweep, sweep.seeds[k]);
  } else {
    std::vector<std::future<void>> workers;
    std::atomic<std::size_t> next{0};
    for (std::size_t t = 0; t < threads; ++t) {
      workers.push_back(std::async(std::launch::async, [&] {
        for (std::size_t k = next++; k < sweep.seeds.size(); k = next++)
          per_seed[k] = run_seed(video, chunked, sweep, sweep.seeds[k]);
      }));
    }
    for (auto& w : workers) w.get();
  }

  // reorder to scheme, seed, snr, beta, user
  const std::size_t per_scheme = per_seed.front().rows.size() / sweep.schemes.size();
  std::vector<RunResult> rows;
  rows.reserve(per_seed.size() * per_seed.front().rows.size());
  for (std::size_t s = 0; s < sweep.schemes.size(); ++s)
    for (const auto& so : per_seed)
      rows.insert(rows.end(), so.rows.begin() + static_cast<std::ptrdiff_t>(s * per_scheme),
                  so.rows.begin() + static_cast<std::ptrdiff_t>((s + 1) * per_scheme));
  return rows;
}

std::vector<CellSummary> summarize(std::span<const RunResult> rows, std::optional<Zone> zone) {
  using Key = std::tuple<int, double, double>;
  std::vector<Key> order;
  // per cell: seed -> (sum, count)
  std::map<Key, std::map<std::uint64_t, std::pair<double, std::size_t>>> cells;
  for (const auto& r : rows) {
    if (zone && r.zone != *zone) continue;
    const Key key{static_cast<int>(r.scheme), r.snr_db, r.beta};
    if (!cells.contains(key)) order.push_back(key);
    auto& acc = cells[key][r.seed];
    acc.first += r.psnr_db;
    acc.second += 1;
  }
  std::vector<CellSummary> out;
  for (const auto& key : order) {
    const auto& seeds = cells[key];
    std::vector<double> means;
    for (const auto& [seed, acc] : seeds) means.push_back(acc.first / static_cast<double>(acc.second));
    const double n = static_cast<double>(means.size());
    const double mean = std::accumulate(means.begin(), means.end(), 0.0) / n;
    double var = 0.0;
    for (double m : means) var += (m - mean) * (m - mean);
    var = means.size() > 1 ? var / (n - 1.0) : 0.0;
    CellSummary c;
    c.scheme = static_cast<Scheme>(std::get<0>(key));
    c.snr_db = std::get<1>(key);
    c.beta = std::get<2>(key);
    c.mean_psnr_db = mean;
    c.std_error_db = std::sqrt(var / n);
    c.seeds = means.size();
    out.push_back(c);
  }
  return out;
}

}  // namespace supcast
