#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "supcast/channel.hpp"
#include "supcast/layering.hpp"
#include "supcast/matching.hpp"
#include "supcast/power.hpp"
#include "supcast/transform.hpp"
#include "supcast/video_io.hpp"

namespace supcast {

enum class Scheme { supcast_bl, supcast_el, softcast, noma_ra };

std::string_view to_string(Scheme scheme);
/// Throws InputError for unknown names.
Scheme parse_scheme(std::string_view name);
std::string_view to_string(Zone zone);

/// Ring placement of near and far users around the base station.
struct UserLayout {
  double near_min_m = 100.0;
  double near_max_m = 500.0;
  double far_min_m = 500.0;
  double far_max_m = 900.0;
  std::size_t users_per_zone = 5;
};

/// Draws users uniformly over each ring's area; near users first.
std::vector<UserGeometry> place_users(const UserLayout& layout, double eta, Rng& rng);

struct Scenario {
  std::vector<UserGeometry> users;
  double eta = 2.0;
  double snr_db = 15.0;
  double beta = 0.5;
  std::size_t gop_size = 4;
  std::size_t chunks_per_side = 8;
  double p_chunk = 1.0;  // average power per transmitted chunk, watts
  Scheme scheme = Scheme::supcast_bl;
  std::uint64_t seed = 0;
  double path_loss_reference_m = kDefaultPathLossReference;
  bool clamp_pixels = false;

  /// Noise variance from the average channel SNR, 10 log10(P / sigma2).
  double sigma2() const;
};

/// A GOP after the 3D-DCT and chunk partition.
struct ChunkedGop {
  VolumeDims dims;
  std::size_t chunks_per_side = 0;
  std::vector<Chunk> chunks;  // indexed by chunk id
};

ChunkedGop chunk_gop(const Gop& gop, std::size_t chunks_per_side);

/// L/2 channel uses carrying one BL chunk and, for superposed schemes, one EL
/// chunk.
struct Slot {
  std::size_t bl = 0;                // chunk id
  std::optional<std::size_t> el;     // chunk id
  ScalingPair g;
  double lambda_bl = 0.0;
  double lambda_el = 0.0;
};

/// Everything a receiver needs besides the channel output: schedule, scaling
/// factors and chunk variances travel as side information.
struct TransmissionPlan {
  Scheme scheme = Scheme::supcast_bl;
  VolumeDims dims;
  std::vector<Slot> slots;
  std::vector<std::size_t> discarded;  // chunk ids
  double discarded_variance = 0.0;
  double discarded_energy = 0.0;
  double el_energy = 0.0;              // sum over EL chunks of squared coefficients
  std::size_t m = 0;                   // pairs (superposed) or chunks (softcast)
  Matching matching;                   // empty for softcast
  std::size_t proposals = 0;           // BECMA proposals, 0 otherwise
  double p_total = 0.0;
  LinkParams link;                     // worst-user link used by the optimiser
  std::optional<DistortionMatrix> distortion;  // supcast only
};

/// Index of the weakest (smallest |h|) user in `zone`, or nullopt.
std::optional<std::size_t> worst_user(std::span<const UserGeometry> users,
                                      std::span<const ChannelState> states, Zone zone);

/// DCT, partition, bandwidth plan, bisection, pre-allocation, distortion
/// matrix against the worst near and far users, BECMA, final re-allocation.
TransmissionPlan encode_supcast(const ChunkedGop& source, const Scenario& scenario,
                                std::span<const ChannelState> states, Driver driver);
TransmissionPlan encode_supcast(const Gop& gop, const Scenario& scenario,
                                std::span<const ChannelState> states, Driver driver);

/// Orthogonal baseline: keeps the strongest chunks that fit, sqrt(lambda)
/// power, one chunk per slot.
TransmissionPlan encode_softcast(const ChunkedGop& source, const Scenario& scenario);
TransmissionPlan encode_softcast(const Gop& gop, const Scenario& scenario);

/// Superposed baseline: Supcast layering with random scheduling and
/// per-chunk sqrt(lambda) power.
TransmissionPlan encode_noma_ra(const ChunkedGop& source, const Scenario& scenario,
                                std::uint64_t seed);
TransmissionPlan encode_noma_ra(const Gop& gop, const Scenario& scenario, std::uint64_t seed);

/// Dispatches on scenario.scheme.
TransmissionPlan encode(const ChunkedGop& source, const Scenario& scenario,
                        std::span<const ChannelState> states, std::uint64_t schedule_seed);

struct RunResult {
  Scheme scheme = Scheme::supcast_bl;
  std::uint64_t seed = 0;
  double snr_db = 0.0;
  double beta = 0.0;
  std::size_t user_id = 0;
  Zone zone = Zone::near;
  double distance_m = 0.0;
  double psnr_db = 0.0;
  double mse_total = 0.0;
  double mse_llse = 0.0;
  double mse_discarded = 0.0;
  double mse_undecodable_el = 0.0;
};

struct UserOutcome {
  Gop reconstructed;
  RunResult result;
};

/// Receives every slot at one user, reconstructs the GOP and scores it.
/// Near users decode BL and EL (perfect SIC); far users decode the BL only.
/// Discarded and undecoded chunks are reconstructed as zeros.
UserOutcome simulate_user(const TransmissionPlan& plan, const ChunkedGop& source,
                          const Gop& reference, std::size_t user_id, const UserGeometry& user,
                          const ChannelState& state, Rng& rng, bool clamp = false);

struct Sweep {
  UserLayout layout;
  double eta = 2.0;
  double p_chunk = 1.0;
  std::size_t chunks_per_side = 8;
  double path_loss_reference_m = kDefaultPathLossReference;
  bool clamp_pixels = false;
  std::vector<double> snrs_db{15.0};
  std::vector<double> betas{0.5};
  std::vector<Scheme> schemes{Scheme::supcast_bl};
  std::vector<std::uint64_t> seeds{1};
  std::uint64_t master_seed = 2019;
  std::size_t threads = 1;
};

/// Independent RNG stream keyed on the master seed and a tuple of labels.
Rng derive_stream(std::uint64_t master_seed, std::initializer_list<std::uint64_t> labels);

/// First label of every stream run_experiment draws. The remaining labels are
///   geometry: seed
///   fading:   seed, gop, user
///   noise:    seed, gop, user, bits(snr_db), bits(beta)
///   schedule: seed, gop, bits(beta)
/// where bits() is the IEEE-754 pattern, so a cell reruns identically in any grid.
enum class StreamTag : std::uint64_t { geometry = 1, fading = 2, noise = 3, schedule = 4 };

std::uint64_t stream_label(StreamTag tag);
std::uint64_t stream_label(double value);

/// Runs the Cartesian product of schemes, seeds, SNRs and betas over every GOP
/// of `video`. One row per (scheme, seed, snr, beta, user), ordered in that
/// nesting; PSNR is the mean over all frames, MSE terms the mean over GOPs.
/// Channels are drawn once per (seed, GOP, user) and shared by all cells.
std::vector<RunResult> run_experiment(const std::vector<Gop>& video, const Sweep& sweep);

struct CellSummary {
  Scheme scheme = Scheme::supcast_bl;
  double snr_db = 0.0;
  double beta = 0.0;
  double mean_psnr_db = 0.0;
  double std_error_db = 0.0;  // across seeds of the per-seed user mean
  std::size_t seeds = 0;
};

/// Averages rows per (scheme, snr, beta) over users (optionally one zone) and
/// seeds. Output follows first appearance order in `rows`.
std::vector<CellSummary> summarize(std::span<const RunResult> rows,
                                   std::optional<Zone> zone = std::nullopt);

}  // namespace supcast
