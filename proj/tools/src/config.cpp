#include "supcast_tools/config.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <sstream>

#include "supcast/error.hpp"

namespace supcast::tools {
namespace {

CLI::Validator half_open_unit(const std::string& name) {
  return CLI::Validator(
      [](std::string& value) -> std::string {
        double v = 0.0;
        if (!CLI::detail::lexical_cast(value, v)) return "'" + value + "' is not a number";
        if (!(v > 0.0) || v > 1.0) return "value " + value + " must lie in (0, 1]";
        return {};
      },
      "in (0,1]", name);
}

SyntheticKind parse_synthetic(const std::string& name) {
  if (name == "constant") return SyntheticKind::constant;
  if (name == "gradient") return SyntheticKind::gradient;
  if (name == "moving-pattern" || name == "moving_pattern") return SyntheticKind::moving_pattern;
  throw UsageError("--synthetic: unknown kind '" + name +
                   "' (expected constant, gradient or moving-pattern)");
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  auto parse_u64 = [&](const std::string& s) {
    std::size_t used = 0;
    std::uint64_t v = 0;
    try {
      v = std::stoull(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size() || s.front() == '-')
      throw UsageError("--seeds: '" + s + "' is not a non-negative integer");
    return v;
  };
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto dash = item.find('-', 1);
    if (dash == std::string::npos) {
      out.push_back(parse_u64(item));
    } else {
      const auto lo = parse_u64(item.substr(0, dash));
      const auto hi = parse_u64(item.substr(dash + 1));
      if (hi < lo) throw UsageError("--seeds: descending range '" + item + "'");
      for (auto s = lo; s <= hi; ++s) out.push_back(s);
    }
  }
  if (out.empty()) throw UsageError("--seeds: at least one seed is required");
  return out;
}

Config parse_config(const std::vector<std::string>& args) {
  Config cfg;
  CLI::App app{"supcast run"};
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.set_config("--config", "", "flat key=value file; flags override it");

  std::string input;
  std::string synthetic = "moving-pattern";
  std::string schemes;
  std::string seeds;
  std::vector<double> snr;

  app.add_option("--input", input, "raw 8-bit Y-only video (frames concatenated)");
  app.add_option("--synthetic", synthetic, "constant | gradient | moving-pattern");
  app.add_option("--video-seed", cfg.video_seed, "seed of the synthetic video");
  app.add_option("--gops", cfg.synthetic_gops, "number of synthetic GOPs")->check(CLI::PositiveNumber);
  app.add_option("--max-gops", cfg.max_gops, "limit GOPs read from --input (0 = all)");
  app.add_option("--width", cfg.width)->check(CLI::PositiveNumber);
  app.add_option("--height", cfg.height)->check(CLI::PositiveNumber);
  app.add_option("--gop", cfg.gop_size, "GOP size in frames")->check(CLI::PositiveNumber);
  app.add_option("--chunks-per-side", cfg.chunks_per_side)->check(CLI::PositiveNumber);
  app.add_option("--beta", cfg.beta, "bandwidth compression ratio")->check(half_open_unit("beta"));
  app.add_option("--snr", snr, "comma-separated channel SNRs in dB")->delimiter(',');
  app.add_option("--schemes", schemes, "comma list of supcast_bl, supcast_el, softcast, noma_ra");
  app.add_option("--eta", cfg.eta, "path-loss exponent")->check(CLI::PositiveNumber);
  app.add_option("--near-min", cfg.layout.near_min_m)->check(CLI::NonNegativeNumber);
  app.add_option("--near-max", cfg.layout.near_max_m)->check(CLI::NonNegativeNumber);
  app.add_option("--far-min", cfg.layout.far_min_m)->check(CLI::NonNegativeNumber);
  app.add_option("--far-max", cfg.layout.far_max_m)->check(CLI::NonNegativeNumber);
  app.add_option("--users-per-zone", cfg.layout.users_per_zone)->check(CLI::PositiveNumber);
  app.add_option("--p-chunk", cfg.p_chunk, "average power per chunk (W)")->check(CLI::PositiveNumber);
  app.add_option("--pathloss-ref-m", cfg.path_loss_reference_m,
                 "distance scale of the path-loss law (m)")
      ->check(CLI::PositiveNumber);
  app.add_option("--seeds", seeds, "trial seeds, e.g. 1,2,3 or 1-20");
  app.add_option("--master-seed", cfg.master_seed);
  app.add_option("--threads", cfg.threads)->check(CLI::PositiveNumber);
  app.add_flag("--clamp-pixels", cfg.clamp_pixels, "clamp reconstructions to [0,255]");
  app.add_option("--out", cfg.out, "CSV output path");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    throw HelpRequested(app.help());
  } catch (const CLI::ParseError& e) {
    throw UsageError(e.what());
  }

  if (!input.empty()) cfg.input = input;
  cfg.synthetic = parse_synthetic(synthetic);
  if (!snr.empty()) cfg.snr_db = snr;
  if (!seeds.empty()) cfg.seeds = parse_seed_list(seeds);
  if (!schemes.empty()) {
    cfg.schemes.clear();
    std::stringstream ss(schemes);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      try {
        cfg.schemes.push_back(parse_scheme(item));
      } catch (const InputError& e) {
        throw UsageError(std::string("--schemes: ") + e.what());
      }
    }
    if (cfg.schemes.empty()) throw UsageError("--schemes: at least one scheme is required");
  }

  if (cfg.width % cfg.chunks_per_side != 0 || cfg.height % cfg.chunks_per_side != 0) {
    std::ostringstream msg;
    msg << "--chunks-per-side: " << cfg.width << "x" << cfg.height << " frames are not divisible by "
        << cfg.chunks_per_side;
    throw UsageError(msg.str());
  }
  if ((cfg.width / cfg.chunks_per_side) * (cfg.height / cfg.chunks_per_side) % 2 != 0)
    throw UsageError("--chunks-per-side: chunks must hold an even number of coefficients");
  if (cfg.layout.near_max_m < cfg.layout.near_min_m)
    throw UsageError("--near-max: must not be below --near-min");
  if (cfg.layout.far_max_m < cfg.layout.far_min_m)
    throw UsageError("--far-max: must not be below --far-min");
  return cfg;
}

std::vector<Gop> load_video(const Config& config) {
  if (config.input) {
    auto gops = load_raw_video(*config.input, config.width, config.height, config.gop_size);
    if (config.max_gops > 0 && gops.size() > config.max_gops) gops.resize(config.max_gops);
    if (gops.empty()) throw InputError("input video holds no complete GOP");
    return gops;
  }
  return synthetic_video(config.synthetic, config.width, config.height, config.gop_size,
                         config.synthetic_gops, config.video_seed);
}

Sweep make_sweep(const Config& config) {
  Sweep s;
  s.layout = config.layout;
  s.eta = config.eta;
  s.p_chunk = config.p_chunk;
  s.chunks_per_side = config.chunks_per_side;
  s.path_loss_reference_m = config.path_loss_reference_m;
  s.clamp_pixels = config.clamp_pixels;
  s.snrs_db = config.snr_db;
  s.betas = {config.beta};
  s.schemes = config.schemes;
  s.seeds = config.seeds;
  s.master_seed = config.master_seed;
  s.threads = config.threads;
  return s;
}

}  // namespace supcast::tools
