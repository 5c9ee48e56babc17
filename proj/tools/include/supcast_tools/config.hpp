#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "supcast/pipeline.hpp"
#include "supcast/video_io.hpp"

namespace supcast::tools {

/// Bad flags or config values; the CLI exits with status 2.
class UsageError : public std::runtime_error {
 public:
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown by parse_config for --help; carries the rendered help text.
class HelpRequested : public std::runtime_error {
 public:
  explicit HelpRequested(const std::string& text) : std::runtime_error(text) {}
};

/// Settings for `supcast run`. Defaults reproduce the evaluation setup:
/// CIF luma, GOP 4, 8x8 chunks per frame, beta 0.5, eta 2, five users per
/// ring at 100-500 m and 500-900 m, 1 W per chunk.
struct Config {
  std::optional<std::filesystem::path> input;  // raw Y-only video; synthetic otherwise
  SyntheticKind synthetic = SyntheticKind::moving_pattern;
  std::uint64_t video_seed = 7;
  std::size_t synthetic_gops = 1;
  std::size_t max_gops = 0;  // 0: every GOP of the input file

  std::size_t width = 352;
  std::size_t height = 288;
  std::size_t gop_size = 4;
  std::size_t chunks_per_side = 8;
  double beta = 0.5;
  std::vector<double> snr_db{5.0, 10.0, 15.0, 20.0, 25.0};
  std::vector<Scheme> schemes{Scheme::supcast_bl, Scheme::softcast, Scheme::noma_ra};
  double eta = 2.0;
  UserLayout layout;
  double p_chunk = 1.0;
  double path_loss_reference_m = kDefaultPathLossReference;
  std::vector<std::uint64_t> seeds{1};
  std::uint64_t master_seed = 2019;
  std::size_t threads = 1;
  bool clamp_pixels = false;
  std::filesystem::path out = "supcast_results.csv";
};

/// Parses `run` arguments (without the program and subcommand names).
/// Precedence: flags, then `--config` file (flat key=value), then defaults.
/// Throws UsageError naming the offending flag or key.
Config parse_config(const std::vector<std::string>& args);

/// "1,2,5" or "1-20" or a mix ("1-3,9").
std::vector<std::uint64_t> parse_seed_list(const std::string& text);

std::vector<Gop> load_video(const Config& config);
Sweep make_sweep(const Config& config);

}  // namespace supcast::tools
