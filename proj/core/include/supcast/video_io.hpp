#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <limits>
#include <vector>

namespace supcast {

/// One grayscale (luminance) picture. Samples are row-major reals, nominally
/// in [0, 255]; reconstructions may leave that range.
struct Frame {
  std::size_t width = 0;
  std::size_t height = 0;
  std::vector<double> samples;

  Frame() = default;
  Frame(std::size_t w, std::size_t h, double fill = 0.0)
      : width(w), height(h), samples(w * h, fill) {}

  double& at(std::size_t row, std::size_t col) { return samples[row * width + col]; }
  double at(std::size_t row, std::size_t col) const { return samples[row * width + col]; }
};

/// Consecutive frames that are transformed and transmitted together.
struct Gop {
  std::vector<Frame> frames;

  std::size_t size() const { return frames.size(); }
  std::size_t width() const { return frames.empty() ? 0 : frames.front().width; }
  std::size_t height() const { return frames.empty() ? 0 : frames.front().height; }
};

/// Throws InputError unless `gop` is non-empty, all frames share dimensions
/// and every sample is finite.
void validate(const Gop& gop);

/// Reads headerless 8-bit Y-only video, frame-major. A trailing partial GOP is
/// dropped.
std::vector<Gop> load_raw_video(const std::filesystem::path& path, std::size_t width,
                                std::size_t height, std::size_t gop_size);

/// Writes frames as 8-bit Y-only samples (rounded and clamped to [0, 255]).
void write_raw_video(const std::filesystem::path& path, const std::vector<Gop>& gops);

enum class SyntheticKind { constant, gradient, moving_pattern };

/// Deterministic test content.
///   constant:       every sample equals `level`.
///   gradient:       a diagonal ramp with a seed-dependent orientation, drifting
///                   one pixel per frame.
///   moving_pattern: translating textured scene (gratings, a moving block,
///                   fine texture and sensor noise) with seed-dependent motion.
/// `first_frame` offsets time so consecutive GOPs of one sequence continue the
/// motion.
Gop synthetic_gop(SyntheticKind kind, std::size_t width, std::size_t height,
                  std::size_t gop_size, std::uint64_t seed, double level = 128.0,
                  std::size_t first_frame = 0);

/// `gop_count` consecutive GOPs of one synthetic sequence.
std::vector<Gop> synthetic_video(SyntheticKind kind, std::size_t width, std::size_t height,
                                 std::size_t gop_size, std::size_t gop_count,
                                 std::uint64_t seed);

inline constexpr double kPsnrPeak = 255.0;
/// PSNR returned for identical inputs.
inline constexpr double kPsnrInfinite = std::numeric_limits<double>::infinity();

double frame_mse(const Frame& reference, const Frame& reconstructed);

/// 10·log10(255²/mse); kPsnrInfinite when mse is zero.
double psnr_from_mse(double mse);

/// Mean over frames of the per-frame PSNR.
double psnr(const Gop& reference, const Gop& reconstructed);

/// Per-frame PSNR values, in frame order.
std::vector<double> frame_psnrs(const Gop& reference, const Gop& reconstructed);

/// Clamps every sample into [0, 255].
void clamp_pixels(Gop& gop);

}  // namespace supcast
