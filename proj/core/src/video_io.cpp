#include "supcast/video_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "supcast/error.hpp"

namespace supcast {
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Uniform value in [-1, 1) keyed on integer lattice coordinates.
double lattice_noise(std::uint64_t seed, std::int64_t x, std::int64_t y) {
  const std::uint64_t key =
      splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(x) * 0x632be59bd9b4e019ULL ^
                                   static_cast<std::uint64_t>(y)));
  return static_cast<double>(key >> 11) * 0x1.0p-52 - 1.0;
}

struct PatternParams {
  double fx1, fy1, phase1, fx2, fy2, phase2;
  std::int64_t vx, vy;
  double block_vx, block_vy;
  double block_x0, block_y0;
};

PatternParams make_pattern(std::uint64_t seed) {
  std::mt19937_64 rng(splitmix64(seed));
  std::uniform_real_distribution<double> freq(0.004, 0.03);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::uniform_int_distribution<int> vel(-3, 3);
  std::uniform_real_distribution<double> bvel(-6.0, 6.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  PatternParams p{};
  p.fx1 = freq(rng);
  p.fy1 = freq(rng);
  p.phase1 = phase(rng);
  p.fx2 = 2.5 * freq(rng);
  p.fy2 = 2.5 * freq(rng);
  p.phase2 = phase(rng);
  p.vx = vel(rng);
  p.vy = vel(rng);
  if (p.vx == 0 && p.vy == 0) p.vx = 1;
  p.block_vx = bvel(rng);
  p.block_vy = bvel(rng);
  p.block_x0 = unit(rng);
  p.block_y0 = unit(rng);
  return p;
}

}  // namespace

void validate(const Gop& gop) {
  if (gop.frames.empty()) throw InputError("GOP must contain at least one frame");
  const auto w = gop.width();
  const auto h = gop.height();
  if (w == 0 || h == 0) throw InputError("frame dimensions must be nonzero");
  for (const auto& f : gop.frames) {
    if (f.width != w || f.height != h)
      throw InputError("all frames in a GOP must share dimensions");
    if (f.samples.size() != w * h) throw InputError("frame sample count != width*height");
    for (double s : f.samples)
      if (!std::isfinite(s)) throw InputError("frame contains a non-finite sample");
  }
}

std::vector<Gop> load_raw_video(const std::filesystem::path& path, std::size_t width,
                                std::size_t height, std::size_t gop_size) {
  if (width == 0 || height == 0) throw InputError("width and height must be nonzero");
  if (gop_size == 0) throw InputError("gop_size must be at least 1");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open raw video file: " + path.string());

  const std::size_t frame_bytes = width * height;
  const auto file_bytes = static_cast<std::size_t>(std::filesystem::file_size(path));
  if (file_bytes % frame_bytes != 0) {
    std::ostringstream msg;
    msg << "raw video size " << file_bytes << " is not a multiple of the frame size "
        << frame_bytes << " bytes (" << width << "x" << height << ")";
    throw InputError(msg.str());
  }

  const std::size_t frame_count = file_bytes / frame_bytes;
  const std::size_t gop_count = frame_count / gop_size;
  std::vector<Gop> gops(gop_count);
  std::vector<unsigned char> buffer(frame_bytes);
  for (auto& gop : gops) {
    gop.frames.reserve(gop_size);
    for (std::size_t t = 0; t < gop_size; ++t) {
      if (!in.read(reinterpret_cast<char*>(buffer.data()),
                   static_cast<std::streamsize>(frame_bytes)))
        throw InputError("short read from " + path.string());
      Frame f(width, height);
      std::transform(buffer.begin(), buffer.end(), f.samples.begin(),
                     [](unsigned char b) { return static_cast<double>(b); });
      gop.frames.push_back(std::move(f));
    }
  }
  return gops;
}

void write_raw_video(const std::filesystem::path& path, const std::vector<Gop>& gops) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  std::vector<unsigned char> buffer;
  for (const auto& gop : gops) {
    for (const auto& f : gop.frames) {
      buffer.resize(f.samples.size());
      std::transform(f.samples.begin(), f.samples.end(), buffer.begin(), [](double s) {
        return static_cast<unsigned char>(std::clamp(std::lround(s), 0L, 255L));
      });
      out.write(reinterpret_cast<const char*>(buffer.data()),
                static_cast<std::streamsize>(buffer.size()));
    }
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Gop synthetic_gop(SyntheticKind kind, std::size_t width, std::size_t height,
                  std::size_t gop_size, std::uint64_t seed, double level,
                  std::size_t first_frame) {
  if (width == 0 || height == 0) throw InputError("synthetic video needs nonzero width and height");
  if (gop_size == 0) throw InputError("gop_size must be at least 1");

  Gop gop;
  gop.frames.reserve(gop_size);
  const double two_pi = 2.0 * std::numbers::pi;

  switch (kind) {
    case SyntheticKind::constant:
      for (std::size_t t = 0; t < gop_size; ++t) gop.frames.emplace_back(width, height, level);
      break;

    case SyntheticKind::gradient: {
      const bool flip = (splitmix64(seed) & 1U) != 0;
      const double span = static_cast<double>(width + height);
      for (std::size_t t = 0; t < gop_size; ++t) {
        Frame f(width, height);
        const double shift = static_cast<double>(first_frame + t);
        for (std::size_t r = 0; r < height; ++r)
          for (std::size_t c = 0; c < width; ++c) {
            const double col = flip ? static_cast<double>(width - 1 - c) : static_cast<double>(c);
            const double pos = std::fmod(col + static_cast<double>(r) + shift, span);
            f.at(r, c) = 255.0 * pos / span;
          }
        gop.frames.push_back(std::move(f));
      }
      break;
    }

    case SyntheticKind::moving_pattern: {
      const PatternParams p = make_pattern(seed);
      const double bw = 0.2 * static_cast<double>(width);
      const double bh = 0.25 * static_cast<double>(height);
      std::mt19937_64 sensor(splitmix64(seed ^ 0x5eed5eedULL) + first_frame);
      std::normal_distribution<double> sensor_noise(0.0, 2.0);
      for (std::size_t t = 0; t < gop_size; ++t) {
        Frame f(width, height);
        const auto tt = static_cast<std::int64_t>(first_frame + t);
        const double td = static_cast<double>(tt);
        const double bx = std::fmod(p.block_x0 * width + p.block_vx * td + 10.0 * width, width);
        const double by = std::fmod(p.block_y0 * height + p.block_vy * td + 10.0 * height, height);
        for (std::size_t r = 0; r < height; ++r) {
          for (std::size_t c = 0; c < width; ++c) {
            const auto x = static_cast<std::int64_t>(c) - p.vx * tt;
            const auto y = static_cast<std::int64_t>(r) - p.vy * tt;
            const double xd = static_cast<double>(x);
            const double yd = static_cast<double>(y);
            double v = 118.0;
            v += 45.0 * std::sin(two_pi * (p.fx1 * xd + p.fy1 * yd) + p.phase1);
            v += 18.0 * std::sin(two_pi * (p.fx2 * xd - p.fy2 * yd) + p.phase2);
            // fine texture: 2x2-smoothed lattice noise riding with the scene
            const double tex = 0.25 * (lattice_noise(seed, x, y) + lattice_noise(seed, x + 1, y) +
                                       lattice_noise(seed, x, y + 1) +
                                       lattice_noise(seed, x + 1, y + 1));
            v += 24.0 * tex;
            const double dx = std::fmod(static_cast<double>(c) - bx + width, width);
            const double dy = std::fmod(static_cast<double>(r) - by + height, height);
            if (dx < bw && dy < bh) v += 50.0;
            v += sensor_noise(sensor);
            f.at(r, c) = std::clamp(v, 0.0, 255.0);
          }
        }
        gop.frames.push_back(std::move(f));
      }
      break;
    }
  }
  return gop;
}

std::vector<Gop> synthetic_video(SyntheticKind kind, std::size_t width, std::size_t height,
                                 std::size_t gop_size, std::size_t gop_count,
                                 std::uint64_t seed) {
  std::vector<Gop> out;
  out.reserve(gop_count);
  for (std::size_t g = 0; g < gop_count; ++g)
    out.push_back(synthetic_gop(kind, width, height, gop_size, seed, 128.0, g * gop_size));
  return out;
}

double frame_mse(const Frame& reference, const Frame& reconstructed) {
  if (reference.width != reconstructed.width || reference.height != reconstructed.height ||
      reference.samples.size() != reconstructed.samples.size())
    throw InputError("frame dimension mismatch");
  if (reference.samples.empty()) throw InputError("empty frame");
  double acc = 0.0;
  for (std::size_t k = 0; k < reference.samples.size(); ++k) {
    const double e = reference.samples[k] - reconstructed.samples[k];
    acc += e * e;
  }
  return acc / static_cast<double>(reference.samples.size());
}

double psnr_from_mse(double mse) {
  if (mse <= 0.0) return kPsnrInfinite;
  return 10.0 * std::log10(kPsnrPeak * kPsnrPeak / mse);
}

std::vector<double> frame_psnrs(const Gop& reference, const Gop& reconstructed) {
  if (reference.size() != reconstructed.size())
    throw InputError("GOP size mismatch between reference and reconstruction");
  std::vector<double> out;
  out.reserve(reference.size());
  for (std::size_t t = 0; t < reference.size(); ++t)
    out.push_back(psnr_from_mse(frame_mse(reference.frames[t], reconstructed.frames[t])));
  return out;
}

double psnr(const Gop& reference, const Gop& reconstructed) {
  const auto values = frame_psnrs(reference, reconstructed);
  if (values.empty()) throw InputError("cannot compute PSNR of an empty GOP");
  double acc = 0.0;
  for (double v : values) acc += v;
  return acc / static_cast<double>(values.size());
}

void clamp_pixels(Gop& gop) {
  for (auto& f : gop.frames)
    for (auto& s : f.samples) s = std::clamp(s, 0.0, 255.0);
}

}  // namespace supcast
