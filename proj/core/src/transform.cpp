#include "supcast/transform.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <sstream>

#include "supcast/error.hpp"

namespace supcast {
namespace {

// FFTW's planner is not thread-safe; plan execution on new arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

class R2rPlan {
 public:
  R2rPlan(const VolumeDims& dims, fftw_r2r_kind kind, double* in, double* out) {
    std::lock_guard lock(planner_mutex());
    plan_ = fftw_plan_r2r_3d(static_cast<int>(dims.depth), static_cast<int>(dims.height),
                             static_cast<int>(dims.width), in, out, kind, kind, kind, FFTW_ESTIMATE);
    if (plan_ == nullptr) throw std::runtime_error("FFTW failed to create a DCT plan");
  }
  ~R2rPlan() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(plan_);
  }
  R2rPlan(const R2rPlan&) = delete;
  R2rPlan& operator=(const R2rPlan&) = delete;

  void execute(double* in, double* out) const { fftw_execute_r2r(plan_, in, out); }

 private:
  fftw_plan plan_ = nullptr;
};

// FFTW's REDFT10 computes 2*sum x_n cos(pi k (n+1/2)/N); the orthonormal
// DCT-II divides by sqrt(4N) for k=0 and sqrt(2N) otherwise.
std::vector<double> axis_scale(std::size_t n) {
  std::vector<double> s(n, 1.0 / std::sqrt(2.0 * static_cast<double>(n)));
  s[0] = 1.0 / std::sqrt(4.0 * static_cast<double>(n));
  return s;
}

void apply_scale(std::vector<double>& data, const VolumeDims& d, bool inverse) {
  const auto sw = axis_scale(d.width);
  const auto sh = axis_scale(d.height);
  const auto st = axis_scale(d.depth);
  // REDFT01 computes X_0 + 2 sum_{k>=1} X_k cos(...), so the orthonormal
  // DCT-III needs input weights 1/sqrt(N) = 2*s_0 for k = 0 and s_k otherwise.
  auto factor = [inverse](const std::vector<double>& s, std::size_t k) {
    if (!inverse) return s[k];
    return k == 0 ? 2.0 * s[0] : s[k];
  };
  std::size_t idx = 0;
  for (std::size_t t = 0; t < d.depth; ++t) {
    const double ft = factor(st, t);
    for (std::size_t r = 0; r < d.height; ++r) {
      const double frt = ft * factor(sh, r);
      for (std::size_t c = 0; c < d.width; ++c, ++idx) data[idx] *= frt * factor(sw, c);
    }
  }
}

}  // namespace

double mean_square(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double acc = 0.0;
  for (double v : values) acc += v * v;
  return acc / static_cast<double>(values.size());
}

CoeffVolume forward_3d_dct(const Gop& gop) {
  validate(gop);
  const VolumeDims dims{gop.width(), gop.height(), gop.size()};
  std::vector<double> in(dims.size());
  std::size_t offset = 0;
  for (const auto& f : gop.frames) {
    std::copy(f.samples.begin(), f.samples.end(), in.begin() + static_cast<std::ptrdiff_t>(offset));
    offset += f.samples.size();
  }
  CoeffVolume out(dims);
  const R2rPlan plan(dims, FFTW_REDFT10, in.data(), out.coeffs.data());
  plan.execute(in.data(), out.coeffs.data());
  apply_scale(out.coeffs, dims, false);
  return out;
}

Gop inverse_3d_dct(const CoeffVolume& volume) {
  const auto& dims = volume.dims;
  if (dims.width == 0 || dims.height == 0 || dims.depth == 0 ||
      volume.coeffs.size() != dims.size())
    throw InputError("coefficient volume dimensions are inconsistent");
  std::vector<double> in = volume.coeffs;
  apply_scale(in, dims, true);
  std::vector<double> out(dims.size());
  const R2rPlan plan(dims, FFTW_REDFT01, in.data(), out.data());
  plan.execute(in.data(), out.data());

  Gop gop;
  gop.frames.reserve(dims.depth);
  const std::size_t plane = dims.width * dims.height;
  for (std::size_t t = 0; t < dims.depth; ++t) {
    Frame f(dims.width, dims.height);
    const auto first = out.begin() + static_cast<std::ptrdiff_t>(t * plane);
    std::copy(first, first + static_cast<std::ptrdiff_t>(plane), f.samples.begin());
    gop.frames.push_back(std::move(f));
  }
  return gop;
}

std::vector<Chunk> partition_chunks(const CoeffVolume& volume, std::size_t chunks_per_side) {
  const auto& d = volume.dims;
  if (chunks_per_side == 0) throw InputError("chunks_per_side must be at least 1");
  if (d.width % chunks_per_side != 0 || d.height % chunks_per_side != 0) {
    std::ostringstream msg;
    msg << "frame " << d.width << "x" << d.height << " is not divisible into "
        << chunks_per_side << "x" << chunks_per_side
        << " chunks: width and height must both be multiples of " << chunks_per_side;
    throw InputError(msg.str());
  }
  const std::size_t cols = d.width / chunks_per_side;
  const std::size_t rows = d.height / chunks_per_side;

  std::vector<Chunk> chunks;
  chunks.reserve(d.depth * chunks_per_side * chunks_per_side);
  for (std::size_t t = 0; t < d.depth; ++t) {
    for (std::size_t br = 0; br < chunks_per_side; ++br) {
      for (std::size_t bc = 0; bc < chunks_per_side; ++bc) {
        Chunk c;
        c.id = chunks.size();
        c.origin = {t, br * rows, bc * cols};
        c.rows = rows;
        c.cols = cols;
        c.coeffs.resize(rows * cols);
        for (std::size_t r = 0; r < rows; ++r)
          for (std::size_t k = 0; k < cols; ++k)
            c.coeffs[r * cols + k] = volume.at(t, c.origin.row + r, c.origin.col + k);
        c.variance = mean_square(c.coeffs);
        chunks.push_back(std::move(c));
      }
    }
  }
  return chunks;
}

CoeffVolume assemble_chunks(std::span<const Chunk> chunks, const VolumeDims& dims) {
  CoeffVolume out(dims);
  std::vector<bool> covered(dims.size(), false);
  for (const auto& c : chunks) {
    if (c.coeffs.size() != c.rows * c.cols)
      throw InputError("chunk coefficient count does not match its shape");
    if (c.origin.plane >= dims.depth || c.origin.row + c.rows > dims.height ||
        c.origin.col + c.cols > dims.width)
      throw InputError("chunk lies outside the target volume");
    for (std::size_t r = 0; r < c.rows; ++r) {
      for (std::size_t k = 0; k < c.cols; ++k) {
        const std::size_t idx =
            (c.origin.plane * dims.height + c.origin.row + r) * dims.width + c.origin.col + k;
        if (covered[idx]) {
          std::ostringstream msg;
          msg << "chunk " << c.id << " overlaps a previously placed chunk at plane "
              << c.origin.plane << ", row " << c.origin.row << ", col " << c.origin.col;
          throw InputError(msg.str());
        }
        covered[idx] = true;
        out.coeffs[idx] = c.coeffs[r * c.cols + k];
      }
    }
  }
  return out;
}

}  // namespace supcast
