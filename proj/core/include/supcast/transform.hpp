#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "supcast/video_io.hpp"

namespace supcast {

struct VolumeDims {
  std::size_t width = 0;
  std::size_t height = 0;
  std::size_t depth = 0;  // GOP size

  std::size_t size() const { return width * height * depth; }
  friend bool operator==(const VolumeDims&, const VolumeDims&) = default;
};

/// 3D-DCT coefficients of one GOP, stored plane-major then row-major:
/// index = (t * height + row) * width + col.
struct CoeffVolume {
  VolumeDims dims;
  std::vector<double> coeffs;

  CoeffVolume() = default;
  explicit CoeffVolume(VolumeDims d) : dims(d), coeffs(d.size(), 0.0) {}

  double& at(std::size_t t, std::size_t row, std::size_t col) {
    return coeffs[(t * dims.height + row) * dims.width + col];
  }
  double at(std::size_t t, std::size_t row, std::size_t col) const {
    return coeffs[(t * dims.height + row) * dims.width + col];
  }
};

/// Orthonormal separable DCT-II along width, height and time.
CoeffVolume forward_3d_dct(const Gop& gop);

/// Exact inverse of forward_3d_dct (orthonormal DCT-III).
Gop inverse_3d_dct(const CoeffVolume& volume);

struct ChunkOrigin {
  std::size_t plane = 0;
  std::size_t row = 0;
  std::size_t col = 0;
  friend bool operator==(const ChunkOrigin&, const ChunkOrigin&) = default;
};

/// Rectangular block of coefficients from one temporal plane. `variance` is the
/// zero-mean second moment (mean of squares).
struct Chunk {
  std::size_t id = 0;
  ChunkOrigin origin;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> coeffs;  // row-major, rows * cols
  double variance = 0.0;

  std::size_t size() const { return coeffs.size(); }
  double energy() const { return variance * static_cast<double>(coeffs.size()); }
};

double mean_square(std::span<const double> values);

/// Splits each temporal plane into an N_c x N_c grid of equal blocks.
/// Chunk ids run plane-major, then block-row, then block-column.
std::vector<Chunk> partition_chunks(const CoeffVolume& volume, std::size_t chunks_per_side);

/// Writes chunks back into a zero-initialised volume. Positions not covered by
/// any chunk stay zero. Throws InputError when two chunks overlap or a chunk
/// falls outside `dims`.
CoeffVolume assemble_chunks(std::span<const Chunk> chunks, const VolumeDims& dims);

}  // namespace supcast
