#pragma once

#include <cstddef>
#include <vector>

#include "supcast/transform.hpp"

namespace supcast {

/// Result of sorting and bisecting a GOP's chunks. bl[i] and el[i] are the
/// i-th strongest chunks of each layer; pairing is decided later by scheduling.
struct LayerPlan {
  std::vector<Chunk> bl;
  std::vector<Chunk> el;
  std::vector<std::size_t> discarded;  // chunk ids
  double discarded_variance = 0.0;     // sum of lambda over discarded chunks
  double discarded_energy = 0.0;       // sum of squared coefficients
  std::size_t m = 0;
};

/// Number of superposed BL/EL pairs that fit the channel.
/// Source bandwidth is total_chunks * L / 2 complex symbols; the channel
/// offers floor(beta * source) of them and each pair occupies L / 2.
std::size_t plan_bandwidth(std::size_t total_chunks, std::size_t chunk_len, double beta);

/// Number of chunks an orthogonal (one chunk per slot) scheme can send under
/// the same bandwidth accounting.
std::size_t plan_bandwidth_orthogonal(std::size_t total_chunks, std::size_t chunk_len,
                                      double beta);

/// Chunk ids ordered by descending variance, ties by ascending id.
std::vector<std::size_t> rank_by_variance(const std::vector<Chunk>& chunks);

/// Keeps the 2M' strongest chunks; the top M' form the base layer and the
/// next M' the enhancement layer.
LayerPlan bisect_layers(const std::vector<Chunk>& chunks, std::size_t m_prime);

}  // namespace supcast
