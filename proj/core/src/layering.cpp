#include "supcast/layering.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "supcast/error.hpp"

namespace supcast {
namespace {

void check_beta(double beta) {
  if (!(beta > 0.0) || beta > 1.0) {
    std::ostringstream msg;
    msg << "bandwidth compression ratio beta must lie in (0, 1], got " << beta;
    throw InputError(msg.str());
  }
}

std::size_t channel_symbols(std::size_t total_chunks, std::size_t chunk_len, double beta) {
  if (chunk_len == 0 || chunk_len % 2 != 0)
    throw InputError("chunk length must be a positive even number of coefficients");
  check_beta(beta);
  const std::size_t source = total_chunks * chunk_len / 2;
  return static_cast<std::size_t>(std::floor(beta * static_cast<double>(source)));
}

}  // namespace

std::size_t plan_bandwidth(std::size_t total_chunks, std::size_t chunk_len, double beta) {
  if (total_chunks % 2 != 0) throw InputError("total chunk count must be even");
  const std::size_t symbols = channel_symbols(total_chunks, chunk_len, beta);
  return std::min(symbols / (chunk_len / 2), total_chunks / 2);
}

std::size_t plan_bandwidth_orthogonal(std::size_t total_chunks, std::size_t chunk_len,
                                      double beta) {
  const std::size_t symbols = channel_symbols(total_chunks, chunk_len, beta);
  return std::min(symbols / (chunk_len / 2), total_chunks);
}

std::vector<std::size_t> rank_by_variance(const std::vector<Chunk>& chunks) {
  std::vector<std::size_t> order(chunks.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (chunks[a].variance != chunks[b].variance) return chunks[a].variance > chunks[b].variance;
    return chunks[a].id < chunks[b].id;
  });
  return order;
}

LayerPlan bisect_layers(const std::vector<Chunk>& chunks, std::size_t m_prime) {
  if (m_prime == 0) throw InputError("nothing to transmit: retained pair count is zero");
  if (chunks.size() < 2 * m_prime) {
    std::ostringstream msg;
    msg << "cannot form " << m_prime << " pairs from " << chunks.size() << " chunks";
    throw InputError(msg.str());
  }
  const auto order = rank_by_variance(chunks);
  LayerPlan plan;
  plan.m = m_prime;
  plan.bl.reserve(m_prime);
  plan.el.reserve(m_prime);
  for (std::size_t k = 0; k < order.size(); ++k) {
    const Chunk& c = chunks[order[k]];
    if (k < m_prime) {
      plan.bl.push_back(c);
    } else if (k < 2 * m_prime) {
      plan.el.push_back(c);
    } else {
      plan.discarded.push_back(c.id);
      plan.discarded_variance += c.variance;
      plan.discarded_energy += c.energy();
    }
  }
  return plan;
}

}  // namespace supcast
