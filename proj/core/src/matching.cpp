#include "supcast/matching.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <random>
#include <sstream>

#include "supcast/error.hpp"

namespace supcast {
namespace {

constexpr std::size_t kUnmatched = std::numeric_limits<std::size_t>::max();

// value(p, r): cost seen by proposer p for receiver r (and by r for p).
template <typename Value>
std::vector<std::size_t> ranked(std::size_t m, std::size_t owner, Value value) {
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return value(owner, a) < value(owner, b);
  });
  return order;
}

// Deferred acceptance with proposer/receiver preferences both derived from
// value(p, r). Returns receiver assigned to each proposer.
template <typename Value>
std::pair<std::vector<std::size_t>, std::size_t> deferred_acceptance(std::size_t m, Value value) {
  std::vector<std::vector<std::size_t>> prefs(m);
  for (std::size_t p = 0; p < m; ++p) prefs[p] = ranked(m, p, value);

  // receiver_rank[r][p]: position of proposer p in receiver r's list
  std::vector<std::vector<std::size_t>> receiver_rank(m, std::vector<std::size_t>(m));
  for (std::size_t r = 0; r < m; ++r) {
    const auto order = ranked(m, r, [&](std::size_t rr, std::size_t p) { return value(p, rr); });
    for (std::size_t pos = 0; pos < m; ++pos) receiver_rank[r][order[pos]] = pos;
  }

  std::vector<std::size_t> next(m, 0);
  std::vector<std::size_t> held_by(m, kUnmatched);  // receiver -> proposer
  std::vector<std::size_t> assigned(m, kUnmatched);
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>> free;
  for (std::size_t p = 0; p < m; ++p) free.push(p);

  std::size_t proposals = 0;
  while (!free.empty()) {
    const std::size_t p = free.top();
    const std::size_t r = prefs[p][next[p]++];
    ++proposals;
    const std::size_t current = held_by[r];
    if (current == kUnmatched) {
      held_by[r] = p;
      assigned[p] = r;
      free.pop();
    } else if (receiver_rank[r][p] < receiver_rank[r][current]) {
      held_by[r] = p;
      assigned[p] = r;
      assigned[current] = kUnmatched;
      free.pop();
      free.push(current);
    }
    // otherwise p stays free and tries its next choice
  }
  return {assigned, proposals};
}

}  // namespace

DistortionMatrix::DistortionMatrix(const std::vector<std::vector<double>>& rows)
    : m_(rows.size()), d_() {
  d_.reserve(m_ * m_);
  for (const auto& row : rows) {
    if (row.size() != m_) throw InputError("distortion matrix must be square");
    d_.insert(d_.end(), row.begin(), row.end());
  }
}

void DistortionMatrix::validate() const {
  for (std::size_t k = 0; k < d_.size(); ++k) {
    const double v = d_[k];
    if (std::isnan(v) || !std::isfinite(v) || v < 0.0) {
      std::ostringstream msg;
      msg << "distortion matrix entry (" << k / m_ << ", " << k % m_ << ") = " << v
          << " is not a finite non-negative value";
      throw InputError(msg.str());
    }
  }
}

std::vector<std::size_t> Matching::inverse() const {
  std::vector<std::size_t> inv(partner.size(), kUnmatched);
  for (std::size_t i = 0; i < partner.size(); ++i) inv.at(partner[i]) = i;
  return inv;
}

bool Matching::is_bijection() const {
  std::vector<bool> seen(partner.size(), false);
  for (std::size_t j : partner) {
    if (j >= partner.size() || seen[j]) return false;
    seen[j] = true;
  }
  return true;
}

PreferenceLists build_preferences(const DistortionMatrix& d) {
  d.validate();
  const std::size_t m = d.size();
  PreferenceLists out;
  out.bl.reserve(m);
  out.el.reserve(m);
  for (std::size_t i = 0; i < m; ++i)
    out.bl.push_back(ranked(m, i, [&](std::size_t row, std::size_t j) { return d(row, j); }));
  for (std::size_t j = 0; j < m; ++j)
    out.el.push_back(ranked(m, j, [&](std::size_t col, std::size_t i) { return d(i, col); }));
  return out;
}

MatchResult becma(const DistortionMatrix& d, Driver driver) {
  d.validate();
  const std::size_t m = d.size();
  MatchResult result;
  if (driver == Driver::bl) {
    auto [assigned, proposals] =
        deferred_acceptance(m, [&](std::size_t p, std::size_t r) { return d(p, r); });
    result.matching.partner = std::move(assigned);
    result.proposals = proposals;
  } else {
    auto [assigned, proposals] =
        deferred_acceptance(m, [&](std::size_t p, std::size_t r) { return d(r, p); });
    // assigned[el] = bl; invert to BL -> EL
    result.matching.partner.assign(m, kUnmatched);
    for (std::size_t j = 0; j < m; ++j) result.matching.partner[assigned[j]] = j;
    result.proposals = proposals;
  }
  return result;
}

Matching exhaustive_match(const DistortionMatrix& d, std::size_t cap) {
  d.validate();
  const std::size_t m = d.size();
  if (m > cap) {
    std::ostringstream msg;
    msg << "exhaustive matching refused: M = " << m << " exceeds the cap of " << cap
        << " (M! permutations)";
    throw RefusalError(msg.str());
  }
  std::vector<std::size_t> perm(m);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Matching best{perm};
  double best_total = std::numeric_limits<double>::infinity();
  do {
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i) total += d(i, perm[i]);
    if (total < best_total) {
      best_total = total;
      best.partner = perm;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

Matching random_match(std::size_t m, std::uint64_t seed) {
  if (m == 0) throw InputError("random matching needs at least one pair");
  Matching out;
  out.partner.resize(m);
  std::iota(out.partner.begin(), out.partner.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  for (std::size_t k = m - 1; k > 0; --k) {
    std::uniform_int_distribution<std::size_t> pick(0, k);
    std::swap(out.partner[k], out.partner[pick(rng)]);
  }
  return out;
}

bool is_stable(const Matching& pi, const DistortionMatrix& d) {
  const std::size_t m = d.size();
  if (pi.size() != m || !pi.is_bijection()) throw InputError("matching is not a permutation of the chunk indices");
  const auto inv = pi.inverse();
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (d(i, j) < d(i, pi.partner[i]) && d(i, j) < d(inv[j], j)) return false;
  return true;
}

double total_distortion(const Matching& pi, const DistortionMatrix& d) {
  if (pi.size() != d.size()) throw InputError("matching size does not match the distortion matrix");
  double total = 0.0;
  for (std::size_t i = 0; i < pi.size(); ++i) total += d(i, pi.partner[i]);
  return total;
}

DistortionMatrix build_distortion_matrix(std::span<const double> lambdas_bl,
                                         std::span<const double> lambdas_el,
                                         std::span<const PairBudget> budgets,
                                         const LinkParams& link) {
  const std::size_t m = lambdas_bl.size();
  if (lambdas_el.size() != m || budgets.size() != m)
    throw InputError("BL variances, EL variances and budgets must have equal length");
  DistortionMatrix d(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double p = budgets[i].p_bl + budgets[j].p_el;
      const ScalingPair g = reallocate_pair(lambdas_bl[i], lambdas_el[j], p, link);
      d(i, j) = pair_distortion(lambdas_bl[i], lambdas_el[j], g.g_bl, g.g_el, link);
    }
  }
  return d;
}

}  // namespace supcast
