#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "supcast/power.hpp"

namespace supcast {

/// Square matrix of pair distortions: entry (i, j) is the distortion of
/// superposing BL chunk i with EL chunk j under the two-stage power rule.
class DistortionMatrix {
 public:
  DistortionMatrix() = default;
  explicit DistortionMatrix(std::size_t m, double fill = 0.0) : m_(m), d_(m * m, fill) {}
  /// Throws InputError unless `rows` is square.
  explicit DistortionMatrix(const std::vector<std::vector<double>>& rows);

  std::size_t size() const { return m_; }
  double& operator()(std::size_t i, std::size_t j) { return d_[i * m_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return d_[i * m_ + j]; }

  /// Throws InputError on NaN, infinite or negative entries.
  void validate() const;

 private:
  std::size_t m_ = 0;
  std::vector<double> d_;
};

/// One-to-one assignment: partner[i] is the EL chunk carried with BL chunk i.
struct Matching {
  std::vector<std::size_t> partner;

  std::size_t size() const { return partner.size(); }
  /// Inverse map: for each EL chunk, its BL partner.
  std::vector<std::size_t> inverse() const;
  /// True when partner is a permutation of 0..size()-1.
  bool is_bijection() const;
  friend bool operator==(const Matching&, const Matching&) = default;
};

struct PreferenceLists {
  std::vector<std::vector<std::size_t>> bl;  // bl[i]: EL indices, most preferred first
  std::vector<std::vector<std::size_t>> el;  // el[j]: BL indices, most preferred first
};

/// Each side ranks the other by ascending pair distortion, ties by index.
PreferenceLists build_preferences(const DistortionMatrix& d);

enum class Driver { bl, el };

struct MatchResult {
  Matching matching;
  std::size_t proposals = 0;
};

/// BL-EL chunk matching by deferred acceptance. The proposing side (BL for
/// Driver::bl) walks its preference list; a held receiver switches partner
/// only when the proposer forms a blocking pair with it. Free proposers are
/// served in ascending index order.
MatchResult becma(const DistortionMatrix& d, Driver driver);

inline constexpr std::size_t kDefaultExhaustiveCap = 9;

/// Minimum-total assignment by enumerating all M! permutations in
/// lexicographic order (first minimum wins). Throws RefusalError above `cap`.
Matching exhaustive_match(const DistortionMatrix& d, std::size_t cap = kDefaultExhaustiveCap);

/// Uniformly random permutation, deterministic per seed.
Matching random_match(std::size_t m, std::uint64_t seed);

/// True when no pair (i, j) has d(i,j) below both d(i, pi(i)) and
/// d(pi^-1(j), j).
bool is_stable(const Matching& pi, const DistortionMatrix& d);

double total_distortion(const Matching& pi, const DistortionMatrix& d);

/// Pairwise distortions for every hypothetical (BL i, EL j) pair: the pair
/// budget is budgets[i].p_bl + budgets[j].p_el, re-split by reallocate_pair.
DistortionMatrix build_distortion_matrix(std::span<const double> lambdas_bl,
                                         std::span<const double> lambdas_el,
                                         std::span<const PairBudget> budgets,
                                         const LinkParams& link);

}  // namespace supcast
