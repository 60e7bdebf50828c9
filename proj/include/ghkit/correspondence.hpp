#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "ghkit/metric_space.hpp"

namespace ghkit {

using IndexPair = std::pair<std::size_t, std::size_t>;

/// Nonempty set of (x, y) index pairs, kept sorted and duplicate-free.
class Relation {
 public:
  explicit Relation(std::vector<IndexPair> pairs);
  Relation(std::initializer_list<IndexPair> pairs) : Relation(std::vector<IndexPair>(pairs)) {}

  const std::vector<IndexPair>& pairs() const noexcept { return pairs_; }
  std::size_t size() const noexcept { return pairs_.size(); }

  // Throws IndexOutOfRange for a pair outside nx × ny.
  void validate(std::size_t nx, std::size_t ny) const;

  friend bool operator==(const Relation&, const Relation&) = default;
  friend auto operator<=>(const Relation&, const Relation&) = default;

 private:
  std::vector<IndexPair> pairs_;
};

bool is_correspondence(const Relation& rel, std::size_t nx, std::size_t ny);

/// A relation whose projections onto both factors are surjective.
class Correspondence {
 public:
  Correspondence(Relation rel, std::size_t nx, std::size_t ny);

  const Relation& relation() const noexcept { return rel_; }
  const std::vector<IndexPair>& pairs() const noexcept { return rel_.pairs(); }
  std::size_t x_size() const noexcept { return nx_; }
  std::size_t y_size() const noexcept { return ny_; }

  static Correspondence identity(std::size_t n);
  static Correspondence full_product(std::size_t nx, std::size_t ny);

  friend bool operator==(const Correspondence&, const Correspondence&) = default;

 private:
  Relation rel_;
  std::size_t nx_;
  std::size_t ny_;
};

/// sup of | |xx'| - |yy'| | over ordered pairs of related pairs.
template <MetricLike MX, MetricLike MY>
double distortion(const MX& x, const MY& y, const Relation& rel) {
  rel.validate(x.size(), y.size());
  const auto& p = rel.pairs();
  double worst = 0.0;
  for (std::size_t a = 0; a < p.size(); ++a) {
    for (std::size_t b = a + 1; b < p.size(); ++b) {
      const double dx = x.distance(p[a].first, p[b].first);
      const double dy = y.distance(p[a].second, p[b].second);
      worst = std::max(worst, std::abs(dx - dy));
    }
  }
  return worst;
}

/// R(U) = { j : (i, j) in R, i in U }.
SubsetRef pushforward(const Relation& rel, const SubsetRef& u);

/// Calls `visit` with the bitmask of every correspondence between an
/// nx-point and an ny-point set, in increasing numeric order. Bit i·ny + j
/// stands for the pair (i, j). Requires nx·ny ≤ 25.
void for_each_correspondence_mask(std::size_t nx, std::size_t ny,
                                  const std::function<void(std::uint32_t)>& visit);

Relation relation_from_mask(std::uint32_t mask, std::size_t nx, std::size_t ny);

void enumerate_correspondences(std::size_t nx, std::size_t ny,
                               const std::function<void(const Correspondence&)>& visit);

struct GhResult {
  double value = 0.0;  // d_GH
  Correspondence optimal;
  std::uint64_t nodes_explored = 0;
  bool is_optimal = true;
};

inline constexpr std::uint64_t kDefaultNodeBudget = 50'000'000;

/// Exact Gromov–Hausdorff distance of two finite spaces as half the minimal
/// distortion over all correspondences.
///
/// The optimum is one of the discrepancies |d_X(i,i') - d_Y(j,j')|, so the
/// solver binary-searches that sorted set, deciding "is there a
/// correspondence of distortion ≤ t" by a clique search over compatible
/// cells with forward checking. The returned correspondence is the
/// lexicographically smallest optimal one (pairs compared as sorted lists).
/// When the node budget runs out the best correspondence found so far is
/// returned with `is_optimal == false`.
GhResult exact_gh(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                  std::uint64_t budget = kDefaultNodeBudget);

template <MetricLike MX, MetricLike MY>
double gh_upper_bound_from_correspondence(const MX& x, const MY& y, const Correspondence& rel) {
  if (rel.x_size() != x.size() || rel.y_size() != y.size())
    throw GeometryError(Errc::NotACorrespondence, "correspondence does not match the space sizes");
  return 0.5 * distortion(x, y, rel.relation());
}

/// Pairs every y with its nearest x, then every still-unmatched x with its
/// nearest y. Both sets live in the same plane.
Correspondence nearest_point_correspondence(const EuclideanPointSet& x, const EuclideanPointSet& y);

}  // namespace ghkit
