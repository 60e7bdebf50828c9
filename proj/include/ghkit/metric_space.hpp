#pragma once

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ghkit/errors.hpp"

namespace ghkit {

inline constexpr double kDefaultTolerance = 1e-9;

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

inline double squared_distance(const Point2& a, const Point2& b) noexcept {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy;
}

// Every Euclidean distance in the library goes through this expression, so
// values computed along different code paths agree bit for bit.
inline double euclidean_distance(const Point2& a, const Point2& b) noexcept {
  return std::sqrt(squared_distance(a, b));
}

/// A finite metric space stored as a dense row-major distance matrix.
///
/// Instances are only produced by validated factories (`build_space`,
/// `induce_space`, `scale`), so the metric axioms hold for every value of
/// this type.
class FiniteMetricSpace {
 public:
  std::size_t size() const noexcept { return n_; }
  double distance(std::size_t i, std::size_t j) const noexcept { return d_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const noexcept {
    return {d_.data() + i * n_, n_};
  }
  std::vector<std::vector<double>> matrix() const;

  friend bool operator==(const FiniteMetricSpace&, const FiniteMetricSpace&) = default;

  // Wraps a matrix whose axioms already hold by construction.
  static FiniteMetricSpace from_trusted(std::size_t n, std::vector<double> row_major);

 private:
  FiniteMetricSpace(std::size_t n, std::vector<double> d) : n_(n), d_(std::move(d)) {}

  std::size_t n_ = 0;
  std::vector<double> d_;
};

/// Labeled points of the Euclidean plane; no two points coincide.
class EuclideanPointSet {
 public:
  explicit EuclideanPointSet(std::vector<Point2> points, std::vector<std::string> labels = {});

  std::size_t size() const noexcept { return points_.size(); }
  const Point2& point(std::size_t i) const noexcept { return points_[i]; }
  const std::vector<Point2>& points() const noexcept { return points_; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  double distance(std::size_t i, std::size_t j) const noexcept {
    return euclidean_distance(points_[i], points_[j]);
  }

  friend bool operator==(const EuclideanPointSet&, const EuclideanPointSet&) = default;

 private:
  std::vector<Point2> points_;
  std::vector<std::string> labels_;
};

/// Nonempty, sorted, duplicate-free list of indices into some ambient space.
class SubsetRef {
 public:
  explicit SubsetRef(std::vector<std::size_t> indices);
  SubsetRef(std::initializer_list<std::size_t> indices)
      : SubsetRef(std::vector<std::size_t>(indices)) {}

  static SubsetRef all(std::size_t n);

  const std::vector<std::size_t>& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }
  bool contains(std::size_t i) const noexcept {
    return std::binary_search(indices_.begin(), indices_.end(), i);
  }
  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }

  // Throws IndexOutOfRange when an index does not fit an ambient of size n.
  void validate(std::size_t n) const;

  friend bool operator==(const SubsetRef&, const SubsetRef&) = default;
  friend auto operator<=>(const SubsetRef&, const SubsetRef&) = default;

 private:
  std::vector<std::size_t> indices_;
};

template <class M>
concept MetricLike = requires(const M& m, std::size_t i) {
  { m.size() } -> std::convertible_to<std::size_t>;
  { m.distance(i, i) } -> std::convertible_to<double>;
};

FiniteMetricSpace build_space(const std::vector<std::vector<double>>& matrix,
                              double tolerance = kDefaultTolerance);

FiniteMetricSpace induce_space(const EuclideanPointSet& pts);

FiniteMetricSpace scale(const FiniteMetricSpace& space, double lambda);
EuclideanPointSet scale(const EuclideanPointSet& pts, double lambda);

template <MetricLike M>
double diam(const M& space, const SubsetRef& s) {
  s.validate(space.size());
  double best = 0.0;
  const auto& idx = s.indices();
  for (std::size_t a = 0; a < idx.size(); ++a) {
    for (std::size_t b = a + 1; b < idx.size(); ++b) {
      best = std::max(best, static_cast<double>(space.distance(idx[a], idx[b])));
    }
  }
  return best;
}

template <MetricLike M>
double set_distance(const M& space, const SubsetRef& a, const SubsetRef& b) {
  a.validate(space.size());
  b.validate(space.size());
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i : a) {
    for (std::size_t j : b) {
      best = std::min(best, static_cast<double>(space.distance(i, j)));
      if (best == 0.0) return 0.0;
    }
  }
  return best;
}

/// Open r-neighborhood: every point at distance strictly less than r from a.
template <MetricLike M>
SubsetRef neighborhood(const M& space, const SubsetRef& a, double r) {
  a.validate(space.size());
  if (!(r > 0.0)) throw GeometryError(Errc::InvalidArgument, "neighborhood radius must be positive");
  std::vector<std::size_t> out;
  for (std::size_t p = 0; p < space.size(); ++p) {
    for (std::size_t q : a) {
      if (space.distance(p, q) < r) {
        out.push_back(p);
        break;
      }
    }
  }
  return SubsetRef(std::move(out));
}

/// max over x in a of min over y in b; early exit once a row cannot raise the max.
template <MetricLike M>
double directed_hausdorff(const M& space, const SubsetRef& a, const SubsetRef& b) {
  a.validate(space.size());
  b.validate(space.size());
  double cmax = 0.0;
  for (std::size_t x : a) {
    double cmin = std::numeric_limits<double>::infinity();
    bool dominated = false;
    for (std::size_t y : b) {
      const double d = space.distance(x, y);
      if (d < cmax) {
        dominated = true;
        break;
      }
      cmin = std::min(cmin, d);
    }
    if (!dominated) cmax = std::max(cmax, cmin);
  }
  return cmax;
}

// Grid-accelerated exact version for planar point sets.
double directed_hausdorff(const EuclideanPointSet& space, const SubsetRef& a, const SubsetRef& b);

template <MetricLike M>
double hausdorff(const M& space, const SubsetRef& a, const SubsetRef& b) {
  return std::max(directed_hausdorff(space, a, b), directed_hausdorff(space, b, a));
}

struct IsometryResult {
  bool isometric = false;
  // witness[i] = image in y of point i of x, when isometric.
  std::vector<std::size_t> witness;
};

/// Backtracking isometry test with sorted-row pruning. The witness is the
/// lexicographically smallest matching bijection.
IsometryResult is_isometric(const FiniteMetricSpace& x, const FiniteMetricSpace& y,
                            double tolerance = kDefaultTolerance);

/// Nearest-neighbour queries over a subset of a planar point set. Ties are
/// resolved towards the smallest ambient index.
class NearestIndex {
 public:
  NearestIndex(const EuclideanPointSet& pts, const SubsetRef& subset);

  struct Hit {
    std::size_t index;
    double squared_distance;
  };
  Hit nearest(const Point2& q) const;

 private:
  const EuclideanPointSet* pts_;
  double x0_ = 0.0, y0_ = 0.0, cell_ = 1.0;
  std::size_t nx_ = 1, ny_ = 1;
  std::vector<std::size_t> cell_start_;
  std::vector<std::size_t> cell_items_;
};

}  // namespace ghkit
