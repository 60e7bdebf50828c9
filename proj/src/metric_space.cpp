#include "ghkit/metric_space.hpp"

#include <cmath>
#include <numeric>
#include <sstream>
#include <tuple>

namespace ghkit {

std::vector<std::vector<double>> FiniteMetricSpace::matrix() const {
  std::vector<std::vector<double>> out(n_, std::vector<double>(n_));
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < n_; ++j) out[i][j] = distance(i, j);
  return out;
}

FiniteMetricSpace FiniteMetricSpace::from_trusted(std::size_t n, std::vector<double> row_major) {
  return FiniteMetricSpace(n, std::move(row_major));
}

EuclideanPointSet::EuclideanPointSet(std::vector<Point2> points, std::vector<std::string> labels)
    : points_(std::move(points)), labels_(std::move(labels)) {
  if (points_.empty()) throw GeometryError(Errc::EmptySubset, "point set is empty");
  if (!labels_.empty() && labels_.size() != points_.size())
    throw GeometryError(Errc::InvalidArgument, "label count does not match point count");
  for (const auto& p : points_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw GeometryError(Errc::NonFiniteEntry, "point coordinate is not finite");
  }
  std::vector<std::size_t> order(points_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  auto key = [&](std::size_t i) { return std::tie(points_[i].x, points_[i].y); };
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return std::tuple(key(a), a) < std::tuple(key(b), b); });
  for (std::size_t k = 1; k < order.size(); ++k) {
    if (points_[order[k - 1]] == points_[order[k]]) {
      const std::size_t a = std::min(order[k - 1], order[k]);
      const std::size_t b = std::max(order[k - 1], order[k]);
      std::ostringstream msg;
      msg << "points " << a << " and " << b << " coincide at (" << points_[a].x << ", "
          << points_[a].y << ")";
      throw GeometryError(Errc::DuplicatePoint, msg.str(), {a, b});
    }
  }
}

SubsetRef::SubsetRef(std::vector<std::size_t> indices) : indices_(std::move(indices)) {
  if (indices_.empty()) throw GeometryError(Errc::EmptySubset, "subset is empty");
  std::sort(indices_.begin(), indices_.end());
  indices_.erase(std::unique(indices_.begin(), indices_.end()), indices_.end());
}

SubsetRef SubsetRef::all(std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return SubsetRef(std::move(idx));
}

void SubsetRef::validate(std::size_t n) const {
  if (indices_.back() >= n) {
    throw GeometryError(Errc::IndexOutOfRange,
                        "subset index " + std::to_string(indices_.back()) +
                            " out of range for ambient of size " + std::to_string(n),
                        {indices_.back()});
  }
}

FiniteMetricSpace build_space(const std::vector<std::vector<double>>& matrix, double tolerance) {
  const std::size_t n = matrix.size();
  if (n == 0) throw GeometryError(Errc::NotSquare, "matrix is empty");
  if (!(tolerance >= 0.0)) throw GeometryError(Errc::InvalidArgument, "tolerance must be nonnegative");
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i].size() != n)
      throw GeometryError(Errc::NotSquare, "row " + std::to_string(i) + " has wrong length", {i});
  }
  auto at = [](std::size_t i, std::size_t j) { return std::vector<std::size_t>{i, j}; };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double v = matrix[i][j];
      if (!std::isfinite(v)) throw GeometryError(Errc::NonFiniteEntry, "entry is not finite", at(i, j));
      if (v < 0.0) throw GeometryError(Errc::NegativeEntry, "entry is negative", at(i, j), v);
    }
  }
  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i][i] != 0.0)
      throw GeometryError(Errc::NonzeroDiagonal, "diagonal entry is nonzero", at(i, i), matrix[i][i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = matrix[i][j];
      const double b = matrix[j][i];
      if (std::abs(a - b) > tolerance)
        throw GeometryError(Errc::NotSymmetric, "entries differ across the diagonal", at(i, j), a - b);
      const double v = a == b ? a : 0.5 * (a + b);
      if (v == 0.0) throw GeometryError(Errc::ZeroOffDiagonal, "distinct points at distance 0", at(i, j));
      d[i * n + j] = v;
      d[j * n + i] = v;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = i + 1; k < n; ++k) {
      const double direct = d[i * n + k];
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || j == k) continue;
        const double via = d[i * n + j] + d[j * n + k];
        if (direct > via + tolerance) {
          std::ostringstream msg;
          msg << "d(" << i << "," << k << ") = " << direct << " > d(" << i << "," << j
              << ") + d(" << j << "," << k << ") = " << via;
          throw GeometryError(Errc::TriangleViolation, msg.str(), {i, j, k}, direct - via);
        }
      }
    }
  }
  return FiniteMetricSpace::from_trusted(n, std::move(d));
}

FiniteMetricSpace induce_space(const EuclideanPointSet& pts) {
  const std::size_t n = pts.size();
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      d[i * n + j] = d[j * n + i] = pts.distance(i, j);
    }
  }
  return FiniteMetricSpace::from_trusted(n, std::move(d));
}

FiniteMetricSpace scale(const FiniteMetricSpace& space, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw GeometryError(Errc::NonpositiveLambda, "scale factor must be positive", {}, lambda);
  const std::size_t n = space.size();
  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] = lambda * space.distance(i, j);
  return FiniteMetricSpace::from_trusted(n, std::move(d));
}

EuclideanPointSet scale(const EuclideanPointSet& pts, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda))
    throw GeometryError(Errc::NonpositiveLambda, "scale factor must be positive", {}, lambda);
  std::vector<Point2> out;
  out.reserve(pts.size());
  for (const auto& p : pts.points()) out.push_back({lambda * p.x, lambda * p.y});
  return EuclideanPointSet(std::move(out), pts.labels());
}

double directed_hausdorff(const EuclideanPointSet& space, const SubsetRef& a, const SubsetRef& b) {
  a.validate(space.size());
  b.validate(space.size());
  const NearestIndex index(space, b);
  double worst = 0.0;
  for (std::size_t x : a) worst = std::max(worst, index.nearest(space.point(x)).squared_distance);
  return std::sqrt(worst);
}

// ---------------------------------------------------------------------------
// NearestIndex

NearestIndex::NearestIndex(const EuclideanPointSet& pts, const SubsetRef& subset) : pts_(&pts) {
  subset.validate(pts.size());
  double x1 = -std::numeric_limits<double>::infinity();
  double y1 = x1;
  x0_ = y0_ = std::numeric_limits<double>::infinity();
  for (std::size_t i : subset) {
    const auto& p = pts.point(i);
    x0_ = std::min(x0_, p.x);
    y0_ = std::min(y0_, p.y);
    x1 = std::max(x1, p.x);
    y1 = std::max(y1, p.y);
  }
  const double w = x1 - x0_;
  const double h = y1 - y0_;
  const double area = std::max(w, 1e-300) * std::max(h, 1e-300);
  // About two items per cell on average.
  cell_ = std::sqrt(2.0 * area / static_cast<double>(subset.size()));
  cell_ = std::max(cell_, std::max(w, h) / static_cast<double>(2 * subset.size() + 1));
  if (!(cell_ > 0.0) || !std::isfinite(cell_)) cell_ = 1.0;
  nx_ = static_cast<std::size_t>(w / cell_) + 1;
  ny_ = static_cast<std::size_t>(h / cell_) + 1;

  auto cell_of = [&](const Point2& p) {
    const auto cx = std::min(nx_ - 1, static_cast<std::size_t>((p.x - x0_) / cell_));
    const auto cy = std::min(ny_ - 1, static_cast<std::size_t>((p.y - y0_) / cell_));
    return cy * nx_ + cx;
  };
  cell_start_.assign(nx_ * ny_ + 1, 0);
  for (std::size_t i : subset) ++cell_start_[cell_of(pts.point(i)) + 1];
  std::partial_sum(cell_start_.begin(), cell_start_.end(), cell_start_.begin());
  cell_items_.resize(subset.size());
  std::vector<std::size_t> fill(cell_start_.begin(), cell_start_.end() - 1);
  for (std::size_t i : subset) cell_items_[fill[cell_of(pts.point(i))]++] = i;
}

NearestIndex::Hit NearestIndex::nearest(const Point2& q) const {
  auto clamp_cell = [](double v, std::size_t n) -> std::ptrdiff_t {
    if (!(v > 0.0)) return 0;
    const double c = std::floor(v);
    return c >= static_cast<double>(n - 1) ? static_cast<std::ptrdiff_t>(n - 1)
                                           : static_cast<std::ptrdiff_t>(c);
  };
  const std::ptrdiff_t cx = clamp_cell((q.x - x0_) / cell_, nx_);
  const std::ptrdiff_t cy = clamp_cell((q.y - y0_) / cell_, ny_);
  const auto nx = static_cast<std::ptrdiff_t>(nx_);
  const auto ny = static_cast<std::ptrdiff_t>(ny_);

  Hit best{std::numeric_limits<std::size_t>::max(), std::numeric_limits<double>::infinity()};
  auto visit = [&](std::ptrdiff_t ix, std::ptrdiff_t iy) {
    if (ix < 0 || iy < 0 || ix >= nx || iy >= ny) return;
    const auto c = static_cast<std::size_t>(iy * nx + ix);
    for (std::size_t k = cell_start_[c]; k < cell_start_[c + 1]; ++k) {
      const std::size_t i = cell_items_[k];
      const double d2 = squared_distance(q, pts_->point(i));
      if (d2 < best.squared_distance || (d2 == best.squared_distance && i < best.index)) {
        best = {i, d2};
      }
    }
  };

  for (std::ptrdiff_t ring = 0;; ++ring) {
    if (ring == 0) {
      visit(cx, cy);
    } else {
      for (std::ptrdiff_t ix = cx - ring; ix <= cx + ring; ++ix) {
        visit(ix, cy - ring);
        visit(ix, cy + ring);
      }
      for (std::ptrdiff_t iy = cy - ring + 1; iy <= cy + ring - 1; ++iy) {
        visit(cx - ring, iy);
        visit(cx + ring, iy);
      }
    }
    const bool covers_all = cx - ring <= 0 && cy - ring <= 0 && cx + ring >= nx - 1 && cy + ring >= ny - 1;
    if (covers_all) break;
    // Distance from q to the outside of the visited block of cells.
    const double left = q.x - (x0_ + static_cast<double>(cx - ring) * cell_);
    const double right = (x0_ + static_cast<double>(cx + ring + 1) * cell_) - q.x;
    const double below = q.y - (y0_ + static_cast<double>(cy - ring) * cell_);
    const double above = (y0_ + static_cast<double>(cy + ring + 1) * cell_) - q.y;
    double margin = std::min({cx - ring <= 0 ? std::numeric_limits<double>::infinity() : left,
                              cx + ring >= nx - 1 ? std::numeric_limits<double>::infinity() : right,
                              cy - ring <= 0 ? std::numeric_limits<double>::infinity() : below,
                              cy + ring >= ny - 1 ? std::numeric_limits<double>::infinity() : above});
    margin -= 1e-9 * cell_;
    if (margin > 0.0 && margin * margin > best.squared_distance) break;
  }
  return best;
}

// ---------------------------------------------------------------------------
// Isometry

namespace {

struct IsometrySearch {
  const FiniteMetricSpace& x;
  const FiniteMetricSpace& y;
  double tol;
  std::vector<std::vector<char>> candidate;  // candidate[i][j]: rows compatible
  std::vector<std::size_t> image;
  std::vector<char> used;

  bool extend(std::size_t i) {
    const std::size_t n = x.size();
    if (i == n) return true;
    for (std::size_t j = 0; j < n; ++j) {
      if (used[j] || !candidate[i][j]) continue;
      bool ok = true;
      for (std::size_t k = 0; k < i && ok; ++k) {
        ok = std::abs(x.distance(i, k) - y.distance(j, image[k])) <= tol;
      }
      if (!ok) continue;
      image[i] = j;
      used[j] = 1;
      if (extend(i + 1)) return true;
      used[j] = 0;
    }
    return false;
  }
};

std::vector<double> sorted_row(const FiniteMetricSpace& s, std::size_t i) {
  auto r = s.row(i);
  std::vector<double> out(r.begin(), r.end());
  std::sort(out.begin(), out.end());
  return out;
}

bool rows_match(const std::vector<double>& a, const std::vector<double>& b, double tol) {
  for (std::size_t k = 0; k < a.size(); ++k)
    if (std::abs(a[k] - b[k]) > tol) return false;
  return true;
}

}  // namespace

IsometryResult is_isometric(const FiniteMetricSpace& x, const FiniteMetricSpace& y, double tolerance) {
  if (x.size() != y.size()) return {};
  const std::size_t n = x.size();

  // Global distance multiset must agree before any per-point work.
  std::vector<double> mx, my;
  mx.reserve(n * (n - 1) / 2);
  my.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      mx.push_back(x.distance(i, j));
      my.push_back(y.distance(i, j));
    }
  }
  std::sort(mx.begin(), mx.end());
  std::sort(my.begin(), my.end());
  if (!rows_match(mx, my, tolerance)) return {};

  std::vector<std::vector<double>> rx(n), ry(n);
  for (std::size_t i = 0; i < n; ++i) {
    rx[i] = sorted_row(x, i);
    ry[i] = sorted_row(y, i);
  }
  IsometrySearch search{x, y, tolerance, std::vector<std::vector<char>>(n, std::vector<char>(n, 0)),
                        std::vector<std::size_t>(n, 0), std::vector<char>(n, 0)};
  for (std::size_t i = 0; i < n; ++i) {
    bool any = false;
    for (std::size_t j = 0; j < n; ++j) {
      search.candidate[i][j] = rows_match(rx[i], ry[j], tolerance) ? 1 : 0;
      any = any || search.candidate[i][j];
    }
    if (!any) return {};
  }
  if (!search.extend(0)) return {};
  return {true, std::move(search.image)};
}

}  // namespace ghkit
