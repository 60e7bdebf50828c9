#include "ghkit/correspondence.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace ghkit {

Relation::Relation(std::vector<IndexPair> pairs) : pairs_(std::move(pairs)) {
  if (pairs_.empty()) throw GeometryError(Errc::EmptyRelation, "relation has no pairs");
  std::sort(pairs_.begin(), pairs_.end());
  pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
}

void Relation::validate(std::size_t nx, std::size_t ny) const {
  for (const auto& [i, j] : pairs_) {
    if (i >= nx || j >= ny) {
      throw GeometryError(Errc::IndexOutOfRange,
                          "pair (" + std::to_string(i) + "," + std::to_string(j) + ") outside " +
                              std::to_string(nx) + "x" + std::to_string(ny),
                          {i, j});
    }
  }
}

bool is_correspondence(const Relation& rel, std::size_t nx, std::size_t ny) {
  rel.validate(nx, ny);
  std::vector<char> hit_x(nx, 0), hit_y(ny, 0);
  for (const auto& [i, j] : rel.pairs()) {
    hit_x[i] = 1;
    hit_y[j] = 1;
  }
  return std::all_of(hit_x.begin(), hit_x.end(), [](char c) { return c != 0; }) &&
         std::all_of(hit_y.begin(), hit_y.end(), [](char c) { return c != 0; });
}

Correspondence::Correspondence(Relation rel, std::size_t nx, std::size_t ny)
    : rel_(std::move(rel)), nx_(nx), ny_(ny) {
  if (!is_correspondence(rel_, nx_, ny_))
    throw GeometryError(Errc::NotACorrespondence, "a projection of the relation is not surjective");
}

Correspondence Correspondence::identity(std::size_t n) {
  std::vector<IndexPair> p;
  for (std::size_t i = 0; i < n; ++i) p.emplace_back(i, i);
  return {Relation(std::move(p)), n, n};
}

Correspondence Correspondence::full_product(std::size_t nx, std::size_t ny) {
  std::vector<IndexPair> p;
  p.reserve(nx * ny);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) p.emplace_back(i, j);
  return {Relation(std::move(p)), nx, ny};
}

SubsetRef pushforward(const Relation& rel, const SubsetRef& u) {
  const auto& p = rel.pairs();
  std::vector<std::size_t> image;
  for (std::size_t i : u) {
    auto it = std::lower_bound(p.begin(), p.end(), IndexPair{i, 0});
    for (; it != p.end() && it->first == i; ++it) image.push_back(it->second);
  }
  if (image.empty()) throw GeometryError(Errc::EmptyImage, "subset meets no pair of the relation");
  return SubsetRef(std::move(image));
}

void for_each_correspondence_mask(std::size_t nx, std::size_t ny,
                                  const std::function<void(std::uint32_t)>& visit) {
  if (nx == 0 || ny == 0) throw GeometryError(Errc::InvalidArgument, "spaces must be nonempty");
  if (nx * ny > 25)
    throw GeometryError(Errc::SizeCapExceeded, "enumeration requires nx*ny <= 25", {nx, ny});
  const std::size_t cells = nx * ny;
  std::vector<std::uint32_t> row(nx, 0), col(ny, 0);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      row[i] |= std::uint32_t{1} << (i * ny + j);
      col[j] |= std::uint32_t{1} << (i * ny + j);
    }
  const std::uint64_t end = std::uint64_t{1} << cells;
  for (std::uint64_t m = 1; m < end; ++m) {
    const auto mask = static_cast<std::uint32_t>(m);
    bool ok = true;
    for (std::size_t i = 0; i < nx && ok; ++i) ok = (mask & row[i]) != 0;
    for (std::size_t j = 0; j < ny && ok; ++j) ok = (mask & col[j]) != 0;
    if (ok) visit(mask);
  }
}

Relation relation_from_mask(std::uint32_t mask, std::size_t nx, std::size_t ny) {
  std::vector<IndexPair> p;
  for (std::size_t c = 0; c < nx * ny; ++c)
    if (mask & (std::uint32_t{1} << c)) p.emplace_back(c / ny, c % ny);
  return Relation(std::move(p));
}

void enumerate_correspondences(std::size_t nx, std::size_t ny,
                               const std::function<void(const Correspondence&)>& visit) {
  for_each_correspondence_mask(nx, ny, [&](std::uint32_t mask) {
    visit(Correspondence(relation_from_mask(mask, nx, ny), nx, ny));
  });
}

// ---------------------------------------------------------------------------
// Exact solver

namespace {

class CellSet {
 public:
  explicit CellSet(std::size_t bits = 0) : words_((bits + 63) / 64, 0) {}

  void set(std::size_t c) { words_[c / 64] |= std::uint64_t{1} << (c % 64); }
  bool test(std::size_t c) const { return (words_[c / 64] >> (c % 64)) & 1U; }

  CellSet& operator&=(const CellSet& o) {
    for (std::size_t w = 0; w < words_.size(); ++w) words_[w] &= o.words_[w];
    return *this;
  }
  std::size_t count_and(const CellSet& o) const {
    std::size_t n = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) n += std::popcount(words_[w] & o.words_[w]);
    return n;
  }
  template <class F>
  void for_each_and(const CellSet& o, F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t bits = words_[w] & o.words_[w];
      while (bits) {
        f(w * 64 + static_cast<std::size_t>(std::countr_zero(bits)));
        bits &= bits - 1;
      }
    }
  }

 private:
  std::vector<std::uint64_t> words_;
};

struct BudgetHit {};

class GhSolver {
 public:
  GhSolver(const FiniteMetricSpace& x, const FiniteMetricSpace& y, std::uint64_t budget)
      : x_(x), y_(y), nx_(x.size()), ny_(y.size()), cells_(nx_ * ny_), budget_(budget) {
    for (std::size_t i = 0; i < nx_; ++i) lines_.emplace_back(cells_);
    for (std::size_t j = 0; j < ny_; ++j) lines_.emplace_back(cells_);
    for (std::size_t c = 0; c < cells_; ++c) {
      lines_[row_of(c)].set(c);
      lines_[nx_ + col_of(c)].set(c);
    }
  }

  double discrepancy(std::size_t c, std::size_t d) const {
    return std::abs(x_.distance(row_of(c), row_of(d)) - y_.distance(col_of(c), col_of(d)));
  }

  std::vector<double> thresholds() const {
    std::vector<double> t;
    t.reserve(cells_ * cells_ / 2 + 1);
    for (std::size_t c = 0; c < cells_; ++c)
      for (std::size_t d = c; d < cells_; ++d) t.push_back(discrepancy(c, d));
    std::sort(t.begin(), t.end());
    t.erase(std::unique(t.begin(), t.end()), t.end());
    return t;
  }

  void set_threshold(double t) {
    compat_.assign(cells_, CellSet(cells_));
    for (std::size_t c = 0; c < cells_; ++c)
      for (std::size_t d = 0; d < cells_; ++d)
        if (discrepancy(c, d) <= t) compat_[c].set(d);
  }

  // Is there a pairwise-compatible cell set containing `forced`, drawing its
  // other cells from `allowed`, that meets every row and column?
  bool feasible(const std::vector<std::size_t>& forced, const CellSet& allowed,
                std::vector<std::size_t>* witness) {
    CellSet live = allowed;
    std::vector<char> covered(nx_ + ny_, 0);
    for (std::size_t a = 0; a < forced.size(); ++a) {
      for (std::size_t b = a + 1; b < forced.size(); ++b)
        if (!compat_[forced[a]].test(forced[b])) return false;
      live &= compat_[forced[a]];
      covered[row_of(forced[a])] = 1;
      covered[nx_ + col_of(forced[a])] = 1;
    }
    std::vector<std::size_t> chosen = forced;
    if (!search(live, covered, chosen)) return false;
    if (witness) *witness = std::move(chosen);
    return true;
  }

  std::uint64_t nodes() const { return nodes_; }
  std::size_t row_of(std::size_t c) const { return c / ny_; }
  std::size_t col_of(std::size_t c) const { return c % ny_; }
  std::size_t cells() const { return cells_; }
  bool covers_all(const std::vector<std::size_t>& cells) const {
    std::vector<char> covered(nx_ + ny_, 0);
    for (std::size_t c : cells) covered[row_of(c)] = covered[nx_ + col_of(c)] = 1;
    return std::all_of(covered.begin(), covered.end(), [](char v) { return v != 0; });
  }
  const CellSet& compat(std::size_t c) const { return compat_[c]; }

 private:
  bool search(const CellSet& live, std::vector<char>& covered, std::vector<std::size_t>& chosen) {
    if (++nodes_ > budget_) throw BudgetHit{};
    // Most constrained uncovered line first.
    std::size_t best_line = covered.size();
    std::size_t best_count = cells_ + 1;
    for (std::size_t l = 0; l < covered.size(); ++l) {
      if (covered[l]) continue;
      const std::size_t cnt = live.count_and(lines_[l]);
      if (cnt < best_count) {
        best_count = cnt;
        best_line = l;
        if (cnt == 0) return false;
      }
    }
    if (best_line == covered.size()) return true;

    std::vector<std::size_t> options;
    live.for_each_and(lines_[best_line], [&](std::size_t c) { options.push_back(c); });
    for (std::size_t c : options) {
      CellSet next = live;
      next &= compat_[c];
      const std::size_t r = row_of(c), k = nx_ + col_of(c);
      const char old_r = covered[r], old_k = covered[k];
      covered[r] = covered[k] = 1;
      chosen.push_back(c);
      if (search(next, covered, chosen)) return true;
      chosen.pop_back();
      covered[r] = old_r;
      covered[k] = old_k;
    }
    return false;
  }

  const FiniteMetricSpace& x_;
  const FiniteMetricSpace& y_;
  std::size_t nx_, ny_, cells_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<CellSet> lines_;
  std::vector<CellSet> compat_;
};

Correspondence cells_to_correspondence(const std::vector<std::size_t>& cells, std::size_t nx,
                                       std::size_t ny) {
  std::vector<IndexPair> p;
  p.reserve(cells.size());
  for (std::size_t c : cells) p.emplace_back(c / ny, c % ny);
  return {Relation(std::move(p)), nx, ny};
}

}  // namespace

GhResult exact_gh(const FiniteMetricSpace& x, const FiniteMetricSpace& y, std::uint64_t budget) {
  const std::size_t nx = x.size(), ny = y.size();
  GhSolver solver(x, y, budget);
  const std::vector<double> t = solver.thresholds();

  // Any correspondence has distortion at least |diam X - diam Y|, itself a
  // discrepancy value.
  const double dx = diam(x, SubsetRef::all(nx));
  const double dy = diam(y, SubsetRef::all(ny));
  std::size_t lo = static_cast<std::size_t>(
      std::lower_bound(t.begin(), t.end(), std::abs(dx - dy)) - t.begin());
  std::size_t hi = t.size() - 1;  // the full product is always feasible here

  std::vector<std::size_t> best_cells(solver.cells());
  for (std::size_t c = 0; c < best_cells.size(); ++c) best_cells[c] = c;
  double best_t = t[hi];

  CellSet everything(solver.cells());
  for (std::size_t c = 0; c < solver.cells(); ++c) everything.set(c);

  auto fallback = [&]() {
    return GhResult{0.5 * best_t, cells_to_correspondence(best_cells, nx, ny), solver.nodes(), false};
  };

  try {
    while (lo < hi) {
      const std::size_t mid = lo + (hi - lo) / 2;
      solver.set_threshold(t[mid]);
      std::vector<std::size_t> witness;
      if (solver.feasible({}, everything, &witness)) {
        hi = mid;
        best_t = t[mid];
        best_cells = std::move(witness);
      } else {
        lo = mid + 1;
      }
    }
    best_t = t[hi];
    solver.set_threshold(best_t);

    // Greedy lexicographic extraction: extend the prefix by the smallest
    // cell that still admits a completion using only larger cells.
    std::vector<std::size_t> prefix;
    CellSet live = everything;
    while (!solver.covers_all(prefix)) {
      const std::size_t start = prefix.empty() ? 0 : prefix.back() + 1;
      bool extended = false;
      for (std::size_t c = start; c < solver.cells() && !extended; ++c) {
        if (!live.test(c)) continue;
        CellSet allowed(solver.cells());
        for (std::size_t d = c + 1; d < solver.cells(); ++d) allowed.set(d);
        std::vector<std::size_t> forced = prefix;
        forced.push_back(c);
        if (solver.feasible(forced, allowed, nullptr)) {
          prefix = std::move(forced);
          live &= solver.compat(c);
          extended = true;
        }
      }
      if (!extended) throw GeometryError(Errc::InvalidArgument, "internal: witness extraction stalled");
    }
    best_cells = prefix;
  } catch (const BudgetHit&) {
    return fallback();
  }
  return GhResult{0.5 * best_t, cells_to_correspondence(best_cells, nx, ny), solver.nodes(), true};
}

Correspondence nearest_point_correspondence(const EuclideanPointSet& x, const EuclideanPointSet& y) {
  const NearestIndex near_x(x, SubsetRef::all(x.size()));
  const NearestIndex near_y(y, SubsetRef::all(y.size()));
  std::vector<IndexPair> p;
  p.reserve(y.size() + x.size());
  std::vector<char> matched(x.size(), 0);
  for (std::size_t j = 0; j < y.size(); ++j) {
    const std::size_t i = near_x.nearest(y.point(j)).index;
    p.emplace_back(i, j);
    matched[i] = 1;
  }
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!matched[i]) p.emplace_back(i, near_y.nearest(x.point(i)).index);
  return {Relation(std::move(p)), x.size(), y.size()};
}

}  // namespace ghkit
