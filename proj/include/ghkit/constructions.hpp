#pragma once

#include <cstddef>
#include <vector>

#include "ghkit/covers.hpp"
#include "ghkit/metric_space.hpp"

namespace ghkit {

/// Closed axis-aligned rectangle [xmin, xmax] × [ymin, ymax]. Degenerate
/// (zero-width) sides are allowed; reversed ones are not.
struct WindowSpec {
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;

  void validate() const;
  bool contains(const Point2& p, double tol = 0.0) const {
    return p.x >= xmin - tol && p.x <= xmax + tol && p.y >= ymin - tol && p.y <= ymax + tol;
  }
  WindowSpec shrunk(double margin) const { return {xmin + margin, xmax - margin, ymin + margin, ymax - margin}; }
};

/// Point set plus the families built over it.
struct GeneratedCover {
  EuclideanPointSet points;
  std::vector<SubsetFamily> families;
  double advertised_r = 0.0;
  double advertised_c = 0.0;
};

inline constexpr std::size_t kDefaultPointCap = 1'000'000;

/// Integer points of the closed window, row by row (y outer, x inner).
EuclideanPointSet gen_lattice_window(const WindowSpec& w);

/// Grid of spacing eps anchored at (xmin, ymin) reaching at least (xmax, ymax).
EuclideanPointSet gen_epsilon_net(const WindowSpec& w, double eps, std::size_t cap = kDefaultPointCap);

/// Red = singletons with x + y even, blue = x + y odd.
std::vector<SubsetFamily> gen_chess_families(const EuclideanPointSet& lattice);

/// delta-spaced samples of the x-axis and of every integer vertical line
/// inside the window; crossings appear once.
EuclideanPointSet gen_comb_set(const WindowSpec& w, double delta, std::size_t cap = kDefaultPointCap);

/// Two-colour cover of a comb sample by bounded pieces.
///
/// Crossing piece P_n: the segment {n} × [-h/2, h/2] plus the axis bar
/// [n - 1/2, n + 1/2) × {0}, coloured n mod 2. Above and below it the line
/// x = n is cut into segments of length h, S_{n,k} covering
/// h/2 + k·h < |y| ≤ h/2 + (k+1)·h, coloured (n + k + 1) mod 2. Same-colour
/// pieces stay at distance ≥ 1 as long as h ≥ √3, and no piece is wider
/// than h.
std::vector<SubsetFamily> gen_comb_cover(const EuclideanPointSet& comb, double h = 2.0);

/// Brick-wall tiling: brick (i, j) spans x ∈ [iL + jL/2, (i+1)L + jL/2),
/// y ∈ [jL, (j+1)L), coloured (i - j) mod 3. Same-colour bricks are ≥ L/2
/// apart; each has diameter ≤ L√2.
std::vector<SubsetFamily> gen_brick_cover(const EuclideanPointSet& net, double r, double L);
GeneratedCover gen_brick_cover(const WindowSpec& w, double r);
GeneratedCover gen_brick_cover(const WindowSpec& w, double r, double L, double spacing);

/// Intervals [kL, (k+1)L) of the x-axis coloured k mod 2.
std::vector<SubsetFamily> gen_interval_cover(const EuclideanPointSet& net, double r, double L);
GeneratedCover gen_interval_cover(double xmin, double xmax, double r);
GeneratedCover gen_interval_cover(double xmin, double xmax, double r, double L, double spacing);

/// Indices of the points of `pts` inside `w`.
std::vector<std::size_t> points_in_window(const EuclideanPointSet& pts, const WindowSpec& w, double tol = 1e-9);

/// Union of two planar point sets with exact-coordinate deduplication.
struct MergedPoints {
  EuclideanPointSet ambient;
  std::vector<std::size_t> from_a;  // ambient index of each point of a
  std::vector<std::size_t> from_b;
};
MergedPoints merge_point_sets(const EuclideanPointSet& a, const EuclideanPointSet& b);

}  // namespace ghkit
