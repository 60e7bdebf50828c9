#include "ghkit/constructions.hpp"

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <tuple>

namespace ghkit {

void WindowSpec::validate() const {
  for (double v : {xmin, xmax, ymin, ymax})
    if (!std::isfinite(v)) throw GeometryError(Errc::InvalidWindow, "window bound is not finite");
  if (xmax < xmin || ymax < ymin) throw GeometryError(Errc::InvalidWindow, "window bounds are reversed");
}

namespace {

// 1/step when step is the reciprocal of a positive integer.
std::optional<long long> reciprocal_integer(double step) {
  const double inv = 1.0 / step;
  const double m = std::round(inv);
  if (m >= 1.0 && m < 1e9 && std::abs(inv - m) <= 1e-9 * m) return static_cast<long long>(m);
  return std::nullopt;
}

/// Coordinates origin + i·step, computed as (origin·m + i)/m when step = 1/m
/// and origin·m is an integer. Grids built from the same step then share
/// bit-identical coordinates with each other and with integer lattices.
class GridAxis {
 public:
  GridAxis(double origin, double step) : origin_(origin), step_(step) {
    if (auto m = reciprocal_integer(step)) {
      const double scaled = origin * static_cast<double>(*m);
      if (std::abs(scaled - std::round(scaled)) <= 1e-9) {
        m_ = static_cast<double>(*m);
        base_ = std::round(scaled);
      }
    }
  }
  double operator()(long long i) const {
    if (m_ > 0.0) return (base_ + static_cast<double>(i)) / m_;
    return origin_ + static_cast<double>(i) * step_;
  }

 private:
  double origin_, step_;
  double m_ = 0.0;  // 1/step when the grid is rational, else 0
  double base_ = 0.0;
};

std::size_t steps_to_cover(double width, double step) {
  if (width <= 0.0) return 0;
  return static_cast<std::size_t>(std::ceil(width / step - 1e-9));
}

long long floor_mod(long long a, long long m) { return ((a % m) + m) % m; }

bool is_integer(double v) { return std::abs(v - std::round(v)) <= 1e-9; }

std::vector<SubsetFamily> families_from_keys(
    const std::map<std::tuple<long long, long long, long long>, std::vector<std::size_t>>& pieces,
    const std::map<std::tuple<long long, long long, long long>, long long>& color, std::size_t ncolors,
    const std::vector<std::string>& labels) {
  std::vector<std::vector<SubsetRef>> members(ncolors);
  for (const auto& [key, idx] : pieces) members[static_cast<std::size_t>(color.at(key))].emplace_back(idx);
  std::vector<SubsetFamily> out;
  for (std::size_t c = 0; c < ncolors; ++c) out.emplace_back(labels[c], std::move(members[c]));
  return out;
}

}  // namespace

EuclideanPointSet gen_lattice_window(const WindowSpec& w) {
  w.validate();
  const auto x0 = static_cast<long long>(std::ceil(w.xmin));
  const auto x1 = static_cast<long long>(std::floor(w.xmax));
  const auto y0 = static_cast<long long>(std::ceil(w.ymin));
  const auto y1 = static_cast<long long>(std::floor(w.ymax));
  if (x1 < x0 || y1 < y0) throw GeometryError(Errc::EmptyWindow, "window contains no lattice point");
  std::vector<Point2> pts;
  std::vector<std::string> labels;
  for (long long y = y0; y <= y1; ++y) {
    for (long long x = x0; x <= x1; ++x) {
      pts.push_back({static_cast<double>(x), static_cast<double>(y)});
      labels.push_back("(" + std::to_string(x) + "," + std::to_string(y) + ")");
    }
  }
  return EuclideanPointSet(std::move(pts), std::move(labels));
}

EuclideanPointSet gen_epsilon_net(const WindowSpec& w, double eps, std::size_t cap) {
  w.validate();
  if (!(eps > 0.0) || !std::isfinite(eps)) throw GeometryError(Errc::InvalidArgument, "eps must be positive", {}, eps);
  const std::size_t sx = steps_to_cover(w.xmax - w.xmin, eps);
  const std::size_t sy = steps_to_cover(w.ymax - w.ymin, eps);
  const double total = static_cast<double>(sx + 1) * static_cast<double>(sy + 1);
  if (total > static_cast<double>(cap))
    throw GeometryError(Errc::TooManyPoints, "net would have " + std::to_string(static_cast<long long>(total)) +
                                                 " points (cap " + std::to_string(cap) + ")");
  const GridAxis gx(w.xmin, eps), gy(w.ymin, eps);
  std::vector<Point2> pts;
  pts.reserve(static_cast<std::size_t>(total));
  for (std::size_t j = 0; j <= sy; ++j)
    for (std::size_t i = 0; i <= sx; ++i)
      pts.push_back({gx(static_cast<long long>(i)), gy(static_cast<long long>(j))});
  return EuclideanPointSet(std::move(pts));
}

std::vector<SubsetFamily> gen_chess_families(const EuclideanPointSet& lattice) {
  std::vector<SubsetRef> red, blue;
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const auto& p = lattice.point(i);
    if (p.x != std::round(p.x) || p.y != std::round(p.y))
      throw GeometryError(Errc::NonIntegerPoint, "chess colouring needs integer points", {i});
    const auto parity = floor_mod(static_cast<long long>(p.x) + static_cast<long long>(p.y), 2);
    (parity == 0 ? red : blue).push_back(SubsetRef{i});
  }
  std::vector<SubsetFamily> out;
  out.emplace_back("red", std::move(red));
  out.emplace_back("blue", std::move(blue));
  return out;
}

EuclideanPointSet gen_comb_set(const WindowSpec& w, double delta, std::size_t cap) {
  w.validate();
  if (!(delta > 0.0)) throw GeometryError(Errc::InvalidArgument, "delta must be positive", {}, delta);
  const auto m = reciprocal_integer(delta);
  if (!m) throw GeometryError(Errc::DeltaNotDividingOne, "1/delta must be an integer", {}, delta);
  const double md = static_cast<double>(*m);
  const auto k0 = static_cast<long long>(std::ceil(w.xmin * md - 1e-9));
  const auto k1 = static_cast<long long>(std::floor(w.xmax * md + 1e-9));
  const auto l0 = static_cast<long long>(std::ceil(w.ymin * md - 1e-9));
  const auto l1 = static_cast<long long>(std::floor(w.ymax * md + 1e-9));
  const auto n0 = static_cast<long long>(std::ceil(w.xmin - 1e-9));
  const auto n1 = static_cast<long long>(std::floor(w.xmax + 1e-9));
  const bool has_axis = l0 <= 0 && 0 <= l1;

  const double expected = (has_axis ? static_cast<double>(k1 - k0 + 1) : 0.0) +
                          static_cast<double>(std::max(0LL, n1 - n0 + 1)) * static_cast<double>(l1 - l0 + 1);
  if (expected > static_cast<double>(cap))
    throw GeometryError(Errc::TooManyPoints, "comb sample exceeds the point cap");

  std::vector<Point2> pts;
  std::vector<std::string> labels;
  if (has_axis) {
    for (long long k = k0; k <= k1; ++k) {
      pts.push_back({static_cast<double>(k) / md, 0.0});
      labels.emplace_back("axis");
    }
  }
  for (long long n = n0; n <= n1; ++n) {
    for (long long l = l0; l <= l1; ++l) {
      if (l == 0 && has_axis) continue;  // crossing already on the axis
      pts.push_back({static_cast<double>(n), static_cast<double>(l) / md});
      labels.push_back("x=" + std::to_string(n));
    }
  }
  if (pts.empty()) throw GeometryError(Errc::EmptyWindow, "window contains no point of the comb");
  return EuclideanPointSet(std::move(pts), std::move(labels));
}

std::vector<SubsetFamily> gen_comb_cover(const EuclideanPointSet& comb, double h) {
  if (!(h >= std::sqrt(3.0) - 1e-12))
    throw GeometryError(Errc::HTooSmall, "piece height must be at least sqrt(3)", {}, h);
  using Key = std::tuple<long long, long long, long long>;  // (n, k, side); k = -1 for P_n
  std::map<Key, std::vector<std::size_t>> pieces;
  std::map<Key, long long> color;
  for (std::size_t i = 0; i < comb.size(); ++i) {
    const auto& p = comb.point(i);
    Key key;
    long long c = 0;
    if (p.y == 0.0) {
      const auto n = static_cast<long long>(std::floor(p.x + 0.5));
      key = {n, -1, 0};
      c = floor_mod(n, 2);
    } else if (is_integer(p.x)) {
      const auto n = static_cast<long long>(std::round(p.x));
      const double a = std::abs(p.y);
      if (a <= 0.5 * h + 1e-9) {
        key = {n, -1, 0};
        c = floor_mod(n, 2);
      } else {
        const auto k = static_cast<long long>(std::ceil((a - 0.5 * h) / h - 1e-9)) - 1;
        key = {n, k, p.y > 0 ? 1 : -1};
        c = floor_mod(n + k + 1, 2);
      }
    } else {
      throw GeometryError(Errc::InvalidArgument, "point is not on the comb", {i});
    }
    pieces[key].push_back(i);
    color[key] = c;
  }
  return families_from_keys(pieces, color, 2, {"red", "blue"});
}

std::vector<SubsetFamily> gen_brick_cover(const EuclideanPointSet& net, double r, double L) {
  if (!(r > 0.0)) throw GeometryError(Errc::InvalidArgument, "r must be positive", {}, r);
  if (!(L >= 2.0 * r)) throw GeometryError(Errc::LTooSmall, "brick size must be at least 2r", {}, L);
  using Key = std::tuple<long long, long long, long long>;
  std::map<Key, std::vector<std::size_t>> pieces;
  std::map<Key, long long> color;
  for (std::size_t idx = 0; idx < net.size(); ++idx) {
    const auto& p = net.point(idx);
    const auto j = static_cast<long long>(std::floor(p.y / L));
    const auto i = static_cast<long long>(std::floor((p.x - static_cast<double>(j) * 0.5 * L) / L));
    const Key key{j, i, 0};
    pieces[key].push_back(idx);
    color[key] = floor_mod(i - j, 3);
  }
  return families_from_keys(pieces, color, 3, {"brick0", "brick1", "brick2"});
}

GeneratedCover gen_brick_cover(const WindowSpec& w, double r) { return gen_brick_cover(w, r, 3.0 * r, 0.25 * r); }

GeneratedCover gen_brick_cover(const WindowSpec& w, double r, double L, double spacing) {
  auto fams = std::vector<SubsetFamily>{};
  auto net = gen_epsilon_net(w, spacing);
  fams = gen_brick_cover(net, r, L);
  return {std::move(net), std::move(fams), r, L * std::sqrt(2.0)};
}

std::vector<SubsetFamily> gen_interval_cover(const EuclideanPointSet& net, double r, double L) {
  if (!(r > 0.0)) throw GeometryError(Errc::InvalidArgument, "r must be positive", {}, r);
  if (!(L >= 2.0 * r)) throw GeometryError(Errc::LTooSmall, "interval length must be at least 2r", {}, L);
  using Key = std::tuple<long long, long long, long long>;
  std::map<Key, std::vector<std::size_t>> pieces;
  std::map<Key, long long> color;
  for (std::size_t idx = 0; idx < net.size(); ++idx) {
    const auto k = static_cast<long long>(std::floor(net.point(idx).x / L));
    const Key key{k, 0, 0};
    pieces[key].push_back(idx);
    color[key] = floor_mod(k, 2);
  }
  return families_from_keys(pieces, color, 2, {"even", "odd"});
}

GeneratedCover gen_interval_cover(double xmin, double xmax, double r) {
  return gen_interval_cover(xmin, xmax, r, 3.0 * r, 0.25 * r);
}

GeneratedCover gen_interval_cover(double xmin, double xmax, double r, double L, double spacing) {
  auto net = gen_epsilon_net(WindowSpec{xmin, xmax, 0.0, 0.0}, spacing);
  auto fams = gen_interval_cover(net, r, L);
  return {std::move(net), std::move(fams), r, L};
}

std::vector<std::size_t> points_in_window(const EuclideanPointSet& pts, const WindowSpec& w, double tol) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (w.contains(pts.point(i), tol)) out.push_back(i);
  return out;
}

MergedPoints merge_point_sets(const EuclideanPointSet& a, const EuclideanPointSet& b) {
  std::map<std::pair<double, double>, std::size_t> seen;
  std::vector<Point2> pts;
  std::vector<std::string> labels;
  const bool with_labels = !a.labels().empty() || !b.labels().empty();
  auto add = [&](const EuclideanPointSet& s, std::vector<std::size_t>& where) {
    for (std::size_t i = 0; i < s.size(); ++i) {
      const auto& p = s.point(i);
      auto [it, fresh] = seen.try_emplace({p.x, p.y}, pts.size());
      if (fresh) {
        pts.push_back(p);
        if (with_labels) labels.push_back(s.labels().empty() ? std::string() : s.labels()[i]);
      }
      where.push_back(it->second);
    }
  };
  std::vector<std::size_t> ia, ib;
  add(a, ia);
  add(b, ib);
  return {EuclideanPointSet(std::move(pts), std::move(labels)), std::move(ia), std::move(ib)};
}

}  // namespace ghkit
