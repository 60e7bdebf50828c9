#include <doctest.h>

#include <random>

#include "ghkit/constructions.hpp"
#include "ghkit/correspondence.hpp"
#include "test_support.hpp"

using namespace ghkit;
using ghkit::testing::Matrix;

namespace {

Errc error_of(auto&& f) {
  try {
    f();
  } catch (const GeometryError& e) {
    return e.code();
  }
  FAIL("expected a GeometryError");
  return Errc::InvalidArgument;
}

// Random pairs, then patch every uncovered row and column.
Correspondence random_correspondence(std::size_t nx, std::size_t ny, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(2.0 / static_cast<double>(std::max(nx, ny)));
  std::vector<IndexPair> p;
  std::vector<bool> rx(nx), ry(ny);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j)
      if (coin(rng)) {
        p.emplace_back(i, j);
        rx[i] = ry[j] = true;
      }
  for (std::size_t i = 0; i < nx; ++i)
    if (!rx[i]) p.emplace_back(i, rng() % ny);
  for (std::size_t j = 0; j < ny; ++j)
    if (!ry[j]) p.emplace_back(rng() % nx, j);
  return Correspondence(Relation(p), nx, ny);
}

std::vector<std::size_t> random_subset(std::size_t n, std::mt19937_64& rng) {
  std::bernoulli_distribution coin(0.3);
  std::vector<std::size_t> s;
  for (std::size_t i = 0; i < n; ++i)
    if (coin(rng)) s.push_back(i);
  if (s.empty()) s.push_back(rng() % n);
  return s;
}

Matrix random_metric(std::size_t n, std::mt19937_64& rng) {
  return rng() % 2 ? ghkit::testing::random_integer_metric(n, 7, rng)
                   : ghkit::testing::random_planar_metric(n, 4.0, rng);
}

}  // namespace

TEST_CASE("is_correspondence") {
  CHECK(is_correspondence(Correspondence::full_product(3, 2).relation(), 3, 2));
  CHECK(is_correspondence(Relation{{0, 2}, {1, 0}, {2, 1}}, 3, 3));
  CHECK_FALSE(is_correspondence(Relation{{0, 0}}, 2, 1));
  CHECK(error_of([] { is_correspondence(Relation{{0, 5}}, 1, 1); }) == Errc::IndexOutOfRange);
  CHECK(error_of([] { Relation(std::vector<IndexPair>{}); }) == Errc::EmptyRelation);
  CHECK(error_of([] { Correspondence(Relation{{0, 0}}, 2, 1); }) == Errc::NotACorrespondence);
}

TEST_CASE("distortion") {
  const auto x = build_space({{0, 1}, {1, 0}});
  const auto y = build_space({{0, 3}, {3, 0}});
  CHECK(distortion(x, x, Correspondence::identity(2).relation()) == 0.0);
  CHECK(distortion(x, y, Relation{{0, 0}, {1, 1}}) == 2.0);

  const auto point = build_space({{0}});
  const auto tri = build_space({{0, 2, 3}, {2, 0, 4}, {3, 4, 0}});
  CHECK(distortion(point, tri, Correspondence::full_product(1, 3).relation()) == 4.0);
}

TEST_CASE("distortion is at least the diameter gap") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t nx = 1 + rng() % 8, ny = 1 + rng() % 8;
    const auto x = build_space(random_metric(nx, rng)), y = build_space(random_metric(ny, rng));
    const auto r = random_correspondence(nx, ny, rng);
    const double gap = std::abs(diam(x, SubsetRef::all(nx)) - diam(y, SubsetRef::all(ny)));
    CHECK(distortion(x, y, r.relation()) >= gap - 1e-12);
  }
}

TEST_CASE("pushforward") {
  CHECK(pushforward(Correspondence::identity(4).relation(), SubsetRef{1, 3}) == SubsetRef{1, 3});
  CHECK(pushforward(Correspondence::full_product(2, 3).relation(), SubsetRef{1}) == SubsetRef{0, 1, 2});
  CHECK(pushforward(Relation{{0, 1}, {0, 2}, {1, 0}}, SubsetRef{0}) == SubsetRef{1, 2});
  CHECK(error_of([] { pushforward(Relation{{0, 1}}, SubsetRef{1}); }) == Errc::EmptyImage);
}

TEST_CASE("pushforward inequalities hold on random instances") {
  std::mt19937_64 rng(23);
  int violations = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t nx = 2 + rng() % 29, ny = 2 + rng() % 29;
    const auto x = build_space(random_metric(nx, rng)), y = build_space(random_metric(ny, rng));
    const auto r = random_correspondence(nx, ny, rng);
    const double dis = distortion(x, y, r.relation());
    const SubsetRef u(random_subset(nx, rng)), v(random_subset(nx, rng));
    const auto ru = pushforward(r.relation(), u), rv = pushforward(r.relation(), v);
    if (diam(y, ru) > diam(x, u) + dis + 1e-9) ++violations;
    if (set_distance(y, ru, rv) < set_distance(x, u, v) - dis - 1e-9) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("enumerate_correspondences counts") {
  auto count = [](std::size_t nx, std::size_t ny) {
    std::uint64_t c = 0;
    enumerate_correspondences(nx, ny, [&](const Correspondence&) { ++c; });
    return c;
  };
  CHECK(count(1, 1) == 1);
  CHECK(count(1, 5) == 1);
  CHECK(count(2, 2) == 7);
  CHECK(ghkit::testing::correspondence_count(2, 2) == 7);
  for (unsigned nx = 1; nx <= 4; ++nx)
    for (unsigned ny = 1; ny <= 4; ++ny) CHECK(count(nx, ny) == ghkit::testing::correspondence_count(nx, ny));
  CHECK(error_of([&] { count(5, 6); }) == Errc::SizeCapExceeded);
}

TEST_CASE("enumeration order is increasing bitmask") {
  std::vector<std::uint32_t> masks;
  for_each_correspondence_mask(2, 3, [&](std::uint32_t m) { masks.push_back(m); });
  CHECK(std::is_sorted(masks.begin(), masks.end()));
  CHECK(relation_from_mask(masks.front(), 2, 3).size() == 3);
}

TEST_CASE("exact_gh forced cases") {
  std::mt19937_64 rng(29);
  const auto point = build_space({{0}});
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 8;
    const auto y = build_space(random_metric(n, rng));
    CHECK(exact_gh(y, y).value == 0.0);
    CHECK(exact_gh(point, y).value == diam(y, SubsetRef::all(n)) / 2.0);
    CHECK(exact_gh(y, point).value == diam(y, SubsetRef::all(n)) / 2.0);
  }
  for (double a : {1.0, 2.5, 7.0})
    for (double b : {1.0, 3.0, 4.25}) {
      const auto res = exact_gh(build_space({{0, a}, {a, 0}}), build_space({{0, b}, {b, 0}}));
      CHECK(res.value == std::abs(a - b) / 2.0);
    }
}

TEST_CASE("exact_gh matches the brute-force oracle, optimum and witness") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t nx = 1 + rng() % 4, ny = 1 + rng() % 4;
    const Matrix mx = random_metric(nx, rng), my = random_metric(ny, rng);
    const auto res = exact_gh(build_space(mx), build_space(my));
    const auto brute = ghkit::testing::brute_force_gh(mx, my);
    REQUIRE(res.is_optimal);
    CHECK(res.value == brute.min_dis / 2.0);
    CHECK(res.optimal.pairs() == brute.lexmin);
    CHECK(std::abs(distortion(build_space(mx), build_space(my), res.optimal.relation()) - 2 * res.value) <= 1e-12);
  }
}

TEST_CASE("exact_gh is symmetric and respects the scaling bound") {
  std::mt19937_64 rng(37);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t nx = 1 + rng() % 7, ny = 1 + rng() % 7;
    const auto x = build_space(random_metric(nx, rng)), y = build_space(random_metric(ny, rng));
    CHECK(exact_gh(x, y).value == exact_gh(y, x).value);
    for (double lambda : {1.0, 1.5, 3.0})
      CHECK(exact_gh(x, scale(x, lambda)).value <= (lambda - 1.0) / 2.0 * diam(x, SubsetRef::all(nx)) + 1e-12);
  }
}

TEST_CASE("exact_gh within a budget") {
  std::mt19937_64 rng(41);
  const auto x = build_space(ghkit::testing::random_planar_metric(8, 5.0, rng));
  const auto y = build_space(ghkit::testing::random_planar_metric(8, 5.0, rng));
  const auto full = exact_gh(x, y);
  CHECK(full.is_optimal);
  CHECK(full.nodes_explored > 0);
  const auto cut = exact_gh(x, y, 3);
  CHECK_FALSE(cut.is_optimal);
  CHECK(cut.value >= full.value);
  CHECK(is_correspondence(cut.optimal.relation(), 8, 8));
  CHECK(cut.value == distortion(x, y, cut.optimal.relation()) / 2.0);
}

TEST_CASE("upper bounds from explicit correspondences") {
  const auto x = build_space({{0, 1, 1}, {1, 0, 1}, {1, 1, 0}});
  CHECK(gh_upper_bound_from_correspondence(x, x, Correspondence::identity(3)) == 0.0);
  const auto y = build_space({{0, 0.5}, {0.5, 0}});
  CHECK(gh_upper_bound_from_correspondence(x, y, Correspondence::full_product(3, 2)) == 0.5);
  CHECK(error_of([&] { gh_upper_bound_from_correspondence(x, y, Correspondence::identity(2)); }) ==
        Errc::NotACorrespondence);

  std::mt19937_64 rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t nx = 1 + rng() % 6, ny = 1 + rng() % 6;
    const auto a = build_space(random_metric(nx, rng)), b = build_space(random_metric(ny, rng));
    CHECK(exact_gh(a, b).value <= gh_upper_bound_from_correspondence(a, b, random_correspondence(nx, ny, rng)));
  }
}

TEST_CASE("nearest-point correspondence from a lattice window to a fine net") {
  const WindowSpec w{0, 6, 0, 6};
  const auto lattice = gen_lattice_window(w);
  const auto net = gen_epsilon_net(w, 0.25);
  const auto r = nearest_point_correspondence(lattice, net);
  CHECK(is_correspondence(r.relation(), lattice.size(), net.size()));
  // Every net point sits within sqrt(2)/2 of its lattice partner.
  for (const auto& [i, j] : r.pairs())
    CHECK(euclidean_distance(lattice.point(i), net.point(j)) <= std::sqrt(2.0) / 2.0 + 1e-12);
  CHECK(gh_upper_bound_from_correspondence(lattice, net, r) <= std::sqrt(2.0) / 2.0 + 1e-12);
}
