#include <doctest.h>

#include <random>

#include "ghkit/constructions.hpp"
#include "ghkit/covers.hpp"

using namespace ghkit;

namespace {

const double kSqrt2 = std::sqrt(2.0);

struct Chess {
  EuclideanPointSet lattice;
  std::vector<SubsetFamily> families;
};

Chess chess(double n) {
  auto lattice = gen_lattice_window({0, n, 0, n});
  auto fams = gen_chess_families(lattice);
  return {std::move(lattice), std::move(fams)};
}

GeometryError error_of(auto&& f) {
  try {
    f();
  } catch (const GeometryError& e) {
    return e;
  }
  FAIL("expected a GeometryError");
  return GeometryError(Errc::InvalidArgument, "");
}

// Direct O(members² · size²) gap, no pruning.
double naive_gap(const EuclideanPointSet& pts, const SubsetFamily& fam) {
  double g = std::numeric_limits<double>::infinity();
  const auto& m = fam.members();
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = a + 1; b < m.size(); ++b)
      for (auto i : m[a])
        for (auto j : m[b]) g = std::min(g, std::hypot(pts.point(i).x - pts.point(j).x, pts.point(i).y - pts.point(j).y));
  return g;
}

}  // namespace

TEST_CASE("check_r_disjoint on chess families") {
  const auto c = chess(10);
  const auto& red = c.families[0];
  REQUIRE(red.label() == "red");

  const auto loose = check_r_disjoint(c.lattice, red, kSqrt2, Strictness::NonStrict);
  CHECK(loose.ok);
  CHECK(loose.min_gap.gap == kSqrt2);
  const auto strict = check_r_disjoint(c.lattice, red, kSqrt2, Strictness::Strict);
  CHECK_FALSE(strict.ok);
  CHECK(strict.min_gap.gap == kSqrt2);

  const SubsetFamily single("one", {SubsetRef{0, 1, 2}});
  CHECK(check_r_disjoint(c.lattice, single, 1e6, Strictness::Strict).ok);
  CHECK(check_r_disjoint(c.lattice, single, 1e6, Strictness::Strict).min_gap.gap == std::numeric_limits<double>::infinity());

  const SubsetFamily overlapping("o", {SubsetRef{0, 1}, SubsetRef{1, 2}});
  const auto o = check_r_disjoint(c.lattice, overlapping, 0.5, Strictness::NonStrict);
  CHECK_FALSE(o.ok);
  CHECK(o.min_gap.gap == 0.0);
}

TEST_CASE("pruned planar gaps agree with the naive scan") {
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> u(0.0, 20.0);
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<Point2> pts;
    for (int i = 0; i < 150; ++i) pts.push_back({u(rng), u(rng)});
    const EuclideanPointSet set(pts);
    std::vector<std::vector<std::size_t>> buckets(3 + rng() % 10);
    for (std::size_t i = 0; i < set.size(); ++i) buckets[rng() % buckets.size()].push_back(i);
    std::vector<SubsetRef> members;
    for (auto& b : buckets)
      if (!b.empty()) members.emplace_back(b);
    const SubsetFamily fam("f", members);
    const auto fast = family_min_gap(set, fam);
    CHECK(fast.gap == doctest::Approx(naive_gap(set, fam)).epsilon(1e-15));
    CHECK(fast.gap == family_min_gap(induce_space(set), fam).gap);
  }
}

TEST_CASE("check_uniform_bound") {
  const auto c = chess(6);
  CHECK(check_uniform_bound(c.lattice, c.families[0]) == 0.0);
  CHECK(check_uniform_bound(c.lattice, c.families[1]) == 0.0);
  const auto comb = gen_comb_set({0, 6, -6, 6}, 0.05);
  for (const auto& fam : gen_comb_cover(comb)) CHECK(check_uniform_bound(comb, fam) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("check_cover and multiplicity") {
  const auto c = chess(10);
  const auto all = SubsetRef::all(c.lattice.size());
  CHECK(check_cover(c.lattice, {SubsetFamily("t", {all})}, all).covered);
  CHECK(check_cover(c.lattice, c.families, all).covered);
  CHECK(multiplicity(c.lattice, c.families, all) == 1);

  const auto red_only = check_cover(c.lattice, {c.families[0]}, all);
  CHECK_FALSE(red_only.covered);
  CHECK(red_only.uncovered.size() == 60);
  for (auto i : red_only.uncovered) CHECK(static_cast<int>(c.lattice.point(i).x + c.lattice.point(i).y) % 2 == 1);

  CHECK(multiplicity(c.lattice, {c.families[0], c.families[0], c.families[1]}, all) == 2);
}

TEST_CASE("make_certificate on the chess cover") {
  for (double n : {4.0, 12.0, 20.0}) {
    const auto c = chess(n);
    const auto cert = make_certificate(c.lattice, c.families, kSqrt2, Strictness::NonStrict,
                                       SubsetRef::all(c.lattice.size()));
    CHECK(cert.k() == 2);
    CHECK(cert.C == 0.0);
    CHECK(cert.min_gap() == kSqrt2);
    CHECK(cert.multiplicity == 1);
  }

  const auto c = chess(10);
  const auto all = SubsetRef::all(c.lattice.size());
  const auto e = error_of([&] { make_certificate(c.lattice, c.families, 2.0, Strictness::NonStrict, all); });
  CHECK(e.code() == Errc::NotDisjoint);
  CHECK(e.value() == kSqrt2);
  CHECK(e.witness().front() == 0);

  CHECK(error_of([&] { make_certificate(c.lattice, {}, 1.0, Strictness::NonStrict, all); }).code() ==
        Errc::EmptyFamilyList);
  const auto nc = error_of([&] { make_certificate(c.lattice, {c.families[1]}, 1.0, Strictness::NonStrict, all); });
  CHECK(nc.code() == Errc::NotCovering);
  CHECK(nc.witness().size() == 61);
}

TEST_CASE("make_certificate succeeds exactly when the three checks pass") {
  std::mt19937_64 rng(53);
  const auto lattice = gen_lattice_window({0, 5, 0, 5});
  const std::size_t n = lattice.size();
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<SubsetFamily> fams;
    const int k = 1 + static_cast<int>(rng() % 3);
    for (int f = 0; f < k; ++f) {
      std::vector<SubsetRef> members;
      std::vector<std::size_t> cur;
      for (std::size_t i = 0; i < n; ++i) {
        if (rng() % 3 == 0) cur.push_back(i);
        if (cur.size() >= 2 || (!cur.empty() && rng() % 4 == 0)) {
          members.emplace_back(cur);
          cur.clear();
        }
      }
      if (members.empty()) members.push_back(SubsetRef{rng() % n});
      fams.emplace_back("f" + std::to_string(f), members);
    }
    const double r = 0.5 + static_cast<double>(rng() % 4);
    const auto target = SubsetRef::all(n);
    bool valid = true;
    for (const auto& f : fams)
      valid = valid && f.has_distinct_members() && check_r_disjoint(lattice, f, r, Strictness::NonStrict).ok;
    valid = valid && check_cover(lattice, fams, target).covered;
    bool made = true;
    try {
      make_certificate(lattice, fams, r, Strictness::NonStrict, target);
    } catch (const GeometryError&) {
      made = false;
    }
    CHECK(made == valid);
  }
}

TEST_CASE("comb cover certificate") {
  const auto comb = gen_comb_set({0, 12, -6, 6}, 0.05);
  const auto fams = gen_comb_cover(comb);
  const auto cert = make_certificate(comb, fams, 1.0, Strictness::NonStrict, SubsetRef::all(comb.size()));
  CHECK(cert.k() == 2);
  CHECK(std::abs(cert.C - 2.0) <= 1e-12);
  CHECK(cert.min_gap() >= 1.0 - 1e-12);
  CHECK(cert.multiplicity == 1);
  CHECK(gh_lower_bound(cert, lookup_model("R2")).bound == 0.5);
}

TEST_CASE("comb cover binding gaps") {
  const auto comb = gen_comb_set({-1, 3, -4, 4}, 0.05);
  const auto fams = gen_comb_cover(comb);
  auto piece_at = [&](Point2 p) -> std::pair<std::size_t, std::size_t> {
    for (std::size_t f = 0; f < fams.size(); ++f)
      for (std::size_t m = 0; m < fams[f].size(); ++m)
        for (auto i : fams[f].members()[m])
          if (std::abs(comb.point(i).x - p.x) < 1e-12 && std::abs(comb.point(i).y - p.y) < 1e-12) return {f, m};
    FAIL("point not in any piece");
    return {0, 0};
  };
  const auto p0 = piece_at({0, 0.5}), p2 = piece_at({2, 0.5}), s10 = piece_at({1, 1.5});
  REQUIRE(p0.first == p2.first);
  REQUIRE(p0.first == s10.first);
  const auto& fam = fams[p0.first];
  // Axis bars are half-open, so the sampled bars sit 1 + delta apart.
  const double bars = set_distance(comb, fam.members()[p0.second], fam.members()[p2.second]);
  CHECK(bars >= 1.0);
  CHECK(bars <= 1.05 + 1e-12);
  // The vertical part of P_0 ends at (0, 1) while S_{1,0} starts just above
  // (1, 1): the binding distance is 1, not the bar-to-segment value.
  const double s = set_distance(comb, fam.members()[p0.second], fam.members()[s10.second]);
  CHECK(s >= 1.0);
  CHECK(s <= std::hypot(1.0, 0.05) + 1e-12);
  std::vector<std::size_t> bar;
  for (auto i : fam.members()[p0.second])
    if (comb.point(i).y == 0.0) bar.push_back(i);
  CHECK(set_distance(comb, SubsetRef(bar), fam.members()[s10.second]) >= std::sqrt(5.0) / 2.0);
}

TEST_CASE("model registry and lower-bound gates") {
  CHECK(lookup_model("R1").asdim_lower == 1);
  CHECK(lookup_model("R2").asdim_lower == 2);
  CHECK(lookup_model("R7").asdim_lower == 7);
  CHECK(lookup_model("R2").stabilizer_nontrivial);
  CHECK_FALSE(lookup_model("Z2").stabilizer_nontrivial);
  CHECK_FALSE(lookup_model("R2").provenance.empty());
  CHECK(error_of([] { lookup_model("S2"); }).code() == Errc::UnknownModel);

  const auto c = chess(10);
  const auto all = SubsetRef::all(c.lattice.size());
  const auto cert = make_certificate(c.lattice, c.families, kSqrt2, Strictness::NonStrict, all);
  const auto lb = gh_lower_bound(cert, lookup_model("R2"));
  CHECK(lb.bound == kSqrt2 / 2.0);
  CHECK(lb.bound == 0.7071067811865476);
  CHECK_FALSE(lb.trace.empty());

  CHECK(error_of([&] { gh_lower_bound(cert, lookup_model("R1")); }).code() == Errc::TooManyFamilies);
  CHECK(error_of([&] { gh_lower_bound(cert, lookup_model("Z2")); }).code() == Errc::TrivialStabilizer);
  auto three = cert;
  three.families.push_back(SubsetFamily("extra", {SubsetRef{0}}));
  CHECK(error_of([&] { gh_lower_bound(three, lookup_model("R2")); }).code() == Errc::TooManyFamilies);

  const auto line = gen_interval_cover(0, 30, 1.0);
  const auto lcert = make_certificate(line.points, line.families, 1.0, Strictness::NonStrict,
                                      SubsetRef::all(line.points.size()));
  CHECK(error_of([&] { gh_lower_bound(lcert, lookup_model("R1")); }).code() == Errc::TooManyFamilies);
  const auto single = make_certificate(line.points, {line.families[0]}, 1.0, Strictness::NonStrict,
                                       line.families[0].members().front());
  CHECK(gh_lower_bound(single, lookup_model("R1")).bound == 0.5);
}

TEST_CASE("pushforward_family simple cases") {
  const auto c = chess(4);
  const std::size_t n = c.lattice.size();
  const auto id = pushforward_family(c.lattice, c.lattice, Correspondence::identity(n), c.families[0]);
  CHECK(id.images == c.families[0]);
  CHECK(id.image_gap.gap == id.source_gap.gap);
  CHECK(id.max_image_diam == id.max_source_diam);

  const auto full = pushforward_family(c.lattice, c.lattice, Correspondence::full_product(n, n), c.families[0]);
  for (const auto& m : full.images.members()) CHECK(m == SubsetRef::all(n));
  CHECK(full.image_gap.gap == 0.0);
}

TEST_CASE("pushforward of a certificate along a small-distortion correspondence") {
  // A-window: chess lattice. X-window: jittered samples of the plane. R pairs
  // every lattice point with the samples near it, and every sample with its
  // nearest lattice point.
  std::mt19937_64 rng(57);
  const auto c = chess(8);
  const auto cert = make_certificate(c.lattice, c.families, kSqrt2, Strictness::NonStrict,
                                     SubsetRef::all(c.lattice.size()));
  int tried = 0;
  for (int trial = 0; tried < 100; ++trial) {
    REQUIRE(trial < 2000);
    const double jitter = std::uniform_real_distribution<double>(0.0, 0.15)(rng);
    std::uniform_real_distribution<double> u(-jitter, jitter);
    std::vector<Point2> samples;
    for (std::size_t i = 0; i < c.lattice.size(); ++i)
      for (int s = 0; s < 2; ++s) samples.push_back({c.lattice.point(i).x + u(rng), c.lattice.point(i).y + u(rng)});
    const EuclideanPointSet x(samples);
    std::vector<IndexPair> pairs;
    for (std::size_t j = 0; j < x.size(); ++j) pairs.emplace_back(j / 2, j);
    // A few samples also related to the lattice point to their right.
    for (std::size_t j = 0; j < x.size(); ++j)
      if (rng() % 10 == 0 && c.lattice.point(j / 2).x < 8) pairs.emplace_back(j / 2 + 1, j);
    const Correspondence r(Relation(pairs), c.lattice.size(), x.size());
    const double d = distortion(c.lattice, x, r.relation());
    if (d >= cert.r) continue;
    ++tried;

    std::vector<SubsetFamily> images;
    for (const auto& fam : cert.families) {
      const auto rep = pushforward_family(c.lattice, x, r, fam);
      CHECK(rep.image_gap.gap >= cert.r - d - 1e-9);
      CHECK(rep.max_image_diam <= cert.C + d + 1e-9);
      images.push_back(rep.images);
    }
    CHECK(check_cover(x, images, pushforward(r.relation(), cert.target)).covered);
  }
}

TEST_CASE("scale_family") {
  const auto c = chess(6);
  const auto same = scale_family(c.lattice, c.families, 1.0);
  CHECK(same.points == c.lattice);

  const auto doubled = scale_family(c.lattice, c.families, 2.0);
  CHECK(family_min_gap(doubled.points, doubled.families[0]).gap == 2 * kSqrt2);
  CHECK(check_uniform_bound(doubled.points, doubled.families[0]) == 0.0);

  const double l0 = 1.7;
  const auto twice = scale_family(scale_family(c.lattice, c.families, l0).points, c.families, l0);
  const auto once = scale_family(c.lattice, c.families, l0 * l0);
  CHECK(std::abs(family_min_gap(twice.points, twice.families[1]).gap -
                 family_min_gap(once.points, once.families[1]).gap) <= 1e-9);

  const auto brick = gen_brick_cover({0, 20, 0, 20}, 2.0);
  for (double lambda : {0.3, 2.0, 8.0}) {
    const auto s = scale_family(brick.points, brick.families, lambda);
    for (std::size_t f = 0; f < 3; ++f) {
      const double g0 = family_min_gap(brick.points, brick.families[f]).gap;
      CHECK(std::abs(family_min_gap(s.points, s.families[f]).gap - lambda * g0) <= 1e-9 * lambda * g0);
      const double c0 = check_uniform_bound(brick.points, brick.families[f]);
      CHECK(std::abs(check_uniform_bound(s.points, s.families[f]) - lambda * c0) <= 1e-9 * lambda * c0);
    }
  }
  CHECK(error_of([&] { scale_family(c.lattice, c.families, 0.0); }).code() == Errc::NonpositiveLambda);
}
