#include "ghkit/covers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <tuple>

namespace ghkit {

std::string_view strictness_name(Strictness s) noexcept {
  return s == Strictness::Strict ? "strict" : "nonstrict";
}

bool SubsetFamily::has_distinct_members() const {
  std::set<std::vector<std::size_t>> seen;
  for (const auto& m : members_)
    if (!seen.insert(m.indices()).second) return false;
  return true;
}

void SubsetFamily::validate(std::size_t n) const {
  for (const auto& m : members_) m.validate(n);
  if (!has_distinct_members())
    throw GeometryError(Errc::InvalidFamily, "family '" + label_ + "' lists the same member twice");
}

namespace {

struct Box {
  double x0, y0, x1, y1;
};

Box bounding_box(const EuclideanPointSet& s, const SubsetRef& u) {
  Box b{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
        -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (std::size_t i : u) {
    const auto& p = s.point(i);
    b.x0 = std::min(b.x0, p.x);
    b.y0 = std::min(b.y0, p.y);
    b.x1 = std::max(b.x1, p.x);
    b.y1 = std::max(b.y1, p.y);
  }
  return b;
}

double box_gap(const Box& a, const Box& b) {
  const double dx = std::max({0.0, b.x0 - a.x1, a.x0 - b.x1});
  const double dy = std::max({0.0, b.y0 - a.y1, a.y0 - b.y1});
  return std::sqrt(dx * dx + dy * dy);
}

double planar_set_distance(const EuclideanPointSet& s, const SubsetRef& a, const SubsetRef& b) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i : a) {
    const Point2 p = s.point(i);
    for (std::size_t j : b) best = std::min(best, squared_distance(p, s.point(j)));
    if (best == 0.0) break;
  }
  return std::sqrt(best);
}

}  // namespace

GapReport family_min_gap(const EuclideanPointSet& space, const SubsetFamily& fam) {
  const auto& m = fam.members();
  for (const auto& u : m) u.validate(space.size());
  std::vector<Box> boxes;
  boxes.reserve(m.size());
  for (const auto& u : m) boxes.push_back(bounding_box(space, u));

  struct Candidate {
    double lower;
    std::size_t a, b;
  };
  std::vector<Candidate> cand;
  cand.reserve(m.size() * (m.size() > 0 ? m.size() - 1 : 0) / 2);
  for (std::size_t a = 0; a < m.size(); ++a)
    for (std::size_t b = a + 1; b < m.size(); ++b) cand.push_back({box_gap(boxes[a], boxes[b]), a, b});
  std::sort(cand.begin(), cand.end(), [](const Candidate& l, const Candidate& r) {
    return std::tie(l.lower, l.a, l.b) < std::tie(r.lower, r.a, r.b);
  });

  GapReport out;
  for (const auto& c : cand) {
    // The box bound is itself rounded, so allow one ulp-scale slack.
    if (c.lower > out.gap * (1.0 + 1e-12)) break;
    const double g = planar_set_distance(space, m[c.a], m[c.b]);
    const auto p = std::pair{c.a, c.b};
    if (g < out.gap || (g == out.gap && out.pair && p < *out.pair)) out = {g, p};
  }
  return out;
}

CoverReport check_cover(std::size_t ambient_size, const std::vector<SubsetFamily>& families,
                        const SubsetRef& target) {
  target.validate(ambient_size);
  std::vector<char> hit(ambient_size, 0);
  for (const auto& f : families) {
    for (const auto& u : f.members()) {
      u.validate(ambient_size);
      for (std::size_t i : u) hit[i] = 1;
    }
  }
  CoverReport rep;
  for (std::size_t i : target)
    if (!hit[i]) rep.uncovered.push_back(i);
  rep.covered = rep.uncovered.empty();
  return rep;
}

std::size_t multiplicity(std::size_t ambient_size, const std::vector<SubsetFamily>& families,
                         const SubsetRef& target) {
  target.validate(ambient_size);
  std::vector<std::size_t> count(ambient_size, 0);
  for (const auto& f : families) {
    for (const auto& u : f.members()) {
      u.validate(ambient_size);
      for (std::size_t i : u) ++count[i];
    }
  }
  std::size_t worst = 0;
  for (std::size_t i : target) worst = std::max(worst, count[i]);
  return worst;
}

const std::vector<ModelSpaceDescriptor>& model_registry() {
  static const std::vector<ModelSpaceDescriptor> registry = [] {
    std::vector<ModelSpaceDescriptor> r;
    for (unsigned n = 1; n <= 3; ++n) r.push_back(lookup_model("R" + std::to_string(n)));
    r.push_back({"Z2", 2, false,
                 "asdim Z^2 = 2 (Z^2 is a net in R^2); the minimal distance of lambda*Z^2 is "
                 "lambda, so lambda*Z^2 is isometric to Z^2 only for lambda = 1"});
    return r;
  }();
  return registry;
}

ModelSpaceDescriptor lookup_model(std::string_view name) {
  if (name.size() >= 2 && name.front() == 'R' &&
      std::all_of(name.begin() + 1, name.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    const unsigned long n = std::stoul(std::string(name.substr(1)));
    if (n >= 1 && n <= 1000) {
      const std::string nn = std::to_string(n);
      return {std::string(name), static_cast<unsigned>(n), true,
              "asdim R^" + nn + " = " + nn +
                  " (also for any " + nn + "-dimensional normed space, by norm equivalence); "
                  "x -> lambda*x maps lambda*R^" + nn + " isometrically onto R^" + nn +
                  ", so St R^" + nn + " is all of (0, inf)"};
    }
  }
  for (const auto& m : model_registry())
    if (m.name == name) return m;
  throw GeometryError(Errc::UnknownModel, "no model space named '" + std::string(name) + "'");
}

LowerBound gh_lower_bound(const CoverCertificate& cert, const ModelSpaceDescriptor& model) {
  const std::size_t k = cert.k();
  const std::size_t n = model.asdim_lower;
  LowerBound out;
  out.model = model.name;
  auto& t = out.trace;
  t.push_back("model X = " + model.name + ": asdim X >= " + std::to_string(n) +
              ", St X nontrivial = " + (model.stabilizer_nontrivial ? "true" : "false") + " [" +
              model.provenance + "]");
  if (k < 1 || k > n) {
    t.push_back("gate failed: need 1 <= k <= n, have k = " + std::to_string(k) + ", n = " + std::to_string(n));
    throw GeometryError(Errc::TooManyFamilies,
                        "k = " + std::to_string(k) + " families exceed asdim bound n = " +
                            std::to_string(n) + " of " + model.name,
                        {k, n});
  }
  t.push_back("gate: 1 <= k = " + std::to_string(k) + " <= n = " + std::to_string(n));
  if (!model.stabilizer_nontrivial) {
    throw GeometryError(Errc::TrivialStabilizer,
                        "St " + model.name + " = {e}; no lambda > 1 rescales the model onto itself");
  }
  t.push_back("gate: St X != {e}, so some lambda > 1 has lambda*X isometric to X");
  for (std::size_t f = 0; f < k; ++f) {
    const auto& g = cert.gaps[f];
    t.push_back("family " + std::to_string(f) + " '" + cert.families[f].label() + "': " +
                std::to_string(cert.families[f].size()) + " members, min gap " +
                (std::isfinite(g.gap) ? fmt17(g.gap) : std::string("inf")) + " checked " +
                std::string(strictness_name(cert.strictness)) + " against r = " + fmt17(cert.r));
  }
  t.push_back("uniform bound: every member has diam <= C = " + fmt17(cert.C));
  t.push_back("cover: target of " + std::to_string(cert.target.size()) +
              " points lies in the union of the families (multiplicity " +
              std::to_string(cert.multiplicity) + ")");
  if (cert.strictness == Strictness::NonStrict) {
    t.push_back("non-strict gaps: the families are r'-disjoint in the strict sense for every r' < r, "
                "so the bound r'/2 holds for all such r' and its supremum is r/2");
  }
  out.bound = 0.5 * cert.r;
  t.push_back("conclusion: d_GH(A, " + model.name + ") >= r/2 = " + fmt17(out.bound) +
              " (A = the certified space; the bound refers to the infinite model space)");
  return out;
}

ScaledCover scale_family(const EuclideanPointSet& pts, std::vector<SubsetFamily> fams, double lambda) {
  for (const auto& f : fams)
    for (const auto& u : f.members()) u.validate(pts.size());
  return {scale(pts, lambda), std::move(fams)};
}

}  // namespace ghkit
