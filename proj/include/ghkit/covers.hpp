#pragma once

#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ghkit/correspondence.hpp"
#include "ghkit/metric_space.hpp"

namespace ghkit {

enum class Strictness { Strict, NonStrict };

std::string_view strictness_name(Strictness s) noexcept;

/// A labeled list of nonempty subsets of one ambient space.
///
/// Distinctness of members is checked by `validate`, not on construction:
/// pushforward images of distinct members may coincide.
class SubsetFamily {
 public:
  SubsetFamily(std::string label, std::vector<SubsetRef> members)
      : label_(std::move(label)), members_(std::move(members)) {}

  const std::string& label() const noexcept { return label_; }
  const std::vector<SubsetRef>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }

  bool has_distinct_members() const;
  // Index range and distinctness; throws IndexOutOfRange / InvalidFamily.
  void validate(std::size_t n) const;

  friend bool operator==(const SubsetFamily&, const SubsetFamily&) = default;

 private:
  std::string label_;
  std::vector<SubsetRef> members_;
};

struct GapReport {
  double gap = std::numeric_limits<double>::infinity();  // +inf when fewer than two members
  std::optional<std::pair<std::size_t, std::size_t>> pair;  // witnessing member indices
};

/// Minimal set distance between distinct members; ties go to the smallest
/// (first, second) member pair.
template <MetricLike M>
GapReport family_min_gap(const M& space, const SubsetFamily& fam) {
  GapReport out;
  const auto& m = fam.members();
  for (std::size_t a = 0; a < m.size(); ++a) {
    for (std::size_t b = a + 1; b < m.size(); ++b) {
      const double g = set_distance(space, m[a], m[b]);
      if (g < out.gap) out = {g, std::pair{a, b}};
    }
  }
  return out;
}

// Planar version: member pairs are visited in order of bounding-box distance
// and skipped once that lower bound exceeds the best gap found.
GapReport family_min_gap(const EuclideanPointSet& space, const SubsetFamily& fam);

inline bool gap_passes(double gap, double r, Strictness s, double tol = kDefaultTolerance) {
  return s == Strictness::Strict ? gap > r + tol : gap >= r - tol;
}

struct DisjointnessReport {
  bool ok = false;
  GapReport min_gap;
};

template <MetricLike M>
DisjointnessReport check_r_disjoint(const M& space, const SubsetFamily& fam, double r, Strictness s,
                                    double tol = kDefaultTolerance) {
  if (!(r > 0.0)) throw GeometryError(Errc::InvalidArgument, "r must be positive", {}, r);
  fam.validate(space.size());
  GapReport g = family_min_gap(space, fam);
  return {gap_passes(g.gap, r, s, tol), g};
}

/// Largest member diameter (0 for an empty family).
template <MetricLike M>
double check_uniform_bound(const M& space, const SubsetFamily& fam) {
  double worst = 0.0;
  for (const auto& u : fam.members()) worst = std::max(worst, diam(space, u));
  return worst;
}

struct CoverReport {
  bool covered = false;
  std::vector<std::size_t> uncovered;
};

CoverReport check_cover(std::size_t ambient_size, const std::vector<SubsetFamily>& families,
                        const SubsetRef& target);

template <MetricLike M>
CoverReport check_cover(const M& space, const std::vector<SubsetFamily>& families, const SubsetRef& target) {
  return check_cover(space.size(), families, target);
}

std::size_t multiplicity(std::size_t ambient_size, const std::vector<SubsetFamily>& families,
                         const SubsetRef& target);

template <MetricLike M>
std::size_t multiplicity(const M& space, const std::vector<SubsetFamily>& families, const SubsetRef& target) {
  return multiplicity(space.size(), families, target);
}

/// Families that were checked to be r-disjoint, uniformly bounded by C, and
/// to cover `target`.
struct CoverCertificate {
  std::vector<SubsetFamily> families;
  double r = 0.0;
  double C = 0.0;  // measured max member diameter
  SubsetRef target;
  Strictness strictness = Strictness::NonStrict;
  std::vector<GapReport> gaps;  // per family
  std::size_t multiplicity = 0;

  std::size_t k() const noexcept { return families.size(); }
  double min_gap() const noexcept {
    double g = std::numeric_limits<double>::infinity();
    for (const auto& r : gaps) g = std::min(g, r.gap);
    return g;
  }
};

template <MetricLike M>
CoverCertificate make_certificate(const M& space, std::vector<SubsetFamily> families, double r,
                                  Strictness s, const SubsetRef& target,
                                  double tol = kDefaultTolerance) {
  if (families.empty()) throw GeometryError(Errc::EmptyFamilyList, "no families given");
  target.validate(space.size());
  std::vector<GapReport> gaps;
  double c = 0.0;
  for (std::size_t f = 0; f < families.size(); ++f) {
    const auto rep = check_r_disjoint(space, families[f], r, s, tol);
    if (!rep.ok) {
      std::vector<std::size_t> w{f};
      if (rep.min_gap.pair) {
        w.push_back(rep.min_gap.pair->first);
        w.push_back(rep.min_gap.pair->second);
      }
      throw GeometryError(Errc::NotDisjoint,
                          "family '" + families[f].label() + "' has gap " +
                              fmt17(rep.min_gap.gap) + " at level r = " + fmt17(r) +
                              " (" + std::string(strictness_name(s)) + ")",
                          std::move(w), rep.min_gap.gap);
    }
    gaps.push_back(rep.min_gap);
    c = std::max(c, check_uniform_bound(space, families[f]));
  }
  auto cover = check_cover(space, families, target);
  if (!cover.covered) {
    throw GeometryError(Errc::NotCovering,
                        std::to_string(cover.uncovered.size()) + " target points are not covered",
                        std::move(cover.uncovered));
  }
  const std::size_t mult = multiplicity(space, families, target);
  return CoverCertificate{std::move(families), r, c, target, s, std::move(gaps), mult};
}

/// Axiomatic facts about an (infinite) model space X.
struct ModelSpaceDescriptor {
  std::string name;
  unsigned asdim_lower = 0;  // asdim X ≥ this
  bool stabilizer_nontrivial = false;
  std::string provenance;
};

const std::vector<ModelSpaceDescriptor>& model_registry();

// Registry name, or "R<n>" for Euclidean n-space. Throws UnknownModel.
ModelSpaceDescriptor lookup_model(std::string_view name);

struct LowerBound {
  double bound = 0.0;
  std::string model;
  std::vector<std::string> trace;
};

/// d_GH(A, X) ≥ r/2 for a certified A when 1 ≤ k ≤ asdim X and St X is
/// nontrivial. Throws TooManyFamilies / TrivialStabilizer otherwise.
LowerBound gh_lower_bound(const CoverCertificate& cert, const ModelSpaceDescriptor& model);

struct PushforwardReport {
  SubsetFamily images;
  double max_source_diam = 0.0;
  double max_image_diam = 0.0;
  GapReport source_gap;
  GapReport image_gap;
};

template <MetricLike MX, MetricLike MY>
PushforwardReport pushforward_family(const MX& x, const MY& y, const Correspondence& rel,
                                     const SubsetFamily& fam) {
  if (rel.x_size() != x.size() || rel.y_size() != y.size())
    throw GeometryError(Errc::NotACorrespondence, "correspondence does not match the space sizes");
  fam.validate(x.size());
  std::vector<SubsetRef> images;
  images.reserve(fam.size());
  for (const auto& u : fam.members()) images.push_back(pushforward(rel.relation(), u));
  SubsetFamily out(fam.label(), std::move(images));
  PushforwardReport rep{out, check_uniform_bound(x, fam), check_uniform_bound(y, out),
                        family_min_gap(x, fam), family_min_gap(y, out)};
  return rep;
}

struct ScaledCover {
  EuclideanPointSet points;
  std::vector<SubsetFamily> families;
};

/// Multiplies coordinates by lambda; families carry over by index.
ScaledCover scale_family(const EuclideanPointSet& pts, std::vector<SubsetFamily> fams, double lambda);

}  // namespace ghkit
