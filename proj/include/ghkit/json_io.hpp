#pragma once

#include <filesystem>
#include <optional>
#include <variant>

#include <json.hpp>

#include "ghkit/constructions.hpp"
#include "ghkit/correspondence.hpp"
#include "ghkit/covers.hpp"
#include "ghkit/metric_space.hpp"

namespace ghkit::io {

using json = nlohmann::json;
using AnySpace = std::variant<FiniteMetricSpace, EuclideanPointSet>;

std::size_t space_size(const AnySpace& s);

// {"kind":"matrix","n":N,"d":[[...]]} or {"kind":"points2d","pts":[[x,y],...],"labels":[...]}
json space_to_json(const FiniteMetricSpace& s);
json space_to_json(const EuclideanPointSet& s);
json space_to_json(const AnySpace& s);
AnySpace space_from_json(const json& j);
FiniteMetricSpace as_matrix_space(const AnySpace& s);

json subset_to_json(const SubsetRef& s);
SubsetRef subset_from_json(const json& j);

// {"pairs":[[i,j],...]}
json relation_to_json(const Relation& r);
Relation relation_from_json(const json& j);

// {"label":"red","members":[[i,...],...]}
json family_to_json(const SubsetFamily& f);
SubsetFamily family_from_json(const json& j);

/// A space with families over it: the on-disk form of a cover.
///
/// {"space":{...}, "families":[...], "target":[...], "r":..., "C":...,
///  "strictness":"nonstrict"}; target defaults to the whole space.
struct CoverBundle {
  AnySpace space;
  std::vector<SubsetFamily> families;
  std::optional<SubsetRef> target;
  std::optional<double> r;
  std::optional<double> C;
  Strictness strictness = Strictness::NonStrict;

  SubsetRef target_or_all() const;
};

json bundle_to_json(const CoverBundle& b);
CoverBundle bundle_from_json(const json& j);

// {"dgh":v,"dis":2v,"optimal_pairs":[...],"nodes":k,"optimal":bool}
json gh_result_to_json(const GhResult& r);

// {k, r, C, strictness, min_gap, multiplicity, model, bound, trace}
json certificate_to_json(const CoverCertificate& c, const LowerBound* bound = nullptr);

json model_to_json(const ModelSpaceDescriptor& m);
ModelSpaceDescriptor model_from_json(const json& j);

// +inf is written as the string "inf".
json number(double v);

json read_json_file(const std::filesystem::path& p);
void write_json_file(const std::filesystem::path& p, const json& j);

}  // namespace ghkit::io
