#include "ghkit/json_io.hpp"

#include <cmath>
#include <fstream>

namespace ghkit::io {

namespace {

[[noreturn]] void parse_fail(const std::string& what) { throw GeometryError(Errc::ParseError, what); }

template <class T>
T get_as(const json& j, const char* what) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    parse_fail(std::string(what) + ": " + e.what());
  }
}

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) parse_fail(std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

std::size_t space_size(const AnySpace& s) {
  return std::visit([](const auto& v) { return v.size(); }, s);
}

json space_to_json(const FiniteMetricSpace& s) {
  return {{"kind", "matrix"}, {"n", s.size()}, {"d", s.matrix()}};
}

json space_to_json(const EuclideanPointSet& s) {
  json pts = json::array();
  for (const auto& p : s.points()) pts.push_back({p.x, p.y});
  json out = {{"kind", "points2d"}, {"pts", std::move(pts)}};
  if (!s.labels().empty()) out["labels"] = s.labels();
  return out;
}

json space_to_json(const AnySpace& s) {
  return std::visit([](const auto& v) { return space_to_json(v); }, s);
}

AnySpace space_from_json(const json& j) {
  const auto kind = get_as<std::string>(require(j, "kind"), "space kind");
  if (kind == "matrix") {
    auto d = get_as<std::vector<std::vector<double>>>(require(j, "d"), "distance matrix");
    if (j.contains("n") && get_as<std::size_t>(j.at("n"), "n") != d.size())
      parse_fail("field 'n' does not match the matrix size");
    return build_space(d);
  }
  if (kind == "points2d") {
    auto raw = get_as<std::vector<std::vector<double>>>(require(j, "pts"), "points");
    std::vector<Point2> pts;
    pts.reserve(raw.size());
    for (const auto& p : raw) {
      if (p.size() != 2) parse_fail("each point needs exactly two coordinates");
      pts.push_back({p[0], p[1]});
    }
    std::vector<std::string> labels;
    if (j.contains("labels")) labels = get_as<std::vector<std::string>>(j.at("labels"), "labels");
    return EuclideanPointSet(std::move(pts), std::move(labels));
  }
  parse_fail("unknown space kind '" + kind + "'");
}

FiniteMetricSpace as_matrix_space(const AnySpace& s) {
  if (const auto* m = std::get_if<FiniteMetricSpace>(&s)) return *m;
  return induce_space(std::get<EuclideanPointSet>(s));
}

json subset_to_json(const SubsetRef& s) { return s.indices(); }

SubsetRef subset_from_json(const json& j) {
  return SubsetRef(get_as<std::vector<std::size_t>>(j, "subset"));
}

json relation_to_json(const Relation& r) {
  json pairs = json::array();
  for (const auto& [i, j] : r.pairs()) pairs.push_back({i, j});
  return {{"pairs", std::move(pairs)}};
}

Relation relation_from_json(const json& j) {
  auto raw = get_as<std::vector<std::vector<std::size_t>>>(require(j, "pairs"), "relation pairs");
  std::vector<IndexPair> pairs;
  for (const auto& p : raw) {
    if (p.size() != 2) parse_fail("each relation pair needs two indices");
    pairs.emplace_back(p[0], p[1]);
  }
  return Relation(std::move(pairs));
}

json family_to_json(const SubsetFamily& f) {
  json members = json::array();
  for (const auto& m : f.members()) members.push_back(subset_to_json(m));
  return {{"label", f.label()}, {"members", std::move(members)}};
}

SubsetFamily family_from_json(const json& j) {
  std::string label = j.contains("label") ? get_as<std::string>(j.at("label"), "label") : std::string();
  std::vector<SubsetRef> members;
  const auto& raw = require(j, "members");
  if (!raw.is_array()) parse_fail("'members' must be an array");
  for (const auto& m : raw) members.push_back(subset_from_json(m));
  return SubsetFamily(std::move(label), std::move(members));
}

SubsetRef CoverBundle::target_or_all() const { return target ? *target : SubsetRef::all(space_size(space)); }

json bundle_to_json(const CoverBundle& b) {
  json fams = json::array();
  for (const auto& f : b.families) fams.push_back(family_to_json(f));
  json out = {{"space", space_to_json(b.space)},
              {"families", std::move(fams)},
              {"strictness", std::string(strictness_name(b.strictness))}};
  if (b.target) out["target"] = subset_to_json(*b.target);
  if (b.r) out["r"] = *b.r;
  if (b.C) out["C"] = *b.C;
  return out;
}

CoverBundle bundle_from_json(const json& j) {
  CoverBundle b{space_from_json(require(j, "space")), {}, std::nullopt, std::nullopt, std::nullopt,
                Strictness::NonStrict};
  const auto& fams = require(j, "families");
  if (!fams.is_array()) parse_fail("'families' must be an array");
  for (const auto& f : fams) b.families.push_back(family_from_json(f));
  if (j.contains("target")) b.target = subset_from_json(j.at("target"));
  if (j.contains("r")) b.r = get_as<double>(j.at("r"), "r");
  if (j.contains("C")) b.C = get_as<double>(j.at("C"), "C");
  if (j.contains("strictness")) {
    const auto s = get_as<std::string>(j.at("strictness"), "strictness");
    if (s == "strict") b.strictness = Strictness::Strict;
    else if (s == "nonstrict") b.strictness = Strictness::NonStrict;
    else parse_fail("strictness must be 'strict' or 'nonstrict'");
  }
  return b;
}

json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

json gh_result_to_json(const GhResult& r) {
  json pairs = json::array();
  for (const auto& [i, j] : r.optimal.pairs()) pairs.push_back({i, j});
  return {{"dgh", r.value},
          {"dis", 2.0 * r.value},
          {"optimal_pairs", std::move(pairs)},
          {"nodes", r.nodes_explored},
          {"optimal", r.is_optimal}};
}

json certificate_to_json(const CoverCertificate& c, const LowerBound* bound) {
  json gaps = json::array();
  for (std::size_t f = 0; f < c.families.size(); ++f) {
    json g = {{"family", c.families[f].label()},
              {"members", c.families[f].size()},
              {"min_gap", number(c.gaps[f].gap)}};
    if (c.gaps[f].pair) g["pair"] = {c.gaps[f].pair->first, c.gaps[f].pair->second};
    gaps.push_back(std::move(g));
  }
  json out = {{"k", c.k()},
              {"r", c.r},
              {"C", c.C},
              {"strictness", std::string(strictness_name(c.strictness))},
              {"min_gap", number(c.min_gap())},
              {"multiplicity", c.multiplicity},
              {"target_size", c.target.size()},
              {"families", std::move(gaps)}};
  if (bound) {
    out["model"] = bound->model;
    out["bound"] = bound->bound;
    out["trace"] = bound->trace;
  }
  return out;
}

json model_to_json(const ModelSpaceDescriptor& m) {
  return {{"name", m.name},
          {"asdim_lower", m.asdim_lower},
          {"stabilizer_nontrivial", m.stabilizer_nontrivial},
          {"provenance", m.provenance}};
}

ModelSpaceDescriptor model_from_json(const json& j) {
  ModelSpaceDescriptor m;
  m.name = get_as<std::string>(require(j, "name"), "model name");
  m.asdim_lower = get_as<unsigned>(require(j, "asdim_lower"), "asdim_lower");
  m.stabilizer_nontrivial = get_as<bool>(require(j, "stabilizer_nontrivial"), "stabilizer_nontrivial");
  m.provenance = get_as<std::string>(require(j, "provenance"), "provenance");
  if (m.provenance.empty()) parse_fail("model descriptor needs a provenance");
  return m;
}

json read_json_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) parse_fail("cannot open " + p.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    parse_fail(p.string() + ": " + e.what());
  }
}

void write_json_file(const std::filesystem::path& p, const json& j) {
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw GeometryError(Errc::InvalidArgument, "cannot write " + p.string());
  out << j.dump(2) << '\n';
}

}  // namespace ghkit::io
