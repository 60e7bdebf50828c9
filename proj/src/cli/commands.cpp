#include "ghkit/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "ghkit/constructions.hpp"
#include "ghkit/correspondence.hpp"
#include "ghkit/covers.hpp"
#include "ghkit/json_io.hpp"
#include "ghkit/svg.hpp"

namespace ghkit::cli {

namespace {

using io::json;
namespace fs = std::filesystem;

struct Outcome {
  json outputs = json::object();
  int code = kExitOk;
};

struct Context {
  std::ostream& out;
  std::ostream& err;
  std::string command;
  json inputs = json::object();
  std::string stage;  // set by multi-stage commands
};

WindowSpec parse_window(const std::vector<double>& v) {
  if (v.size() == 4) return {v[0], v[1], v[2], v[3]};
  if (v.size() == 2) return {v[0], v[1], 0.0, 0.0};
  throw GeometryError(Errc::InvalidArgument, "--window takes xmin,xmax,ymin,ymax (or xmin,xmax)");
}

json window_json(const WindowSpec& w) { return {w.xmin, w.xmax, w.ymin, w.ymax}; }

SubsetRef parse_subset_arg(const std::string& arg, std::size_t n) {
  if (arg == "all") return SubsetRef::all(n);
  if (fs::exists(arg)) return io::subset_from_json(io::read_json_file(arg));
  std::string text = arg;
  if (!text.empty() && text.front() != '[') text = "[" + text + "]";
  try {
    return io::subset_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw GeometryError(Errc::ParseError, "cannot read subset '" + arg + "': " + e.what());
  }
}

json family_summary(const std::vector<SubsetFamily>& fams) {
  json out = json::array();
  for (const auto& f : fams) out.push_back({{"label", f.label()}, {"members", f.size()}});
  return out;
}

template <class Space>
double max_diam(const Space& s, const std::vector<SubsetFamily>& fams) {
  double d = 0.0;
  for (const auto& f : fams) d = std::max(d, check_uniform_bound(s, f));
  return d;
}

template <class Space>
double min_gap(const Space& s, const std::vector<SubsetFamily>& fams) {
  double g = std::numeric_limits<double>::infinity();
  for (const auto& f : fams) g = std::min(g, family_min_gap(s, f).gap);
  return g;
}

void emit_document(Context& ctx, Outcome& oc, const std::string& out_path, const json& doc) {
  if (out_path.empty()) {
    oc.outputs["document"] = doc;
  } else {
    io::write_json_file(out_path, doc);
    oc.outputs["written"] = out_path;
  }
  (void)ctx;
}

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
  std::string kind;
  std::vector<double> window{0, 10, 0, 10};
  double eps = 0.1;
  double delta = 0.05;
  double h = 2.0;
  double r = 1.0;
  std::optional<double> L;
  std::optional<double> spacing;
  std::string out;
};

Outcome cmd_gen(Context& ctx, const GenArgs& a) {
  const WindowSpec w = parse_window(a.window);
  ctx.inputs = {{"kind", a.kind}, {"window", window_json(w)}};
  Outcome oc;
  auto write_bundle = [&](io::CoverBundle b) {
    const auto& pts = std::get<EuclideanPointSet>(b.space);
    oc.outputs["points"] = pts.size();
    oc.outputs["families"] = family_summary(b.families);
    oc.outputs["advertised_r"] = *b.r;
    oc.outputs["advertised_C"] = *b.C;
    emit_document(ctx, oc, a.out, io::bundle_to_json(b));
    ctx.err << a.kind << ": " << pts.size() << " points";
    for (const auto& f : b.families) ctx.err << ", " << f.size() << " " << f.label();
    ctx.err << "; advertised r = " << fmt17(*b.r) << ", C = " << fmt17(*b.C) << '\n';
  };
  auto write_space = [&](const EuclideanPointSet& pts) {
    oc.outputs["points"] = pts.size();
    emit_document(ctx, oc, a.out, io::space_to_json(pts));
    ctx.err << a.kind << ": " << pts.size() << " points\n";
  };

  if (a.kind == "lattice") {
    write_space(gen_lattice_window(w));
  } else if (a.kind == "net") {
    ctx.inputs["eps"] = a.eps;
    write_space(gen_epsilon_net(w, a.eps));
  } else if (a.kind == "comb") {
    ctx.inputs["delta"] = a.delta;
    write_space(gen_comb_set(w, a.delta));
  } else if (a.kind == "chess") {
    auto pts = gen_lattice_window(w);
    auto fams = gen_chess_families(pts);
    write_bundle({std::move(pts), std::move(fams), std::nullopt, std::sqrt(2.0), 0.0, Strictness::NonStrict});
  } else if (a.kind == "comb-cover") {
    ctx.inputs["delta"] = a.delta;
    ctx.inputs["h"] = a.h;
    auto pts = gen_comb_set(w, a.delta);
    auto fams = gen_comb_cover(pts, a.h);
    write_bundle({std::move(pts), std::move(fams), std::nullopt, 1.0, a.h, Strictness::NonStrict});
  } else if (a.kind == "brick") {
    const double L = a.L.value_or(3.0 * a.r);
    const double sp = a.spacing.value_or(0.25 * a.r);
    ctx.inputs["r"] = a.r;
    ctx.inputs["L"] = L;
    ctx.inputs["spacing"] = sp;
    auto g = gen_brick_cover(w, a.r, L, sp);
    write_bundle({std::move(g.points), std::move(g.families), std::nullopt, g.advertised_r, g.advertised_c,
                  Strictness::NonStrict});
  } else if (a.kind == "interval") {
    const double L = a.L.value_or(3.0 * a.r);
    const double sp = a.spacing.value_or(0.25 * a.r);
    ctx.inputs["r"] = a.r;
    ctx.inputs["L"] = L;
    ctx.inputs["spacing"] = sp;
    auto g = gen_interval_cover(w.xmin, w.xmax, a.r, L, sp);
    write_bundle({std::move(g.points), std::move(g.families), std::nullopt, g.advertised_r, g.advertised_c,
                  Strictness::NonStrict});
  }
  return oc;
}

// ---------------------------------------------------------------------------
// hausdorff

struct HausdorffArgs {
  std::string space, a, b, points_a, points_b;
};

Outcome cmd_hausdorff(Context& ctx, const HausdorffArgs& args) {
  Outcome oc;
  double ab = 0.0, ba = 0.0;
  std::size_t na = 0, nb = 0;
  if (!args.points_a.empty() || !args.points_b.empty()) {
    if (args.points_a.empty() || args.points_b.empty())
      throw GeometryError(Errc::InvalidArgument, "--points-a and --points-b go together");
    ctx.inputs = {{"points_a", args.points_a}, {"points_b", args.points_b}};
    auto sa = io::space_from_json(io::read_json_file(args.points_a));
    auto sb = io::space_from_json(io::read_json_file(args.points_b));
    const auto* pa = std::get_if<EuclideanPointSet>(&sa);
    const auto* pb = std::get_if<EuclideanPointSet>(&sb);
    if (!pa || !pb) throw GeometryError(Errc::NonEuclideanAmbient, "--points-a/--points-b need points2d files");
    const auto merged = merge_point_sets(*pa, *pb);
    const SubsetRef a(merged.from_a), b(merged.from_b);
    ab = directed_hausdorff(merged.ambient, a, b);
    ba = directed_hausdorff(merged.ambient, b, a);
    na = a.size();
    nb = b.size();
    oc.outputs["ambient_points"] = merged.ambient.size();
  } else {
    if (args.space.empty() || args.a.empty() || args.b.empty())
      throw GeometryError(Errc::InvalidArgument, "need --space with --a and --b, or --points-a and --points-b");
    ctx.inputs = {{"space", args.space}, {"a", args.a}, {"b", args.b}};
    const auto space = io::space_from_json(io::read_json_file(args.space));
    const std::size_t n = io::space_size(space);
    const SubsetRef a = parse_subset_arg(args.a, n), b = parse_subset_arg(args.b, n);
    std::visit(
        [&](const auto& s) {
          ab = directed_hausdorff(s, a, b);
          ba = directed_hausdorff(s, b, a);
        },
        space);
    na = a.size();
    nb = b.size();
    oc.outputs["ambient_points"] = n;
  }
  const double dh = std::max(ab, ba);
  oc.outputs["dH"] = dh;
  oc.outputs["directed_ab"] = ab;
  oc.outputs["directed_ba"] = ba;
  oc.outputs["size_a"] = na;
  oc.outputs["size_b"] = nb;
  ctx.err << "d_H = " << fmt17(dh) << "  (a->b " << fmt17(ab) << ", b->a " << fmt17(ba) << ")\n";
  return oc;
}

// ---------------------------------------------------------------------------
// gh-exact

Outcome cmd_gh_exact(Context& ctx, const std::string& xf, const std::string& yf, std::uint64_t budget) {
  ctx.inputs = {{"x", xf}, {"y", yf}, {"budget", budget}};
  const auto x = io::as_matrix_space(io::space_from_json(io::read_json_file(xf)));
  const auto y = io::as_matrix_space(io::space_from_json(io::read_json_file(yf)));
  const GhResult r = exact_gh(x, y, budget);
  Outcome oc;
  oc.outputs = io::gh_result_to_json(r);
  ctx.err << (r.is_optimal ? "d_GH = " : "d_GH <= ") << fmt17(r.value) << "  (" << r.nodes_explored
          << " nodes" << (r.is_optimal ? "" : ", budget exceeded") << ")\n";
  if (!r.is_optimal) oc.code = kExitBudget;
  return oc;
}

// ---------------------------------------------------------------------------
// certificates

struct CoverArgs {
  std::string cover;
  std::optional<double> r;
  bool strict = false;
  std::string model = "R2";
  std::string model_file;
};

CoverCertificate certify(const io::CoverBundle& b, const CoverArgs& a) {
  const double r = a.r ? *a.r : b.r.value_or(0.0);
  if (!(r > 0.0))
    throw GeometryError(Errc::InvalidArgument, "no separation r: pass --r or store \"r\" in the cover file");
  const Strictness s = a.strict ? Strictness::Strict : b.strictness;
  return std::visit(
      [&](const auto& space) { return make_certificate(space, b.families, r, s, b.target_or_all()); }, b.space);
}

Outcome cmd_verify_cover(Context& ctx, const CoverArgs& a) {
  ctx.inputs = {{"cover", a.cover}, {"strict", a.strict}};
  if (a.r) ctx.inputs["r"] = *a.r;
  const auto bundle = io::bundle_from_json(io::read_json_file(a.cover));
  const auto cert = certify(bundle, a);
  Outcome oc;
  oc.outputs = io::certificate_to_json(cert);
  oc.outputs["valid"] = true;
  ctx.err << "certificate: k = " << cert.k() << ", r = " << fmt17(cert.r) << ", C = " << fmt17(cert.C)
          << ", min gap = " << fmt17(cert.min_gap()) << ", multiplicity " << cert.multiplicity << '\n';
  return oc;
}

Outcome cmd_lower_bound(Context& ctx, const CoverArgs& a) {
  ctx.inputs = {{"cover", a.cover}, {"strict", a.strict}, {"model", a.model}};
  if (a.r) ctx.inputs["r"] = *a.r;
  if (!a.model_file.empty()) ctx.inputs["model_file"] = a.model_file;
  const ModelSpaceDescriptor model =
      a.model_file.empty() ? lookup_model(a.model) : io::model_from_json(io::read_json_file(a.model_file));
  const auto bundle = io::bundle_from_json(io::read_json_file(a.cover));
  const auto cert = certify(bundle, a);
  const auto lb = gh_lower_bound(cert, model);
  Outcome oc;
  oc.outputs = io::certificate_to_json(cert, &lb);
  oc.outputs["model_descriptor"] = io::model_to_json(model);
  ctx.err << "d_GH(A, " << model.name << ") >= " << fmt17(lb.bound) << '\n';
  for (const auto& line : lb.trace) ctx.err << "  " << line << '\n';
  return oc;
}

// ---------------------------------------------------------------------------
// scale-ladder

Outcome cmd_scale_ladder(Context& ctx, const std::string& cover, double lambda, int steps) {
  ctx.inputs = {{"cover", cover}, {"lambda", lambda}, {"steps", steps}};
  if (!(lambda > 1.0)) throw GeometryError(Errc::InvalidArgument, "lambda must exceed 1", {}, lambda);
  if (steps < 0) throw GeometryError(Errc::InvalidArgument, "steps must be nonnegative");
  const auto bundle = io::bundle_from_json(io::read_json_file(cover));
  const auto* pts = std::get_if<EuclideanPointSet>(&bundle.space);
  if (!pts) throw GeometryError(Errc::NonEuclideanAmbient, "scaling ladder needs a points2d ambient");

  ScaledCover current{*pts, bundle.families};
  const double gap0 = min_gap(current.points, current.families);
  const double diam0 = max_diam(current.points, current.families);
  json rows = json::array();
  bool consistent = true;
  double factor = 1.0;
  for (int m = 0; m <= steps; ++m) {
    if (m > 0) {
      current = scale_family(current.points, std::move(current.families), lambda);
      factor *= lambda;
    }
    const double gap = min_gap(current.points, current.families);
    const double dm = max_diam(current.points, current.families);
    auto close = [&](double got, double base) {
      if (std::isinf(base)) return std::isinf(got);
      return std::abs(got - factor * base) <= 1e-9 * factor * base;
    };
    const bool ok = close(gap, gap0) && close(dm, diam0);
    consistent = consistent && ok;
    rows.push_back({{"m", m},
                    {"scale", factor},
                    {"gap", io::number(gap)},
                    {"diam", dm},
                    {"gap_ratio", gap0 > 0 && std::isfinite(gap0) ? json(gap / gap0) : json(nullptr)},
                    {"diam_ratio", diam0 > 0 ? json(dm / diam0) : json(nullptr)},
                    {"ok", ok}});
    ctx.err << "m = " << m << ": gap " << fmt17(gap) << ", diam " << fmt17(dm) << (ok ? "" : "  MISMATCH") << '\n';
  }
  Outcome oc;
  oc.outputs = {{"ladder", std::move(rows)}, {"consistent", consistent}, {"relative_tolerance", 1e-9}};
  if (!consistent) oc.code = kExitValidation;
  return oc;
}

// ---------------------------------------------------------------------------
// reproduce

struct ReproduceArgs {
  std::string example;
  int window = 12;
  std::string out_dir = ".";
  double eps = 0.1;
  double delta = 0.05;
};

Outcome cmd_reproduce(Context& ctx, const ReproduceArgs& a) {
  ctx.inputs = {{"example", a.example}, {"window", a.window}, {"out_dir", a.out_dir}};
  if (a.window < 4) throw GeometryError(Errc::InvalidArgument, "window size must be at least 4");
  const bool first = a.example == "example1";
  const double n = a.window;
  const WindowSpec w = first ? WindowSpec{0, n, 0, n} : WindowSpec{0, n, -n / 2, n / 2};
  const double step = first ? a.eps : a.delta;
  ctx.inputs[first ? "eps" : "delta"] = step;
  Outcome oc;

  ctx.stage = "generate";
  EuclideanPointSet pts = first ? gen_lattice_window(w) : gen_comb_set(w, a.delta);
  std::vector<SubsetFamily> fams = first ? gen_chess_families(pts) : gen_comb_cover(pts, 2.0);
  const double r = first ? std::sqrt(2.0) : 1.0;

  ctx.stage = "certify";
  const auto cert = make_certificate(pts, fams, r, Strictness::NonStrict, SubsetRef::all(pts.size()));

  ctx.stage = "lower-bound";
  const auto lb = gh_lower_bound(cert, lookup_model("R2"));

  ctx.stage = "hausdorff";
  const auto net = gen_epsilon_net(w, step);
  const auto merged = merge_point_sets(pts, net);
  const double dh = hausdorff(merged.ambient, SubsetRef(merged.from_a), SubsetRef(merged.from_b));
  double dh_interior = std::numeric_limits<double>::quiet_NaN();
  {
    const WindowSpec inner = w.shrunk(1.0);
    std::vector<std::size_t> ia, ib;
    for (std::size_t i : merged.from_a)
      if (inner.contains(merged.ambient.point(i), 1e-9)) ia.push_back(i);
    for (std::size_t i : merged.from_b)
      if (inner.contains(merged.ambient.point(i), 1e-9)) ib.push_back(i);
    if (!ia.empty() && !ib.empty()) dh_interior = hausdorff(merged.ambient, SubsetRef(ia), SubsetRef(ib));
  }

  ctx.stage = "compare";
  const double tol = first ? 1e-9 : a.delta + 2.0 / n;
  const double diff = std::abs(lb.bound - dh);
  const bool agree = diff <= tol;

  ctx.stage = "write";
  const fs::path dir(a.out_dir);
  fs::create_directories(dir);
  const std::string figure = first ? "figure1.svg" : "figure2.svg";
  {
    std::ofstream svg(dir / figure);
    svg << render_cover_svg(pts, fams,
                            first ? "Chess colouring of a Z^2 window" : "Two-family cover of the comb set");
    if (!svg) throw GeometryError(Errc::InvalidArgument, "cannot write " + (dir / figure).string());
  }
  io::CoverBundle bundle{pts, fams, std::nullopt, r, cert.C, Strictness::NonStrict};
  io::write_json_file(dir / "cover.json", io::bundle_to_json(bundle));

  oc.outputs = {{"certificate", io::certificate_to_json(cert, &lb)},
                {"bound", lb.bound},
                {"dH", dh},
                {"dH_interior", std::isnan(dh_interior) ? json(nullptr) : json(dh_interior)},
                {"points", pts.size()},
                {"net_points", net.size()},
                {"difference", diff},
                {"tolerance", tol},
                {"agree", agree},
                {"figure", (dir / figure).string()},
                {"cover_file", (dir / "cover.json").string()},
                {"families", family_summary(fams)}};
  if (!first) oc.outputs["slack"] = {{"discretization", a.delta}, {"boundary", 2.0 / n}};
  ctx.err << a.example << ": certified k = " << cert.k() << ", r = " << fmt17(cert.r) << ", C = " << fmt17(cert.C)
          << "\n  lower bound d_GH >= " << fmt17(lb.bound) << "\n  d_H(window, net) = " << fmt17(dh)
          << "\n  |difference| = " << fmt17(diff) << (agree ? " <= " : " > ") << fmt17(tol) << '\n';
  if (!agree) oc.code = kExitValidation;
  return oc;
}

// ---------------------------------------------------------------------------

void write_csv(const std::string& path, const json& report) {
  std::ofstream out(path);
  if (!out) throw GeometryError(Errc::InvalidArgument, "cannot write " + path);
  out << "key,value\n";
  out << "command," << report.value("command", "") << '\n';
  for (const auto& [k, v] : report["outputs"].items()) {
    if (v.is_number_float()) out << k << ',' << fmt17(v.get<double>()) << '\n';
    else if (v.is_primitive() && !v.is_null()) out << k << ',' << v.dump() << '\n';
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Hausdorff and Gromov-Hausdorff distances, cover certificates and lower bounds", "ghkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  std::string csv;
  app.add_option("--csv", csv, "also write a key,value summary of the outputs");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "generate point sets and covers");
  gen_cmd->set_help_flag("--help", "print this help message and exit");  // frees -h for --h
  gen_cmd->add_option("kind", gen.kind, "lattice|net|chess|comb|comb-cover|brick|interval")
      ->required()
      ->check(CLI::IsMember({"lattice", "net", "chess", "comb", "comb-cover", "brick", "interval"}));
  gen_cmd->add_option("--window", gen.window, "xmin,xmax,ymin,ymax")->delimiter(',');
  gen_cmd->add_option("--eps", gen.eps, "net spacing");
  gen_cmd->add_option("--delta", gen.delta, "comb sample spacing (1/delta must be an integer)");
  gen_cmd->add_option("--h", gen.h, "comb piece height");
  gen_cmd->add_option("--r", gen.r, "separation for brick/interval covers");
  gen_cmd->add_option("--L", gen.L, "brick/interval size (default 3r)");
  gen_cmd->add_option("--spacing", gen.spacing, "net spacing for brick/interval covers (default r/4)");
  gen_cmd->add_option("--out", gen.out, "output JSON file");

  HausdorffArgs haus;
  auto* haus_cmd = app.add_subcommand("hausdorff", "Hausdorff distance between two subsets");
  haus_cmd->add_option("--space", haus.space, "space JSON");
  haus_cmd->add_option("--a", haus.a, "subset: JSON file, index list, or 'all'");
  haus_cmd->add_option("--b", haus.b, "subset: JSON file, index list, or 'all'");
  haus_cmd->add_option("--points-a", haus.points_a, "points2d file merged into a common ambient");
  haus_cmd->add_option("--points-b", haus.points_b, "points2d file merged into a common ambient");
  haus_cmd->add_option("--csv", csv);

  std::string gx, gy;
  std::uint64_t budget = kDefaultNodeBudget;
  auto* gh_cmd = app.add_subcommand("gh-exact", "exact Gromov-Hausdorff distance of small spaces");
  gh_cmd->add_option("--x", gx)->required();
  gh_cmd->add_option("--y", gy)->required();
  gh_cmd->add_option("--budget", budget, "search node limit");
  gh_cmd->add_option("--csv", csv);

  CoverArgs lower;
  auto* lb_cmd = app.add_subcommand("lower-bound", "certify a cover and emit the d_GH lower bound");
  lb_cmd->add_option("--cover", lower.cover)->required();
  lb_cmd->add_option("--model", lower.model, "model space: R1, R2, R<n>, Z2");
  lb_cmd->add_option("--model-file", lower.model_file, "model descriptor JSON");
  lb_cmd->add_option("--r", lower.r, "separation (overrides the file)");
  lb_cmd->add_flag("--strict", lower.strict, "require gaps > r");
  lb_cmd->add_option("--csv", csv);

  CoverArgs verify;
  auto* verify_cmd = app.add_subcommand("verify-cover", "check disjointness, boundedness and coverage");
  verify_cmd->add_option("--cover", verify.cover)->required();
  verify_cmd->add_option("--r", verify.r, "separation (overrides the file)");
  verify_cmd->add_flag("--strict", verify.strict, "require gaps > r");
  verify_cmd->add_option("--csv", csv);

  std::string ladder_cover;
  double lambda = 2.0;
  int steps = 5;
  auto* ladder_cmd = app.add_subcommand("scale-ladder", "rescale a cover by lambda^m and track gaps");
  ladder_cmd->add_option("--cover", ladder_cover)->required();
  ladder_cmd->add_option("--lambda", lambda);
  ladder_cmd->add_option("--steps", steps);
  ladder_cmd->add_option("--csv", csv);

  ReproduceArgs repro;
  auto* repro_cmd = app.add_subcommand("reproduce", "run a full worked example");
  repro_cmd->add_option("example", repro.example)->required()->check(CLI::IsMember({"example1", "example2"}));
  repro_cmd->add_option("--window", repro.window, "window size N (>= 4)");
  repro_cmd->add_option("--out-dir", repro.out_dir);
  repro_cmd->add_option("--eps", repro.eps, "net spacing for example1");
  repro_cmd->add_option("--delta", repro.delta, "sample spacing for example2");
  repro_cmd->add_option("--csv", csv);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const auto* sub = app.get_subcommands().front();
  Context ctx{out, err, sub->get_name(), json::object(), {}};
  const auto start = std::chrono::steady_clock::now();
  json report;
  int code = kExitOk;
  Outcome oc;
  try {
    if (sub == gen_cmd) oc = cmd_gen(ctx, gen);
    else if (sub == haus_cmd) oc = cmd_hausdorff(ctx, haus);
    else if (sub == gh_cmd) oc = cmd_gh_exact(ctx, gx, gy, budget);
    else if (sub == lb_cmd) oc = cmd_lower_bound(ctx, lower);
    else if (sub == verify_cmd) oc = cmd_verify_cover(ctx, verify);
    else if (sub == ladder_cmd) oc = cmd_scale_ladder(ctx, ladder_cover, lambda, steps);
    else oc = cmd_reproduce(ctx, repro);
    code = oc.code;
  } catch (const GeometryError& e) {
    code = is_gate_error(e.code()) ? kExitGate : kExitValidation;
    json error = {{"code", std::string(errc_name(e.code()))},
                  {"message", e.what()},
                  {"witness", e.witness()},
                  {"value", e.value()},
                  {"exit_code", code}};
    if (!ctx.stage.empty()) error["stage"] = ctx.stage;
    oc.outputs["error"] = std::move(error);
    err << "error" << (ctx.stage.empty() ? "" : " [" + ctx.stage + "]") << ": " << e.what() << '\n';
  } catch (const std::exception& e) {
    code = kExitValidation;
    oc.outputs["error"] = {{"code", "Internal"}, {"message", e.what()}, {"exit_code", code}};
    if (!ctx.stage.empty()) oc.outputs["error"]["stage"] = ctx.stage;
    err << "error: " << e.what() << '\n';
  }
  const double ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  report = {{"command", ctx.command},
            {"argv", std::vector<std::string>(args.begin() + (args.empty() ? 0 : 1), args.end())},
            {"inputs", ctx.inputs},
            {"outputs", oc.outputs},
            {"exit_code", code},
            {"runtime_ms", ms},
            {"version", kVersion}};
  out << report.dump(2) << '\n';
  if (!csv.empty()) {
    try {
      write_csv(csv, report);
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      if (code == kExitOk) code = kExitValidation;
    }
  }
  return code;
}

}  // namespace ghkit::cli
