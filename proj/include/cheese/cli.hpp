#pragma once

// Command-line front end. `run_cli` parses argv into a RunConfig and
// dispatches; it never calls exit, so tests drive it in-process.
//
// Exit codes: 0 success, 1 verification failure or NotFound, 2 usage or
// input error, 3 root-bracket precision exhausted.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "cheese/cheese.hpp"

namespace cheese {

enum ExitCode : int { kExitOk = 0, kExitVerifyFailed = 1, kExitUsage = 2, kExitPrecision = 3 };

struct RunConfig {
  std::string command;
  unsigned long stages = 2;
  std::size_t systems_per_stage = 8;
  std::size_t discs_per_system = 16;
  std::int64_t search_budget = kDefaultSearchBudget;
  unsigned root_precision = kDefaultRootPrecision;
  std::size_t grid_size = 32;
  std::size_t family_size = 8;
  std::uint64_t seed = 0;
  std::string input;        // cheese file; built from the parameters when empty
  std::string output;       // artifact path; standard output when empty
  std::string json_output;  // machine-readable report path ("-" for standard output)
  std::string certificate;  // certificate file for `verify`
  std::string z, w, x;      // rational pairs "p,q"
  std::string radius;       // probe circle radius; automatic when empty
  unsigned k = 0;
  int width_px = 800;
  bool show_capsules = false;
  bool hide_interval = false;

  void validate() const {
    if (systems_per_stage < 1 || discs_per_system < 1 || search_budget < 1 || root_precision < 1 || grid_size < 1 ||
        family_size < 1)
      throw Error(ErrorKind::invalid_input, "all limits must be >= 1");
  }

  Provenance provenance() const {
    Provenance p;
    p.tool_version = kToolVersion;
    p.seed = seed;
    auto& m = p.parameters;
    m["command"] = command;
    m["stages"] = std::to_string(stages);
    m["systems_per_stage"] = std::to_string(systems_per_stage);
    m["discs_per_system"] = std::to_string(discs_per_system);
    m["search_budget"] = std::to_string(search_budget);
    m["root_precision"] = std::to_string(root_precision);
    m["grid_size"] = std::to_string(grid_size);
    m["family_size"] = std::to_string(family_size);
    if (!input.empty()) m["input"] = input;
    if (!z.empty()) m["z"] = z;
    if (!w.empty()) m["w"] = w;
    if (!x.empty()) m["x"] = x;
    if (command == "bounds") m["k"] = std::to_string(k);
    return p;
  }
};

/// "p,q" with exact rational literals on both sides.
inline QPoint parse_point_literal(const std::string& text) {
  auto comma = text.find(',');
  if (comma == std::string::npos || text.find(',', comma + 1) != std::string::npos)
    throw Error(ErrorKind::invalid_input, "expected a point 'x,y', got '" + text + "'");
  return {parse_rational(text.substr(0, comma)), parse_rational(text.substr(comma + 1))};
}

namespace cli_detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::invalid_input, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_artifact(const std::string& path, const std::string& bytes, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << bytes;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::invalid_input, "cannot write '" + path + "'");
  f << bytes;
}

inline CheeseDescription load_or_build(const RunConfig& cfg, bool revalidate = true) {
  if (!cfg.input.empty()) return parse(read_file(cfg.input), ParseOptions{revalidate});
  CheeseDescription c = build_cheese(cfg.stages, {cfg.systems_per_stage, cfg.discs_per_system}, cfg.root_precision);
  c.provenance = cfg.provenance();
  return c;
}

inline void emit_json(const RunConfig& cfg, Json doc, std::ostream& out) {
  if (cfg.json_output.empty()) return;
  doc["provenance"] = to_json(cfg.provenance());
  write_artifact(cfg.json_output, doc.dump(2) + "\n", out);
}

inline std::string approx(const QRational& v) {
  std::ostringstream ss;
  ss.precision(12);
  ss << v.get_d();
  return ss.str();
}

inline int cmd_build(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  CheeseDescription c = load_or_build(cfg);
  write_artifact(cfg.output, emit(c), out);
  err << "built " << c.stage_records.size() << " stages, " << c.deletions.size() << " deletions";
  for (const auto& st : c.stage_records)
    err << "; m=" << st.m << " eps=" << to_string(st.epsilon) << " N=" << st.N;
  err << "\n";
  return kExitOk;
}

inline int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  CheeseDescription c = load_or_build(cfg, /*revalidate=*/false);
  VerificationReport rep = verify_schedule(c);
  if (!c.bound_table.block_boundaries.empty()) rep.append(star_block_check(c.bound_table, cfg.root_precision), "star.");
  if (!cfg.certificate.empty()) {
    ContinuityCertificate cert = parse_certificate(read_file(cfg.certificate));
    rep.append(check_certificate(c, cert), "certificate.");
  }
  if (cfg.json_output != "-") {
    out << rep.to_text();
    out << (rep.ok() ? "verification passed\n" : "verification FAILED\n");
  }
  emit_json(cfg, to_json(rep), out);
  return rep.ok() ? kExitOk : kExitVerifyFailed;
}

inline int cmd_bounds(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.z.empty()) throw Error(ErrorKind::invalid_input, "bounds needs --z");
  CheeseDescription c = load_or_build(cfg);
  BoundQuery query{parse_point_literal(cfg.z), cfg.k, cfg.root_precision};
  DerivativeBound b = cauchy_bound(c, query);
  if (cfg.json_output != "-") {
    std::string exact = to_string(b.value_upper);
    if (exact.size() <= 64)
      out << exact << "\n";
    else
      out << "<= " << to_string(round_up_dyadic(b.value_upper, query.root_precision)) << "\n";
    out << "approx " << approx(b.value_upper) << "\n";
    out << "terms " << b.terms_used << "\n";
    out << "note " << b.tail_note << "\n";
  }
  Json doc;
  doc["format"] = "derivative-bound";
  doc["z"] = io_detail::point(query.z);
  doc["k"] = query.k;
  doc["root_precision"] = query.root_precision;
  doc["value_upper"] = io_detail::rational(b.value_upper);
  doc["terms_used"] = b.terms_used;
  doc["tail_note"] = b.tail_note;
  emit_json(cfg, std::move(doc), out);
  return kExitOk;
}

inline int cmd_certify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  if (cfg.z.empty() || cfg.w.empty()) throw Error(ErrorKind::invalid_input, "certify needs --z and --w");
  CheeseDescription c = load_or_build(cfg);
  CertificateSearch s = find_certificate(c, parse_point_literal(cfg.z), parse_point_literal(cfg.w), cfg.search_budget);
  Json doc;
  doc["format"] = "certificate-search";
  doc["stage"] = s.stage;
  doc["levels_scanned"] = s.levels_scanned;
  if (!s.certificate) {
    out << "NotFound: stage " << s.stage << ", budget of " << cfg.search_budget << " levels consumed\n";
    doc["found"] = false;
    emit_json(cfg, std::move(doc), out);
    return kExitVerifyFailed;
  }
  const bool valid = validate_certificate(c, *s.certificate);
  write_artifact(cfg.output, emit_certificate(*s.certificate, cfg.provenance()), out);
  err << "certificate: stage " << s.certificate->stage << ", S_n index " << s.certificate->enumeration_index
      << ", disc centre (" << to_string(s.certificate->disc.center.x) << ", " << to_string(s.certificate->disc.center.y)
      << ") radius " << to_string(s.certificate->disc.radius) << (valid ? ", validated\n" : ", INVALID\n");
  doc["found"] = true;
  doc["valid"] = valid;
  doc["certificate"] = to_json(*s.certificate);
  emit_json(cfg, std::move(doc), out);
  return valid ? kExitOk : kExitVerifyFailed;
}

inline int cmd_probe(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  if (cfg.x.empty()) throw Error(ErrorKind::invalid_input, "probe-jensen needs --x");
  if (cfg.grid_size % 4 != 0) throw Error(ErrorKind::invalid_input, "--grid-size must be a multiple of 4");
  CheeseDescription c = load_or_build(cfg);
  const QPoint x = parse_point_literal(cfg.x);
  if (!in_cheese(c, x)) throw Error(ErrorKind::invalid_input, "x is not in the cheese");

  // Circle radius: half the clearance from x to the outer circle and to every
  // deleted disc, rounded down to a power of two.
  QRational radius;
  if (!cfg.radius.empty()) {
    radius = parse_rational(cfg.radius);
  } else {
    QRational room = 1 - sqrt_bracket(norm_sq(x), 32).hi;
    for (const auto& del : c.deletions) {
      QRational s = sqrt_bracket(dist_sq(x, del.disc.center), 32).lo - del.disc.radius;
      if (s < room) room = s;
    }
    if (room <= 0) throw Error(ErrorKind::invalid_input, "x is too close to the boundary of the cheese");
    long p = 1;
    while (pow2(-p) >= room / 2) ++p;
    radius = pow2(-p);
  }
  if (radius <= 0) throw Error(ErrorKind::invalid_input, "probe radius must be > 0");

  std::vector<QPoint> grid{x};
  for (auto& p : rational_circle_grid(cfg.grid_size, x, radius))
    if (in_cheese(c, p)) grid.push_back(std::move(p));

  // Family: z - a for a on the circle of radius r/2 about x, alternating with
  // 1/(z - c) for the deleted-disc centres nearest x.
  TestFamily fam;
  std::vector<const Deletion*> near;
  for (const auto& del : c.deletions) near.push_back(&del);
  std::stable_sort(near.begin(), near.end(), [&](const Deletion* a, const Deletion* b) {
    return dist_sq(a->disc.center, x) < dist_sq(b->disc.center, x);
  });
  auto inner = rational_circle_grid(4 * cfg.family_size, x, radius / 2);
  std::size_t next_pole = 0;
  for (std::size_t j = 0; j < cfg.family_size; ++j) {
    if (j % 2 == 1 && next_pole < near.size()) {
      const QPoint& pc = near[next_pole++]->disc.center;
      fam.functions.push_back(RationalFunction::pole_term(QComplex(1), QComplex(pc), 1));
      fam.poles.push_back(pc);
    } else {
      fam.functions.push_back(RationalFunction::polynomial(Polynomial::linear(QComplex(inner[(j * 5) % inner.size()]))));
    }
  }
  QRational clearance = radius;
  for (const auto& del : c.deletions)
    if (del.disc.radius < clearance) clearance = del.disc.radius;
  fam.pole_clearance = clearance;

  SearchResult res = lp_search(c, x, grid, fam);
  if (cfg.json_output != "-") {
    out << "optimum (mass off x): " << to_string(res.optimum) << "\n";
    out << "grid points: " << grid.size() << ", constraints: " << res.constraints << ", radius " << to_string(radius)
        << "\n";
    out << "witness support: " << res.witness.support.size() << " points\n";
    for (std::size_t i = 0; i < res.witness.support.size(); ++i)
      out << "  (" << approx(res.witness.support[i].x) << ", " << approx(res.witness.support[i].y)
          << ") weight " << to_string(res.witness.weights[i]) << "\n";
    out << "evidence: " << res.evidence << "\n";
  }
  Json doc;
  doc["format"] = "jensen-probe";
  doc["x"] = io_detail::point(x);
  doc["radius"] = io_detail::rational(radius);
  doc["optimum"] = io_detail::rational(res.optimum);
  Json wit = Json::array();
  for (std::size_t i = 0; i < res.witness.support.size(); ++i) {
    Json e;
    e["point"] = io_detail::point(res.witness.support[i]);
    e["weight"] = io_detail::rational(res.witness.weights[i]);
    wit.push_back(std::move(e));
  }
  doc["witness"] = std::move(wit);
  doc["rounding"] = res.rounding;
  doc["evidence"] = res.evidence;
  emit_json(cfg, std::move(doc), out);
  return kExitOk;
}

inline int cmd_render(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  CheeseDescription c = load_or_build(cfg);
  SvgOptions opt;
  opt.width_px = cfg.width_px;
  opt.show_capsules = cfg.show_capsules;
  opt.show_interval = !cfg.hide_interval;
  opt.description = to_json(cfg.provenance()).dump();
  write_artifact(cfg.output, render_svg(c, opt), out);
  return kExitOk;
}

inline int cmd_star(const RunConfig& cfg, std::ostream& out, std::ostream&) {
  CheeseDescription c = load_or_build(cfg);
  if (c.bound_table.block_boundaries.empty()) throw Error(ErrorKind::invalid_input, "no complete block (stages = 0)");
  VerificationReport rep = star_block_check(c.bound_table, cfg.root_precision);
  if (cfg.json_output != "-") out << rep.to_text();
  emit_json(cfg, to_json(rep), out);
  return rep.ok() ? kExitOk : kExitVerifyFailed;
}

}  // namespace cli_detail

inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  using namespace cli_detail;
  try {
    cfg.validate();
    if (cfg.command == "build") return cmd_build(cfg, out, err);
    if (cfg.command == "verify") return cmd_verify(cfg, out, err);
    if (cfg.command == "bounds") return cmd_bounds(cfg, out, err);
    if (cfg.command == "certify") return cmd_certify(cfg, out, err);
    if (cfg.command == "probe-jensen") return cmd_probe(cfg, out, err);
    if (cfg.command == "render") return cmd_render(cfg, out, err);
    if (cfg.command == "star-check") return cmd_star(cfg, out, err);
    throw Error(ErrorKind::invalid_input, "unknown command '" + cfg.command + "'");
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::precision_exhausted: return kExitPrecision;
      case ErrorKind::invariant_violation: return kExitVerifyFailed;
      default: return kExitUsage;
    }
  }
}

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Exact Swiss cheese construction and verification kit"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto common = [&](CLI::App* sub) {
    sub->add_option("--in", cfg.input, "Cheese file (CheeseFileV1); built from the stage options when absent");
    sub->add_option("--stages", cfg.stages, "Stages M to build")->capture_default_str();
    sub->add_option("--systems", cfg.systems_per_stage, "McKissick systems per stage")->capture_default_str();
    sub->add_option("--discs", cfg.discs_per_system, "Discs per McKissick system")->capture_default_str();
    sub->add_option("--precision", cfg.root_precision, "Root bracket precision t (width 2^-t)")->capture_default_str();
    sub->add_option("--seed", cfg.seed, "Seed recorded in provenance")->capture_default_str();
    sub->add_option("--json", cfg.json_output, "Write the machine-readable report here ('-' for stdout only)");
  };

  auto* build = app.add_subcommand("build", "Build a cheese and emit CheeseFileV1");
  common(build);
  build->add_option("-o,--out", cfg.output, "Output path (stdout when absent)");

  auto* verify = app.add_subcommand("verify", "Re-check every exact invariant; exit 0 iff all pass");
  common(verify);
  verify->add_option("--certificate", cfg.certificate, "Also validate this certificate");

  auto* bounds = app.add_subcommand("bounds", "Certified Cauchy bound on |f^(k)(z)| / |f|_X");
  common(bounds);
  bounds->add_option("--z", cfg.z, "Point 'x,y' (exact rationals)")->required();
  bounds->add_option("--k", cfg.k, "Derivative order")->capture_default_str();

  auto* certify = app.add_subcommand("certify", "Find a point-of-continuity certificate for (z, w)");
  common(certify);
  certify->add_option("--z", cfg.z, "Point off I, 'x,y'")->required();
  certify->add_option("--w", cfg.w, "Second point, 'x,y'")->required();
  certify->add_option("--budget", cfg.search_budget, "Largest enumeration level scanned")->capture_default_str();
  certify->add_option("-o,--out", cfg.output, "Certificate output path (stdout when absent)");

  auto* probe = app.add_subcommand("probe-jensen", "LP search for non-trivial Jensen candidates at x");
  common(probe);
  probe->add_option("--x", cfg.x, "Base point 'x,y'")->required();
  probe->add_option("--grid-size", cfg.grid_size, "Circle grid points (multiple of 4)")->capture_default_str();
  probe->add_option("--family-size", cfg.family_size, "Test functions")->capture_default_str();
  probe->add_option("--radius", cfg.radius, "Grid circle radius (exact rational)");

  auto* render = app.add_subcommand("render", "Emit an SVG figure");
  common(render);
  render->add_option("-o,--out", cfg.output, "SVG output path (stdout when absent)");
  render->add_option("--width", cfg.width_px, "Width in pixels")->capture_default_str();
  render->add_flag("--show-capsules", cfg.show_capsules, "Draw the capsules K_m");
  render->add_flag("--no-interval", cfg.hide_interval, "Omit the interval I");

  auto* star = app.add_subcommand("star-check", "Certified block sums of A_k^(-1/k)");
  common(star);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: usage: " << e.what() << "\n";
    return kExitUsage;
  }
  for (auto* sub : app.get_subcommands()) cfg.command = sub->get_name();
  return run(cfg, out, err);
}

}  // namespace cheese
