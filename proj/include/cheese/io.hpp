#pragma once

// CheeseFileV1 (canonical JSON), certificate and report documents, and the
// SVG renderer.
//
// CheeseFileV1 key order is fixed:
//   format, format_version, outer, stages, deletions, bound_table, provenance
// Every rational is an object {"num": "<decimal>", "den": "<decimal>"} in
// lowest terms with den > 0. Output is 2-space indented UTF-8 with a trailing
// newline.

#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cheese/certificates.hpp"
#include "cheese/schedule.hpp"

namespace cheese {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = "cheese 1.0.0";
inline constexpr int kFormatVersion = 1;

namespace io_detail {

[[noreturn]] inline void malformed(const std::string& what) { throw Error(ErrorKind::malformed_document, what); }
[[noreturn]] inline void violated(const std::string& what) { throw Error(ErrorKind::invariant_violation, what); }

inline Json rational(const QRational& v) {
  Json j;
  j["num"] = v.get_num().get_str();
  j["den"] = v.get_den().get_str();
  return j;
}

inline Json point(const QPoint& p) {
  Json j;
  j["x"] = rational(p.x);
  j["y"] = rational(p.y);
  return j;
}

inline Json disc(const QDisc& d) {
  Json j;
  j["center"] = point(d.center);
  j["radius"] = rational(d.radius);
  j["kind"] = d.kind == DiscKind::open ? "open" : "closed";
  return j;
}

inline const Json& field(const Json& obj, const char* key) {
  if (!obj.is_object()) malformed("expected an object holding '" + std::string(key) + "'");
  auto it = obj.find(key);
  if (it == obj.end()) malformed("missing key '" + std::string(key) + "'");
  return *it;
}

inline void exact_keys(const Json& obj, std::initializer_list<const char*> keys, const char* what) {
  if (!obj.is_object()) malformed(std::string(what) + " must be an object");
  if (obj.size() != keys.size()) malformed(std::string(what) + " has unexpected keys");
  for (const char* k : keys)
    if (!obj.contains(k)) malformed(std::string(what) + " lacks '" + k + "'");
}

inline bool decimal(const std::string& s, bool allow_sign) {
  std::size_t i = 0;
  if (allow_sign && !s.empty() && s[0] == '-') i = 1;
  if (i >= s.size()) return false;
  for (; i < s.size(); ++i)
    if (s[i] < '0' || s[i] > '9') return false;
  return true;
}

inline QRational parse_rational_json(const Json& j) {
  exact_keys(j, {"num", "den"}, "rational");
  const Json& n = j["num"];
  const Json& d = j["den"];
  if (!n.is_string() || !d.is_string()) malformed("rational parts must be strings");
  const auto ns = n.get<std::string>();
  const auto ds = d.get<std::string>();
  if (!decimal(ns, true) || !decimal(ds, true)) malformed("rational parts must be decimal integers");
  BigInt num(ns, 10), den(ds, 10);
  if (den == 0) violated("rational with zero denominator");
  if (den < 0) violated("rational with negative denominator");
  QRational v(num, den);
  if (!is_canonical(v)) violated("rational " + ns + "/" + ds + " not in lowest terms");
  if (num.get_str() != ns || den.get_str() != ds) violated("rational digits not canonical");
  return v;
}

inline QPoint parse_point(const Json& j) {
  exact_keys(j, {"x", "y"}, "point");
  return {parse_rational_json(j["x"]), parse_rational_json(j["y"])};
}

inline QDisc parse_disc(const Json& j) {
  exact_keys(j, {"center", "radius", "kind"}, "disc");
  QDisc d;
  d.center = parse_point(j["center"]);
  d.radius = parse_rational_json(j["radius"]);
  const Json& k = j["kind"];
  if (!k.is_string()) malformed("disc kind must be a string");
  if (k == "open") d.kind = DiscKind::open;
  else if (k == "closed") d.kind = DiscKind::closed;
  else malformed("disc kind must be open or closed");
  if (d.radius <= 0) violated("disc radius must be > 0");
  return d;
}

inline std::uint64_t parse_uint(const Json& j, const char* what) {
  if (!j.is_number_unsigned()) malformed(std::string(what) + " must be a nonnegative integer");
  return j.get<std::uint64_t>();
}

inline Json parse_json(std::string_view bytes) {
  try {
    return Json::parse(bytes.begin(), bytes.end());
  } catch (const nlohmann::json::exception& e) {
    malformed(e.what());
  }
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace io_detail

inline Json to_json(const Provenance& p) {
  Json j;
  j["tool_version"] = p.tool_version;
  j["seed"] = p.seed;
  Json params = Json::object();
  for (const auto& [k, v] : p.parameters) params[k] = v;  // std::map: sorted
  j["parameters"] = params;
  return j;
}

inline Json to_json(const CheeseDescription& c) {
  using namespace io_detail;
  Json j;
  j["format"] = "cheese";
  j["format_version"] = kFormatVersion;
  j["outer"] = disc(c.outer);
  Json stages = Json::array();
  for (const auto& st : c.stage_records) {
    Json s;
    s["m"] = st.m;
    s["delta"] = rational(st.delta);
    s["epsilon"] = rational(st.epsilon);
    s["N"] = st.N;
    s["trunc_discs"] = st.trunc_discs;
    s["trunc_subdiscs"] = st.trunc_subdiscs;
    s["root_precision"] = st.root_precision;
    stages.push_back(std::move(s));
  }
  j["stages"] = std::move(stages);
  Json dels = Json::array();
  for (const auto& d : c.deletions) {
    Json e;
    e["stage"] = d.stage;
    e["parent_index"] = d.parent_index;
    e["center_x"] = rational(d.disc.center.x);
    e["center_y"] = rational(d.disc.center.y);
    e["radius"] = rational(d.disc.radius);
    dels.push_back(std::move(e));
  }
  j["deletions"] = std::move(dels);
  Json table;
  table["block_boundaries"] = c.bound_table.block_boundaries;
  Json entries = Json::array();
  for (const auto& [k, a] : c.bound_table.entries) {
    Json e;
    e["k"] = k;
    e["A"] = rational(a);
    entries.push_back(std::move(e));
  }
  table["entries"] = std::move(entries);
  j["bound_table"] = std::move(table);
  Provenance p = c.provenance;
  if (p.tool_version.empty()) p.tool_version = kToolVersion;
  j["provenance"] = to_json(p);
  return j;
}

/// Canonical CheeseFileV1 bytes.
inline std::string emit(const CheeseDescription& c) { return io_detail::dump(to_json(c)); }

struct ParseOptions {
  /// Re-run verify_schedule on load and reject failing documents.
  bool revalidate = true;
};

inline CheeseDescription parse(std::string_view bytes, const ParseOptions& opts = {}) {
  using namespace io_detail;
  Json j = parse_json(bytes);
  if (!j.is_object()) malformed("document must be an object");
  const Json& fmt = field(j, "format");
  if (fmt != "cheese") malformed("not a cheese document");
  const Json& ver = field(j, "format_version");
  if (!ver.is_number_integer()) malformed("format_version must be an integer");
  if (ver.get<long>() != kFormatVersion)
    throw Error(ErrorKind::unsupported_version, "format_version " + ver.dump());
  exact_keys(j, {"format", "format_version", "outer", "stages", "deletions", "bound_table", "provenance"}, "document");

  CheeseDescription c;
  c.outer = parse_disc(j["outer"]);

  const Json& stages = j["stages"];
  if (!stages.is_array()) malformed("stages must be an array");
  for (const auto& s : stages) {
    exact_keys(s, {"m", "delta", "epsilon", "N", "trunc_discs", "trunc_subdiscs", "root_precision"}, "stage");
    StageParams st;
    st.m = parse_uint(s["m"], "m");
    st.delta = parse_rational_json(s["delta"]);
    st.epsilon = parse_rational_json(s["epsilon"]);
    st.N = parse_uint(s["N"], "N");
    st.trunc_discs = parse_uint(s["trunc_discs"], "trunc_discs");
    st.trunc_subdiscs = parse_uint(s["trunc_subdiscs"], "trunc_subdiscs");
    const auto t = parse_uint(s["root_precision"], "root_precision");
    if (t == 0 || t > kMaxRootPrecision) violated("root_precision out of range");
    st.root_precision = static_cast<unsigned>(t);
    if (st.m == 0) violated("stage index must be >= 1");
    if (st.epsilon <= 0) violated("epsilon must be > 0");
    c.stage_records.push_back(std::move(st));
  }

  const Json& dels = j["deletions"];
  if (!dels.is_array()) malformed("deletions must be an array");
  for (const auto& e : dels) {
    exact_keys(e, {"stage", "parent_index", "center_x", "center_y", "radius"}, "deletion");
    Deletion d;
    d.stage = parse_uint(e["stage"], "stage");
    d.parent_index = parse_uint(e["parent_index"], "parent_index");
    d.disc.center = {parse_rational_json(e["center_x"]), parse_rational_json(e["center_y"])};
    d.disc.radius = parse_rational_json(e["radius"]);
    d.disc.kind = DiscKind::open;
    if (d.disc.radius <= 0) violated("deleted disc radius must be > 0");
    c.deletions.push_back(std::move(d));
  }

  const Json& table = j["bound_table"];
  exact_keys(table, {"block_boundaries", "entries"}, "bound_table");
  if (!table["block_boundaries"].is_array()) malformed("block_boundaries must be an array");
  for (const auto& b : table["block_boundaries"]) c.bound_table.block_boundaries.push_back(parse_uint(b, "block boundary"));
  if (!table["entries"].is_array()) malformed("entries must be an array");
  unsigned long prev_k = 0;
  for (const auto& e : table["entries"]) {
    exact_keys(e, {"k", "A"}, "bound entry");
    const auto k = parse_uint(e["k"], "k");
    if (k <= prev_k) violated("bound entries must be strictly increasing in k");
    QRational a = parse_rational_json(e["A"]);
    if (a <= 0) violated("A_k must be > 0");
    c.bound_table.entries[k] = std::move(a);
    prev_k = k;
  }

  const Json& prov = j["provenance"];
  exact_keys(prov, {"tool_version", "seed", "parameters"}, "provenance");
  if (!prov["tool_version"].is_string()) malformed("tool_version must be a string");
  c.provenance.tool_version = prov["tool_version"].get<std::string>();
  c.provenance.seed = parse_uint(prov["seed"], "seed");
  if (!prov["parameters"].is_object()) malformed("parameters must be an object");
  for (const auto& [k, v] : prov["parameters"].items()) {
    if (!v.is_string()) malformed("parameter values must be strings");
    c.provenance.parameters[k] = v.get<std::string>();
  }

  if (opts.revalidate) {
    VerificationReport rep = verify_schedule(c);
    for (const auto& chk : rep.checks)
      if (!chk.passed) violated("check '" + chk.name + "' failed" + (chk.detail.empty() ? "" : ": " + chk.detail));
  }
  return c;
}

// ---- certificates --------------------------------------------------------

inline Json to_json(const ContinuityCertificate& cert, const Provenance& prov = {}) {
  using namespace io_detail;
  Json j;
  j["format"] = "continuity-certificate";
  j["format_version"] = kFormatVersion;
  j["z"] = point(cert.z);
  j["w"] = point(cert.w);
  j["stage"] = cert.stage;
  j["disc"] = disc(cert.disc);
  j["enumeration_index"] = cert.enumeration_index;
  Provenance p = prov;
  if (p.tool_version.empty()) p.tool_version = kToolVersion;
  j["provenance"] = to_json(p);
  return j;
}

inline std::string emit_certificate(const ContinuityCertificate& cert, const Provenance& prov = {}) {
  return io_detail::dump(to_json(cert, prov));
}

inline ContinuityCertificate parse_certificate(std::string_view bytes) {
  using namespace io_detail;
  Json j = parse_json(bytes);
  if (!j.is_object() || field(j, "format") != "continuity-certificate") malformed("not a certificate document");
  const Json& ver = field(j, "format_version");
  if (!ver.is_number_integer() || ver.get<long>() != kFormatVersion)
    throw Error(ErrorKind::unsupported_version, "format_version " + ver.dump());
  exact_keys(j, {"format", "format_version", "z", "w", "stage", "disc", "enumeration_index", "provenance"},
             "certificate");
  ContinuityCertificate cert;
  cert.z = parse_point(j["z"]);
  cert.w = parse_point(j["w"]);
  cert.stage = parse_uint(j["stage"], "stage");
  cert.disc = parse_disc(j["disc"]);
  cert.enumeration_index = parse_uint(j["enumeration_index"], "enumeration_index");
  return cert;
}

// ---- reports -------------------------------------------------------------

inline Json to_json(const VerificationReport& rep) {
  Json j;
  j["format"] = "verification-report";
  j["ok"] = rep.ok();
  Json checks = Json::array();
  for (const auto& c : rep.checks) {
    Json e;
    e["name"] = c.name;
    e["passed"] = c.passed;
    e["detail"] = c.detail;
    checks.push_back(std::move(e));
  }
  j["checks"] = std::move(checks);
  return j;
}

inline std::string emit_report(const VerificationReport& rep) { return io_detail::dump(to_json(rep)); }

// ---- SVG -----------------------------------------------------------------

struct SvgOptions {
  int width_px = 800;
  std::vector<std::string> stage_colors = {"#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  bool show_interval = true;
  /// Draw K_m for every recorded stage m.
  bool show_capsules = false;
  /// Free text placed in the <desc> element (run provenance).
  std::string description;
};

namespace io_detail {

inline std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s(buf);
  if (s == "-0.000000") s = "0.000000";
  return s;
}

inline std::string xml_escape(std::string_view in) {
  std::string out;
  for (char ch : in) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

}  // namespace io_detail

/// SVG 1.1 figure of the cheese: the outer circle, I, optional capsules and
/// one circle element per deletion, coloured by stage.
inline std::string render_svg(const CheeseDescription& c, const SvgOptions& opt = {}) {
  using io_detail::num;
  if (opt.width_px <= 0) throw Error(ErrorKind::invalid_input, "width must be positive");
  const double w = opt.width_px;
  const double scale = w / 2.2;
  auto px = [&](const QRational& x) { return w / 2 + to_double(x) * scale; };
  auto py = [&](const QRational& y) { return w / 2 - to_double(y) * scale; };
  auto len = [&](const QRational& r) { return to_double(r) * scale; };

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + std::to_string(opt.width_px) +
       "\" height=\"" + std::to_string(opt.width_px) + "\" viewBox=\"0 0 " + std::to_string(opt.width_px) + " " +
       std::to_string(opt.width_px) + "\">\n";
  s += "  <title>Swiss cheese, " + std::to_string(c.stage_records.size()) + " stages, " +
       std::to_string(c.deletions.size()) + " deleted discs</title>\n";
  if (!opt.description.empty()) s += "  <desc>" + io_detail::xml_escape(opt.description) + "</desc>\n";
  s += "  <rect x=\"0\" y=\"0\" width=\"" + std::to_string(opt.width_px) + "\" height=\"" +
       std::to_string(opt.width_px) + "\" fill=\"white\"/>\n";
  s += "  <circle cx=\"" + num(px(c.outer.center.x)) + "\" cy=\"" + num(py(c.outer.center.y)) + "\" r=\"" +
       num(len(c.outer.radius)) + "\" fill=\"#f5e6a8\" stroke=\"black\" stroke-width=\"1\"/>\n";
  if (opt.show_capsules) {
    for (auto it = c.stage_records.rbegin(); it != c.stage_records.rend(); ++it) {
      const QRational d = delta(it->m);
      const double r = len(d);
      s += "  <path d=\"M " + num(px(q(-1, 2))) + " " + num(py(d)) + " L " + num(px(q(1, 2))) + " " + num(py(d)) +
           " A " + num(r) + " " + num(r) + " 0 0 1 " + num(px(q(1, 2))) + " " + num(py(-d)) + " L " +
           num(px(q(-1, 2))) + " " + num(py(-d)) + " A " + num(r) + " " + num(r) + " 0 0 1 " + num(px(q(-1, 2))) +
           " " + num(py(d)) + " Z\" fill=\"none\" stroke=\"#888888\" stroke-dasharray=\"4 3\" stroke-width=\"0.8\"/>\n";
    }
  }
  for (const auto& del : c.deletions) {
    const auto& colors = opt.stage_colors;
    const std::string color = colors.empty() ? "#000000" : colors[(del.stage - 1) % colors.size()];
    s += "  <circle cx=\"" + num(px(del.disc.center.x)) + "\" cy=\"" + num(py(del.disc.center.y)) + "\" r=\"" +
         num(len(del.disc.radius)) + "\" fill=\"white\" stroke=\"" + color + "\" stroke-width=\"0.5\"/>\n";
  }
  if (opt.show_interval)
    s += "  <line x1=\"" + num(px(q(-1, 2))) + "\" y1=\"" + num(py(0)) + "\" x2=\"" + num(px(q(1, 2))) + "\" y2=\"" +
         num(py(0)) + "\" stroke=\"black\" stroke-width=\"2\"/>\n";
  s += "</svg>\n";
  return s;
}

}  // namespace cheese
