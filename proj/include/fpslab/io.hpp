#ifndef FPSLAB_IO_HPP
#define FPSLAB_IO_HPP

// JSON and CSV formats for series, sample sets and reports.
//
// Series:     {"vars": 1|2, "order": N, "terms": [[i, (j,) re, im], ...]}
//             plus an optional "ledger": [L_0, ..., L_N] (null for -inf).
// Sample set: {"label": str, "window": [r0, r1], "points": [[re, im], ...]}
//             plus an optional "shape".

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <variant>

#include <json.hpp>

#include "fpslab/diagnostics.hpp"
#include "fpslab/paperlab.hpp"
#include "fpslab/potential.hpp"
#include "fpslab/series.hpp"

namespace fpslab::io {

using json = nlohmann::json;

/// Shortest round-trip text for a double; "inf", "-inf", "nan" otherwise.
inline std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

/// Non-finite doubles become null.
inline json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

inline json cplx_json(cplx z) { return json::array({num(z.real()), num(z.imag())}); }

inline cplx cplx_from(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw std::invalid_argument("complex value must be [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

// ---------------------------------------------------------------------------
// Series
// ---------------------------------------------------------------------------

inline json to_json(const Series1& s) {
  json terms = json::array();
  for (int n = 0; n <= s.order(); ++n)
    if (s[n] != cplx{}) terms.push_back({n, s[n].real(), s[n].imag()});
  return {{"vars", 1}, {"order", s.order()}, {"terms", terms}};
}

inline json to_json(const Series2& s) {
  json terms = json::array();
  for (int n = 0; n <= s.order(); ++n)
    for (int j = 0; j <= n; ++j)
      if (const cplx a = s.at(n - j, j); a != cplx{}) terms.push_back({n - j, j, a.real(), a.imag()});
  return {{"vars", 2}, {"order", s.order()}, {"terms", terms}};
}

inline json to_json(const MagnitudeLedger& l) {
  json out = json::array();
  for (double v : l.levels()) out.push_back(num(v));
  return out;
}

inline MagnitudeLedger ledger_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("ledger must be an array");
  std::vector<double> out;
  for (const auto& v : j) out.push_back(v.is_null() ? kNegInf : v.get<double>());
  return MagnitudeLedger(std::move(out));
}

using AnySeries = std::variant<Series1, Series2>;

inline AnySeries series_from_json(const json& j) {
  if (!j.is_object() || !j.contains("vars") || !j.contains("order") || !j.contains("terms"))
    throw std::invalid_argument("series JSON needs vars, order and terms");
  const int vars = j.at("vars").get<int>();
  const int order = j.at("order").get<int>();
  if (order < 0) throw std::invalid_argument("series order must be >= 0");
  if (vars == 1) {
    Series1 s(order);
    for (const auto& t : j.at("terms")) {
      if (!t.is_array() || t.size() != 3) throw std::invalid_argument("one-variable term must be [i, re, im]");
      const int i = t[0].get<int>();
      if (i < 0 || i > order) throw std::invalid_argument("term exponent outside the truncation order");
      s[i] += cplx{t[1].get<double>(), t[2].get<double>()};
    }
    return s;
  }
  if (vars == 2) {
    Series2 s(order);
    for (const auto& t : j.at("terms")) {
      if (!t.is_array() || t.size() != 4) throw std::invalid_argument("two-variable term must be [i, j, re, im]");
      const int i = t[0].get<int>();
      const int k = t[1].get<int>();
      if (i < 0 || k < 0 || i + k > order) throw std::invalid_argument("term exponent outside the truncation order");
      s.at(i, k) += cplx{t[2].get<double>(), t[3].get<double>()};
    }
    return s;
  }
  throw std::invalid_argument("series vars must be 1 or 2");
}

inline Series1 series1_from_json(const json& j) {
  AnySeries s = series_from_json(j);
  if (auto* p = std::get_if<Series1>(&s)) return std::move(*p);
  throw std::invalid_argument("expected a one-variable series");
}

inline Series2 series2_from_json(const json& j) {
  AnySeries s = series_from_json(j);
  if (auto* p = std::get_if<Series2>(&s)) return std::move(*p);
  throw std::invalid_argument("expected a two-variable series");
}

// ---------------------------------------------------------------------------
// Sample sets
// ---------------------------------------------------------------------------

inline json to_json(const SampleSet& E) {
  json pts = json::array();
  for (const cplx& z : E.points()) pts.push_back(cplx_json(z));
  json out = {{"label", E.label()}, {"window", {E.window().first, E.window().second}}, {"points", pts}};
  if (const auto* d = std::get_if<DiskShape>(&E.shape()))
    out["shape"] = {{"kind", "disk"}, {"center", cplx_json(d->center)}, {"radius", d->radius}};
  else if (const auto* i = std::get_if<IntervalShape>(&E.shape()))
    out["shape"] = {{"kind", "interval"}, {"a", cplx_json(i->a)}, {"b", cplx_json(i->b)}};
  else if (E.is_finite_set())
    out["shape"] = {{"kind", "finite"}};
  return out;
}

inline SampleSet sample_set_from_json(const json& j) {
  if (!j.is_object() || !j.contains("points")) throw std::invalid_argument("sample set JSON needs points");
  std::vector<cplx> pts;
  for (const auto& p : j.at("points")) pts.push_back(cplx_from(p));
  std::optional<std::pair<double, double>> window;
  if (j.contains("window")) {
    const auto& w = j.at("window");
    if (!w.is_array() || w.size() != 2) throw std::invalid_argument("window must be [r0, r1]");
    window = std::pair{w[0].get<double>(), w[1].get<double>()};
  }
  SetShape shape;
  if (j.contains("shape")) {
    const auto& s = j.at("shape");
    const std::string kind = s.at("kind").get<std::string>();
    if (kind == "disk")
      shape = DiskShape{cplx_from(s.at("center")), s.at("radius").get<double>()};
    else if (kind == "interval")
      shape = IntervalShape{cplx_from(s.at("a")), cplx_from(s.at("b"))};
    else if (kind == "finite")
      shape = FiniteShape{};
    else
      throw std::invalid_argument("unknown shape kind '" + kind + "'");
  }
  return SampleSet(std::move(pts), j.value("label", std::string{}), window, shape);
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

inline json to_json(const DiagnosticConfig& c) {
  return {{"slope_cap", c.slope_cap},
          {"divergence_index", c.divergence_index},
          {"convergence_index", c.convergence_index},
          {"curvature_noise_ratio", c.curvature_noise_ratio},
          {"min_window", c.min_window},
          {"window_length", c.window_length},
          {"probe_radius", c.probe_radius},
          {"flat_ratio", c.flat_ratio},
          {"flat_floor", c.flat_floor},
          {"filtration_cap", c.filtration_cap}};
}

/// Reads the keys present in j over the defaults; threads is not part of the schema.
inline DiagnosticConfig config_from_json(const json& j, DiagnosticConfig c = {}) {
  c.slope_cap = j.value("slope_cap", c.slope_cap);
  c.divergence_index = j.value("divergence_index", c.divergence_index);
  c.convergence_index = j.value("convergence_index", c.convergence_index);
  c.curvature_noise_ratio = j.value("curvature_noise_ratio", c.curvature_noise_ratio);
  c.min_window = j.value("min_window", c.min_window);
  c.window_length = j.value("window_length", c.window_length);
  c.probe_radius = j.value("probe_radius", c.probe_radius);
  c.flat_ratio = j.value("flat_ratio", c.flat_ratio);
  c.flat_floor = j.value("flat_floor", c.flat_floor);
  c.filtration_cap = j.value("filtration_cap", c.filtration_cap);
  return c;
}

inline json to_json(const GrowthReport& r) {
  return {{"verdict", to_string(r.verdict)},
          {"slope", num(r.slope)},
          {"radius", num(r.radius)},
          {"window", {r.window.lo, r.window.hi}},
          {"confidence", r.confidence},
          {"growth_index", num(r.growth_index)}};
}

inline json to_json(const BoundCertificate& c) {
  return {{"filtration_found", c.filtration_found},
          {"valid", c.valid},
          {"note", c.note},
          {"pmax", c.pmax},
          {"n_filter", c.n_filter},
          {"C_E", num(c.C_E)},
          {"R", num(c.R)},
          {"C", num(c.C)},
          {"M", num(c.M)},
          {"worst_log_excess", num(c.worst_log_excess)},
          {"r", num(c.r)},
          {"m", num(c.m)},
          {"L", num(c.L)},
          {"K", num(c.K)},
          {"C_F", num(c.C_F)},
          {"delta", num(c.delta)}};
}

inline json to_json(const SweepReport& s) {
  json rows = json::array();
  for (const auto& r : s.rows) {
    json row = to_json(r.report);
    row["param"] = cplx_json(r.param);
    rows.push_back(row);
  }
  return {{"rows", rows},
          {"all_convergent", s.all_convergent},
          {"g", to_json(s.g_report)},
          {"h", to_json(s.h_report)}};
}

inline json to_json(const HypothesisCheck& c) {
  return {{"name", c.name}, {"satisfied", c.satisfied}, {"message", c.message}};
}

inline json to_json(const IdentityCheck& c) {
  return {{"name", c.name}, {"passed", c.passed}, {"max_error", num(c.max_error)}, {"detail", c.detail}};
}

inline json to_json(const MalgrangeReport& m) {
  return {{"g", to_json(m.g)},
          {"h", to_json(m.h)},
          {"composed", to_json(m.composed)},
          {"premises_hold", m.premises_hold},
          {"consistent", m.consistent},
          {"contrapositive_instance", m.contrapositive_instance},
          {"contrapositive_confirmed", m.contrapositive_confirmed}};
}

inline json to_json(const ScenarioReport& r) {
  json hyp = json::array();
  for (const auto& h : r.hypotheses) hyp.push_back(to_json(h));
  json out = {{"scenario", to_string(r.kind)},
              {"hypotheses", hyp},
              {"hypotheses_satisfied", r.hypotheses_satisfied},
              {"e_map", r.e_map},
              {"sweep", to_json(r.sweep)},
              {"conclusion_target", r.conclusion_target},
              {"conclusion", to_json(r.conclusion)},
              {"consistent", r.consistent},
              {"conjugation_discrepancy", num(r.conjugation_discrepancy)},
              {"warnings", r.warnings}};
  if (r.weights) out["weights"] = {r.weights->sigma(), r.weights->tau()};
  if (r.certificate) out["certificate"] = to_json(*r.certificate);
  if (r.malgrange) out["malgrange"] = to_json(*r.malgrange);
  return out;
}

inline json to_json(const ExampleInstance& inst, const DiagnosticConfig& cfg) {
  json checks = json::array();
  for (const auto& c : inst.checks) checks.push_back(to_json(c));
  json g = to_json(inst.g);
  g["ledger"] = to_json(inst.g_ledger);
  json h = to_json(inst.h);
  h["ledger"] = to_json(inst.h_ledger);
  json out = {{"example", inst.example},
              {"params", inst.params},
              {"weights", {inst.weights.sigma(), inst.weights.tau()}},
              {"g", g},
              {"h", h},
              {"checks", checks},
              {"identities_hold", inst.identities_hold()},
              {"verdicts", {{"g", to_json(growth_classify(inst.g_ledger, cfg))},
                            {"h", to_json(growth_classify(inst.h_ledger, cfg))}}}};
  if (inst.phi) {
    json phi = to_json(*inst.phi);
    phi["ledger"] = to_json(inst.phi_ledger);
    out["phi"] = phi;
    out["verdicts"]["phi"] = to_json(growth_classify(inst.phi_ledger, cfg));
  }
  return out;
}

inline json to_json(const DTable& d) {
  json rows = json::array();
  for (int p = 0; p <= d.rows(); ++p) {
    json row = json::array();
    for (int q = d.q_min(p); q <= d.q_max(p); ++q)
      if (const cplx v = d(p, q); v != cplx{}) row.push_back({q, v.real(), v.imag()});
    rows.push_back({{"p", p}, {"q_min", d.q_min(p)}, {"q_max", d.q_max(p)}, {"entries", row}});
  }
  return {{"weights", {d.weights().sigma(), d.weights().tau()}}, {"rows", rows}};
}

inline json to_json(const Slice& s) {
  json support = json::array();
  for (const auto& [i, j] : s.support) support.push_back({i, j});
  json psi = json::array();
  for (int k = 0; k <= s.psi.order(); ++k) psi.push_back(cplx_json(s.psi[k]));
  return {{"q", s.q},
          {"part", to_json(s.part)},
          {"support", support},
          {"lattice_size", s.lattice_size},
          {"anchor", {s.lambda, s.mu}},
          {"psi", psi},
          {"complete", s.complete}};
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline std::string verdict_csv(const SweepReport& s) {
  std::string out = "param_re,param_im,slope,radius,verdict,confidence\n";
  for (const auto& r : s.rows)
    out += number(r.param.real()) + "," + number(r.param.imag()) + "," + number(r.report.slope) + "," +
           number(r.report.radius) + "," + to_string(r.report.verdict) + "," + number(r.report.confidence) + "\n";
  return out;
}

inline std::string series_csv(const Series1& s) {
  std::string out = "i,re,im\n";
  for (int n = 0; n <= s.order(); ++n)
    if (s[n] != cplx{}) out += std::to_string(n) + "," + number(s[n].real()) + "," + number(s[n].imag()) + "\n";
  return out;
}

inline std::string series_csv(const Series2& s) {
  std::string out = "i,j,re,im\n";
  for (int n = 0; n <= s.order(); ++n)
    for (int j = 0; j <= n; ++j)
      if (const cplx a = s.at(n - j, j); a != cplx{})
        out += std::to_string(n - j) + "," + std::to_string(j) + "," + number(a.real()) + "," + number(a.imag()) + "\n";
  return out;
}

inline std::string dtable_csv(const DTable& d) {
  std::string out = "p,q,re,im\n";
  for (int p = 0; p <= d.rows(); ++p)
    for (int q = d.q_min(p); q <= d.q_max(p); ++q)
      if (const cplx v = d(p, q); v != cplx{})
        out += std::to_string(p) + "," + std::to_string(q) + "," + number(v.real()) + "," + number(v.imag()) + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Files
// ---------------------------------------------------------------------------

inline std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline json read_json(const std::string& path) {
  try {
    return json::parse(read_text(path));
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("malformed JSON in '" + path + "': " + e.what());
  }
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << text;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace fpslab::io

#endif  // FPSLAB_IO_HPP
