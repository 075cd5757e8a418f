// fpslab: command-line front end for the series, capacity and restriction
// experiments. Every report starts with the resolved configuration; the body
// depends only on that configuration, never on --threads.
//
// Exit codes: 0 success (whatever the verdicts), 1 I/O failure, 2 malformed
// input or violated precondition.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "fpslab/io.hpp"

using namespace fpslab;
using io::json;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  int order = -1;  // -1: command default
  std::string format = "json";
  std::string out;
  int threads = 1;
  std::string config_path;
  std::vector<std::string> overrides;
};

struct Report {
  std::string command;
  json params = json::object();
  json result;
  std::string csv;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::vector<cplx> parse_complex_list(const std::string& text) {
  std::vector<cplx> out;
  for (const auto& part : split(text, ',')) out.push_back(parse_complex(part));
  return out;
}

double parse_real(const std::string& text) {
  const cplx z = parse_complex(text);
  if (z.imag() != 0.0) throw std::invalid_argument("expected a real number, got '" + text + "'");
  return z.real();
}

/// circle | circle:r | segment:a,b | arc:r,t0,t1 | finite:z1,z2,... |
/// reals:a,b,n | angles:n
SampleSet builtin_set(const std::string& spec, double density) {
  const auto colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string rest = colon == std::string::npos ? "" : spec.substr(colon + 1);
  const auto args = rest.empty() ? std::vector<std::string>{} : split(rest, ',');
  const auto need = [&](std::size_t n) {
    if (args.size() != n) throw std::invalid_argument("builtin set '" + spec + "' expects " + std::to_string(n) + " values");
  };
  if (kind == "circle") {
    if (args.empty()) return unit_circle(density);
    need(1);
    return disk_sample(0.0, parse_real(args[0]), density);
  }
  if (kind == "segment") {
    need(2);
    return segment_sample(parse_complex(args[0]), parse_complex(args[1]), density);
  }
  if (kind == "arc") {
    need(3);
    return arc_sample(parse_real(args[0]), parse_real(args[1]), parse_real(args[2]), density);
  }
  if (kind == "finite") return finite_set(parse_complex_list(rest));
  if (kind == "reals" || kind == "angles") {
    double a = 0.0, b = 2.0 * kPi;
    int n = 0;
    if (kind == "reals") {
      need(3);
      a = parse_real(args[0]);
      b = parse_real(args[1]);
      n = std::stoi(args[2]);
    } else {
      need(1);
      n = std::stoi(args[0]);
    }
    if (n < 1) throw std::invalid_argument("builtin set needs a positive count");
    std::vector<cplx> pts;
    for (int k = 0; k < n; ++k) {
      const double t = kind == "reals" ? (n == 1 ? a : a + (b - a) * k / (n - 1)) : 2.0 * kPi * k / n;
      pts.push_back(t);
    }
    return SampleSet(pts, spec);
  }
  throw std::invalid_argument("unknown builtin set '" + spec + "'");
}

struct SetOptions {
  std::string path;
  std::string builtin;
  double density = kDefaultDensity;

  void add(CLI::App* app, const std::string& default_builtin = "") {
    builtin = default_builtin;
    app->add_option("--set", path, "sample-set JSON file");
    app->add_option("--builtin", builtin, "circle[:r] | segment:a,b | arc:r,t0,t1 | finite:z,... | reals:a,b,n | angles:n");
    app->add_option("--density", density, "boundary points per unit length for builtin sets");
  }

  bool given() const { return !path.empty() || !builtin.empty(); }

  SampleSet load(json& params) const {
    if (!path.empty()) {
      params["set"] = path;
      return io::sample_set_from_json(io::read_json(path));
    }
    if (builtin.empty()) throw std::invalid_argument("a sample set is required (--set or --builtin)");
    params["builtin"] = builtin;
    params["density"] = density;
    return builtin_set(builtin, density);
  }
};

Series1 load_series1(const std::string& path) { return io::series1_from_json(io::read_json(path)); }
Series2 load_series2(const std::string& path) { return io::series2_from_json(io::read_json(path)); }

DiagnosticConfig resolve_config(const Globals& g) {
  DiagnosticConfig cfg;
  if (!g.config_path.empty()) {
    const json j = io::read_json(g.config_path);
    cfg = io::config_from_json(j.contains("diagnostics") ? j.at("diagnostics") : j, cfg);
  }
  for (const auto& kv : g.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("override must be key=value: '" + kv + "'");
    json j;
    const std::string key = kv.substr(0, eq);
    const double v = parse_real(kv.substr(eq + 1));
    if (key == "min_window" || key == "window_length")
      j[key] = static_cast<int>(v);
    else
      j[key] = v;
    if (!io::to_json(DiagnosticConfig{}).contains(key)) throw std::invalid_argument("unknown config key '" + key + "'");
    cfg = io::config_from_json(j, cfg);
  }
  cfg.threads = g.threads;
  return cfg;
}

std::string render(const Globals& g, const DiagnosticConfig& cfg, const Report& r) {
  json config = {{"command", r.command},
                 {"seed", g.seed},
                 {"order", g.order},
                 {"format", g.format},
                 {"diagnostics", io::to_json(cfg)},
                 {"params", r.params}};
  if (g.format == "csv") {
    if (r.csv.empty()) throw std::invalid_argument("command '" + r.command + "' has no CSV form");
    return "# config: " + config.dump() + "\n" + r.csv;
  }
  json doc = {{"config", config}, {"result", r.result}};
  return doc.dump(2) + "\n";
}

int order_or(const Globals& g, int fallback) { return g.order >= 0 ? g.order : fallback; }

void ledger_rows(const std::vector<std::pair<std::string, const MagnitudeLedger*>>& cols, std::string& csv) {
  csv = "n";
  for (const auto& c : cols) csv += "," + c.first;
  csv += "\n";
  std::size_t len = 0;
  for (const auto& c : cols) len = std::max(len, c.second->size());
  for (std::size_t n = 0; n < len; ++n) {
    csv += std::to_string(n);
    for (const auto& c : cols) csv += "," + (n < c.second->size() ? io::number((*c.second)[static_cast<int>(n)]) : "");
    csv += "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fpslab: truncated power series, capacity and restriction experiments"};
  // --h names a series, so help is long-form only.
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "random seed")->capture_default_str();
  app.add_option("--order", g.order, "truncation order (command default when omitted)");
  app.add_option("--format", g.format, "json | csv")->check(CLI::IsMember({"json", "csv"}))->capture_default_str();
  app.add_option("--out", g.out, "output file (stdout when omitted)");
  app.add_option("--threads", g.threads, "worker threads for sweeps")->check(CLI::PositiveNumber);
  app.add_option("--config", g.config_path, "JSON file of diagnostic thresholds");
  app.add_option("--param", g.overrides, "override a diagnostic threshold, key=value");
  app.fallthrough();

  Report report;
  std::function<void(const DiagnosticConfig&)> action;

  // ----------------------------------------------------------------- series
  auto* series = app.add_subcommand("series", "series-core operations");
  series->require_subcommand(1);
  series->fallthrough();
  std::string g_path, h_path, u_path;
  int sigma = 1, tau = 1, nu = 1;
  std::string s_text = "1", theta_text = "0", out_dir;

  auto* compose_cmd = series->add_subcommand("compose", "g(x, h(x))");
  compose_cmd->add_option("--g", g_path, "two-variable series")->required();
  compose_cmd->add_option("--h", h_path, "one-variable series with h(0) = 0")->required();
  compose_cmd->callback([&] {
    action = [&](const DiagnosticConfig&) {
      report.command = "series compose";
      report.params = {{"g", g_path}, {"h", h_path}};
      const Series1 r = compose(load_series2(g_path), load_series1(h_path));
      report.result = io::to_json(r);
      report.csv = io::series_csv(r);
    };
  });

  auto* subst_cmd = series->add_subcommand("substitute", "g(s^sigma x, s^tau h(x))");
  subst_cmd->add_option("--g", g_path)->required();
  subst_cmd->add_option("--h", h_path)->required();
  subst_cmd->add_option("--sigma", sigma)->required();
  subst_cmd->add_option("--tau", tau)->required();
  subst_cmd->add_option("--s", s_text, "complex parameter, e.g. 2+0i")->required();
  subst_cmd->callback([&] {
    action = [&](const DiagnosticConfig&) {
      report.command = "series substitute";
      report.params = {{"g", g_path}, {"h", h_path}, {"sigma", sigma}, {"tau", tau}, {"s", s_text}};
      const Series1 r =
          anisotropic_substitute(load_series2(g_path), load_series1(h_path), WeightPair(sigma, tau), parse_complex(s_text));
      report.result = io::to_json(r);
      report.csv = io::series_csv(r);
    };
  });

  auto* revert_cmd = series->add_subcommand("revert", "compositional inverse of u");
  revert_cmd->add_option("--u", u_path)->required();
  revert_cmd->callback([&] {
    action = [&](const DiagnosticConfig&) {
      report.command = "series revert";
      report.params = {{"u", u_path}};
      const Series1 r = reversion(load_series1(u_path));
      report.result = io::to_json(r);
      report.csv = io::series_csv(r);
    };
  });

  auto* root_cmd = series->add_subcommand("root", "beta with beta^nu = w");
  root_cmd->add_option("--w", u_path)->required();
  root_cmd->add_option("--nu", nu)->required();
  root_cmd->callback([&] {
    action = [&](const DiagnosticConfig&) {
      report.command = "series root";
      report.params = {{"w", u_path}, {"nu", nu}};
      const Series1 r = nth_root(load_series1(u_path), nu);
      report.result = io::to_json(r);
      report.csv = io::series_csv(r);
    };
  });

  auto* rotate_cmd = series->add_subcommand("rotate", "f(x cos t - y sin t, x sin t + y cos t)");
  rotate_cmd->add_option("--g", g_path)->required();
  rotate_cmd->add_option("--theta", theta_text)->required();
  rotate_cmd->callback([&] {
    action = [&](const DiagnosticConfig&) {
      report.command = "series rotate";
      report.params = {{"g", g_path}, {"theta", theta_text}};
      const Series2 r = rotate2(load_series2(g_path), parse_real(theta_text));
      report.result = io::to_json(r);
      report.csv = io::series_csv(r);
    };
  });

  auto* slice_cmd = series->add_subcommand("slice", "weighted slices g_q");
  slice_cmd->add_option("--g", g_path)->required();
  slice_cmd->add_option("--sigma", sigma)->required();
  slice_cmd->add_option("--tau", tau)->required();
  slice_cmd->add_option("--out-dir", out_dir, "also write one file per slice, slice_q<q>.json");
  slice_cmd->callback([&] {
    action = [&](const DiagnosticConfig&) {
      report.command = "series slice";
      report.params = {{"g", g_path}, {"sigma", sigma}, {"tau", tau}};
      const SliceDecomposition dec = slices(load_series2(g_path), WeightPair(sigma, tau));
      if (!out_dir.empty()) std::filesystem::create_directories(out_dir);
      json arr = json::array();
      report.csv = "q,i,j,re,im\n";
      for (const Slice& s : dec.slices()) {
        if (s.part.is_zero()) continue;
        arr.push_back(io::to_json(s));
        for (const auto& [i, j] : s.support)
          if (const cplx a = s.part.at(i, j); a != cplx{})
            report.csv += std::to_string(s.q) + "," + std::to_string(i) + "," + std::to_string(j) + "," +
                          io::number(a.real()) + "," + io::number(a.imag()) + "\n";
        if (!out_dir.empty())
          io::write_text((std::filesystem::path(out_dir) / ("slice_q" + std::to_string(s.q) + ".json")).string(),
                         io::to_json(s.part).dump(2) + "\n");
      }
      report.result = {{"slices", arr}};
    };
  });

  auto* dtable_cmd = series->add_subcommand("dtable", "coefficients d_pq of g(s^sigma x, s^tau h(x))");
  dtable_cmd->add_option("--g", g_path)->required();
  dtable_cmd->add_option("--h", h_path)->required();
  dtable_cmd->add_option("--sigma", sigma)->required();
  dtable_cmd->add_option("--tau", tau)->required();
  dtable_cmd->callback([&] {
    action = [&](const DiagnosticConfig&) {
      report.command = "series dtable";
      report.params = {{"g", g_path}, {"h", h_path}, {"sigma", sigma}, {"tau", tau}};
      const DTable d = d_table(load_series2(g_path), load_series1(h_path), WeightPair(sigma, tau));
      report.result = io::to_json(d);
      report.csv = io::dtable_csv(d);
    };
  });

  // --------------------------------------------------------------- capacity
  auto* capacity = app.add_subcommand("capacity", "potential-theory estimates on sample sets");
  capacity->require_subcommand(1);
  capacity->fallthrough();
  SetOptions set_opts;
  std::size_t n_points = 16;
  double R = 2.0;
  std::string start_text;

  auto* leja_cmd = capacity->add_subcommand("leja", "greedy Leja points");
  set_opts.add(leja_cmd);
  leja_cmd->add_option("--n", n_points)->required();
  leja_cmd->add_option("--start", start_text, "start near this point instead of the largest modulus");
  leja_cmd->callback([&] {
    action = [&](const DiagnosticConfig&) {
      report.command = "capacity leja";
      const SampleSet E = set_opts.load(report.params);
      report.params["n"] = n_points;
      std::optional<cplx> start;
      if (!start_text.empty()) {
        start = parse_complex(start_text);
        report.params["start"] = start_text;
      }
      const LejaSequence seq = leja_points(E, n_points, start);
      json pts = json::array();
      report.csv = "k,re,im,index,logprod\n";
      for (std::size_t k = 0; k < seq.points.size(); ++k) {
        pts.push_back({{"point", io::cplx_json(seq.points[k])}, {"index", seq.indices[k]}, {"logprod", seq.logprods[k]}});
        report.csv += std::to_string(k) + "," + io::number(seq.points[k].real()) + "," +
                      io::number(seq.points[k].imag()) + "," + std::to_string(seq.indices[k]) + "," +
                      io::number(seq.logprods[k]) + "\n";
      }
      report.result = {{"points", pts}};
    };
  });

  auto* diam_cmd = capacity->add_subcommand("diameter", "transfinite diameter and capacity estimate");
  set_opts.add(diam_cmd);
  diam_cmd->add_option("--n", n_points)->required();
  diam_cmd->callback([&] {
    action = [&](const DiagnosticConfig&) {
      report.command = "capacity diameter";
      const SampleSet E = set_opts.load(report.params);
      report.params["n"] = n_points;
      const DiameterReport d = transfinite_diameter(E, n_points);
      report.result = {{"sequence", d.sequence},
                       {"d_n", d.d_n},
                       {"extrapolated", d.extrapolated},
                       {"capacity", d.capacity},
                       {"finite_set", d.finite_set}};
      report.csv = "k,d_k\n";
      for (std::size_t k = 0; k < d.sequence.size(); ++k)
        report.csv += std::to_string(k + 2) + "," + io::number(d.sequence[k]) + "\n";
    };
  });

  auto* bern_cmd = capacity->add_subcommand("bernstein", "Bernstein constant max e^u on |z| = R");
  set_opts.add(bern_cmd);
  bern_cmd->add_option("--R", R)->required();
  bern_cmd->callback([&] {
    action = [&](const DiagnosticConfig&) {
      report.command = "capacity bernstein";
      const SampleSet E = set_opts.load(report.params);
      report.params["R"] = R;
      const BernsteinConstant c = bernstein_constant(E, R);
      report.result = {{"C", c.C}, {"log_C", std::log(c.C)}, {"R", c.R}, {"argmax", io::cplx_json(c.argmax)}, {"model", c.model}};
      report.csv = "C,R,argmax_re,argmax_im,model\n" + io::number(c.C) + "," + io::number(c.R) + "," +
                   io::number(c.argmax.real()) + "," + io::number(c.argmax.imag()) + "," + c.model + "\n";
    };
  });

  auto* monic_cmd = capacity->add_subcommand("monic", "small-sup monic polynomial and its Bernstein margin");
  set_opts.add(monic_cmd);
  monic_cmd->add_option("--n", n_points)->required();
  monic_cmd->add_option("--R", R, "circle radius for the Bernstein constant (skip when omitted)");
  monic_cmd->callback([&] {
    action = [&](const DiagnosticConfig&) {
      report.command = "capacity monic";
      const SampleSet E = set_opts.load(report.params);
      report.params["n"] = n_points;
      const MonicPolynomial p = small_sup_monic(E, n_points);
      json coeffs = json::array();
      for (const cplx& c : p.coeffs) coeffs.push_back(io::cplx_json(c));
      report.result = {{"coeffs", coeffs}, {"sup", p.sup}, {"sup_root_n", std::pow(p.sup, 1.0 / n_points)}};
      report.csv = "k,re,im\n";
      for (std::size_t k = 0; k < p.coeffs.size(); ++k)
        report.csv += std::to_string(k) + "," + io::number(p.coeffs[k].real()) + "," + io::number(p.coeffs[k].imag()) + "\n";
      if (monic_cmd->count("--R") > 0) {
        report.params["R"] = R;
        const BernsteinConstant c = bernstein_constant(E, R);
        const BernsteinMargin m = bernstein_check(p.coeffs, E, c.C);
        report.result["bernstein"] = {{"C", c.C}, {"margin", io::num(m.margin)}, {"holds", m.holds}};
      }
    };
  });

  // ------------------------------------------------------------------ paper
  auto* paper = app.add_subcommand("paper", "counterexample generators and theorem scenarios");
  paper->require_subcommand(1);
  paper->fallthrough();
  std::string e_text = "1,-1";
  double delta_power = 1.0;
  int safe_degree = 60, ledger_order = 200, k_exp = 2;
  std::string phi_name = "power";

  const auto instance_report = [&](const ExampleInstance& inst, const DiagnosticConfig& cfg) {
    report.result = io::to_json(inst, cfg);
    std::vector<std::pair<std::string, const MagnitudeLedger*>> cols{{"g", &inst.g_ledger}, {"h", &inst.h_ledger}};
    if (inst.phi) cols.emplace_back("phi", &inst.phi_ledger);
    ledger_rows(cols, report.csv);
  };

  auto* ex31 = paper->add_subcommand("example31", "finite E: bounded restrictions, divergent g");
  ex31->add_option("--E", e_text, "comma-separated complex points")->capture_default_str();
  ex31->add_option("--delta-power", delta_power, "delta_n = n^-a")->capture_default_str();
  ex31->add_option("--safe-degree", safe_degree)->capture_default_str();
  ex31->callback([&] {
    action = [&](const DiagnosticConfig& cfg) {
      report.command = "paper example31";
      Example31Spec spec;
      spec.E = parse_complex_list(e_text);
      if (!(delta_power > 0.0)) throw precondition_error("delta_n must decrease to 0: need a positive power");
      spec.delta = [a = delta_power](int n) { return std::pow(static_cast<double>(n), -a); };
      spec.delta_label = "n^-" + io::number(delta_power);
      spec.order = order_or(g, 200);
      spec.safe_degree = safe_degree;
      report.params = {{"E", e_text}, {"delta_power", delta_power}, {"safe_degree", safe_degree}};
      instance_report(gen_example31(spec), cfg);
    };
  });

  const auto generator_options = [&](int default_order) {
    GeneratorOptions opt;
    opt.order = order_or(g, default_order);
    opt.safe_degree = std::max(safe_degree, opt.order);
    opt.ledger_order = ledger_order;
    opt.seed = g.seed;
    return opt;
  };

  auto* ex32 = paper->add_subcommand("example32", "monomial curve: vanishing restrictions, divergent g");
  ex32->add_option("--k", k_exp)->capture_default_str();
  ex32->add_option("--sigma", sigma)->capture_default_str();
  ex32->add_option("--phi", phi_name, "power (n^n) | factorial (n!)")
      ->check(CLI::IsMember({"power", "factorial"}))
      ->capture_default_str();
  ex32->add_option("--ledger-order", ledger_order)->capture_default_str();
  ex32->callback([&] {
    action = [&](const DiagnosticConfig& cfg) {
      report.command = "paper example32";
      report.params = {{"k", k_exp}, {"sigma", sigma}, {"phi", phi_name}, {"ledger_order", ledger_order}};
      const auto fam = phi_name == "power" ? DivergentFamily::power : DivergentFamily::factorial;
      instance_report(gen_example32(k_exp, sigma, fam, generator_options(30)), cfg);
    };
  });

  int ex33_sigma = 1, ex33_tau = -1;
  auto* ex33 = paper->add_subcommand("example33", "negative weight: restriction is x^(sigma+|tau|)");
  ex33->add_option("--sigma", ex33_sigma)->capture_default_str();
  ex33->add_option("--tau", ex33_tau, "tau <= 0")->capture_default_str();
  ex33->add_option("--u", u_path, "series u with u'(0) = 1 (default x + sum n! x^n)");
  ex33->add_option("--safe-degree", safe_degree)->capture_default_str();
  ex33->callback([&] {
    action = [&](const DiagnosticConfig& cfg) {
      report.command = "paper example33";
      report.params = {{"sigma", ex33_sigma}, {"tau", ex33_tau}, {"u", u_path}, {"safe_degree", safe_degree}};
      std::optional<Series1> u;
      if (!u_path.empty()) u = load_series1(u_path);
      instance_report(gen_example33(WeightPair(ex33_sigma, ex33_tau), u, generator_options(30)), cfg);
    };
  });

  auto* ex33b = paper->add_subcommand("example33b", "weights (0, 1): restriction is s x^2");
  ex33b->add_option("--h", h_path, "series h with h'(0) != 0 (default x + sum n! x^n)");
  ex33b->add_option("--safe-degree", safe_degree)->capture_default_str();
  ex33b->callback([&] {
    action = [&](const DiagnosticConfig& cfg) {
      report.command = "paper example33b";
      report.params = {{"h", h_path}, {"safe_degree", safe_degree}};
      std::optional<Series1> h;
      if (!h_path.empty()) h = load_series1(h_path);
      instance_report(gen_example33b(h, generator_options(30)), cfg);
    };
  });

  SetOptions scen_set;
  bool have_weights = false;
  const std::pair<const char*, const char*> scenarios[] = {
      {"thm11", "weighted restrictions over E decide g"},
      {"thm12", "weighted restrictions over E with sigma tau > 0 decide h"},
      {"thm13", "g and g(x, h(x)) convergent force h convergent"},
      {"cor15", "restrictions to dilated curves decide g"},
      {"thm16", "restrictions to rotated curves decide g"},
  };
  for (const auto& [name, what] : scenarios) {
    auto* cmd = paper->add_subcommand(name, std::string(what) + " (seeded convergent fixture unless --g/--h are given)");
    cmd->add_option("--g", g_path);
    cmd->add_option("--h", h_path);
    cmd->add_option("--sigma", sigma);
    cmd->add_option("--tau", tau);
    scen_set.add(cmd);
    const std::string scen = name;
    cmd->callback([&, cmd, scen] {
      have_weights = cmd->count("--sigma") > 0 || cmd->count("--tau") > 0;
      action = [&, scen](const DiagnosticConfig& cfg) {
        report.command = "paper " + scen;
        const ScenarioKind kind = parse_scenario(scen);
        ScenarioInputs in = convergent_fixture(kind, g.seed, order_or(g, 30));
        report.params = {{"fixture_seed", g.seed}};
        if (!g_path.empty()) {
          in.g = load_series2(g_path);
          report.params["g"] = g_path;
        }
        if (!h_path.empty()) {
          in.h = load_series1(h_path);
          report.params["h"] = h_path;
        }
        if (have_weights) in.weights = WeightPair(sigma, tau);
        if (scen_set.given()) in.E = scen_set.load(report.params);
        if (in.weights) report.params["weights"] = {in.weights->sigma(), in.weights->tau()};
        if (in.E) report.params["E_label"] = in.E->label();
        const ScenarioReport r = run_scenario(kind, in, cfg);
        report.result = io::to_json(r);
        report.csv = io::verdict_csv(r.sweep);
      };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    const DiagnosticConfig cfg = resolve_config(g);
    if (!action) throw std::invalid_argument("no command given");
    action(cfg);
    const std::string text = render(g, cfg, report);
    if (g.out.empty())
      std::cout << text;
    else
      io::write_text(g.out, text);
  } catch (const precondition_error& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::out_of_range& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return 2;
  } catch (const io::json::exception& e) {
    std::cerr << "invalid input: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
