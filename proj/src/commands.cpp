#include "reelab/commands.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "reelab/closedform.hpp"
#include "reelab/dicke.hpp"
#include "reelab/dur.hpp"
#include "reelab/inequalities.hpp"
#include "reelab/parallel.hpp"
#include "reelab/serialize.hpp"
#include "reelab/solver.hpp"

namespace reelab {

namespace {

using nlohmann::json;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

json tagged(double value, const std::string& method) {
  json j = {{"method", method}};
  if (std::isfinite(value))
    j["value"] = value;
  else
    j["value"] = value > 0 ? "inf" : "nan";
  return j;
}

QuditComposition parse_kvec(const std::string& text) {
  std::vector<int> counts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      counts.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("--kvec: \"" + text + "\" is not a comma-separated list of integers");
    }
  }
  return QuditComposition(std::move(counts));
}

SolverConfig solver_config(const RunConfig& cfg, std::uint64_t stream = 0) {
  SolverConfig c;
  c.max_outer = cfg.max_iterations;
  c.seed = derive_seed(cfg.seed, stream);
  return c;
}

// A state named by command-line flags.
struct Source {
  std::string label;
  std::optional<DensityOperator> rho;
  std::optional<QuditDickeMixture> mixture;  // symmetric families
  bool qubit_mixture = false;
  std::optional<DurParams> dur;
};

Source resolve_source(const RunConfig& cfg) {
  const int kinds = !cfg.state.empty() + cfg.n.has_value() + !cfg.kvec.empty() + cfg.N.has_value();
  if (kinds != 1) throw UsageError("give exactly one state source: --state, --n/--k, --kvec or --N/--x");
  Source src;
  if (!cfg.state.empty()) {
    src.label = cfg.state;
    src.rho = read_density_file(cfg.state);
    return src;
  }
  if (cfg.N) {
    if (!cfg.x) throw UsageError("--N needs --x");
    src.dur = DurParams{*cfg.N, *cfg.x};
    src.label = "dur" + std::to_string(*cfg.N) + "(" + num(*cfg.x) + ")";
    src.rho = dur_state(*src.dur);
    return src;
  }
  if (cfg.n) {
    if (!cfg.k) throw UsageError("--n needs --k");
    if (cfg.k2) {
      if (!cfg.s) throw UsageError("--k2 needs --s");
      src.mixture = QuditDickeMixture::from_qubit(DickeMixture::two_component(*cfg.n, *cfg.k, *cfg.k2, *cfg.s));
      src.label = "rho_" + std::to_string(*cfg.n) + ";" + std::to_string(*cfg.k) + "," + std::to_string(*cfg.k2) +
                  "(" + num(*cfg.s) + ")";
    } else {
      src.mixture = QuditDickeMixture::from_qubit(DickeMixture::pure(DickeIndex(*cfg.n, *cfg.k)));
      src.label = "S(" + std::to_string(*cfg.n) + "," + std::to_string(*cfg.k) + ")";
    }
    src.qubit_mixture = true;
  } else {
    const QuditComposition a = parse_kvec(cfg.kvec);
    if (!cfg.kvec2.empty()) {
      if (!cfg.s) throw UsageError("--kvec2 needs --s");
      const QuditComposition b = parse_kvec(cfg.kvec2);
      src.mixture = TwoComponentFamily::qudit(a, b).mixture(*cfg.s);
      src.label = "rho_[" + cfg.kvec + "|" + cfg.kvec2 + "](" + num(*cfg.s) + ")";
    } else {
      src.mixture = QuditDickeMixture::from_terms(a.n(), a.d(), {{a, 1.0}});
      src.label = "S[" + cfg.kvec + "]";
    }
  }
  if (HilbertLayout::uniform(src.mixture->n(), src.mixture->d()).total_dim() <= 4096)
    src.rho = mixture_density(*src.mixture);
  return src;
}

std::string render(const json& j) { return j.dump(2) + "\n"; }

std::string measures_csv(const json& measures) {
  std::ostringstream os;
  os << "measure,value,method\n";
  for (const auto& [name, v] : measures.items()) {
    os << name << ',';
    if (v["value"].is_number())
      os << num(v["value"].get<double>());
    else
      os << v["value"].get<std::string>();
    os << ',' << v["method"].get<std::string>() << '\n';
  }
  return os.str();
}

struct Panel {
  std::string name;
  TwoComponentFamily family;
};

std::vector<Panel> figure_panels(const std::string& id) {
  auto q = [](int n, int a, int b) {
    return Panel{"rho_" + std::to_string(n) + "_" + std::to_string(a) + "_" + std::to_string(b),
                 TwoComponentFamily::qubit(n, a, b)};
  };
  if (id == "er3") return {q(3, 0, 1), q(3, 0, 2), q(3, 1, 2)};
  if (id == "er4a") return {q(4, 0, 2), q(4, 0, 3)};
  if (id == "er4b") return {q(4, 0, 1), q(4, 1, 2), q(4, 1, 3)};
  if (id == "erqudit")
    return {{"rho_ab", TwoComponentFamily::qudit(QuditComposition({2, 0, 0, 1}), QuditComposition({1, 1, 1, 0}))}};
  throw UsageError("unknown figure id \"" + id + "\" (expected er3, er4a, er4b or erqudit)");
}

std::string format_or(const RunConfig& cfg, const std::string& fallback) {
  return cfg.format.empty() ? fallback : cfg.format;
}

void require_format(const std::string& format, std::initializer_list<const char*> allowed) {
  for (const char* a : allowed)
    if (format == a) return;
  throw UsageError("unsupported --format \"" + format + "\" for this command");
}

}  // namespace

// ---------------------------------------------------------------- measure

std::string cmd_measure(const RunConfig& cfg) {
  const Source src = resolve_source(cfg);
  const std::string format = format_or(cfg, "json");
  require_format(format, {"json", "csv"});
  json m = json::object();

  if (src.mixture) {
    const QuditDickeMixture& mix = *src.mixture;
    std::vector<std::size_t> support;
    for (std::size_t i = 0; i < mix.weights().size(); ++i)
      if (mix.weights()[i] > 0.0) support.push_back(i);
    if (support.size() == 1) {
      const QuditComposition& c = mix.compositions()[support.front()];
      const double e = pure_dicke_ree(c);
      m["lambda_max"] = tagged(lambda_max_qudit(c), "closed-form");
      m["E_R"] = tagged(e, "closed-form");
      m["E_log"] = tagged(e, "closed-form");
      m["LR_lower"] = tagged(e, "closed-form");
      m["LR_upper"] = tagged(e, "closed-form");
      m["G"] = tagged(e, "closed-form");
    } else {
      m["F"] = tagged(f_value_qudit(mix), "closed-form");
      const MeasureValue er = src.qubit_mixture ? ree_dicke(to_qubit(mix)) : ree_dicke(mix);
      m["E_R"] = tagged(er.value, er.method);
      const MeasureValue el = e_log_mixture(mix);
      m["E_log"] = tagged(el.value, el.method);
      m["entropy"] = tagged(shannon_entropy(mix.weights()), "closed-form");
    }
  }
  if (src.dur) {
    const DurParams& p = *src.dur;
    if (p.N >= 4) m["E_R"] = tagged(dur_ree(p), "closed-form");
    m["E_log"] = tagged(dur_e_log(p), "closed-form");
    m["relative_entropy_to_closest"] =
        tagged(relative_entropy(dur_state(p), dur_closest_separable(p)), "numeric");
    m["negativity_1|rest"] = tagged(negativity(*src.rho, {0}), "numeric");
  }
  if (src.rho && !cfg.skip_numeric) {
    const DensityOperator& rho = *src.rho;
    const double purity = (rho.matrix() * rho.matrix()).trace().real();
    if (!src.mixture && std::abs(purity - 1.0) < 1e-10) {
      const Eigensystem es = hermitian_eigensystem(rho.matrix());
      const PureState psi = PureState::normalized(rho.layout(), es.vectors.col(es.values.size() - 1));
      const RobustnessBounds b = robustness_bounds(psi, solver_config(cfg, 1));
      m["lambda_max"] = tagged(std::pow(2.0, -b.lower / 2.0), "numeric");
      m["LR_lower"] = tagged(b.lower, "numeric");
      if (b.upper) m["LR_upper"] = tagged(*b.upper, b.method);
    }
    if (!src.mixture) m["entropy"] = tagged(von_neumann_entropy(rho), "numeric");
    m["G_numeric"] = tagged(g_of_rho(rho, solver_config(cfg, 2)), "numeric");
    const SolverReport r = minimize_ree(rho, solver_config(cfg, 3));
    m["E_R_numeric"] = tagged(r.value, "numeric");
    m["E_R_numeric_gap"] = tagged(r.gap, "numeric");
  }

  if (format == "csv") return measures_csv(m);
  return render({{"state", src.label}, {"measures", m}});
}

// ---------------------------------------------------------------- figure

std::string cmd_figure(const RunConfig& cfg) {
  if (cfg.grid < 2) throw UsageError("--grid must be at least 2");
  const std::string format = format_or(cfg, "csv");
  require_format(format, {"json", "csv"});
  const auto panels = figure_panels(cfg.figure);
  const std::size_t g = static_cast<std::size_t>(cfg.grid);

  std::vector<ConvexEnvelope> envelopes;
  for (const auto& p : panels) envelopes.push_back(p.family.ree_envelope());

  std::vector<double> numeric(panels.size() * g, std::nan(""));
  if (!cfg.skip_numeric)
    parallel_for(numeric.size(), [&](std::size_t i) {
      const double s = static_cast<double>(i % g) / static_cast<double>(g - 1);
      numeric[i] = minimize_ree(panels[i / g].family.density(s), solver_config(cfg, i)).value;
    });

  if (format == "csv") {
    std::ostringstream os;
    os << "panel,s,F,coF,E_R_numeric\n";
    for (std::size_t p = 0; p < panels.size(); ++p)
      for (std::size_t i = 0; i < g; ++i) {
        const double s = static_cast<double>(i) / static_cast<double>(g - 1);
        const double v = numeric[p * g + i];
        os << panels[p].name << ',' << num(s) << ',' << num(panels[p].family.f(s)) << ',' << num(envelopes[p](s))
           << ',' << (std::isnan(v) ? std::string() : num(v)) << '\n';
      }
    return os.str();
  }
  json out = {{"figure", cfg.figure}, {"panels", json::array()}};
  for (std::size_t p = 0; p < panels.size(); ++p) {
    json pts = json::array();
    for (std::size_t i = 0; i < g; ++i) {
      const double s = static_cast<double>(i) / static_cast<double>(g - 1);
      json pt = {{"s", s},
                 {"F", tagged(panels[p].family.f(s), "closed-form")},
                 {"coF", tagged(envelopes[p](s), envelopes[p].bridge_at(s) ? "envelope" : "closed-form")}};
      if (!std::isnan(numeric[p * g + i])) pt["E_R_numeric"] = tagged(numeric[p * g + i], "numeric");
      pts.push_back(pt);
    }
    out["panels"].push_back({{"panel", panels[p].name}, {"family", panels[p].family.label()}, {"points", pts}});
  }
  return render(out);
}

// ---------------------------------------------------------------- verify

std::string cmd_verify(const RunConfig& cfg, int& status) {
  const std::string format = format_or(cfg, "table");
  require_format(format, {"json", "table"});
  if (cfg.suite != "all" && cfg.suite != "inequalities" && cfg.suite != "dur")
    throw UsageError("--suite must be all, inequalities or dur");
  if (cfg.samples < 1) throw UsageError("--samples must be positive");
  SuiteOptions opt;
  opt.samples = cfg.samples;
  opt.seed = cfg.seed;
  opt.solver = solver_config(cfg);
  std::vector<CheckReport> reports;
  for (auto& r : run_default_suite(opt)) {
    const bool dur = r.id.starts_with("dur");
    if (cfg.suite == "all" || (cfg.suite == "dur") == dur) reports.push_back(std::move(r));
  }
  status = 0;
  for (const auto& r : reports)
    if (!r.pass) status = 1;
  if (format == "json") return reports_to_json(reports) + "\n";
  std::size_t passed = 0;
  for (const auto& r : reports) passed += r.pass;
  return reports_to_table(reports) + std::to_string(passed) + "/" + std::to_string(reports.size()) +
         " checks passed\n";
}

// ---------------------------------------------------------------- trace-down

std::string cmd_trace_down(const RunConfig& cfg) {
  if (!cfg.n || !cfg.k) throw UsageError("trace-down needs --n and --k");
  const std::string format = format_or(cfg, "csv");
  require_format(format, {"json", "csv"});
  const auto stages = trace_down_report(DickeIndex(*cfg.n, *cfg.k));
  if (format == "csv") {
    std::ostringstream os;
    os << "parties,state,E_R,method\n";
    for (const auto& st : stages)
      os << st.mixture.n() << ",\"" << st.state << "\"," << num(st.e_r) << ',' << st.method << '\n';
    return os.str();
  }
  json arr = json::array();
  for (const auto& st : stages)
    arr.push_back({{"parties", st.mixture.n()}, {"state", st.state}, {"weights", st.mixture.weights()},
                   {"E_R", tagged(st.e_r, st.method)}});
  return render(arr);
}

// ---------------------------------------------------------------- dur

std::string cmd_dur(const RunConfig& cfg) {
  if (!cfg.N || !cfg.x) throw UsageError("dur needs --N and --x");
  const std::string format = format_or(cfg, "json");
  require_format(format, {"json"});
  const DurParams p{*cfg.N, *cfg.x};
  p.validate();
  json out = {{"N", p.N}, {"x", p.x}, {"E_log", tagged(dur_e_log(p), "closed-form")}};
  if (p.N >= 4) {
    out["E_R"] = tagged(dur_ree(p), "closed-form");
    out["relative_entropy_to_closest"] = tagged(relative_entropy(dur_state(p), dur_closest_separable(p)), "numeric");
  } else {
    out["E_R"] = nullptr;
    out["note"] = "E_R = x is established only for N >= 4";
  }
  out["negativity_1|rest"] = tagged(negativity(dur_state(p), {0}), "numeric");

  const GMaximum g = g_max(p.N, 100000, derive_seed(cfg.seed, 1));
  out["g_max"] = {{"value", g.value},
                  {"angles", g.angles},
                  {"method", "numeric"},
                  {"within_theorem_scope", p.N >= 4},
                  {"at_most_one", g.value <= 1.0 + 1e-9}};
  if (p.N >= 4 && p.x > 0.0 && p.x < 1.0)
    out["certificate"] = json::parse(verify_closest(p, cfg.samples, derive_seed(cfg.seed, 2), solver_config(cfg, 3)).to_json());
  if (!cfg.skip_numeric && p.N <= 6) {
    const SolverReport r = minimize_ree(dur_state(p), solver_config(cfg, 4));
    out["E_R_numeric"] = {{"value", r.value}, {"gap", r.gap}, {"method", "numeric"}};
  }
  return render(out);
}

// ---------------------------------------------------------------- solve

std::string cmd_solve(const RunConfig& cfg) {
  const Source src = resolve_source(cfg);
  if (!src.rho) throw UsageError("state is too large for the dense solver");
  const std::string format = format_or(cfg, "json");
  require_format(format, {"json", "csv"});
  const SolverReport r = minimize_ree(*src.rho, solver_config(cfg));
  if (format == "csv") return r.trace_csv();
  json j = json::parse(r.to_json());
  j["state"] = src.label;
  return render(j);
}

// ---------------------------------------------------------------- entry point

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entanglement measures for multipartite states: REE, geometric measure, robustness bounds"};
  app.require_subcommand(1);
  RunConfig cfg;
  cfg.format.clear();

  auto add_state = [&](CLI::App* sub) {
    sub->add_option("--state", cfg.state, "JSON state file (density or pure form)");
    sub->add_option("--n", cfg.n, "number of qubits of a symmetric state");
    sub->add_option("--k", cfg.k, "zeros in |S(n,k)>");
    sub->add_option("--k2", cfg.k2, "second component of a two-state mixture");
    sub->add_option("--kvec", cfg.kvec, "qudit composition, e.g. 2,0,0,1");
    sub->add_option("--kvec2", cfg.kvec2, "second qudit composition of a mixture");
    sub->add_option("--s", cfg.s, "weight of the first component");
    sub->add_option("--N", cfg.N, "parties of the bound-entangled family");
    sub->add_option("--x", cfg.x, "GHZ weight of the bound-entangled family");
  };
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
    sub->add_option("--out", cfg.out, "write output to this file");
    sub->add_option("--format", cfg.format, "output format");
    sub->add_option("--max-iter", cfg.max_iterations, "solver outer-iteration budget")->capture_default_str();
  };

  CLI::App* measure = app.add_subcommand("measure", "print the measures of one state");
  add_state(measure);
  add_common(measure);
  measure->add_flag("--skip-numeric", cfg.skip_numeric, "closed forms only");

  CLI::App* figure = app.add_subcommand("figure", "F, co F and numeric E_R along a figure's families");
  figure->add_option("id", cfg.figure, "er3, er4a, er4b or erqudit")->required();
  figure->add_option("--grid", cfg.grid, "grid points on [0,1]")->capture_default_str();
  figure->add_flag("--skip-numeric", cfg.skip_numeric, "leave the E_R_numeric column empty");
  add_common(figure);

  CLI::App* verify = app.add_subcommand("verify", "run the inequality and bound-entanglement checks");
  verify->add_option("--suite", cfg.suite, "all, inequalities or dur")->capture_default_str();
  verify->add_option("--samples", cfg.samples, "random samples per sampled check")->capture_default_str();
  add_common(verify);

  CLI::App* trace = app.add_subcommand("trace-down", "E_R while tracing out one party at a time");
  trace->add_option("--n", cfg.n)->required();
  trace->add_option("--k", cfg.k)->required();
  add_common(trace);

  CLI::App* dur = app.add_subcommand("dur", "closed forms and optimality certificate for the bound-entangled family");
  dur->add_option("--N", cfg.N)->required();
  dur->add_option("--x", cfg.x)->required();
  dur->add_option("--samples", cfg.samples, "random product states for the certificate")->capture_default_str();
  dur->add_flag("--skip-numeric", cfg.skip_numeric, "skip the numerical solver");
  add_common(dur);

  CLI::App* solve = app.add_subcommand("solve", "numerical REE with the separable-ensemble witness");
  add_state(solve);
  add_common(solve);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    std::string text;
    int status = 0;
    if (*measure) text = cmd_measure(cfg);
    else if (*figure) text = cmd_figure(cfg);
    else if (*verify) text = cmd_verify(cfg, status);
    else if (*trace) text = cmd_trace_down(cfg);
    else if (*dur) text = cmd_dur(cfg);
    else text = cmd_solve(cfg);

    if (cfg.out.empty()) {
      out << text;
    } else {
      std::ofstream file(cfg.out, std::ios::binary);
      if (!file) throw UsageError("cannot write " + cfg.out);
      file << text;
    }
    return status;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return 3;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return 4;
  }
}

}  // namespace reelab
