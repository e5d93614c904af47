#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "starsplit/analysis.hpp"
#include "starsplit/errors.hpp"
#include "starsplit/io.hpp"
#include "starsplit/search.hpp"
#include "starsplit/verify.hpp"

namespace starsplit::cli {

namespace {

struct Bound {
  Bindings bindings;
  std::vector<std::string> bare;  // names given without a value
};

Bound parse_params(const std::vector<std::string>& params) {
  Bound out;
  for (const auto& p : params) {
    const auto eq = p.find('=');
    if (eq == std::string::npos) {
      if (p.empty()) throw InputError("empty --param");
      out.bare.push_back(p);
      continue;
    }
    const std::string name = p.substr(0, eq);
    if (name.empty()) throw InputError("--param '" + p + "' has no name");
    out.bindings[name] = parse_complex(p.substr(eq + 1));
  }
  return out;
}

bool is_catalog_name(const std::string& s) {
  for (const auto& n : catalog::list())
    if (n == s) return true;
  return s.rfind("torus_", 0) == 0 && s.size() == 7 && std::isdigit(static_cast<unsigned char>(s[6]));
}

Json json_source(const std::string& spec, const std::string& what) {
  if (!spec.empty() && spec.front() == '{') return parse_json(spec, what);
  return parse_json(read_text_file(spec), spec);
}

void emit(const RunConfig& cfg, std::ostream& out, const std::string& text) {
  if (cfg.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(cfg.output, std::ios::binary);
  if (!f) throw InputError("cannot write '" + cfg.output + "'");
  f << text;
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

std::vector<cplx> parse_values(const std::string& text) {
  std::vector<cplx> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(parse_complex(item));
  }
  return out;
}

// Expectations apply only to the catalog entry with its own default metric.
const CatalogExpectations* expectations_for(const Loaded& l, const RunConfig& cfg) {
  return l.entry && cfg.metric.empty() ? &l.entry->expectations : nullptr;
}

}  // namespace

Loaded load_manifold(const RunConfig& cfg) {
  if (cfg.manifold.empty()) throw InputError("--manifold is required");
  const Bound b = parse_params(cfg.params);
  if (!std::filesystem::exists(cfg.manifold) && is_catalog_name(cfg.manifold)) {
    CatalogEntry e = catalog::get(cfg.manifold, b.bindings);
    return {e, e.manifold, e.metric};
  }
  if (!std::filesystem::exists(cfg.manifold))
    throw InputError("'" + cfg.manifold + "' is neither a catalog entry nor a readable file");
  const Json j = parse_json(read_text_file(cfg.manifold), cfg.manifold);
  InvariantComplexManifold m = manifold_from_json(j, b.bindings);
  HermitianMetric g = j.contains("metric") ? metric_from_json(j.at("metric")) : HermitianMetric::standard(m.dim());
  return {std::nullopt, m, g};
}

HermitianMetric resolve_metric(const std::string& spec, int n, const HermitianMetric& fallback) {
  HermitianMetric g = [&]() {
    if (spec.empty()) return fallback;
    if (spec == "standard") return HermitianMetric::standard(n);
    if (spec == "random") return random_metric(n, 1);
    if (spec.rfind("random:", 0) == 0) {
      try {
        return random_metric(n, std::stoull(spec.substr(7)));
      } catch (const std::logic_error&) {
        throw InputError("bad random metric seed in '" + spec + "'");
      }
    }
    return metric_from_json(json_source(spec, "metric"));
  }();
  if (g.dim() != n) throw InputError("metric has dimension " + std::to_string(g.dim()) + ", manifold has " + std::to_string(n));
  return g;
}

int cmd_catalog_list(const RunConfig& cfg, std::ostream& out) {
  if (cfg.format == Format::json) {
    Json a = Json::array();
    for (const auto& name : catalog::list()) {
      const CatalogEntry e = catalog::get(name == "torus_n" ? "torus_3" : name);
      Json params = Json::array();
      for (const auto& p : e.manifold.parameters()) params.push_back(p.name);
      if (name == "torus_n") params.push_back("n");
      a.push_back(Json{{"name", name}, {"dim", e.manifold.dim()}, {"description", e.description}, {"parameters", params}});
    }
    emit(cfg, out, dump(a));
    return kExitOk;
  }
  std::ostringstream os;
  for (const auto& name : catalog::list()) {
    const CatalogEntry e = catalog::get(name == "torus_n" ? "torus_3" : name);
    os << name << "  (n = " << (name == "torus_n" ? std::string("1..7, default 3") : std::to_string(e.manifold.dim()))
       << ")  " << e.description;
    if (!e.manifold.parameters().empty()) {
      os << "  [parameters:";
      for (const auto& p : e.manifold.parameters()) os << " " << p.name;
      os << "]";
    }
    os << "\n";
  }
  emit(cfg, out, os.str());
  return kExitOk;
}

int cmd_catalog_export(const RunConfig& cfg, const std::string& name, std::ostream& out) {
  RunConfig c = cfg;
  c.manifold = name;
  const Bound b = parse_params(c.params);
  const CatalogEntry e = catalog::get(name, b.bindings);
  Json j = manifold_to_json(e.manifold);
  if (cfg.include_metric) j["metric"] = metric_to_json(e.metric);
  emit(cfg, out, dump(j));
  return kExitOk;
}

int cmd_classify(const RunConfig& cfg, std::ostream& out) {
  const Loaded l = load_manifold(cfg);
  const HermitianMetric g = resolve_metric(cfg.metric, l.manifold.dim(), l.metric);
  const MetricReport r = classify(l.manifold, g, cfg.tol);
  const CatalogExpectations* expected = expectations_for(l, cfg);

  std::optional<HermitianMetric> gamma;
  if (!cfg.gamma.empty()) gamma = resolve_metric(cfg.gamma, l.manifold.dim(), g);
  std::optional<PairReport> pair;
  std::optional<TripleReport> triple;
  if (!cfg.phi.empty()) {
    const PullbackMap phi = pullback_from_json(json_source(cfg.phi, "pullback"));
    triple = triple_analysis(l.manifold, phi, g, gamma ? *gamma : g, cfg.tol);
  } else if (gamma) {
    pair = pair_analysis(l.manifold, g, *gamma, cfg.tol);
  }

  if (cfg.format == Format::json) {
    Json j = report_to_json(r, expected);
    j["metric"] = metric_to_json(g);
    if (pair) j["pair"] = pair_report_to_json(*pair);
    if (triple) {
      j["triple"] = pair_report_to_json(triple->pair);
      j["triple"]["pulled_back_omega"] = metric_to_json(triple->pulled_back_omega);
    }
    emit(cfg, out, dump(j));
    return kExitOk;
  }
  if (cfg.format == Format::csv) throw InputError("classify has no CSV output; use text or json");
  std::string text = report_to_text(r, expected);
  auto pair_text = [](const char* title, const PairReport& p) {
    std::ostringstream os;
    os << title << ": f = " << format_double(p.f_pair) << ", pluriclosed " << (p.pluriclosed.value ? "yes" : "no")
       << ", closed " << (p.closed.value ? "yes" : "no") << ", integral of f gamma_n = " << format_double(p.integral_f_gamma)
       << "\n  rho = " << to_string(p.rho_pair) << "\n";
    return os.str();
  };
  if (pair) text += pair_text("pair (omega, gamma)", *pair);
  if (triple) text += pair_text("triple (phi, omega, gamma)", triple->pair);
  emit(cfg, out, text);
  return kExitOk;
}

int cmd_invariants(const RunConfig& cfg, std::ostream& out) {
  const Loaded l = load_manifold(cfg);
  const HermitianMetric g = resolve_metric(cfg.metric, l.manifold.dim(), l.metric);
  const MetricReport r = classify(l.manifold, g, cfg.tol);
  const CatalogExpectations* expected = expectations_for(l, cfg);
  if (cfg.format == Format::json) {
    Json j;
    j["manifold"] = r.manifold;
    j["f"] = r.f;
    j["f_trace"] = r.f_trace;
    j["eigenvalues"] = r.eigenvalues;
    if (expected && expected->published_eigenvalues) {
      j["published_eigenvalues"] = *expected->published_eigenvalues;
      j["eigenvalue_discrepancy"] = true;
      j["discrepancy_notes"] = expected->notes;
    }
    j["rho"] = form_to_json(r.rho);
    j["star_rho"] = form_to_json(r.star_rho);
    j["star_rho_residual"] = r.star_rho_residual;
    emit(cfg, out, dump(j));
    return kExitOk;
  }
  if (cfg.format == Format::csv) throw InputError("invariants has no CSV output; use text or json");
  std::ostringstream os;
  os << "f = " << format_double(r.f) << "\n";
  os << "eigenvalues = {";
  for (std::size_t k = 0; k < r.eigenvalues.size(); ++k) os << (k ? ", " : "") << format_double(r.eigenvalues[k]);
  os << "}\n";
  if (expected && expected->published_eigenvalues) {
    os << "eigenvalue discrepancy: published {";
    for (std::size_t k = 0; k < expected->published_eigenvalues->size(); ++k)
      os << (k ? ", " : "") << format_double((*expected->published_eigenvalues)[k]);
    os << "}\n";
    for (const auto& n : expected->notes) os << "note: " << n << "\n";
  }
  os << "rho = " << to_string(r.rho) << "\n";
  os << "*rho = " << to_string(r.star_rho) << "\n";
  emit(cfg, out, os.str());
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  if (cfg.suite != "commutation" && cfg.suite != "operators" && cfg.suite != "all")
    throw InputError("--suite must be commutation, operators or all");
  const Loaded l = load_manifold(cfg);
  const int n = l.manifold.dim();
  const HermitianMetric g = resolve_metric(cfg.metric, n, l.metric);
  const HermitianMetric gamma = resolve_metric(cfg.gamma, n, g);
  VerifyOptions opt;
  opt.tol = cfg.tol;
  opt.seed = cfg.seed;

  std::vector<IdentityReport> reports;
  std::vector<std::string> notes;
  if (cfg.suite != "operators") reports.push_back(verify_commutation_suite(l.manifold, g, opt));
  if (cfg.suite != "commutation") {
    if (n >= 3) reports.push_back(verify_operator_identities(l.manifold, g, gamma, opt));
    else if (cfg.suite == "operators") throw InputError("the operator suite needs complex dimension at least 3");
    else notes.push_back("operator suite not run: complex dimension below 3");
  }
  bool ok = true;
  for (const auto& r : reports) ok &= r.all_passed();

  if (cfg.format == Format::json) {
    Json j;
    j["all_passed"] = ok;
    Json a = Json::array();
    for (const auto& r : reports) a.push_back(identity_report_to_json(r));
    j["reports"] = a;
    j["notes"] = notes;
    emit(cfg, out, dump(j));
  } else if (cfg.format == Format::csv) {
    std::ostringstream os;
    os << "suite,id,residual,pass,skipped_reason\n";
    for (const auto& r : reports)
      for (const auto& e : r.entries)
        os << r.suite << "," << e.id << "," << format_double(e.residual) << "," << (e.pass ? "true" : "false") << ","
           << (e.skipped_reason ? "\"" + *e.skipped_reason + "\"" : "") << "\n";
    emit(cfg, out, os.str());
  } else {
    std::string text;
    for (const auto& r : reports) text += identity_report_to_text(r);
    for (const auto& note : notes) text += "note: " + note + "\n";
    text += ok ? "all identities passed\n" : "IDENTITY FAILURES\n";
    emit(cfg, out, text);
  }
  return ok ? kExitOk : kExitFailure;
}

int cmd_search(const RunConfig& cfg, std::ostream& out) {
  const Loaded l = load_manifold(cfg);
  const int n = l.manifold.dim();
  MetricFamily family = [&]() {
    if (cfg.family == "diagonal") return MetricFamily::diagonal(n);
    if (cfg.family == "hermitian" || cfg.family == "full-hermitian") return MetricFamily::full_hermitian(n);
    throw InputError("--family must be diagonal or hermitian");
  }();
  SearchOptions opt;
  opt.budget = cfg.budget;
  opt.restarts = cfg.restarts;
  opt.seed = cfg.seed;
  opt.tol = cfg.tol;
  opt.target = parse_search_target(cfg.target);
  std::optional<HermitianMetric> start;
  if (!cfg.metric.empty()) start = resolve_metric(cfg.metric, n, l.metric);
  else if (family.kind() == MetricFamily::Kind::full_hermitian) start = l.metric;
  const SearchResult r = search_metric(l.manifold, family, opt, start);
  if (cfg.format == Format::json) emit(cfg, out, dump(search_result_to_json(r)));
  else if (cfg.format == Format::csv) emit(cfg, out, search_trace_to_csv(r));
  else emit(cfg, out, search_result_to_text(r));
  return kExitOk;
}

int cmd_scan(const RunConfig& cfg, std::ostream& out) {
  const Bound b = parse_params(cfg.params);
  if (b.bare.size() != 1) throw InputError("scan needs exactly one --param <name> without a value to scan over");
  const std::string param = b.bare.front();
  const std::vector<cplx> values = parse_values(cfg.values);
  if (cfg.manifold.empty()) throw InputError("--manifold is required");

  ScanBuilder build;
  RunConfig base_cfg = cfg;
  base_cfg.params.clear();
  for (const auto& p : cfg.params)
    if (p.find('=') != std::string::npos) base_cfg.params.push_back(p);
  const Loaded l = load_manifold(base_cfg);
  const std::optional<HermitianMetric> user_metric =
      cfg.metric.empty() ? std::nullopt : std::optional(resolve_metric(cfg.metric, l.manifold.dim(), l.metric));
  if (l.entry) {
    const std::string name = cfg.manifold;
    build = [name, user_metric](const Bindings& bs) {
      CatalogEntry e = catalog::get(name, bs);
      return std::pair{e.manifold, user_metric ? *user_metric : e.metric};
    };
  } else {
    const InvariantComplexManifold m = l.manifold;
    const HermitianMetric g = user_metric ? *user_metric : l.metric;
    build = [m, g](const Bindings& bs) {
      auto bound = m.bind(bs);
      validate(bound);
      return std::pair{bound, g};
    };
  }
  const ScanTable t = scan(build, b.bindings, param, values, cfg.tol);
  if (cfg.format == Format::json) emit(cfg, out, dump(scan_table_to_json(t)));
  else if (cfg.format == Format::csv) emit(cfg, out, scan_table_to_csv(t));
  else emit(cfg, out, scan_table_to_text(t));
  return kExitOk;
}

int run(int argc, char** argv) {
  CLI::App app{"starsplit: pluriclosed star split metrics on invariant complex structures"};
  app.require_subcommand(1);
  RunConfig cfg;
  bool json_flag = false;
  std::string format = "text";

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--manifold", cfg.manifold, "catalog name or manifold JSON file");
    sub->add_option("--param", cfg.params, "parameter binding name=value (repeatable; complex literals as a+bi)");
    sub->add_option("--metric", cfg.metric, "metric: standard, random[:seed], inline JSON or a JSON file");
    sub->add_option("--tol", cfg.tol, "tolerance (default 1e-10)");
    sub->add_flag("--json", json_flag, "JSON output (same as --format json)");
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json", "csv"}));
    sub->add_option("--output,-o", cfg.output, "write the output to this file");
  };

  auto* cat = app.add_subcommand("catalog", "built-in examples");
  cat->require_subcommand(1);
  auto* cat_list = cat->add_subcommand("list", "list catalog entries");
  cat_list->add_flag("--json", json_flag, "JSON output");
  cat_list->add_option("--format", format, "output format")->check(CLI::IsMember({"text", "json"}));
  auto* cat_export = cat->add_subcommand("export", "write a catalog entry in the manifold JSON format");
  std::string export_name;
  cat_export->add_option("name", export_name, "catalog entry")->required();
  cat_export->add_option("--param", cfg.params, "parameter binding name=value");
  cat_export->add_flag("--with-metric", cfg.include_metric, "also write the default metric");
  cat_export->add_option("--output,-o", cfg.output, "write the output to this file");

  auto* classify_cmd = app.add_subcommand("classify", "metric classification report");
  add_common(classify_cmd);
  classify_cmd->add_option("--gamma", cfg.gamma, "second metric for the pair analysis");
  classify_cmd->add_option("--phi", cfg.phi, "pullback matrix (file or inline JSON) for the triple analysis");

  auto* inv_cmd = app.add_subcommand("invariants", "rho, *rho, f and eigenvalues");
  add_common(inv_cmd);

  auto* verify_cmd = app.add_subcommand("verify", "run the identity suites");
  add_common(verify_cmd);
  verify_cmd->add_option("--suite", cfg.suite, "commutation, operators or all")
      ->check(CLI::IsMember({"commutation", "operators", "all"}));
  verify_cmd->add_option("--gamma", cfg.gamma, "second metric for the operator suite");
  verify_cmd->add_option("--seed", cfg.seed, "random sample seed");

  auto* search_cmd = app.add_subcommand("search", "simplex search for metrics of a given class");
  add_common(search_cmd);
  search_cmd->add_option("--seed", cfg.seed, "random seed");
  search_cmd->add_option("--budget", cfg.budget, "objective evaluations")->check(CLI::PositiveNumber);
  search_cmd->add_option("--restarts", cfg.restarts, "restarts run in parallel")->check(CLI::PositiveNumber);
  search_cmd->add_option("--family", cfg.family, "diagonal or hermitian");
  search_cmd->add_option("--target", cfg.target, "metric class (default pluriclosed_star_split)");

  auto* scan_cmd = app.add_subcommand("scan", "classify along a list of parameter values");
  add_common(scan_cmd);
  scan_cmd->add_option("--values", cfg.values, "comma-separated complex values")->allow_extra_args(false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }
  cfg.format = json_flag || format == "json" ? Format::json : (format == "csv" ? Format::csv : Format::text);

  try {
    if (!(cfg.tol > 0.0)) throw InputError("--tol must be positive");
    if (cat_list->parsed()) return cmd_catalog_list(cfg, std::cout);
    if (cat_export->parsed()) return cmd_catalog_export(cfg, export_name, std::cout);
    if (classify_cmd->parsed()) return cmd_classify(cfg, std::cout);
    if (inv_cmd->parsed()) return cmd_invariants(cfg, std::cout);
    if (verify_cmd->parsed()) return cmd_verify(cfg, std::cout);
    if (search_cmd->parsed()) return cmd_search(cfg, std::cout);
    if (scan_cmd->parsed()) return cmd_scan(cfg, std::cout);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON input: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitInvalid;
}

}  // namespace starsplit::cli
