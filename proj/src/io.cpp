#include "starsplit/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <regex>
#include <sstream>

#include "starsplit/errors.hpp"

namespace starsplit {

namespace {

[[noreturn]] void fail(const std::string& what) { throw InputError(what); }

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) fail(where + ": missing field '" + key + "'");
  return j.at(key);
}

int int_field(const Json& j, const char* key, const std::string& where) {
  const Json& v = field(j, key, where);
  if (!v.is_number_integer()) fail(where + ": field '" + key + "' must be an integer");
  return v.get<int>();
}

// Structure coefficients: an expression string, a real number or [re, im].
Expr coefficient_from_json(const Json& j, const std::string& where) {
  if (j.is_string()) return Expr::parse(j.get<std::string>());
  try {
    return Expr::constant(complex_from_json(j));
  } catch (const InputError&) {
    fail(where + ": coefficient must be an expression string, a number or [re, im]");
  }
}

// Accepted shapes: rows of [re, im] entries, rows of real entries, or a flat
// row-major list of n^2 [re, im] entries. Rows win whenever the shape is square.
Eigen::MatrixXcd matrix_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) fail(where + ": matrix must be a non-empty array");
  // Rows when every element is an array of the outer length, otherwise a flat row-major list.
  const auto count = j.size();
  const bool square_rows =
      std::all_of(j.begin(), j.end(), [&](const Json& row) { return row.is_array() && row.size() == count; });
  std::vector<std::vector<cplx>> entries;
  if (square_rows) {
    for (const auto& row : j) {
      entries.emplace_back();
      for (const auto& e : row) entries.back().push_back(complex_from_json(e));
    }
  } else {
    const auto n = std::size_t(std::llround(std::sqrt(double(count))));
    if (n * n != count) fail(where + ": matrix must be square");
    for (std::size_t r = 0; r < n; ++r) {
      entries.emplace_back();
      for (std::size_t c = 0; c < n; ++c) entries.back().push_back(complex_from_json(j[r * n + c]));
    }
  }
  const auto n = entries.size();
  Eigen::MatrixXcd m(n, n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) m(Eigen::Index(r), Eigen::Index(c)) = entries[r][c];
  return m;
}

Json matrix_to_json(const Eigen::MatrixXcd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

Json number(double x) {
  // NaN and infinities have no JSON literal; they are written as null.
  return std::isfinite(x) ? Json(x) : Json(nullptr);
}

Json doubles(const std::vector<double>& xs) {
  Json a = Json::array();
  for (double x : xs) a.push_back(number(x));
  return a;
}

Json flag_to_json(const Flag& f) { return Json{{"value", f.value}, {"defect", number(f.defect)}}; }

std::string join(const std::vector<double>& xs, const char* sep) {
  std::string out;
  for (std::size_t k = 0; k < xs.size(); ++k) out += (k ? sep : "") + format_double(xs[k]);
  return out;
}

std::string yes_no(bool b) { return b ? "yes" : "no"; }

// Adding +0.0 turns a negative zero into a positive one.
cplx tidy(cplx c) { return {c.real() + 0.0, c.imag() + 0.0}; }

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol * (1.0 + std::abs(b)); }

}  // namespace

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail("cannot open file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    fail(origin + ": JSON parse error: " + e.what());
  }
}

Json complex_to_json(cplx c) { return Json::array({c.real(), c.imag()}); }

cplx complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_string()) return parse_complex(j.get<std::string>());
  fail("complex value must be a number, [re, im] or a literal such as \"1+2i\"");
}

InvariantComplexManifold manifold_from_json(const Json& j, const Bindings& overrides) {
  const std::string where = "manifold";
  if (!j.is_object()) fail(where + ": expected a JSON object");
  const std::string name = j.value("name", std::string("unnamed"));
  const int n = int_field(j, "dim", where);
  if (n < 1 || n > kMaxDim) fail(where + ": dim must be between 1 and 7");

  std::vector<ParameterSpec> params;
  if (j.contains("parameters")) {
    const Json& ps = j.at("parameters");
    if (!ps.is_object()) fail(where + ": 'parameters' must be an object");
    for (const auto& [pname, spec] : ps.items()) {
      cplx def = 0.0;
      if (spec.is_object()) {
        if (spec.contains("default")) def = complex_from_json(spec.at("default"));
      } else {
        def = complex_from_json(spec);
      }
      params.push_back({pname, def});
    }
  }

  std::vector<GeneratorStructure> structure(n);
  const Json& st = field(j, "structure", where);
  if (!st.is_object()) fail(where + ": 'structure' must be an object");
  static const std::regex gen_re("phi([0-9]+)");
  for (const auto& [gname, parts] : st.items()) {
    std::smatch mt;
    if (!std::regex_match(gname, mt, gen_re)) fail(where + ": structure key '" + gname + "' is not of the form phi<k>");
    const int k = std::stoi(mt[1].str());
    if (k < 1 || k > n) fail(where + ": generator '" + gname + "' out of range");
    if (!parts.is_object()) fail(where + ": entry for '" + gname + "' must be an object");
    for (const auto& [bideg, terms] : parts.items()) {
      const bool hol = bideg == "(2,0)";
      if (!hol && bideg != "(1,1)")
        fail(where + ": d" + gname + " has a '" + bideg +
             "' part; only (2,0) and (1,1) parts are allowed for the differential of a (1,0)-form");
      if (!terms.is_array()) fail(where + ": the " + bideg + " part of d" + gname + " must be an array");
      for (const auto& t : terms) {
        const std::string tw = where + ": term of d" + gname;
        const int i = int_field(t, "i", tw);
        const int jj = int_field(t, hol ? "j" : "jbar", tw);
        if (i < 1 || i > n || jj < 1 || jj > n) fail(tw + ": index out of range 1.." + std::to_string(n));
        StructureTerm term{i - 1, jj - 1, coefficient_from_json(field(t, "coeff", tw), tw)};
        (hol ? structure[k - 1].holomorphic : structure[k - 1].mixed).push_back(std::move(term));
      }
    }
  }
  InvariantComplexManifold m(name, n, params, structure, overrides);
  validate(m);
  return m;
}

Json manifold_to_json(const InvariantComplexManifold& m) {
  Json j;
  j["name"] = m.name();
  j["dim"] = m.dim();
  Json params = Json::object();
  for (const auto& p : m.parameters()) params[p.name] = Json{{"default", complex_to_json(m.bindings().at(p.name))}};
  j["parameters"] = params;
  Json st = Json::object();
  for (int k = 0; k < m.dim(); ++k) {
    const auto& gen = m.structure()[k];
    Json parts = Json::object();
    auto terms = [](const std::vector<StructureTerm>& ts, const char* second) {
      Json a = Json::array();
      for (const auto& t : ts) a.push_back(Json{{"i", t.i + 1}, {second, t.j + 1}, {"coeff", t.coeff.source()}});
      return a;
    };
    if (!gen.holomorphic.empty()) parts["(2,0)"] = terms(gen.holomorphic, "j");
    if (!gen.mixed.empty()) parts["(1,1)"] = terms(gen.mixed, "jbar");
    st["phi" + std::to_string(k + 1)] = parts;
  }
  j["structure"] = st;
  return j;
}

HermitianMetric metric_from_json(const Json& j) {
  const std::string where = "metric";
  if (!j.is_object()) fail(where + ": expected a JSON object");
  const Json& type = field(j, "type", where);
  if (!type.is_string()) fail(where + ": 'type' must be a string");
  double scale = 1.0;
  if (j.contains("scale")) {
    if (!j.at("scale").is_number()) fail(where + ": 'scale' must be a number");
    scale = j.at("scale").get<double>();
    if (!(scale > 0.0) || !std::isfinite(scale)) fail(where + ": 'scale' must be positive");
  }
  if (type == "diagonal") {
    const Json& cs = field(j, "coeffs", where);
    if (!cs.is_array() || cs.empty()) fail(where + ": 'coeffs' must be a non-empty array");
    std::vector<double> coeffs;
    for (const auto& c : cs) {
      if (!c.is_number()) fail(where + ": diagonal coefficients must be real numbers");
      const double v = c.get<double>();
      if (!(v > 0.0) || !std::isfinite(v)) fail(where + ": diagonal coefficients must be positive");
      coeffs.push_back(scale * v);
    }
    return HermitianMetric::diagonal(coeffs);
  }
  if (type == "hermitian") return HermitianMetric(scale * matrix_from_json(field(j, "matrix", where), where));
  fail(where + ": unknown type '" + type.get<std::string>() + "' (expected diagonal or hermitian)");
}

Json metric_to_json(const HermitianMetric& g) {
  const auto& h = g.matrix();
  const bool diagonal = (h - Eigen::MatrixXcd(h.diagonal().asDiagonal())).cwiseAbs().maxCoeff() == 0.0 &&
                        h.diagonal().imag().cwiseAbs().maxCoeff() == 0.0;
  if (diagonal) {
    std::vector<double> cs;
    for (int k = 0; k < g.dim(); ++k) cs.push_back(h(k, k).real());
    return Json{{"type", "diagonal"}, {"coeffs", cs}};
  }
  return Json{{"type", "hermitian"}, {"matrix", matrix_to_json(h)}};
}

PullbackMap pullback_from_json(const Json& j) {
  if (j.is_object()) return PullbackMap(matrix_from_json(field(j, "matrix", "pullback"), "pullback"));
  return PullbackMap(matrix_from_json(j, "pullback"));
}

Json pullback_to_json(const PullbackMap& phi) { return Json{{"matrix", matrix_to_json(phi.matrix())}}; }

Json form_to_json(const Form& u) {
  Json j = Json::object();
  for (std::size_t k = 0; k < u.terms().size(); ++k)
    j[monomial_label(u.monomial_at(k))] = complex_to_json(u.terms()[k].coeff);
  return j;
}

Form form_from_json(int n, const Json& j) {
  if (!j.is_object()) fail("form: expected an object of monomial -> [re, im]");
  static const std::regex factor_re("(phibar|phi)([0-9]+)");
  FormAccumulator acc(n);
  for (const auto& [label, value] : j.items()) {
    std::vector<int> hol, anti;
    if (label != "1") {
      std::stringstream ss(label);
      std::string factor;
      while (std::getline(ss, factor, '^')) {
        std::smatch mt;
        if (!std::regex_match(factor, mt, factor_re)) fail("form: bad monomial label '" + label + "'");
        const int k = std::stoi(mt[2].str());
        if (k < 1 || k > n) fail("form: index out of range in '" + label + "'");
        (mt[1] == "phi" ? hol : anti).push_back(k - 1);
      }
    }
    acc.add(Form::monomial(n, hol, anti, complex_from_json(value)));
  }
  return acc.build(0.0);
}

std::vector<std::string> expectation_mismatches(const MetricReport& r, const CatalogExpectations& e) {
  std::vector<std::string> out;
  const double tol = r.tolerance * (1.0 + r.scale);
  if (e.f && !close(r.f, *e.f, tol)) out.push_back("f = " + format_double(r.f) + ", expected " + format_double(*e.f));
  const auto flags = r.flags();
  for (const auto& [name, want] : e.flags)
    for (const auto& [fname, flag] : flags)
      if (fname == name && flag.value != want)
        out.push_back(name + " is " + yes_no(flag.value) + ", expected " + yes_no(want));
  if (e.rho_zero && r.rho.max_abs() > tol) out.push_back("rho is nonzero, expected rho = 0");
  if (e.eigenvalues) {
    bool ok = e.eigenvalues->size() == r.eigenvalues.size();
    for (std::size_t k = 0; ok && k < r.eigenvalues.size(); ++k) ok = close(r.eigenvalues[k], (*e.eigenvalues)[k], tol);
    if (!ok) out.push_back("eigenvalues {" + join(r.eigenvalues, ", ") + "}, expected {" + join(*e.eigenvalues, ", ") + "}");
  }
  return out;
}

Json report_to_json(const MetricReport& r, const CatalogExpectations* expected) {
  Json j;
  j["manifold"] = r.manifold;
  j["dim"] = r.dim;
  j["tolerance"] = r.tolerance;
  j["scale"] = number(r.scale);
  Json flags = Json::object();
  for (const auto& [name, flag] : r.flags()) flags[name] = flag_to_json(flag);
  j["flags"] = flags;
  j["f"] = number(r.f);
  j["f_imag"] = number(r.f_imag);
  j["f_trace"] = number(r.f_trace);
  j["residuals"] = Json{{"f_vs_trace", number(std::abs(r.f - r.f_trace))}, {"star_rho_closed_form", number(r.star_rho_residual)}};
  j["eigenvalues"] = doubles(r.eigenvalues);
  j["del_omega_norm2"] = number(r.del_omega_norm2);
  j["integral_f"] = number(r.integral_f);
  j["implications_consistent"] = r.implications_consistent;
  j["rho"] = form_to_json(r.rho);
  j["star_rho"] = form_to_json(r.star_rho);
  j["notes"] = r.notes;
  if (expected) {
    Json e;
    if (expected->f) e["f"] = *expected->f;
    Json ef = Json::object();
    for (const auto& [name, value] : expected->flags) ef[name] = value;
    e["flags"] = ef;
    e["rho_zero"] = expected->rho_zero;
    if (expected->eigenvalues) e["eigenvalues"] = doubles(*expected->eigenvalues);
    if (expected->published_eigenvalues) {
      e["published_eigenvalues"] = doubles(*expected->published_eigenvalues);
      e["eigenvalue_discrepancy"] = true;
    }
    e["notes"] = expected->notes;
    const auto mismatches = expectation_mismatches(r, *expected);
    e["matches"] = mismatches.empty();
    e["mismatches"] = mismatches;
    j["expected"] = e;
  }
  return j;
}

std::string report_to_text(const MetricReport& r, const CatalogExpectations* expected) {
  std::ostringstream os;
  os << "manifold: " << r.manifold << " (n = " << r.dim << ", tolerance " << format_double(r.tolerance) << ")\n";
  os << "f = " << format_double(r.f) << "   [(n-1) Lambda(rho) = " << format_double(r.f_trace) << "]\n";
  os << "eigenvalues of rho relative to omega: {" << join(r.eigenvalues, ", ") << "}\n";
  os << "classes:\n";
  for (const auto& [name, flag] : r.flags()) {
    char line[128];
    std::snprintf(line, sizeof line, "  %-24s %-3s  defect %.3e\n", name.c_str(), flag.value ? "yes" : "no", flag.defect);
    os << line;
  }
  os << "||del omega||^2 = " << format_double(r.del_omega_norm2) << ", integral of f omega_n = "
     << format_double(r.integral_f) << "\n";
  os << "*rho closed-form residual: " << format_double(r.star_rho_residual) << "\n";
  os << "implications consistent: " << yes_no(r.implications_consistent) << "\n";
  os << "rho = " << to_string(r.rho) << "\n";
  for (const auto& n : r.notes) os << "note: " << n << "\n";
  if (expected) {
    if (expected->published_eigenvalues)
      os << "eigenvalue discrepancy: published {" << join(*expected->published_eigenvalues, ", ") << "}, computed {"
         << join(r.eigenvalues, ", ") << "}\n";
    for (const auto& n : expected->notes) os << "catalog note: " << n << "\n";
    const auto mismatches = expectation_mismatches(r, *expected);
    os << "matches catalog expectations: " << yes_no(mismatches.empty()) << "\n";
    for (const auto& m : mismatches) os << "  mismatch: " << m << "\n";
  }
  return os.str();
}

Json pair_report_to_json(const PairReport& r) {
  Json j;
  j["f_pair"] = number(r.f_pair);
  j["f_pair_trace"] = number(r.f_pair_trace);
  j["star_residual"] = number(r.star_residual);
  j["pluriclosed"] = flag_to_json(r.pluriclosed);
  j["closed"] = flag_to_json(r.closed);
  j["integral_f_gamma"] = number(r.integral_f_gamma);
  j["rho_pair"] = form_to_json(r.rho_pair);
  j["star_rho_pair"] = form_to_json(r.star_rho_pair);
  return j;
}

Json identity_report_to_json(const IdentityReport& r) {
  Json j;
  j["suite"] = r.suite;
  j["manifold"] = r.manifold;
  j["metric"] = r.metric;
  j["tolerance"] = r.tolerance;
  j["all_passed"] = r.all_passed();
  j["max_residual"] = number(r.max_residual());
  j["failures"] = r.failures();
  j["skipped"] = r.skipped();
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    Json x{{"id", e.id}, {"anchor", e.anchor}, {"residual", number(e.residual)}, {"pass", e.pass}};
    if (e.skipped_reason) x["skipped_reason"] = *e.skipped_reason;
    if (e.note) x["note"] = *e.note;
    entries.push_back(x);
  }
  j["entries"] = entries;
  return j;
}

std::string identity_report_to_text(const IdentityReport& r) {
  std::ostringstream os;
  os << "suite " << r.suite << " on " << r.manifold << " (tolerance " << format_double(r.tolerance) << ")\n";
  os << "metric " << r.metric << "\n";
  for (const auto& e : r.entries) {
    const char* status = e.skipped() ? "SKIP" : (e.pass ? "PASS" : "FAIL");
    char line[256];
    std::snprintf(line, sizeof line, "  %-4s %-40s %.3e", status, e.id.c_str(), e.residual);
    os << line;
    if (e.skipped_reason) os << "  (" << *e.skipped_reason << ")";
    if (e.note) os << "  [" << *e.note << "]";
    os << "\n";
  }
  os << "passed " << (int(r.entries.size()) - r.failures() - r.skipped()) << ", failed " << r.failures() << ", skipped "
     << r.skipped() << ", max residual " << format_double(r.max_residual()) << "\n";
  return os.str();
}

Json search_result_to_json(const SearchResult& r) {
  Json j;
  j["target"] = r.target;
  j["family"] = r.family;
  j["best_params"] = doubles(r.best_params);
  j["best_defect"] = number(r.best_defect);
  j["best_raw_defect"] = number(r.best_raw_defect);
  j["best_restart"] = r.best_restart;
  j["evaluations"] = r.evaluations;
  j["best_metric"] = metric_to_json(r.best_metric);
  j["f_sign_observation"] = Json{{"positive_seen", r.f_seen_positive},
                                 {"negative_seen", r.f_seen_negative},
                                 {"zero_seen", r.f_seen_zero},
                                 {"sign_changed", r.f_sign_changed()}};
  Json trace = Json::array();
  for (const auto& t : r.trace)
    trace.push_back(Json{{"restart", t.restart}, {"evaluation", t.evaluation}, {"best_defect", number(t.best_defect)}});
  j["trace"] = trace;
  j["report"] = report_to_json(r.report);
  return j;
}

std::string search_result_to_text(const SearchResult& r) {
  std::ostringstream os;
  os << "search target " << r.target << " over the " << r.family << " family\n";
  os << "best normalized defect " << format_double(r.best_defect) << " (raw " << format_double(r.best_raw_defect)
     << ") after " << r.evaluations << " evaluations, restart " << r.best_restart << "\n";
  os << "best parameters {" << join(r.best_params, ", ") << "}\n";
  os << "f signs seen: positive " << yes_no(r.f_seen_positive) << ", negative " << yes_no(r.f_seen_negative)
     << ", zero " << yes_no(r.f_seen_zero) << " (sign changed: " << yes_no(r.f_sign_changed()) << ")\n";
  os << report_to_text(r.report);
  return os.str();
}

std::string search_trace_to_csv(const SearchResult& r) {
  std::ostringstream os;
  os << "restart,evaluation,best_defect\n";
  for (const auto& t : r.trace) os << t.restart << "," << t.evaluation << "," << format_double(t.best_defect) << "\n";
  return os.str();
}

Json scan_table_to_json(const ScanTable& t) {
  Json j;
  j["manifold"] = t.manifold;
  j["param"] = t.param;
  Json rows = Json::array();
  for (const auto& row : t.rows) {
    Json flags = Json::object();
    for (const auto& [name, flag] : row.report.flags()) flags[name] = flag.value;
    rows.push_back(Json{{"param", complex_to_json(tidy(row.param))},
                        {"f", number(row.report.f)},
                        {"flags", flags},
                        {"eigenvalues", doubles(row.report.eigenvalues)}});
  }
  j["rows"] = rows;
  return j;
}

std::string scan_table_to_csv(const ScanTable& t) {
  std::ostringstream os;
  os << t.param << ",f";
  const MetricReport empty;
  for (const auto& [name, flag] : empty.flags()) os << "," << name;
  os << ",eigenvalues\n";
  for (const auto& row : t.rows) {
    os << format_complex(tidy(row.param)) << "," << format_double(row.report.f);
    for (const auto& [name, flag] : row.report.flags()) os << "," << (flag.value ? "true" : "false");
    os << "," << join(row.report.eigenvalues, ";") << "\n";
  }
  return os.str();
}

std::string scan_table_to_text(const ScanTable& t) {
  std::ostringstream os;
  os << "scan of " << t.param << " on " << t.manifold << "\n";
  for (const auto& row : t.rows) {
    os << "  " << t.param << " = " << format_complex(tidy(row.param)) << ": f = " << format_double(row.report.f)
       << ", eigenvalues {" << join(row.report.eigenvalues, ", ") << "}, classes:";
    for (const auto& [name, flag] : row.report.flags())
      if (flag.value) os << " " << name;
    os << "\n";
  }
  return os.str();
}

}  // namespace starsplit
