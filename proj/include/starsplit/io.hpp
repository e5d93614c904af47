#pragma once

#include <string>

#include <json.hpp>

#include "starsplit/analysis.hpp"
#include "starsplit/catalog.hpp"
#include "starsplit/manifold.hpp"
#include "starsplit/metric.hpp"
#include "starsplit/search.hpp"
#include "starsplit/verify.hpp"

namespace starsplit {

// Insertion-ordered JSON so that serialize -> parse -> serialize is byte-identical.
using Json = nlohmann::ordered_json;

// Fixed 17-significant-digit rendering used by the text and CSV emitters.
std::string format_double(double x);

// Reads a whole file; throws InputError when it cannot be opened.
std::string read_text_file(const std::string& path);
// Parses JSON text; throws InputError with the parser diagnostic on failure.
Json parse_json(const std::string& text, const std::string& origin = "input");

// Manifold format:
//   {"name", "dim", "parameters": {name: {"default": [re, im]}},
//    "structure": {"phi<k>": {"(2,0)": [{"i", "j", "coeff"}], "(1,1)": [{"i", "jbar", "coeff"}]}}}
// with 1-based indices and coefficients given as expressions (strings), numbers or
// [re, im] pairs. Any other bidegree key, in particular "(0,2)", is rejected. The
// result is validated (d^2 = 0 and the invariant Stokes check).
InvariantComplexManifold manifold_from_json(const Json& j, const Bindings& overrides = {});
// Parameters are written with their current bound values as defaults.
Json manifold_to_json(const InvariantComplexManifold& m);

// Metric format: {"type": "diagonal", "coeffs": [a_1..a_n]} with positive reals, or
// {"type": "hermitian", "matrix": rows of [re, im] entries (or a flat row-major list
// of n^2 entries)}, plus optional "scale".
HermitianMetric metric_from_json(const Json& j);
Json metric_to_json(const HermitianMetric& g);

// Pullback matrix format: {"matrix": rows of [re, im] (or real) entries}.
PullbackMap pullback_from_json(const Json& j);
Json pullback_to_json(const PullbackMap& phi);

Json complex_to_json(cplx c);
cplx complex_from_json(const Json& j);

// Form dump: {monomial label: [re, im]}, labels as in "phi1^phi2^phibar3".
Json form_to_json(const Form& u);
Form form_from_json(int n, const Json& j);

// Metric report, with the catalog expectations compared against it when given.
Json report_to_json(const MetricReport& r, const CatalogExpectations* expected = nullptr);
// Human-readable rendering of the same report.
std::string report_to_text(const MetricReport& r, const CatalogExpectations* expected = nullptr);
// The differences between a report and the catalog expectations; empty when they agree.
std::vector<std::string> expectation_mismatches(const MetricReport& r, const CatalogExpectations& expected);

Json pair_report_to_json(const PairReport& r);
Json identity_report_to_json(const IdentityReport& r);
std::string identity_report_to_text(const IdentityReport& r);

Json search_result_to_json(const SearchResult& r);
std::string search_result_to_text(const SearchResult& r);
std::string search_trace_to_csv(const SearchResult& r);

Json scan_table_to_json(const ScanTable& t);
std::string scan_table_to_csv(const ScanTable& t);
std::string scan_table_to_text(const ScanTable& t);

}  // namespace starsplit
