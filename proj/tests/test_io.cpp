#include "starsplit/analysis.hpp"
#include "starsplit/catalog.hpp"
#include "starsplit/errors.hpp"
#include "starsplit/io.hpp"
#include "starsplit/verify.hpp"
#include "test_util.hpp"

using namespace starsplit;
using starsplit::testing::dist;

TEST_CASE("metric JSON round-trips byte for byte") {
  for (const auto& g : {HermitianMetric::diagonal({1.0, 2.5, 0.1}), random_metric(4, 3), random_metric(3, 8)}) {
    const std::string a = metric_to_json(g).dump();
    const auto back = metric_from_json(parse_json(a));
    CHECK(metric_to_json(back).dump() == a);
    CHECK(back.matrix() == g.matrix());
  }
}

TEST_CASE("metric JSON accepts rows, flat lists and a scale") {
  const auto rows = metric_from_json(parse_json(R"J({"type":"hermitian","matrix":[[2,[0,1]],[[0,-1],3]]})J"));
  const auto flat = metric_from_json(parse_json(R"J({"type":"hermitian","matrix":[2,[0,1],[0,-1],3]})J"));
  CHECK(rows.matrix() == flat.matrix());
  CHECK(rows.matrix()(0, 1) == cplx(0.0, 1.0));
  const auto scaled = metric_from_json(parse_json(R"J({"type":"diagonal","coeffs":[1,2],"scale":3})J"));
  CHECK(scaled.matrix()(1, 1) == cplx(6.0, 0.0));
  CHECK_THROWS_AS(metric_from_json(parse_json(R"J({"type":"diagonal","coeffs":[1,-2]})J")), InputError);
  CHECK_THROWS_AS(metric_from_json(parse_json(R"J({"type":"hermitian","matrix":[1,2,3]})J")), InputError);
  CHECK_THROWS_AS(metric_from_json(parse_json(R"J({"type":"hermitian","matrix":[[1,2],[3,1]]})J")), InputError);
  CHECK_THROWS_AS(metric_from_json(parse_json(R"J({"type":"hermitian","matrix":[[1,0],[0,-1]]})J")), InputError);
  CHECK_THROWS_AS(metric_from_json(parse_json(R"J({"type":"kahler"})J")), InputError);
  CHECK_THROWS_AS(metric_from_json(parse_json(R"J([1,2])J")), InputError);
}

TEST_CASE("form JSON round-trips") {
  const Form u = random_form(4, 2, 1, 9);
  const Json j = form_to_json(u);
  CHECK(dist(form_from_json(4, parse_json(j.dump())), u) == 0.0);
  CHECK(form_to_json(form_from_json(4, j)).dump() == j.dump());
}

TEST_CASE("pullback JSON round-trips") {
  const auto phi = catalog::iwasawa_rotation(std::polar(1.0, 0.3), std::polar(1.0, 1.1));
  const Json j = pullback_to_json(phi);
  CHECK(pullback_from_json(parse_json(j.dump())).matrix() == phi.matrix());
  CHECK(pullback_from_json(j["matrix"]).matrix() == phi.matrix());
}

TEST_CASE("manifold JSON parsing") {
  const char* text = R"J({
    "name": "heisenberg_like", "dim": 3,
    "parameters": {"a": {"default": "1+0i"}},
    "structure": {"phi3": {"(2,0)": [{"i": 1, "j": 2, "coeff": "-a"}]}}
  })J";
  const auto m = manifold_from_json(parse_json(text));
  CHECK(m.name() == "heisenberg_like");
  const auto iw = catalog::get("iwasawa3");
  CHECK(dist(m.d_phi(2), iw.manifold.d_phi(2)) < 1e-15);
  const auto rebound = manifold_from_json(parse_json(text), {{"a", 2.0}});
  CHECK(dist(rebound.d_phi(2), 2.0 * iw.manifold.d_phi(2)) < 1e-15);

  // A (0,2)-part would make the structure non-integrable as a complex structure.
  CHECK_THROWS_WITH_AS(
      manifold_from_json(parse_json(R"J({"dim":3,"structure":{"phi3":{"(0,2)":[{"i":1,"j":2,"coeff":1}]}}})J")),
      doctest::Contains("(0,2)"), InputError);
  CHECK_THROWS_AS(manifold_from_json(parse_json(R"J({"dim":3,"structure":{"phi4":{}}})J")), InputError);
  CHECK_THROWS_AS(manifold_from_json(parse_json(R"J({"dim":9,"structure":{}})J")), InputError);
  CHECK_THROWS_AS(manifold_from_json(parse_json(R"J({"dim":3,"structure":{"phi3":{"(2,0)":[{"i":1,"j":5,"coeff":1}]}}})J")),
                  InputError);
  CHECK_THROWS_AS(
      manifold_from_json(parse_json(R"J({"dim":3,"structure":{"phi3":{"(2,0)":[{"i":1,"j":2,"coeff":"2*"}]}}})J")),
      InputError);
  // d^2 != 0 is rejected when loading.
  CHECK_THROWS_WITH_AS(manifold_from_json(parse_json(R"J({"dim":3,"structure":{
        "phi1":{"(2,0)":[{"i":1,"j":3,"coeff":1}]},
        "phi3":{"(2,0)":[{"i":1,"j":2,"coeff":1}]}}})J")),
                       doctest::Contains("d^2"), InputError);
}

TEST_CASE("bad JSON text") {
  CHECK_THROWS_AS(parse_json("{\"dim\": 3,"), InputError);
  CHECK_THROWS_AS(read_text_file("/nonexistent/starsplit.json"), InputError);
  CHECK_THROWS_AS(complex_from_json(parse_json("[1,2,3]")), InputError);
  CHECK(complex_from_json(parse_json("\"2-0.5i\"")) == cplx(2.0, -0.5));
}

TEST_CASE("report JSON round-trips and is stable") {
  const auto e = catalog::get("calabi_eckmann", {{"t", cplx(0.0, 0.25)}});
  const auto r = classify(e.manifold, e.metric);
  const Json j = report_to_json(r, &e.expectations);
  CHECK(parse_json(j.dump()).dump() == j.dump());
  CHECK(j["f"].get<double>() == doctest::Approx(2.0));
  CHECK(j["expected"]["matches"] == true);
  const auto text = report_to_text(r, &e.expectations);
  CHECK(text.find("f") != std::string::npos);

  const auto ir = verify_commutation_suite(e.manifold, e.metric);
  const Json ij = identity_report_to_json(ir);
  CHECK(parse_json(ij.dump()).dump() == ij.dump());
  CHECK(ij["all_passed"] == true);
}

TEST_CASE("format_double round-trips") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-300, 6.02214076e23}) CHECK(std::stod(format_double(x)) == x);
  CHECK(format_double(std::nan("")) == "nan");
}
