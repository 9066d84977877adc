#include <doctest.h>

#include <cmath>
#include <json.hpp>

#include "reelab/dur.hpp"
#include "reelab/inequalities.hpp"

using namespace reelab;

namespace {

SolverConfig quick() {
  SolverConfig c;
  c.restarts = 8;
  c.sweeps = 100;
  return c;
}

}  // namespace

TEST_CASE("Werner gap") {
  const auto flat = werner_gap(0.0, quick());
  CHECK(flat.pass);
  CHECK(flat.margin == doctest::Approx(0.0).epsilon(1e-6));

  const auto strong = werner_gap(0.9, quick());
  CHECK(strong.pass);
  REQUIRE(strong.middle.has_value());
  CHECK(*strong.middle > 0.0);
  CHECK(strong.margin > 0.0);

  CHECK(werner_state(1.0 / 3.0).matrix()(0, 0).real() == doctest::Approx(1.0 / 6.0));
}

TEST_CASE("reduced Dicke states saturate the entropy-corrected bound") {
  for (auto [n, k] : {std::pair{4, 2}, {3, 2}, {5, 1}, {6, 3}}) {
    const auto r = plenio_vedral_bound(DickeIndex(n, k));
    CHECK(r.pass);
    CHECK(std::abs(r.margin) < 1e-6);
  }
}

TEST_CASE("trace-down") {
  const auto zero = trace_down_report(DickeIndex(5, 0));
  CHECK(zero.size() == 4);
  for (const auto& st : zero) CHECK(st.e_r == doctest::Approx(0.0));

  const auto w = trace_down_report(DickeIndex(4, 1));
  REQUIRE(w.size() == 3);
  CHECK(w[0].e_r == doctest::Approx(3 * std::log2(4.0 / 3.0)).epsilon(1e-10));
  CHECK(w[1].mixture.weight(1) == doctest::Approx(0.75));
  for (std::size_t i = 1; i < w.size(); ++i) CHECK(w[i].e_r <= w[i - 1].e_r + 1e-12);
}

TEST_CASE("overlap bounds on random product states") {
  const auto q = overlap_bound_suite(5, 2, 500, 2008);
  CHECK(q.id == "overlap-maclaurin");
  CHECK(q.pass);
  const auto t = overlap_bound_suite(4, 3, 500, 2008);
  CHECK(t.id == "overlap-permanent");
  CHECK(t.pass);
  CHECK_THROWS_AS(overlap_bound_suite(4, 1, 10, 1), ValidationError);
}

TEST_CASE("pure-state chain") {
  const auto w = check_pure_chain(dicke_state_vector(DickeIndex(3, 2)), "|S(3,2)>", quick());
  CHECK(w.pass);
  REQUIRE(w.right.has_value());
  CHECK(*w.right == doctest::Approx(2 * std::log2(1.5)).epsilon(1e-8));
}

TEST_CASE("LR >= E_R >= E_log - S on the bound-entangled family") {
  const DurParams p{4, 0.5};
  Inequality6Input in{"rho_4(0.5)", dur_state(p), dur_e_log(p), dur_ree(p), std::nullopt, true};
  const auto r = check_inequality6(in, quick());
  CHECK(r.pass);
  CHECK(r.id == "lr-er-elog-strict");
  CHECK(r.method == "closed-form");
}

TEST_CASE("report formats") {
  std::vector<CheckReport> reports{plenio_vedral_bound(DickeIndex(4, 2)), werner_gap(0.0, quick())};
  const auto j = nlohmann::json::parse(reports_to_json(reports));
  REQUIRE(j.is_array());
  CHECK(j.size() == 2);
  CHECK(j[0]["id"] == "plenio-vedral");
  CHECK(j[1]["pass"] == true);
  const auto table = reports_to_table(reports);
  CHECK(table.find("werner-entropy-gap") != std::string::npos);
}
