#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "fpsym/report.hpp"

using namespace fpsym;

namespace {

RunConfig numeric_cfg(long a1, long a2) {
  RunConfig cfg;
  cfg.a1 = Rational(a1);
  cfg.a2 = Rational(a2);
  return cfg;
}

nlohmann::json scrubbed(const Report& rep) {
  nlohmann::json j = rep.to_json();
  j["timing_ms"] = 0.0;
  return j;
}

} // namespace

TEST_CASE("verify command") {
  RunConfig cfg; // symbolic
  Report rep = cmd_verify("all", cfg);
  CHECK(rep.exit_code() == 0);
  CHECK(rep.items.size() == 7 + 7 + 1 + 2); // generators + filter + projections

  int passes = 0;
  bool w5_note = false, filter_ok = false;
  for (const ReportItem& i : rep.items) {
    if (i.ok) ++passes;
    if (i.id == "W5")
      for (const std::string& d : i.details)
        if (d.find("note:") != std::string::npos) w5_note = true;
    if (i.id == "potentiality-filter")
      for (const std::string& d : i.details)
        if (d == "selected: W3 W5") filter_ok = true;
  }
  CHECK(passes == static_cast<int>(rep.items.size()));
  CHECK(w5_note);
  CHECK(filter_ok);

  CHECK_THROWS_AS(cmd_verify("sideways", cfg), Error);

  RunConfig zero;
  zero.a1 = Rational(0);
  zero.a2 = Rational(0);
  CHECK_THROWS_AS(cmd_verify("point", zero), Error);
}

TEST_CASE("table command and structured round-trip") {
  RunConfig cfg;
  Report rep = cmd_table(cfg);
  CHECK(rep.exit_code() == 0);
  CHECK(rep.items.size() == 22); // 21 entries + diff summary
  CHECK(rep.items.back().id == "table-diff");
  CHECK(rep.items.back().details[0] == "diffs: 0");

  Catalog cat = load_catalog();
  CommutatorTable computed = commutator_table(cat);
  CommutatorTable round = table_from_json(table_to_json(computed), cat);
  CHECK(diff_tables(computed, round).empty());
  CHECK(diff_tables(round, table_golden(cat)).empty());
}

TEST_CASE("generate command") {
  RunConfig cfg;
  Report rep = cmd_generate("exp(-a2*t)", {"F1", "F1"}, cfg);
  CHECK(rep.exit_code() == 0);
  REQUIRE(rep.items.size() == 3);
  CHECK(rep.items[2].status == "symbolically-verified");
  CHECK(rep.items[2].details[0].find("3*a2^2") != std::string::npos);

  Report zeros = cmd_generate("0", {"F3"}, cfg);
  CHECK(zeros.exit_code() == 0);
  for (const auto& i : zeros.items) CHECK(i.details[0] == "expression: 0");
}

TEST_CASE("check command on expressions") {
  RunConfig cfg;
  Report rep = cmd_check_expr("-(x + a1/a2)*exp(-2*a2*t)", cfg);
  CHECK(rep.exit_code() == 0);
  CHECK(rep.items[0].status == "symbolically-verified");

  Report bad = cmd_check_expr("1", cfg);
  CHECK(bad.exit_code() == 1);
  CHECK(bad.items[0].status == "refuted");

  CHECK_THROWS_AS(cmd_check_expr("u", cfg), Error);          // undeclared symbol
  CHECK_THROWS_AS(cmd_check_expr("x +", cfg), Error);        // syntax
  CHECK_THROWS_AS(cmd_check_claim("no-such-claim", cfg), Error);
}

TEST_CASE("check command on registry claims") {
  Report y1 = cmd_check_claim("y1-final", numeric_cfg(0, 1));
  CHECK(y1.exit_code() == 1);
  CHECK(y1.items[0].status == "refuted");
  bool stable = false, mismatch = false;
  for (const std::string& d : y1.items[0].details) {
    if (d.find("stable across two grid refinements") != std::string::npos) stable = true;
    if (d.find("MISMATCH") != std::string::npos) mismatch = true;
  }
  CHECK(stable);
  CHECK(mismatch);

  Report y1c = cmd_check_claim("y1-corrected", numeric_cfg(0, 1));
  CHECK(y1c.exit_code() == 0);
  CHECK(y1c.items[0].status == "symbolically-verified");

  Report y2 = cmd_check_claim("y2-final", numeric_cfg(1, 2));
  CHECK(y2.exit_code() == 1);
  CHECK(y2.items[0].status == "refuted");

  // the a2 = 2 requirement is enforced
  CHECK_THROWS_AS(cmd_check_claim("y2-final", numeric_cfg(0, 1)), Error);

  Report g4 = cmd_check_claim("g4", RunConfig{});
  CHECK(g4.exit_code() == 0);
}

TEST_CASE("determining command") {
  RunConfig cfg;
  Report fpe = cmd_determining("fpe", cfg);
  CHECK(fpe.exit_code() == 0);
  bool mutual = false;
  for (const auto& i : fpe.items)
    if (i.id == "membership") mutual = i.status == "mutual-containment";
  CHECK(mutual);

  Report aux = cmd_determining("auxiliary", cfg);
  CHECK(aux.exit_code() == 0); // informational by default
  int not_shown = 0;
  for (const auto& i : aux.items)
    if (i.status == "not-shown") ++not_shown;
  CHECK(not_shown > 0); // the deeper integrability members are itemized

  RunConfig strict = cfg;
  strict.strict = true;
  CHECK(cmd_determining("auxiliary", strict).exit_code() == 1);
  CHECK(cmd_determining("fpe", strict).exit_code() == 0);

  CHECK_THROWS_AS(cmd_determining("unknown", cfg), Error);
}

TEST_CASE("structured reports are reproducible") {
  RunConfig cfg;
  cfg.rng_seed = 424242;
  nlohmann::json a = scrubbed(cmd_table(cfg));
  nlohmann::json b = scrubbed(cmd_table(cfg));
  CHECK(a.dump() == b.dump());

  nlohmann::json c = scrubbed(cmd_check_claim("y1-final", numeric_cfg(0, 1)));
  nlohmann::json d = scrubbed(cmd_check_claim("y1-final", numeric_cfg(0, 1)));
  CHECK(c.dump() == d.dump());

  // schema identification is embedded
  CHECK(a["schema"] == kReportSchema);
  CHECK(a["version"] == kToolkitVersion);
}
