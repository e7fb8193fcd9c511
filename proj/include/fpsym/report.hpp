// Reproducible verification runs: configuration, the claim registry, and
// the report layer shared by the command-line tool and the acceptance
// suite. Structured reports follow a single self-describing JSON schema so
// they can be golden-file tested and diffed.
#pragma once

#include "fpsym/catalog.hpp"
#include "fpsym/numeric.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace fpsym {

inline constexpr const char* kToolkitVersion = "0.1.0";
inline constexpr const char* kReportSchema = "fpsym-report/1";

struct RunConfig {
  std::optional<Rational> a1; // unset = symbolic
  std::optional<Rational> a2; // unset = symbolic; zero rejected
  GridSpec grid;
  double tol_num = 1e-6;
  double tol_eq = 1e-9;
  unsigned long long rng_seed = 20240501ull;
  bool strict = false;
  enum class Format { text, structured } format = Format::text;

  // Fails with a config error when a2 is bound to zero or only one of the
  // two parameters is bound.
  FpeParams params() const;
  bool numeric() const { return a1.has_value() && a2.has_value(); }
};

struct ReportItem {
  std::string id;
  std::string anchor; // stable descriptor of the claim being checked
  std::string status; // pass | fail | verified | refuted | inconclusive | info
  bool ok = true;
  bool inconclusive = false;
  std::vector<std::string> details;
};

struct Report {
  std::string command;
  nlohmann::json inputs;
  std::vector<ReportItem> items;
  double timing_ms = 0.0;

  // 0 all pass, 1 some failure/refutation, 3 inconclusive results only
  int exit_code() const;
  std::string to_text() const;
  nlohmann::json to_json() const;
};

// ---- claim registry ---------------------------------------------------------

struct Claim {
  std::string id;
  std::string anchor;
  std::string expression; // text in the solution grammar
  std::map<std::string, Rational> defaults; // extra parameter bindings
  std::optional<Rational> requires_a2;
  std::string provenance; // "claimed" or "derived"
};

const std::vector<Claim>& claim_registry();
const Claim& find_claim(const std::string& id);

// Printed determining systems used as membership targets.
std::vector<std::string> claimed_point_system();
std::vector<std::string> claimed_auxiliary_system();

// ---- commands ----------------------------------------------------------------

Report cmd_verify(const std::string& target, const RunConfig& cfg); // point|potential|all
Report cmd_table(const RunConfig& cfg);
Report cmd_generate(const std::string& seed_expr, const std::vector<std::string>& ops,
                    const RunConfig& cfg);
Report cmd_check_expr(const std::string& expr_text, const RunConfig& cfg);
Report cmd_check_claim(const std::string& claim_id, const RunConfig& cfg);
Report cmd_determining(const std::string& system, const RunConfig& cfg);

// Structured round-trip for the commutator table.
nlohmann::json table_to_json(const CommutatorTable& table);
CommutatorTable table_from_json(const nlohmann::json& j, const Catalog& c);

} // namespace fpsym
