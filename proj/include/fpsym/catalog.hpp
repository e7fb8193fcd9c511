// The generator catalog: point symmetries V1..V6 and V_alpha of the
// governing equation, point symmetries W1..W6 and W_beta of the auxiliary
// potential system, the potentiality filter, the projections Y1, Y2, and
// the commutator table over {V1..V6}.
//
// Loading is self-verifying: every record must pass verify_generator
// against its target system, or the load aborts with the failing residual.
#pragma once

#include "fpsym/determining.hpp"

#include <optional>
#include <string>
#include <vector>

namespace fpsym {

struct GeneratorRecord {
  std::string id;        // V1..V6, Valpha, W1..W6, Wbeta, Y1, Y2
  std::string system_id; // "fpe" or "auxiliary"
  std::string label;
  VectorField field;
  std::vector<FormalRule> rules; // defining equations of formal symbols
  std::string note;              // nonempty when the loaded form deviates from a claimed one
};

struct Catalog {
  FpeParams params;
  PDESystem fpe;
  PDESystem aux;
  std::vector<GeneratorRecord> point;     // V1..V6, Valpha
  std::vector<GeneratorRecord> potential; // W1..W6, Wbeta
};

Catalog load_catalog(const FpeParams& p = FpeParams::symbolic());

const GeneratorRecord& find_generator(const Catalog& c, const std::string& id);

// The claimed d/dv coefficient of W5 that fails verification, kept for the
// discrepancy report (the loaded coefficient differs by a2*v*e^{-2a2t}).
Expr w5_phi_claimed_variant(const Catalog& c);

// True iff xi, tau, or eta depends on the potential v.
bool potentiality_filter(const GeneratorRecord& g);

// Drops the d/dv component; W3 -> Y1, W5 -> Y2.
GeneratorRecord project_potential_symmetry(const GeneratorRecord& g);

// Reference fields for the projected potential symmetries, as claimed.
VectorField y1_reference(const Catalog& c);
VectorField y2_reference(const Catalog& c);

// ---- commutator table -------------------------------------------------------

struct TableEntry {
  std::string left, right;
  // Combination over {V1..V6} with parameter coefficients, or a formal
  // image V_{expr} for brackets involving V_alpha. A failed basis fit is a
  // table violation and reported through `violation`.
  std::vector<std::pair<std::string, Expr>> combination;
  std::optional<Expr> image;
  std::string violation;
};

struct CommutatorTable {
  std::vector<TableEntry> entries; // all unordered pairs, left < right in catalog order
};

std::string to_string(const TableEntry& e);

// Computes every pairwise bracket of {V1..V6, Valpha} and expresses it in
// the basis (exact linear solve over the parameter field).
CommutatorTable commutator_table(const Catalog& c);

// The claimed table contents, used as the diff target.
CommutatorTable table_golden(const Catalog& c);

struct TableDiff {
  std::string left, right;
  std::string computed, expected;
};

std::vector<TableDiff> diff_tables(const CommutatorTable& computed, const CommutatorTable& golden);

} // namespace fpsym
