// Finite-difference residual oracle.
//
// Closed-form candidates are sampled on a uniform grid (the same spacing on
// both axes) and the governing equation's residual is formed with
// second-order central differences at interior nodes, in time as well as in
// space. Norms are tracked across dyadic refinements; the convergence order
// estimate and a Richardson extrapolation from the finest pair decide the
// verdict. Residuals are normalized by max(1, |u|_inf) so Gaussian-envelope
// solutions do not inflate absolute errors.
#pragma once

#include "fpsym/solutions.hpp"

#include <string>
#include <vector>

namespace fpsym {

struct GridSpec {
  double x0 = -2.0, x1 = 2.0;
  double t0 = 0.1, t1 = 1.1;
  double h = 0.02;
  int levels = 3;
};

struct LevelResult {
  double h;
  double max_norm;
  double rms;
};

enum class Verdict { verified, refuted, inconclusive };

std::string to_string(Verdict v);

struct ResidualReport {
  GridSpec grid;
  double tol = 1e-6;
  std::vector<LevelResult> levels;
  std::vector<double> orders; // log2 of successive max-norm ratios
  double extrapolated = 0.0;  // Richardson limit estimate from the finest pair
  bool exact_zero = false;    // every norm at rounding level
  Verdict verdict = Verdict::inconclusive;
};

// Requires numeric parameters and an expression whose only free symbols are
// x and t after binding them.
ResidualReport fd_residual(const SolutionRecord& s, const FpeParams& p, const GridSpec& grid,
                           double tol = 1e-6);

// Applies the verdict to the record's status (inconclusive leaves it alone);
// a one-line report summary lands in the provenance note.
SolutionRecord adjudicate(SolutionRecord s, const FpeParams& p, const GridSpec& grid,
                          double tol = 1e-6);

struct ProbeOptions {
  int samples = 20;
  double tol = 1e-9;
  unsigned long long seed = 20240501ull;
};

struct ProbeResult {
  bool equal = false;
  double confidence = 0.0; // fraction of valid sample points within tolerance
  bool conclusive = false; // at least half the samples evaluated
};

// Relative-difference test at random points; backs the expression-level
// equality fallback with an explicit confidence readout.
ProbeResult identity_probe(const Expr& lhs, const Expr& rhs, const SymbolContext& ctx,
                           const ProbeOptions& opt = {});

} // namespace fpsym
