// Text form of expressions.
//
// Grammar:
//   expr   := ['+'|'-'] term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := base ['^' ['-'] integer]
//   base   := integer | '(' expr ')' | 'exp' '(' expr ')' | ident ['(' idents ')']
//
// Identifiers resolve against a SymbolContext. Jet coordinates are spelled
// u, u_x, u_t, u_xx, u_xt, ...; function symbols carry their argument list
// and optional derivative suffix: alpha(x,t), alpha_xt(x,t), q1_t(t).
// Numbers are integers; ratios are ordinary division, e.g. 1/2. Exponents
// must be integers. a1 and a2 are reserved parameter names.
#pragma once

#include "fpsym/expr.hpp"

#include <string>

namespace fpsym {

// Parses and canonicalizes; throws Error{parse|undeclared|domain} with a
// position-tagged message on malformed input.
Expr parse(const std::string& text, const SymbolContext& ctx);

} // namespace fpsym
