#pragma once

#include <string>

#include "stride/dsl/ast.hpp"

namespace stride::dsl {

/// Shortest decimal spelling of a literal that reads back to the same double;
/// always contains '.' or an exponent ("2.0", "-0.5", "1e-07").
std::string format_literal(double value);

std::string canonical_print(const Expr& expr);

/// Deterministic, whitespace-normalized source: one statement per line,
/// single spaces around binary operators, minimal parentheses, no comments.
/// parse(canonical_print(p)) is structurally equal to p.
std::string canonical_print(const RewardProgram& program);

}  // namespace stride::dsl
