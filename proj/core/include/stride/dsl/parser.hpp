#pragma once

#include <optional>
#include <string_view>

#include "stride/dsl/ast.hpp"
#include "stride/dsl/diagnostics.hpp"

namespace stride::dsl {

struct ParseResult
{
  std::optional<RewardProgram> program;  // set iff diagnostics has no errors
  Diagnostics diagnostics;

  bool ok() const { return program.has_value(); }
};

/// Parses reward-language source.
///
/// Grammar (statements end at a newline or ';', newlines inside parentheses
/// or after a binary operator continue the statement):
///
///   program    := { statement } total_stmt
///   statement  := "let" NAME "=" expr | "component" NAME "=" expr
///   total_stmt := "total" "=" expr
///   expr       := term { ("+" | "-") term }
///   term       := unary { ("*" | "/") unary }
///   unary      := "-" unary | primary
///   primary    := NUMBER | NAME | NAME "(" expr { "," expr } ")" | "(" expr ")"
///
/// A '-' directly followed by a number token is folded into a negative
/// literal. Structural rules checked here: unique definition names, at least
/// one component, exactly one `total` as the final statement, finite
/// literals and tree depth at most kMaxDepth.
ParseResult parse(std::string_view text);
ParseResult parse(const RewardSource& source);

}  // namespace stride::dsl
