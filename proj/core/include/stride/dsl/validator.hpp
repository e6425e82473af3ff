#pragma once

#include <span>
#include <string>

#include "stride/dsl/ast.hpp"
#include "stride/dsl/diagnostics.hpp"

namespace stride::dsl {

/// Checks a parsed program against the observation variables an environment
/// declares.
///
/// Errors: references to names that are neither declared variables, built-in
/// constants nor earlier definitions (undefined_variable, with the exact span
/// of the reference); definitions that repeat or shadow another name
/// (duplicate_component); structural violations of programs assembled in code
/// (no component, excessive depth, non-finite literals).
///
/// Warnings: declared observation variables the program never reads.
/// A program is valid iff the result has no errors.
Diagnostics validate(const RewardProgram& program, std::span<const std::string> variables);

}  // namespace stride::dsl
