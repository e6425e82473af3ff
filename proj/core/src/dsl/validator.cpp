#include "stride/dsl/validator.hpp"

#include <cmath>
#include <set>

namespace stride::dsl {

namespace {

struct Scope
{
  std::set<std::string, std::less<>> observations;
  std::set<std::string, std::less<>> definitions;
  std::set<std::string, std::less<>> used_observations;
};

void check_expr(const Expr& e, Scope& scope, Diagnostics& diags)
{
  switch (e.op) {
    case Op::literal:
      if (!std::isfinite(e.value)) {
        diags.error(DiagnosticCode::non_finite_literal, e.span, "literal is not a finite number");
      }
      return;
    case Op::variable: {
      double ignored = 0.0;
      if (scope.definitions.contains(e.name) || builtin_constant(e.name, ignored)) return;
      if (scope.observations.contains(e.name)) {
        scope.used_observations.insert(e.name);
        return;
      }
      diags.error(DiagnosticCode::undefined_variable, e.span,
                  "'" + e.name + "' is not an observation variable or an earlier definition");
      return;
    }
    default:
      for (const auto& a : e.args) check_expr(a, scope, diags);
  }
}

}  // namespace

Diagnostics validate(const RewardProgram& program, std::span<const std::string> variables)
{
  Diagnostics diags;
  Scope scope;
  scope.observations.insert(variables.begin(), variables.end());

  for (const auto& def : program.definitions) {
    if (def.expr.depth() > kMaxDepth) {
      diags.error(DiagnosticCode::depth_exceeded, def.expr.span,
                  "expression nesting exceeds the limit of " + std::to_string(kMaxDepth));
    } else {
      check_expr(def.expr, scope, diags);
    }

    double ignored = 0.0;
    if (scope.definitions.contains(def.name)) {
      diags.error(DiagnosticCode::duplicate_component, def.name_span, "'" + def.name + "' is already defined");
    } else if (scope.observations.contains(def.name) || builtin_constant(def.name, ignored)) {
      diags.error(DiagnosticCode::duplicate_component, def.name_span,
                  "'" + def.name + "' shadows a variable provided by the environment");
    }
    scope.definitions.insert(def.name);
  }

  if (program.total.depth() > kMaxDepth) {
    diags.error(DiagnosticCode::depth_exceeded, program.total.span,
                "expression nesting exceeds the limit of " + std::to_string(kMaxDepth));
  } else {
    check_expr(program.total, scope, diags);
  }

  if (program.component_count() == 0) {
    diags.error(DiagnosticCode::duplicate_component, program.total_span, "program defines no component");
  }

  for (const auto& v : variables) {
    if (!scope.used_observations.contains(v)) {
      diags.warning(DiagnosticCode::unused_variable, Span{}, "observation variable '" + v + "' is never used");
    }
  }
  return diags;
}

}  // namespace stride::dsl
