#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "stride/dsl/ast.hpp"

namespace stride::dsl {

struct ComponentValues
{
  double total = 0.0;
  std::map<std::string, double> per_component;
};

/// Why an evaluation produced no value: which definition (or "total") and
/// which sub-expression went non-finite.
struct EvalError
{
  std::string definition;
  Span span;
  std::string message;

  std::string describe() const;
};

class EvaluationFailure : public std::runtime_error
{
public:
  explicit EvaluationFailure(EvalError error);
  const EvalError& error() const { return error_; }

private:
  EvalError error_;
};

/// Reusable per-thread buffers for CompiledProgram::run.
struct EvalScratch
{
  std::vector<double> slots;
  std::vector<double> stack;
};

/// A reward program lowered to a flat stack-machine instruction list with
/// every name resolved to a slot index, so a step of evaluation does no
/// lookups and no allocation.
///
/// Inputs are bound positionally in the order given at compile time.
/// Every intermediate value is checked; the first non-finite one aborts the
/// run with an EvalError.
class CompiledProgram
{
public:
  /// Throws std::invalid_argument if the program references a name that is
  /// neither an input, a built-in constant nor an earlier definition (i.e.
  /// the program was not validated against these inputs).
  static CompiledProgram compile(const RewardProgram& program, std::span<const std::string> inputs);

  std::size_t input_count() const { return input_count_; }
  const std::vector<std::string>& component_names() const { return component_names_; }

  EvalScratch make_scratch() const;

  /// Evaluates the program. On success writes one value per component (in
  /// declaration order) into `components` and the total into `total`.
  std::optional<EvalError> run(std::span<const double> inputs, EvalScratch& scratch, std::span<double> components,
                               double& total) const;

private:
  enum class Code : std::uint8_t
  {
    push,
    load,
    neg,
    abs,
    exp,
    tanh,
    sqrt,
    log,
    add,
    sub,
    mul,
    div,
    pow,
    min,
    max,
    clip,
    store,
  };

  struct Instr
  {
    Code code;
    std::uint32_t index;  // slot for load/store, site for arithmetic
    double value;         // push
  };

  struct Site
  {
    std::uint32_t definition;  // index into definition_names_, or total
    Span span;
  };

  void emit(const Expr& e, std::uint32_t definition, const std::map<std::string, std::uint32_t, std::less<>>& names);

  std::vector<Instr> code_;
  std::vector<Site> sites_;
  std::vector<std::string> definition_names_;  // last entry is "total"
  std::vector<std::uint32_t> component_slots_;
  std::vector<std::string> component_names_;
  std::size_t input_count_ = 0;
  std::size_t slot_count_ = 0;
  std::size_t max_stack_ = 0;
  std::uint32_t total_slot_ = 0;
};

/// Evaluates a validated program against named bindings.
/// Throws EvaluationFailure when any value becomes non-finite.
ComponentValues evaluate(const RewardProgram& program, const std::map<std::string, double>& bindings);

}  // namespace stride::dsl
