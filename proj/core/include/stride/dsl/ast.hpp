#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace stride::dsl {

/// Byte range in the program source.
struct Span
{
  std::size_t offset = 0;
  std::size_t length = 0;
};

enum class Op : std::uint8_t
{
  literal,
  variable,
  // unary
  neg,
  abs,
  exp,
  tanh,
  sqrt,
  log,
  // binary
  add,
  sub,
  mul,
  div,
  pow,
  min,
  max,
  // ternary
  clip,
};

/// Number of operands an operator takes.
int arity(Op op);

/// Function-call spelling of an operator ("tanh", "clip", ...), empty for
/// operators written infix or as atoms.
std::string_view function_name(Op op);

/// Looks up a built-in function by name; returns false if `name` is not one.
bool function_from_name(std::string_view name, Op& op);

bool is_reserved_word(std::string_view name);

/// Expression tree node. Children are held by value.
struct Expr
{
  Op op = Op::literal;
  double value = 0.0;  // literal
  std::string name;    // variable
  std::vector<Expr> args;
  Span span;

  static Expr literal(double v, Span span = {});
  static Expr variable(std::string name, Span span = {});
  static Expr unary(Op op, Expr operand, Span span = {});
  static Expr binary(Op op, Expr lhs, Expr rhs, Span span = {});
  static Expr clip(Expr x, Expr lo, Expr hi, Span span = {});

  /// Depth of the tree; a single leaf has depth 1.
  int depth() const;
};

/// Structural equality: compares operators, names, literal values and
/// children, ignoring source spans.
bool structurally_equal(const Expr& a, const Expr& b);

inline constexpr int kMaxDepth = 64;

/// Names every program may reference without declaring them.
inline constexpr std::string_view kBuiltinConstants[] = {"pi"};
bool builtin_constant(std::string_view name, double& value);

enum class DefinitionKind : std::uint8_t
{
  let,
  component,
};

struct Definition
{
  DefinitionKind kind = DefinitionKind::component;
  std::string name;
  Expr expr;
  Span span;       // whole statement
  Span name_span;  // identifier only
};

/// A reward program: ordered `let`/`component` definitions followed by the
/// `total` expression. Definitions are visible to everything after them.
struct RewardProgram
{
  std::vector<Definition> definitions;
  Expr total;
  Span total_span;

  std::vector<std::string> component_names() const;
  std::size_t component_count() const;
};

bool structurally_equal(const RewardProgram& a, const RewardProgram& b);

enum class Origin : std::uint8_t
{
  llm,
  scripted,
  human_init,
};

std::string_view to_string(Origin origin);
Origin origin_from_string(std::string_view s);

/// Program text plus where it came from. Both are fixed at construction.
class RewardSource
{
public:
  RewardSource(std::string text, Origin origin);

  const std::string& text() const { return text_; }
  Origin origin() const { return origin_; }

private:
  std::string text_;
  Origin origin_;
};

}  // namespace stride::dsl
