#include "stride/dsl/ast.hpp"

#include <algorithm>
#include <numbers>
#include <stdexcept>

namespace stride::dsl {

namespace {

struct FunctionEntry
{
  std::string_view name;
  Op op;
};

constexpr FunctionEntry kFunctions[] = {
    {"abs", Op::abs}, {"exp", Op::exp}, {"tanh", Op::tanh}, {"sqrt", Op::sqrt}, {"log", Op::log},
    {"pow", Op::pow}, {"min", Op::min}, {"max", Op::max},   {"clip", Op::clip},
};

}  // namespace

int arity(Op op)
{
  switch (op) {
    case Op::literal:
    case Op::variable:
      return 0;
    case Op::neg:
    case Op::abs:
    case Op::exp:
    case Op::tanh:
    case Op::sqrt:
    case Op::log:
      return 1;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div:
    case Op::pow:
    case Op::min:
    case Op::max:
      return 2;
    case Op::clip:
      return 3;
  }
  return 0;
}

std::string_view function_name(Op op)
{
  for (const auto& f : kFunctions) {
    if (f.op == op) return f.name;
  }
  return {};
}

bool function_from_name(std::string_view name, Op& op)
{
  for (const auto& f : kFunctions) {
    if (f.name == name) {
      op = f.op;
      return true;
    }
  }
  return false;
}

bool is_reserved_word(std::string_view name)
{
  Op ignored;
  return name == "let" || name == "component" || name == "total" || function_from_name(name, ignored);
}

bool builtin_constant(std::string_view name, double& value)
{
  if (name == "pi") {
    value = std::numbers::pi;
    return true;
  }
  return false;
}

Expr Expr::literal(double v, Span span)
{
  Expr e;
  e.op = Op::literal;
  e.value = v;
  e.span = span;
  return e;
}

Expr Expr::variable(std::string name, Span span)
{
  Expr e;
  e.op = Op::variable;
  e.name = std::move(name);
  e.span = span;
  return e;
}

Expr Expr::unary(Op op, Expr operand, Span span)
{
  if (arity(op) != 1) throw std::invalid_argument("Expr::unary: operator is not unary");
  Expr e;
  e.op = op;
  e.args.push_back(std::move(operand));
  e.span = span;
  return e;
}

Expr Expr::binary(Op op, Expr lhs, Expr rhs, Span span)
{
  if (arity(op) != 2) throw std::invalid_argument("Expr::binary: operator is not binary");
  Expr e;
  e.op = op;
  e.args.reserve(2);
  e.args.push_back(std::move(lhs));
  e.args.push_back(std::move(rhs));
  e.span = span;
  return e;
}

Expr Expr::clip(Expr x, Expr lo, Expr hi, Span span)
{
  Expr e;
  e.op = Op::clip;
  e.args.reserve(3);
  e.args.push_back(std::move(x));
  e.args.push_back(std::move(lo));
  e.args.push_back(std::move(hi));
  e.span = span;
  return e;
}

int Expr::depth() const
{
  int deepest = 0;
  for (const auto& a : args) deepest = std::max(deepest, a.depth());
  return deepest + 1;
}

bool structurally_equal(const Expr& a, const Expr& b)
{
  if (a.op != b.op) return false;
  if (a.op == Op::literal) return a.value == b.value;
  if (a.op == Op::variable) return a.name == b.name;
  if (a.args.size() != b.args.size()) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (!structurally_equal(a.args[i], b.args[i])) return false;
  }
  return true;
}

std::vector<std::string> RewardProgram::component_names() const
{
  std::vector<std::string> names;
  for (const auto& d : definitions) {
    if (d.kind == DefinitionKind::component) names.push_back(d.name);
  }
  return names;
}

std::size_t RewardProgram::component_count() const
{
  return static_cast<std::size_t>(std::count_if(definitions.begin(), definitions.end(), [](const Definition& d) {
    return d.kind == DefinitionKind::component;
  }));
}

bool structurally_equal(const RewardProgram& a, const RewardProgram& b)
{
  if (a.definitions.size() != b.definitions.size()) return false;
  for (std::size_t i = 0; i < a.definitions.size(); ++i) {
    const auto& x = a.definitions[i];
    const auto& y = b.definitions[i];
    if (x.kind != y.kind || x.name != y.name || !structurally_equal(x.expr, y.expr)) return false;
  }
  return structurally_equal(a.total, b.total);
}

std::string_view to_string(Origin origin)
{
  switch (origin) {
    case Origin::llm:
      return "llm";
    case Origin::scripted:
      return "scripted";
    case Origin::human_init:
      return "human_init";
  }
  return "llm";
}

Origin origin_from_string(std::string_view s)
{
  if (s == "llm") return Origin::llm;
  if (s == "scripted") return Origin::scripted;
  if (s == "human_init") return Origin::human_init;
  throw std::invalid_argument("unknown reward origin '" + std::string(s) + "'");
}

RewardSource::RewardSource(std::string text, Origin origin) : text_(std::move(text)), origin_(origin)
{
  if (text_.empty()) throw std::invalid_argument("reward source text must not be empty");
}

}  // namespace stride::dsl
