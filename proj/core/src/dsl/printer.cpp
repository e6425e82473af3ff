#include "stride/dsl/printer.hpp"

#include <array>
#include <charconv>
#include <cmath>

namespace stride::dsl {

namespace {

// Binding strength used to decide where parentheses are needed.
constexpr int kAdditive = 1;
constexpr int kMultiplicative = 2;
constexpr int kPrefix = 3;
constexpr int kAtom = 4;

int precedence(const Expr& e)
{
  switch (e.op) {
    case Op::add:
    case Op::sub:
      return kAdditive;
    case Op::mul:
    case Op::div:
      return kMultiplicative;
    case Op::neg:
      return kPrefix;
    case Op::literal:
      return std::signbit(e.value) ? kPrefix : kAtom;
    default:
      return kAtom;
  }
}

void print(const Expr& e, int min_precedence, std::string& out);

void print_binary(const Expr& e, int level, char symbol, std::string& out)
{
  print(e.args[0], level, out);
  out += ' ';
  out += symbol;
  out += ' ';
  // Operators are left-associative, so an equal-precedence right operand
  // needs parentheses to keep its grouping.
  print(e.args[1], level + 1, out);
}

void print(const Expr& e, int min_precedence, std::string& out)
{
  const bool wrap = precedence(e) < min_precedence;
  if (wrap) out += '(';

  switch (e.op) {
    case Op::literal:
      out += format_literal(e.value);
      break;
    case Op::variable:
      out += e.name;
      break;
    case Op::neg: {
      const Expr& operand = e.args[0];
      out += '-';
      // "-2.0" would read back as a negative literal, and "--x" is hard to
      // read, so only names and calls go unparenthesized.
      if (operand.op == Op::variable || !function_name(operand.op).empty()) {
        print(operand, kAtom, out);
      } else {
        out += '(';
        print(operand, 0, out);
        out += ')';
      }
      break;
    }
    case Op::add:
      print_binary(e, kAdditive, '+', out);
      break;
    case Op::sub:
      print_binary(e, kAdditive, '-', out);
      break;
    case Op::mul:
      print_binary(e, kMultiplicative, '*', out);
      break;
    case Op::div:
      print_binary(e, kMultiplicative, '/', out);
      break;
    default: {
      out += function_name(e.op);
      out += '(';
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i > 0) out += ", ";
        print(e.args[i], 0, out);
      }
      out += ')';
      break;
    }
  }

  if (wrap) out += ')';
}

}  // namespace

std::string format_literal(double value)
{
  std::array<char, 64> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  std::string s(buf.data(), ec == std::errc() ? ptr : buf.data());
  if (!std::isfinite(value)) return s;
  if (s.find_first_of(".e") == std::string::npos) s += ".0";
  return s;
}

std::string canonical_print(const Expr& expr)
{
  std::string out;
  print(expr, 0, out);
  return out;
}

std::string canonical_print(const RewardProgram& program)
{
  std::string out;
  for (const auto& d : program.definitions) {
    out += d.kind == DefinitionKind::let ? "let " : "component ";
    out += d.name;
    out += " = ";
    print(d.expr, 0, out);
    out += '\n';
  }
  out += "total = ";
  print(program.total, 0, out);
  out += '\n';
  return out;
}

}  // namespace stride::dsl
