#include "stride/dsl/parser.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <set>
#include <string>
#include <vector>

namespace stride::dsl {

namespace {

enum class Tok
{
  number,
  ident,
  plus,
  minus,
  star,
  slash,
  lparen,
  rparen,
  comma,
  equals,
  separator,
  end,
  invalid,
};

struct Token
{
  Tok kind = Tok::end;
  Span span;
  std::string_view text;
  bool newline = false;  // separator produced by a line break
};

bool is_ident_start(char c)
{
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_';
}

bool is_digit(char c)
{
  return c >= '0' && c <= '9';
}

std::vector<Token> lex(std::string_view src)
{
  std::vector<Token> out;
  int paren_depth = 0;
  std::size_t i = 0;
  auto push = [&](Tok kind, std::size_t start, std::size_t len, bool newline = false) {
    out.push_back(Token{kind, Span{start, len}, src.substr(start, len), newline});
  };

  while (i < src.size()) {
    const char c = src[i];
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    if (c == '\n') {
      if (paren_depth == 0) push(Tok::separator, i, 1, true);
      ++i;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (is_digit(c) || (c == '.' && i + 1 < src.size() && is_digit(src[i + 1]))) {
      const std::size_t start = i;
      while (i < src.size() && is_digit(src[i])) ++i;
      if (i < src.size() && src[i] == '.') {
        ++i;
        while (i < src.size() && is_digit(src[i])) ++i;
      }
      if (i < src.size() && (src[i] == 'e' || src[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < src.size() && (src[j] == '+' || src[j] == '-')) ++j;
        if (j < src.size() && is_digit(src[j])) {
          i = j;
          while (i < src.size() && is_digit(src[i])) ++i;
        }
      }
      push(Tok::number, start, i - start);
      continue;
    }
    if (is_ident_start(c)) {
      const std::size_t start = i;
      while (i < src.size() && (is_ident_start(src[i]) || is_digit(src[i]))) ++i;
      push(Tok::ident, start, i - start);
      continue;
    }
    switch (c) {
      case '+':
        push(Tok::plus, i, 1);
        break;
      case '-':
        push(Tok::minus, i, 1);
        break;
      case '*':
        push(Tok::star, i, 1);
        break;
      case '/':
        push(Tok::slash, i, 1);
        break;
      case '(':
        ++paren_depth;
        push(Tok::lparen, i, 1);
        break;
      case ')':
        if (paren_depth > 0) --paren_depth;
        push(Tok::rparen, i, 1);
        break;
      case ',':
        push(Tok::comma, i, 1);
        break;
      case '=':
        push(Tok::equals, i, 1);
        break;
      case ';':
        push(Tok::separator, i, 1);
        break;
      default: {
        // Consume one UTF-8 sequence so spans stay on character boundaries.
        std::size_t len = 1;
        const auto uc = static_cast<unsigned char>(c);
        if (uc >= 0xF0) len = 4;
        else if (uc >= 0xE0) len = 3;
        else if (uc >= 0xC0) len = 2;
        len = std::min(len, src.size() - i);
        push(Tok::invalid, i, len);
        i += len;
        continue;
      }
    }
    ++i;
  }
  push(Tok::end, src.size(), 0);
  return out;
}

Span cover(Span a, Span b)
{
  const std::size_t begin = std::min(a.offset, b.offset);
  const std::size_t end = std::max(a.offset + a.length, b.offset + b.length);
  return Span{begin, end - begin};
}

struct Abort
{
};

/// An expression together with its tree depth, tracked while building so
/// over-deep trees are rejected before they are materialized.
struct Built
{
  Expr expr;
  int depth = 1;
};

class Parser
{
public:
  Parser(std::string_view src, Diagnostics& diags) : src_(src), toks_(lex(src)), diags_(diags) {}

  std::optional<RewardProgram> run()
  {
    RewardProgram program;
    std::set<std::string, std::less<>> names;
    bool have_total = false;
    bool reported_after_total = false;

    skip_separators();
    while (peek().kind != Tok::end) {
      try {
        if (have_total && !reported_after_total) {
          diags_.error(DiagnosticCode::syntax, peek().span, "'total' must be the last statement");
          reported_after_total = true;
        }
        statement(program, names, have_total);
        if (peek().kind != Tok::separator && peek().kind != Tok::end) {
          fail(peek().span, "expected end of statement, found " + describe(peek()));
        }
      } catch (const Abort&) {
        while (peek().kind != Tok::separator && peek().kind != Tok::end) ++pos_;
      }
      skip_separators();
    }

    if (!have_total) {
      diags_.error(DiagnosticCode::syntax, Span{src_.size(), 0}, "missing 'total = <expr>' statement");
    }
    if (program.component_count() == 0) {
      diags_.error(DiagnosticCode::duplicate_component, Span{0, src_.size()},
                   "program defines no component; at least one 'component <name> = <expr>' is required");
    }
    if (diags_.has_errors()) return std::nullopt;
    return program;
  }

private:
  const Token& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const Token& advance() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  void skip_separators()
  {
    while (peek().kind == Tok::separator) ++pos_;
  }

  void skip_line_breaks()
  {
    while (peek().kind == Tok::separator && peek().newline) ++pos_;
  }

  [[noreturn]] void fail(Span span, std::string message, DiagnosticCode code = DiagnosticCode::syntax)
  {
    diags_.error(code, span, std::move(message));
    throw Abort{};
  }

  static std::string describe(const Token& t)
  {
    switch (t.kind) {
      case Tok::end:
        return "end of input";
      case Tok::separator:
        return t.newline ? "end of line" : "';'";
      default:
        return "'" + std::string(t.text) + "'";
    }
  }

  const Token& expect(Tok kind, std::string_view what)
  {
    if (peek().kind != kind) fail(peek().span, "expected " + std::string(what) + ", found " + describe(peek()));
    return advance();
  }

  void statement(RewardProgram& program, std::set<std::string, std::less<>>& names, bool& have_total)
  {
    const Token& head = peek();
    if (head.kind != Tok::ident || (head.text != "let" && head.text != "component" && head.text != "total")) {
      fail(head.span, "expected 'let', 'component' or 'total', found " + describe(head));
    }
    advance();

    if (head.text == "total") {
      expect(Tok::equals, "'='");
      Built b = expression(0);
      if (have_total) fail(head.span, "'total' is defined more than once");
      have_total = true;
      program.total = std::move(b.expr);
      program.total_span = cover(head.span, program.total.span);
      return;
    }

    const Token& name = expect(Tok::ident, "a name");
    if (is_reserved_word(name.text)) fail(name.span, "'" + std::string(name.text) + "' is a reserved word");
    expect(Tok::equals, "'='");
    Built b = expression(0);

    Definition def;
    def.kind = head.text == "let" ? DefinitionKind::let : DefinitionKind::component;
    def.name = std::string(name.text);
    def.name_span = name.span;
    def.span = cover(head.span, b.expr.span);
    def.expr = std::move(b.expr);
    if (!names.insert(def.name).second) {
      diags_.error(DiagnosticCode::duplicate_component, def.name_span, "'" + def.name + "' is already defined");
      return;
    }
    program.definitions.push_back(std::move(def));
  }

  Built expression(int nesting)
  {
    Built lhs = term(nesting);
    while (peek().kind == Tok::plus || peek().kind == Tok::minus) {
      const Op op = advance().kind == Tok::plus ? Op::add : Op::sub;
      skip_line_breaks();
      Built rhs = term(nesting);
      lhs = combine(op, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Built term(int nesting)
  {
    Built lhs = unary(nesting);
    while (peek().kind == Tok::star || peek().kind == Tok::slash) {
      const Op op = advance().kind == Tok::star ? Op::mul : Op::div;
      skip_line_breaks();
      Built rhs = unary(nesting);
      lhs = combine(op, std::move(lhs), std::move(rhs));
    }
    return lhs;
  }

  Built combine(Op op, Built lhs, Built rhs)
  {
    const Span span = cover(lhs.expr.span, rhs.expr.span);
    const int depth = std::max(lhs.depth, rhs.depth) + 1;
    check_depth(depth, span);
    return Built{Expr::binary(op, std::move(lhs.expr), std::move(rhs.expr), span), depth};
  }

  void check_depth(int depth, Span span)
  {
    if (depth > kMaxDepth) {
      fail(span, "expression nesting exceeds the limit of " + std::to_string(kMaxDepth),
           DiagnosticCode::depth_exceeded);
    }
  }

  Built unary(int nesting)
  {
    if (nesting > 4 * kMaxDepth) {
      fail(peek().span, "expression nesting exceeds the limit of " + std::to_string(kMaxDepth),
           DiagnosticCode::depth_exceeded);
    }
    if (peek().kind == Tok::minus) {
      const Token& minus = advance();
      if (peek().kind == Tok::number) {
        const Token& num = advance();
        const Span span = cover(minus.span, num.span);
        return Built{Expr::literal(-number_value(num, span), span), 1};
      }
      Built operand = unary(nesting + 1);
      const Span span = cover(minus.span, operand.expr.span);
      check_depth(operand.depth + 1, span);
      return Built{Expr::unary(Op::neg, std::move(operand.expr), span), operand.depth + 1};
    }
    return primary(nesting);
  }

  double number_value(const Token& tok, Span span)
  {
    double v = 0.0;
    const char* first = tok.text.data();
    const char* last = first + tok.text.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec == std::errc::result_out_of_range) {
      // from_chars reports underflow and overflow alike; strtod tells them apart.
      v = std::strtod(std::string(tok.text).c_str(), nullptr);
    } else if (ec != std::errc() || ptr != last) {
      fail(span, "malformed number '" + std::string(tok.text) + "'");
    }
    if (!std::isfinite(v)) {
      fail(span, "literal '" + std::string(tok.text) + "' is not a finite number", DiagnosticCode::non_finite_literal);
    }
    return v;
  }

  Built primary(int nesting)
  {
    const Token& tok = peek();
    switch (tok.kind) {
      case Tok::number:
        advance();
        return Built{Expr::literal(number_value(tok, tok.span), tok.span), 1};
      case Tok::lparen: {
        advance();
        Built inner = expression(nesting + 1);
        expect(Tok::rparen, "')'");
        return inner;
      }
      case Tok::ident:
        return identifier(nesting);
      default:
        if (tok.kind == Tok::invalid) fail(tok.span, "unexpected character " + describe(tok));
        fail(tok.span, "expected an expression, found " + describe(tok));
    }
  }

  Built identifier(int nesting)
  {
    const Token& tok = advance();
    Op op = Op::literal;
    const bool is_function = function_from_name(tok.text, op);
    if (peek().kind != Tok::lparen) {
      if (is_function) {
        fail(tok.span, "'" + std::string(tok.text) + "' is a function; call it as " + std::string(tok.text) + "(...)");
      }
      if (is_reserved_word(tok.text)) fail(tok.span, "unexpected keyword '" + std::string(tok.text) + "'");
      return Built{Expr::variable(std::string(tok.text), tok.span), 1};
    }
    if (!is_function) fail(tok.span, "unknown function '" + std::string(tok.text) + "'");

    advance();  // '('
    std::vector<Built> args;
    if (peek().kind != Tok::rparen) {
      args.push_back(expression(nesting + 1));
      while (peek().kind == Tok::comma) {
        advance();
        args.push_back(expression(nesting + 1));
      }
    }
    const Token& close = expect(Tok::rparen, "')' or ','");
    const Span span = cover(tok.span, close.span);
    const int want = arity(op);
    if (static_cast<int>(args.size()) != want) {
      fail(span, std::string(tok.text) + " expects " + std::to_string(want) + " argument" + (want == 1 ? "" : "s") +
                     ", got " + std::to_string(args.size()));
    }

    int depth = 0;
    for (const auto& a : args) depth = std::max(depth, a.depth);
    ++depth;
    check_depth(depth, span);

    Expr e;
    e.op = op;
    e.span = span;
    for (auto& a : args) e.args.push_back(std::move(a.expr));
    return Built{std::move(e), depth};
  }

  std::string_view src_;
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  Diagnostics& diags_;
};

}  // namespace

ParseResult parse(std::string_view text)
{
  ParseResult result;
  Parser parser(text, result.diagnostics);
  result.program = parser.run();
  return result;
}

ParseResult parse(const RewardSource& source)
{
  return parse(source.text());
}

}  // namespace stride::dsl
