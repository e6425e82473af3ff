#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "stride/dsl/ast.hpp"

namespace stride::dsl {

enum class Severity
{
  error,
  warning,
};

enum class DiagnosticCode
{
  syntax,
  undefined_variable,
  duplicate_component,
  depth_exceeded,
  non_finite_literal,
  unused_variable,  // warnings only
};

std::string_view to_string(Severity s);
std::string_view to_string(DiagnosticCode c);

struct Diagnostic
{
  Severity severity = Severity::error;
  DiagnosticCode code = DiagnosticCode::syntax;
  Span span;
  std::string message;
};

struct LineColumn
{
  std::size_t line = 1;
  std::size_t column = 1;
};

/// 1-based line/column of a byte offset.
LineColumn locate(std::string_view source, std::size_t offset);

class Diagnostics
{
public:
  void add(Severity severity, DiagnosticCode code, Span span, std::string message);
  void error(DiagnosticCode code, Span span, std::string message) { add(Severity::error, code, span, std::move(message)); }
  void warning(DiagnosticCode code, Span span, std::string message) { add(Severity::warning, code, span, std::move(message)); }
  void append(const Diagnostics& other);

  bool empty() const { return items_.empty(); }
  std::size_t size() const { return items_.size(); }
  bool has_errors() const;
  std::size_t error_count() const;

  const std::vector<Diagnostic>& items() const { return items_; }
  auto begin() const { return items_.begin(); }
  auto end() const { return items_.end(); }

  /// One line per diagnostic: "<line>:<col>: error[code]: message".
  std::string format(std::string_view source, bool errors_only = false) const;

private:
  std::vector<Diagnostic> items_;
};

}  // namespace stride::dsl
