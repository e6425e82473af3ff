#include "stride/dsl/diagnostics.hpp"

#include <algorithm>

namespace stride::dsl {

std::string_view to_string(Severity s)
{
  return s == Severity::error ? "error" : "warning";
}

std::string_view to_string(DiagnosticCode c)
{
  switch (c) {
    case DiagnosticCode::syntax:
      return "syntax";
    case DiagnosticCode::undefined_variable:
      return "undefined_variable";
    case DiagnosticCode::duplicate_component:
      return "duplicate_component";
    case DiagnosticCode::depth_exceeded:
      return "depth_exceeded";
    case DiagnosticCode::non_finite_literal:
      return "non_finite_literal";
    case DiagnosticCode::unused_variable:
      return "unused_variable";
  }
  return "syntax";
}

LineColumn locate(std::string_view source, std::size_t offset)
{
  LineColumn lc;
  offset = std::min(offset, source.size());
  for (std::size_t i = 0; i < offset; ++i) {
    if (source[i] == '\n') {
      ++lc.line;
      lc.column = 1;
    } else {
      ++lc.column;
    }
  }
  return lc;
}

void Diagnostics::add(Severity severity, DiagnosticCode code, Span span, std::string message)
{
  items_.push_back(Diagnostic{severity, code, span, std::move(message)});
}

void Diagnostics::append(const Diagnostics& other)
{
  items_.insert(items_.end(), other.items_.begin(), other.items_.end());
}

bool Diagnostics::has_errors() const
{
  return error_count() > 0;
}

std::size_t Diagnostics::error_count() const
{
  return static_cast<std::size_t>(
      std::count_if(items_.begin(), items_.end(), [](const Diagnostic& d) { return d.severity == Severity::error; }));
}

std::string Diagnostics::format(std::string_view source, bool errors_only) const
{
  std::string out;
  for (const auto& d : items_) {
    if (errors_only && d.severity != Severity::error) continue;
    const auto lc = locate(source, d.span.offset);
    out += std::to_string(lc.line) + ":" + std::to_string(lc.column) + ": ";
    out += to_string(d.severity);
    out += "[";
    out += to_string(d.code);
    out += "]: ";
    out += d.message;
    out += '\n';
  }
  return out;
}

}  // namespace stride::dsl
