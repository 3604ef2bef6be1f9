#include "sfqsim/diagnostics.hpp"

namespace sfqsim {

std::string SourceSpan::str() const {
  std::string out = file.empty() ? "<input>" : file;
  if (line > 0) {
    out += ":" + std::to_string(line);
    if (column > 0)
      out += ":" + std::to_string(column);
  }
  return out;
}

std::string Diagnostic::str() const {
  const char *tag = severity == Severity::Error ? "error" : "warning";
  return span.str() + ": " + tag + ": " + message;
}

ParseError::ParseError(SourceSpan span, const std::string &message)
    : Error(span.str() + ": error: " + message), span_(std::move(span)),
      detail_(message) {}

namespace {

std::string join_diagnostics(const std::string &summary,
                             const std::vector<Diagnostic> &diags) {
  std::string out = summary;
  for (const auto &d : diags)
    out += "\n  " + d.str();
  return out;
}

} // namespace

DiagnosticError::DiagnosticError(std::string summary,
                                 std::vector<Diagnostic> diagnostics)
    : Error(join_diagnostics(summary, diagnostics)),
      diagnostics_(std::move(diagnostics)) {}

} // namespace sfqsim
