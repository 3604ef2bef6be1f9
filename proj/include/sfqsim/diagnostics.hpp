#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace sfqsim {

/// Location of a construct in an input file. Lines and columns are 1-based;
/// zero means "unknown".
struct SourceSpan {
  std::string file;
  int line = 0;
  int column = 0;

  std::string str() const;
};

struct Diagnostic {
  enum class Severity { Warning, Error };

  Severity severity = Severity::Error;
  SourceSpan span;
  std::string message;

  std::string str() const;
};

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// A single syntax or input error at a known location.
class ParseError : public Error {
public:
  ParseError(SourceSpan span, const std::string &message);

  const SourceSpan &span() const { return span_; }
  const std::string &detail() const { return detail_; }

private:
  SourceSpan span_;
  std::string detail_;
};

/// One or more errors collected during a pass (elaboration, annotation
/// resolution) and reported together.
class DiagnosticError : public Error {
public:
  DiagnosticError(std::string summary, std::vector<Diagnostic> diagnostics);

  const std::vector<Diagnostic> &diagnostics() const { return diagnostics_; }

private:
  std::vector<Diagnostic> diagnostics_;
};

/// Raised when SDF entries cannot be matched against the netlist.
class ResolutionError : public DiagnosticError {
public:
  using DiagnosticError::DiagnosticError;
};

} // namespace sfqsim
