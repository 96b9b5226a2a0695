#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "interf/circuit.hpp"

namespace interf {

struct SourceSpan {
  int line = 1;    // 1-based
  int column = 1;  // 1-based
  int length = 0;
};

struct ParseDiagnostic {
  SourceSpan span;
  enum class Severity { Error, Warning };
  Severity severity = Severity::Error;
  std::string message;
};

/// Errors imply no scheme is produced; warnings may accompany a scheme.
struct ParseResult {
  std::optional<Scheme> scheme;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return scheme.has_value(); }
};

/// Parses the scheme description language:
///
///   scheme "name" {
///     wing minus {
///       splitter 1 ratio 1/sqrt2      # or: intensity 0.5
///       splitter 2 ratio 1/sqrt2
///       splitter 3 ratio 1/sqrt2
///       phase ab 0                    # radians, optional
///       phase cd 0
///     }
///     wing plus = minus               # clone settings
///     annihilate { (a-, a+) -> P; (b-, b+) -> Q }
///   }
///
/// Line comments start with '#'. Defaults: ratio 1/sqrt2 (50/50), phases 0.
/// Input must be valid UTF-8. A produced scheme always passes validate().
ParseResult parse_scheme(std::string_view text);

/// Canonical rendering: sorted rules, `wing plus = minus` when the wings
/// coincide, numbers at 12 significant digits (with `1/sqrt2` kept
/// symbolic). parse_scheme(render_scheme(s)) reproduces s.
std::string render_scheme(const Scheme& s);

std::string format_diagnostics(const std::vector<ParseDiagnostic>& diags);

}  // namespace interf
