#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dtheory/model.hpp"

namespace dtheory {

/// 1-based position of a token; `offset` is the 0-based byte offset and
/// `length` counts bytes.
struct SourceSpan {
  std::size_t line = 1;
  std::size_t column = 1;
  std::size_t length = 1;
  std::size_t offset = 0;
};

enum class ParseErrorKind { Lex, Syntax, Semantic };

std::string_view to_string(ParseErrorKind kind);

struct ParseError {
  SourceSpan span;
  ParseErrorKind kind = ParseErrorKind::Syntax;
  std::string message;
};

struct ParseResult {
  std::optional<DilemmaModel> model;
  std::vector<ParseError> errors;

  bool ok() const { return model.has_value(); }
};

/// Parses `.dlm` text. Never throws on malformed input.
ParseResult parse(std::string_view text);

/// Canonical text: sorted declarations, every table row, reduced rationals.
std::string serialize(const DilemmaModel& model);

/// "source:line:column: kind error: message"
std::string format_error(const ParseError& error, std::string_view source = "<input>");

}  // namespace dtheory
