#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "prenexify/formula.hpp"

namespace prenexify {

/// Predicate symbol -> arity.
using Arities = std::map<std::string, std::size_t>;

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::size_t line_;
  std::size_t column_;
  std::string message_;
};

/// Grammar, loosest first:
///
///   imp     := or ('->' imp)?
///   or      := and ('|' and)*
///   and     := unary ('&' unary)*
///   unary   := '~' unary | primary
///   primary := '(' imp ')' | 'false' | quant | atom
///   quant   := ('exists' | 'forall') ident '.' imp
///   atom    := ident ('(' (ident (',' ident)*)? ')')?
///
/// With `sig` set every predicate must be declared with matching arity;
/// without it, arities only have to agree within the formula.
Formula parse(std::string_view text, const Arities* sig = nullptr);

/// Parses a `sig P/1 Q/1 R/2` header line (the leading `sig` included).
Arities parse_signature(std::string_view line);

/// Minimal parentheses; `parse(render(f)) == f`. Negation prints as `-> false`.
std::string render(const Formula& f);

struct CorpusEntry {
  std::size_t line = 0;
  std::string text;
  std::optional<Formula> formula;
  std::optional<ParseError> error;
};

struct Corpus {
  std::optional<Arities> signature;
  std::vector<CorpusEntry> entries;
};

/// `#` comments, blank lines, optional `sig` header, one formula per line.
/// Errors are collected per line instead of thrown.
Corpus parse_corpus(std::string_view text);

nlohmann::json to_json(const Formula& f);
Formula formula_from_json(const nlohmann::json& j);

}  // namespace prenexify
