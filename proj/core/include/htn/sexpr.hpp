#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace htn {

struct ParseDiagnostic {
  std::size_t line = 1;    // 1-based
  std::size_t column = 1;  // 1-based
  std::string message;

  std::string to_string() const;
};

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(ParseDiagnostic diagnostic);

  const ParseDiagnostic& diagnostic() const { return diagnostic_; }

 private:
  ParseDiagnostic diagnostic_;
};

/// Either a symbol or a parenthesized list. Source positions are carried
/// along for diagnostics but do not take part in equality.
class SExpr {
 public:
  static SExpr symbol(std::string text, std::size_t line = 0,
                      std::size_t column = 0);
  static SExpr list(std::vector<SExpr> items, std::size_t line = 0,
                    std::size_t column = 0);

  bool is_symbol() const { return !is_list_; }
  bool is_list() const { return is_list_; }
  const std::string& text() const;
  const std::vector<SExpr>& items() const;

  /// True for a list whose first item is the symbol `head`.
  bool starts_with(std::string_view head) const;

  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

  friend bool operator==(const SExpr& a, const SExpr& b);

 private:
  bool is_list_ = false;
  std::string text_;
  std::vector<SExpr> items_;
  std::size_t line_ = 0;
  std::size_t column_ = 0;
};

/// Reads every top-level expression. ';' starts a comment running to the end
/// of the line. Throws ParseError on unbalanced parentheses or when the
/// source holds no expression at all.
std::vector<SExpr> tokenize_and_read(std::string_view source);

/// Like tokenize_and_read, but a source with no expression yields an empty
/// sequence.
std::vector<SExpr> read_expressions(std::string_view source);

/// Single-line rendering, e.g. "(on ?l ?r)".
std::string to_string(const SExpr& expr);

}  // namespace htn
