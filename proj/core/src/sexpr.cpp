#include "htn/sexpr.hpp"

#include <utility>

namespace htn {

std::string ParseDiagnostic::to_string() const {
  return std::to_string(line) + ":" + std::to_string(column) + ": " + message;
}

ParseError::ParseError(ParseDiagnostic diagnostic)
    : std::runtime_error(diagnostic.to_string()),
      diagnostic_(std::move(diagnostic)) {}

SExpr SExpr::symbol(std::string text, std::size_t line, std::size_t column) {
  SExpr e;
  e.text_ = std::move(text);
  e.line_ = line;
  e.column_ = column;
  return e;
}

SExpr SExpr::list(std::vector<SExpr> items, std::size_t line,
                  std::size_t column) {
  SExpr e;
  e.is_list_ = true;
  e.items_ = std::move(items);
  e.line_ = line;
  e.column_ = column;
  return e;
}

const std::string& SExpr::text() const {
  if (is_list_) throw std::logic_error("SExpr::text() called on a list");
  return text_;
}

const std::vector<SExpr>& SExpr::items() const {
  if (!is_list_) throw std::logic_error("SExpr::items() called on a symbol");
  return items_;
}

bool SExpr::starts_with(std::string_view head) const {
  return is_list_ && !items_.empty() && items_.front().is_symbol() &&
         items_.front().text_ == head;
}

bool operator==(const SExpr& a, const SExpr& b) {
  if (a.is_list_ != b.is_list_) return false;
  if (!a.is_list_) return a.text_ == b.text_;
  return a.items_ == b.items_;
}

namespace {

class Reader {
 public:
  explicit Reader(std::string_view src) : src_(src) {}

  std::vector<SExpr> read_all(bool allow_empty) {
    std::vector<SExpr> out;
    skip_blank();
    while (pos_ < src_.size()) {
      out.push_back(read());
      skip_blank();
    }
    if (out.empty() && !allow_empty) fail(line_, column_, "empty input");
    return out;
  }

 private:
  [[noreturn]] void fail(std::size_t line, std::size_t column,
                         std::string message) {
    throw ParseError(ParseDiagnostic{line, column, std::move(message)});
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    ++pos_;
  }

  void skip_blank() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == ';') {
        while (pos_ < src_.size() && src_[pos_] != '\n') advance();
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r' ||
                 c == '\f' || c == '\v') {
        advance();
      } else {
        return;
      }
    }
  }

  static bool is_delimiter(char c) {
    return c == '(' || c == ')' || c == ';' || c == ' ' || c == '\t' ||
           c == '\n' || c == '\r' || c == '\f' || c == '\v';
  }

  SExpr read() {
    std::size_t line = line_;
    std::size_t column = column_;
    char c = src_[pos_];
    if (c == ')') fail(line, column, "unexpected ')'");
    if (c != '(') {
      std::size_t start = pos_;
      while (pos_ < src_.size() && !is_delimiter(src_[pos_])) advance();
      return SExpr::symbol(std::string(src_.substr(start, pos_ - start)), line,
                           column);
    }
    advance();
    std::vector<SExpr> items;
    for (;;) {
      skip_blank();
      if (pos_ >= src_.size()) {
        fail(line, column, "unbalanced parentheses: '(' is never closed");
      }
      if (src_[pos_] == ')') {
        advance();
        return SExpr::list(std::move(items), line, column);
      }
      items.push_back(read());
    }
  }

  std::string_view src_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

void render(const SExpr& e, std::string& out) {
  if (e.is_symbol()) {
    out += e.text();
    return;
  }
  out += '(';
  bool first = true;
  for (const SExpr& item : e.items()) {
    if (!first) out += ' ';
    first = false;
    render(item, out);
  }
  out += ')';
}

}  // namespace

std::vector<SExpr> tokenize_and_read(std::string_view source) {
  return Reader(source).read_all(false);
}

std::vector<SExpr> read_expressions(std::string_view source) {
  return Reader(source).read_all(true);
}

std::string to_string(const SExpr& expr) {
  std::string out;
  render(expr, out);
  return out;
}

}  // namespace htn
