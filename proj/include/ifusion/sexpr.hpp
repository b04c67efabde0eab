#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "ifusion/error.hpp"

namespace ifusion {

// A parsed s-expression: either an atom or a parenthesized list. Every node
// remembers where it came from.
struct SExpr {
  bool is_list = false;
  std::string atom;
  std::vector<SExpr> items;
  SourceSpan span;

  bool is_atom() const { return !is_list; }
};

namespace detail {

inline bool is_atom_char(char c) {
  return !std::isspace(static_cast<unsigned char>(c)) && c != '(' && c != ')' &&
         c != ';' && c != '#';
}

class SExprReader {
 public:
  SExprReader(std::string_view text, SourceSpan origin)
      : text_(text), origin_(std::move(origin)) {}

  SExpr read_one() {
    skip_space();
    if (pos_ >= text_.size()) error("expected an s-expression");
    SExpr e = read();
    skip_space();
    if (pos_ < text_.size()) error("unexpected trailing input");
    return e;
  }

 private:
  SourceSpan here(std::size_t begin, std::size_t end) const {
    SourceSpan s = origin_;
    s.column_begin = origin_.column_begin + static_cast<int>(begin);
    s.column_end = origin_.column_begin + static_cast<int>(end);
    return s;
  }

  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorKind::kParse, msg, here(pos_, pos_ + 1));
  }

  void skip_space() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == ';' || c == '#') {
        pos_ = text_.size();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else {
        break;
      }
    }
  }

  SExpr read() {
    skip_space();
    if (pos_ >= text_.size()) error("unexpected end of input");
    const std::size_t begin = pos_;
    SExpr e;
    if (text_[pos_] == '(') {
      ++pos_;
      e.is_list = true;
      for (;;) {
        skip_space();
        if (pos_ >= text_.size()) {
          pos_ = begin;
          error("unbalanced '('");
        }
        if (text_[pos_] == ')') {
          ++pos_;
          break;
        }
        e.items.push_back(read());
      }
    } else if (text_[pos_] == ')') {
      error("unexpected ')'");
    } else {
      while (pos_ < text_.size() && is_atom_char(text_[pos_])) ++pos_;
      e.atom = std::string(text_.substr(begin, pos_ - begin));
    }
    e.span = here(begin, pos_);
    return e;
  }

  std::string_view text_;
  SourceSpan origin_;
  std::size_t pos_ = 0;
};

}  // namespace detail

// Parses exactly one s-expression. `origin` gives the file, line and the
// column of text[0], so spans point into the real input.
inline SExpr parse_sexpr(std::string_view text, SourceSpan origin = {"<input>", 1, 1, 1}) {
  return detail::SExprReader(text, std::move(origin)).read_one();
}

inline std::string print_sexpr(const SExpr& e) {
  if (!e.is_list) return e.atom;
  std::string out = "(";
  for (std::size_t i = 0; i < e.items.size(); ++i) {
    if (i) out += ' ';
    out += print_sexpr(e.items[i]);
  }
  return out + ")";
}

inline bool is_identifier(std::string_view s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' || c == '.' ||
          c == '-')) {
      return false;
    }
  }
  return true;
}

}  // namespace ifusion
