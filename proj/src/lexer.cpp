#include "lexer.hpp"

#include <cctype>

#include "sqlbound/errors.hpp"

namespace sqlbound::detail {

bool iequals(std::string_view a, std::string_view b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (std::tolower(static_cast<unsigned char>(a[i])) != std::tolower(static_cast<unsigned char>(b[i])))
      return false;
  return true;
}

std::string upper(std::string_view s) {
  std::string r(s);
  for (auto& c : r) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return r;
}

std::vector<Token> tokenize(std::string_view src) {
  std::vector<Token> out;
  int line = 1, col = 1;
  std::size_t i = 0;
  auto bump = [&](std::size_t n) {
    for (std::size_t k = 0; k < n && i < src.size(); ++k, ++i) {
      if (src[i] == '\n') { ++line; col = 1; } else { ++col; }
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) { bump(1); continue; }
    if (c == '-' && i + 1 < src.size() && src[i + 1] == '-') {
      while (i < src.size() && src[i] != '\n') bump(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') bump(1);
      continue;
    }
    if (c == '/' && i + 1 < src.size() && src[i + 1] == '*') {
      int l = line, cc = col;
      bump(2);
      while (i + 1 < src.size() && !(src[i] == '*' && src[i + 1] == '/')) bump(1);
      if (i + 1 >= src.size()) throw ParseError("unterminated comment", l, cc);
      bump(2);
      continue;
    }
    Token t;
    t.line = line;
    t.col = col;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '$'))
        ++j;
      t.kind = Token::Ident;
      t.text = std::string(src.substr(i, j - i));
      bump(j - i);
    } else if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
      if (j < src.size() && src[j] == '.' && j + 1 < src.size() && std::isdigit(static_cast<unsigned char>(src[j + 1])))
        throw ParseError("non-integer numeric literal", line, col);
      t.kind = Token::Int;
      t.text = std::string(src.substr(i, j - i));
      bump(j - i);
    } else if (c == '\'' || c == '"') {
      char q = c;
      bump(1);
      std::string s;
      for (;;) {
        if (i >= src.size()) throw ParseError("unterminated string", t.line, t.col);
        if (src[i] == q) {
          if (i + 1 < src.size() && src[i + 1] == q) { s += q; bump(2); continue; }
          bump(1);
          break;
        }
        if (src[i] == '\\' && i + 1 < src.size()) { s += src[i + 1]; bump(2); continue; }
        s += src[i];
        bump(1);
      }
      t.kind = Token::Str;
      t.text = s;
    } else if (c == '`') {
      bump(1);
      std::string s;
      while (i < src.size() && src[i] != '`') { s += src[i]; bump(1); }
      if (i >= src.size()) throw ParseError("unterminated identifier", t.line, t.col);
      bump(1);
      t.kind = Token::Quoted;
      t.text = s;
    } else {
      static const char* two[] = {"<>", "!=", "<=", ">=", "=="};
      t.kind = Token::Sym;
      bool matched = false;
      for (const char* s : two) {
        if (src.substr(i, 2) == s) {
          t.text = s;
          bump(2);
          matched = true;
          break;
        }
      }
      if (!matched) {
        if (std::string_view("(),.*+-/%=<>;[]").find(c) == std::string_view::npos)
          throw ParseError(std::string("unexpected character '") + c + "'", line, col);
        t.text = std::string(1, c);
        bump(1);
      }
    }
    out.push_back(std::move(t));
  }
  Token end;
  end.kind = Token::End;
  end.line = line;
  end.col = col;
  out.push_back(end);
  return out;
}

const Token& TokenStream::peek(std::size_t ahead) const {
  std::size_t p = pos_ + ahead;
  return p < toks_.size() ? toks_[p] : toks_.back();
}

bool TokenStream::is_kw(std::string_view kw, std::size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind == Token::Ident && iequals(t.text, kw);
}

bool TokenStream::is_sym(std::string_view s, std::size_t ahead) const {
  const Token& t = peek(ahead);
  return t.kind == Token::Sym && t.text == s;
}

bool TokenStream::accept_kw(std::string_view kw) {
  if (!is_kw(kw)) return false;
  take();
  return true;
}

bool TokenStream::accept_sym(std::string_view s) {
  if (!is_sym(s)) return false;
  take();
  return true;
}

void TokenStream::expect_kw(std::string_view kw) {
  if (!accept_kw(kw)) fail("expected " + std::string(kw));
}

void TokenStream::expect_sym(std::string_view s) {
  if (!accept_sym(s)) fail("expected '" + std::string(s) + "'");
}

std::string TokenStream::expect_ident() {
  const Token& t = peek();
  if (t.kind != Token::Ident && t.kind != Token::Quoted) fail("expected identifier");
  return take().text;
}

void TokenStream::fail(const std::string& msg) const {
  const Token& t = peek();
  std::string got = t.kind == Token::End ? "end of input" : "'" + t.text + "'";
  throw ParseError(msg + ", got " + got, t.line, t.col);
}

} // namespace sqlbound::detail
