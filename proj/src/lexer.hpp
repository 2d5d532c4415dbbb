#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sqlbound::detail {

struct Token {
  enum Kind { Ident, Quoted, Int, Str, Sym, End };
  Kind kind = End;
  std::string text;
  int line = 1;
  int col = 1;
};

std::vector<Token> tokenize(std::string_view src);

bool iequals(std::string_view a, std::string_view b);
std::string upper(std::string_view s);

class TokenStream {
public:
  explicit TokenStream(std::vector<Token> toks) : toks_(std::move(toks)) {}

  const Token& peek(std::size_t ahead = 0) const;
  const Token& take() { const Token& t = peek(); if (pos_ < toks_.size() - 1) ++pos_; return t; }
  bool at_end() const { return peek().kind == Token::End; }

  bool is_kw(std::string_view kw, std::size_t ahead = 0) const;
  bool is_sym(std::string_view s, std::size_t ahead = 0) const;
  bool accept_kw(std::string_view kw);
  bool accept_sym(std::string_view s);
  void expect_kw(std::string_view kw);
  void expect_sym(std::string_view s);
  std::string expect_ident();

  [[noreturn]] void fail(const std::string& msg) const;

private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

} // namespace sqlbound::detail
