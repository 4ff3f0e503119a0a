#ifndef QUASIKERNEL_SYNTAX_HPP
#define QUASIKERNEL_SYNTAX_HPP

#include <cctype>
#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "quasikernel/error.hpp"
#include "quasikernel/types.hpp"

namespace quasikernel::syntax {

struct Token {
  enum class Kind { ident, number, symbol, end };
  Kind kind;
  std::string text;  // symbols are stored in their ASCII spelling
  std::size_t line;
  std::size_t column;
};

inline std::string position(const Token& t) { return std::to_string(t.line) + ":" + std::to_string(t.column); }

/// UTF-8 aware tokenizer. `×`, `→`, `⇀` and `λ` are mapped to `*`, `->`,
/// `-?>` and `\`. Comments run from `--` or `#` to the end of the line.
inline std::vector<Token> tokenize(std::string_view src) {
  static const std::pair<std::string_view, std::string_view> multi[] = {
      {"\xC3\x97", "*"}, {"\xE2\x86\x92", "->"}, {"\xE2\x87\x80", "-?>"}, {"\xCE\xBB", "\\"},
      {"::=", "::="},    {"-?>", "-?>"},         {"->", "->"},           {":?", ":?"},
  };
  std::vector<Token> out;
  std::size_t line = 1, col = 1, i = 0;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      if (src[i] == '\n') {
        ++line;
        col = 1;
      } else if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) {
        ++col;
      }
      ++i;
    }
  };
  auto ident_char = [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  };
  while (i < src.size()) {
    char c = src[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      advance(1);
      continue;
    }
    if (c == '#' || src.substr(i, 2) == "--") {
      while (i < src.size() && src[i] != '\n') advance(1);
      continue;
    }
    Token tok{Token::Kind::symbol, "", line, col};
    bool matched = false;
    for (const auto& [spelling, canon] : multi) {
      if (src.substr(i, spelling.size()) == spelling) {
        tok.text = std::string(canon);
        advance(spelling.size());
        matched = true;
        break;
      }
    }
    if (!matched) {
      if (std::isdigit(static_cast<unsigned char>(c))) {
        tok.kind = Token::Kind::number;
        std::size_t j = i;
        while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) ++j;
        tok.text = std::string(src.substr(i, j - i));
        advance(j - i);
      } else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        tok.kind = Token::Kind::ident;
        std::size_t j = i;
        while (j < src.size() && ident_char(src[j])) ++j;
        // Qualified names such as List.fold: a capitalized prefix followed by
        // '.' and an identifier or numeral without intervening spaces.
        while (std::isupper(static_cast<unsigned char>(src[i])) && j + 1 < src.size() && src[j] == '.' &&
               ident_char(src[j + 1])) {
          ++j;
          while (j < src.size() && ident_char(src[j])) ++j;
        }
        tok.text = std::string(src.substr(i, j - i));
        advance(j - i);
      } else if (std::string_view("()[],;|:+*.=\\").find(c) != std::string_view::npos) {
        tok.text = std::string(1, c);
        advance(1);
      } else {
        throw error(errc::syntax_error, position(tok) + ": unexpected character '" + std::string(1, c) + "'");
      }
    }
    out.push_back(std::move(tok));
  }
  out.push_back(Token{Token::Kind::end, "", line, col});
  return out;
}

/// Cursor over a token vector with the usual expect/accept helpers.
class TokenStream {
 public:
  explicit TokenStream(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

  const Token& peek(std::size_t ahead = 0) const {
    return tokens_[std::min(pos_ + ahead, tokens_.size() - 1)];
  }
  const Token& next() {
    const Token& t = peek();
    if (pos_ < tokens_.size() - 1) ++pos_;
    return t;
  }
  bool at_end() const { return peek().kind == Token::Kind::end; }
  bool is(std::string_view text) const {
    return peek().text == text && peek().kind != Token::Kind::end;
  }
  bool accept(std::string_view text) {
    if (!is(text)) return false;
    next();
    return true;
  }
  const Token& expect(std::string_view text) {
    if (!is(text)) fail("expected '" + std::string(text) + "'");
    return next();
  }
  std::string expect_ident() {
    if (peek().kind != Token::Kind::ident) fail("expected an identifier");
    return next().text;
  }
  [[noreturn]] void fail(const std::string& msg) const {
    const Token& t = peek();
    std::string found = t.kind == Token::Kind::end ? "end of input" : "'" + t.text + "'";
    throw error(errc::syntax_error, position(t) + ": " + msg + ", found " + found);
  }

 private:
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

/// Type expressions as written in declarations: names (possibly applied to
/// arguments, `List a` or `List[a]`), products, sums and arrows.
struct TyExpr {
  enum class Kind { name, prod, sum, arrow, partial_arrow };
  Kind kind = Kind::name;
  std::string name;
  std::vector<TyExpr> args;

  static TyExpr named(std::string n, std::vector<TyExpr> a = {}) { return {Kind::name, std::move(n), std::move(a)}; }
  static TyExpr binary(Kind k, TyExpr l, TyExpr r) { return {k, {}, {std::move(l), std::move(r)}}; }

  friend bool operator==(const TyExpr&, const TyExpr&) = default;

  bool mentions(std::string_view n) const {
    if (kind == Kind::name && name == n) return true;
    for (const auto& a : args)
      if (a.mentions(n)) return true;
    return false;
  }

  std::string show() const { return show_at(0); }

 private:
  // 0 arrows (right assoc), 1 sums (right assoc), 2 products (right assoc),
  // 3 application, 4 atoms.
  static int level(const TyExpr& t) {
    switch (t.kind) {
      case Kind::arrow:
      case Kind::partial_arrow: return 0;
      case Kind::sum: return 1;
      case Kind::prod: return 2;
      case Kind::name: return t.args.empty() ? 4 : 3;
    }
    return 4;
  }
  std::string show_at(int min_level) const {
    std::string s;
    switch (kind) {
      case Kind::name:
        s = name;
        for (const auto& a : args) s += " " + a.show_at(4);
        break;
      case Kind::prod: s = args[0].show_at(3) + " × " + args[1].show_at(2); break;
      case Kind::sum: s = args[0].show_at(2) + " + " + args[1].show_at(1); break;
      case Kind::arrow: s = args[0].show_at(1) + " → " + args[1].show_at(0); break;
      case Kind::partial_arrow: s = args[0].show_at(1) + " ⇀ " + args[1].show_at(0); break;
    }
    return level(*this) >= min_level ? s : "(" + s + ")";
  }
};

namespace detail {

inline bool starts_type_atom(const TokenStream& ts) {
  const Token& t = ts.peek();
  if (t.kind == Token::Kind::ident) return true;
  return t.kind == Token::Kind::symbol && t.text == "(";
}

inline TyExpr parse_ty_arrow(TokenStream& ts);

inline TyExpr parse_ty_atom(TokenStream& ts) {
  if (ts.accept("(")) {
    TyExpr t = parse_ty_arrow(ts);
    ts.expect(")");
    return t;
  }
  return TyExpr::named(ts.expect_ident());
}

inline TyExpr parse_ty_app(TokenStream& ts) {
  if (ts.is("(")) return parse_ty_atom(ts);
  std::string head = ts.expect_ident();
  std::vector<TyExpr> args;
  if (ts.accept("[")) {
    args.push_back(parse_ty_arrow(ts));
    while (ts.accept(",")) args.push_back(parse_ty_arrow(ts));
    ts.expect("]");
  } else {
    while (starts_type_atom(ts)) args.push_back(parse_ty_atom(ts));
  }
  return TyExpr::named(std::move(head), std::move(args));
}

inline TyExpr parse_ty_prod(TokenStream& ts) {
  TyExpr l = parse_ty_app(ts);
  if (ts.accept("*")) return TyExpr::binary(TyExpr::Kind::prod, std::move(l), parse_ty_prod(ts));
  return l;
}

inline TyExpr parse_ty_sum(TokenStream& ts) {
  TyExpr l = parse_ty_prod(ts);
  if (ts.accept("+")) return TyExpr::binary(TyExpr::Kind::sum, std::move(l), parse_ty_sum(ts));
  return l;
}

inline TyExpr parse_ty_arrow(TokenStream& ts) {
  TyExpr l = parse_ty_sum(ts);
  if (ts.accept("->")) return TyExpr::binary(TyExpr::Kind::arrow, std::move(l), parse_ty_arrow(ts));
  if (ts.accept("-?>")) return TyExpr::binary(TyExpr::Kind::partial_arrow, std::move(l), parse_ty_arrow(ts));
  return l;
}

}  // namespace detail

inline TyExpr parse_tyexpr(TokenStream& ts) { return detail::parse_ty_arrow(ts); }

inline TyExpr parse_tyexpr(std::string_view src) {
  TokenStream ts(tokenize(src));
  TyExpr t = parse_tyexpr(ts);
  if (!ts.at_end()) ts.fail("unexpected trailing input");
  return t;
}

/// Translates a closed type expression. Builtin names map to their types;
/// any other name becomes Named (with translated arguments).
inline Ty to_ty(const TyExpr& t) {
  switch (t.kind) {
    case TyExpr::Kind::name: {
      if (t.args.empty()) {
        if (t.name == "Unit") return Ty::unit();
        if (t.name == "Zero") return Ty::zero();
        if (t.name == "Nat") return Ty::nat();
        if (t.name == "Bool") return Ty::boolean();
        if (t.name == "Logical") return Ty::logical();
      }
      std::vector<Ty> args;
      for (const auto& a : t.args) args.push_back(to_ty(a));
      return Ty::named(t.name, std::move(args));
    }
    case TyExpr::Kind::prod: return Ty::prod(to_ty(t.args[0]), to_ty(t.args[1]));
    case TyExpr::Kind::sum: return Ty::sum(to_ty(t.args[0]), to_ty(t.args[1]));
    case TyExpr::Kind::arrow: return Ty::total(to_ty(t.args[0]), to_ty(t.args[1]));
    case TyExpr::Kind::partial_arrow: return Ty::partial(to_ty(t.args[0]), to_ty(t.args[1]));
  }
  return Ty::unit();
}

inline Ty parse_ty(std::string_view src) { return to_ty(parse_tyexpr(src)); }

}  // namespace quasikernel::syntax

#endif
