/// @file  parser.hpp
/// @brief Recursive-descent parser for the concrete formula syntax
///
/// Grammar (lowest precedence first):
///
///     until   := or ('U' time? until)?
///     or      := and ('or' and)*
///     and     := reach ('and' reach)*
///     reach   := unary (('reach' | 'surround') dist unary)*
///     unary   := 'not' unary | 'X' unary | ('F' | 'G') time? unary
///              | ('somewhere' | 'everywhere' | 'escape') dist unary
///              | primary
///     primary := 'true' | 'false' | '(' until ')' | IDENT (cmp NUMBER)?
///     time    := '[' NAT ',' (NAT | 'inf') ']'
///     dist    := '[' IDENT ']' '[' NUM ',' (NUM | 'inf') ']'

#pragma once

#include <cctype>
#include <charconv>
#include <cstdlib>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "strel/error.hpp"
#include "strel/formula.hpp"
#include "strel/spatial.hpp"

namespace strel {

struct parse_options {
  /// Distance functions a formula may name; defaults to `hops` and `weight`
  distance_registry registry = distance_registry::defaults();
  /// Bare identifiers that stand for a predicate other than a kind test
  std::map<std::string, predicate, std::less<>> aliases;
};

namespace detail {

enum class tok { ident, number, lparen, rparen, lbrack, rbrack, comma, cmp, end };

struct token {
  tok type;
  std::string text;
  std::size_t line;
  std::size_t column;
};

class lexer {
public:
  explicit lexer(std::string_view src) : _src(src) {}

  std::vector<token> run() {
    std::vector<token> out;
    while (true) {
      skip_space();
      if (_pos >= _src.size()) {
        out.push_back({tok::end, "", _line, _col});
        return out;
      }
      const std::size_t line = _line, col = _col;
      char c = _src[_pos];
      auto single = [&](tok t) {
        out.push_back({t, std::string(1, c), line, col});
        advance();
      };
      switch (c) {
      case '(':
        single(tok::lparen);
        continue;
      case ')':
        single(tok::rparen);
        continue;
      case '[':
        single(tok::lbrack);
        continue;
      case ']':
        single(tok::rbrack);
        continue;
      case ',':
        single(tok::comma);
        continue;
      case '>':
      case '<': {
        std::string t(1, c);
        advance();
        if (_pos < _src.size() && _src[_pos] == '=') {
          t += '=';
          advance();
        }
        out.push_back({tok::cmp, t, line, col});
        continue;
      }
      default:
        break;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '+' || c == '.') {
        std::string t;
        t += c;
        advance();
        while (_pos < _src.size()) {
          char d = _src[_pos];
          bool exp_sign = (d == '-' || d == '+') && (t.back() == 'e' || t.back() == 'E');
          if (std::isdigit(static_cast<unsigned char>(d)) || d == '.' || d == 'e' || d == 'E' ||
              exp_sign) {
            t += d;
            advance();
          } else {
            break;
          }
        }
        out.push_back({tok::number, t, line, col});
        continue;
      }
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::string t;
        while (_pos < _src.size() && (std::isalnum(static_cast<unsigned char>(_src[_pos])) ||
                                      _src[_pos] == '_')) {
          t += _src[_pos];
          advance();
        }
        out.push_back({tok::ident, t, line, col});
        continue;
      }
      throw parse_error(std::string("unexpected character '") + c + "'", line, col);
    }
  }

private:
  void advance() {
    if (_src[_pos] == '\n') {
      ++_line;
      _col = 1;
    } else {
      ++_col;
    }
    ++_pos;
  }
  void skip_space() {
    while (_pos < _src.size()) {
      char c = _src[_pos];
      if (c == '#') {
        while (_pos < _src.size() && _src[_pos] != '\n')
          advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  std::string_view _src;
  std::size_t _pos = 0;
  std::size_t _line = 1;
  std::size_t _col = 1;
};

inline bool is_keyword(std::string_view s) {
  static constexpr std::string_view words[] = {
      "true", "false",     "not",        "and",    "or",       "X",  "U", "F", "G",
      "reach", "escape", "somewhere", "everywhere", "surround", "inf"};
  for (auto w : words)
    if (s == w)
      return true;
  return false;
}

class parser {
public:
  parser(std::vector<token> toks, const parse_options &opts)
      : _toks(std::move(toks)), _opts(opts) {}

  formula run() {
    formula f = parse_until();
    if (peek().type != tok::end)
      fail("unexpected '" + peek().text + "' after formula");
    return f;
  }

private:
  const token &peek() const { return _toks[_pos]; }
  const token &take() { return _toks[_pos++]; }
  bool at_word(std::string_view w) const { return peek().type == tok::ident && peek().text == w; }
  [[noreturn]] void fail(const std::string &msg) const {
    throw parse_error(msg, peek().line, peek().column);
  }
  void expect(tok t, const char *what) {
    if (peek().type != t)
      fail(std::string("expected ") + what +
           (peek().type == tok::end ? " at end of input" : ", found '" + peek().text + "'"));
    take();
  }

  formula parse_until() {
    formula lhs = parse_or();
    if (at_word("U")) {
      take();
      std::optional<time_interval> i;
      if (peek().type == tok::lbrack)
        i = parse_time();
      formula rhs = parse_until();
      return until(std::move(lhs), std::move(rhs), i);
    }
    return lhs;
  }

  formula parse_or() {
    formula f = parse_and();
    while (at_word("or")) {
      take();
      f = lor(std::move(f), parse_and());
    }
    return f;
  }

  formula parse_and() {
    formula f = parse_reach();
    while (at_word("and")) {
      take();
      f = land(std::move(f), parse_reach());
    }
    return f;
  }

  formula parse_reach() {
    formula f = parse_unary();
    while (at_word("reach") || at_word("surround")) {
      bool is_reach = take().text == "reach";
      distance_interval d = parse_dist();
      formula rhs = parse_unary();
      f = is_reach ? reach(std::move(f), std::move(rhs), std::move(d))
                   : surround(std::move(f), std::move(rhs), std::move(d));
    }
    return f;
  }

  formula parse_unary() {
    if (peek().type == tok::ident) {
      const std::string &w = peek().text;
      if (w == "not") {
        take();
        return lnot(parse_unary());
      }
      if (w == "X") {
        take();
        return next(parse_unary());
      }
      if (w == "F" || w == "G") {
        bool ev = take().text == "F";
        std::optional<time_interval> i;
        if (peek().type == tok::lbrack)
          i = parse_time();
        formula body = parse_unary();
        return ev ? eventually(std::move(body), i) : globally(std::move(body), i);
      }
      if (w == "somewhere" || w == "everywhere" || w == "escape") {
        std::string which = take().text;
        distance_interval d = parse_dist();
        formula body = parse_unary();
        if (which == "somewhere")
          return somewhere(std::move(body), std::move(d));
        if (which == "everywhere")
          return everywhere(std::move(body), std::move(d));
        return escape(std::move(body), std::move(d));
      }
    }
    return parse_primary();
  }

  formula parse_primary() {
    const token &t = peek();
    if (t.type == tok::lparen) {
      take();
      formula f = parse_until();
      expect(tok::rparen, "')'");
      return f;
    }
    if (t.type != tok::ident)
      fail(t.type == tok::end ? "unexpected end of input" : "unexpected '" + t.text + "'");
    if (t.text == "true") {
      take();
      return top();
    }
    if (t.text == "false") {
      take();
      return bottom();
    }
    if (is_keyword(t.text))
      fail("unexpected keyword '" + t.text + "'");
    std::string name = take().text;
    if (peek().type == tok::cmp) {
      std::string c = take().text;
      double v = parse_number();
      comparison cmp = c == ">=" ? comparison::ge
                       : c == "<=" ? comparison::le
                       : c == ">"  ? comparison::gt
                                   : comparison::lt;
      return atom(predicate{attribute_test{std::move(name), cmp, v}});
    }
    if (auto it = _opts.aliases.find(name); it != _opts.aliases.end())
      return atom(it->second);
    return atom(std::move(name));
  }

  double parse_number() {
    if (peek().type != tok::number)
      fail("expected a number");
    const token &t = take();
    double v = 0;
    const char *b = t.text.data();
    const char *e = b + t.text.size();
    if (*b == '+')
      ++b;
    auto [p, ec] = std::from_chars(b, e, v);
    if (ec != std::errc{} || p != e)
      throw parse_error("malformed number '" + t.text + "'", t.line, t.column);
    return v;
  }

  std::uint64_t parse_natural() {
    if (peek().type != tok::number)
      fail("expected a natural number");
    const token &t = take();
    std::uint64_t v = 0;
    auto [p, ec] = std::from_chars(t.text.data(), t.text.data() + t.text.size(), v);
    if (ec != std::errc{} || p != t.text.data() + t.text.size())
      throw parse_error("malformed interval bound '" + t.text + "' (expected a natural number)",
                        t.line, t.column);
    return v;
  }

  time_interval parse_time() {
    const token open = peek();
    expect(tok::lbrack, "'['");
    time_interval i;
    i.lo = parse_natural();
    expect(tok::comma, "','");
    if (at_word("inf")) {
      take();
    } else {
      i.hi = parse_natural();
    }
    expect(tok::rbrack, "']'");
    if (i.hi && *i.hi < i.lo)
      throw parse_error("malformed interval: lower bound exceeds upper bound", open.line,
                        open.column);
    return i;
  }

  distance_interval parse_dist() {
    expect(tok::lbrack, "'[' before distance function");
    if (peek().type != tok::ident)
      fail("expected a distance function name");
    const token fn = take();
    const distance_function *f = _opts.registry.find(fn.text);
    if (!f)
      throw parse_error("unknown distance function '" + fn.text + "'", fn.line, fn.column);
    expect(tok::rbrack, "']'");
    const token open = peek();
    expect(tok::lbrack, "'[' before distance interval");
    auto bound = [&]() -> distance {
      const token t = peek();
      double v = 0;
      if (at_word("inf")) {
        take();
        v = distance::infinite;
      } else {
        v = parse_number();
      }
      try {
        return distance::of(f->domain(), v);
      } catch (const algebra_error &e) {
        throw parse_error(std::string("malformed interval: ") + e.what(), t.line, t.column);
      }
    };
    distance lo = bound();
    expect(tok::comma, "','");
    distance hi = bound();
    expect(tok::rbrack, "']'");
    if (dist_less(hi, lo))
      throw parse_error("malformed interval: lower bound exceeds upper bound", open.line,
                        open.column);
    return {fn.text, lo, hi};
  }

  std::vector<token> _toks;
  const parse_options &_opts;
  std::size_t _pos = 0;
};

} // namespace detail

/// Parses formula text; errors carry a line and column
inline formula parse(std::string_view text, const parse_options &opts = {}) {
  detail::lexer lex(text);
  detail::parser p(lex.run(), opts);
  return p.run();
}

/// Parses a predicate on its own, e.g. `dist_to_goal <= 0` or `drone`
inline predicate parse_predicate(std::string_view text, const parse_options &opts = {}) {
  formula f = parse(text, opts);
  if (f.kind() != op::atom)
    throw error("'" + std::string(text) + "' is not an atomic predicate");
  return f.pred();
}

} // namespace strel
