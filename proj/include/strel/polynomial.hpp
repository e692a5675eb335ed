/// @file  polynomial.hpp
/// @brief Canonical multilinear polynomials with coefficients in a De Morgan algebra

#pragma once

#include <algorithm>
#include <concepts>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "strel/algebra.hpp"
#include "strel/error.hpp"

namespace strel {

/// A term `c ⊗ q1 ⊗ … ⊗ qn` with a sorted, duplicate-free variable set
template <de_morgan_algebra A, std::totally_ordered Var>
struct monomial {
  typename A::value_type coefficient;
  std::vector<Var> vars;

  friend bool operator==(const monomial &, const monomial &) = default;
};

/// Sum of monomials in canonical form: no `⊥` coefficients, one monomial per
/// variable set, absorbed monomials removed, sorted by variable set.
///
/// Exponents are idempotent, so the degree of every variable is at most one.
/// The empty polynomial is `⊥`.
template <de_morgan_algebra A, std::totally_ordered Var>
class polynomial {
public:
  using algebra = A;
  using value_type = typename A::value_type;
  using variable = Var;
  using term = monomial<A, Var>;

  /// The `⊥` polynomial
  polynomial() = default;

  static polynomial constant(value_type c) {
    polynomial p;
    if (c != A::bot())
      p._terms.push_back({c, {}});
    return p;
  }
  static polynomial top() { return constant(A::top()); }
  static polynomial bot() { return {}; }
  static polynomial var(Var q) {
    polynomial p;
    p._terms.push_back({A::top(), {std::move(q)}});
    return p;
  }
  /// Builds a polynomial from arbitrary terms and canonicalizes it
  static polynomial from_terms(std::vector<term> terms) {
    for (auto &t : terms) {
      std::sort(t.vars.begin(), t.vars.end());
      t.vars.erase(std::unique(t.vars.begin(), t.vars.end()), t.vars.end());
    }
    polynomial p;
    p._terms = canonicalize(std::move(terms));
    return p;
  }

  [[nodiscard]] const std::vector<term> &terms() const noexcept { return _terms; }
  [[nodiscard]] std::size_t size() const noexcept { return _terms.size(); }
  [[nodiscard]] bool is_bot() const noexcept { return _terms.empty(); }
  [[nodiscard]] bool is_constant() const noexcept {
    return _terms.empty() || (_terms.size() == 1 && _terms.front().vars.empty());
  }
  /// Value of a constant polynomial
  [[nodiscard]] std::optional<value_type> constant_value() const {
    if (_terms.empty())
      return A::bot();
    if (_terms.size() == 1 && _terms.front().vars.empty())
      return _terms.front().coefficient;
    return std::nullopt;
  }

  /// Variables occurring in any monomial, sorted
  [[nodiscard]] std::vector<Var> support() const {
    std::vector<Var> out;
    for (const auto &t : _terms)
      out.insert(out.end(), t.vars.begin(), t.vars.end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

  friend polynomial operator+(const polynomial &a, const polynomial &b) {
    if (a.is_bot())
      return b;
    if (b.is_bot())
      return a;
    std::vector<term> all = a._terms;
    all.insert(all.end(), b._terms.begin(), b._terms.end());
    polynomial p;
    p._terms = canonicalize(std::move(all));
    return p;
  }

  friend polynomial operator*(const polynomial &a, const polynomial &b) {
    if (a.is_bot() || b.is_bot())
      return {};
    if (a.is_top())
      return b;
    if (b.is_top())
      return a;
    std::vector<term> all;
    all.reserve(a._terms.size() * b._terms.size());
    for (const auto &x : a._terms) {
      for (const auto &y : b._terms) {
        value_type c = A::otimes(x.coefficient, y.coefficient);
        if (c == A::bot())
          continue;
        term t{c, {}};
        t.vars.reserve(x.vars.size() + y.vars.size());
        std::set_union(x.vars.begin(), x.vars.end(), y.vars.begin(), y.vars.end(),
                       std::back_inserter(t.vars));
        all.push_back(std::move(t));
      }
    }
    polynomial p;
    p._terms = canonicalize(std::move(all));
    return p;
  }

  polynomial &operator+=(const polynomial &o) { return *this = *this + o; }
  polynomial &operator*=(const polynomial &o) { return *this = *this * o; }

  friend bool operator==(const polynomial &, const polynomial &) = default;

  /// `⊖p` with every variable `q` replaced by its dual `negmap(q)`:
  /// sums become products, coefficients are negated.
  template <class NegMap>
    requires std::convertible_to<std::invoke_result_t<NegMap &, const Var &>, Var>
  [[nodiscard]] polynomial dual(NegMap &&negmap) const {
    polynomial out = top();
    for (const auto &t : _terms) {
      std::vector<term> factor;
      factor.reserve(t.vars.size() + 1);
      value_type c = A::ominus(t.coefficient);
      if (c != A::bot())
        factor.push_back({c, {}});
      for (const auto &q : t.vars)
        factor.push_back({A::top(), {negmap(q)}});
      polynomial f;
      f._terms = canonicalize(std::move(factor));
      out = out * f;
      if (out.is_bot())
        break;
    }
    return out;
  }

  /// Dual under an explicit table; a support variable missing from the table
  /// is an error.
  [[nodiscard]] polynomial dual(const std::map<Var, Var> &negmap) const {
    return dual([&](const Var &q) -> Var {
      auto it = negmap.find(q);
      if (it == negmap.end())
        throw error("dual: variable has no negation partner");
      return it->second;
    });
  }

  /// Simultaneous substitution `p[q ↦ σ(q)]`. `sigma(q)` returns a pointer to
  /// the replacement, or null when `q` is unassigned (an error).
  template <class Sigma>
    requires std::convertible_to<std::invoke_result_t<Sigma &, const Var &>, const polynomial *>
  [[nodiscard]] polynomial substitute(Sigma &&sigma) const {
    polynomial out;
    for (const auto &t : _terms) {
      polynomial prod = constant(t.coefficient);
      for (const auto &q : t.vars) {
        const polynomial *r = sigma(q);
        if (!r)
          throw error("substitute: variable has no assignment");
        prod = prod * *r;
        if (prod.is_bot())
          break;
      }
      out = out + prod;
    }
    return out;
  }

  [[nodiscard]] polynomial substitute(const std::map<Var, polynomial> &sigma) const {
    return substitute([&](const Var &q) -> const polynomial * {
      auto it = sigma.find(q);
      return it == sigma.end() ? nullptr : &it->second;
    });
  }

  /// `⊕` over monomials of `c ⊗ ⊗ v(q)`. `v(q)` returns the value, or an empty
  /// optional when `q` is unassigned (an error).
  template <class Valuation>
    requires std::convertible_to<std::invoke_result_t<Valuation &, const Var &>,
                                 std::optional<value_type>>
  [[nodiscard]] value_type evaluate(Valuation &&v) const {
    value_type sum = A::bot();
    for (const auto &t : _terms) {
      value_type prod = t.coefficient;
      for (const auto &q : t.vars) {
        std::optional<value_type> x = v(q);
        if (!x)
          throw error("evaluate: variable has no value");
        prod = A::otimes(prod, *x);
      }
      sum = A::oplus(sum, prod);
    }
    return sum;
  }

  [[nodiscard]] value_type evaluate(const std::map<Var, value_type> &v) const {
    return evaluate([&](const Var &q) -> std::optional<value_type> {
      auto it = v.find(q);
      if (it == v.end())
        return std::nullopt;
      return it->second;
    });
  }

  /// Sum-of-products text `c*q*q + c*q`; `⊥` polynomial prints as the
  /// algebra's bottom.
  template <class Namer>
  [[nodiscard]] std::string to_string(Namer &&name) const {
    if (_terms.empty())
      return A::format(A::bot());
    std::string s;
    for (std::size_t i = 0; i < _terms.size(); ++i) {
      if (i)
        s += " + ";
      s += A::format(_terms[i].coefficient);
      for (const auto &q : _terms[i].vars)
        s += "*" + std::string(name(q));
    }
    return s;
  }

  /// Inverse of `to_string`; `parse_var` maps a variable name back.
  template <class VarParser>
  static polynomial parse(std::string_view text, VarParser &&parse_var) {
    auto trim = [](std::string_view s) {
      while (!s.empty() && s.front() == ' ')
        s.remove_prefix(1);
      while (!s.empty() && s.back() == ' ')
        s.remove_suffix(1);
      return s;
    };
    std::vector<term> terms;
    while (true) {
      std::size_t plus = text.find(" + ");
      std::string_view item = trim(text.substr(0, plus));
      std::size_t star = item.find('*');
      auto c = A::parse(trim(item.substr(0, star)));
      if (!c)
        throw error("malformed polynomial coefficient in '" + std::string(item) + "'");
      term t{*c, {}};
      while (star != std::string_view::npos) {
        item.remove_prefix(star + 1);
        star = item.find('*');
        t.vars.push_back(parse_var(trim(item.substr(0, star))));
      }
      terms.push_back(std::move(t));
      if (plus == std::string_view::npos)
        break;
      text.remove_prefix(plus + 3);
    }
    return from_terms(std::move(terms));
  }

private:
  [[nodiscard]] bool is_top() const noexcept {
    return _terms.size() == 1 && _terms.front().vars.empty() &&
           _terms.front().coefficient == A::top();
  }

  static bool subset(const std::vector<Var> &a, const std::vector<Var> &b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
  }

  /// Drops `⊥` terms, merges equal variable sets with `⊕`, removes every
  /// term absorbed by one with fewer variables and a larger coefficient.
  static std::vector<term> canonicalize(std::vector<term> terms) {
    std::sort(terms.begin(), terms.end(), [](const term &x, const term &y) {
      if (x.vars.size() != y.vars.size())
        return x.vars.size() < y.vars.size();
      return x.vars < y.vars;
    });
    std::vector<term> merged;
    merged.reserve(terms.size());
    for (auto &t : terms) {
      if (!merged.empty() && merged.back().vars == t.vars)
        merged.back().coefficient = A::oplus(merged.back().coefficient, t.coefficient);
      else
        merged.push_back(std::move(t));
    }
    std::vector<term> kept;
    kept.reserve(merged.size());
    for (auto &t : merged) {
      if (t.coefficient == A::bot())
        continue;
      bool absorbed = false;
      for (const auto &k : kept) {
        if (k.vars.size() < t.vars.size() && A::leq(t.coefficient, k.coefficient) &&
            subset(k.vars, t.vars)) {
          absorbed = true;
          break;
        }
      }
      if (!absorbed)
        kept.push_back(std::move(t));
    }
    std::sort(kept.begin(), kept.end(),
              [](const term &x, const term &y) { return x.vars < y.vars; });
    return kept;
  }

  std::vector<term> _terms;
};

} // namespace strel
