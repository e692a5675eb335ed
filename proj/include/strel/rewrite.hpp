/// @file  rewrite.hpp
/// @brief Derived-operator expansion, interval elimination, and closure

#pragma once

#include <cstdint>
#include <unordered_map>
#include <vector>

#include "strel/formula.hpp"

namespace strel {

/// Rewrites derived operators into the core syntax:
/// `somewhere φ = ⊤ reach φ`, `everywhere φ = ¬ somewhere ¬φ`,
/// `F_I φ = ⊤ U_I φ`, `G_I φ = ¬(⊤ U_I ¬φ)`.
inline formula desugar(const formula &f) {
  auto d = [](const formula &g) { return desugar(g); };
  switch (f.kind()) {
  case op::top:
  case op::bottom:
  case op::atom:
    return f;
  case op::negation:
    return lnot(d(f.child(0)));
  case op::conjunction:
    return land(d(f.child(0)), d(f.child(1)));
  case op::disjunction:
    return lor(d(f.child(0)), d(f.child(1)));
  case op::next:
    return next(d(f.child(0)));
  case op::until:
    return until(d(f.child(0)), d(f.child(1)), f.time());
  case op::eventually:
    return until(top(), d(f.child(0)), f.time());
  case op::globally:
    return lnot(until(top(), neg(d(f.child(0))), f.time()));
  case op::reach:
    return reach(d(f.child(0)), d(f.child(1)), f.space());
  case op::escape:
    return escape(d(f.child(0)), f.space());
  case op::somewhere:
    return reach(top(), d(f.child(0)), f.space());
  case op::everywhere:
    return lnot(reach(top(), neg(d(f.child(0))), f.space()));
  case op::surround:
    throw unsupported_operator("the surround operator has no defined semantics");
  }
  return f;
}

namespace detail {

inline formula next_power(formula f, std::uint64_t n) {
  for (std::uint64_t i = 0; i < n; ++i)
    f = next(std::move(f));
  return f;
}

/// `F_[lo,hi] φ` as nested next-disjunctions; `hi` empty means unbounded
inline formula expand_eventually(const formula &body, std::uint64_t lo,
                                 std::optional<std::uint64_t> hi) {
  if (!hi)
    return next_power(until(top(), body), lo);
  formula chain = body;
  for (std::uint64_t k = lo; k < *hi; ++k)
    chain = lor(body, next(chain));
  return next_power(std::move(chain), lo);
}

inline formula expand_globally(const formula &body, std::uint64_t lo,
                               std::optional<std::uint64_t> hi) {
  return neg(expand_eventually(neg(body), lo, hi));
}

inline void check_interval(const time_interval &i) {
  if (i.hi && *i.hi < i.lo)
    throw error("invalid time interval " + to_string(i));
}

inline formula expand_until(const formula &lhs, const formula &rhs, const time_interval &i) {
  check_interval(i);
  if (lhs.kind() == op::top)
    return expand_eventually(rhs, i.lo, i.hi);
  if (i.hi) {
    // φ U[a,b] ψ ≡ F[a,b] ψ ∧ φ U[a,∞) ψ
    return land(expand_eventually(rhs, i.lo, i.hi), expand_until(lhs, rhs, {i.lo, {}}));
  }
  if (i.lo == 0)
    return until(lhs, rhs);
  // φ U[a,∞) ψ ≡ G[0,a-1] φ ∧ F[a,a](φ U ψ)
  return land(expand_globally(lhs, 0, i.lo - 1), next_power(until(lhs, rhs), i.lo));
}

} // namespace detail

/// Removes every time interval, producing an SpLTL formula. Bounded windows
/// become chains of next operators; unbounded ones reduce to untimed until.
inline formula eliminate_intervals(const formula &f) {
  auto e = [](const formula &g) { return eliminate_intervals(g); };
  switch (f.kind()) {
  case op::top:
  case op::bottom:
  case op::atom:
    return f;
  case op::negation:
    return neg(e(f.child(0)));
  case op::conjunction:
    return land(e(f.child(0)), e(f.child(1)));
  case op::disjunction:
    return lor(e(f.child(0)), e(f.child(1)));
  case op::next:
    return next(e(f.child(0)));
  case op::until:
    if (!f.time())
      return until(e(f.child(0)), e(f.child(1)));
    return detail::expand_until(e(f.child(0)), e(f.child(1)), *f.time());
  case op::eventually: {
    formula body = e(f.child(0));
    if (!f.time())
      return until(top(), body);
    detail::check_interval(*f.time());
    return detail::expand_eventually(body, f.time()->lo, f.time()->hi);
  }
  case op::globally: {
    formula body = e(f.child(0));
    if (!f.time())
      return lnot(until(top(), neg(body)));
    detail::check_interval(*f.time());
    return detail::expand_globally(body, f.time()->lo, f.time()->hi);
  }
  case op::reach:
    return reach(e(f.child(0)), e(f.child(1)), f.space());
  case op::escape:
    return escape(e(f.child(0)), f.space());
  case op::somewhere:
  case op::everywhere:
    return eliminate_intervals(desugar(f));
  case op::surround:
    throw unsupported_operator("the surround operator has no defined semantics");
  }
  return f;
}

/// True when `f` only uses the interval-free core operators
inline bool is_spltl(const formula &f) {
  switch (f.kind()) {
  case op::eventually:
  case op::globally:
  case op::somewhere:
  case op::everywhere:
  case op::surround:
    return false;
  case op::until:
    if (f.time())
      return false;
    break;
  default:
    break;
  }
  for (const auto &c : f.children())
    if (!is_spltl(c))
      return false;
  return true;
}

/// Subformulas of a formula together with their negations
struct closure_set {
  std::vector<formula> formulas;
  /// `negation[i]` is the index of `neg(formulas[i])`
  std::vector<std::size_t> negation;
  std::unordered_map<formula, std::size_t, formula_hash> index;

  [[nodiscard]] std::size_t size() const noexcept { return formulas.size(); }
  [[nodiscard]] std::size_t at(const formula &f) const {
    auto it = index.find(f);
    if (it == index.end())
      throw error("formula is not in the closure: " + to_string(f));
    return it->second;
  }
};

/// Every subformula and the negation of each, modulo `¬¬ψ ≡ ψ`, in
/// post-order (each formula followed by its negation).
inline closure_set closure(const formula &f) {
  closure_set c;
  auto add = [&](const formula &g) {
    if (c.index.emplace(g, c.formulas.size()).second)
      c.formulas.push_back(g);
  };
  auto walk = [&](const formula &g, auto &self) -> void {
    if (c.index.count(g))
      return;
    if (g.kind() == op::negation && g.child(0).kind() == op::negation) {
      const formula &inner = g.child(0).child(0);
      self(inner, self);
      c.index.emplace(g, c.index.at(inner));
      return;
    }
    for (const auto &ch : g.children())
      self(ch, self);
    add(g);
    add(neg(g));
  };
  walk(f, walk);
  c.negation.resize(c.formulas.size());
  for (std::size_t i = 0; i < c.formulas.size(); ++i)
    c.negation[i] = c.at(neg(c.formulas[i]));
  return c;
}

} // namespace strel
