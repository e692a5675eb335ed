/// @file  automaton.hpp
/// @brief Alternating weighted automata compiled from SpLTL formulas

#pragma once

#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "strel/algebra.hpp"
#include "strel/error.hpp"
#include "strel/formula.hpp"
#include "strel/label.hpp"
#include "strel/polynomial.hpp"
#include "strel/rewrite.hpp"
#include "strel/spatial.hpp"

namespace strel {

/// Variable of a transition polynomial: the state `q_φ^l` (closure index and
/// location) plus the value `terminal` it takes if the trace ends before it
/// is expanded.
///
/// For until-shaped states `terminal` is fixed by the accepting set. Next
/// successors inherit it from the polarity of the enclosing next, so that a
/// pending `X ψ` is rejected at the end of the trace while its negation is
/// accepted.
struct state_var {
  std::uint32_t formula;
  location loc;
  bool terminal;

  friend auto operator<=>(const state_var &, const state_var &) = default;
};

/// Alternating automaton over spatial models with values in `A`.
///
/// States are `Φ × L` for the closure `Φ` of the formula. Transitions are
/// evaluated on demand per snapshot.
template <de_morgan_algebra A>
class automaton {
public:
  using value_type = typename A::value_type;
  using poly = polynomial<A, state_var>;

  /// Per-snapshot table of `Δ(q, S)`, shared by every monitor consuming `S`
  class transition_cache {
  public:
    transition_cache(const automaton &aut, const spatial_model &s) : _aut(&aut), _snapshot(&s) {
      if (!(s.locations() == aut.locations()))
        throw model_error("snapshot location set differs from the automaton's");
      _table.resize(aut._closure.size() * aut._universe->size());
    }
    [[nodiscard]] const spatial_model &snapshot() const noexcept { return *_snapshot; }

  private:
    friend class automaton;
    const automaton *_aut;
    const spatial_model *_snapshot;
    std::vector<std::optional<poly>> _table;
  };

  automaton(formula f, std::shared_ptr<const universe> locations,
            distance_registry registry = distance_registry::defaults())
      : _root_formula(std::move(f)), _universe(std::move(locations)),
        _registry(std::move(registry)) {
    if (!_universe || _universe->size() == 0)
      throw model_error("location set is empty");
    if (!is_spltl(_root_formula))
      throw error("automaton construction needs an interval-free formula; "
                  "apply eliminate_intervals first");
    _closure = closure(_root_formula);
    _accepting.resize(_closure.size());
    for (std::size_t i = 0; i < _closure.size(); ++i) {
      const formula &g = _closure.formulas[i];
      _accepting[i] = g.kind() == op::negation && g.child(0).kind() == op::until;
      if (g.kind() == op::reach || g.kind() == op::escape)
        (void)_registry.at(g.space().function);
    }
    _root = static_cast<std::uint32_t>(_closure.at(_root_formula));
    _children.resize(_closure.size());
    for (std::size_t i = 0; i < _closure.size(); ++i)
      for (const auto &c : _closure.formulas[i].children())
        _children[i].push_back(static_cast<std::uint32_t>(_closure.at(c)));
  }

  [[nodiscard]] const formula &root_formula() const noexcept { return _root_formula; }
  [[nodiscard]] const universe &locations() const noexcept { return *_universe; }
  [[nodiscard]] const closure_set &formulas() const noexcept { return _closure; }
  [[nodiscard]] const distance_registry &registry() const noexcept { return _registry; }

  /// `|Φ| · |L|`
  [[nodiscard]] std::size_t state_count() const noexcept {
    return _closure.size() * _universe->size();
  }
  /// Whether closure formula `i` has the shape `¬(ψ1 U ψ2)`
  [[nodiscard]] bool accepting_formula(std::size_t i) const { return _accepting.at(i); }
  /// `|F|`
  [[nodiscard]] std::size_t accepting_count() const noexcept {
    std::size_t n = 0;
    for (bool b : _accepting)
      n += b;
    return n * _universe->size();
  }
  /// All states `(i, l)` with `i` accepting
  [[nodiscard]] std::vector<std::pair<std::size_t, location>> accepting_states() const {
    std::vector<std::pair<std::size_t, location>> out;
    for (std::size_t i = 0; i < _closure.size(); ++i)
      if (_accepting[i])
        for (location l = 0; l < _universe->size(); ++l)
          out.emplace_back(i, l);
    return out;
  }

  /// Variable for state `q_φ^l` as it appears in `α` and in until transitions
  [[nodiscard]] state_var state(std::size_t formula_index, location l) const {
    return {static_cast<std::uint32_t>(formula_index), l, _accepting.at(formula_index)};
  }

  /// `α`: the root state at the ego location
  [[nodiscard]] poly initial(location ego) const {
    require_location(ego);
    return poly::var(state(_root, ego));
  }

  /// `β`
  [[nodiscard]] static value_type terminal(const state_var &q) noexcept {
    return q.terminal ? A::top() : A::bot();
  }

  /// Dual of a variable: `q_ψ^l ↦ q_¬ψ^l` with the terminal value negated
  [[nodiscard]] state_var dual(const state_var &q) const {
    return {static_cast<std::uint32_t>(_closure.negation.at(q.formula)), q.loc, !q.terminal};
  }

  /// `Δ(q_φ^l, S)` for the state's formula and location
  [[nodiscard]] const poly &delta(const state_var &q, transition_cache &cache) const {
    return delta(q.formula, q.loc, cache);
  }

  [[nodiscard]] const poly &delta(std::size_t i, location l, transition_cache &cache) const {
    if (cache._aut != this)
      throw error("transition cache belongs to another automaton");
    require_location(l);
    auto &slot = cache._table[i * _universe->size() + l];
    if (!slot)
      slot = compute(i, l, cache);
    return *slot;
  }

  /// Readable state name `q<i>.<loc>`, with a trailing `'` when terminal is ⊤
  [[nodiscard]] std::string name(const state_var &q) const {
    return "q" + std::to_string(q.formula) + "." + _universe->name(q.loc) + (q.terminal ? "'" : "");
  }

  /// Inverse of `name`
  [[nodiscard]] state_var parse_state(std::string_view s) const {
    bool terminal = !s.empty() && s.back() == '\'';
    if (terminal)
      s.remove_suffix(1);
    std::size_t dot = s.find('.');
    if (s.size() < 3 || s[0] != 'q' || dot == std::string_view::npos)
      throw error("malformed state name '" + std::string(s) + "'");
    std::uint32_t idx = 0;
    auto digits = s.substr(1, dot - 1);
    auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), idx);
    if (ec != std::errc{} || p != digits.data() + digits.size() || idx >= _closure.size())
      throw error("malformed state name '" + std::string(s) + "'");
    return {idx, _universe->at(s.substr(dot + 1)), terminal};
  }

  /// Closure indices reachable from the root through next and until
  /// successors, with their polarity closed under negation
  [[nodiscard]] std::vector<bool> reachable_formulas() const {
    std::vector<bool> live(_closure.size(), false);
    std::vector<std::uint32_t> work;
    auto visit = [&](std::uint32_t i) {
      if (!live[i]) {
        live[i] = true;
        work.push_back(i);
      }
    };
    visit(_root);
    while (!work.empty()) {
      std::uint32_t i = work.back();
      work.pop_back();
      for (std::uint32_t s : successors(i))
        visit(s);
    }
    return live;
  }

  /// Formula-level successor relation: states that can appear in `Δ(q_i, S)`
  [[nodiscard]] std::vector<std::uint32_t> successors(std::uint32_t i) const {
    std::vector<std::uint32_t> out;
    std::vector<bool> seen(_closure.size(), false);
    // formulas whose transitions are expanded inside Δ(q_i): pairs of (index, negated)
    std::vector<std::pair<std::uint32_t, bool>> stack{{i, false}};
    std::set<std::pair<std::uint32_t, bool>> expanded;
    auto emit = [&](std::uint32_t s) {
      if (!seen[s]) {
        seen[s] = true;
        out.push_back(s);
      }
    };
    while (!stack.empty()) {
      auto [j, negated] = stack.back();
      stack.pop_back();
      if (!expanded.insert({j, negated}).second)
        continue;
      const formula &g = _closure.formulas[j];
      auto pol = [&](std::uint32_t k) {
        return negated ? static_cast<std::uint32_t>(_closure.negation[k]) : k;
      };
      switch (g.kind()) {
      case op::negation:
        stack.emplace_back(_children[j][0], !negated);
        break;
      case op::next:
        emit(pol(_children[j][0]));
        break;
      case op::until:
        emit(pol(j));
        [[fallthrough]];
      default:
        for (std::uint32_t c : _children[j])
          stack.emplace_back(c, negated);
        break;
      }
    }
    return out;
  }

  /// Number of states left after removing those unreachable from every
  /// initial state
  [[nodiscard]] std::size_t pruned_state_count() const {
    std::size_t n = 0;
    for (bool b : reachable_formulas())
      n += b;
    return n * _universe->size();
  }

  /// Formula-level successor graph in dot syntax
  [[nodiscard]] std::string to_dot() const {
    std::string s = "digraph automaton {\n";
    for (std::size_t i = 0; i < _closure.size(); ++i) {
      std::string label = to_string(_closure.formulas[i]);
      std::string escaped;
      for (char c : label) {
        if (c == '"' || c == '\\')
          escaped += '\\';
        escaped += c;
      }
      s += "  q" + std::to_string(i) + " [label=\"" + escaped + "\"" +
           (_accepting[i] ? ", shape=doublecircle" : "") + "];\n";
    }
    for (std::uint32_t i = 0; i < _closure.size(); ++i)
      for (std::uint32_t j : successors(i))
        s += "  q" + std::to_string(i) + " -> q" + std::to_string(j) + ";\n";
    s += "}\n";
    return s;
  }

private:
  void require_location(location l) const {
    if (l >= _universe->size())
      throw model_error("location index " + std::to_string(l) + " is not in the location set");
  }

  poly compute(std::size_t i, location l, transition_cache &cache) const {
    const formula &g = _closure.formulas[i];
    const auto &ch = _children[i];
    switch (g.kind()) {
    case op::top:
      return poly::top();
    case op::bottom:
      return poly::bot();
    case op::atom:
      return poly::constant(label<A>(cache.snapshot(), l, g.pred()));
    case op::negation:
      return delta(ch[0], l, cache).dual([this](const state_var &q) { return dual(q); });
    case op::conjunction:
      return delta(ch[0], l, cache) * delta(ch[1], l, cache);
    case op::disjunction:
      return delta(ch[0], l, cache) + delta(ch[1], l, cache);
    case op::next:
      return poly::var({ch[0], l, false});
    case op::until:
      return delta(ch[1], l, cache) +
             delta(ch[0], l, cache) * poly::var({static_cast<std::uint32_t>(i), l, false});
    case op::reach:
      return reach(ch[0], ch[1], g.space(), l, cache);
    case op::escape:
      return escape(ch[0], g.space(), l, cache);
    default:
      throw unsupported_operator("operator is not part of the automaton syntax: " + to_string(g));
    }
  }

  poly reach(std::uint32_t phi, std::uint32_t psi, const distance_interval &d, location l,
             transition_cache &cache) const {
    const spatial_model &s = cache.snapshot();
    const distance_function &fn = _registry.at(d.function);
    poly sum;
    // prefix[n-1] = ⊗ of Δ(φ) over the first n-1 locations of the current path
    std::vector<poly> prefix;
    for_each_bounded_path(
        s, l, fn, d.hi, [&](std::span<const location> nodes, std::span<const distance> dist) {
          const std::size_t n = nodes.size();
          prefix.resize(n);
          if (n == 1)
            prefix[0] = poly::top();
          else
            prefix[n - 1] = prefix[n - 2] * delta(phi, nodes[n - 2], cache);
          if (prefix[n - 1].is_bot())
            return false;
          if (dist_in_interval(dist[n - 1], d.lo, d.hi))
            sum += prefix[n - 1] * delta(psi, nodes[n - 1], cache);
          return true;
        });
    return sum;
  }

  /// Widest-path fixpoint: `w[v]` is the `⊕` over walks from `l` to `v` of
  /// the `⊗` of `Δ(φ)` along the walk; repeated locations only add absorbed
  /// terms, so it equals the sum over simple paths.
  poly escape(std::uint32_t phi, const distance_interval &d, location l,
              transition_cache &cache) const {
    const spatial_model &s = cache.snapshot();
    const distance_function &fn = _registry.at(d.function);
    const auto shortest = shortest_distances(s, l, fn);
    const std::size_t n = s.size();
    std::vector<poly> w(n);
    w[l] = delta(phi, l, cache);
    for (std::size_t round = 0; round + 1 < n; ++round) {
      bool changed = false;
      std::vector<poly> next = w;
      for (const auto &e : s.edges()) {
        if (w[e.src].is_bot())
          continue;
        poly cand = next[e.dst] + w[e.src] * delta(phi, e.dst, cache);
        if (!(cand == next[e.dst])) {
          next[e.dst] = std::move(cand);
          changed = true;
        }
      }
      w = std::move(next);
      if (!changed)
        break;
    }
    poly sum;
    for (location v = 0; v < n; ++v)
      if (dist_in_interval(shortest[v], d.lo, d.hi))
        sum += w[v];
    return sum;
  }

  formula _root_formula;
  std::shared_ptr<const universe> _universe;
  distance_registry _registry;
  closure_set _closure;
  std::vector<bool> _accepting;
  std::vector<std::vector<std::uint32_t>> _children;
  std::uint32_t _root = 0;
};

} // namespace strel
