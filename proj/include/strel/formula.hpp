/// @file  formula.hpp
/// @brief Abstract syntax of discrete-time STREL formulas

#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_set>
#include <variant>
#include <vector>

#include "strel/distance.hpp"
#include "strel/error.hpp"

namespace strel {

enum class op : std::uint8_t {
  top,
  bottom,
  atom,
  negation,
  conjunction,
  disjunction,
  next,
  until,
  eventually,
  globally,
  reach,
  escape,
  somewhere,
  everywhere,
  surround,
};

/// Discrete time window `[lo, hi]`; `hi` empty means `∞`
struct time_interval {
  std::uint64_t lo = 0;
  std::optional<std::uint64_t> hi;

  [[nodiscard]] bool bounded() const noexcept { return hi.has_value(); }
  friend bool operator==(const time_interval &, const time_interval &) = default;
};

/// Distance window `[lo, hi]` under a named distance function
struct distance_interval {
  std::string function;
  distance lo;
  distance hi;

  friend bool operator==(const distance_interval &, const distance_interval &) = default;
};

/// Location kind equals a literal
struct kind_test {
  std::string kind;
  friend bool operator==(const kind_test &, const kind_test &) = default;
};

enum class comparison : std::uint8_t { ge, le, gt, lt };

inline const char *to_string(comparison c) noexcept {
  switch (c) {
  case comparison::ge:
    return ">=";
  case comparison::le:
    return "<=";
  case comparison::gt:
    return ">";
  case comparison::lt:
    return "<";
  }
  return "?";
}

/// Numeric attribute compared against a constant
struct attribute_test {
  std::string attribute;
  comparison cmp = comparison::ge;
  double threshold = 0.0;
  friend bool operator==(const attribute_test &, const attribute_test &) = default;
};

using predicate = std::variant<kind_test, attribute_test>;

class formula;

namespace detail {
struct formula_node {
  op kind;
  std::vector<formula> children;
  std::optional<time_interval> time;
  std::optional<distance_interval> space;
  std::optional<predicate> pred;
  std::size_t hash = 0;
};

inline std::size_t hash_mix(std::size_t seed, std::size_t v) noexcept {
  return seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}
} // namespace detail

/// Immutable formula tree with shared subterms and structural equality
class formula {
public:
  formula() = delete;

  [[nodiscard]] op kind() const noexcept { return _node->kind; }
  [[nodiscard]] std::size_t arity() const noexcept { return _node->children.size(); }
  [[nodiscard]] const formula &child(std::size_t i) const { return _node->children.at(i); }
  [[nodiscard]] const std::vector<formula> &children() const noexcept { return _node->children; }
  [[nodiscard]] const std::optional<time_interval> &time() const noexcept { return _node->time; }
  [[nodiscard]] const distance_interval &space() const { return _node->space.value(); }
  [[nodiscard]] const predicate &pred() const { return _node->pred.value(); }
  [[nodiscard]] std::size_t hash() const noexcept { return _node->hash; }
  /// Identity of the shared node (not structural)
  [[nodiscard]] const void *identity() const noexcept { return _node.get(); }

  friend bool operator==(const formula &a, const formula &b) {
    if (a._node == b._node)
      return true;
    const auto &x = *a._node;
    const auto &y = *b._node;
    return x.hash == y.hash && x.kind == y.kind && x.time == y.time && x.space == y.space &&
           x.pred == y.pred && x.children == y.children;
  }

  /// Node constructor used by the factory functions below
  static formula make(op kind, std::vector<formula> children,
                      std::optional<time_interval> time = std::nullopt,
                      std::optional<distance_interval> space = std::nullopt,
                      std::optional<predicate> pred = std::nullopt) {
    auto n = std::make_shared<detail::formula_node>();
    n->kind = kind;
    n->children = std::move(children);
    n->time = std::move(time);
    n->space = std::move(space);
    n->pred = std::move(pred);
    std::size_t h = std::hash<int>{}(static_cast<int>(kind));
    for (const auto &c : n->children)
      h = detail::hash_mix(h, c.hash());
    if (n->time) {
      h = detail::hash_mix(h, std::hash<std::uint64_t>{}(n->time->lo));
      h = detail::hash_mix(h, n->time->hi ? std::hash<std::uint64_t>{}(*n->time->hi) : 7);
    }
    if (n->space) {
      h = detail::hash_mix(h, std::hash<std::string>{}(n->space->function));
      h = detail::hash_mix(h, std::hash<double>{}(n->space->lo.value()));
      h = detail::hash_mix(h, std::hash<double>{}(n->space->hi.value()));
    }
    if (n->pred) {
      std::visit(
          [&](const auto &p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, kind_test>) {
              h = detail::hash_mix(h, std::hash<std::string>{}(p.kind));
            } else {
              h = detail::hash_mix(h, std::hash<std::string>{}(p.attribute));
              h = detail::hash_mix(h, static_cast<std::size_t>(p.cmp) + 1);
              h = detail::hash_mix(h, std::hash<double>{}(p.threshold));
            }
          },
          *n->pred);
    }
    n->hash = h;
    return formula(std::move(n));
  }

private:
  explicit formula(std::shared_ptr<const detail::formula_node> n) : _node(std::move(n)) {}

  std::shared_ptr<const detail::formula_node> _node;
};

struct formula_hash {
  std::size_t operator()(const formula &f) const noexcept { return f.hash(); }
};

inline formula top() { return formula::make(op::top, {}); }
inline formula bottom() { return formula::make(op::bottom, {}); }
inline formula atom(predicate p) { return formula::make(op::atom, {}, {}, {}, std::move(p)); }
inline formula atom(std::string kind) { return atom(predicate{kind_test{std::move(kind)}}); }
inline formula lnot(formula f) { return formula::make(op::negation, {std::move(f)}); }
inline formula land(formula a, formula b) {
  return formula::make(op::conjunction, {std::move(a), std::move(b)});
}
inline formula lor(formula a, formula b) {
  return formula::make(op::disjunction, {std::move(a), std::move(b)});
}
inline formula next(formula f) { return formula::make(op::next, {std::move(f)}); }
inline formula until(formula a, formula b, std::optional<time_interval> i = std::nullopt) {
  return formula::make(op::until, {std::move(a), std::move(b)}, std::move(i));
}
inline formula eventually(formula f, std::optional<time_interval> i = std::nullopt) {
  return formula::make(op::eventually, {std::move(f)}, std::move(i));
}
inline formula globally(formula f, std::optional<time_interval> i = std::nullopt) {
  return formula::make(op::globally, {std::move(f)}, std::move(i));
}
inline formula reach(formula a, formula b, distance_interval d) {
  return formula::make(op::reach, {std::move(a), std::move(b)}, std::nullopt, std::move(d));
}
inline formula escape(formula f, distance_interval d) {
  return formula::make(op::escape, {std::move(f)}, std::nullopt, std::move(d));
}
inline formula somewhere(formula f, distance_interval d) {
  return formula::make(op::somewhere, {std::move(f)}, std::nullopt, std::move(d));
}
inline formula everywhere(formula f, distance_interval d) {
  return formula::make(op::everywhere, {std::move(f)}, std::nullopt, std::move(d));
}
inline formula surround(formula a, formula b, distance_interval d) {
  return formula::make(op::surround, {std::move(a), std::move(b)}, std::nullopt, std::move(d));
}

/// Negation with double-negation elimination: `neg(¬φ) = φ`
inline formula neg(const formula &f) {
  if (f.kind() == op::negation)
    return f.child(0);
  return lnot(f);
}

/// Number of distinct subformulas (shared subterms counted once)
inline std::size_t dag_size(const formula &f) {
  std::unordered_set<formula, formula_hash> seen;
  std::vector<formula> stack{f};
  while (!stack.empty()) {
    formula g = stack.back();
    stack.pop_back();
    if (!seen.insert(g).second)
      continue;
    for (const auto &c : g.children())
      stack.push_back(c);
  }
  return seen.size();
}

/// Number of nodes of the fully unshared syntax tree
inline std::size_t tree_size(const formula &f) {
  std::size_t n = 1;
  for (const auto &c : f.children())
    n += tree_size(c);
  return n;
}

/// Sum over time intervals of their largest finite endpoint (the number of
/// steps an interval reaches into the future)
inline std::uint64_t interval_span(const formula &f) {
  std::uint64_t s = 0;
  if (f.time())
    s += f.time()->hi ? *f.time()->hi : f.time()->lo;
  for (const auto &c : f.children())
    s += interval_span(c);
  return s;
}

inline std::string to_string(const predicate &p) {
  if (const auto *k = std::get_if<kind_test>(&p))
    return k->kind;
  const auto &a = std::get<attribute_test>(p);
  return "(" + a.attribute + " " + to_string(a.cmp) + " " + format_real(a.threshold) + ")";
}

inline std::string to_string(const time_interval &i) {
  return "[" + std::to_string(i.lo) + "," + (i.hi ? std::to_string(*i.hi) : "inf") + "]";
}

inline std::string to_string(const distance_interval &d) {
  return "[" + d.function + "][" + d.lo.to_string() + "," + d.hi.to_string() + "]";
}

/// Concrete syntax accepted by `parse`; binary operators are parenthesized
inline std::string to_string(const formula &f) {
  auto time = [&] { return f.time() ? to_string(*f.time()) : std::string(); };
  switch (f.kind()) {
  case op::top:
    return "true";
  case op::bottom:
    return "false";
  case op::atom:
    return to_string(f.pred());
  case op::negation:
    return "not " + to_string(f.child(0));
  case op::conjunction:
    return "(" + to_string(f.child(0)) + " and " + to_string(f.child(1)) + ")";
  case op::disjunction:
    return "(" + to_string(f.child(0)) + " or " + to_string(f.child(1)) + ")";
  case op::next:
    return "X " + to_string(f.child(0));
  case op::until:
    return "(" + to_string(f.child(0)) + " U" + time() + " " + to_string(f.child(1)) + ")";
  case op::eventually:
    return "F" + time() + " " + to_string(f.child(0));
  case op::globally:
    return "G" + time() + " " + to_string(f.child(0));
  case op::reach:
    return "(" + to_string(f.child(0)) + " reach" + to_string(f.space()) + " " +
           to_string(f.child(1)) + ")";
  case op::escape:
    return "escape" + to_string(f.space()) + " " + to_string(f.child(0));
  case op::somewhere:
    return "somewhere" + to_string(f.space()) + " " + to_string(f.child(0));
  case op::everywhere:
    return "everywhere" + to_string(f.space()) + " " + to_string(f.child(0));
  case op::surround:
    return "(" + to_string(f.child(0)) + " surround" + to_string(f.space()) + " " +
           to_string(f.child(1)) + ")";
  }
  return "?";
}

} // namespace strel
