/// @file  oracle.hpp
/// @brief Direct recursive evaluation of the STREL semantics on a finite trace

#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <tuple>
#include <unordered_map>
#include <vector>

#include "strel/algebra.hpp"
#include "strel/error.hpp"
#include "strel/formula.hpp"
#include "strel/label.hpp"
#include "strel/spatial.hpp"

namespace strel {

/// Evaluates `ρ(φ, S, t, l)` literally over a trace of snapshots.
///
/// Finite-trace semantics are strong: time windows are cut at the last
/// snapshot and `X` at the last snapshot is `⊥`. With `memoize` set, values
/// are cached per (subformula, location, time).
template <de_morgan_algebra A>
class semantics {
public:
  using value_type = typename A::value_type;

  semantics(std::span<const spatial_model> trace, distance_registry registry = distance_registry::defaults(),
            bool memoize = true)
      : _trace(trace), _registry(std::move(registry)), _memoize(memoize) {
    if (_trace.empty())
      throw error("trace is empty");
    for (const auto &s : _trace)
      if (!(s.locations() == _trace.front().locations()))
        throw error("snapshots of a trace must share one location set");
  }

  value_type operator()(const formula &f, location l, std::size_t t) {
    if (t >= _trace.size())
      throw error("time index " + std::to_string(t) + " is outside the trace");
    detail::require_location(_trace.front(), l);
    return eval(f, l, t);
  }

private:
  struct key {
    const void *node;
    location l;
    std::size_t t;
    bool operator==(const key &) const = default;
  };
  struct key_hash {
    std::size_t operator()(const key &k) const noexcept {
      std::size_t h = std::hash<const void *>{}(k.node);
      h ^= (static_cast<std::size_t>(k.l) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
      h ^= (k.t + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2));
      return h;
    }
  };

  value_type eval(const formula &f, location l, std::size_t t) {
    if (!_memoize)
      return compute(f, l, t);
    key k{f.identity(), l, t};
    if (auto it = _memo.find(k); it != _memo.end())
      return it->second;
    value_type v = compute(f, l, t);
    _memo.emplace(k, v);
    // keep the node alive so its address stays unique while cached
    _pins.push_back(f);
    return v;
  }

  /// Last time point of `t + I` inside the trace, or nothing when empty
  std::optional<std::pair<std::size_t, std::size_t>> window(std::size_t t,
                                                            const std::optional<time_interval> &i) {
    const std::size_t last = _trace.size() - 1;
    std::uint64_t lo = i ? i->lo : 0;
    if (i && i->hi && *i->hi < i->lo)
      throw error("invalid time interval " + to_string(*i));
    if (lo > last - t)
      return std::nullopt;
    std::size_t from = t + lo;
    std::size_t to = last;
    if (i && i->hi && *i->hi < last - t)
      to = t + *i->hi;
    return std::make_pair(from, to);
  }

  value_type compute(const formula &f, location l, std::size_t t) {
    const spatial_model &s = _trace[t];
    switch (f.kind()) {
    case op::top:
      return A::top();
    case op::bottom:
      return A::bot();
    case op::atom:
      return label<A>(s, l, f.pred());
    case op::negation:
      return A::ominus(eval(f.child(0), l, t));
    case op::conjunction:
      return A::otimes(eval(f.child(0), l, t), eval(f.child(1), l, t));
    case op::disjunction:
      return A::oplus(eval(f.child(0), l, t), eval(f.child(1), l, t));
    case op::next:
      return t + 1 < _trace.size() ? eval(f.child(0), l, t + 1) : A::bot();
    case op::until: {
      auto w = window(t, f.time());
      value_type sum = A::bot();
      if (!w)
        return sum;
      for (std::size_t t1 = w->first; t1 <= w->second; ++t1) {
        value_type prod = eval(f.child(1), l, t1);
        for (std::size_t t2 = t; t2 < t1; ++t2)
          prod = A::otimes(prod, eval(f.child(0), l, t2));
        sum = A::oplus(sum, prod);
      }
      return sum;
    }
    case op::eventually: {
      auto w = window(t, f.time());
      value_type sum = A::bot();
      if (w)
        for (std::size_t t1 = w->first; t1 <= w->second; ++t1)
          sum = A::oplus(sum, eval(f.child(0), l, t1));
      return sum;
    }
    case op::globally: {
      auto w = window(t, f.time());
      value_type prod = A::top();
      if (w)
        for (std::size_t t1 = w->first; t1 <= w->second; ++t1)
          prod = A::otimes(prod, eval(f.child(0), l, t1));
      return prod;
    }
    case op::reach:
      return reach(f.child(0), f.child(1), f.space(), l, t);
    case op::somewhere:
      return reach(top(), f.child(0), f.space(), l, t);
    case op::everywhere:
      return A::ominus(reach(top(), neg(f.child(0)), f.space(), l, t));
    case op::escape:
      return escape(f.child(0), f.space(), l, t);
    case op::surround:
      throw unsupported_operator("the surround operator has no defined semantics");
    }
    return A::bot();
  }

  /// `⊕` over bounded simple paths `τ` from `l` and positions `i` with
  /// `d[i] ∈ [d1, d2]` of `ρ(ψ, τ[i]) ⊗ ⊗_{j<i} ρ(φ, τ[j])`
  value_type reach(const formula &phi, const formula &psi, const distance_interval &d, location l,
                   std::size_t t) {
    const spatial_model &s = _trace[t];
    const distance_function &fn = _registry.at(d.function);
    value_type sum = A::bot();
    for (const auto &p : enumerate_bounded_paths(s, l, fn, d.hi)) {
      const std::size_t i = p.nodes.size() - 1;
      if (!dist_in_interval(p.prefix[i], d.lo, d.hi))
        continue;
      value_type prod = eval(psi, p.nodes[i], t);
      for (std::size_t j = 0; j < i; ++j)
        prod = A::otimes(prod, eval(phi, p.nodes[j], t));
      sum = A::oplus(sum, prod);
    }
    return sum;
  }

  /// `⊕` over simple paths `τ` from `l` and positions `i` whose location has
  /// shortest distance in `[d1, d2]` of `⊗_{j≤i} ρ(φ, τ[j])`
  value_type escape(const formula &phi, const distance_interval &d, location l, std::size_t t) {
    const spatial_model &s = _trace[t];
    const distance_function &fn = _registry.at(d.function);
    const auto shortest = shortest_distances(s, l, fn);
    value_type sum = A::bot();
    for (const auto &p : enumerate_bounded_paths(s, l, fn, distance::infinity(fn.domain()))) {
      const std::size_t i = p.nodes.size() - 1;
      if (!dist_in_interval(shortest[p.nodes[i]], d.lo, d.hi))
        continue;
      value_type prod = A::top();
      for (std::size_t j = 0; j <= i; ++j)
        prod = A::otimes(prod, eval(phi, p.nodes[j], t));
      sum = A::oplus(sum, prod);
    }
    return sum;
  }

  std::span<const spatial_model> _trace;
  distance_registry _registry;
  bool _memoize;
  std::unordered_map<key, value_type, key_hash> _memo;
  std::vector<formula> _pins;
};

/// `ρ(φ, S, t, l)` with memoization
template <de_morgan_algebra A>
typename A::value_type eval_semantics(std::span<const spatial_model> trace, const formula &f,
                                      location l, std::size_t t = 0,
                                      const distance_registry &registry = distance_registry::defaults()) {
  semantics<A> s(trace, registry, true);
  return s(f, l, t);
}

/// `ρ(φ, S, t, l)` by plain recursion, without any caching
template <de_morgan_algebra A>
typename A::value_type eval_semantics_naive(std::span<const spatial_model> trace, const formula &f,
                                            location l, std::size_t t = 0,
                                            const distance_registry &registry = distance_registry::defaults()) {
  semantics<A> s(trace, registry, false);
  return s(f, l, t);
}

} // namespace strel
