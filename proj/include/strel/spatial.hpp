/// @file  spatial.hpp
/// @brief Spatial model snapshots, distance functions, and path search

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "strel/distance.hpp"
#include "strel/error.hpp"

namespace strel {

/// Index of a location in its universe
using location = std::uint32_t;

/// The finite, ordered set of location identifiers shared by every snapshot
/// of a trace
class universe {
public:
  explicit universe(std::vector<std::string> ids) : _ids(std::move(ids)) {
    if (_ids.empty())
      throw model_error("location set is empty");
    std::vector<std::string> dups;
    for (std::size_t i = 0; i < _ids.size(); ++i) {
      if (!_index.emplace(_ids[i], static_cast<location>(i)).second)
        dups.push_back(_ids[i]);
    }
    if (!dups.empty()) {
      std::string msg = "duplicate location id(s):";
      for (const auto &d : dups)
        msg += " " + d;
      throw model_error(msg);
    }
  }

  [[nodiscard]] std::size_t size() const noexcept { return _ids.size(); }
  [[nodiscard]] const std::string &name(location l) const { return _ids.at(l); }
  [[nodiscard]] const std::vector<std::string> &ids() const noexcept { return _ids; }

  [[nodiscard]] std::optional<location> find(std::string_view id) const {
    auto it = _index.find(std::string(id));
    if (it == _index.end())
      return std::nullopt;
    return it->second;
  }
  [[nodiscard]] location at(std::string_view id) const {
    if (auto l = find(id))
      return *l;
    throw model_error("unknown location '" + std::string(id) + "'");
  }

  friend bool operator==(const universe &a, const universe &b) { return a._ids == b._ids; }

private:
  std::vector<std::string> _ids;
  std::unordered_map<std::string, location> _index;
};

/// Node record before validation
struct raw_node {
  std::string id;
  std::string kind;
  std::vector<std::pair<std::string, double>> attrs;
};

/// Directed, weighted edge record before validation
struct raw_edge {
  std::string src;
  double weight = 0.0;
  std::string dst;
};

struct edge {
  location src;
  double weight;
  location dst;
};

/// One graph snapshot: locations, weighted directed edges, per-location
/// attributes. Immutable after validation.
class spatial_model {
public:
  [[nodiscard]] const universe &locations() const noexcept { return *_universe; }
  [[nodiscard]] const std::shared_ptr<const universe> &shared_locations() const noexcept {
    return _universe;
  }
  [[nodiscard]] std::size_t size() const noexcept { return _universe->size(); }

  [[nodiscard]] const std::string &kind(location l) const { return _kinds.at(l); }
  [[nodiscard]] std::optional<double> attribute(location l, std::string_view name) const {
    for (const auto &[k, v] : _attrs.at(l))
      if (k == name)
        return v;
    return std::nullopt;
  }
  [[nodiscard]] const std::vector<std::pair<std::string, double>> &attributes(location l) const {
    return _attrs.at(l);
  }

  /// Outgoing edges of `l`, ordered by destination id, then weight
  [[nodiscard]] std::span<const edge> out_edges(location l) const { return _adjacency.at(l); }
  /// All edges in input order
  [[nodiscard]] std::span<const edge> edges() const noexcept { return _edges; }

  [[nodiscard]] std::optional<double> edge_weight(location src, location dst) const {
    for (const auto &e : _adjacency.at(src))
      if (e.dst == dst)
        return e.weight;
    return std::nullopt;
  }

  /// Position of this snapshot in its trace (0 for stand-alone models)
  [[nodiscard]] std::size_t time_index() const noexcept { return _time; }

private:
  friend spatial_model validate_model(std::shared_ptr<const universe>, std::vector<raw_node>,
                                      std::vector<raw_edge>, std::size_t);

  std::shared_ptr<const universe> _universe;
  std::vector<std::string> _kinds;
  std::vector<std::vector<std::pair<std::string, double>>> _attrs;
  std::vector<edge> _edges;
  std::vector<std::vector<edge>> _adjacency;
  std::size_t _time = 0;
};

/// Validates raw records against a fixed universe. Every violation is
/// collected into one diagnostic.
inline spatial_model validate_model(std::shared_ptr<const universe> locs,
                                    std::vector<raw_node> nodes, std::vector<raw_edge> edges,
                                    std::size_t time_index = 0) {
  std::vector<std::string> problems;
  const std::size_t n = locs->size();

  spatial_model m;
  m._universe = locs;
  m._time = time_index;
  m._kinds.assign(n, {});
  m._attrs.assign(n, {});
  std::vector<bool> seen(n, false);
  for (auto &node : nodes) {
    auto l = locs->find(node.id);
    if (!l) {
      problems.push_back("node '" + node.id + "' is not in the location universe");
      continue;
    }
    if (seen[*l]) {
      problems.push_back("duplicate location id '" + node.id + "'");
      continue;
    }
    seen[*l] = true;
    for (const auto &[k, v] : node.attrs) {
      if (k.empty())
        problems.push_back("empty attribute name at '" + node.id + "'");
      if (std::isnan(v))
        problems.push_back("attribute '" + k + "' at '" + node.id + "' is NaN");
    }
    m._kinds[*l] = std::move(node.kind);
    m._attrs[*l] = std::move(node.attrs);
  }
  for (std::size_t i = 0; i < n; ++i)
    if (!seen[i])
      problems.push_back("location '" + locs->name(static_cast<location>(i)) + "' has no node record");

  std::set<std::pair<location, location>> pairs;
  std::set<std::tuple<location, double, location>> triples;
  for (const auto &e : edges) {
    auto s = locs->find(e.src);
    auto d = locs->find(e.dst);
    if (!s)
      problems.push_back("dangling edge endpoint '" + e.src + "'");
    if (!d)
      problems.push_back("dangling edge endpoint '" + e.dst + "'");
    if (std::isnan(e.weight))
      problems.push_back("edge " + e.src + "->" + e.dst + " has NaN weight");
    if (!s || !d || std::isnan(e.weight))
      continue;
    if (!triples.emplace(*s, e.weight, *d).second) {
      problems.push_back("duplicate edge (" + e.src + ", " + format_real(e.weight) + ", " + e.dst +
                         ")");
      continue;
    }
    if (!pairs.emplace(*s, *d).second) {
      problems.push_back("parallel edge " + e.src + "->" + e.dst + " (edge multiplicities are "
                         "not supported)");
      continue;
    }
    m._edges.push_back({*s, e.weight, *d});
  }

  if (!problems.empty()) {
    std::string msg = "invalid spatial model";
    if (time_index != 0)
      msg += " at step " + std::to_string(time_index);
    msg += ":";
    for (const auto &p : problems)
      msg += "\n  - " + p;
    throw model_error(msg);
  }

  m._adjacency.assign(n, {});
  for (const auto &e : m._edges)
    m._adjacency[e.src].push_back(e);
  for (auto &adj : m._adjacency)
    std::sort(adj.begin(), adj.end(), [&](const edge &a, const edge &b) {
      const auto &na = locs->name(a.dst);
      const auto &nb = locs->name(b.dst);
      if (na != nb)
        return na < nb;
      return a.weight < b.weight;
    });
  return m;
}

/// Validates a stand-alone model; the universe is the node ids in order.
inline spatial_model validate_model(std::vector<raw_node> nodes, std::vector<raw_edge> edges) {
  std::vector<std::string> ids;
  ids.reserve(nodes.size());
  for (const auto &n : nodes)
    ids.push_back(n.id);
  auto locs = std::make_shared<const universe>(std::move(ids));
  return validate_model(std::move(locs), std::move(nodes), std::move(edges), 0);
}

/// Maps edge weights into a distance domain
class distance_function {
public:
  using mapping = std::function<distance(double)>;

  distance_function(std::string name, distance_domain domain, mapping map,
                    bool non_negative = true)
      : _name(std::move(name)), _domain(domain), _map(std::move(map)),
        _non_negative(non_negative) {}

  [[nodiscard]] const std::string &name() const noexcept { return _name; }
  [[nodiscard]] distance_domain domain() const noexcept { return _domain; }
  /// Whether every weight maps to `d ≥_D ⊥_D`; required by pruned search
  [[nodiscard]] bool non_negative() const noexcept { return _non_negative; }

  distance operator()(double weight) const {
    distance d = _map(weight);
    if (d.domain() != _domain)
      throw algebra_error("distance function '" + _name + "' left its domain");
    return d;
  }

private:
  std::string _name;
  distance_domain _domain;
  mapping _map;
  bool _non_negative;
};

/// Every edge costs one hop in the counting domain
inline distance_function hops_function() {
  return {"hops", distance_domain::counting, [](double) { return distance::counting(1); }};
}

/// Edge weight taken as-is in the tropical domain
inline distance_function weight_function() {
  return {"weight", distance_domain::tropical, [](double w) { return distance::tropical(w); }};
}

/// Named distance functions available to formulas
class distance_registry {
public:
  /// Registry holding `hops` and `weight`
  static distance_registry defaults() {
    distance_registry r;
    r.add(hops_function());
    r.add(weight_function());
    return r;
  }

  void add(distance_function f) {
    auto name = f.name();
    _fns.insert_or_assign(std::move(name), std::move(f));
  }
  [[nodiscard]] const distance_function *find(std::string_view name) const {
    auto it = _fns.find(std::string(name));
    return it == _fns.end() ? nullptr : &it->second;
  }
  [[nodiscard]] const distance_function &at(std::string_view name) const {
    if (const auto *f = find(name))
      return *f;
    throw error("unknown distance function '" + std::string(name) + "'");
  }

private:
  std::map<std::string, distance_function, std::less<>> _fns;
};

/// A simple path with the cumulative distance of every prefix
struct path {
  std::vector<location> nodes;
  std::vector<distance> prefix;

  friend bool operator==(const path &, const path &) = default;
};

/// Distance over a path: `+_D` sum of `f` along consecutive edges, `⊥_D` for
/// paths with fewer than two locations.
inline distance path_distance(const spatial_model &model, std::span<const location> nodes,
                              const distance_function &f) {
  distance total = distance::zero(f.domain());
  for (std::size_t i = 1; i < nodes.size(); ++i) {
    auto w = model.edge_weight(nodes[i - 1], nodes[i]);
    if (!w)
      throw model_error("no edge " + model.locations().name(nodes[i - 1]) + "->" +
                        model.locations().name(nodes[i]));
    total = dist_add(total, f(*w));
  }
  return total;
}

namespace detail {
inline void require_non_negative(const distance_function &f) {
  if (!f.non_negative())
    throw error("distance function '" + f.name() + "' is not declared non-negative");
}

inline void require_location(const spatial_model &model, location l) {
  if (l >= model.size())
    throw model_error("location index " + std::to_string(l) + " is not in the model");
}
} // namespace detail

/// Depth-first search over simple paths starting at `origin` whose every
/// prefix distance stays within `limit`.
///
/// `visit(nodes, prefix)` is called for each path, starting with `[origin]`;
/// returning `false` skips that path's extensions. Locations are marked
/// visited on the way down and unmarked on the way back.
template <class Visitor>
void for_each_bounded_path(const spatial_model &model, location origin,
                           const distance_function &f, const distance &limit, Visitor &&visit) {
  detail::require_location(model, origin);
  detail::require_non_negative(f);
  if (limit.domain() != f.domain())
    throw algebra_error("distance bound is not in the domain of '" + f.name() + "'");

  std::vector<location> nodes{origin};
  std::vector<distance> prefix{distance::zero(f.domain())};
  std::vector<bool> on_path(model.size(), false);
  on_path[origin] = true;

  auto dfs = [&](auto &self) -> void {
    if (!visit(std::span<const location>(nodes), std::span<const distance>(prefix)))
      return;
    for (const auto &e : model.out_edges(nodes.back())) {
      if (on_path[e.dst])
        continue;
      distance step = f(e.weight);
      if (dist_less(step, distance::zero(f.domain())))
        throw error("distance function '" + f.name() + "' produced a negative distance");
      distance d = dist_add(prefix.back(), step);
      if (dist_less(limit, d))
        continue;
      on_path[e.dst] = true;
      nodes.push_back(e.dst);
      prefix.push_back(d);
      self(self);
      prefix.pop_back();
      nodes.pop_back();
      on_path[e.dst] = false;
    }
  };
  dfs(dfs);
}

/// Every simple path from `origin` whose prefix distances are all `≤_D limit`,
/// in depth-first order.
inline std::vector<path> enumerate_bounded_paths(const spatial_model &model, location origin,
                                                 const distance_function &f,
                                                 const distance &limit) {
  std::vector<path> out;
  for_each_bounded_path(model, origin, f, limit,
                        [&](std::span<const location> nodes, std::span<const distance> prefix) {
                          out.push_back({{nodes.begin(), nodes.end()},
                                         {prefix.begin(), prefix.end()}});
                          return true;
                        });
  return out;
}

/// Shortest-path distances from `from` to every location; `⊤_D` when unreachable
inline std::vector<distance> shortest_distances(const spatial_model &model, location from,
                                                const distance_function &f) {
  detail::require_location(model, from);
  detail::require_non_negative(f);
  const auto inf = distance::infinity(f.domain());
  std::vector<distance> best(model.size(), inf);
  std::vector<bool> done(model.size(), false);
  best[from] = distance::zero(f.domain());
  using item = std::pair<double, location>;
  std::priority_queue<item, std::vector<item>, std::greater<>> queue;
  queue.emplace(0.0, from);
  while (!queue.empty()) {
    auto [d, l] = queue.top();
    queue.pop();
    if (done[l])
      continue;
    done[l] = true;
    for (const auto &e : model.out_edges(l)) {
      distance nd = dist_add(best[l], f(e.weight));
      if (dist_less(nd, best[e.dst])) {
        best[e.dst] = nd;
        queue.emplace(nd.value(), e.dst);
      }
    }
  }
  return best;
}

/// `d^f_S[l1, l2]`
inline distance shortest_distance(const spatial_model &model, location l1, location l2,
                                  const distance_function &f) {
  detail::require_location(model, l2);
  return shortest_distances(model, l1, f)[l2];
}

} // namespace strel
