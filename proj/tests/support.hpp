/// @file  support.hpp
/// @brief Fixtures and brute-force reference helpers shared by the test suites

#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "strel/strel.hpp"

namespace strel::test {

/// G1: a <-> b <-> c, unit weights; q at a and b, p at c; battery 5, 3, 7
inline spatial_model g1(std::size_t t = 0) {
  auto locs = std::make_shared<const universe>(std::vector<std::string>{"a", "b", "c"});
  return validate_model(locs,
                        {{"a", "q", {{"battery", 5}}},
                         {"b", "q", {{"battery", 3}}},
                         {"c", "p", {{"battery", 7}}}},
                        {{"a", 1, "b"}, {"b", 1, "a"}, {"b", 1, "c"}, {"c", 1, "b"}}, t);
}

/// Triangle a <-> b <-> c <-> a with unit weights
inline spatial_model triangle() {
  return validate_model({{"a", "x", {}}, {"b", "x", {}}, {"c", "x", {}}},
                        {{"a", 1, "b"},
                         {"b", 1, "a"},
                         {"b", 1, "c"},
                         {"c", 1, "b"},
                         {"a", 1, "c"},
                         {"c", 1, "a"}});
}

/// Single location `a` whose kind is `p` exactly at the given steps
inline std::vector<spatial_model> single_location_trace(const std::vector<bool> &p) {
  auto locs = std::make_shared<const universe>(std::vector<std::string>{"a"});
  std::vector<spatial_model> out;
  for (std::size_t t = 0; t < p.size(); ++t)
    out.push_back(validate_model(locs, {{"a", p[t] ? "p" : "n", {}}}, {}, t));
  return out;
}

/// Every simple path from `origin` by exhaustive recursion, no pruning
inline std::vector<std::vector<location>> all_simple_paths(const spatial_model &m,
                                                           location origin) {
  std::vector<std::vector<location>> out;
  std::vector<location> cur{origin};
  std::function<void()> rec = [&] {
    out.push_back(cur);
    for (location v = 0; v < m.size(); ++v) {
      if (std::find(cur.begin(), cur.end(), v) != cur.end())
        continue;
      if (!m.edge_weight(cur.back(), v))
        continue;
      cur.push_back(v);
      rec();
      cur.pop_back();
    }
  };
  rec();
  return out;
}

/// Shortest distances by Bellman-Ford relaxation
inline std::vector<double> bellman_ford(const spatial_model &m, location from,
                                        const distance_function &f) {
  std::vector<double> d(m.size(), distance::infinite);
  d[from] = 0;
  for (std::size_t round = 0; round < m.size(); ++round)
    for (const auto &e : m.edges())
      if (d[e.src] + f(e.weight).value() < d[e.dst])
        d[e.dst] = d[e.src] + f(e.weight).value();
  return d;
}

/// Random directed graph over `n` locations with edge probability `p`
inline spatial_model random_graph(std::mt19937_64 &rng, std::size_t n, double p) {
  std::vector<raw_node> nodes;
  for (std::size_t i = 0; i < n; ++i)
    nodes.push_back({"n" + std::to_string(i), "k", {}});
  std::vector<raw_edge> edges;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double weights[] = {0.5, 1.0, 2.0, 3.5};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j && u(rng) < p)
        edges.push_back({nodes[i].id, weights[rng() % 4], nodes[j].id});
  return validate_model(std::move(nodes), std::move(edges));
}

/// Formulas used by corpus-wide checks
inline std::vector<std::string> corpus() {
  return {"p",
          "not p",
          "p U q",
          "X p",
          "not X p",
          "G p",
          "F p",
          "F[0,3] a",
          "G[0,2] a",
          "G[1,4] (a or b)",
          "a U[2,4] b",
          "a U[3,inf] b",
          "F[2,inf] a",
          "G[2,inf] a",
          "somewhere[hops][0,2] p",
          "everywhere[hops][0,1] p",
          "escape[hops][2,2] q",
          "q reach[hops][0,2] p",
          "(drone reach[hops][0,2] groundstation) U goal",
          "G (somewhere[hops][1,2] drone or F[0,100] somewhere[hops][1,2] (drone or groundstation))",
          "(G not obstacle) and ((drone reach[hops][0,2] groundstation) U goal)",
          "not (p U (q and X r))",
          "F[0,4] G[0,4] (p reach[weight][0.5,2] q)",
          "X X X p and not (q U[1,3] r)"};
}

} // namespace strel::test
