/// @file  random.hpp
/// @brief Random formulas, snapshots and traces for cross-checking

#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "strel/formula.hpp"
#include "strel/spatial.hpp"

namespace strel {

struct random_options {
  std::size_t max_locations = 4;
  std::size_t max_depth = 3;
  std::size_t max_len = 5;
  /// Largest finite time-interval endpoint
  std::uint64_t max_time = 3;
  /// Allow time intervals and the F/G operators
  bool timed = true;
  /// Allow reach, escape, somewhere and everywhere
  bool spatial = true;
  /// Edge probability of random snapshots
  double edge_probability = 0.5;
};

/// One random cross-check case
struct instance {
  formula f;
  std::vector<spatial_model> trace;
  location ego = 0;
};

/// Source of random test data; the same seed gives the same sequence on
/// every platform.
class random_source {
public:
  explicit random_source(std::uint64_t seed, random_options opts = {})
      : _rng(seed), _opts(opts) {}

  [[nodiscard]] const random_options &options() const noexcept { return _opts; }

  /// Uniform integer in `[0, n)`
  std::size_t below(std::size_t n) { return n <= 1 ? 0 : static_cast<std::size_t>(_rng() % n); }
  double unit() { return static_cast<double>(_rng() >> 11) * 0x1p-53; }
  bool chance(double p) { return unit() < p; }

  predicate random_predicate() {
    static const char *kinds[] = {"p", "q", "r"};
    static const comparison cmps[] = {comparison::ge, comparison::le, comparison::gt,
                                      comparison::lt};
    if (chance(0.5))
      return kind_test{kinds[below(3)]};
    return attribute_test{"v", cmps[below(4)], static_cast<double>(below(5)) - 2.0};
  }

  time_interval random_time() {
    time_interval i;
    i.lo = below(_opts.max_time + 1);
    if (!chance(0.2))
      i.hi = i.lo + below(_opts.max_time - i.lo + 1);
    return i;
  }

  distance_interval random_space() {
    if (chance(0.5)) {
      std::uint64_t lo = below(3);
      distance hi = chance(0.2) ? distance::infinity(distance_domain::counting)
                                : distance::counting(lo + below(3));
      return {"hops", distance::counting(lo), hi};
    }
    static const double marks[] = {0.0, 0.5, 1.0, 1.5, 2.0, 3.0};
    std::size_t a = below(6);
    std::size_t b = a + below(6 - a);
    distance hi = chance(0.2) ? distance::infinity(distance_domain::tropical)
                              : distance::tropical(marks[b]);
    return {"weight", distance::tropical(marks[a]), hi};
  }

  formula random_formula(std::size_t depth) {
    if (depth == 0 || chance(0.15)) {
      std::size_t k = below(10);
      if (k == 0)
        return top();
      if (k == 1)
        return bottom();
      return atom(random_predicate());
    }
    const std::size_t d = depth - 1;
    std::vector<int> choices{0, 1, 2, 3, 4};
    if (_opts.timed)
      choices.insert(choices.end(), {5, 6, 7});
    if (_opts.spatial)
      choices.insert(choices.end(), {8, 9, 10, 11});
    switch (choices[below(choices.size())]) {
    case 0:
      return lnot(random_formula(d));
    case 1:
      return land(random_formula(d), random_formula(d));
    case 2:
      return lor(random_formula(d), random_formula(d));
    case 3:
      return next(random_formula(d));
    case 4:
      return until(random_formula(d), random_formula(d));
    case 5:
      return until(random_formula(d), random_formula(d), random_time());
    case 6:
      return eventually(random_formula(d), chance(0.8) ? std::optional(random_time()) : std::nullopt);
    case 7:
      return globally(random_formula(d), chance(0.8) ? std::optional(random_time()) : std::nullopt);
    case 8:
      return reach(random_formula(d), random_formula(d), random_space());
    case 9:
      return escape(random_formula(d), random_space());
    case 10:
      return somewhere(random_formula(d), random_space());
    default:
      return everywhere(random_formula(d), random_space());
    }
  }

  formula random_formula() { return random_formula(_opts.max_depth); }

  /// Random snapshot over a fixed universe: kinds `p`/`q`/`r`, integer
  /// attribute `v` in `[-3, 3]`, edges with weights in `{0.5, 1, 1.5, 2}`
  spatial_model random_snapshot(const std::shared_ptr<const universe> &locs, std::size_t t) {
    static const char *kinds[] = {"p", "q", "r"};
    static const double weights[] = {0.5, 1.0, 1.5, 2.0};
    std::vector<raw_node> nodes;
    for (const auto &id : locs->ids())
      nodes.push_back({id, kinds[below(3)], {{"v", static_cast<double>(below(7)) - 3.0}}});
    std::vector<raw_edge> edges;
    for (const auto &a : locs->ids())
      for (const auto &b : locs->ids())
        if (a != b && chance(_opts.edge_probability))
          edges.push_back({a, weights[below(4)], b});
    return validate_model(locs, std::move(nodes), std::move(edges), t);
  }

  std::shared_ptr<const universe> random_universe() {
    std::size_t n = 1 + below(_opts.max_locations);
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i)
      ids.push_back("l" + std::to_string(i));
    return std::make_shared<const universe>(std::move(ids));
  }

  std::vector<spatial_model> random_trace(const std::shared_ptr<const universe> &locs) {
    std::size_t len = 1 + below(_opts.max_len);
    std::vector<spatial_model> out;
    for (std::size_t t = 0; t < len; ++t)
      out.push_back(random_snapshot(locs, t));
    return out;
  }

  instance random_instance() {
    formula f = random_formula();
    auto locs = random_universe();
    auto trace = random_trace(locs);
    location ego = static_cast<location>(below(locs->size()));
    return {std::move(f), std::move(trace), ego};
  }

private:
  std::mt19937_64 _rng;
  random_options _opts;
};

} // namespace strel
