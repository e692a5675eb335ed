/// @file  check.hpp
/// @brief Cross-checks the automaton monitor against direct evaluation

#pragma once

#include <functional>
#include <optional>
#include <span>
#include <sstream>
#include <string>

#include "strel/algebra.hpp"
#include "strel/automaton.hpp"
#include "strel/monitor.hpp"
#include "strel/oracle.hpp"
#include "strel/random.hpp"
#include "strel/rewrite.hpp"
#include "strel/trace_io.hpp"

namespace strel {

/// A case on which the automaton and direct evaluation disagree
struct counterexample {
  std::string algebra;
  std::string formula;
  std::string trace;
  std::string ego;
  std::string automaton_value;
  std::string oracle_value;

  [[nodiscard]] std::string to_string() const {
    return "counterexample (" + algebra + ")\n  formula: " + formula + "\n  ego: " + ego +
           "\n  automaton: " + automaton_value + "\n  oracle: " + oracle_value + "\n  trace:\n" +
           trace;
  }
};

/// Trace text in the line-delimited format
inline std::string trace_text(std::span<const spatial_model> trace) {
  std::ostringstream out;
  trace_header h;
  h.universe = trace.front().locations().ids();
  out << header_record(h).dump() << '\n';
  for (const auto &s : trace)
    out << snapshot_record(s).dump() << '\n';
  return out.str();
}

/// Compiles `f` and runs it with the automaton built by `make`, which
/// receives the interval-free formula and the location set
template <de_morgan_algebra A, class Make>
std::optional<counterexample> check_with(const instance &c, Make &&make) {
  std::span<const spatial_model> trace(c.trace);
  const auto &locs = trace.front().shared_locations();
  auto aut = make(eliminate_intervals(desugar(c.f)), locs);
  auto got = run_offline(aut, trace, c.ego);
  auto want = eval_semantics<A>(trace, c.f, c.ego, 0);
  if (got == want)
    return std::nullopt;
  return counterexample{std::string(A::name), to_string(c.f), trace_text(trace),
                        locs->name(c.ego), A::format(got), A::format(want)};
}

template <de_morgan_algebra A> std::optional<counterexample> check_instance(const instance &c) {
  return check_with<A>(c, [](formula f, std::shared_ptr<const universe> locs) {
    return automaton<A>(std::move(f), std::move(locs));
  });
}

/// Result of a batch of random cases
struct check_report {
  std::size_t passed = 0;
  std::size_t total = 0;
  std::optional<counterexample> failure;
};

/// Runs `n` random cases in both algebras; stops at the first disagreement
inline check_report check_random(std::size_t n, std::uint64_t seed, random_options opts = {}) {
  random_source src(seed, opts);
  check_report r;
  r.total = n;
  for (std::size_t i = 0; i < n; ++i) {
    instance c = src.random_instance();
    if (auto bad = check_instance<boolean_algebra>(c)) {
      r.failure = std::move(bad);
      return r;
    }
    if (auto bad = check_instance<minmax_algebra>(c)) {
      r.failure = std::move(bad);
      return r;
    }
    ++r.passed;
  }
  return r;
}

} // namespace strel
