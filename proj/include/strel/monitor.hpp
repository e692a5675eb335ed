/// @file  monitor.hpp
/// @brief Automaton runs kept as a single polynomial, updated by substitution

#pragma once

#include <span>
#include <string>
#include <string_view>

#include "strel/automaton.hpp"
#include "strel/error.hpp"

namespace strel {

/// Run of an automaton from one ego location.
///
/// `Aut` is any type with the automaton interface used below
/// (`initial`, `delta`, `terminal`, `transition_cache`, `name`, `parse_state`).
template <class Aut>
class basic_monitor {
public:
  using poly = typename Aut::poly;
  using value_type = typename Aut::value_type;
  using cache = typename Aut::transition_cache;

  basic_monitor(const Aut &aut, location ego) : _aut(&aut), _ego(ego), _theta(aut.initial(ego)) {}

  [[nodiscard]] const poly &state() const noexcept { return _theta; }
  [[nodiscard]] std::size_t steps() const noexcept { return _steps; }
  [[nodiscard]] location ego() const noexcept { return _ego; }
  /// True once `θ` is a constant; later steps cannot change it
  [[nodiscard]] bool conclusive() const noexcept { return _theta.is_constant(); }

  /// Consumes one snapshot through a transition cache built for it
  void step(cache &c) {
    ++_steps;
    if (conclusive())
      return;
    _theta = _theta.substitute([&](const state_var &q) -> const poly * { return &_aut->delta(q, c); });
  }

  void step(const spatial_model &s) {
    cache c(*_aut, s);
    step(c);
  }

  /// `θ` evaluated with the terminal weighting
  [[nodiscard]] value_type current_value() const {
    return _theta.evaluate(
        [](const state_var &q) -> std::optional<value_type> { return Aut::terminal(q); });
  }

  /// Canonical text of `θ`
  [[nodiscard]] std::string snapshot() const {
    return _theta.to_string([this](const state_var &q) { return _aut->name(q); });
  }

  /// Replaces `θ` with a previously saved snapshot
  void restore(std::string_view text, std::size_t steps) {
    _theta = poly::parse(text, [this](std::string_view s) { return _aut->parse_state(s); });
    _steps = steps;
  }

private:
  const Aut *_aut;
  location _ego;
  poly _theta;
  std::size_t _steps = 0;
};

template <de_morgan_algebra A>
using monitor = basic_monitor<automaton<A>>;

/// Runs a monitor over the whole trace and evaluates `θ` with `β` at the end
template <class Aut>
typename Aut::value_type run_offline(const Aut &aut, std::span<const spatial_model> trace,
                                     location ego) {
  if (trace.empty())
    throw error("trace is empty");
  basic_monitor<Aut> m(aut, ego);
  for (const auto &s : trace)
    m.step(s);
  return m.current_value();
}

} // namespace strel
