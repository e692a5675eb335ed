/// @file  algebra.hpp
/// @brief De Morgan algebras used as value systems for monitoring

#pragma once

#include <cmath>
#include <concepts>
#include <charconv>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "strel/error.hpp"

namespace strel {

/// A De Morgan algebra `(K, ⊕, ⊗, ⊖, ⊥, ⊤)`: a bounded distributive lattice
/// with an involutive negation satisfying both De Morgan laws.
///
/// The operations are static so that an algebra is a pure type-level
/// descriptor; values of two different algebras never mix.
template <class A>
concept de_morgan_algebra = requires(typename A::value_type a, typename A::value_type b) {
  typename A::value_type;
  { A::bot() } -> std::same_as<typename A::value_type>;
  { A::top() } -> std::same_as<typename A::value_type>;
  { A::oplus(a, b) } -> std::same_as<typename A::value_type>;
  { A::otimes(a, b) } -> std::same_as<typename A::value_type>;
  { A::ominus(a) } -> std::same_as<typename A::value_type>;
  { A::leq(a, b) } -> std::same_as<bool>;
  { A::format(a) } -> std::convertible_to<std::string>;
  { A::name } -> std::convertible_to<std::string_view>;
};

/// Boolean algebra `(𝔹, ∨, ∧, ¬, ⊥, ⊤)`.
struct boolean_algebra {
  using value_type = bool;
  static constexpr std::string_view name = "boolean";

  static constexpr value_type bot() noexcept { return false; }
  static constexpr value_type top() noexcept { return true; }
  static constexpr value_type oplus(std::same_as<value_type> auto a,
                                    std::same_as<value_type> auto b) noexcept {
    return a || b;
  }
  static constexpr value_type otimes(std::same_as<value_type> auto a,
                                     std::same_as<value_type> auto b) noexcept {
    return a && b;
  }
  static constexpr value_type ominus(std::same_as<value_type> auto a) noexcept { return !a; }
  /// Natural lattice order: `a ≤ b` iff `a ⊕ b = b`
  static constexpr bool leq(std::same_as<value_type> auto a,
                            std::same_as<value_type> auto b) noexcept {
    return !a || b;
  }
  static std::string format(std::same_as<value_type> auto a) { return a ? "⊤" : "⊥"; }
  /// Inverse of `format`
  static std::optional<value_type> parse(std::string_view s) {
    if (s == "⊤")
      return true;
    if (s == "⊥")
      return false;
    return std::nullopt;
  }
};

/// Min-max algebra over the extended reals `(ℝ ∪ {±∞}, max, min, −, −∞, +∞)`.
///
/// Every operation selects or negates an operand, so results are exact.
struct minmax_algebra {
  using value_type = double;
  static constexpr std::string_view name = "minmax";

  static constexpr value_type bot() noexcept { return -std::numeric_limits<double>::infinity(); }
  static constexpr value_type top() noexcept { return std::numeric_limits<double>::infinity(); }
  static constexpr value_type oplus(std::same_as<value_type> auto a,
                                    std::same_as<value_type> auto b) noexcept {
    return a < b ? b : a;
  }
  static constexpr value_type otimes(std::same_as<value_type> auto a,
                                     std::same_as<value_type> auto b) noexcept {
    return b < a ? b : a;
  }
  // zero stays +0.0 so that printed values never read "-0"
  static constexpr value_type ominus(std::same_as<value_type> auto a) noexcept {
    return a == 0.0 ? 0.0 : -a;
  }
  static constexpr bool leq(std::same_as<value_type> auto a,
                            std::same_as<value_type> auto b) noexcept {
    return a <= b;
  }
  static std::string format(std::same_as<value_type> auto a) { return format_real(a); }
  /// Inverse of `format`
  static std::optional<value_type> parse(std::string_view s) {
    if (s == "inf")
      return top();
    if (s == "-inf")
      return bot();
    double v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size() || std::isnan(v))
      return std::nullopt;
    return v;
  }
};

static_assert(de_morgan_algebra<boolean_algebra>);
static_assert(de_morgan_algebra<minmax_algebra>);

/// Verdict of a value: ⊤ for Boolean, strictly positive for robustness.
inline bool is_satisfied(bool v) noexcept { return v; }
inline bool is_satisfied(double v) noexcept { return v > 0.0; }

} // namespace strel
