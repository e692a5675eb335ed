/// @file  distance.hpp
/// @brief Distance domains (counting and tropical) for spatial operators

#pragma once

#include <cmath>
#include <compare>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>

#include "strel/error.hpp"

namespace strel {

/// Distance domains `(D, ⊥_D, ⊤_D, +_D, ≤_D)` shipped with the library
enum class distance_domain {
  counting, ///< extended naturals, `i + ∞ = ∞`
  tropical, ///< extended non-negative reals
};

inline std::string_view to_string(distance_domain d) noexcept {
  return d == distance_domain::counting ? "counting" : "tropical";
}

/// A value in one of the distance domains.
///
/// Counting values are kept as integral doubles, which is exact for every
/// count this library can produce.
class distance {
public:
  static constexpr double infinite = std::numeric_limits<double>::infinity();

  static distance counting(std::uint64_t n) {
    return {distance_domain::counting, static_cast<double>(n)};
  }
  static distance tropical(double v) {
    if (std::isnan(v) || v < 0.0)
      throw algebra_error("tropical distance must be a non-negative real, got " + format_real(v));
    return {distance_domain::tropical, v};
  }
  /// `⊥_D`, the monoid identity and least element
  static distance zero(distance_domain d) noexcept { return {d, 0.0}; }
  /// `⊤_D`, the absorbing greatest element
  static distance infinity(distance_domain d) noexcept { return {d, infinite}; }

  /// Parse-time constructor: validates the value against the domain
  static distance of(distance_domain d, double v) {
    if (d == distance_domain::tropical)
      return tropical(v);
    if (std::isnan(v) || v < 0.0 || (std::isfinite(v) && v != std::floor(v)))
      throw algebra_error("counting distance must be a natural number or inf, got " +
                          format_real(v));
    return {d, v};
  }

  [[nodiscard]] distance_domain domain() const noexcept { return _domain; }
  [[nodiscard]] double value() const noexcept { return _value; }
  [[nodiscard]] bool is_infinite() const noexcept { return std::isinf(_value); }

  [[nodiscard]] std::string to_string() const { return format_real(_value); }

  friend bool operator==(const distance &, const distance &) = default;

private:
  distance(distance_domain d, double v) noexcept : _domain(d), _value(v) {}

  distance_domain _domain;
  double _value;
};

namespace detail {
inline void require_same_domain(const distance &a, const distance &b) {
  if (a.domain() != b.domain())
    throw algebra_error("mixed distance domains: " + std::string(to_string(a.domain())) + " and " +
                        std::string(to_string(b.domain())));
}
} // namespace detail

/// `a +_D b`, saturating at `⊤_D`
inline distance dist_add(const distance &a, const distance &b) {
  detail::require_same_domain(a, b);
  return distance::of(a.domain(), a.value() + b.value());
}

/// `a ≤_D b`
inline bool dist_leq(const distance &a, const distance &b) {
  detail::require_same_domain(a, b);
  return a.value() <= b.value();
}

inline bool dist_less(const distance &a, const distance &b) {
  detail::require_same_domain(a, b);
  return a.value() < b.value();
}

/// Membership in the closed interval `[lo, hi]`
inline bool dist_in_interval(const distance &d, const distance &lo, const distance &hi) {
  detail::require_same_domain(lo, hi);
  detail::require_same_domain(d, lo);
  if (dist_less(hi, lo))
    throw algebra_error("invalid distance interval [" + lo.to_string() + "," + hi.to_string() +
                        "]");
  return dist_leq(lo, d) && dist_leq(d, hi);
}

} // namespace strel
