/// @file  label.hpp
/// @brief Labeling of atomic predicates at a location of a snapshot

#pragma once

#include <string>
#include <type_traits>
#include <variant>

#include "strel/algebra.hpp"
#include "strel/error.hpp"
#include "strel/formula.hpp"
#include "strel/spatial.hpp"

namespace strel {

/// `ν(S, l, μ)` in algebra `A`.
///
/// Boolean: kind tests are equality, `≥`/`≤` hold at the threshold, `>`/`<`
/// do not. Min-max: kind tests give `±∞`, comparisons the signed margin
/// (`attr − c` for `≥`/`>`, `c − attr` for `≤`/`<`).
template <de_morgan_algebra A>
typename A::value_type label(const spatial_model &s, location l, const predicate &p) {
  if (const auto *k = std::get_if<kind_test>(&p))
    return s.kind(l) == k->kind ? A::top() : A::bot();
  const auto &a = std::get<attribute_test>(p);
  auto v = s.attribute(l, a.attribute);
  if (!v)
    throw label_error("attribute '" + a.attribute + "' is missing at location '" +
                      s.locations().name(l) + "', step " + std::to_string(s.time_index()));
  if constexpr (std::is_same_v<typename A::value_type, bool>) {
    switch (a.cmp) {
    case comparison::ge:
      return *v >= a.threshold;
    case comparison::le:
      return *v <= a.threshold;
    case comparison::gt:
      return *v > a.threshold;
    case comparison::lt:
      return *v < a.threshold;
    }
    return false;
  } else {
    double margin = (a.cmp == comparison::ge || a.cmp == comparison::gt) ? *v - a.threshold
                                                                        : a.threshold - *v;
    return margin == 0.0 ? 0.0 : margin;
  }
}

} // namespace strel
