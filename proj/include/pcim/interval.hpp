#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "pcim/rational.hpp"

namespace pcim {

// Compact interval [lo, hi] with exact endpoints. Degenerate point
// intervals are allowed; diameter is exact.
struct ClosedInterval {
  Rational lo, hi;

  ClosedInterval() = default;
  ClosedInterval(Rational lo_, Rational hi_) : lo(std::move(lo_)), hi(std::move(hi_)) {
    if (lo > hi) throw std::invalid_argument("ClosedInterval: lo > hi");
  }

  Rational diameter() const { return hi - lo; }
  Rational midpoint() const { return (lo + hi) / 2; }
  bool degenerate() const { return lo == hi; }

  bool contains(const Rational& x) const { return lo <= x && x <= hi; }
  bool contains(const ClosedInterval& other) const {
    return lo <= other.lo && other.hi <= hi;
  }

  bool operator==(const ClosedInterval&) const = default;
};

inline bool disjoint(const ClosedInterval& a, const ClosedInterval& b) {
  return a.hi < b.lo || b.hi < a.lo;
}

inline std::optional<ClosedInterval> intersect(const ClosedInterval& a,
                                               const ClosedInterval& b) {
  Rational lo = std::max(a.lo, b.lo);
  Rational hi = std::min(a.hi, b.hi);
  if (lo > hi) return std::nullopt;
  return ClosedInterval(std::move(lo), std::move(hi));
}

inline std::string to_string(const ClosedInterval& interval) {
  return "[" + to_string(interval.lo) + ", " + to_string(interval.hi) + "]";
}

}  // namespace pcim
