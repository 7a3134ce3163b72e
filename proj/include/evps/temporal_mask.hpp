#pragma once

#include <utility>
#include <vector>

#include "evps/errors.hpp"

namespace evps {

/// Periodic binary gate on the circular time domain [0, T).
///
/// The mask value is 1 inside a set of disjoint arcs and 0 elsewhere.
/// Arcs are half-open [a, b): a point exactly at an arc end is outside.
class TemporalMask {
 public:
  explicit TemporalMask(double period);

  /// Adds the forward arc starting at `start` with the given length.
  /// Wrap-around across the cycle boundary is handled; length is clamped
  /// to the period (a full-length arc selects the whole cycle).
  void add_arc(double start, double length);

  /// Membership query, T-periodic.
  bool contains(double t) const;
  int value(double t) const { return contains(t) ? 1 : 0; }

  double period() const { return period_; }

  /// Total length of the 1-region.
  double selected_length() const;

  /// Non-wrapping [a, b) pieces, sorted, after normalization.
  const std::vector<std::pair<double, double>>& segments() const { return segments_; }

  bool empty() const { return segments_.empty(); }
  bool full() const;

 private:
  void normalize();

  double period_ = 1.0;
  std::vector<std::pair<double, double>> segments_;
};

}  // namespace evps
