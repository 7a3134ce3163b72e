#pragma once

#include <cstdint>
#include <vector>

#include "evps/errors.hpp"

namespace evps {

/// One comparator firing: pixel location, time in seconds, polarity +1/-1.
struct Event {
  int x = 0;
  int y = 0;
  double t = 0.0;
  int polarity = +1;
};

/// Per-pixel view of an event: time and polarity only.
struct EventSample {
  double t = 0.0;
  int polarity = +1;
};

/// Full recording: events sorted by (t, y, x, polarity) plus the sync
/// instants marking the start of each light cycle. cycle_syncs has one
/// entry per cycle boundary, so a stream of C cycles carries C+1 syncs.
struct EventStream {
  int width = 0;
  int height = 0;
  std::vector<Event> events;
  std::vector<double> cycle_syncs;

  /// Number of complete cycles delimited by the sync list.
  int cycle_count() const {
    return cycle_syncs.size() < 2 ? 0 : static_cast<int>(cycle_syncs.size()) - 1;
  }

  /// Throws if events are out of order, polarities are not +1/-1, or
  /// coordinates fall outside the sensor.
  void validate() const;
};

/// Sorts into the canonical (t, y, x, polarity) order.
void sort_events(std::vector<Event>& events);

/// Per-pixel contrast thresholds. h_p > 0 and h_n < 0 where estimated;
/// pixels without an estimate hold 0 (see is_valid).
class PixelThresholds {
 public:
  PixelThresholds() = default;
  PixelThresholds(int width, int height);

  static PixelThresholds uniform(int width, int height, double hp, double hn);

  int width() const { return width_; }
  int height() const { return height_; }

  double hp(int x, int y) const { return hp_[idx(x, y)]; }
  double hn(int x, int y) const { return hn_[idx(x, y)]; }
  void set(int x, int y, double hp, double hn);

  /// True when both thresholds carry usable estimates.
  bool is_valid(int x, int y) const;

  const std::vector<double>& hp_map() const { return hp_; }
  const std::vector<double>& hn_map() const { return hn_; }
  std::vector<double>& hp_map() { return hp_; }
  std::vector<double>& hn_map() { return hn_; }

 private:
  std::size_t idx(int x, int y) const { return static_cast<std::size_t>(y) * width_ + x; }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> hp_;
  std::vector<double> hn_;
};

}  // namespace evps
