#include "evps/temporal_mask.hpp"

#include <algorithm>
#include <cmath>

#include "evps/geometry.hpp"

namespace evps {

TemporalMask::TemporalMask(double period) : period_(period) {
  if (!(period > 0.0)) throw ConfigError("mask period must be positive");
}

void TemporalMask::add_arc(double start, double length) {
  if (length <= 0.0) return;
  length = std::min(length, period_);
  const double a = fold_time(start, period_);
  const double b = a + length;
  if (b <= period_) {
    segments_.emplace_back(a, b);
  } else {
    segments_.emplace_back(a, period_);
    segments_.emplace_back(0.0, b - period_);
  }
  normalize();
}

void TemporalMask::normalize() {
  std::sort(segments_.begin(), segments_.end());
  std::vector<std::pair<double, double>> merged;
  for (const auto& seg : segments_) {
    if (!merged.empty() && seg.first <= merged.back().second) {
      merged.back().second = std::max(merged.back().second, seg.second);
    } else {
      merged.push_back(seg);
    }
  }
  segments_ = std::move(merged);
}

bool TemporalMask::contains(double t) const {
  const double u = fold_time(t, period_);
  auto it = std::upper_bound(segments_.begin(), segments_.end(),
                             std::make_pair(u, period_ + 1.0));
  if (it == segments_.begin()) return false;
  --it;
  return u >= it->first && u < it->second;
}

double TemporalMask::selected_length() const {
  double total = 0.0;
  for (const auto& seg : segments_) total += seg.second - seg.first;
  return total;
}

bool TemporalMask::full() const {
  return segments_.size() == 1 && segments_.front().first == 0.0 &&
         segments_.front().second == period_;
}

}  // namespace evps
