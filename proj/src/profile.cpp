#include "evps/profile.hpp"

#include <algorithm>
#include <cmath>

#include "evps/geometry.hpp"

namespace evps {

namespace {

double circular_distance(double a, double b, double period) {
  const double d = std::fabs(a - b);
  return std::min(d, period - d);
}

}  // namespace

int Profile::valid_count() const {
  return static_cast<int>(std::count(valid.begin(), valid.end(), true));
}

Profile reconstruct_eip(const std::vector<EventSample>& events,
                        double hp, double hn,
                        double period, int n,
                        double cycle_start) {
  if (n < 8) throw ConfigError("profile needs at least 8 samples");
  if (!(period > 0.0)) throw ConfigError("profile period must be positive");
  if (!(hp > 0.0) || !(hn < 0.0))
    throw ConfigError("thresholds must satisfy hp > 0 > hn");

  Profile out;
  out.period = period;
  out.values.assign(n, 0.0);
  out.valid.assign(n, false);
  if (events.size() < 3) return out;  // not enough observations, all invalid

  const auto step = [&](int polarity) { return polarity > 0 ? hp : hn; };

  // Interior events only: each needs both neighbors within the cycle.
  std::vector<RawProfilePoint> raw;
  raw.reserve(events.size() - 2);
  for (std::size_t i = 1; i + 1 < events.size(); ++i) {
    const double span = events[i + 1].t - events[i - 1].t;
    if (span <= 0.0) continue;
    RawProfilePoint p;
    p.t = fold_time(events[i].t - cycle_start, period);
    p.value = (step(events[i].polarity) + step(events[i + 1].polarity)) / span;
    raw.push_back(p);
  }
  if (raw.empty()) return out;
  std::sort(raw.begin(), raw.end(),
            [](const RawProfilePoint& a, const RawProfilePoint& b) { return a.t < b.t; });

  const double max_gap = period / 4.0;
  for (int i = 0; i < n; ++i) {
    const double u = out.sample_time(i);
    // Circular neighbors around u; the segment from the last raw point
    // wraps to the first.
    auto it = std::upper_bound(raw.begin(), raw.end(), u,
                               [](double v, const RawProfilePoint& p) { return v < p.t; });
    const std::size_t next = (it == raw.end()) ? 0 : static_cast<std::size_t>(it - raw.begin());
    const std::size_t prev = (next == 0) ? raw.size() - 1 : next - 1;

    const double nearest =
        std::min(circular_distance(u, raw[prev].t, period),
                 circular_distance(u, raw[next].t, period));
    if (nearest > max_gap) continue;

    double value;
    if (prev == next) {
      value = raw[prev].value;
    } else {
      double span = raw[next].t - raw[prev].t;
      double local = u - raw[prev].t;
      if (span <= 0.0) {
        span += period;
        if (local < 0.0) local += period;
      }
      const double f = (span > 0.0) ? local / span : 0.0;
      value = (1.0 - f) * raw[prev].value + f * raw[next].value;
    }
    out.values[i] = value;
    out.valid[i] = std::isfinite(value);
  }
  return out;
}

Profile average_profiles(const std::vector<Profile>& profiles) {
  if (profiles.empty()) throw ConfigError("no profiles to average");
  const Profile& first = profiles.front();
  const int n = first.samples();
  for (const Profile& p : profiles) {
    if (p.samples() != n || p.period != first.period)
      throw ConfigError("profiles differ in period or sample count");
  }

  Profile out;
  out.period = first.period;
  out.values.assign(n, 0.0);
  out.valid.assign(n, false);

  const int quorum = (static_cast<int>(profiles.size()) + 1) / 2;
  for (int i = 0; i < n; ++i) {
    double sum = 0.0;
    int count = 0;
    for (const Profile& p : profiles) {
      if (p.valid[i]) {
        sum += p.values[i];
        ++count;
      }
    }
    if (count >= quorum && count > 0) {
      out.values[i] = sum / count;
      out.valid[i] = true;
    }
  }
  return out;
}

ProfilePeaks find_peaks(const Profile& profile) {
  int top = -1;
  int bottom = -1;
  for (int i = 0; i < profile.samples(); ++i) {
    if (!profile.valid[i]) continue;
    if (top < 0 || profile.values[i] > profile.values[top]) top = i;
    if (bottom < 0 || profile.values[i] < profile.values[bottom]) bottom = i;
  }
  if (top < 0 || bottom < 0)
    throw DegenerateProfileError("profile has no valid samples");
  int valid = profile.valid_count();
  if (valid < 2) throw DegenerateProfileError("profile has fewer than 2 valid samples");
  if (!(profile.values[top] > profile.values[bottom]))
    throw DegenerateProfileError("profile is constant over its valid samples");

  ProfilePeaks peaks;
  peaks.t_top = profile.sample_time(top);
  peaks.t_bottom = profile.sample_time(bottom);
  peaks.top_value = profile.values[top];
  peaks.bottom_value = profile.values[bottom];
  return peaks;
}

}  // namespace evps
