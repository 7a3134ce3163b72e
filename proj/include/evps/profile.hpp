#pragma once

#include <vector>

#include "evps/events.hpp"

namespace evps {

/// Default number of uniform samples per cycle. Roughly an order of
/// magnitude above the event count per cycle at typical thresholds.
inline constexpr int kDefaultProfileSamples = 256;

/// One irregular sample of the log-radiance derivative, placed at an
/// event time folded into [0, T).
struct RawProfilePoint {
  double t = 0.0;
  double value = 0.0;
};

/// Event interval profile resampled on a uniform circular grid.
/// Sample i sits at time i*T/N; `valid` is false where no event pair
/// comes close enough to support interpolation.
struct Profile {
  double period = 1.0;
  std::vector<double> values;
  std::vector<bool> valid;

  int samples() const { return static_cast<int>(values.size()); }
  double sample_time(int i) const { return period * i / samples(); }
  int valid_count() const;
};

/// Reconstructs the interval profile of one cycle from that cycle's
/// events (time-sorted, within [cycle_start, cycle_start + period)).
///
/// Each interior event i contributes a raw point at its folded time with
/// value (h(t_i) + h(t_{i+1})) / (t_{i+1} - t_{i-1}), where h(.) is hp for
/// positive and hn for negative events; with equal-polarity neighbors
/// this is the reciprocal-interval central difference 2h/(tau+ - tau-).
/// Raw points are linearly interpolated on the circle (the last wraps to
/// the first) and sampled at n uniform times; samples farther than T/4
/// from every raw point are flagged invalid.
///
/// Fewer than 3 events yields an all-invalid profile rather than an
/// error: the pixel simply lacks observations.
Profile reconstruct_eip(const std::vector<EventSample>& events,
                        double hp, double hn,
                        double period, int n,
                        double cycle_start = 0.0);

/// Per-sample mean over the inputs where that sample is valid. A sample
/// of the result is valid iff it is valid in at least ceil(K/2) inputs.
Profile average_profiles(const std::vector<Profile>& profiles);

struct ProfilePeaks {
  double t_top = 0.0;     // time of the global maximum
  double t_bottom = 0.0;  // time of the global minimum
  double top_value = 0.0;
  double bottom_value = 0.0;
};

/// Locates the global extrema over valid samples, ties broken by the
/// earliest time. Throws DegenerateProfileError when fewer than 2 valid
/// samples exist or all valid samples are equal.
ProfilePeaks find_peaks(const Profile& profile);

}  // namespace evps
