#include "evps/masks.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace evps {

TemporalMask mask_collapsed(double t_top, double t_bottom, double period) {
  const double length = forward_distance(t_top, t_bottom, period);
  if (length <= 0.0)
    throw DegeneratePeaksError("top and bottom peaks coincide");
  TemporalMask mask(period);
  mask.add_arc(fold_time(t_top, period), length);
  return mask;
}

namespace {

// Shared by the specular and cast cuts: drop [first - margin, second + margin],
// keep the rest.
TemporalMask cut_between(double first, double second, double margin, double period) {
  const double pair_span = forward_distance(first, second, period);
  const double cut = pair_span + 2.0 * margin * period;
  if (cut >= period)
    throw AllMaskedError("expanded outlier cut covers the whole cycle");
  TemporalMask mask(period);
  mask.add_arc(fold_time(second + margin * period, period), period - cut);
  return mask;
}

}  // namespace

TemporalMask mask_specular(double t_top, double t_bottom, double margin, double period) {
  return cut_between(t_top, t_bottom, margin, period);
}

TemporalMask mask_cast(double t_top, double t_bottom, double margin, double period) {
  return cut_between(t_bottom, t_top, margin, period);
}

TemporalMask mask_attached(const Vec3& normal, const LightTrajectory& traj,
                           double period, int n) {
  const auto lit = [&](double t) { return normal.dot(traj.direction(t)) > 0.0; };
  const double dt = period / n;

  // Transition instants between uniform samples, refined by bisection;
  // the interval after sample n-1 closes periodically onto sample 0.
  std::vector<double> rises, falls;
  const bool first = lit(0.0);
  bool prev = first;
  for (int i = 1; i <= n; ++i) {
    const bool cur = (i == n) ? first : lit(i * dt);
    if (cur != prev) {
      double lo = (i - 1) * dt;
      double hi = i * dt;
      while (hi - lo > 1e-9) {
        const double mid = 0.5 * (lo + hi);
        if (lit(mid) == prev)
          lo = mid;
        else
          hi = mid;
      }
      (cur ? rises : falls).push_back(hi);
      prev = cur;
    }
  }

  TemporalMask mask(period);
  if (rises.empty()) {
    if (first) mask.add_arc(0.0, period);  // lit for the whole cycle
    return mask;                           // otherwise dark everywhere
  }
  // Rises and falls alternate around the circle; each lit arc runs from
  // a rise to the next fall.
  for (double r : rises) {
    auto it = std::upper_bound(falls.begin(), falls.end(), r);
    const double f = (it == falls.end()) ? falls.front() : *it;
    mask.add_arc(r, forward_distance(r, f, period));
  }
  return mask;
}

MaskLabel select_mask(double first_cost, double t_top, double t_bottom,
                      const MaskConfig& cfg, double period) {
  if (first_cost <= cfg.cost_threshold) return MaskLabel::Collapsed;
  const double gap = forward_distance(t_top, t_bottom, period);
  return gap <= cfg.peak_separation * period ? MaskLabel::Specular : MaskLabel::Cast;
}

}  // namespace evps
