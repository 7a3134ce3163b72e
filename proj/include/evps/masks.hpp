#pragma once

#include "evps/geometry.hpp"
#include "evps/temporal_mask.hpp"

namespace evps {

/// Parameters of the outlier-mask cascade. Margins and the peak
/// separation threshold are fractions of the cycle period so a
/// configuration transfers across rotation frequencies.
struct MaskConfig {
  double specular_margin = 0.14;   // expansion of the specular cut, each side
  double cast_margin = 0.20;       // expansion of the cast-shadow cut, each side
  double cost_threshold = 0.25;    // first-stage cost above which a second mask is tried;
                                   // default calibrated on the noiseless diffuse sphere
                                   // fixture (95th percentile first-stage cost)
  double peak_separation = 0.25;   // top-to-bottom forward gap that separates
                                   // specular (short) from cast (long)
};

enum class MaskLabel { Collapsed = 0, Specular = 1, Cast = 2 };

/// Keeps the forward arc from the top peak to the bottom peak and drops
/// the rest: the stretches before the top and after the bottom peak are
/// where collapsed events distort the profile.
TemporalMask mask_collapsed(double t_top, double t_bottom, double period);

/// Drops the margin-expanded arc around a positive-then-negative peak
/// pair left by a specular transit. `margin` is a fraction of the period.
/// Throws AllMaskedError when the expanded cut covers the whole cycle.
TemporalMask mask_specular(double t_top, double t_bottom, double margin, double period);

/// Same cut for a cast-shadow transit, whose pair is negative first:
/// drops [t_bottom - margin, t_top + margin].
TemporalMask mask_cast(double t_top, double t_bottom, double margin, double period);

/// Lit-side gate: 1 exactly where n.l(t) > 0. Sampled at n uniform
/// times with sign changes refined by bisection to 1e-9 s.
TemporalMask mask_attached(const Vec3& normal, const LightTrajectory& traj,
                           double period, int n);

/// Second-stage decision. Keeps the collapsed mask while the first fit
/// is good enough; otherwise a short top-to-bottom forward gap reads as
/// a specular pair and a long one as a cast-shadow pair. One mask per
/// pixel per pass.
MaskLabel select_mask(double first_cost, double t_top, double t_bottom,
                      const MaskConfig& cfg, double period);

}  // namespace evps
