#pragma once

#include <vector>

#include "evps/events.hpp"
#include "evps/geometry.hpp"
#include "evps/image.hpp"
#include "evps/masks.hpp"
#include "evps/profile.hpp"
#include "evps/temporal_mask.hpp"

namespace evps {

struct SolverConfig {
  int grid_azimuth = 36;          // initialization cells over [0, 2*pi)
  int grid_zenith = 18;           // initialization cells over [0, pi/2]
  int refine_iters = 100;         // coordinate-search sweep budget
  double refine_tol = 1e-5;       // step size below which refinement stops, radians
  double offset_ratio = 0.0;      // known offset light over source power
  int profile_samples = kDefaultProfileSamples;
  MaskConfig mask;
};

struct SolveResult {
  Vec3 normal = Vec3(0, 0, 1);
  double cost = 0.0;
  MaskLabel label = MaskLabel::Collapsed;
  int stage = 1;
  int support_count = 0;  // samples entering the final cost
};

/// Model profile for a hypothesized normal:
///   p(t) = n.l'(t) / (max(n.l(t), 0) + offset_ratio).
/// In attached shadow the radiance is the constant offset, so p is 0
/// there when an offset is present; without one the model is undefined
/// and a domain error is raised.
double ideal_eip(const Vec3& normal, const LightTrajectory& traj,
                 double offset_ratio, double t);

/// Closed form of the circular-trajectory profile in spherical normal
/// coordinates: n.l(t) = A cos(w t + phase) + B with A = sin(zn) sin(zl),
/// B = cos(zn) cos(zl). Test oracle for ideal_eip.
struct CircularEipModel {
  double amplitude = 0.0;          // A
  double bias = 0.0;               // B
  double phase = 0.0;              // phase0 - azimuth_n
  double angular_frequency = 0.0;  // 2*pi/T
  double offset_ratio = 0.0;

  double dot(double t) const;
  double value(double t) const;
};

CircularEipModel closed_form_circular(double zenith_n, double azimuth_n,
                                      const LightTrajectory& traj,
                                      double offset_ratio = 0.0);

/// Mean squared residual between the model profile of `normal` and the
/// reconstructed profile, over samples that are valid, mask-selected and
/// lit (or offset-lit). Throws EmptySupportError when no sample
/// qualifies.
double profile_cost(const Vec3& normal, const Profile& profile,
                    const TemporalMask& mask, const LightTrajectory& traj,
                    double offset_ratio);

/// Single-stage fit: exhaustive coarse grid over (azimuth, zenith)
/// followed by step-halving coordinate descent. Deterministic for fixed
/// inputs; every accepted refinement move strictly decreases the cost
/// (recorded in cost_trace when given).
SolveResult solve_normal(const Profile& profile, const TemporalMask& mask,
                         const LightTrajectory& traj, const SolverConfig& cfg,
                         std::vector<double>* cost_trace = nullptr);

struct SolveMaps {
  Image normals;  // 3-channel; (0,0,0) where absent or unsolved
  Image cost;     // final cost; -1 sentinel
  Image labels;   // 0 collapsed, 1 specular, 2 cast; -1 sentinel
  Image stages;   // 1 or 2; -1 sentinel
};

/// Full per-pixel pipeline over a recorded stream. The first and last
/// cycles are discarded; the next `average_cycles` profiles are averaged,
/// peaks located, and each pixel solved with the collapsed mask. Pixels
/// whose first-stage cost exceeds the threshold are re-solved with the
/// specular or cast mask chosen by select_mask; if the second stage
/// cannot run, the first-stage result stands. Per-pixel failures become
/// sentinels, never frame aborts.
SolveMaps solve_pixelwise(const EventStream& stream,
                          const PixelThresholds& thresholds,
                          const LightTrajectory& traj,
                          const SolverConfig& cfg,
                          int average_cycles);

/// Interval-ratio null-space baseline. Stacks one row
///   r_i = l(t_i) - exp(h(t_i)) l(t_{i-1})
/// per adjacent event pair and returns the unit direction minimizing
/// |R n|, sign-fixed to n_z > 0. Throws AmbiguousNormalError when the
/// stack has rank < 2.
Vec3 eventps_baseline(const std::vector<EventSample>& events,
                      double hp, double hn,
                      const LightTrajectory& traj);

/// Baseline applied to every pixel of a stream over the same trimmed
/// cycle window as solve_pixelwise. Unsolvable pixels become (0,0,0).
Image baseline_pixelwise(const EventStream& stream,
                         const PixelThresholds& thresholds,
                         const LightTrajectory& traj,
                         int average_cycles);

/// Rotates every valid normal about the view axis by `offset` radians
/// (azimuth correction); zeniths are unchanged. |offset| must be < pi.
Image apply_azimuth_offset(const Image& normal_map, double offset);

}  // namespace evps
