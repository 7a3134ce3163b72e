#pragma once

#include <cstdint>
#include <functional>

#include "evps/events.hpp"
#include "evps/scene.hpp"

namespace evps {

/// Time resolution of the event detector: the grid divides one period
/// into this many steps, and crossings are refined by bisection to
/// kBisectionTol seconds.
inline constexpr int kGridDivisions = 4096;
inline constexpr double kBisectionTol = 1e-9;

/// Event camera pixel model: logarithmic amplifier, differencing against
/// the level at the previous event, and two comparators.
struct CircuitConfig {
  double quantum_efficiency = 1.0;  // cancels in the difference; kept testable
  PixelThresholds thresholds;       // per-pixel hp/hn, used by simulate_stream
  double noise_sigma = 0.0;         // std dev of per-event threshold perturbation
  double logamp_floor = 0.0;        // radiance clamp below which the amplifier flattens
  double dead_time = 0.0;           // seconds a pixel stays blind after an event
  std::uint64_t rng_seed = 0;
};

/// Simulates one pixel over [t0, t1].
///
/// Maintains the reference a_ref = ln(q * L(t_prev)) and walks a grid of
/// step `grid_step` (default (t1 - t0)/4096), bisecting to find the
/// earliest instant where ln(q * L(t)) - a_ref reaches the armed positive
/// or negative threshold. Each pending event draws fresh Gaussian
/// threshold perturbations of scale noise_sigma. On emission the
/// reference resets to the signal level at the event and detection
/// resumes after dead_time. Returned times are strictly increasing.
///
/// Radiance below logamp_floor is clamped to the floor before the log;
/// nonpositive radiance with a zero floor is a domain error naming the
/// time.
std::vector<EventSample> simulate_pixel_events(
    const std::function<double(double)>& radiance,
    const CircuitConfig& cfg,
    double hp, double hn,
    double t0, double t1,
    double grid_step = 0.0);

namespace detail {
/// Same, with an explicit noise seed (simulate_stream derives one per
/// pixel so results do not depend on pixel visit order).
std::vector<EventSample> simulate_pixel_events_seeded(
    const std::function<double(double)>& radiance,
    const CircuitConfig& cfg,
    double hp, double hn,
    double t0, double t1,
    double grid_step,
    std::uint64_t seed);

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt);
}  // namespace detail

/// Runs every foreground pixel of the scene through the pixel circuit
/// for `cycles` light periods and merges the results into one stream
/// sorted by (t, y, x, polarity), with syncs at {0, T, ..., cycles*T}.
/// Per-pixel failures are rethrown with the pixel coordinates attached.
EventStream simulate_stream(const SceneSpec& scene,
                            const LightTrajectory& traj,
                            int cycles,
                            const CircuitConfig& cfg);

}  // namespace evps
