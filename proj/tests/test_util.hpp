#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "evps/circuit.hpp"
#include "evps/events.hpp"
#include "evps/geometry.hpp"
#include "evps/profile.hpp"
#include "evps/solver.hpp"

namespace evps::test {

inline constexpr double kPi = 3.14159265358979323846;

/// Lambertian single-pixel radiance with offset, the workhorse fixture:
/// L(t) = s * rho * max(n.l(t), 0) + offset.
inline std::function<double(double)> lambertian_radiance(
    const Vec3& n, const LightTrajectory& traj, double s_rho, double offset) {
  return [n, &traj, s_rho, offset](double t) {
    return s_rho * std::max(n.dot(traj.direction(t)), 0.0) + offset;
  };
}

/// Simulates one noiseless pixel and reconstructs its averaged profile
/// from the cycles after the first.
inline Profile simulate_pixel_profile(const Vec3& n, const LightTrajectory& traj,
                                      double h, double offset_ratio,
                                      int samples = kDefaultProfileSamples,
                                      int averaged = 1, double sigma = 0.0,
                                      std::uint64_t seed = 1) {
  CircuitConfig cfg;
  cfg.noise_sigma = sigma;
  cfg.rng_seed = seed;
  const double period = traj.period();
  const auto radiance = lambertian_radiance(n, traj, 1.0, offset_ratio);
  const auto events = simulate_pixel_events(radiance, cfg, h, -h, 0.0,
                                            (averaged + 2) * period,
                                            period / kGridDivisions);
  std::vector<Profile> profiles;
  for (int c = 1; c <= averaged; ++c) {
    std::vector<EventSample> cycle;
    for (const auto& ev : events)
      if (ev.t >= c * period && ev.t < (c + 1) * period) cycle.push_back(ev);
    profiles.push_back(reconstruct_eip(cycle, h, -h, period, samples, c * period));
  }
  return average_profiles(profiles);
}

inline double angle_deg(const Vec3& a, const Vec3& b) {
  const double d = std::clamp(a.normalized().dot(b.normalized()), -1.0, 1.0);
  return std::acos(d) * 180.0 / kPi;
}

}  // namespace evps::test
