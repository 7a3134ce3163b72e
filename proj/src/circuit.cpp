#include "evps/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace evps {

namespace {

// Perturbed thresholds never cross zero; a vanishing threshold would
// fire continuously.
constexpr double kMinThreshold = 1e-3;

// Comparator trip levels sit a hair inside the armed thresholds. Each
// bisected event overshoots its exact crossing by up to the time
// tolerance, and the reference inherits that surplus; without the slack
// a crossing falling exactly on the window end is lost to the
// accumulated drift.
constexpr double kTripSlack = 1e-6;

struct PixelSim {
  const std::function<double(double)>& radiance;
  double q;
  double floor;
  double sigma;
  double dead_time;
  double t0, t1;
  double step;
  std::mt19937_64 rng;
  std::normal_distribution<double> gauss{0.0, 1.0};

  double log_signal(double t) const {
    double level = radiance(t);
    if (floor > 0.0) level = std::max(level, floor);
    if (!(level > 0.0))
      throw DomainError("nonpositive radiance at t=" + std::to_string(t) +
                        " with no amplifier floor");
    return std::log(q * level);
  }

  double perturb(double h) {
    if (sigma > 0.0) h += sigma * gauss(rng);
    return h;
  }

  std::vector<EventSample> run(double hp, double hn) {
    std::vector<EventSample> events;
    double a_ref = log_signal(t0);
    double hp_trip = 0.0;
    double hn_trip = 0.0;
    const auto arm = [&] {
      hp_trip = std::max(perturb(hp), kMinThreshold) * (1.0 - kTripSlack);
      hn_trip = std::min(perturb(hn), -kMinThreshold) * (1.0 - kTripSlack);
    };
    arm();

    const auto crossed = [&](double t) {
      const double d = log_signal(t) - a_ref;
      if (d >= hp_trip) return +1;
      if (d <= hn_trip) return -1;
      return 0;
    };

    double t = t0;
    while (t < t1) {
      // Possible when a jump lands inside the dead time window.
      int pol = crossed(t);
      double t_event = t;
      if (pol == 0) {
        double lo = t;
        double hi = 0.0;
        bool found = false;
        while (lo < t1) {
          hi = std::min(lo + step, t1);
          if (crossed(hi) != 0) {
            found = true;
            break;
          }
          lo = hi;
          if (hi >= t1) break;
        }
        if (!found) break;
        while (hi - lo > kBisectionTol) {
          const double mid = 0.5 * (lo + hi);
          if (crossed(mid) != 0)
            hi = mid;
          else
            lo = mid;
        }
        t_event = hi;
        pol = crossed(hi);
      }
      events.push_back({t_event, pol});
      a_ref = log_signal(t_event);
      arm();
      t = t_event + dead_time;
    }
    return events;
  }
};

}  // namespace

namespace detail {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
  // splitmix64 over the combined value
  std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::vector<EventSample> simulate_pixel_events_seeded(
    const std::function<double(double)>& radiance,
    const CircuitConfig& cfg,
    double hp, double hn,
    double t0, double t1,
    double grid_step,
    std::uint64_t seed) {
  if (!(t1 > t0)) throw ConfigError("simulation window must have t1 > t0");
  if (!(hp > 0.0) || !(hn < 0.0))
    throw ConfigError("thresholds must satisfy hp > 0 > hn");
  if (!(cfg.quantum_efficiency > 0.0))
    throw ConfigError("quantum efficiency must be positive");
  if (cfg.noise_sigma < 0.0 || cfg.dead_time < 0.0 || cfg.logamp_floor < 0.0)
    throw ConfigError("noise, dead time and floor must be nonnegative");
  if (grid_step <= 0.0) grid_step = (t1 - t0) / kGridDivisions;

  PixelSim sim{radiance,
               cfg.quantum_efficiency,
               cfg.logamp_floor,
               cfg.noise_sigma,
               cfg.dead_time,
               t0,
               t1,
               grid_step,
               std::mt19937_64(seed)};
  return sim.run(hp, hn);
}

}  // namespace detail

std::vector<EventSample> simulate_pixel_events(
    const std::function<double(double)>& radiance,
    const CircuitConfig& cfg,
    double hp, double hn,
    double t0, double t1,
    double grid_step) {
  return detail::simulate_pixel_events_seeded(radiance, cfg, hp, hn, t0, t1,
                                              grid_step, cfg.rng_seed);
}

EventStream simulate_stream(const SceneSpec& scene,
                            const LightTrajectory& traj,
                            int cycles,
                            const CircuitConfig& cfg) {
  if (cycles < 1) throw ConfigError("need at least one cycle");
  if (cfg.thresholds.width() != scene.width || cfg.thresholds.height() != scene.height)
    throw ConfigError("threshold map size does not match the scene");

  const double period = traj.period();
  const double t1 = cycles * period;
  const double step = period / kGridDivisions;

  EventStream stream;
  stream.width = scene.width;
  stream.height = scene.height;

  for (int y = 0; y < scene.height; ++y) {
    for (int x = 0; x < scene.width; ++x) {
      if (!scene.is_foreground(x, y)) continue;
      if (!cfg.thresholds.is_valid(x, y)) continue;
      const auto radiance = [&scene, &traj, x, y](double t) {
        return render_radiance(scene, x, y, traj, t);
      };
      const std::uint64_t seed = detail::mix_seed(
          cfg.rng_seed, static_cast<std::uint64_t>(y) * scene.width + x);
      try {
        const auto pixel_events = detail::simulate_pixel_events_seeded(
            radiance, cfg, cfg.thresholds.hp(x, y), cfg.thresholds.hn(x, y),
            0.0, t1, step, seed);
        for (const EventSample& ev : pixel_events)
          stream.events.push_back({x, y, ev.t, ev.polarity});
      } catch (const Error& e) {
        throw DomainError("pixel (" + std::to_string(x) + "," + std::to_string(y) +
                          "): " + e.what());
      }
    }
  }

  sort_events(stream.events);
  stream.cycle_syncs.resize(cycles + 1);
  for (int c = 0; c <= cycles; ++c) stream.cycle_syncs[c] = c * period;
  return stream;
}

}  // namespace evps
