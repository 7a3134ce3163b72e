#include "evps/calib.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace evps {

PixelThresholds estimate_thresholds(const EventStream& stream,
                                    double power_ratio, int cycles) {
  if (!(power_ratio > 1.0))
    throw ConfigError("calibration power ratio must exceed 1");
  if (cycles < 1) throw ConfigError("calibration needs at least one cycle");

  const std::size_t pixels = static_cast<std::size_t>(stream.width) * stream.height;
  std::vector<long> pos(pixels, 0), neg(pixels, 0);
  for (const Event& ev : stream.events) {
    const std::size_t i = static_cast<std::size_t>(ev.y) * stream.width + ev.x;
    if (ev.polarity > 0)
      ++pos[i];
    else
      ++neg[i];
  }

  // Each cycle sweeps ln(k) of log radiance up and down again.
  const double swing = cycles * std::log(power_ratio);
  PixelThresholds out(stream.width, stream.height);
  for (int y = 0; y < stream.height; ++y)
    for (int x = 0; x < stream.width; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * stream.width + x;
      const double hp = pos[i] > 0 ? swing / pos[i] : 0.0;
      const double hn = neg[i] > 0 ? -swing / neg[i] : 0.0;
      out.set(x, y, hp, hn);
    }
  return out;
}

Image accumulation_image(const EventStream& stream, const PixelThresholds& thresholds) {
  Image out(stream.width, stream.height, 1, 0.0f);
  for (const Event& ev : stream.events)
    if (ev.polarity > 0)
      out.at(ev.x, ev.y) += static_cast<float>(thresholds.hp(ev.x, ev.y));
  return out;
}

Image accumulation_image_signed(const EventStream& stream,
                                const PixelThresholds& thresholds) {
  Image out(stream.width, stream.height, 1, 0.0f);
  for (const Event& ev : stream.events)
    out.at(ev.x, ev.y) += static_cast<float>(
        ev.polarity > 0 ? thresholds.hp(ev.x, ev.y) : thresholds.hn(ev.x, ev.y));
  return out;
}

EventStream simulate_calibration_ramp(const SceneSpec& scene,
                                      const Vec3& light_dir,
                                      double power_ratio, int cycles,
                                      double period, const CircuitConfig& cfg) {
  if (!(power_ratio > 1.0))
    throw ConfigError("calibration power ratio must exceed 1");
  if (cycles < 1) throw ConfigError("calibration needs at least one cycle");
  if (cfg.thresholds.width() != scene.width || cfg.thresholds.height() != scene.height)
    throw ConfigError("threshold map size does not match the scene");

  const Vec3 l = light_dir.normalized();
  const double t1 = cycles * period;
  const double step = period / kGridDivisions;

  // Triangular power modulation between s and k*s.
  const auto power = [&](double t) {
    const double phase = fold_time(t, period) / period;
    const double f = phase < 0.5 ? 2.0 * phase : 2.0 * (1.0 - phase);
    return scene.light_power * (1.0 + (power_ratio - 1.0) * f);
  };

  EventStream stream;
  stream.width = scene.width;
  stream.height = scene.height;
  for (int y = 0; y < scene.height; ++y) {
    for (int x = 0; x < scene.width; ++x) {
      if (!scene.is_foreground(x, y)) continue;
      const std::size_t i = scene.idx(x, y);
      const double shade = scene.albedo[i] * std::max(scene.normals[i].dot(l), 0.0);
      if (shade <= 0.0 && cfg.logamp_floor <= 0.0) continue;  // records nothing
      const auto radiance = [&power, shade](double t) { return power(t) * shade; };
      const std::uint64_t seed = detail::mix_seed(
          cfg.rng_seed, static_cast<std::uint64_t>(y) * scene.width + x);
      const auto pixel_events = detail::simulate_pixel_events_seeded(
          radiance, cfg, cfg.thresholds.hp(x, y), cfg.thresholds.hn(x, y),
          0.0, t1, step, seed);
      for (const EventSample& ev : pixel_events)
        stream.events.push_back({x, y, ev.t, ev.polarity});
    }
  }
  sort_events(stream.events);
  stream.cycle_syncs.resize(cycles + 1);
  for (int c = 0; c <= cycles; ++c) stream.cycle_syncs[c] = c * period;
  return stream;
}

}  // namespace evps
