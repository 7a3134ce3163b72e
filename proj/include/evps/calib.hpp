#pragma once

#include "evps/circuit.hpp"
#include "evps/events.hpp"
#include "evps/image.hpp"
#include "evps/scene.hpp"

namespace evps {

/// Estimates per-pixel thresholds from a stream recorded under a light
/// whose power ramps monotonically between s and k*s each half cycle,
/// repeated `cycles` times. Each cycle sweeps ln(k) of log radiance in
/// each direction, so
///   hp = cycles * ln(k) / N_p,   hn = -cycles * ln(k) / N_n,
/// with N_p / N_n the total positive / negative counts. Pixels with no
/// events of a polarity keep the 0 sentinel for that threshold.
PixelThresholds estimate_thresholds(const EventStream& stream,
                                    double power_ratio, int cycles);

/// Event accumulation image: per pixel hp * N_p, a proxy for the total
/// positive log-intensity swing.
Image accumulation_image(const EventStream& stream, const PixelThresholds& thresholds);

/// Signed variant hp * N_p + hn * N_n.
Image accumulation_image_signed(const EventStream& stream, const PixelThresholds& thresholds);

/// Records a calibration sequence: the light sits still at `light_dir`
/// while its power follows a triangular ramp between the scene's power
/// and k times it, `cycles` times with the given period. Offset light is
/// off during calibration. Pixels facing away from the light record
/// nothing.
EventStream simulate_calibration_ramp(const SceneSpec& scene,
                                      const Vec3& light_dir,
                                      double power_ratio, int cycles,
                                      double period, const CircuitConfig& cfg);

}  // namespace evps
