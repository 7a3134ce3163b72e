#pragma once

#include <cstdint>
#include <string>

#include "evps/circuit.hpp"
#include "evps/events.hpp"
#include "evps/geometry.hpp"
#include "evps/image.hpp"
#include "evps/masks.hpp"
#include "evps/profile.hpp"
#include "evps/solver.hpp"

namespace evps {

/// Text event format: header "x,y,t_us,p", one event per line with the
/// timestamp in integer microseconds and p in {1,-1}. Sync times live in
/// a companion "<path>.sync" file, one integer microsecond per line.
void write_events_text(const std::string& path, const EventStream& stream);
EventStream read_events_text(const std::string& path);

/// Binary event format: magic "EVT1", little-endian u32 width, u32
/// height, u64 count, then count records of {u16 x, u16 y, i8 p, pad
/// byte, u64 t_ns}. Syncs use the same "<path>.sync" companion as the
/// text format.
void write_events_binary(const std::string& path, const EventStream& stream);
EventStream read_events_binary(const std::string& path);

/// Dispatch by extension (.bin/.evt binary, anything else text) on
/// write, by sniffing the magic on read.
void write_events(const std::string& path, const EventStream& stream);
EventStream read_events(const std::string& path);

/// PFM: "PF" (3-channel) or "Pf" (1-channel), dimensions, negative scale
/// for little-endian, rows bottom to top of 32-bit floats.
void write_pfm(const std::string& path, const Image& image);
Image read_pfm(const std::string& path);

/// Profile dump for plotting: header "time,value,valid".
void write_profile_csv(const std::string& path, const Profile& profile);

/// Flat key=value run configuration. Loading is strict: every key must
/// be present exactly once and unknown keys are rejected, so a run is
/// reproducible from the file alone.
struct RunConfig {
  double light_zenith = 0.7853981633974483;  // radians
  double light_period = 1.0;                 // seconds
  double light_phase0 = 0.0;                 // radians
  double threshold_hp = 0.05;
  double threshold_hn = -0.05;
  double noise_sigma = 0.0;
  double logamp_floor = 0.0;
  double dead_time = 0.0;
  std::uint64_t rng_seed = 1;
  int solver_grid_azimuth = 36;
  int solver_grid_zenith = 18;
  int solver_refine_iters = 100;
  double solver_refine_tol = 1e-5;
  double offset_light_ratio = 0.0;
  double mask_specular_margin = 0.14;
  double mask_cast_margin = 0.20;
  double mask_cost_threshold = 0.25;
  double mask_peak_separation = 0.25;
  int cycles = 3;
  int average_cycles = 1;

  LightTrajectory make_trajectory() const;
  SolverConfig make_solver_config() const;
  /// Circuit config with uniform thresholds for a sensor of the given size.
  CircuitConfig make_circuit_config(int width, int height) const;
};

RunConfig load_run_config(const std::string& path);
void save_run_config(const std::string& path, const RunConfig& cfg);

/// Small key=value sidecar (calibration parameters and the like).
void write_key_values(const std::string& path,
                      const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace evps
