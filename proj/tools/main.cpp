#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "evps/calib.hpp"
#include "evps/circuit.hpp"
#include "evps/io.hpp"
#include "evps/metrics.hpp"
#include "evps/scene.hpp"
#include "evps/solver.hpp"

namespace {

using namespace evps;

PixelThresholds load_thresholds(const RunConfig& cfg, int width, int height,
                                const std::string& hp_map, const std::string& hn_map) {
  if (hp_map.empty() != hn_map.empty())
    throw ConfigError("--hp-map and --hn-map must be given together");
  if (hp_map.empty())
    return PixelThresholds::uniform(width, height, cfg.threshold_hp, cfg.threshold_hn);
  const Image hp = read_pfm(hp_map);
  const Image hn = read_pfm(hn_map);
  if (hp.width != width || hp.height != height || hn.width != width || hn.height != height)
    throw ConfigError("threshold map size does not match the event sensor");
  if (hp.channels != 1 || hn.channels != 1)
    throw ConfigError("threshold maps must be single-channel");
  PixelThresholds t(width, height);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x) t.set(x, y, hp.at(x, y), hn.at(x, y));
  return t;
}

int run_simulate(const std::string& config_path, const std::string& preset_name,
                 int resolution, double light_power, double ramp_k,
                 const std::string& out_path, const std::string& truth_normals,
                 const std::string& truth_albedo) {
  const RunConfig cfg = load_run_config(config_path);
  SceneSpec scene = make_sphere_scene(resolution, preset_from_name(preset_name));
  scene.light_power = light_power;

  CircuitConfig circuit = cfg.make_circuit_config(scene.width, scene.height);
  EventStream stream;
  if (ramp_k > 0.0) {
    // Calibration recording: static light, power-modulated, offset off.
    const LightTrajectory traj = cfg.make_trajectory();
    stream = simulate_calibration_ramp(scene, traj.direction(0.0), ramp_k,
                                       cfg.cycles, cfg.light_period, circuit);
  } else {
    scene.offset_light = cfg.offset_light_ratio * scene.light_power;
    stream = simulate_stream(scene, cfg.make_trajectory(), cfg.cycles, circuit);
  }
  write_events(out_path, stream);
  if (!truth_normals.empty()) write_pfm(truth_normals, scene.normal_map());
  if (!truth_albedo.empty()) write_pfm(truth_albedo, scene.albedo_map());
  std::cout << "events=" << stream.events.size() << " cycles=" << stream.cycle_count()
            << " -> " << out_path << "\n";
  return 0;
}

int run_calibrate(const std::string& events_path, double k, int cycles,
                  const std::string& out_hp, const std::string& out_hn,
                  const std::string& sidecar) {
  const EventStream stream = read_events(events_path);
  stream.validate();
  const PixelThresholds thresholds = estimate_thresholds(stream, k, cycles);

  Image hp(stream.width, stream.height, 1, 0.0f);
  Image hn(stream.width, stream.height, 1, 0.0f);
  for (int y = 0; y < stream.height; ++y)
    for (int x = 0; x < stream.width; ++x) {
      hp.at(x, y) = static_cast<float>(thresholds.hp(x, y));
      hn.at(x, y) = static_cast<float>(thresholds.hn(x, y));
    }
  write_pfm(out_hp, hp);
  write_pfm(out_hn, hn);
  if (!sidecar.empty()) {
    char kbuf[32];
    std::snprintf(kbuf, sizeof(kbuf), "%.17g", k);
    write_key_values(sidecar, {{"power_ratio", kbuf},
                               {"cycles", std::to_string(cycles)}});
  }
  std::cout << "thresholds -> " << out_hp << ", " << out_hn << "\n";
  return 0;
}

int run_solve(const std::string& config_path, const std::string& events_path,
              const std::string& out_normals, const std::string& out_cost,
              const std::string& out_labels, const std::string& hp_map,
              const std::string& hn_map) {
  const RunConfig cfg = load_run_config(config_path);
  const EventStream stream = read_events(events_path);
  stream.validate();
  const PixelThresholds thresholds =
      load_thresholds(cfg, stream.width, stream.height, hp_map, hn_map);
  const SolveMaps maps = solve_pixelwise(stream, thresholds, cfg.make_trajectory(),
                                         cfg.make_solver_config(), cfg.average_cycles);
  write_pfm(out_normals, maps.normals);
  if (!out_cost.empty()) write_pfm(out_cost, maps.cost);
  if (!out_labels.empty()) write_pfm(out_labels, maps.labels);
  std::cout << "normals -> " << out_normals << "\n";
  return 0;
}

int run_baseline(const std::string& config_path, const std::string& events_path,
                 const std::string& out_normals, const std::string& hp_map,
                 const std::string& hn_map) {
  const RunConfig cfg = load_run_config(config_path);
  const EventStream stream = read_events(events_path);
  stream.validate();
  const PixelThresholds thresholds =
      load_thresholds(cfg, stream.width, stream.height, hp_map, hn_map);
  const Image normals =
      baseline_pixelwise(stream, thresholds, cfg.make_trajectory(), cfg.average_cycles);
  write_pfm(out_normals, normals);
  std::cout << "baseline normals -> " << out_normals << "\n";
  return 0;
}

int run_eval(const std::string& result_path, const std::string& truth_path,
             const std::string& out_error, const std::string& out_summary) {
  const Image result = read_pfm(result_path);
  const Image truth = read_pfm(truth_path);
  const MaeReport report = evaluate_mae(result, truth);
  if (!out_error.empty()) write_pfm(out_error, report.error_map);
  char mae[32];
  std::snprintf(mae, sizeof(mae), "%.6f", report.mae_deg);
  if (!out_summary.empty())
    write_key_values(out_summary, {{"mae_deg", mae},
                                   {"evaluated", std::to_string(report.evaluated)},
                                   {"sentinels", std::to_string(report.sentinels)}});
  std::cout << "mae_deg=" << mae << " evaluated=" << report.evaluated
            << " sentinels=" << report.sentinels << "\n";
  return 0;
}

int run_profile(const std::string& config_path, const std::string& events_path,
                int px, int py, const std::string& out_csv, const std::string& hp_map,
                const std::string& hn_map) {
  const RunConfig cfg = load_run_config(config_path);
  const EventStream stream = read_events(events_path);
  stream.validate();
  if (px < 0 || px >= stream.width || py < 0 || py >= stream.height)
    throw ConfigError("pixel lies outside the sensor");
  const PixelThresholds thresholds =
      load_thresholds(cfg, stream.width, stream.height, hp_map, hn_map);
  if (stream.cycle_count() < cfg.average_cycles + 2)
    throw ConfigError("stream must carry at least K+2 cycles");

  const double period = cfg.light_period;
  std::vector<Profile> profiles;
  for (int c = 1; c <= cfg.average_cycles; ++c) {
    std::vector<EventSample> cycle_events;
    for (const Event& ev : stream.events) {
      if (ev.x != px || ev.y != py) continue;
      if (ev.t >= stream.cycle_syncs[c] && ev.t < stream.cycle_syncs[c + 1])
        cycle_events.push_back({ev.t, ev.polarity});
    }
    profiles.push_back(reconstruct_eip(cycle_events, thresholds.hp(px, py),
                                       thresholds.hn(px, py), period,
                                       kDefaultProfileSamples,
                                       stream.cycle_syncs[c]));
  }
  const Profile avg = average_profiles(profiles);
  write_profile_csv(out_csv, avg);
  std::cout << "profile(" << px << "," << py << ") -> " << out_csv << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Event-camera photometric stereo toolkit"};
  app.require_subcommand(1);

  std::string config_path, events_path, out_path;
  std::string preset = "diffuse";
  int resolution = 64;
  double light_power = 1.0;
  double ramp_k = 0.0;
  std::string truth_normals, truth_albedo;

  auto* simulate = app.add_subcommand("simulate", "Render a scene into an event stream");
  simulate->add_option("--config", config_path, "Run configuration file")->required();
  simulate->add_option("--preset", preset, "Scene preset: diffuse|glossy|pole|two-tone");
  simulate->add_option("--resolution", resolution, "Sensor resolution in pixels");
  simulate->add_option("--light-power", light_power, "Source power s");
  simulate->add_option("--ramp-k", ramp_k,
                       "Record a static-light calibration ramp with this power ratio");
  simulate->add_option("--out", out_path, "Output event file (.bin/.evt binary, else text)")
      ->required();
  simulate->add_option("--truth-normals", truth_normals, "Write ground-truth normals (PFM)");
  simulate->add_option("--truth-albedo", truth_albedo, "Write ground-truth albedo (PFM)");

  double calib_k = 6.0;
  int calib_cycles = 10;
  std::string out_hp, out_hn, sidecar;
  auto* calibrate = app.add_subcommand("calibrate", "Estimate per-pixel thresholds from a ramp recording");
  calibrate->add_option("--events", events_path, "Ramp event file")->required();
  calibrate->add_option("--k", calib_k, "Power ratio of the ramp")->required();
  calibrate->add_option("--cycles", calib_cycles, "Ramp cycles in the recording")->required();
  calibrate->add_option("--out-hp", out_hp, "Positive threshold map (PFM)")->required();
  calibrate->add_option("--out-hn", out_hn, "Negative threshold map (PFM)")->required();
  calibrate->add_option("--sidecar", sidecar, "Write calibration parameters to this file");

  std::string out_normals, out_cost, out_labels, hp_map, hn_map;
  auto* solve = app.add_subcommand("solve", "Recover a normal map from events");
  solve->add_option("--config", config_path, "Run configuration file")->required();
  solve->add_option("--events", events_path, "Event file")->required();
  solve->add_option("--out-normals", out_normals, "Normal map output (PFM)")->required();
  solve->add_option("--out-cost", out_cost, "Cost map output (PFM)");
  solve->add_option("--out-labels", out_labels, "Mask label map output (PFM)");
  solve->add_option("--hp-map", hp_map, "Calibrated positive thresholds (PFM)");
  solve->add_option("--hn-map", hn_map, "Calibrated negative thresholds (PFM)");

  auto* baseline = app.add_subcommand("baseline", "Interval-ratio null-space baseline");
  baseline->add_option("--config", config_path, "Run configuration file")->required();
  baseline->add_option("--events", events_path, "Event file")->required();
  baseline->add_option("--out-normals", out_normals, "Normal map output (PFM)")->required();
  baseline->add_option("--hp-map", hp_map, "Calibrated positive thresholds (PFM)");
  baseline->add_option("--hn-map", hn_map, "Calibrated negative thresholds (PFM)");

  std::string result_path, truth_path, out_error, out_summary;
  auto* eval = app.add_subcommand("eval", "Angular error against a ground-truth normal map");
  eval->add_option("--result", result_path, "Recovered normal map (PFM)")->required();
  eval->add_option("--truth", truth_path, "Ground-truth normal map (PFM)")->required();
  eval->add_option("--out-error", out_error, "Per-pixel error map output (PFM)");
  eval->add_option("--out-summary", out_summary, "Summary key=value output");

  int px = 0, py = 0;
  std::string out_csv;
  auto* profile = app.add_subcommand("profile", "Dump one pixel's interval profile as CSV");
  profile->add_option("--config", config_path, "Run configuration file")->required();
  profile->add_option("--events", events_path, "Event file")->required();
  profile->add_option("--x", px, "Pixel column")->required();
  profile->add_option("--y", py, "Pixel row")->required();
  profile->add_option("--out", out_csv, "CSV output path")->required();
  profile->add_option("--hp-map", hp_map, "Calibrated positive thresholds (PFM)");
  profile->add_option("--hn-map", hn_map, "Calibrated negative thresholds (PFM)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed())
      return run_simulate(config_path, preset, resolution, light_power, ramp_k,
                          out_path, truth_normals, truth_albedo);
    if (calibrate->parsed())
      return run_calibrate(events_path, calib_k, calib_cycles, out_hp, out_hn, sidecar);
    if (solve->parsed())
      return run_solve(config_path, events_path, out_normals, out_cost, out_labels,
                       hp_map, hn_map);
    if (baseline->parsed())
      return run_baseline(config_path, events_path, out_normals, hp_map, hn_map);
    if (eval->parsed())
      return run_eval(result_path, truth_path, out_error, out_summary);
    if (profile->parsed())
      return run_profile(config_path, events_path, px, py, out_csv, hp_map, hn_map);
  } catch (const evps::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
