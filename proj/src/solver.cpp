#include "evps/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

namespace evps {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

/// Light direction and derivative tabulated at the profile's sample
/// times, so candidate evaluations reduce to dot products.
struct LightSamples {
  std::vector<Vec3> dir;
  std::vector<Vec3> deriv;
  std::vector<double> t;

  LightSamples(const LightTrajectory& traj, double period, int n) {
    dir.reserve(n);
    deriv.reserve(n);
    t.reserve(n);
    for (int i = 0; i < n; ++i) {
      const double ti = period * i / n;
      t.push_back(ti);
      dir.push_back(traj.direction(ti));
      deriv.push_back(traj.derivative(ti));
    }
  }
};

/// Sample indices that are valid and mask-selected; the lit condition
/// still depends on the candidate normal and is checked per evaluation.
std::vector<int> support_indices(const Profile& profile, const TemporalMask& mask) {
  std::vector<int> idx;
  for (int i = 0; i < profile.samples(); ++i)
    if (profile.valid[i] && mask.contains(profile.sample_time(i))) idx.push_back(i);
  return idx;
}

struct CostEval {
  double cost = kInf;
  int support = 0;
};

CostEval evaluate_cost(const Vec3& n, const Profile& profile,
                       const std::vector<int>& idx, const LightSamples& light,
                       double offset_ratio) {
  double sum = 0.0;
  int m = 0;
  for (int i : idx) {
    const double d = n.dot(light.dir[i]);
    if (d <= 0.0 && offset_ratio <= 0.0) continue;
    const double model = (d > 0.0)
                             ? n.dot(light.deriv[i]) / (d + offset_ratio)
                             : 0.0;
    const double r = model - profile.values[i];
    sum += r * r;
    ++m;
  }
  CostEval out;
  if (m > 0) {
    out.cost = sum / m;
    out.support = m;
  }
  return out;
}

}  // namespace

double CircularEipModel::dot(double t) const {
  return amplitude * std::cos(angular_frequency * t + phase) + bias;
}

double CircularEipModel::value(double t) const {
  const double d = dot(t);
  const double ddot = -amplitude * angular_frequency * std::sin(angular_frequency * t + phase);
  if (d <= 0.0) {
    if (offset_ratio > 0.0) return 0.0;
    throw DomainError("attached shadow with no offset light");
  }
  return ddot / (d + offset_ratio);
}

CircularEipModel closed_form_circular(double zenith_n, double azimuth_n,
                                      const LightTrajectory& traj,
                                      double offset_ratio) {
  if (!traj.is_circular())
    throw ConfigError("closed form requires a circular trajectory");
  CircularEipModel model;
  model.amplitude = std::sin(zenith_n) * std::sin(traj.zenith());
  model.bias = std::cos(zenith_n) * std::cos(traj.zenith());
  model.phase = traj.phase0() - azimuth_n;
  model.angular_frequency = 2.0 * kPi / traj.period();
  model.offset_ratio = offset_ratio;
  return model;
}

double ideal_eip(const Vec3& normal, const LightTrajectory& traj,
                 double offset_ratio, double t) {
  const double d = normal.dot(traj.direction(t));
  if (d <= 0.0) {
    if (offset_ratio > 0.0) return 0.0;  // radiance pinned at the offset
    throw DomainError("attached shadow with no offset light");
  }
  return normal.dot(traj.derivative(t)) / (d + offset_ratio);
}

double profile_cost(const Vec3& normal, const Profile& profile,
                    const TemporalMask& mask, const LightTrajectory& traj,
                    double offset_ratio) {
  const LightSamples light(traj, profile.period, profile.samples());
  const auto idx = support_indices(profile, mask);
  const CostEval eval = evaluate_cost(normal, profile, idx, light, offset_ratio);
  if (eval.support == 0)
    throw EmptySupportError("no valid, unmasked, lit sample to score");
  return eval.cost;
}

SolveResult solve_normal(const Profile& profile, const TemporalMask& mask,
                         const LightTrajectory& traj, const SolverConfig& cfg,
                         std::vector<double>* cost_trace) {
  if (cfg.grid_azimuth < 4 || cfg.grid_zenith < 4)
    throw ConfigError("initialization grid must be at least 4x4");
  if (!(cfg.refine_tol > 0.0)) throw ConfigError("refinement tolerance must be positive");

  const int n = profile.samples();
  const LightSamples light(traj, profile.period, n);
  const auto idx = support_indices(profile, mask);

  const double dphi = 2.0 * kPi / cfg.grid_azimuth;
  const double dtheta = (kPi / 2.0) / (cfg.grid_zenith - 1);

  const auto eval = [&](double theta, double phi) {
    return evaluate_cost(unit_from_spherical(theta, phi), profile, idx, light,
                         cfg.offset_ratio);
  };

  // Exhaustive coarse grid; the cost is multimodal in azimuth, so basin
  // capture comes before precision.
  double best_theta = 0.0, best_phi = 0.0;
  CostEval best;
  for (int jz = 0; jz < cfg.grid_zenith; ++jz) {
    const double theta = jz * dtheta;
    const int ncols = (jz == 0) ? 1 : cfg.grid_azimuth;  // pole row is one normal
    for (int ja = 0; ja < ncols; ++ja) {
      const double phi = ja * dphi;
      const CostEval c = eval(theta, phi);
      if (c.cost < best.cost) {
        best = c;
        best_theta = theta;
        best_phi = phi;
      }
    }
  }
  if (best.support == 0)
    throw UnsolvablePixelError("cost has empty support over the whole grid");
  if (cost_trace) cost_trace->push_back(best.cost);

  // Step-halving coordinate descent from the best cell.
  double step_phi = dphi;
  double step_theta = dtheta;
  for (int sweep = 0; sweep < cfg.refine_iters; ++sweep) {
    if (step_phi < cfg.refine_tol && step_theta < cfg.refine_tol) break;
    bool improved = false;
    const double phi_moves[2] = {best_phi + step_phi, best_phi - step_phi};
    for (double phi : phi_moves) {
      const CostEval c = eval(best_theta, fold_time(phi, 2.0 * kPi));
      if (c.cost < best.cost) {
        best = c;
        best_phi = fold_time(phi, 2.0 * kPi);
        improved = true;
        if (cost_trace) cost_trace->push_back(best.cost);
      }
    }
    const double theta_moves[2] = {best_theta + step_theta, best_theta - step_theta};
    for (double theta : theta_moves) {
      if (theta < 0.0 || theta > kPi / 2.0) continue;
      const CostEval c = eval(theta, best_phi);
      if (c.cost < best.cost) {
        best = c;
        best_theta = theta;
        improved = true;
        if (cost_trace) cost_trace->push_back(best.cost);
      }
    }
    if (!improved) {
      step_phi *= 0.5;
      step_theta *= 0.5;
    }
  }

  SolveResult result;
  result.normal = unit_from_spherical(best_theta, best_phi);
  result.cost = best.cost;
  result.support_count = best.support;
  return result;
}

namespace {

/// Events of one pixel bucketed into the cycles actually used.
struct PixelCycles {
  std::vector<std::vector<EventSample>> cycles;
};

/// Buckets stream events into per-pixel, per-used-cycle lists. Cycle c
/// covers [syncs[c], syncs[c+1]); the first and last recorded cycles are
/// skipped.
std::vector<PixelCycles> bucket_events(const EventStream& stream, int used_cycles) {
  const std::size_t pixels = static_cast<std::size_t>(stream.width) * stream.height;
  std::vector<PixelCycles> buckets(pixels);
  for (auto& b : buckets) b.cycles.resize(used_cycles);
  const auto& syncs = stream.cycle_syncs;
  for (const Event& ev : stream.events) {
    auto it = std::upper_bound(syncs.begin(), syncs.end(), ev.t);
    const int cycle = static_cast<int>(it - syncs.begin()) - 1;
    const int used = cycle - 1;  // shift past the discarded first cycle
    if (used < 0 || used >= used_cycles) continue;
    buckets[static_cast<std::size_t>(ev.y) * stream.width + ev.x]
        .cycles[used]
        .push_back({ev.t, ev.polarity});
  }
  return buckets;
}

}  // namespace

SolveMaps solve_pixelwise(const EventStream& stream,
                          const PixelThresholds& thresholds,
                          const LightTrajectory& traj,
                          const SolverConfig& cfg,
                          int average_cycles) {
  if (average_cycles < 1) throw ConfigError("need at least one cycle to average");
  if (stream.cycle_count() < average_cycles + 2)
    throw ConfigError("stream must carry at least K+2 cycles (first and last are discarded)");
  if (thresholds.width() != stream.width || thresholds.height() != stream.height)
    throw ConfigError("threshold map size does not match the stream");

  const double period = traj.period();
  const int n = cfg.profile_samples;

  SolveMaps maps;
  maps.normals = Image(stream.width, stream.height, 3, 0.0f);
  maps.cost = Image(stream.width, stream.height, 1, -1.0f);
  maps.labels = Image(stream.width, stream.height, 1, -1.0f);
  maps.stages = Image(stream.width, stream.height, 1, -1.0f);

  const auto buckets = bucket_events(stream, average_cycles);

  for (int y = 0; y < stream.height; ++y) {
    for (int x = 0; x < stream.width; ++x) {
      const PixelCycles& px = buckets[static_cast<std::size_t>(y) * stream.width + x];
      bool has_events = false;
      for (const auto& c : px.cycles) has_events |= !c.empty();
      if (!has_events || !thresholds.is_valid(x, y)) continue;

      try {
        const double hp = thresholds.hp(x, y);
        const double hn = thresholds.hn(x, y);
        std::vector<Profile> profiles;
        profiles.reserve(average_cycles);
        for (int c = 0; c < average_cycles; ++c)
          profiles.push_back(reconstruct_eip(px.cycles[c], hp, hn, period, n,
                                             stream.cycle_syncs[c + 1]));
        const Profile avg = average_profiles(profiles);
        const ProfilePeaks peaks = find_peaks(avg);

        const TemporalMask stage1 = mask_collapsed(peaks.t_top, peaks.t_bottom, period);
        SolveResult res = solve_normal(avg, stage1, traj, cfg);
        res.label = MaskLabel::Collapsed;
        res.stage = 1;

        const MaskLabel decision =
            select_mask(res.cost, peaks.t_top, peaks.t_bottom, cfg.mask, period);
        if (decision != MaskLabel::Collapsed) {
          try {
            const TemporalMask stage2 =
                decision == MaskLabel::Specular
                    ? mask_specular(peaks.t_top, peaks.t_bottom,
                                    cfg.mask.specular_margin, period)
                    : mask_cast(peaks.t_top, peaks.t_bottom,
                                cfg.mask.cast_margin, period);
            SolveResult res2 = solve_normal(avg, stage2, traj, cfg);
            res2.label = decision;
            res2.stage = 2;
            res = res2;
          } catch (const Error&) {
            // Second mask unusable for this pixel; the first fit stands.
          }
        }

        maps.normals.at(x, y, 0) = static_cast<float>(res.normal.x());
        maps.normals.at(x, y, 1) = static_cast<float>(res.normal.y());
        maps.normals.at(x, y, 2) = static_cast<float>(res.normal.z());
        maps.cost.at(x, y) = static_cast<float>(res.cost);
        maps.labels.at(x, y) = static_cast<float>(static_cast<int>(res.label));
        maps.stages.at(x, y) = static_cast<float>(res.stage);
      } catch (const Error&) {
        // Sentinel maps already hold the unsolved marker.
      }
    }
  }
  return maps;
}

Vec3 eventps_baseline(const std::vector<EventSample>& events,
                      double hp, double hn,
                      const LightTrajectory& traj) {
  if (events.size() < 2)
    throw AmbiguousNormalError("need at least two events with predecessors");

  Eigen::MatrixXd rows(static_cast<Eigen::Index>(events.size()) - 1, 3);
  Eigen::Index r = 0;
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (!(events[i].t > events[i - 1].t)) continue;
    const double h = events[i].polarity > 0 ? hp : hn;
    const Vec3 row = traj.direction(events[i].t) -
                     std::exp(h) * traj.direction(events[i - 1].t);
    rows.row(r++) = row.transpose();
  }
  if (r < 2) throw AmbiguousNormalError("fewer than two usable event pairs");
  rows.conservativeResize(r, 3);

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv(1) <= 1e-12 * std::max(sv(0), 1e-300))
    throw AmbiguousNormalError("event pair matrix has rank below 2");

  Vec3 n = svd.matrixV().col(2);
  if (n.z() < 0.0) n = -n;
  return n;
}

Image baseline_pixelwise(const EventStream& stream,
                         const PixelThresholds& thresholds,
                         const LightTrajectory& traj,
                         int average_cycles) {
  if (stream.cycle_count() < average_cycles + 2)
    throw ConfigError("stream must carry at least K+2 cycles (first and last are discarded)");

  Image normals(stream.width, stream.height, 3, 0.0f);
  const auto buckets = bucket_events(stream, average_cycles);
  for (int y = 0; y < stream.height; ++y) {
    for (int x = 0; x < stream.width; ++x) {
      const PixelCycles& px = buckets[static_cast<std::size_t>(y) * stream.width + x];
      std::vector<EventSample> all;
      for (const auto& c : px.cycles) all.insert(all.end(), c.begin(), c.end());
      if (all.size() < 3 || !thresholds.is_valid(x, y)) continue;
      try {
        const Vec3 n =
            eventps_baseline(all, thresholds.hp(x, y), thresholds.hn(x, y), traj);
        normals.at(x, y, 0) = static_cast<float>(n.x());
        normals.at(x, y, 1) = static_cast<float>(n.y());
        normals.at(x, y, 2) = static_cast<float>(n.z());
      } catch (const Error&) {
        // leave the sentinel
      }
    }
  }
  return normals;
}

Image apply_azimuth_offset(const Image& normal_map, double offset) {
  if (!(std::fabs(offset) < kPi))
    throw ConfigError("azimuth offset must satisfy |offset| < pi");
  if (normal_map.channels != 3)
    throw ConfigError("azimuth correction expects a 3-channel normal map");

  const double c = std::cos(offset);
  const double s = std::sin(offset);
  Image out = normal_map;
  for (int y = 0; y < out.height; ++y)
    for (int x = 0; x < out.width; ++x) {
      const float nx = normal_map.at(x, y, 0);
      const float ny = normal_map.at(x, y, 1);
      const float nz = normal_map.at(x, y, 2);
      if (nx == 0.0f && ny == 0.0f && nz == 0.0f) continue;
      out.at(x, y, 0) = static_cast<float>(c * nx - s * ny);
      out.at(x, y, 1) = static_cast<float>(s * nx + c * ny);
    }
  return out;
}

}  // namespace evps
