#include "evps/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace evps {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kDerivativeStep = 1e-6;  // seconds, tabulated kind only
}  // namespace

Vec3 unit_from_spherical(double zenith, double azimuth) {
  const double sz = std::sin(zenith);
  return Vec3(sz * std::cos(azimuth), sz * std::sin(azimuth), std::cos(zenith));
}

Spherical spherical_from_unit(const Vec3& v) {
  Spherical s;
  s.zenith = std::acos(std::clamp(v.z(), -1.0, 1.0));
  s.azimuth = std::atan2(v.y(), v.x());
  if (s.azimuth < 0.0) s.azimuth += 2.0 * kPi;
  return s;
}

double fold_time(double t, double period) {
  double u = std::fmod(t, period);
  if (u < 0.0) u += period;
  if (u >= period) u = 0.0;  // guards fmod landing exactly on the period
  return u;
}

double forward_distance(double a, double b, double period) {
  return fold_time(b - a, period);
}

LightTrajectory LightTrajectory::circular(double zenith, double period, double phase0) {
  if (!(zenith > 0.0 && zenith < kPi / 2.0))
    throw ConfigError("circular trajectory zenith must lie in (0, pi/2)");
  if (!(period > 0.0)) throw ConfigError("trajectory period must be positive");
  LightTrajectory traj;
  traj.circular_ = true;
  traj.zenith_ = zenith;
  traj.period_ = period;
  traj.phase0_ = phase0;
  return traj;
}

LightTrajectory LightTrajectory::tabulated(std::vector<double> times,
                                           std::vector<Vec3> dirs,
                                           double period) {
  if (times.size() < 3)
    throw ConfigError("tabulated trajectory needs at least 3 samples");
  if (times.size() != dirs.size())
    throw ConfigError("tabulated trajectory times and directions differ in length");
  if (!(period > 0.0)) throw ConfigError("trajectory period must be positive");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (times[i] < 0.0 || times[i] >= period)
      throw ConfigError("tabulated sample times must lie in [0, period)");
    if (i > 0 && times[i] <= times[i - 1])
      throw ConfigError("tabulated sample times must be strictly increasing");
    const double norm = dirs[i].norm();
    if (norm <= 0.0) throw ConfigError("tabulated direction has zero norm");
    dirs[i] /= norm;
  }
  LightTrajectory traj;
  traj.circular_ = false;
  traj.period_ = period;
  traj.times_ = std::move(times);
  traj.dirs_ = std::move(dirs);
  return traj;
}

Vec3 LightTrajectory::direction(double t) const {
  if (circular_) {
    const double phase = 2.0 * kPi * t / period_ + phase0_;
    const double sz = std::sin(zenith_);
    return Vec3(sz * std::cos(phase), sz * std::sin(phase), std::cos(zenith_));
  }

  const double u = fold_time(t, period_);
  // Bracketing samples on the circle; segment from the last back to the
  // first spans the cycle boundary.
  auto it = std::upper_bound(times_.begin(), times_.end(), u);
  std::size_t next = (it == times_.end()) ? 0 : static_cast<std::size_t>(it - times_.begin());
  std::size_t prev = (next == 0) ? times_.size() - 1 : next - 1;

  double span = times_[next] - times_[prev];
  double local = u - times_[prev];
  if (span <= 0.0) {  // wrapped segment
    span += period_;
    if (local < 0.0) local += period_;
  }
  const double f = local / span;

  const Vec3& a = dirs_[prev];
  const Vec3& b = dirs_[next];
  const double cos_omega = std::clamp(a.dot(b), -1.0, 1.0);
  const double omega = std::acos(cos_omega);
  Vec3 out;
  if (omega < 1e-9) {
    out = (1.0 - f) * a + f * b;
  } else {
    const double denom = std::sin(omega);
    out = (std::sin((1.0 - f) * omega) * a + std::sin(f * omega) * b) / denom;
  }
  return out.normalized();
}

Vec3 LightTrajectory::derivative(double t) const {
  if (circular_) {
    const double w = 2.0 * kPi / period_;
    const double phase = w * t + phase0_;
    const double sz = std::sin(zenith_);
    return Vec3(-sz * w * std::sin(phase), sz * w * std::cos(phase), 0.0);
  }
  const double h = kDerivativeStep;
  return (direction(t + h) - direction(t - h)) / (2.0 * h);
}

}  // namespace evps
