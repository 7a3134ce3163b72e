#pragma once

#include <vector>

#include <Eigen/Dense>

#include "evps/errors.hpp"

namespace evps {

using Vec3 = Eigen::Vector3d;

/// Camera looks along -z; visible surface normals have n_z > 0.
/// Zenith is measured from +z, azimuth about +z starting at +x.
Vec3 unit_from_spherical(double zenith, double azimuth);

struct Spherical {
  double zenith;
  double azimuth;
};

Spherical spherical_from_unit(const Vec3& v);

/// Folds t into [0, period).
double fold_time(double t, double period);

/// Forward (counter-clockwise in time) distance from a to b on the
/// circle of circumference `period`; result in [0, period).
double forward_distance(double a, double b, double period);

/// Directional light moving on the unit sphere with period T.
///
/// The circular kind traces
///   l(t) = (sin z cos(wt + p0), sin z sin(wt + p0), cos z), w = 2*pi/T,
/// and exposes the exact analytic derivative. The tabulated kind
/// interpolates sampled unit directions with spherical-linear segments
/// and differentiates by centered finite differences.
class LightTrajectory {
 public:
  /// zenith must lie strictly inside (0, pi/2): a zenith of pi/2 puts the
  /// whole path in the image plane and the profile no longer determines
  /// the normal uniquely.
  static LightTrajectory circular(double zenith, double period, double phase0 = 0.0);

  /// times are sample instants in [0, period); dirs are normalized on
  /// construction. Fewer than 3 samples is a configuration error.
  static LightTrajectory tabulated(std::vector<double> times,
                                   std::vector<Vec3> dirs,
                                   double period);

  Vec3 direction(double t) const;
  Vec3 derivative(double t) const;

  double period() const { return period_; }
  bool is_circular() const { return circular_; }
  double zenith() const { return zenith_; }
  double phase0() const { return phase0_; }

 private:
  LightTrajectory() = default;

  bool circular_ = true;
  double period_ = 1.0;
  double zenith_ = 0.0;
  double phase0_ = 0.0;
  std::vector<double> times_;
  std::vector<Vec3> dirs_;
};

}  // namespace evps
