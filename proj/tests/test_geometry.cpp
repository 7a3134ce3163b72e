#include <doctest.h>

#include <cmath>
#include <random>

#include "evps/geometry.hpp"
#include "test_util.hpp"

using namespace evps;
using evps::test::kPi;

TEST_CASE("circular trajectory matches its closed form") {
  const auto traj = LightTrajectory::circular(kPi / 4.0, 1.0, 0.0);

  const Vec3 l0 = traj.direction(0.0);
  CHECK(l0.x() == doctest::Approx(std::sqrt(2.0) / 2.0));
  CHECK(l0.y() == doctest::Approx(0.0));
  CHECK(l0.z() == doctest::Approx(std::sqrt(2.0) / 2.0));

  const Vec3 d0 = traj.derivative(0.0);
  CHECK(d0.x() == doctest::Approx(0.0));
  CHECK(d0.y() == doctest::Approx(std::sqrt(2.0) / 2.0 * 2.0 * kPi));
  CHECK(d0.z() == doctest::Approx(0.0));
}

TEST_CASE("circular trajectory stays on the unit sphere") {
  const auto traj = LightTrajectory::circular(1.1, 0.7, 2.0);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const double t = dist(rng);
    CHECK(std::fabs(traj.direction(t).norm() - 1.0) < 1e-12);
  }
}

TEST_CASE("trajectory is periodic") {
  const auto traj = LightTrajectory::circular(0.6, 0.25, 0.3);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> dist(0.0, 5.0);
  for (int i = 0; i < 200; ++i) {
    const double t = dist(rng);
    CHECK((traj.direction(t + 0.25) - traj.direction(t)).norm() < 1e-9);
  }
}

TEST_CASE("analytic derivative agrees with centered differences") {
  const auto traj = LightTrajectory::circular(kPi / 3.0, 1.0, 0.5);
  for (double t : {0.0, 0.13, 0.49, 0.77, 0.995}) {
    const double h = 1e-6;
    const Vec3 fd = (traj.direction(t + h) - traj.direction(t - h)) / (2.0 * h);
    CHECK((fd - traj.derivative(t)).norm() < 1e-4);
  }
}

TEST_CASE("degenerate circular zeniths are rejected") {
  CHECK_THROWS_AS(LightTrajectory::circular(kPi / 2.0, 1.0), ConfigError);
  CHECK_THROWS_AS(LightTrajectory::circular(0.0, 1.0), ConfigError);
  CHECK_THROWS_AS(LightTrajectory::circular(0.5, -1.0), ConfigError);
}

TEST_CASE("tabulated trajectory interpolates a circle") {
  const double zenith = kPi / 4.0;
  std::vector<double> times;
  std::vector<Vec3> dirs;
  const int n = 64;
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / n;
    times.push_back(t);
    dirs.push_back(unit_from_spherical(zenith, 2.0 * kPi * t));
  }
  const auto tab = LightTrajectory::tabulated(times, dirs, 1.0);
  const auto ref = LightTrajectory::circular(zenith, 1.0, 0.0);

  std::mt19937 rng(3);
  std::uniform_real_distribution<double> dist(0.0, 2.0);
  for (int i = 0; i < 200; ++i) {
    const double t = dist(rng);
    CHECK(std::fabs(tab.direction(t).norm() - 1.0) < 1e-12);
    CHECK((tab.direction(t) - ref.direction(t)).norm() < 2e-3);
  }
  // Finite-difference derivative tracks the analytic one to grid accuracy.
  CHECK((tab.derivative(0.37) - ref.derivative(0.37)).norm() < 0.05);
}

TEST_CASE("tabulated trajectory needs at least three samples") {
  std::vector<double> times{0.0, 0.5};
  std::vector<Vec3> dirs{Vec3(1, 0, 0), Vec3(0, 1, 0)};
  CHECK_THROWS_AS(LightTrajectory::tabulated(times, dirs, 1.0), ConfigError);
}

TEST_CASE("spherical conversions round trip") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> zen(0.01, kPi / 2.0 - 0.01);
  std::uniform_real_distribution<double> azi(0.0, 2.0 * kPi);
  for (int i = 0; i < 100; ++i) {
    const double theta = zen(rng);
    const double phi = azi(rng);
    const Vec3 v = unit_from_spherical(theta, phi);
    CHECK(std::fabs(v.norm() - 1.0) < 1e-12);
    const Spherical s = spherical_from_unit(v);
    CHECK(s.zenith == doctest::Approx(theta).epsilon(1e-9));
    CHECK(s.azimuth == doctest::Approx(phi).epsilon(1e-9));
  }
}

TEST_CASE("time folding") {
  CHECK(fold_time(1.25, 1.0) == doctest::Approx(0.25));
  CHECK(fold_time(-0.25, 1.0) == doctest::Approx(0.75));
  CHECK(fold_time(3.0, 1.0) == doctest::Approx(0.0));
  CHECK(forward_distance(0.1, 0.4, 1.0) == doctest::Approx(0.3));
  CHECK(forward_distance(0.4, 0.1, 1.0) == doctest::Approx(0.7));
  CHECK(forward_distance(0.25, 0.25, 1.0) == doctest::Approx(0.0));
}
