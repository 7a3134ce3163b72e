#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include "evps/scene.hpp"
#include "test_util.hpp"

using namespace evps;
using evps::test::kPi;

namespace {

SceneSpec one_pixel_scene(const Vec3& normal, double albedo, double ks,
                          double alpha, double offset) {
  SceneSpec scene;
  scene.width = 1;
  scene.height = 1;
  scene.offset_light = offset;
  scene.foreground = {1};
  scene.normals = {normal};
  scene.albedo = {albedo};
  scene.specular_strength = {ks};
  scene.specular_exponent = {alpha};
  return scene;
}

}  // namespace

TEST_CASE("sphere scene geometry") {
  const SceneSpec scene = make_sphere_scene(64, ScenePreset::Diffuse);
  const int cx = 31, cy = 31;  // nearest pixel to the apex
  CHECK(scene.is_foreground(cx, cy));
  const Vec3 apex = scene.normals[scene.idx(cx, cy)];
  CHECK(apex.z() == doctest::Approx(1.0).epsilon(1e-3));

  for (int y = 0; y < scene.height; ++y)
    for (int x = 0; x < scene.width; ++x)
      if (scene.is_foreground(x, y))
        CHECK(std::fabs(scene.normals[scene.idx(x, y)].norm() - 1.0) < 1e-9);
}

TEST_CASE("two-tone preset carries exactly two albedos") {
  const SceneSpec scene = make_sphere_scene(64, ScenePreset::TwoTone);
  std::set<double> values;
  for (int y = 0; y < scene.height; ++y)
    for (int x = 0; x < scene.width; ++x)
      if (scene.is_foreground(x, y)) values.insert(scene.albedo[scene.idx(x, y)]);
  CHECK(values.size() == 2);
  CHECK(values.count(0.9) == 1);
  CHECK(values.count(0.4) == 1);
}

TEST_CASE("small resolutions are rejected") {
  CHECK_THROWS_AS(make_sphere_scene(8, ScenePreset::Diffuse), ConfigError);
}

TEST_CASE("radiance of a lit Lambertian point") {
  // n.l(0) = 0.5 for this normal under a 45-degree circular light.
  const auto traj = LightTrajectory::circular(kPi / 4.0, 1.0, 0.0);
  const Vec3 n = unit_from_spherical(kPi / 4.0, kPi / 2.0);
  const SceneSpec scene = one_pixel_scene(n, 1.0, 0.0, 1.0, 0.1);
  CHECK(n.dot(traj.direction(0.0)) == doctest::Approx(0.5));
  CHECK(render_radiance(scene, 0, 0, traj, 0.0) == doctest::Approx(0.6));
}

TEST_CASE("attached shadow clamps to the offset") {
  const auto traj = LightTrajectory::circular(kPi / 4.0, 1.0, 0.0);
  const Vec3 n = unit_from_spherical(kPi / 3.0, kPi);  // faces away at t = 0
  CHECK(n.dot(traj.direction(0.0)) < 0.0);
  const SceneSpec scene = one_pixel_scene(n, 1.0, 0.0, 1.0, 0.3);
  CHECK(render_radiance(scene, 0, 0, traj, 0.0) == doctest::Approx(0.3));
}

TEST_CASE("mirror configuration adds the full specular strength") {
  // Tabulated trajectory passing straight through the view axis.
  std::vector<double> times{0.0, 0.25, 0.5, 0.75};
  std::vector<Vec3> dirs{Vec3(0, 0, 1), Vec3(1, 0, 1).normalized(),
                         Vec3(1, 0, 0.2).normalized(), Vec3(0, 1, 1).normalized()};
  const auto traj = LightTrajectory::tabulated(times, dirs, 1.0);
  const double ks = 0.8, rho = 0.7, offset = 0.05, alpha = 64.0;
  const SceneSpec scene = one_pixel_scene(Vec3(0, 0, 1), rho, ks, alpha, offset);
  // n = l = v: half vector equals the normal.
  CHECK(render_radiance(scene, 0, 0, traj, 0.0) ==
        doctest::Approx(rho + ks + offset));
}

TEST_CASE("radiance never falls below the offset") {
  const auto traj = LightTrajectory::circular(kPi / 4.0, 1.0, 0.0);
  const SceneSpec scene = make_sphere_scene(32, ScenePreset::Glossy);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> dist(0.0, 1.0);
  SceneSpec offset_scene = scene;
  offset_scene.offset_light = 0.2;
  for (int i = 0; i < 500; ++i) {
    const int x = static_cast<int>(dist(rng) * 32);
    const int y = static_cast<int>(dist(rng) * 32);
    if (x >= 32 || y >= 32 || !scene.is_foreground(x, y)) continue;
    CHECK(render_radiance(offset_scene, x, y, traj, dist(rng)) >= 0.2);
  }
}

TEST_CASE("radiance is linear in albedo without specular or offset") {
  const auto traj = LightTrajectory::circular(kPi / 4.0, 1.0, 0.0);
  const Vec3 n = unit_from_spherical(0.4, 1.3);
  for (double t : {0.0, 0.21, 0.68}) {
    const SceneSpec a = one_pixel_scene(n, 0.25, 0.0, 1.0, 0.0);
    const SceneSpec b = one_pixel_scene(n, 1.0, 0.0, 1.0, 0.0);
    const double la = render_radiance(a, 0, 0, traj, t);
    const double lb = render_radiance(b, 0, 0, traj, t);
    CHECK(la / 0.25 == doctest::Approx(lb / 1.0).epsilon(1e-12));
  }
}

TEST_CASE("background pixels are a domain error") {
  const SceneSpec scene = make_sphere_scene(32, ScenePreset::Diffuse);
  const auto traj = LightTrajectory::circular(kPi / 4.0, 1.0, 0.0);
  CHECK_FALSE(scene.is_foreground(0, 0));
  CHECK_THROWS_AS(render_radiance(scene, 0, 0, traj, 0.0), DomainError);
}

TEST_CASE("pole visibility switches cleanly and periodically") {
  const SceneSpec scene = make_sphere_scene(64, ScenePreset::Pole);
  REQUIRE(scene.occluders.size() == 1);
  const auto traj = LightTrajectory::circular(kPi / 4.0, 1.0, 0.0);

  // A pixel just inward of the pole crosses the shadow once per cycle.
  const int px = static_cast<int>(scene.occluders[0].cx - scene.occluders[0].radius - 3);
  const int py = static_cast<int>(scene.occluders[0].cy);
  REQUIRE(scene.is_foreground(px, py));

  int switches = 0;
  double prev = occluder_visibility(scene, px, py, traj.direction(0.0));
  bool saw_shadow = prev == 0.0;
  const int n = 4096;
  for (int i = 1; i <= n; ++i) {
    const double v = occluder_visibility(scene, px, py, traj.direction(i / static_cast<double>(n)));
    CHECK((v == 0.0 || v == 1.0));
    if (v != prev) ++switches;
    if (v == 0.0) saw_shadow = true;
    prev = v;
  }
  CHECK(saw_shadow);
  CHECK(switches == 2);  // one entry, one exit (cycle ends where it began)
  CHECK(occluder_visibility(scene, px, py, traj.direction(0.25)) ==
        occluder_visibility(scene, px, py, traj.direction(1.25)));
}
