#pragma once

#include <string>
#include <vector>

#include "evps/geometry.hpp"
#include "evps/image.hpp"

namespace evps {

/// Vertical cylinder blocking the light path. Axis is parallel to the
/// view axis; footprint center is in pixel units. edge_width > 0 widens
/// the shadow boundary into a linear transition band of that many pixels
/// of ray clearance, approximating the finite footprint of a real pixel;
/// 0 keeps the boundary hard.
struct Occluder {
  double cx = 0.0;
  double cy = 0.0;
  double radius = 1.0;
  double base_z = 0.0;
  double height = 1.0;
  double edge_width = 0.0;
};

enum class ScenePreset { Diffuse, Glossy, Pole, TwoTone };

ScenePreset preset_from_name(const std::string& name);
std::string preset_name(ScenePreset preset);

/// Synthetic ground-truth scene under an orthographic camera at +z.
/// Radiance of a foreground pixel under light direction l is
///   L = s * rho * max(n.l, 0) * V + s * ks * max(h.n, 0)^alpha * V + L_eps,
/// with h the half vector between l and the view direction and V the
/// occluder visibility.
struct SceneSpec {
  int width = 0;
  int height = 0;
  double light_power = 1.0;   // s
  double offset_light = 0.0;  // L_eps, radiance units
  std::vector<uint8_t> foreground;
  std::vector<Vec3> normals;
  std::vector<double> albedo;
  std::vector<double> specular_strength;  // ks
  std::vector<double> specular_exponent;  // alpha
  std::vector<Occluder> occluders;

  std::size_t idx(int x, int y) const { return static_cast<std::size_t>(y) * width + x; }
  bool is_foreground(int x, int y) const { return foreground[idx(x, y)] != 0; }

  /// World position of the surface point seen by (x, y); z from the
  /// orthographic height field (0 on the background plane).
  Vec3 surface_point(int x, int y) const;

  Image normal_map() const;
  Image albedo_map() const;
};

/// Orthographic sphere centered in a resolution x resolution frame,
/// radius 0.45 * resolution. Presets:
///   diffuse  - unit albedo, no specular lobe
///   glossy   - diffuse plus a sharp specular lobe (ks 0.8)
///   pole     - diffuse plus one cylinder occluder at the sphere's edge
///   two-tone - albedo 0.9 on the top half, 0.4 on the bottom half
SceneSpec make_sphere_scene(int resolution, ScenePreset preset);

struct RadianceTerms {
  double diffuse = 0.0;    // s * rho * max(n.l, 0) * V
  double specular = 0.0;   // s * ks * max(h.n, 0)^alpha * V
  double offset = 0.0;     // L_eps
  double visibility = 1.0; // V
};

/// Cast-shadow visibility of pixel (x, y) toward light direction l.
/// 1 when the ray clears every occluder, 0 when blocked; fractional only
/// inside an occluder's edge transition band.
double occluder_visibility(const SceneSpec& scene, int x, int y, const Vec3& light);

RadianceTerms render_terms(const SceneSpec& scene, int x, int y,
                           const LightTrajectory& traj, double t);

/// Radiance at pixel (x, y) and time t. Background pixels are a domain
/// error.
double render_radiance(const SceneSpec& scene, int x, int y,
                       const LightTrajectory& traj, double t);

}  // namespace evps
