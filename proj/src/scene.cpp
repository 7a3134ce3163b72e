#include "evps/scene.hpp"

#include <algorithm>
#include <cmath>

namespace evps {

namespace {
const Vec3 kViewDir(0.0, 0.0, 1.0);
}

ScenePreset preset_from_name(const std::string& name) {
  if (name == "diffuse") return ScenePreset::Diffuse;
  if (name == "glossy") return ScenePreset::Glossy;
  if (name == "pole") return ScenePreset::Pole;
  if (name == "two-tone" || name == "twotone") return ScenePreset::TwoTone;
  throw ConfigError("unknown scene preset: " + name);
}

std::string preset_name(ScenePreset preset) {
  switch (preset) {
    case ScenePreset::Diffuse: return "diffuse";
    case ScenePreset::Glossy: return "glossy";
    case ScenePreset::Pole: return "pole";
    case ScenePreset::TwoTone: return "two-tone";
  }
  return "?";
}

Vec3 SceneSpec::surface_point(int x, int y) const {
  const double cx = 0.5 * (width - 1);
  const double cy = 0.5 * (height - 1);
  const double radius = 0.45 * std::min(width, height);
  const double dx = x - cx;
  const double dy = y - cy;
  const double r2 = dx * dx + dy * dy;
  const double z2 = radius * radius - r2;
  return Vec3(x, y, z2 > 0.0 ? std::sqrt(z2) : 0.0);
}

Image SceneSpec::normal_map() const {
  Image img(width, height, 3, 0.0f);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      if (is_foreground(x, y)) {
        const Vec3& n = normals[idx(x, y)];
        img.at(x, y, 0) = static_cast<float>(n.x());
        img.at(x, y, 1) = static_cast<float>(n.y());
        img.at(x, y, 2) = static_cast<float>(n.z());
      }
  return img;
}

Image SceneSpec::albedo_map() const {
  Image img(width, height, 1, 0.0f);
  for (int y = 0; y < height; ++y)
    for (int x = 0; x < width; ++x)
      if (is_foreground(x, y)) img.at(x, y) = static_cast<float>(albedo[idx(x, y)]);
  return img;
}

SceneSpec make_sphere_scene(int resolution, ScenePreset preset) {
  if (resolution < 16) throw ConfigError("scene resolution must be at least 16");

  SceneSpec scene;
  scene.width = resolution;
  scene.height = resolution;
  const std::size_t count = static_cast<std::size_t>(resolution) * resolution;
  scene.foreground.assign(count, 0);
  scene.normals.assign(count, Vec3(0, 0, 1));
  scene.albedo.assign(count, 0.0);
  scene.specular_strength.assign(count, 0.0);
  scene.specular_exponent.assign(count, 1.0);

  const double cx = 0.5 * (resolution - 1);
  const double cy = 0.5 * (resolution - 1);
  const double radius = 0.45 * resolution;

  for (int y = 0; y < resolution; ++y) {
    for (int x = 0; x < resolution; ++x) {
      const double dx = x - cx;
      const double dy = y - cy;
      const double r2 = (dx * dx + dy * dy) / (radius * radius);
      if (r2 >= 1.0) continue;
      const std::size_t i = scene.idx(x, y);
      scene.foreground[i] = 1;
      scene.normals[i] = Vec3(dx / radius, dy / radius, std::sqrt(1.0 - r2));
      scene.albedo[i] = 1.0;
      switch (preset) {
        case ScenePreset::Diffuse:
        case ScenePreset::Pole:
          break;
        case ScenePreset::Glossy:
          scene.specular_strength[i] = 0.8;
          // Sharp coat: broad lobes leave the Lambertian swing dominant
          // and the highlight pair never tops the profile.
          scene.specular_exponent[i] = 1024.0;
          break;
        case ScenePreset::TwoTone:
          scene.albedo[i] = (y < cy) ? 0.9 : 0.4;
          break;
      }
    }
  }

  if (preset == ScenePreset::Pole) {
    Occluder pole;
    pole.cx = cx + 0.8 * radius;
    pole.cy = cy;
    pole.radius = std::max(1.5, 0.09 * radius);
    pole.base_z = 0.0;
    pole.height = 0.6 * radius + 0.75 * radius;  // clears the sphere surface below it
    scene.occluders.push_back(pole);
    // Pixels under the pole's footprint image the pole, not the sphere.
    for (int y = 0; y < resolution; ++y)
      for (int x = 0; x < resolution; ++x) {
        const double dx = x - pole.cx;
        const double dy = y - pole.cy;
        if (dx * dx + dy * dy <= pole.radius * pole.radius)
          scene.foreground[scene.idx(x, y)] = 0;
      }
  }

  return scene;
}

double occluder_visibility(const SceneSpec& scene, int x, int y, const Vec3& light) {
  if (scene.occluders.empty()) return 1.0;
  const Vec3 p = scene.surface_point(x, y);
  double vis = 1.0;
  for (const Occluder& occ : scene.occluders) {
    const double px = p.x() - occ.cx;
    const double py = p.y() - occ.cy;
    const double a = light.x() * light.x() + light.y() * light.y();
    double blocked = 0.0;
    if (a < 1e-16) {
      // Light straight overhead: blocked only under the footprint.
      blocked = (px * px + py * py <= occ.radius * occ.radius &&
                 p.z() < occ.base_z + occ.height)
                    ? 1.0
                    : 0.0;
    } else {
      const double b = 2.0 * (px * light.x() + py * light.y());
      const double c = px * px + py * py - occ.radius * occ.radius;
      // Closest approach of the ray to the cylinder axis, in the plane.
      const double u_star = -b / (2.0 * a);
      const double clearance2 = c + b * b / (4.0 * a) + occ.radius * occ.radius;
      const double clearance = std::sqrt(std::max(clearance2, 0.0));
      if (u_star > 0.0) {
        const double z_at = p.z() + u_star * light.z();
        const bool z_in = z_at >= occ.base_z && z_at <= occ.base_z + occ.height;
        if (z_in) {
          if (occ.edge_width > 0.0) {
            const double f =
                std::clamp((clearance - occ.radius) / occ.edge_width + 0.5, 0.0, 1.0);
            blocked = 1.0 - f;
          } else {
            blocked = clearance <= occ.radius ? 1.0 : 0.0;
          }
        }
      }
    }
    vis = std::min(vis, 1.0 - blocked);
  }
  return vis;
}

RadianceTerms render_terms(const SceneSpec& scene, int x, int y,
                           const LightTrajectory& traj, double t) {
  if (!scene.is_foreground(x, y))
    throw DomainError("render_radiance: background pixel (" + std::to_string(x) + "," +
                      std::to_string(y) + ")");
  const std::size_t i = scene.idx(x, y);
  const Vec3 l = traj.direction(t);
  const Vec3& n = scene.normals[i];

  RadianceTerms terms;
  terms.visibility = occluder_visibility(scene, x, y, l);
  terms.offset = scene.offset_light;
  terms.diffuse = scene.light_power * scene.albedo[i] * std::max(n.dot(l), 0.0) *
                  terms.visibility;
  const double ks = scene.specular_strength[i];
  if (ks > 0.0) {
    const Vec3 h = (l + kViewDir).normalized();
    const double hn = std::max(h.dot(n), 0.0);
    terms.specular = scene.light_power * ks *
                     std::pow(hn, scene.specular_exponent[i]) * terms.visibility;
  }
  return terms;
}

double render_radiance(const SceneSpec& scene, int x, int y,
                       const LightTrajectory& traj, double t) {
  const RadianceTerms terms = render_terms(scene, x, y, traj, t);
  return terms.diffuse + terms.specular + terms.offset;
}

}  // namespace evps
