#include "evps/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "evps/errors.hpp"

namespace evps {

namespace {
constexpr double kRadToDeg = 57.29577951308232;

bool has_unit_normal(const Image& img, int x, int y) {
  const double nx = img.at(x, y, 0);
  const double ny = img.at(x, y, 1);
  const double nz = img.at(x, y, 2);
  const double norm2 = nx * nx + ny * ny + nz * nz;
  return norm2 > 0.25;  // sentinel normals are zero; valid ones are unit
}
}  // namespace

MaeReport evaluate_mae(const Image& result, const Image& truth,
                       const Image* foreground) {
  if (result.width != truth.width || result.height != truth.height)
    throw ConfigError("result and truth maps differ in size");
  if (result.channels != 3 || truth.channels != 3)
    throw ConfigError("normal maps must have 3 channels");
  if (foreground &&
      (foreground->width != truth.width || foreground->height != truth.height))
    throw ConfigError("foreground mask size does not match the maps");

  MaeReport report;
  report.error_map = Image(truth.width, truth.height, 1, -1.0f);

  double sum = 0.0;
  long foreground_count = 0;
  for (int y = 0; y < truth.height; ++y) {
    for (int x = 0; x < truth.width; ++x) {
      const bool fg = foreground ? foreground->at(x, y) != 0.0f
                                 : has_unit_normal(truth, x, y);
      if (!fg) continue;
      ++foreground_count;
      if (!has_unit_normal(result, x, y)) {
        ++report.sentinels;
        continue;
      }
      double dot = 0.0;
      for (int c = 0; c < 3; ++c)
        dot += static_cast<double>(result.at(x, y, c)) * truth.at(x, y, c);
      dot = std::clamp(dot, -1.0, 1.0);
      const double err = std::acos(dot) * kRadToDeg;
      report.error_map.at(x, y) = static_cast<float>(err);
      sum += err;
      ++report.evaluated;
    }
  }
  if (foreground_count == 0) throw EmptyMaskError("evaluation mask selects no pixel");
  report.mae_deg = report.evaluated > 0 ? sum / report.evaluated : 0.0;
  return report;
}

}  // namespace evps
