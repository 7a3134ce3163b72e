#pragma once

#include "evps/image.hpp"

namespace evps {

struct MaeReport {
  double mae_deg = 0.0;  // mean angular error over evaluated pixels
  long evaluated = 0;    // foreground pixels with a usable result normal
  long sentinels = 0;    // foreground pixels the solver left unsolved
  Image error_map;       // per-pixel error in degrees; -1 where not evaluated
};

/// Angular comparison of two normal maps. Per pixel the error is
/// acos(clamp(n . n_gt, -1, 1)) in degrees. Foreground comes from the
/// mask when given (nonzero = evaluate), else from truth pixels with a
/// nonzero normal. Result pixels without a unit normal count as
/// sentinels and are reported, not averaged. An empty foreground is an
/// error.
MaeReport evaluate_mae(const Image& result, const Image& truth,
                       const Image* foreground = nullptr);

}  // namespace evps
