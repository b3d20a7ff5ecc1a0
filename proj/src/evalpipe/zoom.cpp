#include "claw/evalpipe/zoom.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace claw::evalpipe {

Box zoom_crop(int width, int height, Point coarse, double tile_fraction) {
  if (tile_fraction <= 0.0 || tile_fraction > 1.0)
    throw std::invalid_argument("tile_fraction must be in (0, 1]");
  int w = static_cast<int>(std::lround(tile_fraction * width));
  int h = static_cast<int>(std::lround(tile_fraction * height));
  w = std::clamp(w, 1, width);
  h = std::clamp(h, 1, height);
  int x1 = std::clamp(coarse.x - w / 2, 0, width - w);
  int y1 = std::clamp(coarse.y - h / 2, 0, height - h);
  return {x1, y1, x1 + w, y1 + h};
}

Point remap_to_global(const Box& crop, Point local) {
  return {crop.x1 + std::clamp(local.x, 0, crop.width()),
          crop.y1 + std::clamp(local.y, 0, crop.height())};
}

Point to_local(const Box& crop, Point global) {
  return {std::clamp(global.x - crop.x1, 0, crop.width()),
          std::clamp(global.y - crop.y1, 0, crop.height())};
}

}  // namespace claw::evalpipe
