#pragma once

#include "claw/evalpipe/types.hpp"

namespace claw::evalpipe {

// The f·W × f·H rectangle centered on the coarse point, translated minimally
// so it lies fully inside the image. f ∈ (0, 1]; f = 1 is the full image.
Box zoom_crop(int width, int height, Point coarse, double tile_fraction);

// Crop-local -> global pixel coordinates (local clamped into the crop first),
// and the exact inverse for points inside the crop.
Point remap_to_global(const Box& crop, Point local);
Point to_local(const Box& crop, Point global);

}  // namespace claw::evalpipe
