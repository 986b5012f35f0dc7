#pragma once

#include <string>
#include <vector>

#include "hppseg/pipeline.hpp"
#include "hppseg/raster.hpp"

namespace hppseg::io {

// Sorted image files (.png/.jpg/.jpeg) in a directory.
std::vector<std::string> list_frame_files(const std::string& dir);

Image load_image(const std::string& path);

// Loads every frame in the directory; throws (naming the offending file)
// when sizes are inconsistent or nothing readable is found.
FrameSequence load_frame_dir(const std::string& dir);

void save_image_png(const std::string& path, const Image& img);

// 8-bit PNG with value = round(255 * p), clamped.
void save_mask_png(const std::string& path, const SoftMask& mask);

SoftMask load_mask_png(const std::string& path);  // values / 255

BinaryMask load_binary_mask(const std::string& path);  // nonzero -> 1

void save_trimap_png(const std::string& path, const Trimap& trimap);

void save_frames(const std::string& dir, const FrameSequence& video);

}  // namespace hppseg::io
