#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ibf/cut.hpp"
#include "ibf/tensor.hpp"

namespace ibf {

// Decode a PNG to a (1, 3, H, W) tensor in [0, 1]. Grayscale and paletted
// images are promoted to RGB, alpha is composited over white, 16-bit samples
// are truncated to 8-bit semantics.
Tensor<float> load_png(const std::string& path);

// Encode batch item `b` as an 8-bit RGB PNG: byte = round(clamp01(v) * 255),
// half rounded up.
void save_frame(const Tensor<float>& t, const std::string& path, int b = 0);

void save_png_gray(const std::string& path, const std::vector<std::uint8_t>& pixels,
                   int width, int height);

// Load every *.png in a directory, ordered lexicographically by filename.
// Requires at least 2 frames, all with identical dimensions.
Cut load_cut(const std::string& dir);

inline int round_up16(int n) { return (n + 15) / 16 * 16; }

} // namespace ibf
