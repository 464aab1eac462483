#pragma once

#include <array>
#include <cstdint>

#include "ibf/cut.hpp"
#include "ibf/rng.hpp"
#include "ibf/tensor.hpp"

namespace ibf {

enum class AugMode { None, Translation, Rotation };

struct AugmentConfig {
    int delta = 0;                // translation amplitude, integer pixels
    double theta_r = 0.0;         // rotation amplitude, degrees
    bool rotation_enabled = false;
    int crop_width = 0, crop_height = 0; // divisible by 16
    bool identity_augment = true; // transform identity triplets too (crop-only when false)
    std::uint64_t seed = 1;

    void validate(int frame_height, int frame_width) const;
};

struct AugmentRecord {
    enum class Kind { Motion, Identity } kind = Kind::Motion;
    int base = 0; // first source frame (0-based); identity triplets use it three times
    AugMode mode = AugMode::None;
    int dx = 0, dy = 0;
    double theta = 0.0, cx = 0.0, cy = 0.0; // degrees; rotation center
    int crop_x = 0, crop_y = 0;
};

struct Triplet {
    Tensor<float> a, target, b;
    AugmentRecord rec;
};

// out(x) = f(x + (dx, dy)); reads outside the image are white.
Tensor<float> shift_frame(const Tensor<float>& f, int dx, int dy);

// out(x) = f(R_phi(x - c) + c), bilinear, white outside. Pixel centers sit on
// integer coordinates. phi == 0 is an exact copy.
Tensor<float> rotate_frame(const Tensor<float>& f, double phi_deg, double cx,
                           double cy);

// g(i, x) = f(i, x + (i - 1) * delta) for i = 0, 1, 2: the middle frame is a
// fixed point and the outer frames shift by opposite amounts.
std::array<Tensor<float>, 3> translate_triplet(const std::array<Tensor<float>, 3>& frames,
                                               int dx, int dy);

// g(i, x) = f(i, R_{(i-1) theta}(x - c) + c).
std::array<Tensor<float>, 3> rotate_triplet(const std::array<Tensor<float>, 3>& frames,
                                            double theta_deg, double cx, double cy);

// Draws uniformly from the pooled (n_f - 2) motion and n_f identity triplets,
// picks an augmentation mode (fair coin with rotation enabled), applies it,
// then crops all three frames at one shared random offset. Draw order per
// sample: pool index, mode coin, transform parameters, crop offset.
Triplet sample_triplet(const Cut& cut, const AugmentConfig& cfg, Rng& rng);

} // namespace ibf
