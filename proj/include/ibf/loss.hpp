#pragma once

#include "ibf/tensor.hpp"

namespace ibf {

enum class WeightMode { Scan, Cell };

struct WeightConfig {
    WeightMode mode = WeightMode::Scan;
    float w_min = 0.05f; // 1/20
    float w_max = 1.0f;
};

template <typename T>
inline T clamp_value(T x, T x_min, T x_max) {
    return std::min(std::max(x, x_min), x_max);
}

// Per-pixel loss weights for scanned line drawings: f = 1 - channel minimum,
// then w = clamp(5x5 window sum of f, w_min, w_max), broadcast to the three
// channel planes. Pixels outside the image contribute zero to the sum.
template <typename T>
Tensor<T> scan_weights(const Tensor<T>& target, T w_min, T w_max);

// Weights for painted cels: luminance scaled by 100, absolute 5-point
// Laplacian (zero beyond the borders), then the same clamped window sum.
template <typename T>
Tensor<T> cell_weights(const Tensor<T>& target, T w_min, T w_max);

template <typename T>
Tensor<T> target_weights(const Tensor<T>& target, const WeightConfig& cfg);

template <typename T>
struct Objective {
    T value;      // (loss_low + loss_high) / 2
    T loss_low, loss_high;
    Tensor<T> grad_low, grad_high;
};

// Weighted MSE on the high-res output against the target and on the low-res
// output against the half-scale target, averaged. Weight maps are recomputed
// from the (augmented) targets and are constants for the optimizer.
template <typename T>
Objective<T> objective(const Tensor<T>& low, const Tensor<T>& high,
                       const Tensor<T>& target_full, const WeightConfig& cfg);

} // namespace ibf
