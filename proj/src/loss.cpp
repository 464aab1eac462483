#include "ibf/loss.hpp"

#include <cmath>

namespace ibf {

namespace {

// clamp(5x5 window sum of the feature plane), written to all channel planes.
// Summation order is du outer, dv inner, matching the weight definition;
// out-of-image samples are skipped (they contribute zero).
template <typename T>
void window_sum_clamp(const std::vector<T>& f, int h, int w, T w_min, T w_max,
                      Tensor<T>& out, int b) {
    for (int v = 0; v < h; ++v)
        for (int u = 0; u < w; ++u) {
            T s = 0;
            for (int du = -2; du <= 2; ++du) {
                const int uu = u + du;
                if (uu < 0 || uu >= w) continue;
                for (int dv = -2; dv <= 2; ++dv) {
                    const int vv = v + dv;
                    if (vv < 0 || vv >= h) continue;
                    s += f[static_cast<std::size_t>(vv) * w + uu];
                }
            }
            const T val = clamp_value(s, w_min, w_max);
            for (int c = 0; c < out.nc; ++c)
                out.at(b, c, v, u) = val;
        }
}

template <typename T>
void check_target(const Tensor<T>& target) {
    if (target.nc != 3)
        throw ConfigError("weight map: target must have 3 channels");
}

} // namespace

template <typename T>
Tensor<T> scan_weights(const Tensor<T>& target, T w_min, T w_max) {
    check_target(target);
    const int h = target.nv, w = target.nu;
    Tensor<T> out(target.nb, 3, h, w);
    std::vector<T> f(static_cast<std::size_t>(h) * w);
    for (int b = 0; b < target.nb; ++b) {
        const T* r = target.plane(b, 0);
        const T* g = target.plane(b, 1);
        const T* bl = target.plane(b, 2);
        for (std::size_t i = 0; i < f.size(); ++i)
            f[i] = T(1) - std::min(r[i], std::min(g[i], bl[i]));
        window_sum_clamp(f, h, w, w_min, w_max, out, b);
    }
    return out;
}

template <typename T>
Tensor<T> cell_weights(const Tensor<T>& target, T w_min, T w_max) {
    check_target(target);
    const int h = target.nv, w = target.nu;
    Tensor<T> out(target.nb, 3, h, w);
    std::vector<T> lum(static_cast<std::size_t>(h) * w);
    std::vector<T> lap(lum.size());
    for (int b = 0; b < target.nb; ++b) {
        const T* r = target.plane(b, 0);
        const T* g = target.plane(b, 1);
        const T* bl = target.plane(b, 2);
        for (std::size_t i = 0; i < lum.size(); ++i)
            lum[i] = T(100) * (T(0.299) * r[i] + T(0.587) * g[i] + T(0.114) * bl[i]);
        auto at = [&](int v, int u) -> T {
            if (v < 0 || v >= h || u < 0 || u >= w) return T(0);
            return lum[static_cast<std::size_t>(v) * w + u];
        };
        for (int v = 0; v < h; ++v)
            for (int u = 0; u < w; ++u)
                lap[static_cast<std::size_t>(v) * w + u] =
                    std::abs(at(v, u - 1) + at(v, u + 1) + at(v - 1, u) +
                             at(v + 1, u) - T(4) * at(v, u));
        window_sum_clamp(lap, h, w, w_min, w_max, out, b);
    }
    return out;
}

template <typename T>
Tensor<T> target_weights(const Tensor<T>& target, const WeightConfig& cfg) {
    if (!(cfg.w_min > 0.0f) || cfg.w_min > cfg.w_max)
        throw ConfigError("weight config requires 0 < w_min <= w_max");
    const T lo = static_cast<T>(cfg.w_min), hi = static_cast<T>(cfg.w_max);
    return cfg.mode == WeightMode::Scan ? scan_weights(target, lo, hi)
                                        : cell_weights(target, lo, hi);
}

template <typename T>
Objective<T> objective(const Tensor<T>& low, const Tensor<T>& high,
                       const Tensor<T>& target_full, const WeightConfig& cfg) {
    if (!high.same_shape(target_full))
        throw ConfigError("objective: high output and target differ in shape");
    Objective<T> obj;
    const Tensor<T> target_half = bilinear_down_half(target_full);
    if (!low.same_shape(target_half))
        throw ConfigError("objective: low output is not the half-scale shape");

    const Tensor<T> w_high = target_weights(target_full, cfg);
    const Tensor<T> w_low = target_weights(target_half, cfg);
    obj.loss_high = weighted_mse(high, target_full, w_high, &obj.grad_high, T(0.5));
    obj.loss_low = weighted_mse(low, target_half, w_low, &obj.grad_low, T(0.5));
    obj.value = (obj.loss_high + obj.loss_low) / T(2);
    return obj;
}

#define IBF_INSTANTIATE(T)                                                     \
    template Tensor<T> scan_weights(const Tensor<T>&, T, T);                   \
    template Tensor<T> cell_weights(const Tensor<T>&, T, T);                   \
    template Tensor<T> target_weights(const Tensor<T>&, const WeightConfig&);  \
    template Objective<T> objective(const Tensor<T>&, const Tensor<T>&,        \
                                    const Tensor<T>&, const WeightConfig&);

IBF_INSTANTIATE(float)
IBF_INSTANTIATE(double)
#undef IBF_INSTANTIATE

} // namespace ibf
