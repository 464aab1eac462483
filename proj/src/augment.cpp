#include "ibf/augment.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

namespace ibf {

namespace {
constexpr float kWhite = 1.0f;
constexpr double kDegToRad = 0.017453292519943295;
} // namespace

void AugmentConfig::validate(int frame_height, int frame_width) const {
    if (crop_width <= 0 || crop_height <= 0 ||
        crop_width % 16 != 0 || crop_height % 16 != 0)
        throw ConfigError("crop size must be positive and divisible by 16, got " +
                          std::to_string(crop_width) + "x" + std::to_string(crop_height));
    if (crop_width > frame_width || crop_height > frame_height)
        throw ConfigError("crop " + std::to_string(crop_width) + "x" +
                          std::to_string(crop_height) + " exceeds frame " +
                          std::to_string(frame_width) + "x" + std::to_string(frame_height));
    if (delta < 0) throw ConfigError("delta must be >= 0");
    if (theta_r < 0) throw ConfigError("theta_r must be >= 0");
}

Tensor<float> shift_frame(const Tensor<float>& f, int dx, int dy) {
    Tensor<float> out(f.nb, f.nc, f.nv, f.nu);
    for (int b = 0; b < f.nb; ++b)
        for (int c = 0; c < f.nc; ++c) {
            const float* src = f.plane(b, c);
            float* dst = out.plane(b, c);
            for (int v = 0; v < f.nv; ++v) {
                float* drow = dst + static_cast<std::size_t>(v) * f.nu;
                const int sv = v + dy;
                if (sv < 0 || sv >= f.nv) {
                    std::fill(drow, drow + f.nu, kWhite);
                    continue;
                }
                const float* srow = src + static_cast<std::size_t>(sv) * f.nu;
                const int lo = std::clamp(-dx, 0, f.nu);
                const int hi = std::clamp(f.nu - dx, 0, f.nu);
                if (lo > 0) std::fill(drow, drow + lo, kWhite);
                if (hi < f.nu) std::fill(drow + std::max(lo, hi), drow + f.nu, kWhite);
                if (hi > lo)
                    std::memcpy(drow + lo, srow + lo + dx,
                                static_cast<std::size_t>(hi - lo) * sizeof(float));
            }
        }
    return out;
}

namespace {

float sample_bilinear_white(const float* plane, int h, int w, double sx, double sy) {
    const int u0 = static_cast<int>(std::floor(sx));
    const int v0 = static_cast<int>(std::floor(sy));
    const float fu = static_cast<float>(sx - u0);
    const float fv = static_cast<float>(sy - v0);
    auto tap = [&](int v, int u) -> float {
        if (v < 0 || v >= h || u < 0 || u >= w) return kWhite;
        return plane[static_cast<std::size_t>(v) * w + u];
    };
    const float top = (1.0f - fu) * tap(v0, u0) + fu * tap(v0, u0 + 1);
    const float bot = (1.0f - fu) * tap(v0 + 1, u0) + fu * tap(v0 + 1, u0 + 1);
    return (1.0f - fv) * top + fv * bot;
}

} // namespace

Tensor<float> rotate_frame(const Tensor<float>& f, double phi_deg, double cx,
                           double cy) {
    if (phi_deg == 0.0) return f;
    const double phi = phi_deg * kDegToRad;
    const double cphi = std::cos(phi), sphi = std::sin(phi);
    Tensor<float> out(f.nb, f.nc, f.nv, f.nu);
    for (int b = 0; b < f.nb; ++b)
        for (int c = 0; c < f.nc; ++c) {
            const float* src = f.plane(b, c);
            float* dst = out.plane(b, c);
            for (int v = 0; v < f.nv; ++v) {
                const double ry = v - cy;
                for (int u = 0; u < f.nu; ++u) {
                    const double rx = u - cx;
                    const double sx = cx + cphi * rx - sphi * ry;
                    const double sy = cy + sphi * rx + cphi * ry;
                    dst[static_cast<std::size_t>(v) * f.nu + u] =
                        sample_bilinear_white(src, f.nv, f.nu, sx, sy);
                }
            }
        }
    return out;
}

std::array<Tensor<float>, 3> translate_triplet(const std::array<Tensor<float>, 3>& frames,
                                               int dx, int dy) {
    std::array<Tensor<float>, 3> out;
    for (int i = 0; i < 3; ++i)
        out[i] = shift_frame(frames[i], (i - 1) * dx, (i - 1) * dy);
    return out;
}

std::array<Tensor<float>, 3> rotate_triplet(const std::array<Tensor<float>, 3>& frames,
                                            double theta_deg, double cx, double cy) {
    std::array<Tensor<float>, 3> out;
    for (int i = 0; i < 3; ++i)
        out[i] = rotate_frame(frames[i], (i - 1) * theta_deg, cx, cy);
    return out;
}

Triplet sample_triplet(const Cut& cut, const AugmentConfig& cfg, Rng& rng) {
    if (cut.nf < 3)
        throw ConfigError("cut has " + std::to_string(cut.nf) +
                          " frames; sampling triplets needs at least 3");
    cfg.validate(cut.height, cut.width);

    Triplet t;
    AugmentRecord& rec = t.rec;

    const int motion = cut.nf - 2;
    const int pool = motion + cut.nf;
    const int idx = static_cast<int>(rng.below(static_cast<std::uint64_t>(pool)));
    std::array<int, 3> src;
    if (idx < motion) {
        rec.kind = AugmentRecord::Kind::Motion;
        rec.base = idx;
        src = {idx, idx + 1, idx + 2};
    } else {
        rec.kind = AugmentRecord::Kind::Identity;
        rec.base = idx - motion;
        src = {rec.base, rec.base, rec.base};
    }

    const bool augment_this =
        rec.kind == AugmentRecord::Kind::Motion || cfg.identity_augment;
    if (augment_this) {
        rec.mode = AugMode::Translation;
        if (cfg.rotation_enabled && rng.below(2) == 1) rec.mode = AugMode::Rotation;
        if (rec.mode == AugMode::Translation) {
            rec.dx = static_cast<int>(rng.uniform_int(-cfg.delta, cfg.delta));
            rec.dy = static_cast<int>(rng.uniform_int(-cfg.delta, cfg.delta));
        } else {
            rec.theta = rng.uniform(-cfg.theta_r, cfg.theta_r);
            rec.cx = rng.uniform(0.0, cut.width - 1.0);
            rec.cy = rng.uniform(0.0, cut.height - 1.0);
        }
    } else {
        rec.mode = AugMode::None;
    }

    rec.crop_x = static_cast<int>(rng.uniform_int(0, cut.width - cfg.crop_width));
    rec.crop_y = static_cast<int>(rng.uniform_int(0, cut.height - cfg.crop_height));

    std::array<Tensor<float>, 3> frames = {cut.frames[src[0]], cut.frames[src[1]],
                                           cut.frames[src[2]]};
    switch (rec.mode) {
    case AugMode::Translation:
        frames = translate_triplet(frames, rec.dx, rec.dy);
        break;
    case AugMode::Rotation:
        frames = rotate_triplet(frames, rec.theta, rec.cx, rec.cy);
        break;
    case AugMode::None:
        break;
    }
    t.a = crop(frames[0], rec.crop_y, rec.crop_x, cfg.crop_height, cfg.crop_width);
    t.target = crop(frames[1], rec.crop_y, rec.crop_x, cfg.crop_height, cfg.crop_width);
    t.b = crop(frames[2], rec.crop_y, rec.crop_x, cfg.crop_height, cfg.crop_width);
    return t;
}

} // namespace ibf
