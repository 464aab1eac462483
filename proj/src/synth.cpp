#include "ibf/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>

#include "ibf/image_io.hpp"

namespace fs = std::filesystem;

namespace ibf {

SynthSpec synth_preset(const std::string& name) {
    if (name == "circle128") return SynthSpec{};
    if (name == "circle64") {
        SynthSpec s;
        s.width = 64;
        s.height = 64;
        s.frames = 5;
        s.radius = 12.0;
        s.stroke = 2.0;
        s.cx = 24.0;
        s.cy = 32.0;
        s.vx = 2.0;
        return s;
    }
    throw ConfigError("unknown synth preset \"" + name + "\"; available: circle128, circle64");
}

std::vector<std::string> synth_preset_names() { return {"circle128", "circle64"}; }

Tensor<float> render_synth_frame(const SynthSpec& spec, double t) {
    const double cx = spec.cx + t * spec.vx;
    const double cy = spec.cy + t * spec.vy;
    const double half = spec.stroke * 0.5;
    Tensor<float> out(1, 3, spec.height, spec.width);
    for (int v = 0; v < spec.height; ++v)
        for (int u = 0; u < spec.width; ++u) {
            const double d = std::abs(std::hypot(u - cx, v - cy) - spec.radius);
            // 1px feather on the signed distance to the stroke edge
            const double cov = std::clamp(half + 0.5 - d, 0.0, 1.0);
            const float val = static_cast<float>(1.0 - cov * (1.0 - spec.ink));
            for (int c = 0; c < 3; ++c) out.at(0, c, v, u) = val;
        }
    return out;
}

Cut make_synthetic_cut(const SynthSpec& spec, const std::string& out_dir) {
    if (spec.frames < 2) throw ConfigError("synthetic cut needs at least 2 frames");
    fs::create_directories(out_dir);
    char name[32];
    for (int i = 0; i < spec.frames; ++i) {
        std::snprintf(name, sizeof(name), "%04d.png", i + 1);
        save_frame(render_synth_frame(spec, i), (fs::path(out_dir) / name).string());
    }
    if (spec.midframes) {
        const fs::path mid_dir = fs::path(out_dir) / "midframes";
        fs::create_directories(mid_dir);
        for (int i = 0; i + 1 < spec.frames; ++i) {
            std::snprintf(name, sizeof(name), "mid_%04d.png", i + 1);
            save_frame(render_synth_frame(spec, i + 0.5), (mid_dir / name).string());
        }
    }
    return load_cut(out_dir);
}

} // namespace ibf
