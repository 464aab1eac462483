#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ibf/cut.hpp"

namespace ibf {

// Anti-aliased line-art fixture: a circle outline translating at constant
// velocity over a white background. Stands in for real scanned cuts at desk
// scale; ground-truth midframes at half-integer times support evaluation.
struct SynthSpec {
    int width = 128, height = 128;
    int frames = 9;
    double radius = 24.0, stroke = 2.5;
    double cx = 40.0, cy = 64.0;  // circle center in frame 1
    double vx = 4.0, vy = 0.0;    // pixels per frame
    double ink = 0.05;            // stroke darkness (0 = black)
    std::uint64_t seed = 1;
    bool midframes = true;        // also render gt at i + 1/2 into out_dir/midframes/
};

// Presets: "circle128" (128x128, 9 frames, 4 px/frame) and "circle64"
// (64x64, 5 frames, 2 px/frame).
SynthSpec synth_preset(const std::string& name);
std::vector<std::string> synth_preset_names();

// Renders one frame at fractional time t (t = 0 is the first frame).
Tensor<float> render_synth_frame(const SynthSpec& spec, double t);

// Writes frames 0001.png .. NNNN.png (and midframes/mid_NNNN.png) under
// out_dir, then loads the directory back so the returned cut went through the
// same 8-bit quantization training sees.
Cut make_synthetic_cut(const SynthSpec& spec, const std::string& out_dir);

} // namespace ibf
