#include "ibf/generator.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ibf/image_io.hpp"

namespace fs = std::filesystem;

namespace ibf {

const char* provenance_name(Provenance p) {
    switch (p) {
    case Provenance::Original: return "original";
    case Provenance::Half: return "half";
    case Provenance::Quarter: return "quarter";
    }
    return "?";
}

Tensor<float> infer_pair(const NetworkPlan& plan, const ParamStore<float>& params,
                         const Tensor<float>& frame_a, const Tensor<float>& frame_b) {
    if (!frame_a.same_shape(frame_b))
        throw ConfigError("infer_pair: frames differ in shape");
    const int h = frame_a.nv, w = frame_a.nu;
    const int ph = round_up16(h), pw = round_up16(w);

    NetworkOutput<float> out;
    if (ph == h && pw == w) {
        out = forward(plan, params, frame_a, frame_b, false);
    } else {
        out = forward(plan, params, pad_bottom_right(frame_a, ph, pw, 1.0f),
                      pad_bottom_right(frame_b, ph, pw, 1.0f), false);
    }
    Tensor<float> result = (ph == h && pw == w) ? std::move(out.high)
                                                : crop(out.high, 0, 0, h, w);
    for (float& v : result.data) v = std::clamp(v, 0.0f, 1.0f);
    return result;
}

GeneratedSequence generate_4x(const Cut& cut, const NetworkPlan& plan,
                              const ParamStore<float>& params,
                              const std::string& out_dir, bool keep_frames) {
    if (cut.nf < 2) throw ConfigError("generate_4x needs at least 2 frames");
    if (!out_dir.empty()) fs::create_directories(out_dir);

    auto filename = [](int base, int quarter) {
        char name[16];
        std::snprintf(name, sizeof(name), "%04d.png", 4 * (base - 1) + quarter + 1);
        return std::string(name);
    };

    // half pass: f_{i+1/2} = CNN(f_i, f_{i+1})
    std::vector<Tensor<float>> halves(cut.nf - 1);
    for (int i = 0; i + 1 < cut.nf; ++i)
        halves[i] = infer_pair(plan, params, cut.frames[i], cut.frames[i + 1]);

    GeneratedSequence seq;
    auto emit = [&](int base, int quarter, Provenance prov, const Tensor<float>& img) {
        GeneratedFrame f;
        f.filename = filename(base, quarter);
        f.base = base;
        f.quarter = quarter;
        f.prov = prov;
        if (!out_dir.empty())
            save_frame(img, (fs::path(out_dir) / f.filename).string());
        if (keep_frames) f.image = img;
        seq.frames.push_back(std::move(f));
    };

    // quarter pass: f_{i+1/4} = CNN(f_i, f_{i+1/2}), f_{i+3/4} = CNN(f_{i+1/2}, f_{i+1})
    for (int i = 0; i + 1 < cut.nf; ++i) {
        emit(i + 1, 0, Provenance::Original, cut.frames[i]);
        emit(i + 1, 1, Provenance::Quarter,
             infer_pair(plan, params, cut.frames[i], halves[i]));
        emit(i + 1, 2, Provenance::Half, halves[i]);
        emit(i + 1, 3, Provenance::Quarter,
             infer_pair(plan, params, halves[i], cut.frames[i + 1]));
    }
    emit(cut.nf, 0, Provenance::Original, cut.frames[cut.nf - 1]);

    if (!out_dir.empty()) {
        std::ofstream manifest(fs::path(out_dir) / "sequence.txt");
        if (!manifest) throw RunError("cannot write sequence.txt in " + out_dir);
        for (const GeneratedFrame& f : seq.frames) {
            char line[64];
            std::snprintf(line, sizeof(line), "%s %.2f %s\n", f.filename.c_str(),
                          f.base + f.quarter / 4.0, provenance_name(f.prov));
            manifest << line;
        }
    }
    return seq;
}

} // namespace ibf
