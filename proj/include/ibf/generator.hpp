#pragma once

#include <string>
#include <vector>

#include "ibf/cut.hpp"
#include "ibf/network.hpp"

namespace ibf {

enum class Provenance { Original, Half, Quarter };

const char* provenance_name(Provenance p);

struct GeneratedFrame {
    std::string filename;  // NNNN.png with NNNN = 4*(i-1) + k + 1
    int base = 0;          // i, 1-based
    int quarter = 0;       // k in 0..3; time = i + k/4
    Provenance prov = Provenance::Original;
    Tensor<float> image;   // populated when frames are kept
};

struct GeneratedSequence {
    std::vector<GeneratedFrame> frames; // 4*(n_f - 1) + 1 entries
};

// One network application: pads both frames with white to the next multiple
// of 16 per dimension, runs the forward pass, crops the high-res output back
// and clamps to [0, 1].
Tensor<float> infer_pair(const NetworkPlan& plan, const ParamStore<float>& params,
                         const Tensor<float>& frame_a, const Tensor<float>& frame_b);

// Recursive 4x synthesis: all half frames first, then the quarter frames from
// originals and halves. Original frames pass through untouched. When out_dir
// is non-empty the frames are written as PNGs next to a sequence.txt manifest
// mapping each filename to its rational time and provenance.
GeneratedSequence generate_4x(const Cut& cut, const NetworkPlan& plan,
                              const ParamStore<float>& params,
                              const std::string& out_dir,
                              bool keep_frames = false);

} // namespace ibf
