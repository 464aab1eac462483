#pragma once

#include <string>
#include <vector>

#include "ibf/tensor.hpp"

namespace ibf {

// One continuous shot: the ordered frame sequence the network is trained on
// and applied to. Frame order is the lexicographic order of the filenames.
struct Cut {
    std::string dir;
    std::vector<std::string> files;    // basenames, sorted
    std::vector<Tensor<float>> frames; // each (1, 3, height, width), values in [0, 1]
    int nf = 0;
    int height = 0, width = 0;
};

} // namespace ibf
