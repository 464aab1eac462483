#pragma once

#include <string>

#include "ibf/network.hpp"
#include "ibf/trainer.hpp"

namespace ibf {

// Flat key = value run configuration ('#' comments). Unknown keys and
// malformed values are rejected before any compute.
struct RunConfig {
    TrainConfig train;
    int low_channel_multiplier = 1; // doubles the low-res mid channels when 2
    int channel_cap = 0;            // 0 = off; testing/debug knob, >= 8
    std::string rng_algo = "mt19937_64";

    static RunConfig load(const std::string& path);

    // CLI --set key=value overrides reuse the file syntax.
    void apply(const std::string& key, const std::string& value);
    void validate() const;

    LayerTable make_table() const;
};

} // namespace ibf
