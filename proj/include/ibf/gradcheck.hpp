#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ibf {

struct GradCheck {
    std::string name;
    double max_rel_err;
    int coords; // coordinates compared
};

struct GradCheckReport {
    std::vector<GradCheck> checks;
    double max_rel_err = 0.0;
    bool passed(double tol = 1e-3) const { return max_rel_err < tol; }
};

// Central finite differences against the analytic backward paths, in 64-bit
// mode: conv3x3 at both strides (input, weight and bias gradients),
// bilinear_up2, bilinear_down_half, weighted_mse, the cross-connection
// kernels, and a channel-truncated full network (channels capped at 8)
// end to end through the averaged dual objective. `full` widens the sampling
// and input sizes.
GradCheckReport run_gradcheck(bool full = false, std::uint64_t seed = 7);

} // namespace ibf
