#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "ibf/tensor.hpp"

namespace ibf {

// One row of the layer table: channel counts of both streams at layer l, the
// stride of the convolution leaving l, and the spatial size relative to the
// full-resolution input, stored as the divisor (1, 2, 4, 8 or 16).
struct LayerSpec {
    int index;
    int nc0;     // low-res stream channels; 0 where the stream does not exist
    int nc1;     // high-res stream channels
    int stride;  // 1 or 2; 0 for the final row (no outgoing convolution)
    int rel_den; // rel_size = 1 / rel_den
};

inline constexpr int kLayerCount = 30;
inline constexpr int kLowFirst = 3;  // low-res stream enters here (half-scale input pair)
inline constexpr int kLowLast = 26;  // low-res stream output layer

// The four enlarging transitions: bilinear x2 ahead of the convolution
// leaving these layers.
inline bool upsample_before(int l) {
    return l == 17 || l == 20 || l == 23 || l == 26;
}

struct LayerTable {
    std::array<LayerSpec, kLayerCount> rows;

    static LayerTable standard();
    LayerTable with_low_multiplier(int mult) const; // nc0 *= mult for l in [4,25]
    LayerTable with_channel_cap(int cap) const;     // nc -> min(nc, cap); cap >= 8
    void validate() const;                          // throws ConfigError
};

// Executable wiring derived from a validated table. Step l maps layer l to
// l+1: optional bilinear_up2, then conv3x3 with the row's stride, then ReLU;
// the high-res step additionally sums the cross convolution of the low-res
// activation pre-activation.
struct StepSpec {
    int l;
    int stride;
    bool upsample;
    bool has_low;   // low-res conv W.0.l exists (l in [3,25])
    bool has_cross; // cross conv W.1.0.l exists (l in [3,26])
};

struct NetworkPlan {
    LayerTable table;
    std::array<StepSpec, kLayerCount - 1> steps;
    int high_pairs = 0;    // (W,b) pairs of the high-res stream
    int low_pairs = 0;     // (W,b) pairs of the low-res stream
    int cross_kernels = 0; // W.1.0.l kernels
};

NetworkPlan build_network(const LayerTable& table);

enum class ParamKind { HighKernel, HighBias, LowKernel, LowBias, CrossKernel };

std::string param_name(ParamKind kind, int l);

template <typename T>
struct Param {
    std::string name;
    ParamKind kind;
    int layer;
    int rank;        // serialized rank: 4 for kernels, 1 for biases
    Tensor<T> value; // its grad slot holds the accumulated gradient
    Tensor<T> m, v;  // Adam moments
};

// Every trainable coefficient of both streams plus cross-connections, in a
// fixed canonical order, with Adam state and the optimizer step counter.
template <typename T>
class ParamStore {
public:
    explicit ParamStore(const LayerTable& table);

    const LayerTable& table() const { return table_; }
    std::vector<Param<T>>& params() { return params_; }
    const std::vector<Param<T>>& params() const { return params_; }

    Param<T>& at(const std::string& name);
    const Param<T>& at(const std::string& name) const;

    std::uint64_t step() const { return step_; }
    void set_step(std::uint64_t s) { step_ = s; }

    void zero_grads();

private:
    LayerTable table_;
    std::vector<Param<T>> params_;
    std::unordered_map<std::string, std::size_t> index_;
    std::uint64_t step_ = 0;
};

// Kernel entries ~ Normal(0, sqrt(2 / fan_in)) with fan_in = in_ch * 9; for
// high-res steps that also receive a cross connection, fan_in counts both
// input streams. Biases and moments zero. Fully determined by the seed.
template <typename T>
void init_he(ParamStore<T>& store, std::uint64_t seed);

template <typename T>
struct ForwardTrace {
    std::vector<Tensor<T>> x0, x1;   // post-ReLU activations per layer
    std::vector<Tensor<T>> up0, up1; // upsampled conv inputs at enlarging steps
    bool retained = false;
};

template <typename T>
struct NetworkOutput {
    Tensor<T> low;  // layer-26 low-res activation (nb, 3, H/2, W/2)
    Tensor<T> high; // layer-29 high-res activation (nb, 3, H, W)
    ForwardTrace<T> trace;
};

// frame_a / frame_b: (nb, 3, H, W) with H, W divisible by 16. retain keeps
// the activations needed by backward().
template <typename T>
NetworkOutput<T> forward(const NetworkPlan& plan, const ParamStore<T>& store,
                         const Tensor<T>& frame_a, const Tensor<T>& frame_b,
                         bool retain);

// Accumulates parameter gradients (into each param's grad slot) for the
// upstream gradients at both outputs. Requires a retained trace.
template <typename T>
void backward(const NetworkPlan& plan, ParamStore<T>& store,
              const ForwardTrace<T>& trace, const Tensor<T>& grad_low,
              const Tensor<T>& grad_high);

// Checkpoint container: magic "IBFW", u32 version=1, u32 tensor count, then
// per tensor a u16 name length, the UTF-8 name, u8 rank, u32 dims[], and
// little-endian 32-bit reals; Adam moments follow each value tensor under
// ".m"/".v" suffixes; a trailing u64 holds the step counter.
void save_checkpoint(const ParamStore<float>& store, const std::string& path);
void load_checkpoint(ParamStore<float>& store, const std::string& path);

extern template class ParamStore<float>;
extern template class ParamStore<double>;

} // namespace ibf
