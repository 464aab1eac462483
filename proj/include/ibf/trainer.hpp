#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "ibf/augment.hpp"
#include "ibf/cut.hpp"
#include "ibf/loss.hpp"
#include "ibf/network.hpp"

namespace ibf {

struct TrainConfig {
    int batch_size = 4;
    float learning_rate = 2e-4f;
    int iterations = 5000; // total optimizer steps, counted from 0
    float beta1 = 0.9f, beta2 = 0.999f;
    float epsilon = 1e-8f;
    int checkpoint_every = 1000;
    WeightConfig weights;
    AugmentConfig augment;
    std::uint64_t seed = 1;

    void validate() const;
};

struct IterRecord {
    int iter;
    float loss;
    float ema;
    double ms;
};

struct CheckpointRecord {
    std::string path;
    std::uint64_t step;
};

struct TrainLog {
    std::vector<IterRecord> iters;
    std::vector<CheckpointRecord> checkpoints;
};

// One bias-corrected Adam update over every parameter, using the gradients
// accumulated in the grad slots; increments the store's step counter. A
// non-finite gradient aborts with the parameter named in the diagnostic.
void adam_step(ParamStore<float>& params, float lr, float beta1, float beta2,
               float epsilon);

struct TrainResult {
    std::string checkpoint;
    TrainLog log;
};

inline constexpr float kEmaDecay = 0.99f;

// Per-cut optimization: He init (or resume), then cfg.iterations steps of
// sampled-triplet batches through the averaged dual objective and Adam.
// Cadence checkpoints go to out_path.step<N> (last 3 kept, best EMA copied to
// out_path.best); the final state is written to out_path. Per-iteration
// records stream to log_stream as "iter=<n> loss=<f> ema=<f> ms=<f>" lines.
TrainResult train_cut(const Cut& cut, const LayerTable& table,
                      const TrainConfig& cfg, const std::string& out_path,
                      const std::string& resume_path = "",
                      std::ostream* log_stream = nullptr);

} // namespace ibf
