#include "ibf/trainer.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <ostream>

namespace fs = std::filesystem;

namespace ibf {

namespace {
// Sub-stream tag for triplet sampling; sample k of iteration n draws from
// substream(seed, kTripletTag, n * 2^20 + k).
constexpr std::uint64_t kTripletTag = 0x74726970ull; // "trip"
constexpr std::uint64_t kBatchStride = 1ull << 20;
} // namespace

void TrainConfig::validate() const {
    if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
    if (!(learning_rate > 0.0f)) throw ConfigError("learning_rate must be > 0");
    if (iterations < 0) throw ConfigError("iterations must be >= 0");
    if (beta1 < 0.0f || beta1 >= 1.0f || beta2 < 0.0f || beta2 >= 1.0f)
        throw ConfigError("adam betas must lie in [0, 1)");
    if (!(epsilon > 0.0f)) throw ConfigError("adam epsilon must be > 0");
    if (checkpoint_every < 1) throw ConfigError("checkpoint_every must be >= 1");
    if (!(weights.w_min > 0.0f) || weights.w_min > weights.w_max)
        throw ConfigError("weights require 0 < w_min <= w_max");
}

void adam_step(ParamStore<float>& params, float lr, float beta1, float beta2,
               float epsilon) {
    const std::uint64_t t = params.step() + 1;
    const float c1 = static_cast<float>(1.0 - std::pow(static_cast<double>(beta1), static_cast<double>(t)));
    const float c2 = static_cast<float>(1.0 - std::pow(static_cast<double>(beta2), static_cast<double>(t)));
    for (Param<float>& p : params.params()) {
        const std::vector<float>& g = p.value.grad;
        if (g.size() != p.value.size())
            throw RunError("adam_step: parameter " + p.name + " has no gradient");
        for (std::size_t i = 0; i < g.size(); ++i)
            if (!std::isfinite(g[i]))
                throw RunError("non-finite gradient in parameter " + p.name +
                               " at element " + std::to_string(i));
        float* m = p.m.data.data();
        float* v = p.v.data.data();
        float* w = p.value.data.data();
        for (std::size_t i = 0; i < g.size(); ++i) {
            m[i] = beta1 * m[i] + (1.0f - beta1) * g[i];
            v[i] = beta2 * v[i] + (1.0f - beta2) * g[i] * g[i];
            const float mhat = m[i] / c1;
            const float vhat = v[i] / c2;
            w[i] -= lr * mhat / (std::sqrt(vhat) + epsilon);
        }
    }
    params.set_step(t);
}

namespace {

struct Batch {
    Tensor<float> a, target, b;
};

Batch assemble_batch(const Cut& cut, const TrainConfig& cfg, std::uint64_t iter) {
    const int nb = cfg.batch_size;
    const int ch = cfg.augment.crop_height, cw = cfg.augment.crop_width;
    Batch out{Tensor<float>(nb, 3, ch, cw), Tensor<float>(nb, 3, ch, cw),
              Tensor<float>(nb, 3, ch, cw)};
    const std::size_t plane = static_cast<std::size_t>(ch) * cw * 3;
    for (int k = 0; k < nb; ++k) {
        Rng rng = Rng::substream(cfg.augment.seed, kTripletTag,
                                 iter * kBatchStride + static_cast<std::uint64_t>(k));
        Triplet t = sample_triplet(cut, cfg.augment, rng);
        std::copy(t.a.data.begin(), t.a.data.end(), out.a.data.begin() + k * plane);
        std::copy(t.target.data.begin(), t.target.data.end(),
                  out.target.data.begin() + k * plane);
        std::copy(t.b.data.begin(), t.b.data.end(), out.b.data.begin() + k * plane);
    }
    return out;
}

} // namespace

TrainResult train_cut(const Cut& cut, const LayerTable& table,
                      const TrainConfig& cfg, const std::string& out_path,
                      const std::string& resume_path, std::ostream* log_stream) {
    cfg.validate();
    cfg.augment.validate(cut.height, cut.width);
    const NetworkPlan plan = build_network(table);

    ParamStore<float> store(table);
    if (resume_path.empty()) {
        init_he(store, cfg.seed);
    } else {
        load_checkpoint(store, resume_path);
        if (store.step() > static_cast<std::uint64_t>(cfg.iterations))
            throw ConfigError("resume checkpoint is at step " +
                              std::to_string(store.step()) +
                              ", beyond the configured " +
                              std::to_string(cfg.iterations) + " iterations");
    }

    TrainResult result;
    result.checkpoint = out_path;
    TrainLog& log = result.log;

    std::deque<std::string> cadence;
    float ema = 0.0f;
    bool ema_started = false;
    float best_ema = 0.0f;
    bool have_best = false;

    auto write_cadence = [&](std::uint64_t step) {
        char suffix[32];
        std::snprintf(suffix, sizeof(suffix), ".step%08llu",
                      static_cast<unsigned long long>(step));
        const std::string path = out_path + suffix;
        save_checkpoint(store, path);
        log.checkpoints.push_back({path, step});
        cadence.push_back(path);
        while (cadence.size() > 3) {
            std::error_code ec;
            fs::remove(cadence.front(), ec);
            cadence.pop_front();
        }
        if (!have_best || ema < best_ema) {
            best_ema = ema;
            have_best = true;
            std::error_code ec;
            fs::copy_file(path, out_path + ".best", fs::copy_options::overwrite_existing, ec);
            if (ec) throw RunError("cannot write best checkpoint " + out_path +
                                   ".best: " + ec.message());
        }
    };

    for (std::uint64_t it = store.step() + 1;
         it <= static_cast<std::uint64_t>(cfg.iterations); ++it) {
        const auto t0 = std::chrono::steady_clock::now();

        Batch batch = assemble_batch(cut, cfg, it);
        NetworkOutput<float> out = forward(plan, store, batch.a, batch.b, true);
        Objective<float> obj = objective(out.low, out.high, batch.target, cfg.weights);

        if (!std::isfinite(obj.value)) {
            save_checkpoint(store, out_path + ".postmortem");
            throw RunError("non-finite objective " + std::to_string(obj.value) +
                           " at iteration " + std::to_string(it) +
                           "; post-mortem checkpoint written to " + out_path +
                           ".postmortem");
        }

        store.zero_grads();
        backward(plan, store, out.trace, obj.grad_low, obj.grad_high);
        adam_step(store, cfg.learning_rate, cfg.beta1, cfg.beta2, cfg.epsilon);

        ema = ema_started ? kEmaDecay * ema + (1.0f - kEmaDecay) * obj.value
                          : obj.value;
        ema_started = true;

        const double ms = std::chrono::duration<double, std::milli>(
                              std::chrono::steady_clock::now() - t0).count();
        log.iters.push_back({static_cast<int>(it), obj.value, ema, ms});
        if (log_stream) {
            char line[128];
            std::snprintf(line, sizeof(line), "iter=%llu loss=%.6g ema=%.6g ms=%.3f\n",
                          static_cast<unsigned long long>(it),
                          static_cast<double>(obj.value), static_cast<double>(ema), ms);
            (*log_stream) << line << std::flush;
        }

        if (it % static_cast<std::uint64_t>(cfg.checkpoint_every) == 0)
            write_cadence(it);
    }

    save_checkpoint(store, out_path);
    log.checkpoints.push_back({out_path, store.step()});
    return result;
}

} // namespace ibf
