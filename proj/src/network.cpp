#include "ibf/network.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <map>

#include "ibf/rng.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint format is little-endian");

namespace ibf {

LayerTable LayerTable::standard() {
    // l, nc0, nc1, stride, rel_den
    return LayerTable{{{
        {0, 0, 6, 2, 1},     {1, 0, 8, 1, 2},     {2, 0, 8, 1, 2},
        {3, 6, 8, 2, 2},     {4, 40, 8, 1, 4},    {5, 80, 16, 1, 4},
        {6, 80, 16, 2, 4},   {7, 160, 32, 1, 8},  {8, 160, 32, 1, 8},
        {9, 160, 32, 2, 8},  {10, 160, 32, 1, 16},{11, 320, 64, 1, 16},
        {12, 640, 128, 1, 16},{13, 640, 128, 1, 16},{14, 640, 128, 1, 16},
        {15, 640, 128, 1, 16},{16, 320, 64, 1, 16},{17, 160, 32, 1, 16},
        {18, 160, 32, 1, 8}, {19, 160, 32, 1, 8}, {20, 80, 16, 1, 8},
        {21, 80, 16, 1, 4},  {22, 80, 16, 1, 4},  {23, 40, 8, 1, 4},
        {24, 40, 8, 1, 2},   {25, 40, 8, 1, 2},   {26, 3, 24, 1, 2},
        {27, 0, 24, 1, 1},   {28, 0, 24, 1, 1},   {29, 0, 3, 0, 1},
    }}};
}

LayerTable LayerTable::with_low_multiplier(int mult) const {
    if (mult < 1) throw ConfigError("low channel multiplier must be >= 1");
    LayerTable t = *this;
    for (int l = 4; l <= 25; ++l) t.rows[l].nc0 *= mult;
    return t;
}

LayerTable LayerTable::with_channel_cap(int cap) const {
    if (cap == 0) return *this;
    if (cap < 8) throw ConfigError("channel cap must be 0 (off) or >= 8");
    LayerTable t = *this;
    for (auto& r : t.rows) {
        r.nc0 = std::min(r.nc0, cap);
        r.nc1 = std::min(r.nc1, cap);
    }
    return t;
}

void LayerTable::validate() const {
    auto fail = [](int l, const std::string& what) {
        throw ConfigError("layer table row " + std::to_string(l) + ": " + what);
    };
    for (int l = 0; l < kLayerCount; ++l) {
        const LayerSpec& r = rows[l];
        if (r.index != l) fail(l, "index out of order");
        const bool low = l >= kLowFirst && l <= kLowLast;
        if (low && r.nc0 <= 0) fail(l, "low-res channels must be positive here");
        if (!low && r.nc0 != 0) fail(l, "low-res stream does not exist here");
        if (r.nc1 <= 0) fail(l, "high-res channels must be positive");
        if (l < kLayerCount - 1) {
            if (r.stride != 1 && r.stride != 2) fail(l, "stride must be 1 or 2");
        } else if (r.stride != 0) {
            fail(l, "final row has no outgoing convolution");
        }
    }
    if (rows[0].nc1 != 6) fail(0, "high-res input must be the 6-channel frame pair");
    if (rows[kLowFirst].nc0 != 6) fail(kLowFirst, "low-res input must be the 6-channel half-scale pair");
    if (rows[kLayerCount - 1].nc1 != 3) fail(kLayerCount - 1, "high-res output must have 3 channels");
    if (rows[kLowLast].nc0 != 3) fail(kLowLast, "low-res output must have 3 channels");
    if (rows[0].rel_den != 1) fail(0, "input layer is full resolution");
    for (int l = 0; l + 1 < kLayerCount; ++l) {
        const int cur = rows[l].rel_den, nxt = rows[l + 1].rel_den;
        if (upsample_before(l)) {
            if (rows[l].stride != 1) fail(l, "enlarging step must have stride 1");
            if (nxt * 2 != cur) fail(l, "size must double across an enlarging step");
        } else if (rows[l].stride == 2) {
            if (nxt != cur * 2) fail(l, "size must halve across a stride-2 step");
        } else if (nxt != cur) {
            fail(l, "size must be unchanged across a stride-1 step");
        }
    }
}

NetworkPlan build_network(const LayerTable& table) {
    table.validate();
    NetworkPlan plan;
    plan.table = table;
    for (int l = 0; l + 1 < kLayerCount; ++l) {
        StepSpec& s = plan.steps[l];
        s.l = l;
        s.stride = table.rows[l].stride;
        s.upsample = upsample_before(l);
        s.has_low = l >= kLowFirst && l < kLowLast;
        s.has_cross = l >= kLowFirst && l <= kLowLast;
        ++plan.high_pairs;
        if (s.has_low) ++plan.low_pairs;
        if (s.has_cross) ++plan.cross_kernels;
    }
    return plan;
}

std::string param_name(ParamKind kind, int l) {
    switch (kind) {
    case ParamKind::HighKernel: return "W.1." + std::to_string(l);
    case ParamKind::HighBias: return "b.1." + std::to_string(l);
    case ParamKind::LowKernel: return "W.0." + std::to_string(l);
    case ParamKind::LowBias: return "b.0." + std::to_string(l);
    case ParamKind::CrossKernel: return "W.1.0." + std::to_string(l);
    }
    throw RunError("unreachable");
}

template <typename T>
ParamStore<T>::ParamStore(const LayerTable& table) : table_(table) {
    const NetworkPlan plan = build_network(table);
    auto add = [&](ParamKind kind, int l, int oc, int ic) {
        Param<T> p;
        p.kind = kind;
        p.layer = l;
        p.name = param_name(kind, l);
        const bool kernel = kind == ParamKind::HighKernel ||
                            kind == ParamKind::LowKernel ||
                            kind == ParamKind::CrossKernel;
        p.rank = kernel ? 4 : 1;
        p.value = kernel ? Tensor<T>(oc, ic, 3, 3) : Tensor<T>(1, oc, 1, 1);
        p.value.ensure_grad();
        p.m = Tensor<T>(p.value.nb, p.value.nc, p.value.nv, p.value.nu);
        p.v = p.m;
        index_[p.name] = params_.size();
        params_.push_back(std::move(p));
    };
    for (const StepSpec& s : plan.steps) {
        const LayerSpec& cur = table.rows[s.l];
        const LayerSpec& nxt = table.rows[s.l + 1];
        add(ParamKind::HighKernel, s.l, nxt.nc1, cur.nc1);
        add(ParamKind::HighBias, s.l, nxt.nc1, 0);
        if (s.has_low) {
            add(ParamKind::LowKernel, s.l, nxt.nc0, cur.nc0);
            add(ParamKind::LowBias, s.l, nxt.nc0, 0);
        }
        if (s.has_cross) add(ParamKind::CrossKernel, s.l, nxt.nc1, cur.nc0);
    }
}

template <typename T>
Param<T>& ParamStore<T>::at(const std::string& name) {
    auto it = index_.find(name);
    if (it == index_.end()) throw ConfigError("unknown parameter " + name);
    return params_[it->second];
}

template <typename T>
const Param<T>& ParamStore<T>::at(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end()) throw ConfigError("unknown parameter " + name);
    return params_[it->second];
}

template <typename T>
void ParamStore<T>::zero_grads() {
    for (auto& p : params_) p.value.zero_grad();
}

template <typename T>
void init_he(ParamStore<T>& store, std::uint64_t seed) {
    const LayerTable& table = store.table();
    Rng rng(seed);
    for (Param<T>& p : store.params()) {
        if (p.rank == 1) {
            p.value.fill(T(0));
        } else {
            int fan_in = 0;
            const LayerSpec& cur = table.rows[p.layer];
            const bool cross_here = p.layer >= kLowFirst && p.layer <= kLowLast;
            switch (p.kind) {
            case ParamKind::LowKernel:
                fan_in = cur.nc0 * 9;
                break;
            case ParamKind::HighKernel:
                fan_in = (cur.nc1 + (cross_here ? cur.nc0 : 0)) * 9;
                break;
            case ParamKind::CrossKernel:
                fan_in = (cur.nc1 + cur.nc0) * 9;
                break;
            default:
                throw RunError("bias with kernel rank");
            }
            const double stddev = std::sqrt(2.0 / fan_in);
            for (T& w : p.value.data) w = static_cast<T>(stddev * rng.normal());
        }
        p.value.zero_grad();
        p.m.fill(T(0));
        p.v.fill(T(0));
    }
    store.set_step(0);
}

namespace {

template <typename T>
void check_inputs(const Tensor<T>& a, const Tensor<T>& b) {
    if (!a.same_shape(b)) throw ConfigError("forward: input frames differ in shape");
    if (a.nc != 3) throw ConfigError("forward: frames must have 3 channels");
    if (a.nv % 16 != 0 || a.nu % 16 != 0)
        throw ConfigError("forward: spatial dims must be divisible by 16 (pad first), got " +
                          std::to_string(a.nv) + "x" + std::to_string(a.nu));
}

template <typename T>
std::span<const T> bias_span(const Param<T>& p) {
    return {p.value.data.data(), p.value.data.size()};
}

} // namespace

template <typename T>
NetworkOutput<T> forward(const NetworkPlan& plan, const ParamStore<T>& store,
                         const Tensor<T>& frame_a, const Tensor<T>& frame_b,
                         bool retain) {
    check_inputs(frame_a, frame_b);

    NetworkOutput<T> out;
    ForwardTrace<T>& tr = out.trace;
    if (retain) {
        tr.retained = true;
        tr.x0.resize(kLayerCount);
        tr.x1.resize(kLayerCount);
        tr.up0.resize(kLayerCount);
        tr.up1.resize(kLayerCount);
    }

    // Rolling activations; with retain they migrate into the trace as each
    // step stashes its input layer.
    Tensor<T> x1cur = concat_channels(frame_a, frame_b);
    Tensor<T> x0cur = concat_channels(bilinear_down_half(frame_a),
                                      bilinear_down_half(frame_b));

    for (const StepSpec& s : plan.steps) {
        const int l = s.l;
        Tensor<T>& x1l = retain ? (tr.x1[l] = std::move(x1cur)) : x1cur;
        Tensor<T>& x0l = (s.has_low || s.has_cross)
                             ? (retain ? (tr.x0[l] = std::move(x0cur)) : x0cur)
                             : x0cur;

        Tensor<T> up1_local, up0_local;
        const Tensor<T>* in1 = &x1l;
        const Tensor<T>* in0 = &x0l;
        if (s.upsample) {
            up1_local = bilinear_up2(x1l);
            in1 = retain ? &(tr.up1[l] = std::move(up1_local)) : &up1_local;
            if (s.has_cross) {
                up0_local = bilinear_up2(x0l);
                in0 = retain ? &(tr.up0[l] = std::move(up0_local)) : &up0_local;
            }
        }

        const Param<T>& w1 = store.at(param_name(ParamKind::HighKernel, l));
        const Param<T>& b1 = store.at(param_name(ParamKind::HighBias, l));
        Tensor<T> y1 = conv3x3(*in1, w1.value, bias_span(b1), s.stride);
        if (s.has_cross) {
            const Param<T>& wx = store.at(param_name(ParamKind::CrossKernel, l));
            conv3x3_add(*in0, wx.value, s.stride, y1);
        }
        if (s.has_low) {
            const Param<T>& w0 = store.at(param_name(ParamKind::LowKernel, l));
            const Param<T>& b0 = store.at(param_name(ParamKind::LowBias, l));
            Tensor<T> y0 = conv3x3(*in0, w0.value, bias_span(b0), s.stride);
            x0cur = relu(y0);
        }
        x1cur = relu(y1);
    }

    if (retain) {
        tr.x1[kLayerCount - 1] = std::move(x1cur);
        out.low = tr.x0[kLowLast];
        out.high = tr.x1[kLayerCount - 1];
    } else {
        out.low = std::move(x0cur);
        out.high = std::move(x1cur);
    }
    return out;
}

template <typename T>
void backward(const NetworkPlan& plan, ParamStore<T>& store,
              const ForwardTrace<T>& trace, const Tensor<T>& grad_low,
              const Tensor<T>& grad_high) {
    if (!trace.retained)
        throw ConfigError("backward: forward trace was not retained");

    std::vector<Tensor<T>> g0(kLayerCount), g1(kLayerCount);
    auto accum = [](Tensor<T>& dst, Tensor<T>&& src) {
        if (dst.size() == 0) dst = std::move(src);
        else add_inplace(dst, src);
    };
    g1[kLayerCount - 1] = grad_high;
    g0[kLowLast] = grad_low;

    for (int l = kLayerCount - 2; l >= 0; --l) {
        const StepSpec& s = plan.steps[l];
        Param<T>& w1 = store.at(param_name(ParamKind::HighKernel, l));
        Param<T>& b1 = store.at(param_name(ParamKind::HighBias, l));
        const Tensor<T>& in1 = s.upsample ? trace.up1[l] : trace.x1[l];

        Tensor<T> gy1 = relu_backward(trace.x1[l + 1], g1[l + 1]);
        g1[l + 1] = Tensor<T>();

        Tensor<T> gin1;
        conv3x3_backward(in1, w1.value, gy1, s.stride, l > 0 ? &gin1 : nullptr,
                         std::span<T>(w1.value.grad), std::span<T>(b1.value.grad));
        if (l > 0)
            accum(g1[l], s.upsample ? bilinear_up2_backward(gin1) : std::move(gin1));

        Tensor<T> gin0;
        const bool need_gin0 = l > kLowFirst;
        if (s.has_cross) {
            Param<T>& wx = store.at(param_name(ParamKind::CrossKernel, l));
            const Tensor<T>& in0 = s.upsample ? trace.up0[l] : trace.x0[l];
            conv3x3_backward(in0, wx.value, gy1, s.stride,
                             need_gin0 ? &gin0 : nullptr,
                             std::span<T>(wx.value.grad), {});
        }
        if (s.has_low) {
            Param<T>& w0 = store.at(param_name(ParamKind::LowKernel, l));
            Param<T>& b0 = store.at(param_name(ParamKind::LowBias, l));
            const Tensor<T>& in0 = s.upsample ? trace.up0[l] : trace.x0[l];
            Tensor<T> gy0 = relu_backward(trace.x0[l + 1], g0[l + 1]);
            g0[l + 1] = Tensor<T>();
            conv3x3_backward(in0, w0.value, gy0, s.stride,
                             need_gin0 ? &gin0 : nullptr,
                             std::span<T>(w0.value.grad), std::span<T>(b0.value.grad));
        }
        if (need_gin0 && gin0.size() > 0)
            accum(g0[l], s.upsample ? bilinear_up2_backward(gin0) : std::move(gin0));
    }
}

// --- checkpoint I/O ---------------------------------------------------------

namespace {

void put_u16(std::ostream& os, std::uint16_t v) { os.write(reinterpret_cast<const char*>(&v), 2); }
void put_u32(std::ostream& os, std::uint32_t v) { os.write(reinterpret_cast<const char*>(&v), 4); }
void put_u64(std::ostream& os, std::uint64_t v) { os.write(reinterpret_cast<const char*>(&v), 8); }

std::uint16_t get_u16(std::istream& is) { std::uint16_t v; is.read(reinterpret_cast<char*>(&v), 2); return v; }
std::uint32_t get_u32(std::istream& is) { std::uint32_t v; is.read(reinterpret_cast<char*>(&v), 4); return v; }
std::uint64_t get_u64(std::istream& is) { std::uint64_t v; is.read(reinterpret_cast<char*>(&v), 8); return v; }

void put_tensor(std::ostream& os, const std::string& name, int rank,
                const Tensor<float>& t) {
    put_u16(os, static_cast<std::uint16_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    os.put(static_cast<char>(rank));
    if (rank == 1) {
        put_u32(os, static_cast<std::uint32_t>(t.nc));
    } else {
        put_u32(os, static_cast<std::uint32_t>(t.nb));
        put_u32(os, static_cast<std::uint32_t>(t.nc));
        put_u32(os, static_cast<std::uint32_t>(t.nv));
        put_u32(os, static_cast<std::uint32_t>(t.nu));
    }
    os.write(reinterpret_cast<const char*>(t.data.data()),
             static_cast<std::streamsize>(t.size() * sizeof(float)));
}

struct RawTensor {
    int rank = 0;
    std::vector<std::uint32_t> dims;
    std::vector<float> data;
};

std::string dims_str(const std::vector<std::uint32_t>& d) {
    std::string s = "(";
    for (std::size_t i = 0; i < d.size(); ++i)
        s += (i ? "," : "") + std::to_string(d[i]);
    return s + ")";
}

} // namespace

void save_checkpoint(const ParamStore<float>& store, const std::string& path) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) throw RunError("cannot open checkpoint for writing: " + path);
    os.write("IBFW", 4);
    put_u32(os, 1);
    put_u32(os, static_cast<std::uint32_t>(store.params().size() * 3));
    for (const Param<float>& p : store.params()) {
        put_tensor(os, p.name, p.rank, p.value);
        put_tensor(os, p.name + ".m", p.rank, p.m);
        put_tensor(os, p.name + ".v", p.rank, p.v);
    }
    put_u64(os, store.step());
    if (!os) throw RunError("short write while saving checkpoint: " + path);
}

void load_checkpoint(ParamStore<float>& store, const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw RunError("cannot open checkpoint: " + path);
    char magic[4];
    is.read(magic, 4);
    if (!is || std::memcmp(magic, "IBFW", 4) != 0)
        throw ConfigError("not a checkpoint file (bad magic): " + path);
    if (get_u32(is) != 1) throw ConfigError("unsupported checkpoint version: " + path);
    const std::uint32_t count = get_u32(is);

    std::map<std::string, RawTensor> raw;
    for (std::uint32_t i = 0; i < count; ++i) {
        const std::uint16_t len = get_u16(is);
        std::string name(len, '\0');
        is.read(name.data(), len);
        RawTensor t;
        t.rank = is.get();
        if (t.rank < 1 || t.rank > 4)
            throw ConfigError("checkpoint tensor " + name + " has bad rank");
        std::size_t n = 1;
        for (int r = 0; r < t.rank; ++r) {
            t.dims.push_back(get_u32(is));
            n *= t.dims.back();
        }
        t.data.resize(n);
        is.read(reinterpret_cast<char*>(t.data.data()),
                static_cast<std::streamsize>(n * sizeof(float)));
        if (!is) throw ConfigError("truncated checkpoint: " + path);
        raw.emplace(std::move(name), std::move(t));
    }
    const std::uint64_t step = get_u64(is);
    if (!is) throw ConfigError("truncated checkpoint (missing step counter): " + path);

    auto take = [&](const std::string& name, Tensor<float>& dst, int rank) {
        auto it = raw.find(name);
        if (it == raw.end())
            throw ConfigError("checkpoint " + path + " is missing tensor " + name);
        const RawTensor& t = it->second;
        std::vector<std::uint32_t> want =
            rank == 1 ? std::vector<std::uint32_t>{static_cast<std::uint32_t>(dst.nc)}
                      : std::vector<std::uint32_t>{static_cast<std::uint32_t>(dst.nb),
                                                   static_cast<std::uint32_t>(dst.nc),
                                                   static_cast<std::uint32_t>(dst.nv),
                                                   static_cast<std::uint32_t>(dst.nu)};
        if (t.rank != rank || t.dims != want)
            throw ConfigError("checkpoint tensor " + name + " has shape " +
                              dims_str(t.dims) + " but the network expects " +
                              dims_str(want));
        std::copy(t.data.begin(), t.data.end(), dst.data.begin());
        raw.erase(it);
    };
    for (Param<float>& p : store.params()) {
        take(p.name, p.value, p.rank);
        take(p.name + ".m", p.m, p.rank);
        take(p.name + ".v", p.v, p.rank);
        p.value.zero_grad();
    }
    if (!raw.empty())
        throw ConfigError("checkpoint " + path + " contains unexpected tensor " +
                          raw.begin()->first);
    store.set_step(step);
}

template class ParamStore<float>;
template class ParamStore<double>;

#define IBF_INSTANTIATE(T)                                                       \
    template void init_he(ParamStore<T>&, std::uint64_t);                       \
    template NetworkOutput<T> forward(const NetworkPlan&, const ParamStore<T>&, \
                                      const Tensor<T>&, const Tensor<T>&, bool);\
    template void backward(const NetworkPlan&, ParamStore<T>&,                  \
                           const ForwardTrace<T>&, const Tensor<T>&,            \
                           const Tensor<T>&);

IBF_INSTANTIATE(float)
IBF_INSTANTIATE(double)
#undef IBF_INSTANTIATE

} // namespace ibf
