#include "ibf/tensor.hpp"

#include <algorithm>
#include <cstring>

#include <cblas.h>

namespace ibf {

namespace {

void gemm(bool trans_a, bool trans_b, int m, int n, int k, float alpha,
          const float* a, int lda, const float* b, int ldb, float beta,
          float* c, int ldc) {
    cblas_sgemm(CblasRowMajor, trans_a ? CblasTrans : CblasNoTrans,
                trans_b ? CblasTrans : CblasNoTrans, m, n, k, alpha, a, lda, b,
                ldb, beta, c, ldc);
}

void gemm(bool trans_a, bool trans_b, int m, int n, int k, double alpha,
          const double* a, int lda, const double* b, int ldb, double beta,
          double* c, int ldc) {
    cblas_dgemm(CblasRowMajor, trans_a ? CblasTrans : CblasNoTrans,
                trans_b ? CblasTrans : CblasNoTrans, m, n, k, alpha, a, lda, b,
                ldb, beta, c, ldc);
}

struct ConvDims {
    int ic, oc, oh, ow, k;
};

template <typename T>
ConvDims conv_dims(const Tensor<T>& x, const Tensor<T>& w, int stride) {
    if (w.nv != 3 || w.nu != 3)
        throw ConfigError("conv3x3: weight must be (out, in, 3, 3)");
    if (w.nc != x.nc)
        throw ConfigError("conv3x3: weight expects " + std::to_string(w.nc) +
                          " input channels, tensor has " + std::to_string(x.nc));
    if (stride != 1 && stride != 2)
        throw ConfigError("conv3x3: stride must be 1 or 2");
    if (stride == 2 && (x.nv % 2 != 0 || x.nu % 2 != 0))
        throw ConfigError("conv3x3: stride 2 requires even spatial dims, got " +
                          std::to_string(x.nv) + "x" + std::to_string(x.nu));
    return {x.nc, w.nb, x.nv / stride, x.nu / stride, x.nc * 9};
}

// Writes the patch matrix for output rows [v0, v0+vn) of batch item b.
// Row k = (i*3 + kv)*3 + ku of the matrix holds x[b][i][s*v + kv - 1][s*u + ku - 1]
// (zero outside the image); columns walk the slab's output pixels row-major.
// col_stride is the full matrix row length, col_off the slab's column offset.
template <typename T>
void im2col_3x3(const Tensor<T>& x, int b, int stride, int v0, int vn, int ow,
                T* col, std::size_t col_stride, std::size_t col_off) {
    const int h = x.nv, w = x.nu;
    for (int i = 0; i < x.nc; ++i) {
        const T* src = x.plane(b, i);
        for (int kv = 0; kv < 3; ++kv) {
            for (int ku = 0; ku < 3; ++ku) {
                T* row = col + (static_cast<std::size_t>(i * 9 + kv * 3 + ku)) * col_stride + col_off;
                // valid output column range for this tap
                const int u_lo = ku == 0 ? 1 : 0;
                const int u_hi = std::min(ow - 1, (w - ku) / stride);
                for (int v = v0; v < v0 + vn; ++v) {
                    T* dst = row + static_cast<std::size_t>(v - v0) * ow;
                    const int iv = stride * v + kv - 1;
                    if (iv < 0 || iv >= h) {
                        std::fill(dst, dst + ow, T(0));
                        continue;
                    }
                    const T* srow = src + static_cast<std::size_t>(iv) * w;
                    if (u_lo > 0) std::fill(dst, dst + u_lo, T(0));
                    if (u_hi < ow - 1) std::fill(dst + u_hi + 1, dst + ow, T(0));
                    if (u_hi < u_lo) continue;
                    if (stride == 1) {
                        std::memcpy(dst + u_lo, srow + u_lo + ku - 1,
                                    static_cast<std::size_t>(u_hi - u_lo + 1) * sizeof(T));
                    } else {
                        for (int u = u_lo; u <= u_hi; ++u)
                            dst[u] = srow[2 * u + ku - 1];
                    }
                }
            }
        }
    }
}

// Scatter-add of the patch-matrix gradient back onto gx.
template <typename T>
void col2im_add_3x3(const T* col, std::size_t col_stride, std::size_t col_off,
                    Tensor<T>& gx, int b, int stride, int v0, int vn, int ow) {
    const int h = gx.nv, w = gx.nu;
    for (int i = 0; i < gx.nc; ++i) {
        T* dst_plane = gx.plane(b, i);
        for (int kv = 0; kv < 3; ++kv) {
            for (int ku = 0; ku < 3; ++ku) {
                const T* row = col + (static_cast<std::size_t>(i * 9 + kv * 3 + ku)) * col_stride + col_off;
                const int u_lo = ku == 0 ? 1 : 0;
                const int u_hi = std::min(ow - 1, (w - ku) / stride);
                for (int v = v0; v < v0 + vn; ++v) {
                    const int iv = stride * v + kv - 1;
                    if (iv < 0 || iv >= h) continue;
                    const T* srow = row + static_cast<std::size_t>(v - v0) * ow;
                    T* drow = dst_plane + static_cast<std::size_t>(iv) * w;
                    if (stride == 1) {
                        for (int u = u_lo; u <= u_hi; ++u)
                            drow[u + ku - 1] += srow[u];
                    } else {
                        for (int u = u_lo; u <= u_hi; ++u)
                            drow[2 * u + ku - 1] += srow[u];
                    }
                }
            }
        }
    }
}

// Fold the whole batch into one GEMM when the per-item pixel count is small;
// above the threshold, per-item GEMMs write into the output in place.
constexpr int kBatchFoldPixels = 1024;
constexpr std::size_t kSlabBytes = std::size_t(16) << 20;

template <typename T>
int slab_rows(int k, int ow, int oh) {
    const std::size_t max_cols = std::max<std::size_t>(
        ow, kSlabBytes / (static_cast<std::size_t>(k) * sizeof(T)));
    return std::clamp<int>(static_cast<int>(max_cols / ow), 1, oh);
}

template <typename T>
void conv_forward(const Tensor<T>& x, const Tensor<T>& w, int stride,
                  Tensor<T>& out, T beta) {
    const ConvDims d = conv_dims(x, w, stride);
    const std::size_t hw = static_cast<std::size_t>(d.oh) * d.ow;

    if (x.nb > 1 && hw <= kBatchFoldPixels) {
        const std::size_t n = hw * x.nb;
        std::vector<T> col(static_cast<std::size_t>(d.k) * n);
        for (int b = 0; b < x.nb; ++b)
            im2col_3x3(x, b, stride, 0, d.oh, d.ow, col.data(), n, b * hw);
        std::vector<T> y(static_cast<std::size_t>(d.oc) * n);
        gemm(false, false, d.oc, static_cast<int>(n), d.k, T(1), w.data.data(),
             d.k, col.data(), static_cast<int>(n), T(0), y.data(),
             static_cast<int>(n));
        for (int b = 0; b < x.nb; ++b)
            for (int o = 0; o < d.oc; ++o) {
                const T* src = y.data() + o * n + b * hw;
                T* dst = out.plane(b, o);
                if (beta == T(0)) {
                    std::memcpy(dst, src, hw * sizeof(T));
                } else {
                    for (std::size_t p = 0; p < hw; ++p) dst[p] += src[p];
                }
            }
        return;
    }

    const int vn_max = slab_rows<T>(d.k, d.ow, d.oh);
    std::vector<T> col(static_cast<std::size_t>(d.k) * vn_max * d.ow);
    for (int b = 0; b < x.nb; ++b) {
        for (int v0 = 0; v0 < d.oh; v0 += vn_max) {
            const int vn = std::min(vn_max, d.oh - v0);
            const std::size_t n = static_cast<std::size_t>(vn) * d.ow;
            im2col_3x3(x, b, stride, v0, vn, d.ow, col.data(), n, 0);
            gemm(false, false, d.oc, static_cast<int>(n), d.k, T(1),
                 w.data.data(), d.k, col.data(), static_cast<int>(n), beta,
                 out.plane(b, 0) + static_cast<std::size_t>(v0) * d.ow,
                 static_cast<int>(hw));
        }
    }
}

} // namespace

template <typename T>
Tensor<T> conv3x3(const Tensor<T>& x, const Tensor<T>& weight,
                  std::span<const T> bias, int stride) {
    const ConvDims d = conv_dims(x, weight, stride);
    if (!bias.empty() && static_cast<int>(bias.size()) != d.oc)
        throw ConfigError("conv3x3: bias size " + std::to_string(bias.size()) +
                          " does not match " + std::to_string(d.oc) + " output channels");
    Tensor<T> out(x.nb, d.oc, d.oh, d.ow);
    conv_forward(x, weight, stride, out, T(0));
    if (!bias.empty()) {
        const std::size_t hw = static_cast<std::size_t>(d.oh) * d.ow;
        for (int b = 0; b < x.nb; ++b)
            for (int o = 0; o < d.oc; ++o) {
                T* p = out.plane(b, o);
                const T bo = bias[o];
                for (std::size_t i = 0; i < hw; ++i) p[i] += bo;
            }
    }
    return out;
}

template <typename T>
void conv3x3_add(const Tensor<T>& x, const Tensor<T>& weight, int stride,
                 Tensor<T>& out) {
    const ConvDims d = conv_dims(x, weight, stride);
    if (out.nb != x.nb || out.nc != d.oc || out.nv != d.oh || out.nu != d.ow)
        throw ConfigError("conv3x3_add: output shape mismatch");
    conv_forward(x, weight, stride, out, T(1));
}

template <typename T>
void conv3x3_backward(const Tensor<T>& x, const Tensor<T>& weight,
                      const Tensor<T>& gy, int stride, Tensor<T>* gx,
                      std::span<T> gw, std::span<T> gb) {
    const ConvDims d = conv_dims(x, weight, stride);
    if (gy.nb != x.nb || gy.nc != d.oc || gy.nv != d.oh || gy.nu != d.ow)
        throw ConfigError("conv3x3_backward: upstream gradient does not match the recorded forward output");
    if (!gb.empty() && static_cast<int>(gb.size()) != d.oc)
        throw ConfigError("conv3x3_backward: bias gradient size mismatch");
    if (gx) {
        if (gx->size() == 0) *gx = Tensor<T>(x.nb, x.nc, x.nv, x.nu);
        else if (!gx->same_shape(x))
            throw ConfigError("conv3x3_backward: gx shape mismatch");
    }
    if (!gw.empty() && gw.size() != weight.size())
        throw ConfigError("conv3x3_backward: gw buffer size mismatch");

    const std::size_t hw = static_cast<std::size_t>(d.oh) * d.ow;

    if (!gb.empty()) {
        for (int b = 0; b < gy.nb; ++b)
            for (int o = 0; o < d.oc; ++o) {
                const T* p = gy.plane(b, o);
                T s = 0;
                for (std::size_t i = 0; i < hw; ++i) s += p[i];
                gb[o] += s;
            }
    }
    if (!gx && gw.empty()) return;

    if (x.nb > 1 && hw <= kBatchFoldPixels) {
        const std::size_t n = hw * x.nb;
        std::vector<T> col(static_cast<std::size_t>(d.k) * n);
        for (int b = 0; b < x.nb; ++b)
            im2col_3x3(x, b, stride, 0, d.oh, d.ow, col.data(), n, b * hw);
        // regroup gy as (oc, nb*hw)
        std::vector<T> gyp(static_cast<std::size_t>(d.oc) * n);
        for (int b = 0; b < x.nb; ++b)
            for (int o = 0; o < d.oc; ++o)
                std::memcpy(gyp.data() + o * n + b * hw, gy.plane(b, o),
                            hw * sizeof(T));
        if (!gw.empty())
            gemm(false, true, d.oc, d.k, static_cast<int>(n), T(1), gyp.data(),
                 static_cast<int>(n), col.data(), static_cast<int>(n), T(1),
                 gw.data(), d.k);
        if (gx) {
            std::vector<T>& gcol = col; // reuse
            std::vector<T> tmp(static_cast<std::size_t>(d.k) * n);
            gemm(true, false, d.k, static_cast<int>(n), d.oc, T(1),
                 weight.data.data(), d.k, gyp.data(), static_cast<int>(n),
                 T(0), tmp.data(), static_cast<int>(n));
            gcol.swap(tmp);
            for (int b = 0; b < x.nb; ++b)
                col2im_add_3x3(gcol.data(), n, b * hw, *gx, b, stride, 0, d.oh,
                               d.ow);
        }
        return;
    }

    const int vn_max = slab_rows<T>(d.k, d.ow, d.oh);
    std::vector<T> col(static_cast<std::size_t>(d.k) * vn_max * d.ow);
    std::vector<T> gcol(gx ? col.size() : 0);
    for (int b = 0; b < x.nb; ++b) {
        for (int v0 = 0; v0 < d.oh; v0 += vn_max) {
            const int vn = std::min(vn_max, d.oh - v0);
            const std::size_t n = static_cast<std::size_t>(vn) * d.ow;
            const T* gy_slab = gy.plane(b, 0) + static_cast<std::size_t>(v0) * d.ow;
            im2col_3x3(x, b, stride, v0, vn, d.ow, col.data(), n, 0);
            if (!gw.empty())
                gemm(false, true, d.oc, d.k, static_cast<int>(n), T(1), gy_slab,
                     static_cast<int>(hw), col.data(), static_cast<int>(n),
                     T(1), gw.data(), d.k);
            if (gx) {
                gemm(true, false, d.k, static_cast<int>(n), d.oc, T(1),
                     weight.data.data(), d.k, gy_slab, static_cast<int>(hw),
                     T(0), gcol.data(), static_cast<int>(n));
                col2im_add_3x3(gcol.data(), n, 0, *gx, b, stride, v0, vn, d.ow);
            }
        }
    }
}

template <typename T>
Tensor<T> relu(const Tensor<T>& x) {
    Tensor<T> out(x.nb, x.nc, x.nv, x.nu);
    for (std::size_t i = 0; i < x.size(); ++i)
        out.data[i] = x.data[i] > T(0) ? x.data[i] : T(0);
    return out;
}

template <typename T>
Tensor<T> relu_backward(const Tensor<T>& y, const Tensor<T>& gy) {
    if (!y.same_shape(gy)) throw ConfigError("relu_backward: shape mismatch");
    Tensor<T> gx(y.nb, y.nc, y.nv, y.nu);
    for (std::size_t i = 0; i < y.size(); ++i)
        gx.data[i] = y.data[i] > T(0) ? gy.data[i] : T(0);
    return gx;
}

namespace {
// Source index pair and weights for one output coordinate under
// align-corners=false with border clamping. The fractional part is always
// 0.25 or 0.75; clamped border samples collapse onto the edge texel.
struct UpTap {
    int i0, i1;
    float w0, w1;
};

UpTap up_tap(int k, int n) {
    const bool odd = (k & 1) != 0;
    int i0 = odd ? k / 2 : k / 2 - 1;
    const float f = odd ? 0.25f : 0.75f;
    int i1 = i0 + 1;
    if (i0 < 0) i0 = 0;
    if (i1 > n - 1) i1 = n - 1;
    return {i0, i1, 1.0f - f, f};
}
} // namespace

template <typename T>
Tensor<T> bilinear_up2(const Tensor<T>& x) {
    const int oh = x.nv * 2, ow = x.nu * 2;
    Tensor<T> out(x.nb, x.nc, oh, ow);
    std::vector<UpTap> rows(oh), cols(ow);
    for (int r = 0; r < oh; ++r) rows[r] = up_tap(r, x.nv);
    for (int c = 0; c < ow; ++c) cols[c] = up_tap(c, x.nu);
    for (int b = 0; b < x.nb; ++b)
        for (int ch = 0; ch < x.nc; ++ch) {
            const T* src = x.plane(b, ch);
            T* dst = out.plane(b, ch);
            for (int r = 0; r < oh; ++r) {
                const UpTap& rv = rows[r];
                const T* s0 = src + static_cast<std::size_t>(rv.i0) * x.nu;
                const T* s1 = src + static_cast<std::size_t>(rv.i1) * x.nu;
                T* drow = dst + static_cast<std::size_t>(r) * ow;
                for (int c = 0; c < ow; ++c) {
                    const UpTap& cu = cols[c];
                    const T top = T(cu.w0) * s0[cu.i0] + T(cu.w1) * s0[cu.i1];
                    const T bot = T(cu.w0) * s1[cu.i0] + T(cu.w1) * s1[cu.i1];
                    drow[c] = T(rv.w0) * top + T(rv.w1) * bot;
                }
            }
        }
    return out;
}

template <typename T>
Tensor<T> bilinear_up2_backward(const Tensor<T>& gy) {
    if (gy.nv % 2 != 0 || gy.nu % 2 != 0)
        throw ConfigError("bilinear_up2_backward: gradient dims must be even");
    const int ih = gy.nv / 2, iw = gy.nu / 2;
    Tensor<T> gx(gy.nb, gy.nc, ih, iw);
    std::vector<UpTap> rows(gy.nv), cols(gy.nu);
    for (int r = 0; r < gy.nv; ++r) rows[r] = up_tap(r, ih);
    for (int c = 0; c < gy.nu; ++c) cols[c] = up_tap(c, iw);
    for (int b = 0; b < gy.nb; ++b)
        for (int ch = 0; ch < gy.nc; ++ch) {
            const T* src = gy.plane(b, ch);
            T* dst = gx.plane(b, ch);
            for (int r = 0; r < gy.nv; ++r) {
                const UpTap& rv = rows[r];
                T* d0 = dst + static_cast<std::size_t>(rv.i0) * iw;
                T* d1 = dst + static_cast<std::size_t>(rv.i1) * iw;
                for (int c = 0; c < gy.nu; ++c) {
                    const UpTap& cu = cols[c];
                    const T g = src[static_cast<std::size_t>(r) * gy.nu + c];
                    d0[cu.i0] += T(rv.w0) * T(cu.w0) * g;
                    d0[cu.i1] += T(rv.w0) * T(cu.w1) * g;
                    d1[cu.i0] += T(rv.w1) * T(cu.w0) * g;
                    d1[cu.i1] += T(rv.w1) * T(cu.w1) * g;
                }
            }
        }
    return gx;
}

template <typename T>
Tensor<T> bilinear_down_half(const Tensor<T>& x) {
    if (x.nv % 2 != 0 || x.nu % 2 != 0)
        throw ConfigError("bilinear_down_half: spatial dims must be even, got " +
                          std::to_string(x.nv) + "x" + std::to_string(x.nu));
    const int oh = x.nv / 2, ow = x.nu / 2;
    Tensor<T> out(x.nb, x.nc, oh, ow);
    for (int b = 0; b < x.nb; ++b)
        for (int ch = 0; ch < x.nc; ++ch) {
            const T* src = x.plane(b, ch);
            T* dst = out.plane(b, ch);
            for (int v = 0; v < oh; ++v) {
                const T* r0 = src + static_cast<std::size_t>(2 * v) * x.nu;
                const T* r1 = r0 + x.nu;
                for (int u = 0; u < ow; ++u)
                    dst[static_cast<std::size_t>(v) * ow + u] =
                        ((r0[2 * u] + r0[2 * u + 1]) + (r1[2 * u] + r1[2 * u + 1])) * T(0.25);
            }
        }
    return out;
}

template <typename T>
Tensor<T> bilinear_down_half_backward(const Tensor<T>& gy) {
    Tensor<T> gx(gy.nb, gy.nc, gy.nv * 2, gy.nu * 2);
    for (int b = 0; b < gy.nb; ++b)
        for (int ch = 0; ch < gy.nc; ++ch) {
            const T* src = gy.plane(b, ch);
            T* dst = gx.plane(b, ch);
            for (int v = 0; v < gy.nv; ++v)
                for (int u = 0; u < gy.nu; ++u) {
                    const T g = src[static_cast<std::size_t>(v) * gy.nu + u] * T(0.25);
                    T* d0 = dst + static_cast<std::size_t>(2 * v) * gx.nu + 2 * u;
                    d0[0] += g;
                    d0[1] += g;
                    d0[gx.nu] += g;
                    d0[gx.nu + 1] += g;
                }
        }
    return gx;
}

template <typename T>
T weighted_mse(const Tensor<T>& x, const Tensor<T>& t, const Tensor<T>& w,
               Tensor<T>* gx, T grad_scale) {
    if (!x.same_shape(t) || !x.same_shape(w))
        throw ConfigError("weighted_mse: shape mismatch");
    const double inv = 1.0 / static_cast<double>(x.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = static_cast<double>(x.data[i]) - static_cast<double>(t.data[i]);
        sum += static_cast<double>(w.data[i]) * d * d;
    }
    if (gx) {
        if (!gx->same_shape(x)) *gx = Tensor<T>(x.nb, x.nc, x.nv, x.nu);
        const T factor = static_cast<T>(2.0 * inv) * grad_scale;
        for (std::size_t i = 0; i < x.size(); ++i)
            gx->data[i] = factor * w.data[i] * (x.data[i] - t.data[i]);
    }
    return static_cast<T>(sum * inv);
}

template <typename T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b) {
    if (a.nb != b.nb || a.nv != b.nv || a.nu != b.nu)
        throw ConfigError("concat_channels: spatial/batch mismatch");
    Tensor<T> out(a.nb, a.nc + b.nc, a.nv, a.nu);
    const std::size_t hw = static_cast<std::size_t>(a.nv) * a.nu;
    for (int i = 0; i < a.nb; ++i) {
        std::memcpy(out.plane(i, 0), a.plane(i, 0), hw * a.nc * sizeof(T));
        std::memcpy(out.plane(i, a.nc), b.plane(i, 0), hw * b.nc * sizeof(T));
    }
    return out;
}

template <typename T>
void add_inplace(Tensor<T>& a, const Tensor<T>& b) {
    if (!a.same_shape(b)) throw ConfigError("add_inplace: shape mismatch");
    for (std::size_t i = 0; i < a.size(); ++i) a.data[i] += b.data[i];
}

template <typename T>
Tensor<T> pad_bottom_right(const Tensor<T>& x, int new_v, int new_u, T fill) {
    if (new_v < x.nv || new_u < x.nu)
        throw ConfigError("pad_bottom_right: target smaller than input");
    Tensor<T> out(x.nb, x.nc, new_v, new_u);
    out.fill(fill);
    for (int b = 0; b < x.nb; ++b)
        for (int c = 0; c < x.nc; ++c)
            for (int v = 0; v < x.nv; ++v)
                std::memcpy(out.plane(b, c) + static_cast<std::size_t>(v) * new_u,
                            x.plane(b, c) + static_cast<std::size_t>(v) * x.nu,
                            static_cast<std::size_t>(x.nu) * sizeof(T));
    return out;
}

template <typename T>
Tensor<T> crop(const Tensor<T>& x, int v0, int u0, int height, int width) {
    if (v0 < 0 || u0 < 0 || v0 + height > x.nv || u0 + width > x.nu)
        throw ConfigError("crop: window outside tensor");
    Tensor<T> out(x.nb, x.nc, height, width);
    for (int b = 0; b < x.nb; ++b)
        for (int c = 0; c < x.nc; ++c)
            for (int v = 0; v < height; ++v)
                std::memcpy(out.plane(b, c) + static_cast<std::size_t>(v) * width,
                            x.plane(b, c) + static_cast<std::size_t>(v0 + v) * x.nu + u0,
                            static_cast<std::size_t>(width) * sizeof(T));
    return out;
}

template struct Tensor<float>;
template struct Tensor<double>;

#define IBF_INSTANTIATE(T)                                                         \
    template Tensor<T> conv3x3(const Tensor<T>&, const Tensor<T>&,                \
                               std::span<const T>, int);                          \
    template void conv3x3_add(const Tensor<T>&, const Tensor<T>&, int,            \
                              Tensor<T>&);                                        \
    template void conv3x3_backward(const Tensor<T>&, const Tensor<T>&,            \
                                   const Tensor<T>&, int, Tensor<T>*,           \
                                   std::span<T>, std::span<T>);                   \
    template Tensor<T> relu(const Tensor<T>&);                                    \
    template Tensor<T> relu_backward(const Tensor<T>&, const Tensor<T>&);         \
    template Tensor<T> bilinear_up2(const Tensor<T>&);                            \
    template Tensor<T> bilinear_up2_backward(const Tensor<T>&);                   \
    template Tensor<T> bilinear_down_half(const Tensor<T>&);                      \
    template Tensor<T> bilinear_down_half_backward(const Tensor<T>&);             \
    template T weighted_mse(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&, \
                            Tensor<T>*, T);                                       \
    template Tensor<T> concat_channels(const Tensor<T>&, const Tensor<T>&);       \
    template void add_inplace(Tensor<T>&, const Tensor<T>&);                      \
    template Tensor<T> pad_bottom_right(const Tensor<T>&, int, int, T);           \
    template Tensor<T> crop(const Tensor<T>&, int, int, int, int);

IBF_INSTANTIATE(float)
IBF_INSTANTIATE(double)
#undef IBF_INSTANTIATE

} // namespace ibf
