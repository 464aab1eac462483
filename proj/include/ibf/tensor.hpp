#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "ibf/common.hpp"

namespace ibf {

// Dense rank-4 tensor, (batch, channel, row, column), row-major. The scalar
// type is float in production; the double instantiation exists for the
// finite-difference check mode and carries the same semantics bit for bit
// apart from precision.
template <typename T>
struct Tensor {
    int nb = 0, nc = 0, nv = 0, nu = 0;
    std::vector<T> data;
    std::vector<T> grad; // optional; empty or same length as data

    Tensor() = default;
    Tensor(int b, int c, int v, int u)
        : nb(b), nc(c), nv(v), nu(u),
          data(static_cast<std::size_t>(b) * c * v * u, T(0)) {}

    std::size_t size() const { return data.size(); }
    bool same_shape(const Tensor& o) const {
        return nb == o.nb && nc == o.nc && nv == o.nv && nu == o.nu;
    }

    std::size_t index(int b, int c, int v, int u) const {
        return ((static_cast<std::size_t>(b) * nc + c) * nv + v) * nu + u;
    }
    T& at(int b, int c, int v, int u) { return data[index(b, c, v, u)]; }
    const T& at(int b, int c, int v, int u) const { return data[index(b, c, v, u)]; }

    // Start of the (b, c) plane.
    T* plane(int b, int c) { return data.data() + index(b, c, 0, 0); }
    const T* plane(int b, int c) const { return data.data() + index(b, c, 0, 0); }

    void ensure_grad() {
        if (grad.size() != data.size()) grad.assign(data.size(), T(0));
    }
    void zero_grad() { grad.assign(grad.size(), T(0)); }
    void fill(T v) { data.assign(data.size(), v); }
};

// 3x3 convolution with zero padding of 1 on every border. stride is 1 or 2;
// stride 2 requires even spatial dims and anchors the sampling grid at index
// 0: output (v, u) reads the window centered on input (stride*v, stride*u).
// weight has shape (out_ch, in_ch, 3, 3), bias has out_ch entries.
template <typename T>
Tensor<T> conv3x3(const Tensor<T>& x, const Tensor<T>& weight,
                  std::span<const T> bias, int stride);

// Same convolution without bias, accumulated into an existing output.
template <typename T>
void conv3x3_add(const Tensor<T>& x, const Tensor<T>& weight, int stride,
                 Tensor<T>& out);

// Reverse of conv3x3. gy is the gradient at the forward output; gradients are
// accumulated (+=) into whichever of gx / gw / gb is provided. gx may be an
// empty tensor, in which case it is allocated and zeroed first; gw must view
// a buffer of weight.size() entries (e.g. the weight tensor's grad slot).
template <typename T>
void conv3x3_backward(const Tensor<T>& x, const Tensor<T>& weight,
                      const Tensor<T>& gy, int stride,
                      Tensor<T>* gx, std::span<T> gw, std::span<T> gb);

template <typename T>
Tensor<T> relu(const Tensor<T>& x);

// y is the forward output; the subgradient at 0 is 0, so masking on y > 0 is
// exact.
template <typename T>
Tensor<T> relu_backward(const Tensor<T>& y, const Tensor<T>& gy);

// Doubles both spatial dims. align-corners=false: output sample k lies at
// (k + 0.5) / 2 - 0.5 in input coordinates, with border samples clamped.
template <typename T>
Tensor<T> bilinear_up2(const Tensor<T>& x);

// Scatters gy (at the doubled resolution) back to the half-resolution grid.
template <typename T>
Tensor<T> bilinear_up2_backward(const Tensor<T>& gy);

// 2x2 box average; spatial dims must be even.
template <typename T>
Tensor<T> bilinear_down_half(const Tensor<T>& x);

template <typename T>
Tensor<T> bilinear_down_half_backward(const Tensor<T>& gy);

// L = sum(w .* (x - t)^2) / numel(x). When gx is given it is assigned
// dL/dx = 2 w (x - t) / numel, times grad_scale.
template <typename T>
T weighted_mse(const Tensor<T>& x, const Tensor<T>& t, const Tensor<T>& w,
               Tensor<T>* gx = nullptr, T grad_scale = T(1));

// Channel concatenation of two tensors with identical (nb, nv, nu).
template <typename T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b);

template <typename T>
void add_inplace(Tensor<T>& a, const Tensor<T>& b);

// Grow to (new_v, new_u) keeping the origin at top-left, filling with `fill`.
template <typename T>
Tensor<T> pad_bottom_right(const Tensor<T>& x, int new_v, int new_u, T fill);

// Extract the (height x width) window at rows v0.., cols u0...
template <typename T>
Tensor<T> crop(const Tensor<T>& x, int v0, int u0, int height, int width);

extern template struct Tensor<float>;
extern template struct Tensor<double>;

} // namespace ibf
