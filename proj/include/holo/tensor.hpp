#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <span>
#include <unordered_set>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "holo/common.hpp"
#include "holo/fft.hpp"

namespace holo {

// ---------------------------------------------------------------------------
// Minimal reverse-mode autodiff over dense real tensors.
//
// Each Tensor is a handle to a Node holding the value, an optional gradient
// buffer and, for op results, a backward closure plus links to its parents.
// The graph is a per-iteration tape: it lives as long as the result tensors
// and is dropped wholesale at the end of an epoch. backward() walks the tape
// in reverse topological order. Leaf gradients accumulate across calls;
// intermediate gradients are transient per call.
// ---------------------------------------------------------------------------

template <typename T>
struct TensorNode {
    std::vector<int> shape;
    std::vector<T> value;
    std::vector<T> grad;  // allocated on first use; same length as value
    bool requires_grad = false;
    std::vector<std::shared_ptr<TensorNode>> parents;
    std::function<void(TensorNode&)> backward;  // reads grad, accumulates into parents

    long long numel() const { return static_cast<long long>(value.size()); }

    void ensure_grad() {
        if (grad.size() != value.size()) grad.assign(value.size(), T(0));
    }
};

template <typename T>
class Tensor {
public:
    using Node = TensorNode<T>;

    Tensor() = default;

    static Tensor zeros(std::vector<int> shape) {
        return filled(std::move(shape), T(0));
    }

    static Tensor filled(std::vector<int> shape, T v) {
        auto n = std::make_shared<Node>();
        n->value.assign(static_cast<size_t>(numel_of(shape)), v);
        n->shape = std::move(shape);
        return Tensor(std::move(n));
    }

    static Tensor from(std::vector<int> shape, std::vector<T> data) {
        if (numel_of(shape) != static_cast<long long>(data.size()))
            fail("Tensor::from: shape " + shape_str(shape) + " does not match data length " +
                 std::to_string(data.size()));
        auto n = std::make_shared<Node>();
        n->shape = std::move(shape);
        n->value = std::move(data);
        return Tensor(std::move(n));
    }

    static Tensor scalar(T v) { return from({1}, {v}); }

    /// Leaf tensor participating in gradient computation.
    static Tensor param(std::vector<int> shape, std::vector<T> data) {
        Tensor t = from(std::move(shape), std::move(data));
        t.node_->requires_grad = true;
        return t;
    }

    bool defined() const { return node_ != nullptr; }
    const std::vector<int>& shape() const { return node_->shape; }
    long long numel() const { return node_->numel(); }
    bool requires_grad() const { return node_->requires_grad; }

    std::span<const T> values() const { return {node_->value.data(), node_->value.size()}; }
    /// Mutable access; meant for leaves (parameter init, optimizer updates).
    std::span<T> values_mut() { return {node_->value.data(), node_->value.size()}; }

    bool has_grad() const { return node_->grad.size() == node_->value.size(); }
    std::span<const T> grad() const {
        if (!has_grad()) fail("Tensor::grad: no gradient present");
        return {node_->grad.data(), node_->grad.size()};
    }
    std::span<T> grad_mut() {
        node_->ensure_grad();
        return {node_->grad.data(), node_->grad.size()};
    }
    void zero_grad() {
        if (has_grad()) std::fill(node_->grad.begin(), node_->grad.end(), T(0));
    }

    T item() const {
        if (numel() != 1) fail("Tensor::item: tensor " + shape_str(shape()) + " is not scalar");
        return node_->value[0];
    }

    /// Value-identical tensor cut off from the graph: no backward record, no
    /// gradient flows through it.
    Tensor detach() const {
        auto n = std::make_shared<Node>();
        n->shape = node_->shape;
        n->value = node_->value;
        return Tensor(std::move(n));
    }

    /// Reverse pass from a scalar. Leaf gradients accumulate across repeated
    /// calls; intermediate gradients are reset per call.
    void backward() const {
        if (numel() != 1) fail("backward: loss must be scalar, got " + shape_str(shape()));
        if (!node_->requires_grad) return;

        // Iterative post-order DFS for reverse topological order.
        std::vector<Node*> order;
        std::unordered_set<Node*> visited;
        std::vector<std::pair<Node*, size_t>> stack{{node_.get(), 0}};
        visited.insert(node_.get());
        while (!stack.empty()) {
            auto& [n, i] = stack.back();
            if (i < n->parents.size()) {
                Node* p = n->parents[i++].get();
                if (p->requires_grad && !visited.count(p)) {
                    visited.insert(p);
                    stack.push_back({p, 0});
                }
            } else {
                order.push_back(n);
                stack.pop_back();
            }
        }

        // Clear transient gradients of interior nodes (leaves keep theirs).
        for (Node* n : order) {
            if (n->backward) n->grad.assign(n->value.size(), T(0));
        }
        node_->ensure_grad();
        node_->grad[0] += T(1);

        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            Node* n = *it;
            if (n->backward && !n->grad.empty()) n->backward(*n);
        }
    }

    std::shared_ptr<Node> node() const { return node_; }
    explicit Tensor(std::shared_ptr<Node> n) : node_(std::move(n)) {}

private:
    std::shared_ptr<Node> node_;
};

namespace detail {

template <typename T>
Tensor<T> make_result(std::vector<int> shape, std::vector<T> value,
                      std::vector<Tensor<T>> inputs,
                      std::function<void(TensorNode<T>&)> backward) {
    auto n = std::make_shared<TensorNode<T>>();
    n->shape = std::move(shape);
    n->value = std::move(value);
    bool needs = false;
    for (const auto& in : inputs) needs = needs || in.requires_grad();
    if (needs) {
        n->requires_grad = true;
        for (auto& in : inputs) n->parents.push_back(in.node());
        n->backward = std::move(backward);
    }
    return Tensor<T>(std::move(n));
}

template <typename T>
void check_same_shape(const char* op, const Tensor<T>& a, const Tensor<T>& b) {
    if (a.shape() != b.shape())
        fail(std::string(op) + ": shape mismatch " + shape_str(a.shape()) + " vs " +
             shape_str(b.shape()));
}

}  // namespace detail

// -------------------------------- elementwise ------------------------------

template <typename T>
Tensor<T> add(const Tensor<T>& a, const Tensor<T>& b) {
    detail::check_same_shape("add", a, b);
    const auto av = a.values();
    const auto bv = b.values();
    std::vector<T> out(av.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = av[i] + bv[i];
    auto an = a.node();
    auto bn = b.node();
    return detail::make_result<T>(
        a.shape(), std::move(out), {a, b}, [an, bn](TensorNode<T>& self) {
            if (an->requires_grad) {
                an->ensure_grad();
                for (size_t i = 0; i < self.grad.size(); ++i) an->grad[i] += self.grad[i];
            }
            if (bn->requires_grad) {
                bn->ensure_grad();
                for (size_t i = 0; i < self.grad.size(); ++i) bn->grad[i] += self.grad[i];
            }
        });
}

template <typename T>
Tensor<T> sub(const Tensor<T>& a, const Tensor<T>& b) {
    detail::check_same_shape("sub", a, b);
    const auto av = a.values();
    const auto bv = b.values();
    std::vector<T> out(av.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = av[i] - bv[i];
    auto an = a.node();
    auto bn = b.node();
    return detail::make_result<T>(
        a.shape(), std::move(out), {a, b}, [an, bn](TensorNode<T>& self) {
            if (an->requires_grad) {
                an->ensure_grad();
                for (size_t i = 0; i < self.grad.size(); ++i) an->grad[i] += self.grad[i];
            }
            if (bn->requires_grad) {
                bn->ensure_grad();
                for (size_t i = 0; i < self.grad.size(); ++i) bn->grad[i] -= self.grad[i];
            }
        });
}

template <typename T>
Tensor<T> mul(const Tensor<T>& a, const Tensor<T>& b) {
    detail::check_same_shape("mul", a, b);
    const auto av = a.values();
    const auto bv = b.values();
    std::vector<T> out(av.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = av[i] * bv[i];
    auto an = a.node();
    auto bn = b.node();
    return detail::make_result<T>(
        a.shape(), std::move(out), {a, b}, [an, bn](TensorNode<T>& self) {
            if (an->requires_grad) {
                an->ensure_grad();
                for (size_t i = 0; i < self.grad.size(); ++i)
                    an->grad[i] += self.grad[i] * bn->value[i];
            }
            if (bn->requires_grad) {
                bn->ensure_grad();
                for (size_t i = 0; i < self.grad.size(); ++i)
                    bn->grad[i] += self.grad[i] * an->value[i];
            }
        });
}

/// out = a * c for a plain constant c.
template <typename T>
Tensor<T> scale(const Tensor<T>& a, T c) {
    const auto av = a.values();
    std::vector<T> out(av.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = av[i] * c;
    auto an = a.node();
    return detail::make_result<T>(a.shape(), std::move(out), {a}, [an, c](TensorNode<T>& self) {
        an->ensure_grad();
        for (size_t i = 0; i < self.grad.size(); ++i) an->grad[i] += self.grad[i] * c;
    });
}

template <typename T>
Tensor<T> leaky_relu(const Tensor<T>& a, T slope) {
    const auto av = a.values();
    std::vector<T> out(av.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = av[i] >= T(0) ? av[i] : slope * av[i];
    auto an = a.node();
    return detail::make_result<T>(
        a.shape(), std::move(out), {a}, [an, slope](TensorNode<T>& self) {
            an->ensure_grad();
            for (size_t i = 0; i < self.grad.size(); ++i)
                an->grad[i] += self.grad[i] * (an->value[i] >= T(0) ? T(1) : slope);
        });
}

template <typename T>
Tensor<T> relu(const Tensor<T>& a) {
    return leaky_relu(a, T(0));
}

template <typename T>
Tensor<T> tanh(const Tensor<T>& a) {
    const auto av = a.values();
    std::vector<T> out(av.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = std::tanh(av[i]);
    auto an = a.node();
    return detail::make_result<T>(a.shape(), std::move(out), {a}, [an](TensorNode<T>& self) {
        an->ensure_grad();
        for (size_t i = 0; i < self.grad.size(); ++i)
            an->grad[i] += self.grad[i] * (T(1) - self.value[i] * self.value[i]);
    });
}

template <typename T>
Tensor<T> sigmoid(const Tensor<T>& a) {
    const auto av = a.values();
    std::vector<T> out(av.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = T(1) / (T(1) + std::exp(-av[i]));
    auto an = a.node();
    return detail::make_result<T>(a.shape(), std::move(out), {a}, [an](TensorNode<T>& self) {
        an->ensure_grad();
        for (size_t i = 0; i < self.grad.size(); ++i) {
            T s = self.value[i];
            an->grad[i] += self.grad[i] * s * (T(1) - s);
        }
    });
}

template <typename T>
Tensor<T> square(const Tensor<T>& a) {
    const auto av = a.values();
    std::vector<T> out(av.size());
    for (size_t i = 0; i < out.size(); ++i) out[i] = av[i] * av[i];
    auto an = a.node();
    return detail::make_result<T>(a.shape(), std::move(out), {a}, [an](TensorNode<T>& self) {
        an->ensure_grad();
        for (size_t i = 0; i < self.grad.size(); ++i)
            an->grad[i] += self.grad[i] * T(2) * an->value[i];
    });
}

// -------------------------------- reductions -------------------------------

template <typename T>
Tensor<T> sum(const Tensor<T>& a) {
    const auto av = a.values();
    T s = 0;
    for (T v : av) s += v;
    auto an = a.node();
    return detail::make_result<T>({1}, {s}, {a}, [an](TensorNode<T>& self) {
        an->ensure_grad();
        const T g = self.grad[0];
        for (size_t i = 0; i < an->grad.size(); ++i) an->grad[i] += g;
    });
}

template <typename T>
Tensor<T> mean(const Tensor<T>& a) {
    const auto av = a.values();
    T s = 0;
    for (T v : av) s += v;
    const T inv_n = T(1) / static_cast<T>(av.size());
    auto an = a.node();
    return detail::make_result<T>({1}, {s * inv_n}, {a}, [an, inv_n](TensorNode<T>& self) {
        an->ensure_grad();
        const T g = self.grad[0] * inv_n;
        for (size_t i = 0; i < an->grad.size(); ++i) an->grad[i] += g;
    });
}

/// Mean of squared differences; the metric d(.,.) used for hologram fitting.
template <typename T>
Tensor<T> mse(const Tensor<T>& a, const Tensor<T>& b) {
    detail::check_same_shape("mse", a, b);
    return mean(square(sub(a, b)));
}

// -------------------------------- shape ops --------------------------------

/// Channels [c0, c1) of a CHW tensor.
template <typename T>
Tensor<T> slice_channels(const Tensor<T>& a, int c0, int c1) {
    const auto& sh = a.shape();
    if (sh.size() != 3 || c0 < 0 || c1 > sh[0] || c0 >= c1)
        fail("slice_channels: invalid slice [" + std::to_string(c0) + "," + std::to_string(c1) +
             ") of " + shape_str(sh));
    const int hw = sh[1] * sh[2];
    const auto av = a.values();
    std::vector<T> out(av.begin() + static_cast<size_t>(c0) * hw,
                       av.begin() + static_cast<size_t>(c1) * hw);
    auto an = a.node();
    return detail::make_result<T>(
        {c1 - c0, sh[1], sh[2]}, std::move(out), {a}, [an, c0, hw](TensorNode<T>& self) {
            an->ensure_grad();
            const size_t off = static_cast<size_t>(c0) * hw;
            for (size_t i = 0; i < self.grad.size(); ++i) an->grad[off + i] += self.grad[i];
        });
}

template <typename T>
Tensor<T> concat_channels(const Tensor<T>& a, const Tensor<T>& b) {
    const auto& sa = a.shape();
    const auto& sb = b.shape();
    if (sa.size() != 3 || sb.size() != 3 || sa[1] != sb[1] || sa[2] != sb[2])
        fail("concat_channels: incompatible shapes " + shape_str(sa) + " and " + shape_str(sb));
    std::vector<T> out;
    out.reserve(a.values().size() + b.values().size());
    out.insert(out.end(), a.values().begin(), a.values().end());
    out.insert(out.end(), b.values().begin(), b.values().end());
    auto an = a.node();
    auto bn = b.node();
    const size_t na = a.values().size();
    return detail::make_result<T>(
        {sa[0] + sb[0], sa[1], sa[2]}, std::move(out), {a, b},
        [an, bn, na](TensorNode<T>& self) {
            if (an->requires_grad) {
                an->ensure_grad();
                for (size_t i = 0; i < na; ++i) an->grad[i] += self.grad[i];
            }
            if (bn->requires_grad) {
                bn->ensure_grad();
                for (size_t i = na; i < self.grad.size(); ++i) bn->grad[i - na] += self.grad[i];
            }
        });
}

// -------------------------------- linear algebra ---------------------------

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// C[m,n] = A[m,k] . B[k,n]
template <typename T>
Tensor<T> matmul(const Tensor<T>& a, const Tensor<T>& b) {
    const auto& sa = a.shape();
    const auto& sb = b.shape();
    if (sa.size() != 2 || sb.size() != 2 || sa[1] != sb[0])
        fail("matmul: shape mismatch " + shape_str(sa) + " vs " + shape_str(sb));
    const int m = sa[0], k = sa[1], n = sb[1];
    std::vector<T> out(static_cast<size_t>(m) * n);
    {
        Eigen::Map<const RowMat<T>> A(a.values().data(), m, k);
        Eigen::Map<const RowMat<T>> B(b.values().data(), k, n);
        Eigen::Map<RowMat<T>> C(out.data(), m, n);
        C.noalias() = A * B;
    }
    auto an = a.node();
    auto bn = b.node();
    return detail::make_result<T>(
        {m, n}, std::move(out), {a, b}, [an, bn, m, k, n](TensorNode<T>& self) {
            Eigen::Map<const RowMat<T>> G(self.grad.data(), m, n);
            if (an->requires_grad) {
                an->ensure_grad();
                Eigen::Map<const RowMat<T>> B(bn->value.data(), k, n);
                Eigen::Map<RowMat<T>> dA(an->grad.data(), m, k);
                dA.noalias() += G * B.transpose();
            }
            if (bn->requires_grad) {
                bn->ensure_grad();
                Eigen::Map<const RowMat<T>> A(an->value.data(), m, k);
                Eigen::Map<RowMat<T>> dB(bn->grad.data(), k, n);
                dB.noalias() += A.transpose() * G;
            }
        });
}

namespace detail {

/// im2col for CHW input: col is row-major [C*kh*kw, Ho*Wo].
template <typename T>
void im2col(const T* x, int c_in, int h, int w, int kh, int kw, int stride, int pad,
            int ho, int wo, T* col) {
    const long long m = static_cast<long long>(ho) * wo;
    for (int c = 0; c < c_in; ++c) {
        for (int ki = 0; ki < kh; ++ki) {
            for (int kj = 0; kj < kw; ++kj) {
                T* row = col + ((static_cast<long long>(c) * kh + ki) * kw + kj) * m;
                const T* xc = x + static_cast<long long>(c) * h * w;
                long long idx = 0;
                for (int oi = 0; oi < ho; ++oi) {
                    const int ii = oi * stride - pad + ki;
                    if (ii < 0 || ii >= h) {
                        for (int oj = 0; oj < wo; ++oj) row[idx++] = T(0);
                        continue;
                    }
                    for (int oj = 0; oj < wo; ++oj) {
                        const int jj = oj * stride - pad + kj;
                        row[idx++] = (jj >= 0 && jj < w) ? xc[ii * w + jj] : T(0);
                    }
                }
            }
        }
    }
}

/// Transpose of im2col: scatter-add col gradient back into the input layout.
template <typename T>
void col2im_add(const T* col, int c_in, int h, int w, int kh, int kw, int stride, int pad,
                int ho, int wo, T* dx) {
    const long long m = static_cast<long long>(ho) * wo;
    for (int c = 0; c < c_in; ++c) {
        for (int ki = 0; ki < kh; ++ki) {
            for (int kj = 0; kj < kw; ++kj) {
                const T* row = col + ((static_cast<long long>(c) * kh + ki) * kw + kj) * m;
                T* xc = dx + static_cast<long long>(c) * h * w;
                long long idx = 0;
                for (int oi = 0; oi < ho; ++oi) {
                    const int ii = oi * stride - pad + ki;
                    if (ii < 0 || ii >= h) {
                        idx += wo;
                        continue;
                    }
                    for (int oj = 0; oj < wo; ++oj) {
                        const int jj = oj * stride - pad + kj;
                        if (jj >= 0 && jj < w) xc[ii * w + jj] += row[idx];
                        ++idx;
                    }
                }
            }
        }
    }
}

}  // namespace detail

/// 2-D convolution: x [Cin,H,W], weight [Cout,Cin,kh,kw], bias [Cout].
/// Implemented as im2col + gemm; the column matrix is rebuilt in the backward
/// pass instead of being stored (memory stays flat across deep tapes).
template <typename T>
Tensor<T> conv2d(const Tensor<T>& x, const Tensor<T>& weight, const Tensor<T>& bias,
                 int stride, int pad) {
    const auto& sx = x.shape();
    const auto& sw = weight.shape();
    if (sx.size() != 3 || sw.size() != 4 || sx[0] != sw[1])
        fail("conv2d: shape mismatch input " + shape_str(sx) + " weight " + shape_str(sw));
    if (bias.shape() != std::vector<int>{sw[0]})
        fail("conv2d: bias shape " + shape_str(bias.shape()) + " does not match out channels " +
             std::to_string(sw[0]));
    if (stride < 1) fail("conv2d: stride must be >= 1");
    const int c_in = sx[0], h = sx[1], w = sx[2];
    const int c_out = sw[0], kh = sw[2], kw = sw[3];
    const int ho = (h + 2 * pad - kh) / stride + 1;
    const int wo = (w + 2 * pad - kw) / stride + 1;
    if (ho < 1 || wo < 1)
        fail("conv2d: kernel " + shape_str(sw) + " too large for input " + shape_str(sx));

    const int K = c_in * kh * kw;
    const long long M = static_cast<long long>(ho) * wo;
    std::vector<T> col(static_cast<size_t>(K) * M);
    detail::im2col(x.values().data(), c_in, h, w, kh, kw, stride, pad, ho, wo, col.data());

    std::vector<T> out(static_cast<size_t>(c_out) * M);
    {
        Eigen::Map<const RowMat<T>> W(weight.values().data(), c_out, K);
        Eigen::Map<const RowMat<T>> Col(col.data(), K, M);
        Eigen::Map<RowMat<T>> Out(out.data(), c_out, M);
        Out.noalias() = W * Col;
        const auto bv = bias.values();
        for (int o = 0; o < c_out; ++o) Out.row(o).array() += bv[o];
    }

    auto xn = x.node();
    auto wn = weight.node();
    auto bn = bias.node();
    auto backward = [xn, wn, bn, c_in, h, w, c_out, kh, kw, stride, pad, ho,
                     wo](TensorNode<T>& self) {
        const int K = c_in * kh * kw;
        const long long M = static_cast<long long>(ho) * wo;
        Eigen::Map<const RowMat<T>> G(self.grad.data(), c_out, M);
        if (wn->requires_grad || xn->requires_grad) {
            std::vector<T> col(static_cast<size_t>(K) * M);
            if (wn->requires_grad) {
                detail::im2col(xn->value.data(), c_in, h, w, kh, kw, stride, pad, ho, wo,
                               col.data());
                wn->ensure_grad();
                Eigen::Map<RowMat<T>> dW(wn->grad.data(), c_out, K);
                Eigen::Map<const RowMat<T>> Col(col.data(), K, M);
                dW.noalias() += G * Col.transpose();
            }
            if (xn->requires_grad) {
                xn->ensure_grad();
                Eigen::Map<const RowMat<T>> W(wn->value.data(), c_out, K);
                Eigen::Map<RowMat<T>> dCol(col.data(), K, M);
                dCol.noalias() = W.transpose() * G;
                detail::col2im_add(col.data(), c_in, h, w, kh, kw, stride, pad, ho, wo,
                                   xn->grad.data());
            }
        }
        if (bn->requires_grad) {
            bn->ensure_grad();
            for (int o = 0; o < c_out; ++o) {
                T s = 0;
                const T* g = self.grad.data() + static_cast<long long>(o) * M;
                for (long long i = 0; i < M; ++i) s += g[i];
                bn->grad[o] += s;
            }
        }
    };
    return detail::make_result<T>({c_out, ho, wo}, std::move(out), {x, weight, bias},
                                  std::move(backward));
}

/// Nearest-neighbor upsampling of a CHW tensor to an arbitrary target size
/// (source index = floor(i * src / dst); exact 2x for doubled dims).
template <typename T>
Tensor<T> upsample_nearest(const Tensor<T>& x, int out_h, int out_w) {
    const auto& sx = x.shape();
    if (sx.size() != 3) fail("upsample_nearest: expected CHW input, got " + shape_str(sx));
    if (out_h < sx[1] || out_w < sx[2])
        fail("upsample_nearest: target smaller than input " + shape_str(sx));
    const int c = sx[0], h = sx[1], w = sx[2];
    const auto xv = x.values();
    std::vector<T> out(static_cast<size_t>(c) * out_h * out_w);
    for (int ch = 0; ch < c; ++ch) {
        const T* src = xv.data() + static_cast<long long>(ch) * h * w;
        T* dst = out.data() + static_cast<long long>(ch) * out_h * out_w;
        for (int i = 0; i < out_h; ++i) {
            const int si = static_cast<int>(static_cast<long long>(i) * h / out_h);
            for (int j = 0; j < out_w; ++j) {
                const int sj = static_cast<int>(static_cast<long long>(j) * w / out_w);
                dst[i * out_w + j] = src[si * w + sj];
            }
        }
    }
    auto xn = x.node();
    return detail::make_result<T>(
        {c, out_h, out_w}, std::move(out), {x},
        [xn, c, h, w, out_h, out_w](TensorNode<T>& self) {
            xn->ensure_grad();
            for (int ch = 0; ch < c; ++ch) {
                const T* g = self.grad.data() + static_cast<long long>(ch) * out_h * out_w;
                T* dx = xn->grad.data() + static_cast<long long>(ch) * h * w;
                for (int i = 0; i < out_h; ++i) {
                    const int si = static_cast<int>(static_cast<long long>(i) * h / out_h);
                    for (int j = 0; j < out_w; ++j) {
                        const int sj = static_cast<int>(static_cast<long long>(j) * w / out_w);
                        dx[si * w + sj] += g[i * out_w + j];
                    }
                }
            }
        });
}

// -------------------------- complex-pair operators -------------------------
//
// Complex quantities are carried as [2,H,W] tensors (channel 0 real,
// channel 1 imaginary). The DFT is a real-linear map of such pairs, so its
// vjp is the adjoint transform: for Y = DFT(X) the adjoint is the
// unnormalized inverse DFT, and for Y = IDFT(X) it is DFT/(H*W).

namespace detail {

inline void check_complex_pair(const char* op, const std::vector<int>& sh) {
    if (sh.size() != 3 || sh[0] != 2)
        fail(std::string(op) + ": expected [2,H,W] complex pair, got " + shape_str(sh));
}

/// Run an FFT over a planar pair stored in `T` scalars (converting through
/// double; FFTW double precision is the single FFT backend).
template <typename T>
void fft_pair(const T* re, const T* im, T* re_out, T* im_out, int h, int w, int sign,
              bool normalize) {
    const size_t n = static_cast<size_t>(h) * w;
    if constexpr (std::is_same_v<T, double>) {
        fft::dft2d(re, im, re_out, im_out, h, w, sign);
        if (normalize) {
            const double inv = 1.0 / static_cast<double>(n);
            for (size_t i = 0; i < n; ++i) {
                re_out[i] *= inv;
                im_out[i] *= inv;
            }
        }
    } else {
        thread_local std::vector<double> dre, dim;
        dre.resize(n);
        dim.resize(n);
        for (size_t i = 0; i < n; ++i) {
            dre[i] = static_cast<double>(re[i]);
            dim[i] = static_cast<double>(im[i]);
        }
        fft::dft2d(dre.data(), dim.data(), dre.data(), dim.data(), h, w, sign);
        const double inv = normalize ? 1.0 / static_cast<double>(n) : 1.0;
        for (size_t i = 0; i < n; ++i) {
            re_out[i] = static_cast<T>(dre[i] * inv);
            im_out[i] = static_cast<T>(dim[i] * inv);
        }
    }
}

}  // namespace detail

/// Forward 2-D FFT of a complex pair.
template <typename T>
Tensor<T> fft2c(const Tensor<T>& x) {
    detail::check_complex_pair("fft2c", x.shape());
    const int h = x.shape()[1], w = x.shape()[2];
    const size_t n = static_cast<size_t>(h) * w;
    std::vector<T> out(2 * n);
    detail::fft_pair(x.values().data(), x.values().data() + n, out.data(), out.data() + n, h, w,
                     -1, false);
    auto xn = x.node();
    return detail::make_result<T>(x.shape(), std::move(out), {x}, [xn, h, w, n](
                                                                      TensorNode<T>& self) {
        xn->ensure_grad();
        std::vector<T> tmp(2 * n);
        // adjoint of forward DFT = unnormalized inverse DFT
        detail::fft_pair(self.grad.data(), self.grad.data() + n, tmp.data(), tmp.data() + n, h,
                         w, +1, false);
        for (size_t i = 0; i < 2 * n; ++i) xn->grad[i] += tmp[i];
    });
}

/// Normalized inverse 2-D FFT of a complex pair.
template <typename T>
Tensor<T> ifft2c(const Tensor<T>& x) {
    detail::check_complex_pair("ifft2c", x.shape());
    const int h = x.shape()[1], w = x.shape()[2];
    const size_t n = static_cast<size_t>(h) * w;
    std::vector<T> out(2 * n);
    detail::fft_pair(x.values().data(), x.values().data() + n, out.data(), out.data() + n, h, w,
                     +1, true);
    auto xn = x.node();
    return detail::make_result<T>(x.shape(), std::move(out), {x}, [xn, h, w, n](
                                                                      TensorNode<T>& self) {
        xn->ensure_grad();
        std::vector<T> tmp(2 * n);
        // adjoint of normalized inverse DFT = forward DFT / (h*w)
        detail::fft_pair(self.grad.data(), self.grad.data() + n, tmp.data(), tmp.data() + n, h,
                         w, -1, true);
        for (size_t i = 0; i < 2 * n; ++i) xn->grad[i] += tmp[i];
    });
}

/// Pointwise complex product of two pairs: (ar+j ai) * (br+j bi).
template <typename T>
Tensor<T> complex_mul(const Tensor<T>& a, const Tensor<T>& b) {
    detail::check_complex_pair("complex_mul", a.shape());
    detail::check_same_shape("complex_mul", a, b);
    const size_t n = static_cast<size_t>(a.shape()[1]) * a.shape()[2];
    const T* ar = a.values().data();
    const T* ai = ar + n;
    const T* br = b.values().data();
    const T* bi = br + n;
    std::vector<T> out(2 * n);
    for (size_t i = 0; i < n; ++i) {
        out[i] = ar[i] * br[i] - ai[i] * bi[i];
        out[n + i] = ar[i] * bi[i] + ai[i] * br[i];
    }
    auto an = a.node();
    auto bn = b.node();
    return detail::make_result<T>(a.shape(), std::move(out), {a, b}, [an, bn, n](
                                                                         TensorNode<T>& self) {
        const T* gr = self.grad.data();
        const T* gi = gr + n;
        if (an->requires_grad) {  // da = g * conj(b)
            an->ensure_grad();
            const T* br = bn->value.data();
            const T* bi = br + n;
            for (size_t i = 0; i < n; ++i) {
                an->grad[i] += gr[i] * br[i] + gi[i] * bi[i];
                an->grad[n + i] += -gr[i] * bi[i] + gi[i] * br[i];
            }
        }
        if (bn->requires_grad) {  // db = g * conj(a)
            bn->ensure_grad();
            const T* ar = an->value.data();
            const T* ai = ar + n;
            for (size_t i = 0; i < n; ++i) {
                bn->grad[i] += gr[i] * ar[i] + gi[i] * ai[i];
                bn->grad[n + i] += -gr[i] * ai[i] + gi[i] * ar[i];
            }
        }
    });
}

/// Squared magnitude of a complex pair: [2,H,W] -> [1,H,W].
template <typename T>
Tensor<T> complex_abs2(const Tensor<T>& x) {
    detail::check_complex_pair("complex_abs2", x.shape());
    const int h = x.shape()[1], w = x.shape()[2];
    const size_t n = static_cast<size_t>(h) * w;
    const T* re = x.values().data();
    const T* im = re + n;
    std::vector<T> out(n);
    for (size_t i = 0; i < n; ++i) out[i] = re[i] * re[i] + im[i] * im[i];
    auto xn = x.node();
    return detail::make_result<T>({1, h, w}, std::move(out), {x}, [xn, n](TensorNode<T>& self) {
        xn->ensure_grad();
        const T* re = xn->value.data();
        const T* im = re + n;
        for (size_t i = 0; i < n; ++i) {
            xn->grad[i] += self.grad[i] * T(2) * re[i];
            xn->grad[n + i] += self.grad[i] * T(2) * im[i];
        }
    });
}

// ------------------------------- operators ---------------------------------

template <typename T>
Tensor<T> operator+(const Tensor<T>& a, const Tensor<T>& b) { return add(a, b); }
template <typename T>
Tensor<T> operator-(const Tensor<T>& a, const Tensor<T>& b) { return sub(a, b); }
template <typename T>
Tensor<T> operator*(const Tensor<T>& a, const Tensor<T>& b) { return mul(a, b); }

}  // namespace holo
