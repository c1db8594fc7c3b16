// Copyright (c) 2026 the plba project
// SPDX-License-Identifier: Apache-2.0

#include "plba/tape.hpp"

#include <cmath>
#include <cstring>

#include "plba/kernels.hpp"

namespace plba {

namespace {

const char* op_name(OpKind op) {
    switch (op) {
        case OpKind::input: return "input";
        case OpKind::add: return "add";
        case OpKind::add_rowvec: return "add_rowvec";
        case OpKind::sub: return "sub";
        case OpKind::mul: return "mul";
        case OpKind::scalar_mul: return "scalar_mul";
        case OpKind::divide: return "divide";
        case OpKind::matmul: return "matmul";
        case OpKind::transpose: return "transpose";
        case OpKind::power: return "power";
        case OpKind::square: return "square";
        case OpKind::exp_op: return "exp";
        case OpKind::tanh_op: return "tanh";
        case OpKind::relu: return "relu";
        case OpKind::swish: return "swish";
        case OpKind::softmax: return "softmax";
        case OpKind::layer_norm: return "layer_norm";
        case OpKind::sum_axis: return "sum";
        case OpKind::sum_all: return "sum_all";
        case OpKind::concat: return "concat";
        case OpKind::gather_rows: return "gather_rows";
        case OpKind::slice_cols: return "slice_cols";
    }
    return "?";
}

// integer power by squaring; fixed op order so results are reproducible
double ipow(double x, int n) {
    double r = 1.0, b = x;
    while (n) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

Tensor transposed(const Tensor& a) {
    const std::size_t m = a.rows(), n = a.cols();
    Tensor out = Tensor::zeros({n, m});
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) out.at(j, i) = a.at(i, j);
    return out;
}

Tensor mat_mul(const Tensor& a, const Tensor& b) {
    Tensor out = Tensor::zeros({a.rows(), b.cols()});
    kern::active().matmul(a.data(), b.data(), out.data(), a.rows(), a.cols(),
                          b.cols());
    return out;
}

constexpr double kLayerNormEps = 1e-5;

}  // namespace

const Tensor& Var::value() const { return tape->value(id); }

Var make_node(Tape& t, OpKind op, Tensor value, std::vector<int> parents,
              double scalar = 0.0, int iaux = 0,
              std::vector<int> indices = {}) {
    if (t.check_finite) {
        const double* p = value.data();
        for (std::size_t i = 0; i < value.size(); ++i)
            if (!std::isfinite(p[i]))
                throw_numeric(std::string("nonfinite result in ") +
                              op_name(op));
    }
    Tape::Node node{op, std::move(value), std::move(parents), scalar, iaux,
                    std::move(indices)};
    t.nodes_.push_back(std::move(node));
    return Var{&t, static_cast<int>(t.nodes_.size()) - 1};
}

Var Tape::input(Tensor v) {
    return make_node(*this, OpKind::input, std::move(v), {});
}

namespace {

void require(bool cond, const std::string& msg) {
    if (!cond) throw_numeric(msg);
}

void require_same_tape(Var a, Var b) {
    require(a.tape != nullptr && a.tape == b.tape,
            "operands recorded on different tapes");
}

}  // namespace

Var add(Var a, Var b) {
    require_same_tape(a, b);
    require(a.value().same_shape(b.value()),
            "add: shape mismatch " + a.value().shape_str() + " vs " +
                b.value().shape_str());
    Tensor out = Tensor::zeros(a.value().shape());
    kern::active().add(a.value().data(), b.value().data(), out.data(),
                       out.size());
    return make_node(*a.tape, OpKind::add, std::move(out), {a.id, b.id});
}

Var add_rowvec(Var a, Var v) {
    require_same_tape(a, v);
    require(a.value().rank() == 2 && v.value().rank() == 1 &&
                a.value().cols() == v.value().size(),
            "add_rowvec: need (m x n) and (n)");
    const std::size_t m = a.value().rows(), n = a.value().cols();
    Tensor out = Tensor::zeros({m, n});
    for (std::size_t i = 0; i < m; ++i)
        kern::active().add(a.value().data() + i * n, v.value().data(),
                           out.data() + i * n, n);
    return make_node(*a.tape, OpKind::add_rowvec, std::move(out),
                     {a.id, v.id});
}

Var sub(Var a, Var b) {
    require_same_tape(a, b);
    require(a.value().same_shape(b.value()),
            "sub: shape mismatch " + a.value().shape_str() + " vs " +
                b.value().shape_str());
    Tensor out = Tensor::zeros(a.value().shape());
    kern::active().sub(a.value().data(), b.value().data(), out.data(),
                       out.size());
    return make_node(*a.tape, OpKind::sub, std::move(out), {a.id, b.id});
}

Var mul(Var a, Var b) {
    require_same_tape(a, b);
    require(a.value().same_shape(b.value()),
            "mul: shape mismatch " + a.value().shape_str() + " vs " +
                b.value().shape_str());
    Tensor out = Tensor::zeros(a.value().shape());
    kern::active().mul(a.value().data(), b.value().data(), out.data(),
                       out.size());
    return make_node(*a.tape, OpKind::mul, std::move(out), {a.id, b.id});
}

Var scalar_mul(Var a, double s) {
    Tensor out = Tensor::zeros(a.value().shape());
    kern::active().scale(a.value().data(), s, out.data(), out.size());
    return make_node(*a.tape, OpKind::scalar_mul, std::move(out), {a.id}, s);
}

Var divide(Var a, Var b) {
    require_same_tape(a, b);
    require(a.value().same_shape(b.value()),
            "divide: shape mismatch " + a.value().shape_str() + " vs " +
                b.value().shape_str());
    for (std::size_t i = 0; i < b.value().size(); ++i)
        if (b.value()[i] == 0.0) throw_numeric("divide: zero denominator");
    Tensor out = Tensor::zeros(a.value().shape());
    kern::active().div(a.value().data(), b.value().data(), out.data(),
                       out.size());
    return make_node(*a.tape, OpKind::divide, std::move(out), {a.id, b.id});
}

Var matmul(Var a, Var b) {
    require_same_tape(a, b);
    require(a.value().rank() == 2 && b.value().rank() == 2 &&
                a.value().cols() == b.value().rows(),
            "matmul: incompatible shapes " + a.value().shape_str() + " vs " +
                b.value().shape_str());
    Tensor out = mat_mul(a.value(), b.value());
    return make_node(*a.tape, OpKind::matmul, std::move(out), {a.id, b.id});
}

Var transpose(Var a) {
    require(a.value().rank() == 2, "transpose: need rank-2");
    return make_node(*a.tape, OpKind::transpose, transposed(a.value()),
                     {a.id});
}

Var power(Var a, int exponent) {
    require(exponent >= 0, "power: negative exponent");
    Tensor out = Tensor::zeros(a.value().shape());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = ipow(a.value()[i], exponent);
    return make_node(*a.tape, OpKind::power, std::move(out), {a.id}, 0.0,
                     exponent);
}

Var square(Var a) {
    Tensor out = Tensor::zeros(a.value().shape());
    kern::active().mul(a.value().data(), a.value().data(), out.data(),
                       out.size());
    return make_node(*a.tape, OpKind::square, std::move(out), {a.id});
}

Var exp(Var a) {
    Tensor out = Tensor::zeros(a.value().shape());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::exp(a.value()[i]);
    return make_node(*a.tape, OpKind::exp_op, std::move(out), {a.id});
}

Var tanh(Var a) {
    Tensor out = Tensor::zeros(a.value().shape());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::tanh(a.value()[i]);
    return make_node(*a.tape, OpKind::tanh_op, std::move(out), {a.id});
}

Var relu(Var a) {
    Tensor out = Tensor::zeros(a.value().shape());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = a.value()[i] > 0.0 ? a.value()[i] : 0.0;
    return make_node(*a.tape, OpKind::relu, std::move(out), {a.id});
}

Var swish(Var a) {
    Tensor out = Tensor::zeros(a.value().shape());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = a.value()[i] * sigmoid(a.value()[i]);
    return make_node(*a.tape, OpKind::swish, std::move(out), {a.id});
}

Var softmax(Var a) {
    const Tensor& x = a.value();
    Tensor out = Tensor::zeros(x.shape());
    double mx = x[0];
    for (std::size_t i = 1; i < x.size(); ++i) mx = std::max(mx, x[i]);
    double z = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        out[i] = std::exp(x[i] - mx);
        z += out[i];
    }
    for (std::size_t i = 0; i < x.size(); ++i) out[i] /= z;
    return make_node(*a.tape, OpKind::softmax, std::move(out), {a.id});
}

Var layer_norm(Var x, Var gain, Var bias) {
    require_same_tape(x, gain);
    require_same_tape(x, bias);
    const Tensor& v = x.value();
    require(v.rank() == 2, "layer_norm: need rank-2 input");
    const std::size_t m = v.rows(), n = v.cols();
    require(gain.value().rank() == 1 && gain.value().size() == n &&
                bias.value().rank() == 1 && bias.value().size() == n,
            "layer_norm: gain/bias must be (n)");
    Tensor out = Tensor::zeros({m, n});
    for (std::size_t i = 0; i < m; ++i) {
        const double* row = v.data() + i * n;
        double mu = 0.0;
        for (std::size_t j = 0; j < n; ++j) mu += row[j];
        mu /= static_cast<double>(n);
        double var = 0.0;
        for (std::size_t j = 0; j < n; ++j)
            var += (row[j] - mu) * (row[j] - mu);
        var /= static_cast<double>(n);
        const double inv = 1.0 / std::sqrt(var + kLayerNormEps);
        for (std::size_t j = 0; j < n; ++j)
            out.at(i, j) =
                (row[j] - mu) * inv * gain.value()[j] + bias.value()[j];
    }
    return make_node(*x.tape, OpKind::layer_norm, std::move(out),
                     {x.id, gain.id, bias.id}, kLayerNormEps);
}

Var sum(Var a, int axis) {
    const Tensor& v = a.value();
    if (v.rank() <= 1) {
        require(axis == 0, "sum: axis out of range");
        double acc = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) acc += v[i];
        return make_node(*a.tape, OpKind::sum_axis, Tensor::scalar(acc),
                         {a.id}, 0.0, 0);
    }
    require(v.rank() == 2 && (axis == 0 || axis == 1),
            "sum: axis out of range");
    const std::size_t m = v.rows(), n = v.cols();
    if (axis == 0) {
        Tensor out = Tensor::zeros({n});
        for (std::size_t i = 0; i < m; ++i)
            kern::active().axpy(1.0, v.data() + i * n, out.data(), n);
        return make_node(*a.tape, OpKind::sum_axis, std::move(out), {a.id},
                         0.0, 0);
    }
    Tensor out = Tensor::zeros({m});
    for (std::size_t i = 0; i < m; ++i) {
        double acc = 0.0;
        const double* row = v.data() + i * n;
        for (std::size_t j = 0; j < n; ++j) acc += row[j];
        out[i] = acc;
    }
    return make_node(*a.tape, OpKind::sum_axis, std::move(out), {a.id}, 0.0,
                     1);
}

Var sum_all(Var a) {
    const Tensor& v = a.value();
    double acc = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) acc += v[i];
    return make_node(*a.tape, OpKind::sum_all, Tensor::scalar(acc), {a.id});
}

Var concat(int axis, const std::vector<Var>& parts) {
    require(!parts.empty(), "concat: no parts");
    Tape* t = parts[0].tape;
    for (const Var& p : parts) require(p.tape == t, "concat: tape mismatch");
    const std::size_t rank = parts[0].value().rank();
    std::vector<int> ids;
    ids.reserve(parts.size());
    for (const Var& p : parts) ids.push_back(p.id);

    if (rank == 1) {
        require(axis == 0, "concat: axis out of range for rank-1");
        std::size_t total = 0;
        for (const Var& p : parts) {
            require(p.value().rank() == 1, "concat: rank mismatch");
            total += p.value().size();
        }
        Tensor out = Tensor::zeros({total});
        std::size_t off = 0;
        for (const Var& p : parts) {
            std::memcpy(out.data() + off, p.value().data(),
                        p.value().size() * sizeof(double));
            off += p.value().size();
        }
        return make_node(*t, OpKind::concat, std::move(out), std::move(ids),
                         0.0, 0);
    }

    require(rank == 2 && (axis == 0 || axis == 1), "concat: bad axis/rank");
    if (axis == 0) {
        const std::size_t n = parts[0].value().cols();
        std::size_t m = 0;
        for (const Var& p : parts) {
            require(p.value().rank() == 2 && p.value().cols() == n,
                    "concat: column mismatch");
            m += p.value().rows();
        }
        Tensor out = Tensor::zeros({m, n});
        std::size_t off = 0;
        for (const Var& p : parts) {
            std::memcpy(out.data() + off, p.value().data(),
                        p.value().size() * sizeof(double));
            off += p.value().size();
        }
        return make_node(*t, OpKind::concat, std::move(out), std::move(ids),
                         0.0, 0);
    }
    const std::size_t m = parts[0].value().rows();
    std::size_t n = 0;
    for (const Var& p : parts) {
        require(p.value().rank() == 2 && p.value().rows() == m,
                "concat: row mismatch");
        n += p.value().cols();
    }
    Tensor out = Tensor::zeros({m, n});
    std::size_t coff = 0;
    for (const Var& p : parts) {
        const std::size_t pc = p.value().cols();
        for (std::size_t i = 0; i < m; ++i)
            std::memcpy(out.data() + i * n + coff,
                        p.value().data() + i * pc, pc * sizeof(double));
        coff += pc;
    }
    return make_node(*t, OpKind::concat, std::move(out), std::move(ids), 0.0,
                     1);
}

Var gather_rows(Var a, std::vector<int> indices) {
    const Tensor& v = a.value();
    require(v.rank() == 2, "gather_rows: need rank-2");
    require(!indices.empty(), "gather_rows: empty index list");
    const std::size_t n = v.cols();
    for (int ix : indices)
        require(ix >= 0 && ix < static_cast<int>(v.rows()),
                "gather_rows: index out of range");
    Tensor out = Tensor::zeros({indices.size(), n});
    for (std::size_t i = 0; i < indices.size(); ++i)
        std::memcpy(out.data() + i * n, v.data() + indices[i] * n,
                    n * sizeof(double));
    return make_node(*a.tape, OpKind::gather_rows, std::move(out), {a.id},
                     0.0, 0, std::move(indices));
}

Var slice_rows(Var a, int r0, int r1) {
    require(r0 >= 0 && r1 > r0 &&
                r1 <= static_cast<int>(a.value().rows()),
            "slice_rows: bad range");
    std::vector<int> idx(static_cast<std::size_t>(r1 - r0));
    for (int i = r0; i < r1; ++i) idx[i - r0] = i;
    return gather_rows(a, std::move(idx));
}

Var slice_cols(Var a, int c0, int c1) {
    const Tensor& v = a.value();
    require(v.rank() == 2, "slice_cols: need rank-2");
    require(c0 >= 0 && c1 > c0 && c1 <= static_cast<int>(v.cols()),
            "slice_cols: bad range");
    const std::size_t m = v.rows(), w = static_cast<std::size_t>(c1 - c0);
    Tensor out = Tensor::zeros({m, w});
    for (std::size_t i = 0; i < m; ++i)
        std::memcpy(out.data() + i * w, v.data() + i * v.cols() + c0,
                    w * sizeof(double));
    return make_node(*a.tape, OpKind::slice_cols, std::move(out), {a.id},
                     0.0, c0);
}

// --- backward --------------------------------------------------------------

void Tape::accumulate(int id, const Tensor& g) {
    if (!has_grad_[id]) {
        grads_[id] = Tensor::zeros(nodes_[id].value.shape());
        has_grad_[id] = 1;
    }
    kern::active().add(grads_[id].data(), g.data(), grads_[id].data(),
                       g.size());
}

void Tape::backward(Var loss) {
    require(loss.tape == this, "backward: foreign var");
    require(loss.value().size() == 1, "backward: loss must be scalar");
    grads_.assign(nodes_.size(), Tensor{});
    has_grad_.assign(nodes_.size(), 0);
    grads_[loss.id] = Tensor::full(loss.value().shape(), 1.0);
    has_grad_[loss.id] = 1;
    for (int i = loss.id; i >= 0; --i)
        if (has_grad_[i]) backward_node(i);
}

Tensor Tape::grad(Var v) const {
    require(v.tape == this, "grad: foreign var");
    if (v.id < static_cast<int>(has_grad_.size()) && has_grad_[v.id])
        return grads_[v.id];
    return Tensor::zeros(nodes_[v.id].value.shape());
}

void Tape::backward_node(int id) {
    const Node& node = nodes_[id];
    const Tensor& g = grads_[id];
    const auto& kern_ops = kern::active();

    auto parent_value = [&](int slot) -> const Tensor& {
        return nodes_[node.parents[slot]].value;
    };

    switch (node.op) {
        case OpKind::input:
            break;
        case OpKind::add:
            accumulate(node.parents[0], g);
            accumulate(node.parents[1], g);
            break;
        case OpKind::add_rowvec: {
            accumulate(node.parents[0], g);
            const std::size_t m = g.rows(), n = g.cols();
            Tensor gv = Tensor::zeros({n});
            for (std::size_t i = 0; i < m; ++i)
                kern_ops.axpy(1.0, g.data() + i * n, gv.data(), n);
            accumulate(node.parents[1], gv);
            break;
        }
        case OpKind::sub: {
            accumulate(node.parents[0], g);
            Tensor neg = Tensor::zeros(g.shape());
            kern_ops.scale(g.data(), -1.0, neg.data(), g.size());
            accumulate(node.parents[1], neg);
            break;
        }
        case OpKind::mul: {
            Tensor ga = Tensor::zeros(g.shape());
            kern_ops.mul(g.data(), parent_value(1).data(), ga.data(),
                         g.size());
            accumulate(node.parents[0], ga);
            Tensor gb = Tensor::zeros(g.shape());
            kern_ops.mul(g.data(), parent_value(0).data(), gb.data(),
                         g.size());
            accumulate(node.parents[1], gb);
            break;
        }
        case OpKind::scalar_mul: {
            Tensor ga = Tensor::zeros(g.shape());
            kern_ops.scale(g.data(), node.scalar, ga.data(), g.size());
            accumulate(node.parents[0], ga);
            break;
        }
        case OpKind::divide: {
            const Tensor& a = parent_value(0);
            const Tensor& b = parent_value(1);
            Tensor ga = Tensor::zeros(g.shape());
            kern_ops.div(g.data(), b.data(), ga.data(), g.size());
            accumulate(node.parents[0], ga);
            Tensor gb = Tensor::zeros(g.shape());
            for (std::size_t i = 0; i < g.size(); ++i)
                gb[i] = -g[i] * a[i] / (b[i] * b[i]);
            accumulate(node.parents[1], gb);
            break;
        }
        case OpKind::matmul: {
            const Tensor& a = parent_value(0);
            const Tensor& b = parent_value(1);
            accumulate(node.parents[0], mat_mul(g, transposed(b)));
            accumulate(node.parents[1], mat_mul(transposed(a), g));
            break;
        }
        case OpKind::transpose:
            accumulate(node.parents[0], transposed(g));
            break;
        case OpKind::power: {
            const Tensor& a = parent_value(0);
            const int n = node.iaux;
            Tensor ga = Tensor::zeros(g.shape());
            if (n > 0)
                for (std::size_t i = 0; i < g.size(); ++i)
                    ga[i] = g[i] * static_cast<double>(n) * ipow(a[i], n - 1);
            accumulate(node.parents[0], ga);
            break;
        }
        case OpKind::square: {
            const Tensor& a = parent_value(0);
            Tensor ga = Tensor::zeros(g.shape());
            for (std::size_t i = 0; i < g.size(); ++i)
                ga[i] = g[i] * 2.0 * a[i];
            accumulate(node.parents[0], ga);
            break;
        }
        case OpKind::exp_op: {
            Tensor ga = Tensor::zeros(g.shape());
            kern_ops.mul(g.data(), node.value.data(), ga.data(), g.size());
            accumulate(node.parents[0], ga);
            break;
        }
        case OpKind::tanh_op: {
            Tensor ga = Tensor::zeros(g.shape());
            for (std::size_t i = 0; i < g.size(); ++i)
                ga[i] = g[i] * (1.0 - node.value[i] * node.value[i]);
            accumulate(node.parents[0], ga);
            break;
        }
        case OpKind::relu: {
            const Tensor& a = parent_value(0);
            Tensor ga = Tensor::zeros(g.shape());
            for (std::size_t i = 0; i < g.size(); ++i)
                ga[i] = a[i] > 0.0 ? g[i] : 0.0;
            accumulate(node.parents[0], ga);
            break;
        }
        case OpKind::swish: {
            const Tensor& a = parent_value(0);
            Tensor ga = Tensor::zeros(g.shape());
            for (std::size_t i = 0; i < g.size(); ++i) {
                const double s = sigmoid(a[i]);
                ga[i] = g[i] * (s + a[i] * s * (1.0 - s));
            }
            accumulate(node.parents[0], ga);
            break;
        }
        case OpKind::softmax: {
            const Tensor& y = node.value;
            double gy = 0.0;
            for (std::size_t i = 0; i < g.size(); ++i) gy += g[i] * y[i];
            Tensor ga = Tensor::zeros(g.shape());
            for (std::size_t i = 0; i < g.size(); ++i)
                ga[i] = y[i] * (g[i] - gy);
            accumulate(node.parents[0], ga);
            break;
        }
        case OpKind::layer_norm: {
            const Tensor& x = parent_value(0);
            const Tensor& gain = parent_value(1);
            const std::size_t m = x.rows(), n = x.cols();
            Tensor gx = Tensor::zeros({m, n});
            Tensor ggain = Tensor::zeros({n});
            Tensor gbias = Tensor::zeros({n});
            for (std::size_t i = 0; i < m; ++i) {
                const double* row = x.data() + i * n;
                const double* grow = g.data() + i * n;
                double mu = 0.0;
                for (std::size_t j = 0; j < n; ++j) mu += row[j];
                mu /= static_cast<double>(n);
                double var = 0.0;
                for (std::size_t j = 0; j < n; ++j)
                    var += (row[j] - mu) * (row[j] - mu);
                var /= static_cast<double>(n);
                const double inv = 1.0 / std::sqrt(var + node.scalar);
                double mean_gy = 0.0, mean_gyx = 0.0;
                for (std::size_t j = 0; j < n; ++j) {
                    const double xhat = (row[j] - mu) * inv;
                    const double gy_j = grow[j] * gain[j];
                    ggain[j] += grow[j] * xhat;
                    gbias[j] += grow[j];
                    mean_gy += gy_j;
                    mean_gyx += gy_j * xhat;
                }
                mean_gy /= static_cast<double>(n);
                mean_gyx /= static_cast<double>(n);
                for (std::size_t j = 0; j < n; ++j) {
                    const double xhat = (row[j] - mu) * inv;
                    const double gy_j = grow[j] * gain[j];
                    gx.at(i, j) = inv * (gy_j - mean_gy - xhat * mean_gyx);
                }
            }
            accumulate(node.parents[0], gx);
            accumulate(node.parents[1], ggain);
            accumulate(node.parents[2], gbias);
            break;
        }
        case OpKind::sum_axis: {
            const Tensor& a = parent_value(0);
            Tensor ga = Tensor::zeros(a.shape());
            if (a.rank() <= 1) {
                for (std::size_t i = 0; i < ga.size(); ++i) ga[i] = g[0];
            } else if (node.iaux == 0) {
                const std::size_t m = a.rows(), n = a.cols();
                for (std::size_t i = 0; i < m; ++i)
                    std::memcpy(ga.data() + i * n, g.data(),
                                n * sizeof(double));
            } else {
                const std::size_t m = a.rows(), n = a.cols();
                for (std::size_t i = 0; i < m; ++i)
                    for (std::size_t j = 0; j < n; ++j) ga.at(i, j) = g[i];
            }
            accumulate(node.parents[0], ga);
            break;
        }
        case OpKind::sum_all: {
            const Tensor& a = parent_value(0);
            accumulate(node.parents[0], Tensor::full(a.shape(), g[0]));
            break;
        }
        case OpKind::concat: {
            if (nodes_[node.parents[0]].value.rank() == 1 ||
                node.iaux == 0) {
                std::size_t off = 0;
                for (int pid : node.parents) {
                    const Tensor& p = nodes_[pid].value;
                    Tensor gp = Tensor::zeros(p.shape());
                    std::memcpy(gp.data(), g.data() + off,
                                p.size() * sizeof(double));
                    off += p.size();
                    accumulate(pid, gp);
                }
            } else {
                const std::size_t m = node.value.rows(),
                                  n = node.value.cols();
                std::size_t coff = 0;
                for (int pid : node.parents) {
                    const Tensor& p = nodes_[pid].value;
                    const std::size_t pc = p.cols();
                    Tensor gp = Tensor::zeros(p.shape());
                    for (std::size_t i = 0; i < m; ++i)
                        std::memcpy(gp.data() + i * pc,
                                    g.data() + i * n + coff,
                                    pc * sizeof(double));
                    coff += pc;
                    accumulate(pid, gp);
                }
            }
            break;
        }
        case OpKind::gather_rows: {
            const Tensor& a = parent_value(0);
            const std::size_t n = a.cols();
            Tensor ga = Tensor::zeros(a.shape());
            for (std::size_t i = 0; i < node.indices.size(); ++i)
                kern_ops.axpy(1.0, g.data() + i * n,
                              ga.data() + node.indices[i] * n, n);
            accumulate(node.parents[0], ga);
            break;
        }
        case OpKind::slice_cols: {
            const Tensor& a = parent_value(0);
            const std::size_t m = a.rows(), n = a.cols(), w = g.cols();
            const std::size_t c0 = static_cast<std::size_t>(node.iaux);
            Tensor ga = Tensor::zeros(a.shape());
            for (std::size_t i = 0; i < m; ++i)
                std::memcpy(ga.data() + i * n + c0, g.data() + i * w,
                            w * sizeof(double));
            accumulate(node.parents[0], ga);
            break;
        }
    }
}

// --- finite differences ------------------------------------------------------

GradCheckReport grad_check(const std::function<Var(Tape&, Var)>& f,
                           const Tensor& x, double step, double floor) {
    Tensor analytic;
    {
        Tape tape;
        Var vx = tape.input(x);
        Var y = f(tape, vx);
        if (y.value().size() != 1)
            throw_numeric("grad_check: function must be scalar-valued");
        tape.backward(y);
        analytic = tape.grad(vx);
    }

    auto eval = [&](const Tensor& probe) {
        Tape tape;
        Var vx = tape.input(probe);
        return f(tape, vx).value().item();
    };

    GradCheckReport report;
    report.n_checked = x.size();
    for (std::size_t i = 0; i < x.size(); ++i) {
        Tensor hi = x, lo = x;
        hi[i] += step;
        lo[i] -= step;
        const double fd = (eval(hi) - eval(lo)) / (2.0 * step);
        const double denom =
            std::max(floor, std::max(std::abs(fd), std::abs(analytic[i])));
        const double err = std::abs(analytic[i] - fd) / denom;
        if (err > report.max_err) {
            report.max_err = err;
            report.worst_index = i;
        }
    }
    return report;
}

}  // namespace plba
