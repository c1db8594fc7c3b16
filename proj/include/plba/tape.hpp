// Copyright (c) 2026 the plba project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "plba/tensor.hpp"

namespace plba {

class Tape;

// Handle to a recorded tensor. Cheap to copy; valid for the lifetime of its
// tape.
struct Var {
    Tape* tape = nullptr;
    int id = -1;

    const Tensor& value() const;
    const std::vector<std::size_t>& shape() const { return value().shape(); }
};

enum class OpKind : std::uint8_t {
    input,
    add,
    add_rowvec,
    sub,
    mul,
    scalar_mul,
    divide,
    matmul,
    transpose,
    power,
    square,
    exp_op,
    tanh_op,
    relu,
    swish,
    softmax,
    layer_norm,
    sum_axis,
    sum_all,
    concat,
    gather_rows,
    slice_cols,
};

// Reverse-mode tape. Nodes are appended in topological order during the
// forward pass; backward() walks them once in reverse. Tapes are independent
// of each other and single-threaded.
class Tape {
public:
    Tape() = default;
    Tape(const Tape&) = delete;
    Tape& operator=(const Tape&) = delete;

    // Records a leaf holding `v`. Every leaf can receive a gradient; whether
    // anyone reads it is the caller's business.
    Var input(Tensor v);

    const Tensor& value(int id) const { return nodes_[id].value; }
    std::size_t num_nodes() const { return nodes_.size(); }

    // Accumulates gradients of a scalar loss into every node that feeds it.
    // May be called again (gradients reset each time).
    void backward(Var loss);

    // Gradient of the last backward() w.r.t. `v`; zeros if unreached.
    Tensor grad(Var v) const;

    // NaN/Inf tripwire applied to every forward result.
    bool check_finite = true;

private:
    struct Node {
        OpKind op;
        Tensor value;
        std::vector<int> parents;
        double scalar = 0.0;   // scalar_mul factor, layer_norm eps
        int iaux = 0;          // axis / exponent / col offset
        std::vector<int> indices;  // gather_rows
    };

    friend Var make_node(Tape& t, OpKind op, Tensor value,
                         std::vector<int> parents, double scalar, int iaux,
                         std::vector<int> indices);
    friend struct Var;

    std::vector<Node> nodes_;
    std::vector<Tensor> grads_;
    std::vector<char> has_grad_;

    void accumulate(int id, const Tensor& g);
    void backward_node(int id);
};

// --- Differentiable primitives -------------------------------------------
// All operands must live on the same tape. Shapes are validated; a
// violation or a nonfinite forward result throws plba::Error(numeric).

Var add(Var a, Var b);                 // same shape
Var add_rowvec(Var a, Var v);          // (m x n) + broadcast row (n)
Var sub(Var a, Var b);
Var mul(Var a, Var b);                 // elementwise
Var scalar_mul(Var a, double s);
Var divide(Var a, Var b);              // elementwise; zero denominator throws
Var matmul(Var a, Var b);              // (m x k) * (k x n)
Var transpose(Var a);
Var power(Var a, int exponent);        // exponent >= 0, fixed at taping time
Var square(Var a);
Var exp(Var a);
Var tanh(Var a);
Var relu(Var a);
Var swish(Var a);                      // x * sigmoid(x)
Var softmax(Var a);                    // over the flattened vector, max-subtracted
Var layer_norm(Var x, Var gain, Var bias);  // per-row over the last axis
Var sum(Var a, int axis);              // rank-2: axis 0 or 1; rank-1: axis 0
Var sum_all(Var a);                    // -> scalar
Var concat(int axis, const std::vector<Var>& parts);
Var gather_rows(Var a, std::vector<int> indices);
Var slice_rows(Var a, int r0, int r1);
Var slice_cols(Var a, int c0, int c1);

// --- Finite-difference gradient checking ----------------------------------

struct GradCheckReport {
    double max_err = 0.0;      // |tape - fd| / max(|tape|, |fd|, floor)
    std::size_t n_checked = 0;
    std::size_t worst_index = 0;
    bool pass(double tol) const { return max_err < tol; }
};

// Central finite differences of a scalar-valued function against the tape
// gradient. `f` must rebuild its graph from the given input each call.
GradCheckReport grad_check(const std::function<Var(Tape&, Var)>& f,
                           const Tensor& x, double step = 1e-5,
                           double floor = 1e-6);

}  // namespace plba
