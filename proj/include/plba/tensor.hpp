// Copyright (c) 2026 the plba project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <numeric>
#include <string>
#include <vector>

#include "plba/error.hpp"

namespace plba {

// Dense row-major 64-bit float tensor. Rank 0 is a scalar; everything the
// tape operates on is rank <= 2.
class Tensor {
public:
    Tensor() : shape_{}, data_(1, 0.0) {}

    Tensor(std::vector<std::size_t> shape, std::vector<double> data)
        : shape_(std::move(shape)), data_(std::move(data)) {
        if (data_.size() != count(shape_))
            throw_numeric("tensor: data length does not match shape");
    }

    static Tensor scalar(double v) {
        Tensor t;
        t.data_[0] = v;
        return t;
    }

    static Tensor zeros(std::vector<std::size_t> shape) {
        Tensor t;
        t.data_.assign(count(shape), 0.0);
        t.shape_ = std::move(shape);
        return t;
    }

    static Tensor full(std::vector<std::size_t> shape, double v) {
        Tensor t = zeros(std::move(shape));
        for (double& x : t.data_) x = v;
        return t;
    }

    const std::vector<std::size_t>& shape() const { return shape_; }
    std::size_t rank() const { return shape_.size(); }
    std::size_t size() const { return data_.size(); }

    std::size_t rows() const { return rank() >= 1 ? shape_[0] : 1; }
    std::size_t cols() const {
        if (rank() >= 2) return shape_[1];
        return 1;
    }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    double& operator[](std::size_t i) { return data_[i]; }
    double operator[](std::size_t i) const { return data_[i]; }

    double& at(std::size_t r, std::size_t c) { return data_[r * cols() + c]; }
    double at(std::size_t r, std::size_t c) const {
        return data_[r * cols() + c];
    }

    double item() const {
        if (data_.size() != 1) throw_numeric("tensor: item() on non-scalar");
        return data_[0];
    }

    bool same_shape(const Tensor& o) const { return shape_ == o.shape_; }

    std::string shape_str() const {
        std::string s = "(";
        for (std::size_t i = 0; i < shape_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(shape_[i]);
        }
        return s + ")";
    }

private:
    static std::size_t count(const std::vector<std::size_t>& shape) {
        std::size_t n = 1;
        for (std::size_t d : shape) {
            if (d == 0) throw_numeric("tensor: zero dimension");
            n *= d;
        }
        return n;
    }

    std::vector<std::size_t> shape_;
    std::vector<double> data_;
};

}  // namespace plba
