// Copyright (c) 2026 the plba project
// SPDX-License-Identifier: Apache-2.0
//
// Scalar reference kernels. These define the numerical contract; the SIMD
// variants must reproduce them bit-for-bit (dot excepted, see kernels.hpp).

#include "plba/kernels.hpp"

#include <cmath>

namespace plba::kern {
namespace {

void s_add(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] + b[i];
}

void s_sub(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] - b[i];
}

void s_mul(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

void s_div(const double* a, const double* b, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] / b[i];
}

void s_scale(const double* a, double s, double* out, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * s;
}

void s_axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void s_matmul(const double* a, const double* b, double* c, std::size_t m,
              std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m * n; ++i) c[i] = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double* crow = c + i * n;
        for (std::size_t p = 0; p < k; ++p) {
            const double aip = a[i * k + p];
            const double* brow = b + p * n;
            for (std::size_t j = 0; j < n; ++j)
                crow[j] = std::fma(aip, brow[j], crow[j]);
        }
    }
}

double s_dot(const double* a, const double* b, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc = std::fma(a[i], b[i], acc);
    return acc;
}

void s_lj_energy(const double* a, const double* d, double c, double* e,
                 std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        const double t = a[i] / d[i];
        const double t2 = t * t;
        const double t4 = t2 * t2;
        const double t6 = t4 * t2;
        const double t12 = t6 * t6;
        e[i] = c * (t12 - 2.0 * t6);
    }
}

void s_lj_denergy(const double* a, const double* d, double c, double* g,
                  std::size_t n) {
    const double c12 = 12.0 * c;
    for (std::size_t i = 0; i < n; ++i) {
        const double t = a[i] / d[i];
        const double t2 = t * t;
        const double t4 = t2 * t2;
        const double t6 = t4 * t2;
        const double t12 = t6 * t6;
        g[i] = (c12 / d[i]) * (t6 - t12);
    }
}

}  // namespace

const Kernels& scalar_kernels() {
    static const Kernels k = {
        "scalar", s_add,    s_sub, s_mul,         s_div,       s_scale,
        s_axpy,   s_matmul, s_dot, s_lj_energy,   s_lj_denergy,
    };
    return k;
}

}  // namespace plba::kern
