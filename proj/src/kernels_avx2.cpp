// Copyright (c) 2026 the plba project
// SPDX-License-Identifier: Apache-2.0
//
// AVX2+FMA variants. Compiled with -mavx2 -mfma; only ever called after the
// runtime CPU check in kernels.cpp. Tails fall back to the scalar op
// sequence so whole arrays stay bit-identical to the reference.

#include "plba/kernels.hpp"

#if defined(PLBA_HAVE_AVX2)

#include <cmath>
#include <immintrin.h>

namespace plba::kern {
namespace {

void v_add(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(a + i),
                                                _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] + b[i];
}

void v_sub(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_sub_pd(_mm256_loadu_pd(a + i),
                                                _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] - b[i];
}

void v_mul(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                                _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] * b[i];
}

void v_div(const double* a, const double* b, double* out, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_div_pd(_mm256_loadu_pd(a + i),
                                                _mm256_loadu_pd(b + i)));
    for (; i < n; ++i) out[i] = a[i] / b[i];
}

void v_scale(const double* a, double s, double* out, std::size_t n) {
    const __m256d vs = _mm256_set1_pd(s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i), vs));
    for (; i < n; ++i) out[i] = a[i] * s;
}

void v_axpy(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i),
                                                _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void v_matmul(const double* a, const double* b, double* c, std::size_t m,
              std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m * n; ++i) c[i] = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        double* crow = c + i * n;
        for (std::size_t p = 0; p < k; ++p) {
            const double aip = a[i * k + p];
            const __m256d va = _mm256_set1_pd(aip);
            const double* brow = b + p * n;
            std::size_t j = 0;
            for (; j + 4 <= n; j += 4)
                _mm256_storeu_pd(
                    crow + j, _mm256_fmadd_pd(va, _mm256_loadu_pd(brow + j),
                                              _mm256_loadu_pd(crow + j)));
            for (; j < n; ++j) crow[j] = std::fma(aip, brow[j], crow[j]);
        }
    }
}

double v_dot(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i),
                              acc);
    const __m128d lo = _mm256_castpd256_pd128(acc);
    const __m128d hi = _mm256_extractf128_pd(acc, 1);
    const __m128d sum2 = _mm_add_pd(lo, hi);
    double out = _mm_cvtsd_f64(_mm_add_sd(sum2, _mm_unpackhi_pd(sum2, sum2)));
    for (; i < n; ++i) out = std::fma(a[i], b[i], out);
    return out;
}

void v_lj_energy(const double* a, const double* d, double c, double* e,
                 std::size_t n) {
    const __m256d vc = _mm256_set1_pd(c);
    const __m256d two = _mm256_set1_pd(2.0);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d t = _mm256_div_pd(_mm256_loadu_pd(a + i),
                                        _mm256_loadu_pd(d + i));
        const __m256d t2 = _mm256_mul_pd(t, t);
        const __m256d t4 = _mm256_mul_pd(t2, t2);
        const __m256d t6 = _mm256_mul_pd(t4, t2);
        const __m256d t12 = _mm256_mul_pd(t6, t6);
        _mm256_storeu_pd(
            e + i, _mm256_mul_pd(
                       vc, _mm256_sub_pd(t12, _mm256_mul_pd(two, t6))));
    }
    for (; i < n; ++i) {
        const double t = a[i] / d[i];
        const double t2 = t * t;
        const double t4 = t2 * t2;
        const double t6 = t4 * t2;
        const double t12 = t6 * t6;
        e[i] = c * (t12 - 2.0 * t6);
    }
}

void v_lj_denergy(const double* a, const double* d, double c, double* g,
                  std::size_t n) {
    const double c12s = 12.0 * c;
    const __m256d c12 = _mm256_set1_pd(c12s);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d vd = _mm256_loadu_pd(d + i);
        const __m256d t = _mm256_div_pd(_mm256_loadu_pd(a + i), vd);
        const __m256d t2 = _mm256_mul_pd(t, t);
        const __m256d t4 = _mm256_mul_pd(t2, t2);
        const __m256d t6 = _mm256_mul_pd(t4, t2);
        const __m256d t12 = _mm256_mul_pd(t6, t6);
        _mm256_storeu_pd(g + i, _mm256_mul_pd(_mm256_div_pd(c12, vd),
                                              _mm256_sub_pd(t6, t12)));
    }
    for (; i < n; ++i) {
        const double t = a[i] / d[i];
        const double t2 = t * t;
        const double t4 = t2 * t2;
        const double t6 = t4 * t2;
        const double t12 = t6 * t6;
        g[i] = (c12s / d[i]) * (t6 - t12);
    }
}

}  // namespace

const Kernels& avx2_kernels() {
    static const Kernels k = {
        "avx2",   v_add,    v_sub, v_mul,       v_div,        v_scale,
        v_axpy,   v_matmul, v_dot, v_lj_energy, v_lj_denergy,
    };
    return k;
}

}  // namespace plba::kern

#endif  // PLBA_HAVE_AVX2
