// Copyright (c) 2026 the plba project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <string>

namespace plba::kern {

// Dispatch table for the dense inner loops. Two implementations exist: a
// scalar reference and an AVX2 variant picked at runtime when the CPU
// supports it. Every kernel except dot() is bit-identical across backends:
// the per-element operation sequence is the same, only the lane count
// differs. dot() uses lane accumulators in the SIMD variant, so its result
// may differ from the reference in the last bits.
struct Kernels {
    const char* name;

    // out[i] = a[i] (op) b[i]
    void (*add)(const double* a, const double* b, double* out, std::size_t n);
    void (*sub)(const double* a, const double* b, double* out, std::size_t n);
    void (*mul)(const double* a, const double* b, double* out, std::size_t n);
    void (*div)(const double* a, const double* b, double* out, std::size_t n);

    // out[i] = a[i] * s
    void (*scale)(const double* a, double s, double* out, std::size_t n);

    // y[i] = fma(a, x[i], y[i])
    void (*axpy)(double a, const double* x, double* y, std::size_t n);

    // C = A(m x k) * B(k x n), row-major; C is overwritten.
    // Accumulation order over k is fixed per output element.
    void (*matmul)(const double* a, const double* b, double* c, std::size_t m,
                   std::size_t k, std::size_t n);

    double (*dot)(const double* a, const double* b, std::size_t n);

    // Lennard-Jones 12-6 well with minimum -c at d = a:
    //   e[i] = c * (t^12 - 2 t^6),  t = a[i] / d[i]
    void (*lj_energy)(const double* a, const double* d, double c, double* e,
                      std::size_t n);

    // d e / d d, closed form: (12 c / d) * (t^6 - t^12)
    void (*lj_denergy)(const double* a, const double* d, double c, double* g,
                       std::size_t n);
};

enum class Backend { scalar, avx2 };

// Active dispatch table. Defaults to the best supported backend; tests can
// pin a specific one.
const Kernels& active();
Backend active_backend();
void set_backend(Backend b);
void reset_backend();  // back to auto-detection

bool avx2_supported();

const Kernels& scalar_kernels();
#if defined(PLBA_HAVE_AVX2)
const Kernels& avx2_kernels();
#endif

}  // namespace plba::kern
