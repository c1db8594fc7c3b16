// Copyright (c) 2026 the plba project
// SPDX-License-Identifier: Apache-2.0

#include "plba/kernels.hpp"

#include <stdexcept>

namespace plba::kern {
namespace {

Backend detect() {
#if defined(PLBA_HAVE_AVX2)
    if (avx2_supported()) return Backend::avx2;
#endif
    return Backend::scalar;
}

Backend& current() {
    static Backend b = detect();
    return b;
}

}  // namespace

bool avx2_supported() {
#if defined(__x86_64__) || defined(_M_X64)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Kernels& active() {
#if defined(PLBA_HAVE_AVX2)
    if (current() == Backend::avx2) return avx2_kernels();
#endif
    return scalar_kernels();
}

Backend active_backend() { return current(); }

void set_backend(Backend b) {
    if (b == Backend::avx2 && !avx2_supported())
        throw std::runtime_error("avx2 backend requested but not supported");
    current() = b;
}

void reset_backend() { current() = detect(); }

}  // namespace plba::kern
