// SPDX-License-Identifier: Apache-2.0
#include <atomic>

#include "kernels/kernels_internal.hpp"

namespace lodgs {

namespace {

bool avx2_available() {
#if defined(__x86_64__)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

Backend detect() {
    return avx2_available() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend> g_active{detect()};

constexpr KernelTable kScalarTable{detail::mark_scalar, detail::blend_scalar,
                                   Backend::scalar};
#if defined(__x86_64__)
constexpr KernelTable kAvx2Table{detail::mark_avx2, detail::blend_avx2,
                                 Backend::avx2};
#endif

}  // namespace

const char* backend_name(Backend b) {
    return b == Backend::avx2 ? "avx2" : "scalar";
}

bool backend_supported(Backend b) {
    return b == Backend::scalar || avx2_available();
}

const KernelTable& kernels() {
#if defined(__x86_64__)
    if (g_active.load(std::memory_order_relaxed) == Backend::avx2)
        return kAvx2Table;
#endif
    return kScalarTable;
}

void force_kernel_backend(Backend b) {
    if (!backend_supported(b))
        throw ValidationError(std::string("kernel backend not supported here: ") +
                              backend_name(b));
    g_active.store(b, std::memory_order_relaxed);
}

void reset_kernel_backend() {
    g_active.store(detect(), std::memory_order_relaxed);
}

}  // namespace lodgs
