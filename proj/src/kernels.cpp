#include "gasforge/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>

namespace gasforge::kernels {

namespace {

SweepFn detect() {
#if defined(GASFORGE_HAVE_AVX2_KERNELS)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"))
        return &sweep_avx2;
#endif
    return &sweep_scalar;
}

SweepFn initial() {
    if (const char* env = std::getenv("GASFORGE_KERNEL")) {
        if (std::strcmp(env, "scalar") == 0) return &sweep_scalar;
#if defined(GASFORGE_HAVE_AVX2_KERNELS)
        if (std::strcmp(env, "avx2") == 0) return &sweep_avx2;
#endif
    }
    return detect();
}

std::atomic<SweepFn> g_sweep{initial()};

}  // namespace

SweepFn active_sweep() { return g_sweep.load(std::memory_order_relaxed); }

const char* active_sweep_name() {
    const SweepFn fn = active_sweep();
#if defined(GASFORGE_HAVE_AVX2_KERNELS)
    if (fn == &sweep_avx2) return "avx2";
#endif
    (void)fn;
    return "scalar";
}

bool force_sweep(const char* name) {
    if (std::strcmp(name, "auto") == 0) {
        g_sweep.store(detect(), std::memory_order_relaxed);
        return true;
    }
    if (std::strcmp(name, "scalar") == 0) {
        g_sweep.store(&sweep_scalar, std::memory_order_relaxed);
        return true;
    }
#if defined(GASFORGE_HAVE_AVX2_KERNELS)
    if (std::strcmp(name, "avx2") == 0 && detect() == &sweep_avx2) {
        g_sweep.store(&sweep_avx2, std::memory_order_relaxed);
        return true;
    }
#endif
    return false;
}

}  // namespace gasforge::kernels
