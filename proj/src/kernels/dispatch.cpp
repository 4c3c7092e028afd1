#include "realbloch/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace rb::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) && defined(REALBLOCH_HAVE_AVX2)
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const KernelTable* detect() {
#if defined(__x86_64__) && defined(REALBLOCH_HAVE_AVX2)
    if (cpu_has_avx2()) return &kernels_avx2;
#endif
    return &kernels_scalar;
}

std::atomic<const KernelTable*> g_active{nullptr};

}  // namespace

const KernelTable& active() {
    const KernelTable* t = g_active.load(std::memory_order_acquire);
    if (!t) {
        t = detect();
        g_active.store(t, std::memory_order_release);
    }
    return *t;
}

void set_level(const std::string& name) {
    if (name == "auto") {
        g_active.store(detect(), std::memory_order_release);
        return;
    }
    if (name == "ref") {
        g_active.store(&kernels_ref, std::memory_order_release);
        return;
    }
    if (name == "scalar") {
        g_active.store(&kernels_scalar, std::memory_order_release);
        return;
    }
    if (name == "avx2") {
#if defined(__x86_64__) && defined(REALBLOCH_HAVE_AVX2)
        if (cpu_has_avx2()) {
            g_active.store(&kernels_avx2, std::memory_order_release);
            return;
        }
#endif
        throw std::runtime_error("kernel level avx2 not available on this CPU/build");
    }
    throw std::invalid_argument("unknown kernel level: " + name);
}

std::string active_name() { return active().name; }

}  // namespace rb::kernels
