#include "lcq/simd.hpp"

#include <atomic>
#include <cstdlib>
#include <mutex>
#include <string>

namespace lcq::simd {

extern const Ops kScalarOps;
#ifdef LCQ_HAVE_AVX2
extern const Ops kAvx2Ops;
#endif

namespace {

bool host_has_avx2() {
#ifdef LCQ_HAVE_AVX2
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

const Ops *table_for(Backend b) {
    switch (b) {
    case Backend::scalar:
        return &kScalarOps;
    case Backend::avx2:
#ifdef LCQ_HAVE_AVX2
        return &kAvx2Ops;
#else
        return nullptr;
#endif
    }
    return nullptr;
}

std::atomic<const Ops *> g_ops{nullptr};
std::atomic<Backend> g_backend{Backend::scalar};
std::once_flag g_init;

void init() {
    Backend b = best();
    if (const char *env = std::getenv("LCQ_SIMD")) {
        const std::string v(env);
        if (v == "scalar")
            b = Backend::scalar;
        else if (v == "avx2" && supported(Backend::avx2))
            b = Backend::avx2;
    }
    g_backend.store(b, std::memory_order_relaxed);
    g_ops.store(table_for(b), std::memory_order_release);
}

} // namespace

const Ops &ops() {
    std::call_once(g_init, init);
    return *g_ops.load(std::memory_order_acquire);
}

Backend active() {
    std::call_once(g_init, init);
    return g_backend.load(std::memory_order_relaxed);
}

bool supported(Backend b) {
    return b == Backend::scalar || (b == Backend::avx2 && host_has_avx2());
}

Backend best() {
    return host_has_avx2() ? Backend::avx2 : Backend::scalar;
}

bool force(Backend b) {
    std::call_once(g_init, init);
    if (!supported(b))
        return false;
    g_backend.store(b, std::memory_order_relaxed);
    g_ops.store(table_for(b), std::memory_order_release);
    return true;
}

std::string_view name(Backend b) {
    switch (b) {
    case Backend::scalar:
        return "scalar";
    case Backend::avx2:
        return "avx2";
    }
    return "unknown";
}

} // namespace lcq::simd
