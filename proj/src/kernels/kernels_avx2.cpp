#include "realbloch/kernels.hpp"

#ifdef __x86_64__

#include <immintrin.h>

#include "kernels_impl.hpp"

namespace rb::kernels {

namespace {

struct VAvx2 {
    __m256d v;
    static constexpr int width = 4;
    static VAvx2 load(const double* p) { return {_mm256_loadu_pd(p)}; }
    void store(double* p) const { _mm256_storeu_pd(p, v); }
    static VAvx2 broadcast(double x) { return {_mm256_set1_pd(x)}; }
    friend VAvx2 operator+(VAvx2 a, VAvx2 b) { return {_mm256_add_pd(a.v, b.v)}; }
    friend VAvx2 operator-(VAvx2 a, VAvx2 b) { return {_mm256_sub_pd(a.v, b.v)}; }
    friend VAvx2 operator*(VAvx2 a, VAvx2 b) { return {_mm256_mul_pd(a.v, b.v)}; }
    friend VAvx2 operator/(VAvx2 a, VAvx2 b) { return {_mm256_div_pd(a.v, b.v)}; }
    static VAvx2 sqrt(VAvx2 a) { return {_mm256_sqrt_pd(a.v)}; }
};

void c2_trace_density_avx2(const double* center, const double* prev,
                           const double* next, const double* prev2,
                           const double* next2, std::ptrdiff_t cs,
                           std::ptrdiff_t off1, std::ptrdiff_t off2,
                           std::ptrdiff_t off3, const double ca[4],
                           const double cb[4], std::ptrdiff_t n, double* out) {
    detail::c2_trace_density_impl<VAvx2>(center, prev, next, prev2, next2, cs,
                                         off1, off2, off3, ca, cb, n, out);
}

void antisym5_density_avx2(const double* g, std::ptrdiff_t gs, const double* dg,
                           std::ptrdiff_t dgs, std::ptrdiff_t n, double* out) {
    detail::antisym5_density_impl<VAvx2>(g, gs, dg, dgs, n, out);
}

}  // namespace

const KernelTable kernels_avx2 = {&c2_trace_density_avx2, &antisym5_density_avx2,
                                  "avx2"};

}  // namespace rb::kernels

#endif  // __x86_64__
