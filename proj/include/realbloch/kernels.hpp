#pragma once

#include <cstddef>
#include <string>

namespace rb::kernels {

/* Hot inner loops of the 4D invariant integrals, in structure-of-arrays
 * layout (component-major, grid points contiguous).  Each kernel has an
 * independent reference implementation, a tuned scalar one, and an AVX2
 * one; the active variant is picked at runtime from CPU features and can
 * be overridden for testing. */

// eps^{abcd} Tr[P dP_a dP_b dP_c dP_d] per point, with central-difference
// derivatives taken in place:
//   dP_a = ca[a] (P[+1] - P[-1]) + cb[a] (P[+2] - P[-2])
// (three-point stencil when cb = 0, five-point otherwise; the +-2 sites
// must be addressable either way).  A 4x4 complex matrix is stored as 32
// component planes (entry-major, real parts 0..15, imaginary 16..31) at
// distance comp_stride; `center` and the four neighbour slabs address
// point 0 of a contiguous row of n points, and off1..off3 are the element
// offsets of one +step along axes 1..3.
using C2TraceDensityFn = void (*)(const double* center, const double* prev,
                                  const double* next, const double* prev2,
                                  const double* next2, std::ptrdiff_t comp_stride,
                                  std::ptrdiff_t off1, std::ptrdiff_t off2,
                                  std::ptrdiff_t off3, const double ca[4],
                                  const double cb[4], std::ptrdiff_t n, double* out);

// q^{-5/2} sum_j (-1)^{j+1} g_j det[dg_i]_{i != j} per point, where
// q = sum_j g_j^2.  g has 5 component planes at distance g_stride and dg
// has 20 planes (component j*4 + a holds d g_j / d u_a) at dg_stride.
using Antisym5DensityFn = void (*)(const double* g, std::ptrdiff_t g_stride,
                                   const double* dg, std::ptrdiff_t dg_stride,
                                   std::ptrdiff_t n, double* out);

struct KernelTable {
    C2TraceDensityFn c2_trace_density;
    Antisym5DensityFn antisym5_density;
    const char* name;
};

extern const KernelTable kernels_ref;
extern const KernelTable kernels_scalar;
#ifdef __x86_64__
extern const KernelTable kernels_avx2;  // null entries when not compiled in
#endif

// Active table: AVX2 when the CPU has it, else scalar, unless overridden.
const KernelTable& active();
// "auto" | "ref" | "scalar" | "avx2"; throws on an unavailable choice.
void set_level(const std::string& name);
std::string active_name();

}  // namespace rb::kernels
