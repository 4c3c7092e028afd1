#include "realbloch/kernels.hpp"

#include "kernels_impl.hpp"

namespace rb::kernels {

namespace {

using detail::VScalar;

void c2_trace_density_scalar(const double* center, const double* prev,
                             const double* next, const double* prev2,
                             const double* next2, std::ptrdiff_t cs,
                             std::ptrdiff_t off1, std::ptrdiff_t off2,
                             std::ptrdiff_t off3, const double ca[4],
                             const double cb[4], std::ptrdiff_t n, double* out) {
    detail::c2_trace_density_impl<VScalar>(center, prev, next, prev2, next2, cs,
                                           off1, off2, off3, ca, cb, n, out);
}

void antisym5_density_scalar(const double* g, std::ptrdiff_t gs, const double* dg,
                             std::ptrdiff_t dgs, std::ptrdiff_t n, double* out) {
    detail::antisym5_density_impl<VScalar>(g, gs, dg, dgs, n, out);
}

}  // namespace

const KernelTable kernels_scalar = {&c2_trace_density_scalar,
                                    &antisym5_density_scalar, "scalar"};

}  // namespace rb::kernels
