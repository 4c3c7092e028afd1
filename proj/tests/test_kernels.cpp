#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "realbloch/kernels.hpp"

using namespace rb::kernels;

namespace {

// Slab triple with Hermitian 4x4 samples at every lattice site, in the
// component-major layout the kernels expect.
struct FakeSlabs {
    std::ptrdiff_t n = 0, pad = 0, cs = 0;
    std::vector<double> prev2, prev, center, next, next2;
    std::ptrdiff_t row = 0;  // offset of point 0

    FakeSlabs(std::ptrdiff_t n_, std::ptrdiff_t pad_, unsigned seed)
        : n(n_), pad(pad_), cs(n_ + 2 * pad_) {
        row = pad;
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> dist(-1.0, 1.0);
        auto fill = [&](std::vector<double>& buf) {
            buf.resize(32 * cs);
            // a random Hermitian matrix at every site
            for (std::ptrdiff_t i = 0; i < cs; ++i) {
                double re[16], im[16];
                for (int r = 0; r < 4; ++r)
                    for (int c = r; c < 4; ++c) {
                        double a = dist(rng), b = (r == c) ? 0.0 : dist(rng);
                        re[4 * r + c] = a;
                        re[4 * c + r] = a;
                        im[4 * r + c] = b;
                        im[4 * c + r] = -b;
                    }
                for (int e = 0; e < 16; ++e) {
                    buf[e * cs + i] = re[e];
                    buf[(16 + e) * cs + i] = im[e];
                }
            }
        };
        fill(prev2);
        fill(prev);
        fill(center);
        fill(next);
        fill(next2);
    }
};

void run_c2(const KernelTable& table, const FakeSlabs& s, const double ca[4],
            const double cb[4], std::vector<double>& out) {
    out.assign(s.n, 0.0);
    // neighbour offsets 1, 3, 7 keep the +-2 reads inside the padding
    table.c2_trace_density(s.center.data() + s.row, s.prev.data() + s.row,
                           s.next.data() + s.row, s.prev2.data() + s.row,
                           s.next2.data() + s.row, s.cs, 7, 3, 1, ca, cb, s.n,
                           out.data());
}

}  // namespace

TEST_CASE("c2 trace kernels agree: ref vs scalar vs dispatched") {
    FakeSlabs slabs(37, 16, 404);  // odd count exercises the SIMD tail
    const double ca[4] = {0.7, 1.1, 0.9, 1.3};
    for (const double cbv : {0.0, -0.21}) {  // both stencil shapes
        const double cb[4] = {cbv, cbv / 2, cbv / 3, cbv / 4};
        std::vector<double> ref, scalar, active_out;
        run_c2(kernels_ref, slabs, ca, cb, ref);
        run_c2(kernels_scalar, slabs, ca, cb, scalar);
        run_c2(active(), slabs, ca, cb, active_out);
        for (std::ptrdiff_t i = 0; i < slabs.n; ++i) {
            const double tol = 1e-11 * std::max(1.0, std::abs(ref[i]));
            CHECK(std::abs(ref[i] - scalar[i]) < tol);
            CHECK(std::abs(ref[i] - active_out[i]) < tol);
        }
    }
}

#if defined(__x86_64__) && defined(REALBLOCH_HAVE_AVX2)
TEST_CASE("c2 trace kernel: avx2 matches ref when available") {
    if (!__builtin_cpu_supports("avx2")) return;
    FakeSlabs slabs(41, 16, 505);
    const double ca[4] = {1.0, 0.5, 2.0, 0.25};
    const double cb[4] = {-0.1, 0.05, -0.2, 0.3};
    std::vector<double> ref, avx2;
    run_c2(kernels_ref, slabs, ca, cb, ref);
    run_c2(kernels_avx2, slabs, ca, cb, avx2);
    for (std::ptrdiff_t i = 0; i < slabs.n; ++i)
        CHECK(std::abs(ref[i] - avx2[i]) < 1e-11 * std::max(1.0, std::abs(ref[i])));
}
#endif

TEST_CASE("antisymmetric 5-component kernels agree") {
    const std::ptrdiff_t n = 53;
    std::mt19937_64 rng(909);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> g(5 * n), dg(20 * n);
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        for (int j = 0; j < 5; ++j)
            g[j * n + i] = dist(rng) + (j == 0 ? 2.0 : 0.0);  // keep q away from 0
        for (int c = 0; c < 20; ++c) dg[c * n + i] = dist(rng);
    }
    std::vector<double> ref(n), scalar(n), active_out(n);
    kernels_ref.antisym5_density(g.data(), n, dg.data(), n, n, ref.data());
    kernels_scalar.antisym5_density(g.data(), n, dg.data(), n, n, scalar.data());
    active().antisym5_density(g.data(), n, dg.data(), n, n, active_out.data());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const double tol = 1e-12 * std::max(1.0, std::abs(ref[i]));
        CHECK(std::abs(ref[i] - scalar[i]) < tol);
        CHECK(std::abs(ref[i] - active_out[i]) < tol);
    }
}

TEST_CASE("kernel level selection") {
    const std::string initial = active_name();
    CHECK((initial == "scalar" || initial == "avx2"));
    set_level("ref");
    CHECK(active_name() == "ref");
    set_level("scalar");
    CHECK(active_name() == "scalar");
    set_level("auto");
    CHECK(active_name() == initial);
    CHECK_THROWS(set_level("bogus"));
#if defined(__x86_64__) && defined(REALBLOCH_HAVE_AVX2)
    if (__builtin_cpu_supports("avx2")) {
        set_level("avx2");
        CHECK(active_name() == "avx2");
        set_level("auto");
    }
#endif
}
