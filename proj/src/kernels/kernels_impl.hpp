#pragma once

// Shared kernel bodies, templated over a small vector type V (one grid
// point per lane).  Instantiated with VScalar in kernels_scalar.cpp and
// with VAvx2 in kernels_avx2.cpp.  The independent reference versions
// live in kernels_ref.cpp and do not use this header.

#include <cmath>
#include <cstddef>

namespace rb::kernels::detail {

struct VScalar {
    double v;
    static constexpr int width = 1;
    static VScalar load(const double* p) { return {*p}; }
    void store(double* p) const { *p = v; }
    static VScalar broadcast(double x) { return {x}; }
    friend VScalar operator+(VScalar a, VScalar b) { return {a.v + b.v}; }
    friend VScalar operator-(VScalar a, VScalar b) { return {a.v - b.v}; }
    friend VScalar operator*(VScalar a, VScalar b) { return {a.v * b.v}; }
    friend VScalar operator/(VScalar a, VScalar b) { return {a.v / b.v}; }
    static VScalar sqrt(VScalar a) { return {std::sqrt(a.v)}; }
};

// eps^{abcd} Tr[P D_a D_b D_c D_d]
//   = 2 Re Tr[P Y],  Y = [D0,D1][D2,D3] - [D0,D2][D1,D3] + [D0,D3][D1,D2],
// grouping the 24 permutations into commutators.
template <class V>
inline void c2_trace_batch(const double* center, const double* prev,
                           const double* next, const double* prev2,
                           const double* next2, std::ptrdiff_t cs,
                           const std::ptrdiff_t off[4], const double ca[4],
                           const double cb[4], std::ptrdiff_t i, double* out) {
    V p[32], d[4][32];
    for (int c = 0; c < 32; ++c) {
        p[c] = V::load(center + c * cs + i);
        d[0][c] = (V::load(next + c * cs + i) - V::load(prev + c * cs + i)) *
                      V::broadcast(ca[0]) +
                  (V::load(next2 + c * cs + i) - V::load(prev2 + c * cs + i)) *
                      V::broadcast(cb[0]);
        for (int a = 1; a < 4; ++a) {
            d[a][c] = (V::load(center + c * cs + i + off[a]) -
                       V::load(center + c * cs + i - off[a])) *
                          V::broadcast(ca[a]) +
                      (V::load(center + c * cs + i + 2 * off[a]) -
                       V::load(center + c * cs + i - 2 * off[a])) *
                          V::broadcast(cb[a]);
        }
    }

    // complex 4x4 product c = a * b on component planes
    auto cmul = [](const V a[32], const V b[32], V c[32]) {
        for (int r = 0; r < 4; ++r)
            for (int j = 0; j < 4; ++j) {
                V re = V::broadcast(0.0), im = V::broadcast(0.0);
                for (int k = 0; k < 4; ++k) {
                    const int ak = 4 * r + k, kb = 4 * k + j;
                    re = re + a[ak] * b[kb] - a[16 + ak] * b[16 + kb];
                    im = im + a[ak] * b[16 + kb] + a[16 + ak] * b[kb];
                }
                c[4 * r + j] = re;
                c[16 + 4 * r + j] = im;
            }
    };
    // f = a b - (a b)^dagger, the commutator of Hermitian a, b
    V m[32], f01[32], f23[32], f02[32], f13[32], f03[32], f12[32];
    auto comm = [&](const V a[32], const V b[32], V f[32]) {
        cmul(a, b, m);
        for (int r = 0; r < 4; ++r)
            for (int j = 0; j < 4; ++j) {
                f[4 * r + j] = m[4 * r + j] - m[4 * j + r];
                f[16 + 4 * r + j] = m[16 + 4 * r + j] + m[16 + 4 * j + r];
            }
    };
    comm(d[0], d[1], f01);
    comm(d[2], d[3], f23);
    comm(d[0], d[2], f02);
    comm(d[1], d[3], f13);
    comm(d[0], d[3], f03);
    comm(d[1], d[2], f12);

    V y[32];
    cmul(f01, f23, y);
    cmul(f02, f13, m);
    for (int c = 0; c < 32; ++c) y[c] = y[c] - m[c];
    cmul(f03, f12, m);
    for (int c = 0; c < 32; ++c) y[c] = y[c] + m[c];

    V s = V::broadcast(0.0);
    for (int r = 0; r < 4; ++r)
        for (int j = 0; j < 4; ++j)
            s = s + p[4 * r + j] * y[4 * j + r] - p[16 + 4 * r + j] * y[16 + 4 * j + r];
    (s + s).store(out + i);
}

template <class V>
void c2_trace_density_impl(const double* center, const double* prev,
                           const double* next, const double* prev2,
                           const double* next2, std::ptrdiff_t cs,
                           std::ptrdiff_t off1, std::ptrdiff_t off2,
                           std::ptrdiff_t off3, const double ca[4],
                           const double cb[4], std::ptrdiff_t n, double* out) {
    const std::ptrdiff_t off[4] = {0, off1, off2, off3};
    std::ptrdiff_t i = 0;
    for (; i + V::width <= n; i += V::width)
        c2_trace_batch<V>(center, prev, next, prev2, next2, cs, off, ca, cb, i, out);
    for (; i < n; ++i)
        c2_trace_batch<VScalar>(center, prev, next, prev2, next2, cs, off, ca, cb,
                                i, out);
}

// 4x4 determinant by the 2x2-minor (Laplace over row pairs) expansion.
template <class V>
inline V det4(const V m[16]) {
    V s0 = m[0] * m[5] - m[1] * m[4];
    V s1 = m[0] * m[6] - m[2] * m[4];
    V s2 = m[0] * m[7] - m[3] * m[4];
    V s3 = m[1] * m[6] - m[2] * m[5];
    V s4 = m[1] * m[7] - m[3] * m[5];
    V s5 = m[2] * m[7] - m[3] * m[6];
    V c5 = m[10] * m[15] - m[11] * m[14];
    V c4 = m[9] * m[15] - m[11] * m[13];
    V c3 = m[9] * m[14] - m[10] * m[13];
    V c2 = m[8] * m[15] - m[11] * m[12];
    V c1 = m[8] * m[14] - m[10] * m[12];
    V c0 = m[8] * m[13] - m[9] * m[12];
    return s0 * c5 - s1 * c4 + s3 * c2 + s2 * c3 - s4 * c1 + s5 * c0;
}

template <class V>
inline void antisym5_batch(const double* g, std::ptrdiff_t gs, const double* dg,
                           std::ptrdiff_t dgs, std::ptrdiff_t i, double* out) {
    V gv[5], dgv[20];
    for (int j = 0; j < 5; ++j) gv[j] = V::load(g + j * gs + i);
    for (int c = 0; c < 20; ++c) dgv[c] = V::load(dg + c * dgs + i);

    V q = gv[0] * gv[0];
    for (int j = 1; j < 5; ++j) q = q + gv[j] * gv[j];
    V factor = V::broadcast(1.0) / (q * q * V::sqrt(q));  // q^{-5/2}

    V sum = V::broadcast(0.0);
    V minor[16];
    for (int j = 0; j < 5; ++j) {
        int r = 0;
        for (int idx = 0; idx < 5; ++idx) {
            if (idx == j) continue;
            for (int a = 0; a < 4; ++a) minor[4 * r + a] = dgv[4 * idx + a];
            ++r;
        }
        V term = gv[j] * det4(minor);
        sum = (j % 2 == 0) ? sum - term : sum + term;
    }
    (sum * factor).store(out + i);
}

template <class V>
void antisym5_density_impl(const double* g, std::ptrdiff_t gs, const double* dg,
                           std::ptrdiff_t dgs, std::ptrdiff_t n, double* out) {
    std::ptrdiff_t i = 0;
    for (; i + V::width <= n; i += V::width) antisym5_batch<V>(g, gs, dg, dgs, i, out);
    for (; i < n; ++i) antisym5_batch<VScalar>(g, gs, dg, dgs, i, out);
}

}  // namespace rb::kernels::detail
