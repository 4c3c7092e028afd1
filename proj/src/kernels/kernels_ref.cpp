#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <complex>
#include <numeric>

#include "realbloch/kernels.hpp"

// Reference kernels: straightforward implementations used as the oracle
// for the tuned variants.  The trace density sums all 24 permutations
// literally instead of grouping them into commutators.

namespace rb::kernels {

namespace {

using cplx = std::complex<double>;
using Mat4c = Eigen::Matrix4cd;

Mat4c load_mat(const double* base, std::ptrdiff_t cs, std::ptrdiff_t i) {
    Mat4c m;
    for (int r = 0; r < 4; ++r)
        for (int c = 0; c < 4; ++c) {
            const int e = 4 * r + c;
            m(r, c) = cplx(base[e * cs + i], base[(16 + e) * cs + i]);
        }
    return m;
}

struct Perm {
    std::array<int, 4> p;
    int sign;
};

const std::array<Perm, 24>& permutations4() {
    static const std::array<Perm, 24> table = [] {
        std::array<Perm, 24> out{};
        std::array<int, 4> p = {0, 1, 2, 3};
        int idx = 0;
        do {
            int inversions = 0;
            for (int a = 0; a < 4; ++a)
                for (int b = a + 1; b < 4; ++b)
                    if (p[a] > p[b]) ++inversions;
            out[idx++] = {p, (inversions % 2 == 0) ? +1 : -1};
        } while (std::next_permutation(p.begin(), p.end()));
        return out;
    }();
    return table;
}

void c2_trace_density_ref(const double* center, const double* prev,
                          const double* next, const double* prev2,
                          const double* next2, std::ptrdiff_t cs,
                          std::ptrdiff_t off1, std::ptrdiff_t off2,
                          std::ptrdiff_t off3, const double ca[4],
                          const double cb[4], std::ptrdiff_t n, double* out) {
    const std::ptrdiff_t off[4] = {0, off1, off2, off3};
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        Mat4c p = load_mat(center, cs, i);
        Mat4c d[4];
        d[0] = (load_mat(next, cs, i) - load_mat(prev, cs, i)) * ca[0] +
               (load_mat(next2, cs, i) - load_mat(prev2, cs, i)) * cb[0];
        for (int a = 1; a < 4; ++a)
            d[a] = (load_mat(center, cs, i + off[a]) -
                    load_mat(center, cs, i - off[a])) * ca[a] +
                   (load_mat(center, cs, i + 2 * off[a]) -
                    load_mat(center, cs, i - 2 * off[a])) * cb[a];
        cplx sum = 0;
        for (const auto& perm : permutations4()) {
            Mat4c prod = p * d[perm.p[0]] * d[perm.p[1]] * d[perm.p[2]] * d[perm.p[3]];
            sum += static_cast<double>(perm.sign) * prod.trace();
        }
        out[i] = sum.real();
    }
}

void antisym5_density_ref(const double* g, std::ptrdiff_t gs, const double* dg,
                          std::ptrdiff_t dgs, std::ptrdiff_t n, double* out) {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        double gv[5];
        double q = 0;
        for (int j = 0; j < 5; ++j) {
            gv[j] = g[j * gs + i];
            q += gv[j] * gv[j];
        }
        double sum = 0;
        for (int j = 0; j < 5; ++j) {
            Eigen::Matrix4d minor;
            int r = 0;
            for (int idx = 0; idx < 5; ++idx) {
                if (idx == j) continue;
                for (int a = 0; a < 4; ++a)
                    minor(r, a) = dg[(4 * idx + a) * dgs + i];
                ++r;
            }
            sum += ((j % 2 == 0) ? -1.0 : 1.0) * gv[j] * minor.determinant();
        }
        out[i] = sum * std::pow(q, -2.5);
    }
}

}  // namespace

const KernelTable kernels_ref = {&c2_trace_density_ref, &antisym5_density_ref, "ref"};

}  // namespace rb::kernels
