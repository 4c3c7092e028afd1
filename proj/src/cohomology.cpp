#include "realbloch/cohomology.hpp"

#include <stdexcept>

namespace rb {

std::string SpaceDescriptor::name() const {
    switch (kind) {
        case SpaceKind::Point: return "pt";
        case SpaceKind::TRSphere: return "tr-sphere(" + std::to_string(d) + ")";
        case SpaceKind::TRTorus: return "tr-torus(" + std::to_string(d) + ")";
        case SpaceKind::AntipodalSphere: return "antipodal-sphere(" + std::to_string(d) + ")";
        case SpaceKind::OrdinarySphere: return "sphere(" + std::to_string(d) + ")";
        case SpaceKind::OrdinaryTorus: return "torus(" + std::to_string(d) + ")";
    }
    return "?";
}

long binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    long out = 1;
    for (int i = 1; i <= k; ++i) out = out * (n - k + i) / i;
    return out;
}

AbelianGroup h_point(long k, Coefficients c) {
    if (k < 0) return AbelianGroup::zero();
    if (c.twist == 0) {
        if (k == 0) return AbelianGroup::Z();
        return (k % 2 == 0) ? AbelianGroup::Z2() : AbelianGroup::zero();
    }
    return (k % 2 == 1) ? AbelianGroup::Z2() : AbelianGroup::zero();
}

namespace {

// H^k_{Z2}(T^d, Z(m)) by iterating the circle-product recursion
//   H^k(X x S~1, Z(1)) = H^k(X, Z(1)) + H^{k-1}(X, Z)
//   H^k(X x S~1, Z)    = H^k(X, Z)    + H^{k-1}(X, Z(1))
// starting from the point.  The whole (k, twist) table up to degree k
// is filled level by level, so the cost is linear in d * k.
AbelianGroup h_tr_torus(int d, long k, int twist) {
    if (k < 0) return AbelianGroup::zero();
    // table[t][q] = H^q of the current level with twist t
    std::vector<std::vector<AbelianGroup>> table(2);
    for (int t = 0; t < 2; ++t) {
        table[t].resize(k + 1);
        for (long q = 0; q <= k; ++q) table[t][q] = h_point(q, {t});
    }
    for (int level = 0; level < d; ++level) {
        std::vector<std::vector<AbelianGroup>> next(2);
        for (int t = 0; t < 2; ++t) {
            next[t].resize(k + 1);
            for (long q = 0; q <= k; ++q) {
                AbelianGroup below =
                    (q >= 1) ? table[1 - t][q - 1] : AbelianGroup::zero();
                next[t][q] = table[t][q] + below;
            }
        }
        table = std::move(next);
    }
    return table[twist][k];
}

// H^k_{Z2}(S^d_tr, Z(m)) = H^k(pt, Z(m)) + H^{k-d}(pt, Z(m-d)).
AbelianGroup h_tr_sphere(int d, long k, int twist) {
    Coefficients shifted = Coefficients::of(twist - d);
    return h_point(k, {twist}) + h_point(k - d, shifted);
}

}  // namespace

AbelianGroup h_space(const SpaceDescriptor& x, long k, Coefficients c) {
    if (x.kind != SpaceKind::Point && x.d < 1)
        throw UnsupportedQuery("h_space: dimension must be >= 1");
    switch (x.kind) {
        case SpaceKind::Point:
            return h_point(k, c);
        case SpaceKind::TRSphere:
            return h_tr_sphere(x.d, k, c.twist);
        case SpaceKind::TRTorus:
            return h_tr_torus(x.d, k, c.twist);
        case SpaceKind::AntipodalSphere:
            throw UnsupportedQuery("h_space: antipodal sphere not supported");
        case SpaceKind::OrdinarySphere:
            if (c.twist != 0)
                throw UnsupportedQuery("h_space: twisted coefficients need an involution");
            if (k < 0) return AbelianGroup::zero();
            return (k == 0 || k == x.d) ? AbelianGroup::Z() : AbelianGroup::zero();
        case SpaceKind::OrdinaryTorus:
            if (c.twist != 0)
                throw UnsupportedQuery("h_space: twisted coefficients need an involution");
            if (k < 0 || k > x.d) return AbelianGroup::zero();
            return AbelianGroup::free_part(binomial(x.d, static_cast<int>(k)));
    }
    throw UnsupportedQuery("h_space: unknown space kind");
}

ClassificationEntry classify_bundles(BundleCategory category,
                                     const SpaceDescriptor& x, long m) {
    if (m < 1) throw UnsupportedQuery("classify_bundles: rank must be >= 1");
    if (x.d < 1 || x.d > 4)
        throw UnsupportedQuery("classify_bundles: proved only for 1 <= d <= 4");

    ClassificationEntry entry{category, x, m, AbelianGroup::zero(), std::nullopt};
    if (category == BundleCategory::ComplexVB) {
        if (x.kind != SpaceKind::OrdinarySphere && x.kind != SpaceKind::OrdinaryTorus)
            throw UnsupportedQuery("classify_bundles: complex bundles live on ordinary spaces");
        entry.group = h_space(x, 2, Coefficients::plain());
        if (m >= 2) entry.group = entry.group + h_space(x, 4, Coefficients::plain());
        return entry;
    }
    if (x.kind != SpaceKind::TRSphere && x.kind != SpaceKind::TRTorus)
        throw UnsupportedQuery("classify_bundles: Real bundles need a TR space");
    if (x.d <= 3 || m == 1) {
        entry.group = h_space(x, 2, Coefficients::twisted());  // always 0 here
        return entry;
    }
    // d = 4, m >= 2: classified by the (even) second Chern number.
    entry.group = AbelianGroup::Z();
    entry.generator_label = "2Z";
    return entry;
}

std::vector<CellCountRow> z2_cw_cells(const SpaceDescriptor& x) {
    if (x.kind != SpaceKind::TRSphere && x.kind != SpaceKind::TRTorus)
        throw UnsupportedQuery("z2_cw_cells: only TR-spheres and TR-tori");
    if (x.d < 1 || x.d > 30)
        throw UnsupportedQuery("z2_cw_cells: dimension out of range");
    std::vector<CellCountRow> rows;
    if (x.kind == SpaceKind::TRSphere) {
        rows.push_back({0, 2, 0});
        for (int n = 1; n <= x.d; ++n) rows.push_back({n, 0, 1});
    } else {
        rows.push_back({0, 1L << x.d, 0});
        for (int n = 1; n <= x.d; ++n)
            rows.push_back({n, 0, binomial(x.d, n) * (1L << (x.d - 1))});
    }
    return rows;
}

RZ2LineBundleTable rz2_line_bundles_s1() {
    RZ2LineBundleTable table;
    table.group = AbelianGroup::Z2() + AbelianGroup::Z2();
    table.elements = {
        {"C0", "1", "1", "trivial"},
        {"C1", "sigma", "sigma", "trivial"},
        {"L+", "1", "sigma", "Moebius"},
        {"L-", "sigma", "1", "Moebius"},
    };
    return table;
}

}  // namespace rb
