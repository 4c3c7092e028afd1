#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "realbloch/abelian.hpp"

namespace rb {

// Local coefficient system Z(m): only the parity of the twist matters.
struct Coefficients {
    int twist = 0;  // 0 for Z, 1 for the sign-twisted system Z(1)

    static Coefficients plain() { return {0}; }
    static Coefficients twisted() { return {1}; }
    static Coefficients of(long m) { return {static_cast<int>(((m % 2) + 2) % 2)}; }
};

enum class SpaceKind {
    Point,
    TRSphere,         // S^d with (k0,k1,..,kd) -> (k0,-k1,..,-kd)
    TRTorus,          // T^d with kappa -> -kappa
    AntipodalSphere,  // S^d with k -> -k (free action; no cohomology support)
    OrdinarySphere,
    OrdinaryTorus,
};

struct SpaceDescriptor {
    SpaceKind kind = SpaceKind::Point;
    int d = 0;

    static SpaceDescriptor point() { return {SpaceKind::Point, 0}; }
    static SpaceDescriptor tr_sphere(int d) { return {SpaceKind::TRSphere, d}; }
    static SpaceDescriptor tr_torus(int d) { return {SpaceKind::TRTorus, d}; }
    static SpaceDescriptor antipodal_sphere(int d) { return {SpaceKind::AntipodalSphere, d}; }
    static SpaceDescriptor sphere(int d) { return {SpaceKind::OrdinarySphere, d}; }
    static SpaceDescriptor torus(int d) { return {SpaceKind::OrdinaryTorus, d}; }

    std::string name() const;
};

// Thrown when a (space, coefficients) or classification request falls
// outside what the table machinery supports.
struct UnsupportedQuery : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// H^k_{Z2}({*}, Z(m)) = H^k(RP^infty, Z(m)).
AbelianGroup h_point(long k, Coefficients c);

// Borel equivariant cohomology H^k_{Z2}(X, Z(m)) for TR spaces, and
// ordinary H^k(X, Z) for spheres/tori without involution.
AbelianGroup h_space(const SpaceDescriptor& x, long k, Coefficients c);

enum class BundleCategory { ComplexVB, RealVB };

struct ClassificationEntry {
    BundleCategory category;
    SpaceDescriptor space;
    long rank_m;  // 0 encodes "any m >= 2" (the stable answer)
    AbelianGroup group;
    std::optional<std::string> generator_label;  // e.g. "2Z"
};

// Isomorphism classes of rank-m bundles over spheres/tori, d <= 4.
// ComplexVB expects an ordinary space, RealVB a TR space.
ClassificationEntry classify_bundles(BundleCategory category,
                                     const SpaceDescriptor& x, long m);

struct CellCountRow {
    int dimension;
    long fixed_cells;  // N_n
    long free_cells;   // Ntilde_n
};

// Z2-CW cell counts for TR-spheres and TR-tori.
std::vector<CellCountRow> z2_cw_cells(const SpaceDescriptor& x);

// The four line bundles carrying both a "Real" and a Z2-equivariant
// structure over the TR-circle, with their fixed-point representations
// ("1" trivial / "sigma" sign) at k+ = (+1,0) and k- = (-1,0) and their
// underlying real bundle.
struct RZ2LineBundle {
    std::string label;         // "C0", "C1", "L+", "L-"
    std::string rep_at_plus;   // "1" or "sigma"
    std::string rep_at_minus;  // "1" or "sigma"
    std::string realification; // "trivial" or "Moebius"
};

struct RZ2LineBundleTable {
    AbelianGroup group;  // Z2 + Z2
    std::vector<RZ2LineBundle> elements;
};

RZ2LineBundleTable rz2_line_bundles_s1();

long binomial(int n, int k);

}  // namespace rb
