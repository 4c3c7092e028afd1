#pragma once

#include <string>
#include <vector>

#include "realbloch/abelian.hpp"
#include "realbloch/cohomology.hpp"  // UnsupportedQuery

namespace rb {

enum class KFlavor { KR, KO, K };

inline int k_period(KFlavor f) { return f == KFlavor::K ? 2 : 8; }
std::string k_flavor_name(KFlavor f);

enum class KSpaceKind {
    Point,
    TRCircle,            // circle with TR involution
    TRTorus,             // product of TR circles
    TRSphere,            // sphere with TR involution
    OrdinaryCircleTorus, // torus, trivial involution
    OrdinarySphere,
};

struct KQuery {
    KFlavor flavor = KFlavor::KR;
    KSpaceKind space = KSpaceKind::Point;
    int d = 0;          // dimension; ignored for Point/TRCircle
    long degree_j = 0;  // the group in degree -j, periodicity applies
    bool reduced = false;
};

// Coefficient groups: KR^{-j}(pt) = KO^{-j}(pt) with period 8,
// K^{-j}(pt) with period 2.  j is reduced modulo the period, so
// positive-degree groups KR^{j} are evaluated as KR^{j-8}.
AbelianGroup k_point(KFlavor flavor, long j);

// K groups of circles, tori and spheres via the product/suspension
// recursions.  TR spaces require flavor KR; ordinary spaces KO or K.
AbelianGroup k_space(const KQuery& q);

struct KRTorusAuditRow {
    int d;
    AbelianGroup recursion;  // what the product recursion produces
    AbelianGroup printed;    // the published table row
    bool match;
    long recursion_summands;
    long printed_summands;
};

// Reduced KR groups of TR-tori, d = 1..8: recursion output next to the
// published row.  The free/torsion split disagrees for d >= 5 (the
// summand counts still agree); rows are flagged, not reconciled.
std::vector<KRTorusAuditRow> audit_table_b2();

}  // namespace rb
