#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "realbloch/cohomology.hpp"

using rb::AbelianGroup;
using rb::BundleCategory;
using rb::Coefficients;
using rb::SpaceDescriptor;
using rb::h_point;
using rb::h_space;

namespace {

const Coefficients kZ = Coefficients::plain();
const Coefficients kZ1 = Coefficients::twisted();

AbelianGroup g(const char* s) { return AbelianGroup::parse(s); }

// Removes the summands of `part` from `whole` (they must embed).
AbelianGroup subtract_summand(const AbelianGroup& whole, const AbelianGroup& part) {
    REQUIRE(whole.free_rank() >= part.free_rank());
    std::vector<long> torsion = whole.torsion();
    for (long t : part.torsion()) {
        auto it = std::find(torsion.begin(), torsion.end(), t);
        REQUIRE(it != torsion.end());
        torsion.erase(it);
    }
    return AbelianGroup(whole.free_rank() - part.free_rank(), torsion);
}

}  // namespace

TEST_CASE("point coefficients") {
    CHECK(h_point(0, kZ) == g("Z"));
    CHECK(h_point(2, kZ) == g("Z2"));
    CHECK(h_point(7, kZ) == g("0"));
    CHECK(h_point(1, kZ1) == g("Z2"));
    CHECK(h_point(0, kZ1) == g("0"));
    CHECK(h_point(6, kZ1) == g("0"));
    CHECK(h_point(-3, kZ) == g("0"));
    CHECK(h_point(-3, kZ1) == g("0"));
}

TEST_CASE("TR-circle, both coefficient systems, k <= 10") {
    auto s1 = SpaceDescriptor::tr_sphere(1);
    for (long k = 0; k <= 10; ++k) {
        CAPTURE(k);
        if (k == 0)
            CHECK(h_space(s1, k, kZ) == g("Z"));
        else if (k % 2 == 1)
            CHECK(h_space(s1, k, kZ) == g("0"));
        else
            CHECK(h_space(s1, k, kZ) == g("Z2^2"));
        if (k == 1)
            CHECK(h_space(s1, k, kZ1) == g("Z+Z2"));
        else if (k % 2 == 1)
            CHECK(h_space(s1, k, kZ1) == g("Z2^2"));
        else
            CHECK(h_space(s1, k, kZ1) == g("0"));
    }
}

TEST_CASE("T~1 equals S~1 across both recursion paths") {
    for (long k = -2; k <= 10; ++k)
        for (int twist = 0; twist <= 1; ++twist) {
            CAPTURE(k);
            CAPTURE(twist);
            CHECK(h_space(SpaceDescriptor::tr_torus(1), k, {twist}) ==
                  h_space(SpaceDescriptor::tr_sphere(1), k, {twist}));
        }
}

TEST_CASE("Real line bundles vanish: H^2 with twisted coefficients is 0") {
    for (int d = 1; d <= 8; ++d) {
        CAPTURE(d);
        CHECK(h_space(SpaceDescriptor::tr_torus(d), 2, kZ1) == g("0"));
        CHECK(h_space(SpaceDescriptor::tr_sphere(d), 2, kZ1) == g("0"));
    }
}

TEST_CASE("degree-4 groups of the 4D spaces") {
    CHECK(h_space(SpaceDescriptor::tr_sphere(4), 4, kZ) == g("Z+Z2"));
    CHECK(h_space(SpaceDescriptor::tr_torus(4), 4, kZ) == g("Z+Z2^15"));
}

TEST_CASE("H^1 of TR-tori with twisted coefficients") {
    for (int d = 1; d <= 8; ++d) {
        CAPTURE(d);
        CHECK(h_space(SpaceDescriptor::tr_torus(d), 1, kZ1) ==
              AbelianGroup(d, {2}));
    }
}

TEST_CASE("parity vanishing on TR spaces, d <= 8, k <= 10") {
    for (int d = 1; d <= 8; ++d)
        for (long k = 0; k <= 10; ++k) {
            CAPTURE(d);
            CAPTURE(k);
            if (k % 2 == 0) {
                CHECK(h_space(SpaceDescriptor::tr_torus(d), k, kZ1) == g("0"));
                CHECK(h_space(SpaceDescriptor::tr_sphere(d), k, kZ1) == g("0"));
            } else {
                CHECK(h_space(SpaceDescriptor::tr_torus(d), k, kZ) == g("0"));
                CHECK(h_space(SpaceDescriptor::tr_sphere(d), k, kZ) == g("0"));
            }
        }
}

TEST_CASE("suspension route from the circle matches the sphere formula") {
    // Reduced suspension shift iterated (d-1) times down to S~1, whose
    // groups come from the torus recursion path; then add the point part.
    for (int d = 1; d <= 6; ++d)
        for (long k = 0; k <= 8; ++k)
            for (int m = 0; m <= 1; ++m) {
                CAPTURE(d);
                CAPTURE(k);
                CAPTURE(m);
                const long k1 = k - (d - 1);
                const int m1 = ((m - (d - 1)) % 2 + 2) % 2;
                AbelianGroup reduced_s1 =
                    k1 < 0 ? g("0")
                           : subtract_summand(
                                 h_space(SpaceDescriptor::tr_torus(1), k1, {m1}),
                                 h_point(k1, {m1}));
                AbelianGroup oracle = h_point(k, {m}) + reduced_s1;
                CHECK(h_space(SpaceDescriptor::tr_sphere(d), k, {m}) == oracle);
            }
}

TEST_CASE("ordinary spheres and tori") {
    CHECK(h_space(SpaceDescriptor::sphere(4), 0, kZ) == g("Z"));
    CHECK(h_space(SpaceDescriptor::sphere(4), 4, kZ) == g("Z"));
    CHECK(h_space(SpaceDescriptor::sphere(4), 2, kZ) == g("0"));
    for (int d = 1; d <= 8; ++d) {
        CAPTURE(d);
        CHECK(h_space(SpaceDescriptor::torus(d), 2, kZ) ==
              AbelianGroup::free_part(d * (d - 1) / 2));
    }
    CHECK(h_space(SpaceDescriptor::torus(4), 4, kZ) == g("Z"));
    CHECK_THROWS_AS(h_space(SpaceDescriptor::torus(2), 1, kZ1),
                    rb::UnsupportedQuery);
    CHECK_THROWS_AS(h_space(SpaceDescriptor::antipodal_sphere(3), 1, kZ),
                    rb::UnsupportedQuery);
}

TEST_CASE("classification reproduces the published table") {
    using Cat = BundleCategory;
    // complex bundles over spheres: 0, Z, 0, {0 | Z}
    const char* complex_sphere_m1[4] = {"0", "Z", "0", "0"};
    const char* complex_sphere_m2[4] = {"0", "Z", "0", "Z"};
    const char* complex_torus_m1[4] = {"0", "Z", "Z^3", "Z^6"};
    const char* complex_torus_m2[4] = {"0", "Z", "Z^3", "Z^7"};
    for (int d = 1; d <= 4; ++d) {
        CAPTURE(d);
        CHECK(rb::classify_bundles(Cat::ComplexVB, SpaceDescriptor::sphere(d), 1)
                  .group == g(complex_sphere_m1[d - 1]));
        CHECK(rb::classify_bundles(Cat::ComplexVB, SpaceDescriptor::sphere(d), 2)
                  .group == g(complex_sphere_m2[d - 1]));
        CHECK(rb::classify_bundles(Cat::ComplexVB, SpaceDescriptor::torus(d), 1)
                  .group == g(complex_torus_m1[d - 1]));
        CHECK(rb::classify_bundles(Cat::ComplexVB, SpaceDescriptor::torus(d), 5)
                  .group == g(complex_torus_m2[d - 1]));

        for (long m = 1; m <= 4; ++m) {
            auto entry_s =
                rb::classify_bundles(Cat::RealVB, SpaceDescriptor::tr_sphere(d), m);
            auto entry_t =
                rb::classify_bundles(Cat::RealVB, SpaceDescriptor::tr_torus(d), m);
            if (d == 4 && m >= 2) {
                CHECK(entry_s.group == g("Z"));
                CHECK(entry_s.generator_label == "2Z");
                CHECK(entry_t.group == g("Z"));
                CHECK(entry_t.generator_label == "2Z");
            } else {
                CHECK(entry_s.group == g("0"));
                CHECK(entry_t.group == g("0"));
            }
        }
    }
}

TEST_CASE("classification preconditions") {
    CHECK_THROWS_AS(rb::classify_bundles(BundleCategory::RealVB,
                                         SpaceDescriptor::tr_torus(5), 2),
                    rb::UnsupportedQuery);
    CHECK_THROWS_AS(rb::classify_bundles(BundleCategory::ComplexVB,
                                         SpaceDescriptor::tr_torus(2), 1),
                    rb::UnsupportedQuery);
    CHECK_THROWS_AS(rb::classify_bundles(BundleCategory::RealVB,
                                         SpaceDescriptor::torus(2), 1),
                    rb::UnsupportedQuery);
    CHECK_THROWS_AS(rb::classify_bundles(BundleCategory::ComplexVB,
                                         SpaceDescriptor::sphere(2), 0),
                    rb::UnsupportedQuery);
}

TEST_CASE("Z2-CW cell counts") {
    auto s3 = rb::z2_cw_cells(SpaceDescriptor::tr_sphere(3));
    REQUIRE(s3.size() == 4);
    CHECK(s3[0].fixed_cells == 2);
    CHECK(s3[0].free_cells == 0);
    for (int n = 1; n <= 3; ++n) {
        CHECK(s3[n].fixed_cells == 0);
        CHECK(s3[n].free_cells == 1);
    }

    auto t2 = rb::z2_cw_cells(SpaceDescriptor::tr_torus(2));
    REQUIRE(t2.size() == 3);
    CHECK(t2[0].fixed_cells == 4);
    CHECK(t2[1].free_cells == 4);
    CHECK(t2[2].free_cells == 2);

    auto t1 = rb::z2_cw_cells(SpaceDescriptor::tr_torus(1));
    auto s1 = rb::z2_cw_cells(SpaceDescriptor::tr_sphere(1));
    REQUIRE(t1.size() == s1.size());
    for (size_t i = 0; i < t1.size(); ++i) {
        CHECK(t1[i].fixed_cells == s1[i].fixed_cells);
        CHECK(t1[i].free_cells == s1[i].free_cells);
    }

    // pinned closed forms
    for (int d = 1; d <= 8; ++d) {
        auto rows = rb::z2_cw_cells(SpaceDescriptor::tr_torus(d));
        CHECK(rows[0].fixed_cells == (1L << d));
        for (int n = 1; n <= d; ++n) {
            CAPTURE(d);
            CAPTURE(n);
            CHECK(rows[n].free_cells == rb::binomial(d, n) * (1L << (d - 1)));
        }
    }
    CHECK_THROWS_AS(rb::z2_cw_cells(SpaceDescriptor::sphere(2)),
                    rb::UnsupportedQuery);
}

TEST_CASE("line bundles with mixed structure over the TR-circle") {
    auto table = rb::rz2_line_bundles_s1();
    CHECK(table.group == g("Z2^2"));
    REQUIRE(table.elements.size() == 4);
    CHECK(table.elements[0].label == "C0");
    CHECK(table.elements[0].rep_at_plus == "1");
    CHECK(table.elements[0].rep_at_minus == "1");
    CHECK(table.elements[0].realification == "trivial");
    CHECK(table.elements[2].label == "L+");
    CHECK(table.elements[2].rep_at_plus == "1");
    CHECK(table.elements[2].rep_at_minus == "sigma");
    CHECK(table.elements[2].realification == "Moebius");
    CHECK(table.elements[3].rep_at_plus == "sigma");
    CHECK(table.elements[3].rep_at_minus == "1");
}
