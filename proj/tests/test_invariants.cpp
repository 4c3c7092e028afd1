#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "realbloch/invariants.hpp"
#include "realbloch/kernels.hpp"

using namespace rb;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("constant field has zero c2") {
    ProjectorMap constant = [](const double*) {
        return (0.5 * (Mat4::Identity() + clifford_rep()[0])).eval();
    };
    Grid torus = Grid::torus(4, 8);
    CHECK(std::abs(second_chern_trace(constant, torus).value) < 1e-14);
    Grid chart = Grid::truncated_chart(4, 3.0, 9);
    CHECK(std::abs(second_chern_trace(constant, chart).value) < 1e-14);
}

TEST_CASE("c2 of the Hopf pullback converges to 1 on the chart") {
    ProjectorMap hopf = pullback_projector_chart(identity_sphere_map());
    Grid coarse = Grid::truncated_chart(4, 10.0, 33);
    Grid fine = Grid::truncated_chart(4, 10.0, 49);
    auto lo = second_chern_trace(hopf, coarse, {2});
    auto hi = second_chern_trace(hopf, fine, {2});
    CHECK(lo.nearest_integer == 1);
    CHECK(hi.nearest_integer == 1);
    CHECK(hi.residual < lo.residual);  // refinement shrinks the residual
}

TEST_CASE("ansatz trace residual shrinks under refinement") {
    ProjectorMap plus = pullback_projector_chart(ansatz_sphere_map(+1));
    auto lo = second_chern_trace(plus, Grid::truncated_chart(4, 6.0, 49), {2});
    auto hi = second_chern_trace(plus, Grid::truncated_chart(4, 6.0, 65), {2});
    CHECK(lo.nearest_integer == 2);
    CHECK(hi.nearest_integer == 2);
    CHECK(hi.residual < lo.residual);
}

TEST_CASE("closed-form c2 of the ansatz: both bands, evenness") {
    CoefficientMap f = standard_ansatz();
    Grid grid = Grid::truncated_chart(4, 10.0, 65);
    auto plus = second_chern_closed_form(f, grid, +1, {2});
    auto minus = second_chern_closed_form(f, grid, -1, {2});
    CHECK(plus.nearest_integer == 2);
    CHECK(minus.nearest_integer == -2);
    CHECK(std::abs(plus.value + minus.value) < 1e-12);  // exact odd symmetry
    CHECK(plus.residual < 0.1);
}

TEST_CASE("degenerate family: F1..F4 = 0 gives zero density") {
    auto mono = [](int e1, int e2, int e3, int e4, double c) {
        return Monomial{{e1, e2, e3, e4}, c};
    };
    std::array<RationalComponent, 5> comps = {
        RationalComponent(Polynomial4({mono(0, 0, 0, 0, 1.0)}), 0),
        RationalComponent(Polynomial4(), 0), RationalComponent(Polynomial4(), 0),
        RationalComponent(Polynomial4(), 0), RationalComponent(Polynomial4(), 0)};
    CoefficientMap constant_f(std::move(comps), {+1, +1, +1, +1, +1});
    Grid grid = Grid::truncated_chart(4, 4.0, 9);
    CHECK(std::abs(second_chern_closed_form(constant_f, grid, +1).value) < 1e-14);
}

TEST_CASE("threading is deterministic and matches single-thread") {
    ProjectorMap hopf = pullback_projector_chart(identity_sphere_map());
    Grid grid = Grid::truncated_chart(4, 8.0, 17);
    auto once = second_chern_trace(hopf, grid, {1});
    auto again = second_chern_trace(hopf, grid, {1});
    auto parallel = second_chern_trace(hopf, grid, {2});
    CHECK(once.value == again.value);  // bit-reproducible
    CHECK(std::abs(once.value - parallel.value) < 1e-12);
}

TEST_CASE("kernel variants give the same integral") {
    ProjectorMap hopf = pullback_projector_chart(identity_sphere_map());
    Grid grid = Grid::truncated_chart(4, 8.0, 13);
    rb::kernels::set_level("ref");
    double ref = second_chern_trace(hopf, grid, {2}).value;
    rb::kernels::set_level("scalar");
    double scalar = second_chern_trace(hopf, grid, {2}).value;
    rb::kernels::set_level("auto");
    double active = second_chern_trace(hopf, grid, {2}).value;
    CHECK(std::abs(ref - scalar) < 1e-11);
    CHECK(std::abs(ref - active) < 1e-11);
}

TEST_CASE("first Chern number: winding model on the 2-torus") {
    // rank-1 projector (1 + n(kappa).sigma)/2 embedded in the top-left
    // block, with n the degree-1 winding map over T^2
    ProjectorMap winding = [](const double kappa[2]) {
        const double nx = std::sin(kappa[0]);
        const double ny = std::sin(kappa[1]);
        const double nz = 0.5 + std::cos(kappa[0]) + std::cos(kappa[1]);
        const double r = std::sqrt(nx * nx + ny * ny + nz * nz);
        Mat2 p2 = 0.5 * (Mat2::Identity() + (nx / r) * pauli(1) + (ny / r) * pauli(2) +
                         (nz / r) * pauli(3));
        Mat4 p = Mat4::Zero();
        p.block<2, 2>(0, 0) = p2;
        return p;
    };
    Grid grid = Grid::torus(2, 256);
    auto rep = first_chern(winding, grid);
    CHECK(std::abs(std::abs(rep.value) - 1.0) < 1e-3);  // winding number +-1
}

TEST_CASE("first Chern number of AI slices vanishes to rounding") {
    CoefficientMap f = standard_ansatz();
    ProjectorMap p4 = [&f](const double kappa[4]) {
        return band_projector(f, kappa, +1);
    };
    Grid slice_grid = Grid::truncated_chart(2, 8.0, 33);
    for (int a = 0; a < 4; ++a)
        for (int b = a + 1; b < 4; ++b) {
            auto rep = first_chern(slice_projector_map(p4, a, b, {0.0, 0.0}),
                                   slice_grid);
            CHECK(std::abs(rep.value) < 1e-10);
        }
    // torus slices anchored at the fixed-point angles
    ProjectorMap hopf_pull = pullback_projector_torus(identity_sphere_map());
    Grid torus_slice = Grid::torus(2, 32);
    for (double anchor : {0.0, -kPi}) {
        auto rep = first_chern(
            slice_projector_map(hopf_pull, 0, 1, {anchor, anchor}), torus_slice);
        CHECK(std::abs(rep.value) < 1e-10);
    }
}

TEST_CASE("cartan degree: identity, constant, powers") {
    Grid s3 = Grid::s3_angles(24, 24, 24);
    CHECK(cartan_degree(su2_power_map(1), s3).value ==
          doctest::Approx(1.0).epsilon(1e-3));
    CHECK(std::abs(cartan_degree(su2_power_map(0), s3).value) < 1e-12);
    CHECK(cartan_degree(su2_power_map(3), s3).value ==
          doctest::Approx(3.0).epsilon(1e-3));
    CHECK(cartan_degree(su2_power_map(-2), s3).value ==
          doctest::Approx(-2.0).epsilon(1e-3));
    CHECK(cartan_degree(equator_ansatz_su2_map(), s3).value ==
          doctest::Approx(2.0).epsilon(1e-3));
    // FD fallback agrees with the exact-gradient path
    SU2Map no_grad = su2_power_map(2);
    no_grad.ambient_grad = nullptr;
    CHECK(cartan_degree(no_grad, s3).value == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("regular-value degrees") {
    RegularValueOptions opts;
    opts.seeds = 150;
    CHECK(regular_value_degree_s3(su2_power_map(1), opts).degree == 1);
    auto cube = regular_value_degree_s3(su2_power_map(3), opts);
    CHECK(cube.degree == 3);
    CHECK(cube.preimages.size() == 3);
    CHECK(regular_value_degree_s4(identity_sphere_map(), opts).degree == 1);
    auto ansatz = regular_value_degree_s4(ansatz_sphere_map(+1), opts);
    CHECK(ansatz.degree == 2);
    CHECK(ansatz.preimages.size() == 2);
    RegularValueOptions wide = opts;
    wide.seeds = 500;  // the doubled map has smaller Newton basins
    auto even = regular_value_degree_s4(equivariant_even_map(2), wide);
    CHECK(even.degree == 4);
    CHECK(even.preimages.size() == 4);
    auto collapse = regular_value_degree_t4(
        [](const double kappa[4], double k[5]) { collapse_map(kappa, k); }, opts);
    CHECK(collapse.degree == 1);
    CHECK(collapse.preimages.size() == 1);
    // the single preimage of (0,1,0,0,0) is kappa = (pi/2, 0, 0, 0)
    CHECK(collapse.preimages[0][0] == doctest::Approx(kPi / 2).epsilon(1e-8));
    for (int a = 1; a < 4; ++a) CHECK(std::abs(collapse.preimages[0][a]) < 1e-8);
}

TEST_CASE("regular value: proper quadratic map with closed-form oracle") {
    auto f_map = [](const double x[4], double y[4]) {
        y[0] = x[0] + x[1];
        y[1] = x[0] * x[1] - x[2] * x[3];
        y[2] = x[2] + x[3];
        y[3] = x[0] * x[3] + x[1] * x[2];
    };
    RegularValueOptions opts;
    opts.seeds = 150;
    opts.target = {0.7, -0.4, 1.2, 0.9};
    auto result = regular_value_degree_r4(f_map, nullptr, opts);
    CHECK(result.degree == 2);
    REQUIRE(result.preimages.size() == 2);
    for (int s : result.signs) CHECK(s == 1);  // orientation preserving

    // quadratic-formula preimages: z^2 - alpha z + beta = 0
    const std::complex<double> alpha(opts.target[0], opts.target[2]);
    const std::complex<double> beta(opts.target[1], opts.target[3]);
    const std::complex<double> disc = std::sqrt(alpha * alpha - 4.0 * beta);
    for (const auto& pre : result.preimages) {
        const std::complex<double> z(pre[0], pre[2]);
        double best = 1e300;
        for (double sign : {1.0, -1.0})
            best = std::min(best, std::abs(z - 0.5 * (alpha + sign * disc)));
        CHECK(best < 1e-8);
    }
}

TEST_CASE("regularity screen rejects a critical target") {
    // the quadratic map's critical values have alpha^2 = 4 beta
    auto f_map = [](const double x[4], double y[4]) {
        y[0] = x[0] + x[1];
        y[1] = x[0] * x[1] - x[2] * x[3];
        y[2] = x[2] + x[3];
        y[3] = x[0] * x[3] + x[1] * x[2];
    };
    RegularValueOptions opts;
    opts.seeds = 40;
    opts.target = {2.0, 1.0, 0.0, 0.0};  // alpha = 2, beta = 1: double root
    CHECK_THROWS(regular_value_degree_r4(f_map, nullptr, opts));
}

TEST_CASE("volume degree on small grids") {
    Grid grid = Grid::truncated_chart(4, 8.0, 49);
    auto id = volume_degree_s4(identity_sphere_map(), grid, {2});
    CHECK(id.nearest_integer == 1);
    SphereMap constant = equivariant_even_map(0);
    CHECK(std::abs(volume_degree_s4(constant, grid, {2}).value) < 1e-14);
}

TEST_CASE("degree methods agree on the builtin maps") {
    RegularValueOptions opts;
    opts.seeds = 150;
    Grid s3 = Grid::s3_angles(32, 32, 32);
    for (int n : {1, 2, 3}) {
        long newton = regular_value_degree_s3(su2_power_map(n), opts).degree;
        long cartan = cartan_degree(su2_power_map(n), s3).nearest_integer;
        CHECK(newton == n);
        CHECK(cartan == n);
    }
    Grid chart = Grid::truncated_chart(4, 6.0, 49);
    long vol = volume_degree_s4(ansatz_sphere_map(+1), chart, {2}).nearest_integer;
    long newton = regular_value_degree_s4(ansatz_sphere_map(+1), opts).degree;
    CHECK(vol == 2);
    CHECK(newton == 2);
}

TEST_CASE("orientation coherence: composing with the involutions keeps degree") {
    // tau and varpi both preserve orientation on S^4, so deg(varpi o phi o tau)
    // equals deg(phi)
    SphereMap phi = ansatz_sphere_map(+1);
    SphereMap composed;
    auto inner = phi.value;
    composed.value = [inner](const double k_in[5], double k_out[5]) {
        double tau_k[5] = {k_in[0], -k_in[1], -k_in[2], -k_in[3], -k_in[4]};
        double y[5];
        inner(tau_k, y);
        k_out[0] = y[0];
        k_out[1] = -y[1];
        k_out[2] = y[2];
        k_out[3] = -y[3];
        k_out[4] = y[4];
    };
    RegularValueOptions opts;
    opts.seeds = 150;
    CHECK(regular_value_degree_s4(composed, opts).degree == 2);
}

TEST_CASE("ai consistency verdicts") {
    CoefficientMap f = standard_ansatz();
    Grid grid = Grid::truncated_chart(4, 10.0, 49);
    auto report = ai_consistency(f, SymmetryChoice{-1}, +1, grid, {2});
    CHECK(report.applicable);
    CHECK(report.c1_vanishes);
    CHECK(report.c2.nearest_integer == 2);
    CHECK(report.c2_even);
    CHECK(report.consistent);

    // AII choice: not applicable
    auto aii = ai_consistency(f, SymmetryChoice{1}, +1, grid, {2});
    CHECK_FALSE(aii.applicable);

    // Hopf treated as a tau-Real candidate: fails the structure screen
    auto hopf = ai_consistency_chart_map(
        pullback_projector_chart(identity_sphere_map()), grid, {2});
    CHECK_FALSE(hopf.applicable);

    // constant pullback: applicable with C2 = 0
    auto constant = ai_consistency_chart_map(
        pullback_projector_chart(equivariant_even_map(0)), grid, {2});
    CHECK(constant.applicable);
    CHECK(constant.c2.nearest_integer == 0);
    CHECK(constant.consistent);
}

TEST_CASE("collapse pullback: constant model on coarse grids") {
    Grid chart = Grid::truncated_chart(4, 6.0, 17);
    Grid torus = Grid::torus(4, 12);
    auto rep = collapse_pullback_check(equivariant_even_map(0), chart, torus, {2});
    CHECK(rep.match);
    CHECK(rep.sphere_c2.nearest_integer == 0);
    CHECK(std::abs(rep.torus_c2.value) < 1e-12);
}

TEST_CASE("eager torus field variant matches the streaming map variant") {
    ProjectorMap pulled = pullback_projector_torus(ansatz_sphere_map(+1));
    Grid torus = Grid::torus(4, 12);
    auto streamed = second_chern_trace(pulled, torus, {2});
    ProjectorField field = sample_field(pulled, torus, 2, "torus-angles");
    auto eager = second_chern_trace(field, {2});
    CHECK(streamed.value == doctest::Approx(eager.value).epsilon(1e-13));
    // chart fields must be rejected (no ghost samples)
    ProjectorField chart_field = sample_field(
        pullback_projector_chart(ansatz_sphere_map(+1)),
        Grid::truncated_chart(4, 4.0, 9), 2, "stereo-chart");
    CHECK_THROWS(second_chern_trace(chart_field, {2}));
}

TEST_CASE("input validation") {
    ProjectorMap constant = [](const double*) { return Mat4::Identity().eval(); };
    CHECK_THROWS(second_chern_trace(constant, Grid::torus(4, 4), {2}));   // too coarse
    CHECK_THROWS(second_chern_trace(constant, Grid::torus(2, 16), {2}));  // not 4D
    CHECK_THROWS(first_chern(constant, Grid::torus(4, 8)));               // not 2D
    CHECK_THROWS(second_chern_closed_form(standard_ansatz(),
                                          Grid::s3_angles(8, 8, 8), +1, {2}));
    CHECK_THROWS(cartan_degree(su2_power_map(1), Grid::torus(3, 8)));
    CHECK_THROWS(volume_degree_s4(identity_sphere_map(), Grid::torus(4, 8), {2}));
}
