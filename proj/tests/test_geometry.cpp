#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "realbloch/geometry.hpp"

using namespace rb;

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<double> random_kappa(std::mt19937_64& rng, int d, double scale) {
    std::uniform_real_distribution<double> dist(-scale, scale);
    std::vector<double> out(d);
    for (double& x : out) x = dist(rng);
    return out;
}
}  // namespace

TEST_CASE("stereographic chart basics") {
    std::vector<double> zero(4, 0.0);
    auto p = stereo_to_sphere(zero);
    CHECK(p.k[0] == doctest::Approx(-1.0).epsilon(1e-15));
    for (int j = 1; j <= 4; ++j) CHECK(p.k[j] == 0.0);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 1000; ++trial) {
        auto kappa = random_kappa(rng, 4, 1000.0);
        auto k = stereo_to_sphere(kappa);
        double n2 = 0;
        for (double c : k.k) n2 += c * c;
        CHECK(std::abs(std::sqrt(n2) - 1.0) < 1e-12);
        auto back = sphere_to_stereo(k);
        for (int j = 0; j < 4; ++j)
            CHECK(back[j] == doctest::Approx(kappa[j]).epsilon(1e-12));
    }
}

TEST_CASE("chart and involution commute") {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 500; ++trial) {
        auto kappa = random_kappa(rng, 4, 50.0);
        auto neg = kappa;
        for (double& x : neg) x = -x;
        auto lhs = stereo_to_sphere(neg);
        auto rhs = apply_involution(InvolutionKind::TauSphere, stereo_to_sphere(kappa).k);
        for (int j = 0; j < 5; ++j) CHECK(std::abs(lhs.k[j] - rhs[j]) < 1e-14);
    }
}

TEST_CASE("involutions are involutive and have the right fixed sets") {
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> k(5);
        double n2 = 0;
        for (double& c : k) {
            c = gauss(rng);
            n2 += c * c;
        }
        for (double& c : k) c /= std::sqrt(n2);
        for (auto kind : {InvolutionKind::TauSphere, InvolutionKind::VarpiS4,
                          InvolutionKind::Antipodal}) {
            auto twice = apply_involution(kind, apply_involution(kind, k));
            for (int j = 0; j < 5; ++j) CHECK(std::abs(twice[j] - k[j]) < 1e-15);
        }
        // tau fixes only (+-1, 0, .., 0)
        auto img = apply_involution(InvolutionKind::TauSphere, k);
        double dist = 0;
        for (int j = 0; j < 5; ++j) dist += (img[j] - k[j]) * (img[j] - k[j]);
        double tail = 0;
        for (int j = 1; j < 5; ++j) tail += k[j] * k[j];
        if (dist < 1e-24) CHECK(tail < 1e-12);
    }
    CHECK_THROWS(apply_involution(InvolutionKind::VarpiS4, std::vector<double>(4, 0.5)));
}

TEST_CASE("fixed points of the torus involution on an aligned grid") {
    for (int d = 1; d <= 3; ++d) {
        Grid grid = Grid::torus(d, 8);
        std::array<bool, 8> flips{};
        for (int a = 0; a < d; ++a) flips[a] = true;
        long fixed = 0;
        std::vector<int> idx(d);
        for (std::int64_t i = 0; i < grid.total_points(); ++i) {
            grid.indices(i, idx);
            if (grid.involution_partner(idx, flips) == i) ++fixed;
        }
        CHECK(fixed == (1L << d));
    }
}

TEST_CASE("collapse map") {
    double k[5];
    double origin[4] = {0, 0, 0, 0};
    collapse_map(origin, k);
    CHECK(k[0] == doctest::Approx(-1.0));
    for (int j = 1; j < 5; ++j) CHECK(k[j] == 0.0);

    // the four sub-tori with one coordinate pinned at pi land on the pole
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> dist(-kPi, kPi);
    for (int pin = 0; pin < 4; ++pin)
        for (int trial = 0; trial < 100; ++trial) {
            double kappa[4];
            for (double& x : kappa) x = dist(rng);
            kappa[pin] = (trial % 2 == 0) ? kPi : -kPi;
            collapse_map(kappa, k);
            CHECK(k[0] == doctest::Approx(1.0).epsilon(1e-12));
            for (int j = 1; j < 5; ++j) CHECK(std::abs(k[j]) < 1e-12);
        }

    // equivariance
    for (int trial = 0; trial < 500; ++trial) {
        double kappa[4], neg[4], ka[5], kb[5];
        for (int a = 0; a < 4; ++a) {
            kappa[a] = dist(rng);
            neg[a] = -kappa[a];
        }
        collapse_map(kappa, ka);
        collapse_map(neg, kb);
        auto tau = apply_involution(InvolutionKind::TauSphere,
                                    std::vector<double>(ka, ka + 5));
        for (int j = 0; j < 5; ++j) CHECK(std::abs(kb[j] - tau[j]) < 1e-14);
    }
}

TEST_CASE("grid volumes") {
    CHECK(Grid::torus(1, 8).volume() == doctest::Approx(2 * kPi).epsilon(1e-14));
    CHECK(Grid::torus(4, 12).volume() ==
          doctest::Approx(std::pow(2 * kPi, 4)).epsilon(1e-13));
    CHECK(Grid::truncated_chart(4, 8.0, 64).volume() ==
          doctest::Approx(std::pow(16.0, 4)).epsilon(1e-13));
    const double vol_s3 = 2 * kPi * kPi;
    CHECK(Grid::s3_angles(32, 32, 32).volume() ==
          doctest::Approx(vol_s3).epsilon(1e-6));
    // refinement must not move the sum
    double v1 = Grid::torus(2, 16).volume();
    double v2 = Grid::torus(2, 32).volume();
    CHECK(std::abs(v1 - v2) < 1e-12 * std::abs(v1));
    double c1 = Grid::truncated_chart(2, 5.0, 21).volume();
    double c2 = Grid::truncated_chart(2, 5.0, 41).volume();
    CHECK(std::abs(c1 - c2) < 1e-12 * std::abs(c1));
}

TEST_CASE("gauss-legendre sanity") {
    std::vector<double> x, w;
    gauss_legendre(16, 0.0, 1.0, x, w);
    double integral = 0;
    for (int i = 0; i < 16; ++i) integral += w[i] * x[i] * x[i];
    CHECK(integral == doctest::Approx(1.0 / 3.0).epsilon(1e-14));
    double s = 0;
    for (int i = 0; i < 16; ++i) s += w[i] * std::sin(kPi * x[i]);
    CHECK(s == doctest::Approx(2.0 / kPi).epsilon(1e-14));
}

TEST_CASE("offset torus grids are closed under plain negation") {
    Grid grid = Grid::torus(4, 17, /*offset=*/true);
    std::array<bool, 4> flips = {true, true, true, true};
    std::vector<int> idx(4);
    double p[4], q[4];
    for (std::int64_t i = 0; i < grid.total_points(); i += 997) {
        grid.indices(i, idx);
        std::int64_t partner = grid.involution_partner(idx, flips);
        grid.point(i, p);
        grid.point(partner, q);
        for (int a = 0; a < 4; ++a) CHECK(q[a] == doctest::Approx(-p[a]).epsilon(1e-15));
    }
}

TEST_CASE("chart grids are closed under per-axis sign flips") {
    Grid grid = Grid::truncated_chart(4, 6.0, 15);
    std::array<bool, 4> flips = {true, false, true, false};
    std::vector<int> idx(4);
    double p[4], q[4];
    for (std::int64_t i = 0; i < grid.total_points(); i += 101) {
        grid.indices(i, idx);
        std::int64_t partner = grid.involution_partner(idx, flips);
        grid.point(i, p);
        grid.point(partner, q);
        CHECK(q[0] == doctest::Approx(-p[0]));
        CHECK(q[1] == doctest::Approx(p[1]));
        CHECK(q[2] == doctest::Approx(-p[2]));
        CHECK(q[3] == doctest::Approx(p[3]));
    }
}

TEST_CASE("grid construction validates its spec") {
    CHECK_THROWS(Grid::torus(0, 8));
    CHECK_THROWS(Grid::torus(2, 3));
    CHECK_THROWS(Grid::truncated_chart(4, -1.0, 16));
    CHECK_THROWS(Grid::truncated_chart(4, 2.0, 2));
    CHECK_THROWS(Grid::s3_angles(2, 8, 8));
}

TEST_CASE("point types validate") {
    CHECK_THROWS(SpherePoint({1.0, 0.5}));
    CHECK_NOTHROW(SpherePoint({1.0, 0.0, 0.0}));
    CHECK_THROWS(TorusPoint({kPi}));  // pi itself wraps to -pi
    CHECK_NOTHROW(TorusPoint({-kPi, 0.0}));
    CHECK(wrap_angle(kPi) == doctest::Approx(-kPi));
    CHECK(wrap_angle(3 * kPi) == doctest::Approx(-kPi));
    CHECK(wrap_angle(0.5) == doctest::Approx(0.5));
}
