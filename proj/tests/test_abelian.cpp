#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "realbloch/abelian.hpp"

using rb::AbelianGroup;

TEST_CASE("direct sum merges ranks and torsion") {
    CHECK(AbelianGroup::Z() + AbelianGroup::Z2() ==
          AbelianGroup(1, {2}));
    CHECK(AbelianGroup::zero() + AbelianGroup(3, {2}) == AbelianGroup(3, {2}));
    // H^1 + H^3 of the TR-circle with twisted coefficients
    AbelianGroup h1(1, {2});
    AbelianGroup h3(0, {2, 2});
    CHECK(h1 + h3 == AbelianGroup(1, {2, 2, 2}));
}

TEST_CASE("power") {
    CHECK(AbelianGroup::Z2().power(15) == AbelianGroup(0, std::vector<long>(15, 2)));
    CHECK(AbelianGroup(5, {2, 4}).power(0) == AbelianGroup::zero());
    CHECK((AbelianGroup::Z() + AbelianGroup::Z2()).power(2) ==
          AbelianGroup(2, {2, 2}));
}

TEST_CASE("isomorphism is normal-form equality") {
    CHECK(AbelianGroup(0, {2, 2}) == AbelianGroup::Z2() + AbelianGroup::Z2());
    CHECK_FALSE(AbelianGroup::Z().is_isomorphic(AbelianGroup::Z2()));
    CHECK(AbelianGroup(1, {2, 2}) == AbelianGroup(1, {2, 2}));
}

TEST_CASE("render canonical strings") {
    CHECK(AbelianGroup::zero().render() == "0");
    CHECK(AbelianGroup(1, {2, 2}).render() == "Z+Z2^2");
    CHECK(AbelianGroup(3, {2, 2, 2, 2, 2}).render() == "Z^3+Z2^5");
    CHECK(AbelianGroup(1, std::vector<long>(10, 2)).render() == "Z+Z2^10");
    CHECK(AbelianGroup(0, {2, 4, 4}).render() == "Z2+Z4^2");
}

TEST_CASE("parse round trip") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<long> rank(0, 5), count(0, 4), order(2, 9);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<long> torsion;
        long nt = count(rng);
        for (long i = 0; i < nt; ++i) torsion.push_back(order(rng));
        AbelianGroup g(rank(rng), torsion);
        CAPTURE(g.render());
        CHECK(AbelianGroup::parse(g.render()) == g);
    }
}

TEST_CASE("parse rejects malformed input") {
    CHECK_THROWS(AbelianGroup::parse(""));
    CHECK_THROWS(AbelianGroup::parse("Z+"));
    CHECK_THROWS(AbelianGroup::parse("Q"));
    CHECK_THROWS(AbelianGroup::parse("Z1"));
    CHECK_THROWS(AbelianGroup::parse("Z2^0"));
}

TEST_CASE("direct sum is commutative and associative; power splits") {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<long> rank(0, 4), count(0, 3), order(2, 6),
        exp(0, 4);
    auto random_group = [&] {
        std::vector<long> t;
        long nt = count(rng);
        for (long i = 0; i < nt; ++i) t.push_back(order(rng));
        return AbelianGroup(rank(rng), t);
    };
    for (int trial = 0; trial < 300; ++trial) {
        AbelianGroup a = random_group(), b = random_group(), c = random_group();
        CHECK(a + b == b + a);
        CHECK((a + b) + c == a + (b + c));
        long m = exp(rng), n = exp(rng);
        CHECK(a.power(m + n) == a.power(m) + a.power(n));
    }
}

TEST_CASE("invalid construction") {
    CHECK_THROWS(AbelianGroup(-1, {}));
    CHECK_THROWS(AbelianGroup(0, {1}));
    CHECK_THROWS(AbelianGroup(0, {0}));
}
