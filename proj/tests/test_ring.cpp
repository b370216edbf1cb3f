#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "okcf/ring.hpp"

using namespace okcf;

namespace {

OKInt rand_elt(std::mt19937_64& rng, const RingSpec& ring, long span = 1000) {
    std::uniform_int_distribution<long> d(-span, span);
    return OKInt(d(rng), d(rng), ring);
}

} // namespace

TEST_CASE("ring parameters") {
    for (int d : RingSpec::supported()) {
        const RingSpec& r = RingSpec::get(d);
        CHECK(r.d == d);
        CHECK(r.cover_sq <= 1);
        CHECK(r.theta > QuadVal(1));
        CHECK(r.r0 >= 1);
    }
    CHECK_THROWS_AS(RingSpec::get(5), unsupported_ring_error);
    CHECK_THROWS_AS(RingSpec::get(2), unsupported_ring_error);

    // d=1: theta = (sqrt5+1)/2; d=3: theta = 4/3
    const RingSpec& g = RingSpec::get(1);
    CHECK(g.theta_sq == QuadVal(mpq_class(3, 2), mpq_class(1, 2), 5));
    CHECK(RingSpec::get(3).theta == QuadVal(mpq_class(4, 3)));
}

TEST_CASE("norm forms") {
    const RingSpec& g = RingSpec::get(1);
    CHECK(OKInt(0, 0, g).norm() == 0);
    CHECK(OKInt(3, 0, g).norm() == 9);
    CHECK(OKInt(1, 1, g).norm() == 2); // |1+i|^2

    CHECK(OKInt(1, 1, RingSpec::get(3)).norm() == 1);  // 1 - 1 + 1
    CHECK(OKInt(1, 1, RingSpec::get(7)).norm() == 4);  // 1 + 1 + 2
    CHECK(OKInt(1, 1, RingSpec::get(11)).norm() == 5); // 1 + 1 + 3
    CHECK(OKInt(3, 0, RingSpec::get(7)).norm() == 9);
}

TEST_CASE("units solve the norm form") {
    for (int d : RingSpec::supported()) {
        const RingSpec& ring = RingSpec::get(d);
        // oracle: enumerate the square |a|,|b| <= 2 for norm-1 solutions
        std::vector<std::pair<long, long>> oracle;
        for (long a = -2; a <= 2; ++a)
            for (long b = -2; b <= 2; ++b)
                if (OKInt(a, b, ring).norm() == 1) oracle.emplace_back(a, b);
        auto us = units(ring);
        CHECK(us.size() == oracle.size());
        for (auto [a, b] : oracle) {
            CHECK(std::any_of(us.begin(), us.end(), [&](const OKInt& u) {
                return u.a() == a && u.b() == b;
            }));
        }
    }
    CHECK(units(RingSpec::get(1)).size() == 4);
    CHECK(units(RingSpec::get(3)).size() == 6);
    CHECK(units(RingSpec::get(7)).size() == 2);
    CHECK(units(RingSpec::get(11)).size() == 2);
}

TEST_CASE("ring axioms on random triples") {
    std::mt19937_64 rng(20260810);
    for (int d : RingSpec::supported()) {
        const RingSpec& ring = RingSpec::get(d);
        for (int it = 0; it < 200; ++it) {
            OKInt x = rand_elt(rng, ring), y = rand_elt(rng, ring),
                  z = rand_elt(rng, ring);
            CHECK((x * y) * z == x * (y * z));
            CHECK(x * (y + z) == x * y + x * z);
            CHECK(x * y == y * x);
            CHECK(x.norm() == (x * x.conj()).a());
            CHECK((x * x.conj()).b() == 0);
            CHECK((x * y).norm() == x.norm() * y.norm());
        }
    }
}

TEST_CASE("nonzero elements have norm >= 1") {
    std::mt19937_64 rng(7);
    for (int d : RingSpec::supported()) {
        const RingSpec& ring = RingSpec::get(d);
        for (int it = 0; it < 100; ++it) {
            OKInt x = rand_elt(rng, ring, 20);
            if (!x.is_zero()) CHECK(x.norm() >= 1);
        }
    }
}

TEST_CASE("divide_round remainder beats the covering radius") {
    std::mt19937_64 rng(42);
    for (int d : RingSpec::supported()) {
        const RingSpec& ring = RingSpec::get(d);
        for (int it = 0; it < 300; ++it) {
            OKInt u = rand_elt(rng, ring), v = rand_elt(rng, ring, 60);
            if (v.is_zero()) continue;
            OKInt t = divide_round(u, v);
            OKInt rem = u - t * v;
            // norm(rem) <= cover_sq * norm(v), exact rational comparison
            mpq_class lhs(rem.norm());
            mpq_class rhs = ring.cover_sq * mpq_class(v.norm());
            CHECK(lhs <= rhs);
            CHECK(rem.norm() < v.norm());
        }
    }
}

TEST_CASE("exact division") {
    const RingSpec& g = RingSpec::get(1);
    OKInt x(3, 5, g), y(1, 2, g);
    OKInt pr = x * y;
    CHECK(exact_div(pr, y) == x);
    CHECK(divides(y, pr));
    CHECK(!divides(OKInt(2, 0, g), OKInt(1, 0, g)));
    CHECK_THROWS_AS(exact_div(OKInt(1, 0, g), OKInt(2, 0, g)), error);
}

TEST_CASE("extended gcd: spec cases") {
    const RingSpec& g = RingSpec::get(1);

    // (a, 0) -> (a, 1, 0)
    OKInt a(7, -3, g);
    auto r = extended_gcd(a, OKInt::zero(g));
    CHECK(r.g == a);
    CHECK(r.x == OKInt::one(g));
    CHECK(r.y == OKInt::zero(g));

    // 5 = (1+2i)(1-2i): gcd(5, 1+2i) has norm 5
    OKInt five(5, 0, g), w(1, 2, g);
    auto e = extended_gcd(five, w);
    CHECK(e.g.norm() == 5);
    CHECK(divides(e.g, five));
    CHECK(divides(e.g, w));
    CHECK(five * e.x + w * e.y == e.g);
}

TEST_CASE("extended gcd: Bezout identity on random pairs") {
    std::mt19937_64 rng(99);
    for (int d : RingSpec::supported()) {
        const RingSpec& ring = RingSpec::get(d);
        for (int it = 0; it < 150; ++it) {
            OKInt a = rand_elt(rng, ring, 500), b = rand_elt(rng, ring, 500);
            if (a.is_zero() && b.is_zero()) continue;
            auto e = extended_gcd(a, b);
            CHECK(a * e.x + b * e.y == e.g);
            CHECK(divides(e.g, a));
            CHECK(divides(e.g, b));
            mpz_class gn = e.g.norm();
            CHECK(mpz_divisible_p(a.norm().get_mpz_t(), gn.get_mpz_t()));
            CHECK(mpz_divisible_p(b.norm().get_mpz_t(), gn.get_mpz_t()));
        }
    }
}

TEST_CASE("QuadVal arithmetic and ordering") {
    QuadVal phi(mpq_class(1, 2), mpq_class(1, 2), 5); // golden ratio
    CHECK(phi * phi == phi + QuadVal(1));
    CHECK(phi > QuadVal(mpq_class(8, 5)));
    CHECK(phi < QuadVal(mpq_class(13, 8)));
    QuadVal inv = QuadVal(1) / phi;
    CHECK(inv == phi - QuadVal(1));
    CHECK((phi.pow(6)).compare(QuadVal(9, 4, 5)) == 0); // phi^6 = 9 + 4sqrt5 ... check
    CHECK(phi.to_double() == doctest::Approx(1.6180339887));
}
