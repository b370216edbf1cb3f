#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "okcf/embed.hpp"

using namespace okcf;

namespace {

// random product of the generators U^1, U^i, J (and inverses)
Mat2 random_word(std::mt19937_64& rng, int len) {
    const RingSpec& g = RingSpec::get(1);
    Mat2 m = Mat2::identity(g);
    for (int i = 0; i < len; ++i) {
        switch (rng() % 5) {
        case 0: m = m * Mat2::U(OKInt(1, 0, g)); break;
        case 1: m = m * Mat2::U(OKInt(0, 1, g)); break;
        case 2: m = m * Mat2::J(g); break;
        case 3: m = m * Mat2::U(OKInt(-1, 0, g)); break;
        default: m = m * Mat2::U(OKInt(0, -1, g)); break;
        }
    }
    return m;
}

} // namespace

TEST_CASE("embedded scalars multiply like Gaussian integers") {
    const RingSpec& g = RingSpec::get(1);
    auto one = embed_scalar(OKInt(1, 0, g));
    CHECK(one == std::array<mpz_class, 4>{1, 0, 0, 1});

    // i * i = -1: block(i)^2 = -I
    auto bi = embed_scalar(OKInt(0, 1, g));
    mpz_class a = bi[0] * bi[0] + bi[1] * bi[2];
    mpz_class b = bi[0] * bi[1] + bi[1] * bi[3];
    mpz_class c = bi[2] * bi[0] + bi[3] * bi[2];
    mpz_class d = bi[2] * bi[1] + bi[3] * bi[3];
    CHECK(a == -1);
    CHECK(b == 0);
    CHECK(c == 0);
    CHECK(d == -1);

    std::mt19937_64 rng(5);
    std::uniform_int_distribution<long> dist(-30, 30);
    for (int it = 0; it < 100; ++it) {
        OKInt x(dist(rng), dist(rng), g), y(dist(rng), dist(rng), g);
        auto bx = embed_scalar(x), by = embed_scalar(y), bz =
            embed_scalar(x * y);
        // 2x2 block product
        std::array<mpz_class, 4> pr = {
            bx[0] * by[0] + bx[1] * by[2], bx[0] * by[1] + bx[1] * by[3],
            bx[2] * by[0] + bx[3] * by[2], bx[2] * by[1] + bx[3] * by[3]};
        CHECK(pr == bz);
    }
    CHECK_THROWS_AS(embed_scalar(OKInt(1, 0, RingSpec::get(3))),
                    unsupported_ring_error);
}

TEST_CASE("embed_matrix: identity, J, homomorphism, det") {
    const RingSpec& g = RingSpec::get(1);
    CHECK(embed_matrix(Mat2::identity(g)) == Mat4Z::identity());

    Mat4Z j4 = embed_matrix(Mat2::J(g));
    CHECK(j4.det() == 1);

    std::mt19937_64 rng(17);
    for (int it = 0; it < 200; ++it) {
        Mat2 x = random_word(rng, 6), y = random_word(rng, 6);
        Mat4Z hx = embed_matrix(x), hy = embed_matrix(y);
        CHECK(hx * hy == embed_matrix(x * y));
        CHECK(hx.det() == 1);
        CHECK(height_ratio_certified(x));
    }
}

TEST_CASE("action compatibility on C^2 = R^4") {
    const RingSpec& g = RingSpec::get(1);
    mpfr_prec_t prec = 192;
    CHECK(compatibility_check(Mat2::identity(g),
                              {PComplex::from_long(1, prec),
                               PComplex::from_long(0, prec)}));

    // g = J, z = (1, i)
    Vec2 z{PComplex::from_long(1, prec),
           PComplex(PReal(prec), PReal::from_long(1, prec))};
    CHECK(compatibility_check(Mat2::J(g), z));

    std::mt19937_64 rng(29);
    std::uniform_real_distribution<double> ud(-3, 3);
    for (int it = 0; it < 300; ++it) {
        Mat2 m = random_word(rng, 8);
        Vec2 w{PComplex(PReal::from_double(ud(rng), prec),
                        PReal::from_double(ud(rng), prec)),
               PComplex(PReal::from_double(ud(rng), prec),
                        PReal::from_double(ud(rng), prec))};
        CHECK(compatibility_check(m, w));
    }
}

TEST_CASE("R^4 exponents dominate the C^2 ones on M_k streams") {
    const RingSpec& g = RingSpec::get(1);
    auto e = expand(ComplexSpec::parse("sqrt(2)"), g, {.max_terms = 35});
    Vec2 z{e.value(), PComplex::from_long(1, e.prec())};
    Vec2 zero{PComplex(e.prec()), PComplex(e.prec())};
    std::vector<OrbitRecord> rc2, rr4;
    for (int k = 1; k < e.size(); ++k) {
        auto r = gamma_origin(e, k, z);
        rc2.push_back(to_record(r, 1));
        rr4.push_back(to_record_r4(r, z, zero));
    }
    auto m2 = estimate_mu(rc2);
    auto m4 = estimate_mu(rr4);
    CHECK(m4.mu_fit >= m2.mu_fit - 0.05);
    CHECK(m4.mu_emp >= m2.mu_emp - 0.05);
}
