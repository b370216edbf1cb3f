#include "okcf/embed.hpp"

#include <cmath>

namespace okcf {

Mat4Z Mat4Z::identity() {
    Mat4Z r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r.at(i, j) = (i == j) ? 1 : 0;
    return r;
}

Mat4Z Mat4Z::operator*(const Mat4Z& o) const {
    Mat4Z r;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            mpz_class s = 0;
            for (int k = 0; k < 4; ++k) s += at(i, k) * o.at(k, j);
            r.at(i, j) = s;
        }
    return r;
}

namespace {

mpz_class det3(const mpz_class& a, const mpz_class& b, const mpz_class& c,
               const mpz_class& d, const mpz_class& e, const mpz_class& f,
               const mpz_class& g, const mpz_class& h, const mpz_class& i) {
    return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
}

} // namespace

mpz_class Mat4Z::det() const {
    mpz_class s = 0;
    for (int j = 0; j < 4; ++j) {
        // minor of (0, j)
        mpz_class mn[9];
        int idx = 0;
        for (int r = 1; r < 4; ++r)
            for (int c = 0; c < 4; ++c)
                if (c != j) mn[idx++] = at(r, c);
        mpz_class mdet = det3(mn[0], mn[1], mn[2], mn[3], mn[4], mn[5],
                              mn[6], mn[7], mn[8]);
        if (j % 2 == 0)
            s += at(0, j) * mdet;
        else
            s -= at(0, j) * mdet;
    }
    return s;
}

mpz_class Mat4Z::height() const {
    mpz_class h = 0;
    for (const mpz_class& e : m) {
        mpz_class a = abs(e);
        if (a > h) h = a;
    }
    return h;
}

std::array<mpz_class, 4> embed_scalar(const OKInt& x) {
    if (x.d() != 1)
        throw unsupported_ring_error(
            "embed_scalar: defined for Gaussian integers only");
    return {x.a(), -x.b(), x.b(), x.a()};
}

Mat4Z embed_matrix(const Mat2& g) {
    const OKInt* entries[4] = {&g.v1(), &g.u1(), &g.v2(), &g.u2()};
    Mat4Z r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            auto blk = embed_scalar(*entries[2 * i + j]);
            r.at(2 * i, 2 * j) = blk[0];
            r.at(2 * i, 2 * j + 1) = blk[1];
            r.at(2 * i + 1, 2 * j) = blk[2];
            r.at(2 * i + 1, 2 * j + 1) = blk[3];
        }
    if (r.det() != 1) throw error("embed_matrix: determinant is not 1");
    return r;
}

std::array<PReal, 4> vec_c2_to_r4(const Vec2& z) {
    return {z.x1.re(), z.x1.im(), z.x2.re(), z.x2.im()};
}

bool compatibility_check(const Mat2& g, const Vec2& z) {
    mpfr_prec_t prec = z.x1.prec();
    Mat4Z M = embed_matrix(g);
    auto v = vec_c2_to_r4(z);
    auto w = vec_c2_to_r4(g.apply(z, prec));
    for (int i = 0; i < 4; ++i) {
        PReal s(prec);
        for (int j = 0; j < 4; ++j)
            s = s + PReal::from_mpz(M.at(i, j), prec) * v[(size_t)j];
        if (!(s - w[(size_t)i]).contains_zero()) return false;
    }
    return true;
}

bool height_ratio_certified(const Mat2& g) {
    mpz_class h2 = embed_matrix(g).height();
    mpz_class n1 = g.height_norm_sq();
    mpz_class h2sq = h2 * h2;
    return h2sq <= n1 && n1 <= 2 * h2sq;
}

OrbitRecord to_record_r4(const GammaResult& r, const Vec2& z, const Vec2& y) {
    OrbitRecord rec = to_record(r, 1);
    rec.cls += "_r4";
    mpz_class h = embed_matrix(r.gamma).height();
    mpfr_t t;
    mpfr_init2(t, 64);
    mpfr_set_z(t, h.get_mpz_t(), MPFR_RNDN);
    mpfr_log(t, t, MPFR_RNDN);
    rec.log_height = mpfr_get_d(t, MPFR_RNDN);
    mpfr_clear(t);
    rec.height = std::exp(rec.log_height);
    // sup norm over the four real coordinates of gamma z - y
    mpfr_prec_t prec = z.x1.prec();
    Vec2 gz = r.gamma.apply(z, prec);
    PComplex d1 = gz.x1 - y.x1, d2 = gz.x2 - y.x2;
    PReal e = ball_max(ball_max(d1.re().abs(), d1.im().abs()),
                       ball_max(d2.re().abs(), d2.im().abs()));
    rec.err = e.mid_d();
    rec.log_err = std::log(rec.err);
    return rec;
}

} // namespace okcf
