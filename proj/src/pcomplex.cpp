#include "okcf/pcomplex.hpp"

#include <algorithm>
#include <cmath>

namespace okcf {

PReal PComplex::err_radius() const {
    PReal rr = PReal::from_double(re_.rad_d(), 64);
    PReal ri = PReal::from_double(im_.rad_d(), 64);
    return (rr * rr + ri * ri).sqrt();
}

PComplex omega_value(const RingSpec& ring, mpfr_prec_t prec) {
    // omega = trace/2 + i*sqrt(disc)/2
    PReal re = PReal::from_long(ring.omega_trace, prec) / 2;
    PReal im = PReal::sqrt_mpz(mpz_class(ring.disc), prec) / 2;
    return {std::move(re), std::move(im)};
}

PComplex to_complex(const OKInt& x, mpfr_prec_t prec) {
    const RingSpec& ring = x.ring();
    PReal b = PReal::from_mpz(x.b(), prec);
    PReal re = PReal::from_mpz(x.a(), prec) +
               b * PReal::from_long(ring.omega_trace, prec) / 2;
    PReal im = b * PReal::sqrt_mpz(mpz_class(ring.disc), prec) / 2;
    return {std::move(re), std::move(im)};
}

namespace {

// Floor of a PReal midpoint as mpz; requires the radius to be < 1 so the
// window enumeration around it stays valid.
mpz_class approx_floor(const PReal& x) {
    mpz_class f;
    mpfr_t t;
    mpfr_init2(t, mpfr_get_prec(x.mid_raw()));
    mpfr_floor(t, x.mid_raw());
    mpfr_get_z(f.get_mpz_t(), t, MPFR_RNDN);
    mpfr_clear(t);
    return f;
}

} // namespace

OKInt nearest_integer(const PComplex& z, const RingSpec& ring) {
    mpfr_prec_t prec = z.prec();
    // Basis coordinates: z = A*1 + B*omega with B = Im(z)/Im(omega) and
    // A = Re(z) - trace*B/2.
    PReal imw = PReal::sqrt_mpz(mpz_class(ring.disc), prec) / 2;
    PReal B = z.im() / imw;
    PReal A = z.re() - B * PReal::from_long(ring.omega_trace, prec) / 2;
    if (A.rad_d() >= 0.5 || B.rad_d() >= 0.5)
        throw precision_error("nearest_integer: input interval too wide");

    mpz_class af = approx_floor(A), bf = approx_floor(B);
    struct Cand {
        OKInt t;
        PReal dist_sq;
    };
    std::vector<Cand> cands;
    for (long db = -1; db <= 2; ++db) {
        for (long da = -1; da <= 2; ++da) {
            OKInt t(af + da, bf + db, ring);
            PComplex diff = z - to_complex(t, prec);
            cands.push_back({t, diff.abs_sq()});
        }
    }
    // Pass 1: smallest upper bound, lex-smallest among equal uppers. For
    // exact ties this implements the documented tie-break directly.
    size_t best = 0;
    for (size_t i = 1; i < cands.size(); ++i) {
        mpfr_prec_t p = std::max(cands[i].dist_sq.prec(),
                                 cands[best].dist_sq.prec());
        mpfr_t ui, ub;
        mpfr_init2(ui, p);
        mpfr_init2(ub, p);
        cands[i].dist_sq.upper(ui);
        cands[best].dist_sq.upper(ub);
        int c = mpfr_cmp(ui, ub);
        mpfr_clear(ui);
        mpfr_clear(ub);
        if (c < 0 || (c == 0 && cands[i].t.lex_less(cands[best].t))) best = i;
    }
    // Pass 2: the winner must be a certified minimizer against every other
    // candidate (exact equality counts as certified <=).
    for (size_t i = 0; i < cands.size(); ++i) {
        if (i == best) continue;
        if (!cands[best].dist_sq.le_certified(cands[i].dist_sq))
            throw precision_error(
                "nearest_integer: Voronoi tie not certifiable at this "
                "precision");
    }
    return cands[best].t;
}

std::vector<OKInt> lattice_points_near(const PComplex& z, const RingSpec& ring,
                                       const mpq_class& radius_sq) {
    mpfr_prec_t prec = z.prec();
    PReal imw = PReal::sqrt_mpz(mpz_class(ring.disc), prec) / 2;
    PReal B = z.im() / imw;
    PReal A = z.re() - B * PReal::from_long(ring.omega_trace, prec) / 2;
    if (A.rad_d() >= 0.5 || B.rad_d() >= 0.5)
        throw precision_error("lattice_points_near: input interval too wide");
    double rr = std::sqrt(mpq_class(radius_sq).get_d());
    // |B - tb| <= r / Im(omega); given tb, |A + trace*(B - tb)/2 - ta| <= r.
    double imw_d = imw.mid_d();
    long bspan = (long)std::ceil(rr / imw_d) + 1;
    long aspan = (long)std::ceil(rr) + 1;
    mpz_class bf = approx_floor(B);
    PReal rsq = PReal::from_mpq(radius_sq, prec);

    std::vector<OKInt> out;
    for (long db = -bspan; db <= bspan + 1; ++db) {
        mpz_class tb = bf + db;
        PReal Bdev = B - PReal::from_mpz(tb, prec);
        PReal Ac = A + Bdev * PReal::from_long(ring.omega_trace, prec) / 2;
        mpz_class af = approx_floor(Ac);
        for (long da = -aspan; da <= aspan + 1; ++da) {
            OKInt t(af + da, tb, ring);
            PComplex diff = z - to_complex(t, prec);
            PReal dsq = diff.abs_sq();
            // keep unless certified outside
            if (!rsq.lt_certified(dsq)) out.push_back(t);
        }
    }
    return out;
}

} // namespace okcf
