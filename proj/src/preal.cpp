#include "okcf/preal.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

namespace okcf {

namespace {

// Temporary with automatic cleanup.
struct Tmp {
    mpfr_t v;
    explicit Tmp(mpfr_prec_t p) { mpfr_init2(v, p); }
    ~Tmp() { mpfr_clear(v); }
    Tmp(const Tmp&) = delete;
    Tmp& operator=(const Tmp&) = delete;
};

} // namespace

PReal::PReal(mpfr_prec_t prec) {
    mpfr_init2(mid_, prec);
    mpfr_init2(rad_, kRadiusPrec);
    mpfr_set_zero(mid_, 1);
    mpfr_set_zero(rad_, 1);
}

PReal::PReal(const PReal& o) {
    mpfr_init2(mid_, mpfr_get_prec(o.mid_));
    mpfr_init2(rad_, kRadiusPrec);
    mpfr_set(mid_, o.mid_, MPFR_RNDN);
    mpfr_set(rad_, o.rad_, MPFR_RNDU);
}

PReal::PReal(PReal&& o) noexcept {
    mpfr_init2(mid_, mpfr_get_prec(o.mid_));
    mpfr_init2(rad_, kRadiusPrec);
    mpfr_swap(mid_, o.mid_);
    mpfr_swap(rad_, o.rad_);
}

PReal& PReal::operator=(const PReal& o) {
    if (this != &o) {
        mpfr_set_prec(mid_, mpfr_get_prec(o.mid_));
        mpfr_set(mid_, o.mid_, MPFR_RNDN);
        mpfr_set(rad_, o.rad_, MPFR_RNDU);
    }
    return *this;
}

PReal& PReal::operator=(PReal&& o) noexcept {
    if (this != &o) {
        mpfr_swap(mid_, o.mid_);
        mpfr_swap(rad_, o.rad_);
    }
    return *this;
}

PReal::~PReal() {
    mpfr_clear(mid_);
    mpfr_clear(rad_);
}

void PReal::rad_add(const mpfr_t x) { mpfr_add(rad_, rad_, x, MPFR_RNDU); }

void PReal::bump_rad_ulp(int ternary) {
    if (ternary == 0) return;
    Tmp ulp(kRadiusPrec);
    if (!mpfr_zero_p(mid_)) {
        mpfr_exp_t e = mpfr_get_exp(mid_) - mpfr_get_prec(mid_) + 1;
        mpfr_set_ui_2exp(ulp.v, 1, e, MPFR_RNDU);
    } else {
        // Underflowed to zero; cover the whole representable tail.
        mpfr_set_ui_2exp(ulp.v, 1, mpfr_get_emin() + 2, MPFR_RNDU);
    }
    rad_add(ulp.v);
}

PReal PReal::from_long(long v, mpfr_prec_t prec) {
    PReal r(prec);
    int t = mpfr_set_si(r.mid_, v, MPFR_RNDN);
    r.bump_rad_ulp(t);
    return r;
}

PReal PReal::from_mpz(const mpz_class& v, mpfr_prec_t prec) {
    PReal r(prec);
    int t = mpfr_set_z(r.mid_, v.get_mpz_t(), MPFR_RNDN);
    r.bump_rad_ulp(t);
    return r;
}

PReal PReal::from_mpq(const mpq_class& v, mpfr_prec_t prec) {
    PReal r(prec);
    int t = mpfr_set_q(r.mid_, v.get_mpq_t(), MPFR_RNDN);
    r.bump_rad_ulp(t);
    return r;
}

PReal PReal::from_double(double v, mpfr_prec_t prec) {
    PReal r(prec);
    int t = mpfr_set_d(r.mid_, v, MPFR_RNDN);
    r.bump_rad_ulp(t);
    return r;
}

PReal PReal::sqrt_mpz(const mpz_class& v, mpfr_prec_t prec) {
    if (v < 0) throw error("sqrt_mpz: negative argument");
    PReal x = from_mpz(v, prec);
    return x.sqrt();
}

PReal PReal::from_quad(const QuadVal& v, mpfr_prec_t prec) {
    PReal r = from_mpq(v.rational_part(), prec);
    if (!v.is_rational()) {
        PReal s = sqrt_mpz(mpz_class(v.surd()), prec);
        r = r + from_mpq(v.surd_coeff(), prec) * s;
    }
    return r;
}

PReal PReal::operator-() const {
    PReal r(*this);
    mpfr_neg(r.mid_, r.mid_, MPFR_RNDN);
    return r;
}

PReal PReal::operator+(const PReal& o) const {
    PReal r(std::max(prec(), o.prec()));
    int t = mpfr_add(r.mid_, mid_, o.mid_, MPFR_RNDN);
    mpfr_add(r.rad_, rad_, o.rad_, MPFR_RNDU);
    r.bump_rad_ulp(t);
    return r;
}

PReal PReal::operator-(const PReal& o) const {
    PReal r(std::max(prec(), o.prec()));
    int t = mpfr_sub(r.mid_, mid_, o.mid_, MPFR_RNDN);
    mpfr_add(r.rad_, rad_, o.rad_, MPFR_RNDU);
    r.bump_rad_ulp(t);
    return r;
}

PReal PReal::operator*(const PReal& o) const {
    PReal r(std::max(prec(), o.prec()));
    int t = mpfr_mul(r.mid_, mid_, o.mid_, MPFR_RNDN);
    // |a|rb + |b|ra + ra rb, all rounded up
    Tmp ma(kRadiusPrec), mb(kRadiusPrec), acc(kRadiusPrec), term(kRadiusPrec);
    mpfr_abs(ma.v, mid_, MPFR_RNDU);
    mpfr_abs(mb.v, o.mid_, MPFR_RNDU);
    mpfr_mul(acc.v, ma.v, o.rad_, MPFR_RNDU);
    mpfr_mul(term.v, mb.v, rad_, MPFR_RNDU);
    mpfr_add(acc.v, acc.v, term.v, MPFR_RNDU);
    mpfr_mul(term.v, rad_, o.rad_, MPFR_RNDU);
    mpfr_add(r.rad_, acc.v, term.v, MPFR_RNDU);
    r.bump_rad_ulp(t);
    return r;
}

PReal PReal::operator/(const PReal& o) const {
    // |b| must be certified away from zero.
    Tmp babs(kRadiusPrec), bgap(kRadiusPrec);
    mpfr_abs(babs.v, o.mid_, MPFR_RNDD);
    mpfr_sub(bgap.v, babs.v, o.rad_, MPFR_RNDD);
    if (mpfr_sgn(bgap.v) <= 0)
        throw near_zero_error("PReal: division by an interval containing 0");

    PReal r(std::max(prec(), o.prec()));
    int t = mpfr_div(r.mid_, mid_, o.mid_, MPFR_RNDN);
    // (|a|rb + |b|ra) / (|b| (|b|-rb))
    Tmp ma(kRadiusPrec), num(kRadiusPrec), term(kRadiusPrec), den(kRadiusPrec);
    mpfr_abs(ma.v, mid_, MPFR_RNDU);
    mpfr_mul(num.v, ma.v, o.rad_, MPFR_RNDU);
    Tmp babs_u(kRadiusPrec);
    mpfr_abs(babs_u.v, o.mid_, MPFR_RNDU);
    mpfr_mul(term.v, babs_u.v, rad_, MPFR_RNDU);
    mpfr_add(num.v, num.v, term.v, MPFR_RNDU);
    mpfr_mul(den.v, babs.v, bgap.v, MPFR_RNDD);
    mpfr_div(term.v, num.v, den.v, MPFR_RNDU);
    mpfr_add(r.rad_, r.rad_, term.v, MPFR_RNDU);
    r.bump_rad_ulp(t);
    return r;
}

PReal PReal::operator+(long v) const { return *this + from_long(v, prec()); }
PReal PReal::operator-(long v) const { return *this - from_long(v, prec()); }

PReal PReal::operator*(long v) const {
    PReal r(prec());
    int t = mpfr_mul_si(r.mid_, mid_, v, MPFR_RNDN);
    Tmp term(kRadiusPrec);
    mpfr_mul_si(term.v, rad_, v, MPFR_RNDU);
    mpfr_abs(term.v, term.v, MPFR_RNDU);
    mpfr_set(r.rad_, term.v, MPFR_RNDU);
    r.bump_rad_ulp(t);
    return r;
}

PReal PReal::operator/(long v) const {
    if (v == 0) throw near_zero_error("PReal: division by zero");
    PReal r(prec());
    int t = mpfr_div_si(r.mid_, mid_, v, MPFR_RNDN);
    Tmp term(kRadiusPrec);
    mpfr_div_si(term.v, rad_, v, MPFR_RNDU);
    mpfr_abs(term.v, term.v, MPFR_RNDU);
    mpfr_set(r.rad_, term.v, MPFR_RNDU);
    r.bump_rad_ulp(t);
    return r;
}

PReal operator+(long v, const PReal& x) { return x + v; }
PReal operator-(long v, const PReal& x) { return -(x - v); }
PReal operator*(long v, const PReal& x) { return x * v; }
PReal operator/(long v, const PReal& x) {
    return PReal::from_long(v, x.prec()) / x;
}

PReal PReal::abs() const {
    PReal r(*this);
    mpfr_abs(r.mid_, r.mid_, MPFR_RNDN);
    return r;
}

PReal PReal::sq() const {
    // Endpoint evaluation of x^2 over the interval; in particular an
    // interval containing zero squares to [0, max^2].
    Tmp lo(prec()), hi(prec()), l2(prec()), h2(prec());
    lower(lo.v);
    upper(hi.v);
    bool through_zero = mpfr_sgn(lo.v) <= 0 && mpfr_sgn(hi.v) >= 0;
    mpfr_sqr(l2.v, lo.v, MPFR_RNDU);
    mpfr_sqr(h2.v, hi.v, MPFR_RNDU);
    PReal r(prec());
    Tmp rhi(prec()), rlo(prec());
    mpfr_max(rhi.v, l2.v, h2.v, MPFR_RNDU);
    if (through_zero) {
        mpfr_set_zero(rlo.v, 1);
    } else {
        mpfr_sqr(l2.v, lo.v, MPFR_RNDD);
        mpfr_sqr(h2.v, hi.v, MPFR_RNDD);
        mpfr_min(rlo.v, l2.v, h2.v, MPFR_RNDD);
    }
    int t = mpfr_add(r.mid_, rhi.v, rlo.v, MPFR_RNDN);
    mpfr_div_2ui(r.mid_, r.mid_, 1, MPFR_RNDN);
    mpfr_sub(rhi.v, rhi.v, rlo.v, MPFR_RNDU);
    mpfr_div_2ui(rhi.v, rhi.v, 1, MPFR_RNDU);
    Tmp rr(kRadiusPrec);
    mpfr_set(rr.v, rhi.v, MPFR_RNDU);
    mpfr_set(r.rad_, rr.v, MPFR_RNDU);
    r.bump_rad_ulp(t);
    return r;
}

PReal PReal::sqrt() const {
    Tmp hi(prec()), lo(prec());
    upper(hi.v);
    if (mpfr_sgn(hi.v) < 0) throw error("PReal::sqrt: negative interval");
    lower(lo.v);
    if (mpfr_sgn(lo.v) < 0) mpfr_set_zero(lo.v, 1);

    PReal r(prec());
    Tmp m(prec());
    mpfr_set(m.v, mid_, MPFR_RNDN);
    if (mpfr_sgn(m.v) < 0) mpfr_set_zero(m.v, 1);
    mpfr_sqrt(r.mid_, m.v, MPFR_RNDN);
    Tmp shi(prec()), slo(prec()), dev(kRadiusPrec), dev2(kRadiusPrec);
    mpfr_sqrt(shi.v, hi.v, MPFR_RNDU);
    mpfr_sqrt(slo.v, lo.v, MPFR_RNDD);
    mpfr_sub(shi.v, shi.v, r.mid_, MPFR_RNDU);
    mpfr_sub(slo.v, r.mid_, slo.v, MPFR_RNDU);
    mpfr_set(dev.v, shi.v, MPFR_RNDU);
    mpfr_set(dev2.v, slo.v, MPFR_RNDU);
    mpfr_max(r.rad_, dev.v, dev2.v, MPFR_RNDU);
    return r;
}

PReal PReal::log() const {
    Tmp lo(prec()), hi(prec());
    lower(lo.v);
    upper(hi.v);
    if (mpfr_sgn(lo.v) <= 0)
        throw error("PReal::log: interval not certified positive");
    PReal r(prec());
    mpfr_log(r.mid_, mid_, MPFR_RNDN);
    Tmp lhi(prec()), llo(prec()), dev(kRadiusPrec), dev2(kRadiusPrec);
    mpfr_log(lhi.v, hi.v, MPFR_RNDU);
    mpfr_log(llo.v, lo.v, MPFR_RNDD);
    mpfr_sub(lhi.v, lhi.v, r.mid_, MPFR_RNDU);
    mpfr_sub(llo.v, r.mid_, llo.v, MPFR_RNDU);
    mpfr_set(dev.v, lhi.v, MPFR_RNDU);
    mpfr_set(dev2.v, llo.v, MPFR_RNDU);
    mpfr_max(r.rad_, dev.v, dev2.v, MPFR_RNDU);
    return r;
}

PReal PReal::pow(const PReal& expo) const {
    Tmp xlo(prec()), xhi(prec()), elo(expo.prec()), ehi(expo.prec());
    lower(xlo.v);
    upper(xhi.v);
    if (mpfr_sgn(xlo.v) < 0)
        throw error("PReal::pow: base not certified nonnegative");
    expo.lower(elo.v);
    expo.upper(ehi.v);

    PReal r(std::max(prec(), expo.prec()));
    mpfr_pow(r.mid_, mid_, expo.mid_, MPFR_RNDN);

    // Evaluate all four corners with outward rounding; the monotone hull
    // of a power function over a box is attained at corners.
    Tmp c(prec()), best_lo(prec()), best_hi(prec());
    bool first = true;
    const mpfr_ptr xs[2] = {xlo.v, xhi.v};
    const mpfr_ptr es[2] = {elo.v, ehi.v};
    for (auto* x : xs) {
        for (auto* e : es) {
            mpfr_pow(c.v, x, e, MPFR_RNDD);
            if (first || mpfr_cmp(c.v, best_lo.v) < 0)
                mpfr_set(best_lo.v, c.v, MPFR_RNDD);
            mpfr_pow(c.v, x, e, MPFR_RNDU);
            if (first || mpfr_cmp(c.v, best_hi.v) > 0)
                mpfr_set(best_hi.v, c.v, MPFR_RNDU);
            first = false;
        }
    }
    Tmp dev(kRadiusPrec), dev2(kRadiusPrec);
    mpfr_sub(best_hi.v, best_hi.v, r.mid_, MPFR_RNDU);
    mpfr_sub(best_lo.v, r.mid_, best_lo.v, MPFR_RNDU);
    mpfr_set(dev.v, best_hi.v, MPFR_RNDU);
    mpfr_set(dev2.v, best_lo.v, MPFR_RNDU);
    mpfr_max(r.rad_, dev.v, dev2.v, MPFR_RNDU);
    return r;
}

void PReal::lower(mpfr_t out) const { mpfr_sub(out, mid_, rad_, MPFR_RNDD); }
void PReal::upper(mpfr_t out) const { mpfr_add(out, mid_, rad_, MPFR_RNDU); }

double PReal::lower_d() const {
    Tmp t(prec());
    lower(t.v);
    return mpfr_get_d(t.v, MPFR_RNDD);
}

double PReal::upper_d() const {
    Tmp t(prec());
    upper(t.v);
    return mpfr_get_d(t.v, MPFR_RNDU);
}

bool PReal::is_positive() const {
    Tmp t(prec());
    lower(t.v);
    return mpfr_sgn(t.v) > 0;
}

bool PReal::is_negative() const {
    Tmp t(prec());
    upper(t.v);
    return mpfr_sgn(t.v) < 0;
}

bool PReal::is_nonneg() const {
    Tmp t(prec());
    lower(t.v);
    return mpfr_sgn(t.v) >= 0;
}

int PReal::cmp(const PReal& o) const {
    mpfr_prec_t p = std::max(prec(), o.prec());
    Tmp au(p), bl(p), al(p), bu(p);
    upper(au.v);
    o.lower(bl.v);
    if (mpfr_cmp(au.v, bl.v) < 0) return -1;
    lower(al.v);
    o.upper(bu.v);
    if (mpfr_cmp(al.v, bu.v) > 0) return 1;
    return 0;
}

bool PReal::le_certified(const PReal& o) const {
    mpfr_prec_t p = std::max(prec(), o.prec());
    Tmp au(p), bl(p);
    upper(au.v);
    o.lower(bl.v);
    return mpfr_cmp(au.v, bl.v) <= 0;
}

bool PReal::eq_exact(const PReal& o) const {
    return is_exact() && o.is_exact() && mpfr_cmp(mid_, o.mid_) == 0;
}

void PReal::add_error(const PReal& amount) {
    Tmp t(kRadiusPrec);
    amount.upper(t.v);
    mpfr_abs(t.v, t.v, MPFR_RNDU);
    rad_add(t.v);
}

std::string PReal::str(int digits) const {
    char buf[128];
    if (digits > 64) digits = 64;
    mpfr_snprintf(buf, sizeof buf, "%.*RNe", digits, mid_);
    return buf;
}

PReal ball_max(const PReal& a, const PReal& b) {
    // max is monotone: [max(al,bl), max(au,bu)]
    mpfr_prec_t p = std::max(a.prec(), b.prec());
    Tmp au(p), bu(p), al(p), bl(p);
    a.upper(au.v);
    b.upper(bu.v);
    a.lower(al.v);
    b.lower(bl.v);
    PReal r(p);
    mpfr_t hi, lo;
    mpfr_init2(hi, p);
    mpfr_init2(lo, p);
    mpfr_max(hi, au.v, bu.v, MPFR_RNDU);
    mpfr_max(lo, al.v, bl.v, MPFR_RNDD);
    // store as midpoint/radius
    int t = mpfr_add(r.mid_, hi, lo, MPFR_RNDN);
    mpfr_div_2ui(r.mid_, r.mid_, 1, MPFR_RNDN);
    mpfr_sub(hi, hi, lo, MPFR_RNDU);
    mpfr_div_2ui(hi, hi, 1, MPFR_RNDU);
    mpfr_set(r.rad_, hi, MPFR_RNDU);
    r.bump_rad_ulp(t);
    mpfr_clear(hi);
    mpfr_clear(lo);
    return r;
}

PReal ball_min(const PReal& a, const PReal& b) { return -ball_max(-a, -b); }

} // namespace okcf
