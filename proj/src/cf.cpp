#include "okcf/cf.hpp"

#include <cmath>

namespace okcf {

CFConstants constants(const RingSpec& ring) {
    CFConstants c;
    c.theta = ring.theta;
    c.theta_sq = ring.theta_sq;
    c.r0 = ring.r0;
    c.c0 = c.theta_sq * QuadVal(ring.r0) / (c.theta_sq - QuadVal(1));
    c.c1 = c.c0 + QuadVal(1);
    // Smallest r with theta^floor(r/r0) > C0; exact scan.
    int r = 1;
    for (;; ++r) {
        unsigned m = (unsigned)(r / c.r0);
        if (m == 0) continue;
        if (c.theta.pow(m) > c.c0) break;
        if (r > 10000) throw error("constants: r1 scan runaway");
    }
    c.r1 = r;
    c.c2 = QuadVal(1) - c.c0 / c.theta.pow((unsigned)(c.r1 / c.r0));
    return c;
}

namespace {

// Termination threshold: the interval for z_n - a_n must contain zero with
// both component radii below 2^(-prec/2).
bool certified_tiny(const PComplex& diff, mpfr_prec_t prec) {
    if (!diff.contains_zero()) return false;
    mpfr_t thr;
    mpfr_init2(thr, 32);
    mpfr_set_ui_2exp(thr, 1, -(mpfr_exp_t)(prec / 2), MPFR_RNDD);
    bool ok = mpfr_cmp(diff.re().rad_raw(), thr) < 0 &&
              mpfr_cmp(diff.im().rad_raw(), thr) < 0;
    mpfr_clear(thr);
    return ok;
}

} // namespace

CFExpansion expand_value(const PComplex& z, const RingSpec& ring,
                         int max_terms) {
    if (max_terms < 1) throw error("expand: max_terms must be >= 1");
    CFExpansion e;
    e.d_ = ring.d;
    e.prec_ = z.prec();
    e.value_ = z;
    e.p_ = {OKInt::zero(ring), OKInt::one(ring)};
    e.q_ = {OKInt::one(ring), OKInt::zero(ring)};

    PComplex zn = z;
    for (int n = 0; n < max_terms; ++n) {
        OKInt an = nearest_integer(zn, ring);
        e.a_.push_back(an);
        e.p_.push_back(an * e.p_[(size_t)n + 1] + e.p_[(size_t)n]);
        e.q_.push_back(an * e.q_[(size_t)n + 1] + e.q_[(size_t)n]);

        // determinant invariant, exact
        const OKInt& pn = e.p(n);
        const OKInt& qn = e.q(n);
        OKInt det = qn * e.p(n - 1) - pn * e.q(n - 1);
        OKInt want = (n % 2 == 0) ? OKInt::one(ring) : -OKInt::one(ring);
        if (det != want) throw error("expand: determinant identity violated");

        e.eps_.push_back(to_complex(qn, e.prec_) * z -
                         to_complex(pn, e.prec_));

        PComplex diff = zn - to_complex(an, e.prec_);
        if (diff.contains_zero()) {
            if (certified_tiny(diff, e.prec_)) {
                e.terminated_ = true;
                break;
            }
            throw precision_error("expand: z_n - a_n straddles zero");
        }
        zn = diff.inverse();
    }
    return e;
}

CFExpansion expand_exact(const OKInt& u0, const OKInt& v0,
                         const RingSpec& ring, int max_terms,
                         mpfr_prec_t prec) {
    if (v0.is_zero()) throw error("expand_exact: zero denominator");
    if (max_terms < 1) throw error("expand: max_terms must be >= 1");
    CFExpansion e;
    e.d_ = ring.d;
    e.prec_ = prec;
    e.value_ = to_complex(u0, prec) / to_complex(v0, prec);
    e.p_ = {OKInt::zero(ring), OKInt::one(ring)};
    e.q_ = {OKInt::one(ring), OKInt::zero(ring)};

    OKInt u = u0, v = v0;
    for (int n = 0; n < max_terms; ++n) {
        OKInt an = divide_round(u, v);
        e.a_.push_back(an);
        e.p_.push_back(an * e.p_[(size_t)n + 1] + e.p_[(size_t)n]);
        e.q_.push_back(an * e.q_[(size_t)n + 1] + e.q_[(size_t)n]);
        const OKInt& pn = e.p(n);
        const OKInt& qn = e.q(n);
        OKInt det = qn * e.p(n - 1) - pn * e.q(n - 1);
        OKInt want = (n % 2 == 0) ? OKInt::one(ring) : -OKInt::one(ring);
        if (det != want) throw error("expand: determinant identity violated");
        e.eps_.push_back(to_complex(qn, prec) * e.value_ -
                         to_complex(pn, prec));
        OKInt rem = u - an * v;
        if (rem.is_zero()) {
            e.terminated_ = true;
            break;
        }
        u = v;
        v = rem;
    }
    return e;
}

CFExpansion expand(const ComplexSpec& spec, const RingSpec& ring,
                   const ExpandOptions& opts) {
    // Inputs that are exactly in K take the exact ring-division route,
    // which is total (boundary ties cannot defeat it).
    if (auto exact = spec.eval_exact()) {
        auto [x, y] = *exact;
        bool in_K = (ring.d == 1) || (y == 0);
        if (in_K) {
            mpz_class den;
            mpz_lcm(den.get_mpz_t(), x.get_den().get_mpz_t(),
                    y.get_den().get_mpz_t());
            mpz_class ua = x.get_num() * (den / x.get_den());
            mpz_class ub = y.get_num() * (den / y.get_den());
            OKInt u(ua, ub, ring), v(den, 0, ring);
            return expand_exact(u, v, ring, opts.max_terms, opts.prec);
        }
    }
    mpfr_prec_t prec = opts.prec;
    for (;;) {
        try {
            return expand_value(spec.eval(prec), ring, opts.max_terms);
        } catch (const precision_error&) {
            if (prec * 2 > opts.prec_cap) throw;
            prec *= 2;
        }
    }
}

HypothesisReport check_hypothesis(const CFExpansion& exp) {
    const RingSpec& ring = exp.ring();
    int n = exp.size();
    if (n < ring.r0 + 2)
        throw insufficient_data_error(
            "check_hypothesis: expansion shallower than r0 + 2");
    HypothesisReport rep;
    std::vector<mpz_class> norms((size_t)n);
    for (int i = 0; i < n; ++i) norms[(size_t)i] = exp.q(i).norm();

    for (int i = 1; i < n; ++i) {
        if (!(norms[(size_t)i] > norms[(size_t)i - 1])) {
            rep.monotone_ok = false;
            rep.first_violation = i;
            break;
        }
    }

    bool have = false;
    for (int i = 0; i + ring.r0 < n; ++i) {
        if (norms[(size_t)i] == 0) continue;
        mpq_class ratio(norms[(size_t)(i + ring.r0)], norms[(size_t)i]);
        ratio.canonicalize();
        if (!have || ratio < rep.min_ratio_sq) {
            have = true;
            rep.min_ratio_sq = ratio;
            rep.min_ratio_at = i;
        }
    }
    if (have) {
        rep.min_ratio = std::sqrt(rep.min_ratio_sq.get_d());
        rep.theta_pass = QuadVal(rep.min_ratio_sq) >= ring.theta_sq;
    }
    return rep;
}

SandwichReport error_sandwich_check(const CFExpansion& exp,
                                    const mpq_class& omega,
                                    int tail_start) {
    if (omega <= 1) throw error("error_sandwich_check: omega must be > 1");
    SandwichReport rep;
    rep.tail_start = tail_start;
    if (exp.terminated()) {
        rep.status = SandwichReport::kRationalInput;
        return rep;
    }
    int last = exp.size() - 2; // need q_{n+1}
    if (last < tail_start) {
        rep.status = SandwichReport::kTooShallow;
        return rep;
    }
    mpfr_prec_t prec = exp.prec();
    CFConstants cs = constants(exp.ring());
    PReal c1 = PReal::from_quad(cs.c1, prec);
    PReal c2 = PReal::from_quad(cs.c2, prec);
    // exponent omega^(r1-1), exact rational
    mpq_class expo_q(1);
    for (int i = 0; i < cs.r1 - 1; ++i) expo_q *= omega;
    expo_q.canonicalize();
    PReal expo = PReal::from_mpq(expo_q, prec);

    for (int i = tail_start; i <= last; ++i) {
        PReal eabs = exp.eps(i).abs();
        PReal qnext = exp.q_abs(i + 1);
        PReal ub = c1 / qnext;
        PReal lb = c2 / qnext.pow(expo);
        bool up_ok = eabs.le_certified(ub);
        bool lo_ok = lb.le_certified(eabs);
        if (!up_ok && rep.upper_ok) {
            rep.upper_ok = false;
            rep.first_upper_fail = i;
        }
        if (!lo_ok && rep.lower_ok) {
            rep.lower_ok = false;
            rep.first_lower_fail = i;
        }
        SandwichReport::IndexMargin m;
        m.n = i;
        double e = eabs.mid_d();
        m.upper_margin = e > 0 ? ub.mid_d() / e : HUGE_VAL;
        double lbm = lb.mid_d();
        m.lower_margin = lbm > 0 ? e / lbm : HUGE_VAL;
        rep.margins.push_back(m);
    }
    return rep;
}

std::pair<OKInt, OKInt> reconstruct_fraction(const CFExpansion& exp, int n) {
    if (n < 0 || n >= exp.size())
        throw index_error("reconstruct_fraction: index out of range");
    const RingSpec& ring = exp.ring();
    // Bottom-up: start at a_n/1 and prepend a_j via x -> a_j + 1/x, i.e.
    // (num, den) -> (a_j*num + den, num).
    OKInt num = exp.a(n), den = OKInt::one(ring);
    for (int j = n - 1; j >= 0; --j) {
        OKInt nn = exp.a(j) * num + den;
        den = num;
        num = nn;
    }
    return {num, den};
}

} // namespace okcf
