#include "okcf/matrix.hpp"

#include <cmath>

namespace okcf {

namespace {

mpq_class mpq_pow(const mpq_class& x, int e) {
    mpq_class r(1);
    for (int i = 0; i < e; ++i) r *= x;
    r.canonicalize();
    return r;
}

// omega^(r1-1) for the ring, as an exact rational exponent.
mpq_class tail_exponent(const RingSpec& ring, const mpq_class& omega) {
    CFConstants cs = constants(ring);
    return mpq_pow(omega, cs.r1 - 1);
}

int sign_pow(int k) { return (k % 2 == 0) ? 1 : -1; } // (-1)^k

} // namespace

Mat2 convergent_matrix(const CFExpansion& exp, int k) {
    if (k < 0 || k >= exp.size())
        throw index_error("convergent_matrix: k out of range");
    int sk1 = sign_pow(k - 1 + 2); // (-1)^{k-1}
    int sk = sign_pow(k);
    OKInt bl = exp.q(k - 1) * sk1;
    OKInt br = exp.p(k - 1) * sk;
    Mat2 m(exp.q(k), -exp.p(k), std::move(bl), std::move(br));
    if (!m.is_unimodular())
        throw error("convergent_matrix: determinant is not 1");
    return m;
}

std::pair<Vec2, bool> normalize_slope(const Vec2& z) {
    PReal s1 = z.x1.abs_sq(), s2 = z.x2.abs_sq();
    if (s1.le_certified(s2)) return {z, false};
    if (s2.lt_certified(s1)) {
        // J z = (-z2, z1)
        return {Vec2{-z.x2, z.x1}, true};
    }
    // Overlap: accept as "already <= 1" only within the documented slack.
    mpfr_prec_t prec = z.x1.prec();
    PReal slack = PReal::from_long(1, prec) +
                  PReal::from_double(std::ldexp(1.0, -(int)(prec / 2)), prec) * 3;
    if ((s1 / s2).le_certified(slack)) return {z, false};
    throw precision_error("normalize_slope: |slope| = 1 not decidable");
}

Mat2 target_matrix_rational(const OKInt& a, const OKInt& b) {
    if (b.is_zero()) throw error("target_matrix_rational: b must be nonzero");
    if (a.norm() > b.norm())
        throw error("target_matrix_rational: requires |a| <= |b|");
    ExtendedGcd e = extended_gcd(a, b);
    if (!e.g.is_unit())
        throw not_coprime_error("target_matrix_rational: gcd(a, b) not a unit");
    OKInt ginv = e.g.unit_inverse();
    OKInt bprime = e.x * ginv;
    OKInt aprime = -(e.y * ginv);
    // reduce the cofactor column modulo (a, b)
    OKInt t = divide_round(bprime, b);
    bprime = bprime - t * b;
    aprime = aprime - t * a;
    Mat2 n(a, aprime, b, bprime);
    if (!n.is_unimodular())
        throw error("target_matrix_rational: determinant is not 1");
    if (bprime.norm() > b.norm())
        throw error("target_matrix_rational: |b'| <= |b| failed");
    return n;
}

Mat2 target_matrix_irrational(const CFExpansion& exp_y, int j) {
    if (j < 1 || j >= exp_y.size())
        throw index_error("target_matrix_irrational: j out of range");
    int sj = sign_pow(j - 1 + 2); // (-1)^{j-1}
    Mat2 n(exp_y.p(j), exp_y.p(j - 1) * sj, exp_y.q(j),
           exp_y.q(j - 1) * sj);
    if (!n.is_unimodular())
        throw error("target_matrix_irrational: determinant is not 1");
    return n;
}

PComplex rho(const CFExpansion& exp_z, int k, const Mat2& N,
             const PComplex& z2, const PComplex& y2) {
    if (k < 1 || k >= exp_z.size()) throw index_error("rho: k out of range");
    const OKInt& s = N.v2();
    const OKInt& sp = N.u2();
    if (s.is_zero()) throw near_zero_error("rho: s must be nonzero");
    mpfr_prec_t prec = exp_z.prec();
    const PComplex& ek = exp_z.eps(k);
    const PComplex& ek1 = exp_z.eps(k - 1);
    if (ek1.contains_zero())
        throw near_zero_error("rho: eps_{k-1} interval contains zero");
    PComplex sc = to_complex(s, prec);
    PComplex spc = to_complex(sp, prec);
    long sg = sign_pow(k - 1 + 2);
    PComplex term1 = y2 / (z2 * sc * ek1);
    PComplex term2 = ek / ek1;
    return term1 * sg - term2 * sg - spc / sc;
}

EllChoice choose_ell(const PComplex& rho_val, const RingSpec& ring) {
    mpq_class radius_sq = ring.cover_sq * 4; // search disc of radius 2*cover
    std::vector<OKInt> cands = lattice_points_near(rho_val, ring, radius_sq);
    PReal rho_abs_sq = rho_val.abs_sq();
    PReal r2ball = PReal::from_mpq(radius_sq, rho_val.prec());

    EllChoice out;
    bool have = false, have_any = false;
    PReal best_key(rho_val.prec());
    OKInt best_any;
    PReal best_any_key(rho_val.prec());
    for (const OKInt& t : cands) {
        PReal dsq = (rho_val - to_complex(t, rho_val.prec())).abs_sq();
        // deterministic order: upper bound of the distance, then lex
        auto better = [&](const PReal& cand_key, const OKInt& cand,
                          const PReal& cur_key, const OKInt& cur,
                          bool cur_set) {
            if (!cur_set) return true;
            mpfr_t cu, ku;
            mpfr_init2(cu, cand_key.prec());
            mpfr_init2(ku, cur_key.prec());
            cand_key.upper(cu);
            cur_key.upper(ku);
            int c = mpfr_cmp(cu, ku);
            mpfr_clear(cu);
            mpfr_clear(ku);
            if (c != 0) return c < 0;
            return cand.lex_less(cur);
        };
        if (better(dsq, t, best_any_key, best_any, have_any)) {
            best_any = t;
            best_any_key = dsq;
            have_any = true;
        }
        // |ell| <= |rho| unless certified violated
        PReal tn = PReal::from_mpz(t.norm(), rho_val.prec());
        bool norm_ok = !rho_abs_sq.lt_certified(tn);
        if (!norm_ok) continue;
        if (better(dsq, t, best_key, out.ell, have)) {
            out.ell = t;
            best_key = dsq;
            have = true;
        }
    }
    if (!have) {
        // fall back to the true nearest point, flagged
        out.relaxed = true;
        out.ell = have_any ? best_any : nearest_integer(rho_val, ring);
        best_key = (rho_val - to_complex(out.ell, rho_val.prec())).abs_sq();
    }
    PReal tn = PReal::from_mpz(out.ell.norm(), rho_val.prec());
    out.norm_ok = !rho_abs_sq.lt_certified(tn);
    out.within_radius = best_key.le_certified(r2ball);
    return out;
}

Mat2 build_gamma(const Mat2& N, const OKInt& ell, const Mat2& Mk) {
    Mat2 g = N * Mat2::U(ell) * Mk;
    if (!g.is_unimodular()) throw error("build_gamma: determinant is not 1");
    return g;
}

std::pair<PComplex, PComplex> residual(const Mat2& gamma, const Vec2& z,
                                       const Vec2& y) {
    mpfr_prec_t prec = z.x1.prec();
    Vec2 gz = gamma.apply(z, prec);
    PComplex lam1 = gz.x1 - y.x1;
    PComplex lam2 = gz.x2 - y.x2;
    // Second route through the slope, when z2 is invertible:
    // Lambda_i = z2 (v_i xi + u_i) - y_i.
    if (!z.x2.contains_zero()) {
        PComplex xi = z.x1 / z.x2;
        PComplex alt1 =
            z.x2 * (to_complex(gamma.v1(), prec) * xi +
                    to_complex(gamma.u1(), prec)) -
            y.x1;
        PComplex alt2 =
            z.x2 * (to_complex(gamma.v2(), prec) * xi +
                    to_complex(gamma.u2(), prec)) -
            y.x2;
        if (!(alt1 - lam1).contains_zero() || !(alt2 - lam2).contains_zero())
            throw error("residual: computation routes disagree");
    }
    return {lam1, lam2};
}

namespace {

PReal sup_err(const PComplex& l1, const PComplex& l2) {
    return ball_max(l1.abs(), l2.abs());
}

void fill_ell_flags(GammaResult& r, const EllChoice& e) {
    r.ell = e.ell;
    r.ell_within_radius = e.within_radius;
    r.ell_norm_ok = e.norm_ok;
    r.ell_relaxed = e.relaxed;
}

// Checks the factorization Lambda2 = (-1)^{k-1} z2 s eps_{k-1} (ell - rho).
void check_lambda2_identity(const GammaResult& r, const CFExpansion& exp_z,
                            const OKInt& s, const Vec2& z) {
    mpfr_prec_t prec = exp_z.prec();
    long sg = sign_pow(r.k - 1 + 2);
    PComplex rhs = z.x2 * to_complex(s, prec) * exp_z.eps(r.k - 1) *
                   (to_complex(r.ell, prec) - r.rho_val) * sg;
    if (!(rhs - r.lam2).contains_zero())
        throw error("gamma construction: Lambda2 factorization violated");
}

// Records whether |ell| >= |y2 q_k / (C1 z2 s)| - (C3 + 2); valid for all
// large k only, so it is observed rather than enforced.
bool ell_range_lb(const GammaResult& r, const CFExpansion& exp_z,
                  const OKInt& s, const Vec2& z, const PComplex& y2) {
    mpfr_prec_t prec = exp_z.prec();
    const RingSpec& ring = exp_z.ring();
    CFConstants cs = constants(ring);
    double c3 = 2.0 * std::sqrt(ring.cover_sq.get_d());
    PReal c1 = PReal::from_quad(cs.c1, prec);
    PReal sabs = PReal::sqrt_mpz(s.norm(), prec);
    double lb = (y2.abs() * exp_z.q_abs(r.k) / (c1 * z.x2.abs() * sabs))
                    .mid_d() -
                (c3 + 2.0);
    double ell_abs = std::sqrt(mpz_get_d(r.ell.norm().get_mpz_t()));
    return ell_abs >= lb;
}

} // namespace

GammaResult gamma_origin(const CFExpansion& exp_z, int k, const Vec2& z) {
    if (k < 1) throw index_error("gamma_origin: k must be >= 1");
    mpfr_prec_t prec = exp_z.prec();
    const RingSpec& ring = exp_z.ring();
    GammaResult r;
    r.cls = TargetClass::kOrigin;
    r.k = k;
    r.gamma = convergent_matrix(exp_z, k);
    r.ell = OKInt::zero(ring);

    Vec2 zero{PComplex(prec), PComplex(prec)};
    auto [l1, l2] = residual(r.gamma, z, zero);
    // M_k z = z2 (eps_k, (-1)^{k-1} eps_{k-1})^t
    PComplex want1 = z.x2 * exp_z.eps(k);
    PComplex want2 = z.x2 * exp_z.eps(k - 1) * sign_pow(k - 1 + 2);
    if (!(want1 - l1).contains_zero() || !(want2 - l2).contains_zero())
        throw error("gamma_origin: residual identity violated");
    r.lam1 = l1;
    r.lam2 = l2;
    r.err = sup_err(l1, l2);
    r.height_norm_sq = r.gamma.height_norm_sq();
    r.height = PReal::sqrt_mpz(r.height_norm_sq, prec);

    CFConstants cs = constants(ring);
    PReal bound = z.sup_norm() * PReal::from_quad(cs.c1, prec) / exp_z.q_abs(k);
    r.predicted = bound;
    r.origin_bound_certified = r.err.le_certified(bound);
    r.measured_const = r.err.mid_d() / bound.mid_d();
    r.height_lb = exp_z.q_abs(k);
    r.height_ub = r.height_lb;
    r.measured_height_const = r.height.mid_d() / r.height_lb.mid_d();
    return r;
}

GammaResult gamma_rational(const CFExpansion& exp_z, const OKInt& a,
                           const OKInt& b, const Vec2& z,
                           const mpq_class& omega, int k) {
    mpfr_prec_t prec = exp_z.prec();
    return gamma_rational(exp_z, a, b, z,
                          Vec2{to_complex(a, prec), to_complex(b, prec)},
                          omega, k);
}

GammaResult gamma_rational(const CFExpansion& exp_z, const OKInt& a,
                           const OKInt& b, const Vec2& z, const Vec2& yv,
                           const mpq_class& omega, int k) {
    mpfr_prec_t prec = exp_z.prec();
    const RingSpec& ring = exp_z.ring();
    Mat2 N = target_matrix_rational(a, b);
    const Vec2& y = yv;
    // yv must lie on the slope a/b
    if (!(y.x1 * to_complex(b, prec) - y.x2 * to_complex(a, prec))
             .contains_zero())
        throw error("gamma_rational: target point off the slope a/b");

    GammaResult r;
    r.cls = TargetClass::kRationalSlope;
    r.k = k;
    r.rho_val = rho(exp_z, k, N, z.x2, y.x2);
    EllChoice e = choose_ell(r.rho_val, ring);
    fill_ell_flags(r, e);
    r.gamma = build_gamma(N, r.ell, convergent_matrix(exp_z, k));
    auto [l1, l2] = residual(r.gamma, z, y);
    r.lam1 = l1;
    r.lam2 = l2;
    r.err = sup_err(l1, l2);
    check_lambda2_identity(r, exp_z, b, z);
    r.ell_range_lb_holds = ell_range_lb(r, exp_z, b, z, y.x2);

    r.height_norm_sq = r.gamma.height_norm_sq();
    r.height = PReal::sqrt_mpz(r.height_norm_sq, prec);
    // Residual shape |b z2 / q_k|; height shapes |q_k q_{k-1}| and
    // |q_{k-1}| |q_k|^{omega^(r1-1)}.
    PReal babs = PReal::sqrt_mpz(b.norm(), prec);
    r.predicted = babs * z.x2.abs() / exp_z.q_abs(k);
    r.measured_const = r.err.mid_d() / r.predicted.mid_d();
    r.height_lb = PReal::sqrt_mpz(exp_z.q(k).norm() * exp_z.q(k - 1).norm(),
                                  prec);
    PReal expo = PReal::from_mpq(tail_exponent(ring, omega), prec);
    r.height_ub = exp_z.q_abs(k - 1) * exp_z.q_abs(k).pow(expo);
    r.measured_height_const = r.height.mid_d() / r.height_lb.mid_d();
    return r;
}

std::vector<std::pair<int, int>> select_indices(const CFExpansion& exp_z,
                                                const CFExpansion& exp_y) {
    std::vector<std::pair<int, int>> out;
    if (exp_z.size() == 0 || exp_y.size() == 0) return out;
    std::vector<mpz_class> s3((size_t)exp_y.size());
    for (int j = 0; j < exp_y.size(); ++j) {
        mpz_class n = exp_y.q(j).norm();
        s3[(size_t)j] = n * n * n;
    }
    for (int j = 1; j + 1 < exp_y.size(); ++j) {
        for (int k = 1; k < exp_z.size(); ++k) {
            // |q_{k-1}|^(1/3) < |s_j| <= |q_k|^(1/3) < |s_{j+1}|
            if (exp_z.q(k - 1).norm() < s3[(size_t)j] &&
                s3[(size_t)j] <= exp_z.q(k).norm() &&
                exp_z.q(k).norm() < s3[(size_t)j + 1])
                out.emplace_back(j, k);
        }
    }
    return out;
}

GammaResult gamma_irrational(const CFExpansion& exp_z,
                             const CFExpansion& exp_y, int j, int k,
                             const Vec2& z, const Vec2& y,
                             const mpq_class& omega) {
    mpfr_prec_t prec = exp_z.prec();
    const RingSpec& ring = exp_z.ring();
    if (j + 1 >= exp_y.size())
        throw index_error("gamma_irrational: j+1 out of range");
    Mat2 N = target_matrix_irrational(exp_y, j);

    GammaResult r;
    r.cls = TargetClass::kIrrationalSlope;
    r.k = k;
    r.j = j;
    r.rho_val = rho(exp_z, k, N, z.x2, y.x2);
    EllChoice e = choose_ell(r.rho_val, ring);
    fill_ell_flags(r, e);
    r.gamma = build_gamma(N, r.ell, convergent_matrix(exp_z, k));
    auto [l1, l2] = residual(r.gamma, z, y);
    r.lam1 = l1;
    r.lam2 = l2;
    r.err = sup_err(l1, l2);
    check_lambda2_identity(r, exp_z, N.v2(), z);
    r.ell_range_lb_holds = ell_range_lb(r, exp_z, N.v2(), z, y.x2);

    r.height_norm_sq = r.gamma.height_norm_sq();
    r.height = PReal::sqrt_mpz(r.height_norm_sq, prec);
    // Residual shape |q_k|^{omega^(r1-1)-1}/|s_j s_{j+1}| + |s_j/q_k|.
    PReal expo = PReal::from_mpq(tail_exponent(ring, omega) - 1, prec);
    PReal qk = exp_z.q_abs(k);
    PReal sj = PReal::sqrt_mpz(exp_y.q(j).norm(), prec);
    PReal sj1 = PReal::sqrt_mpz(exp_y.q(j + 1).norm(), prec);
    r.predicted = qk.pow(expo) / (sj * sj1) + sj / qk;
    r.measured_const = r.err.mid_d() / r.predicted.mid_d();
    r.height_lb = PReal::sqrt_mpz(exp_z.q(k).norm() * exp_z.q(k - 1).norm(),
                                  prec);
    PReal up_expo =
        PReal::from_mpq(tail_exponent(ring, omega) + 1, prec);
    r.height_ub = qk.pow(up_expo);
    r.measured_height_const = r.height.mid_d() / r.height_lb.mid_d();
    return r;
}

GammaResult unnormalize(GammaResult r, bool z_flipped, bool y_flipped,
                        const Vec2& z, const Vec2& y) {
    if (!z_flipped && !y_flipped) return r;
    const RingSpec& ring = r.gamma.v1().ring();
    Mat2 g = r.gamma;
    if (y_flipped) g = Mat2::J(ring).inverse() * g;
    if (z_flipped) g = g * Mat2::J(ring);
    r.gamma = g;
    auto [l1, l2] = residual(g, z, y);
    r.lam1 = l1;
    r.lam2 = l2;
    r.err = sup_err(l1, l2);
    // heights are invariant under J on either side
    if (g.height_norm_sq() != r.height_norm_sq)
        throw error("unnormalize: height changed under J");
    return r;
}

} // namespace okcf
