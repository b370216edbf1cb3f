#include "okcf/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace okcf {

namespace {

// Per-thread scratch for the scan loop; midpoint arithmetic only.
struct ScanCtx {
    mpfr_t zre, zim, wzre, wzim, imw;
    mpfr_t wre, wim, B, A, t1, t2, best, cand, vbest;
    long best_a = 0, best_b = 0, best_pa = 0, best_pb = 0;
    bool have = false;
    mpfr_prec_t prec;
    const RingSpec* ring;

    ScanCtx(const PComplex& z, const RingSpec& r, mpfr_prec_t p)
        : prec(p), ring(&r) {
        for (mpfr_ptr m : {zre, zim, wzre, wzim, imw, wre, wim, B, A, t1, t2,
                           best, cand, vbest})
            mpfr_init2(m, p);
        mpfr_set(zre, z.re().mid_raw(), MPFR_RNDN);
        mpfr_set(zim, z.im().mid_raw(), MPFR_RNDN);
        // Im(omega) = sqrt(disc)/2
        mpfr_sqrt_ui(imw, r.disc, MPFR_RNDN);
        mpfr_div_2ui(imw, imw, 1, MPFR_RNDN);
        // omega * z = (t/2 + i*imw) * z
        mpfr_mul_si(t1, zre, r.omega_trace, MPFR_RNDN);
        mpfr_div_2ui(t1, t1, 1, MPFR_RNDN);
        mpfr_mul(t2, imw, zim, MPFR_RNDN);
        mpfr_sub(wzre, t1, t2, MPFR_RNDN);
        mpfr_mul_si(t1, zim, r.omega_trace, MPFR_RNDN);
        mpfr_div_2ui(t1, t1, 1, MPFR_RNDN);
        mpfr_mul(t2, imw, zre, MPFR_RNDN);
        mpfr_add(wzim, t1, t2, MPFR_RNDN);
        mpfr_set_inf(best, 1);
    }
    ~ScanCtx() {
        for (mpfr_ptr m : {zre, zim, wzre, wzim, imw, wre, wim, B, A, t1, t2,
                           best, cand, vbest})
            mpfr_clear(m);
    }
    ScanCtx(const ScanCtx&) = delete;
    ScanCtx& operator=(const ScanCtx&) = delete;

    // err^2 of the candidate lattice point (pa, pb) against (wre, wim),
    // written into `cand`.
    void cand_err(long pa, long pb) {
        // p = (pa + trace*pb/2, pb*imw)
        mpfr_set_si(t1, 2 * pa + ring->omega_trace * pb, MPFR_RNDN);
        mpfr_div_2ui(t1, t1, 1, MPFR_RNDN);
        mpfr_sub(t1, wre, t1, MPFR_RNDN);
        mpfr_sqr(t1, t1, MPFR_RNDN);
        mpfr_mul_si(t2, imw, pb, MPFR_RNDN);
        mpfr_sub(t2, wim, t2, MPFR_RNDN);
        mpfr_sqr(t2, t2, MPFR_RNDN);
        mpfr_add(cand, t1, t2, MPFR_RNDN);
    }

    // Evaluates one q = (a, b); updates the running best under the total
    // order (err^2, a, b).
    void visit(long a, long b) {
        // w = a*z + b*(omega z)
        mpfr_mul_si(wre, zre, a, MPFR_RNDN);
        mpfr_mul_si(t1, wzre, b, MPFR_RNDN);
        mpfr_add(wre, wre, t1, MPFR_RNDN);
        mpfr_mul_si(wim, zim, a, MPFR_RNDN);
        mpfr_mul_si(t1, wzim, b, MPFR_RNDN);
        mpfr_add(wim, wim, t1, MPFR_RNDN);

        // nearest lattice point: round basis coordinates, then (for the
        // hexagonal rings) compare the neighboring cells
        mpfr_div(B, wim, imw, MPFR_RNDN);
        long pb0 = mpfr_get_si(B, MPFR_RNDN);
        long pa_best = 0, pb_best = 0;
        bool first = true;
        int span = (ring->d == 1) ? 0 : 1;
        for (long db = -span; db <= span; ++db) {
            long pb = pb0 + db;
            mpfr_set_si(A, ring->omega_trace * pb, MPFR_RNDN);
            mpfr_div_2ui(A, A, 1, MPFR_RNDN);
            mpfr_sub(A, wre, A, MPFR_RNDN);
            long pa0 = mpfr_get_si(A, MPFR_RNDN);
            for (long da = -span; da <= span; ++da) {
                long pa = pa0 + da;
                cand_err(pa, pb); // clobbers t1, t2
                if (first || mpfr_cmp(cand, vbest) < 0) {
                    mpfr_swap(vbest, cand);
                    pa_best = pa;
                    pb_best = pb;
                    first = false;
                }
            }
        }
        int c = mpfr_cmp(vbest, best);
        if (!have || c < 0 ||
            (c == 0 && (a < best_a || (a == best_a && b < best_b)))) {
            mpfr_set(best, vbest, MPFR_RNDN);
            best_a = a;
            best_b = b;
            best_pa = pa_best;
            best_pb = pb_best;
            have = true;
        }
    }
};

long norm_ll(const RingSpec& r, long a, long b) {
    return a * a + r.omega_trace * a * b + r.omega_norm * b * b;
}

// One representative per unit orbit: |u q z - u p| = |q z - p| for units u,
// so scanning a fundamental sector of the unit action is an exact
// reduction of the full-disc scan (the reference scans the full disc).
bool in_unit_sector(const RingSpec& r, long a, long b) {
    switch (r.d) {
    case 1: return a > 0 && b >= 0;       // quarter plane, 4 units
    case 3: return b >= 0 && a > b;       // 60-degree sector, 6 units
    default: return b > 0 || (b == 0 && a > 0); // half plane, 2 units
    }
}

struct ABRange {
    long bmax;
    double qsq;
    const RingSpec* ring;
    // inclusive a-range for a given b (overcovering; exact filter applies)
    std::pair<long, long> a_range(long b) const {
        double inner = qsq - (double)b * b * (double)ring->disc / 4.0;
        if (inner < 0) return {1, 0};
        double w = std::sqrt(inner);
        double c = -(double)ring->omega_trace * (double)b / 2.0;
        return {(long)std::floor(c - w) - 1, (long)std::ceil(c + w) + 1};
    }
};

ABRange ab_range(double Q, const RingSpec& ring) {
    double imw = std::sqrt((double)ring.disc) / 2.0;
    return {(long)std::floor(Q / imw) + 1, Q * Q * (1 + 1e-12), &ring};
}

} // namespace

std::size_t lattice_count(double Q, const RingSpec& ring) {
    ABRange r = ab_range(Q, ring);
    std::size_t n = 0;
    for (long b = -r.bmax; b <= r.bmax; ++b) {
        auto [alo, ahi] = r.a_range(b);
        for (long a = alo; a <= ahi; ++a) {
            if (a == 0 && b == 0) continue;
            if ((double)norm_ll(ring, a, b) <= r.qsq) ++n;
        }
    }
    return n;
}

DirichletHit dirichlet_search(const PComplex& z, double Q,
                              const RingSpec& ring,
                              const DirichletOptions& opts) {
    if (Q < 2) throw error("dirichlet_search: Q must be >= 2");
    ABRange range = ab_range(Q, ring);

    long ga = 0, gb = 0, gpa = 0, gpb = 0;
    bool ghave = false;
    mpfr_t gbest;
    mpfr_init2(gbest, opts.scan_prec);
    mpfr_set_inf(gbest, 1);

    auto merge = [&](ScanCtx& ctx) {
        if (!ctx.have) return;
        int c = mpfr_cmp(ctx.best, gbest);
        if (!ghave || c < 0 ||
            (c == 0 &&
             (ctx.best_a < ga || (ctx.best_a == ga && ctx.best_b < gb)))) {
            mpfr_set(gbest, ctx.best, MPFR_RNDN);
            ga = ctx.best_a;
            gb = ctx.best_b;
            gpa = ctx.best_pa;
            gpb = ctx.best_pb;
            ghave = true;
        }
    };

    if (opts.shuffle_seed != 0) {
        // Serial scan in a shuffled order; same per-point arithmetic and
        // total-order reduction, so the result must match the plain scan.
        std::vector<std::pair<long, long>> pts;
        for (long b = -range.bmax; b <= range.bmax; ++b) {
            auto [alo, ahi] = range.a_range(b);
            for (long a = alo; a <= ahi; ++a) {
                if (!in_unit_sector(ring, a, b)) continue;
                if ((double)norm_ll(ring, a, b) <= range.qsq)
                    pts.emplace_back(a, b);
            }
        }
        std::mt19937_64 rng(opts.shuffle_seed);
        std::shuffle(pts.begin(), pts.end(), rng);
        ScanCtx ctx(z, ring, opts.scan_prec);
        for (auto [a, b] : pts) ctx.visit(a, b);
        merge(ctx);
    } else {
#ifdef _OPENMP
        bool par = opts.parallel;
#else
        bool par = false;
#endif
        if (par) {
#ifdef _OPENMP
#pragma omp parallel
            {
                ScanCtx ctx(z, ring, opts.scan_prec);
#pragma omp for schedule(dynamic, 8)
                for (long b = -range.bmax; b <= range.bmax; ++b) {
                    auto [alo, ahi] = range.a_range(b);
                    for (long a = alo; a <= ahi; ++a) {
                        if (!in_unit_sector(ring, a, b)) continue;
                        if ((double)norm_ll(ring, a, b) <= range.qsq)
                            ctx.visit(a, b);
                    }
                }
#pragma omp critical
                merge(ctx);
            }
#endif
        } else {
            ScanCtx ctx(z, ring, opts.scan_prec);
            for (long b = -range.bmax; b <= range.bmax; ++b) {
                auto [alo, ahi] = range.a_range(b);
                for (long a = alo; a <= ahi; ++a) {
                    if (!in_unit_sector(ring, a, b)) continue;
                    if ((double)norm_ll(ring, a, b) <= range.qsq)
                        ctx.visit(a, b);
                }
            }
            merge(ctx);
        }
    }
    mpfr_clear(gbest);
    if (!ghave) throw error("dirichlet_search: empty scan");

    DirichletHit hit;
    hit.q = OKInt(ga, gb, ring);
    hit.p = OKInt(gpa, gpb, ring);
    // recertify the winner's error as a ball
    PComplex w = to_complex(hit.q, opts.report_prec) * z;
    hit.err = (w - to_complex(hit.p, opts.report_prec)).abs();
    hit.err_mid = hit.err.mid_d();
    return hit;
}

DirichletHit dirichlet_search_serial(const PComplex& z, double Q,
                                     const RingSpec& ring, mpfr_prec_t prec) {
    if (Q < 2) throw error("dirichlet_search: Q must be >= 2");
    ABRange range = ab_range(Q, ring);
    bool have = false;
    DirichletHit best;
    mpq_class qsq((long)std::llround(Q * Q));
    for (long b = -range.bmax; b <= range.bmax; ++b) {
        auto [alo, ahi] = range.a_range(b);
        for (long a = alo; a <= ahi; ++a) {
            if (a == 0 && b == 0) continue;
            OKInt q(a, b, ring);
            if (mpq_class(q.norm()) > qsq) continue;
            PComplex w = to_complex(q, prec) * z;
            OKInt p;
            try {
                p = nearest_integer(w, ring);
            } catch (const precision_error&) {
                // boundary tie: any of the tied choices realizes the same
                // error, so round basis-coordinate midpoints
                mpfr_t B, A, imw;
                mpfr_init2(B, prec);
                mpfr_init2(A, prec);
                mpfr_init2(imw, prec);
                mpfr_sqrt_ui(imw, ring.disc, MPFR_RNDN);
                mpfr_div_2ui(imw, imw, 1, MPFR_RNDN);
                mpfr_div(B, w.im().mid_raw(), imw, MPFR_RNDN);
                long pb = mpfr_get_si(B, MPFR_RNDN);
                mpfr_set_si(A, ring.omega_trace * pb, MPFR_RNDN);
                mpfr_div_2ui(A, A, 1, MPFR_RNDN);
                mpfr_sub(A, w.re().mid_raw(), A, MPFR_RNDN);
                long pa = mpfr_get_si(A, MPFR_RNDN);
                mpfr_clear(B);
                mpfr_clear(A);
                mpfr_clear(imw);
                p = OKInt(pa, pb, ring);
            }
            PReal e = (w - to_complex(p, prec)).abs();
            bool take = false;
            if (!have) {
                take = true;
            } else {
                mpfr_t eu, bu;
                mpfr_init2(eu, prec);
                mpfr_init2(bu, prec);
                e.upper(eu);
                best.err.upper(bu);
                int c = mpfr_cmp(eu, bu);
                take = c < 0 || (c == 0 && q.lex_less(best.q));
                mpfr_clear(eu);
                mpfr_clear(bu);
            }
            if (take) {
                best.q = q;
                best.p = p;
                best.err = e;
                have = true;
            }
        }
    }
    if (!have) throw error("dirichlet_search: empty scan");
    best.err_mid = best.err.mid_d();
    return best;
}

bool mat2_lex_less(const Mat2& a, const Mat2& b) {
    auto key = [](const Mat2& m) {
        return std::array<const OKInt*, 4>{&m.v1(), &m.u1(), &m.v2(), &m.u2()};
    };
    auto ka = key(a), kb = key(b);
    for (int i = 0; i < 4; ++i) {
        if (*ka[i] == *kb[i]) continue;
        return ka[i]->lex_less(*kb[i]);
    }
    return false;
}

std::vector<Mat2> sl2_ball_naive(const RingSpec& ring, long H) {
    // all entries with norm <= H^2
    std::vector<OKInt> pts;
    long span = (long)std::ceil(2.0 * H / std::sqrt((double)ring.disc)) + 1;
    for (long b = -span; b <= span; ++b)
        for (long a = -2 * H - 2; a <= 2 * H + 2; ++a)
            if (norm_ll(ring, a, b) <= H * H) pts.emplace_back(a, b, ring);
    std::vector<Mat2> out;
    for (const OKInt& v1 : pts)
        for (const OKInt& u1 : pts)
            for (const OKInt& v2 : pts)
                for (const OKInt& u2 : pts) {
                    Mat2 m(v1, u1, v2, u2);
                    if (m.is_unimodular()) out.push_back(m);
                }
    return out;
}

namespace {

// Enumerates top rows over the translate family (v1, u1) =
// (v10 + t v2, u10 + t u2) with both entry norms <= H^2.
template <typename F>
void visit_translates(const RingSpec& ring, long H, const OKInt& v10,
                      const OKInt& u10, const OKInt& v2, const OKInt& u2,
                      F&& emit) {
    // t lies within distance H/|v2| of -v10/v2 (the v-constraint); the
    // u-constraint filters afterwards. Window in basis coordinates with a
    // generous margin; exact norm checks keep only the valid ones.
    double imw = std::sqrt((double)ring.disc) / 2.0;
    double v2n = (double)mpz_get_d(v2.norm().get_mpz_t());
    double r = (double)H / std::sqrt(v2n) + 1.5;
    // center = -v10 * conj(v2) / norm(v2)
    OKInt num = -(v10 * v2.conj());
    double cx = (mpz_get_d(num.a().get_mpz_t()) +
                 ring.omega_trace * mpz_get_d(num.b().get_mpz_t()) / 2.0) /
                v2n;
    double cy = mpz_get_d(num.b().get_mpz_t()) * imw / v2n;
    long b_lo = (long)std::floor((cy - r) / imw) - 1;
    long b_hi = (long)std::ceil((cy + r) / imw) + 1;
    mpz_class H2(H);
    H2 *= H;
    for (long tb = b_lo; tb <= b_hi; ++tb) {
        double ax = cx - ring.omega_trace * (double)tb / 2.0;
        long a_lo = (long)std::floor(ax - r) - 1;
        long a_hi = (long)std::ceil(ax + r) + 1;
        for (long ta = a_lo; ta <= a_hi; ++ta) {
            OKInt t(ta, tb, ring);
            OKInt v1 = v10 + t * v2;
            if (v1.norm() > H2) continue;
            OKInt u1 = u10 + t * u2;
            if (u1.norm() > H2) continue;
            emit(Mat2(v1, u1, v2, u2));
        }
    }
}

template <typename F>
void sl2_ball_visit(const RingSpec& ring, long H, std::size_t budget,
                    F&& emit) {
    std::vector<OKInt> pts;
    long span = (long)std::ceil(2.0 * H / std::sqrt((double)ring.disc)) + 1;
    for (long b = -span; b <= span; ++b)
        for (long a = -2 * H - 2; a <= 2 * H + 2; ++a)
            if (norm_ll(ring, a, b) <= H * H) pts.emplace_back(a, b, ring);

    mpz_class H2(H);
    H2 *= H;
    std::size_t count = 0;
    auto counted_emit = [&](const Mat2& m) {
        if (++count > budget)
            throw budget_error("sl2 ball enumeration exceeded its budget");
        emit(m);
    };

    for (const OKInt& v2 : pts) {
        for (const OKInt& u2 : pts) {
            if (v2.is_zero() && u2.is_zero()) continue;
            if (v2.is_zero()) {
                // det = v1 u2 = 1: u2 a unit, v1 = u2^{-1}, u1 free
                if (!u2.is_unit()) continue;
                OKInt v1 = u2.unit_inverse();
                for (const OKInt& u1 : pts)
                    counted_emit(Mat2(v1, u1, v2, u2));
                continue;
            }
            if (u2.is_zero()) {
                // det = -u1 v2 = 1: v2 a unit, u1 = -v2^{-1}, v1 free
                if (!v2.is_unit()) continue;
                OKInt u1 = -v2.unit_inverse();
                for (const OKInt& v1 : pts)
                    counted_emit(Mat2(v1, u1, v2, u2));
                continue;
            }
            ExtendedGcd e = extended_gcd(u2, v2);
            if (!e.g.is_unit()) continue;
            OKInt ginv = e.g.unit_inverse();
            OKInt v10 = e.x * ginv;
            OKInt u10 = -(e.y * ginv);
            visit_translates(ring, H, v10, u10, v2, u2, counted_emit);
        }
    }
}

} // namespace

std::vector<Mat2> sl2_ball_structured(const RingSpec& ring, long H,
                                      std::size_t budget) {
    std::vector<Mat2> out;
    sl2_ball_visit(ring, H, budget, [&](const Mat2& m) { out.push_back(m); });
    return out;
}

Sl2BallStats sl2_ball_min_error(const RingSpec& ring, long H, const Vec2& z,
                                const Vec2& y, const Sl2BallOptions& opts) {
    // Materialize bottom-row work items first so OpenMP can shard them.
    std::vector<Mat2> all = sl2_ball_structured(ring, H, opts.budget);

    Sl2BallStats stats;
    stats.count = all.size();
    if (all.empty()) throw error("sl2_ball_min_error: empty ball");

    mpfr_prec_t prec = opts.prec;
    struct Best {
        bool have = false;
        std::size_t idx = 0;
        PReal err;
        double lower = HUGE_VAL;
    };

    auto eval = [&](std::size_t i, Best& b) {
        Vec2 gz = all[i].apply(z, prec);
        PReal e = ball_max((gz.x1 - y.x1).abs(), (gz.x2 - y.x2).abs());
        double lo = e.lower_d();
        if (lo < b.lower) b.lower = lo;
        bool take = false;
        if (!b.have) {
            take = true;
        } else {
            mpfr_t eu, bu;
            mpfr_init2(eu, prec);
            mpfr_init2(bu, prec);
            e.upper(eu);
            b.err.upper(bu);
            int c = mpfr_cmp(eu, bu);
            take = c < 0 || (c == 0 && mat2_lex_less(all[i], all[b.idx]));
            mpfr_clear(eu);
            mpfr_clear(bu);
        }
        if (take) {
            b.err = e;
            b.idx = i;
            b.have = true;
        }
    };

    Best global;
#ifdef _OPENMP
    if (opts.parallel) {
#pragma omp parallel
        {
            Best local;
#pragma omp for schedule(dynamic, 64)
            for (long i = 0; i < (long)all.size(); ++i)
                eval((std::size_t)i, local);
#pragma omp critical
            {
                if (local.have) {
                    if (local.lower < global.lower)
                        global.lower = local.lower;
                    bool take = false;
                    if (!global.have) {
                        take = true;
                    } else {
                        mpfr_t eu, bu;
                        mpfr_init2(eu, prec);
                        mpfr_init2(bu, prec);
                        local.err.upper(eu);
                        global.err.upper(bu);
                        int c = mpfr_cmp(eu, bu);
                        take = c < 0 ||
                               (c == 0 && mat2_lex_less(all[local.idx],
                                                        all[global.idx]));
                        mpfr_clear(eu);
                        mpfr_clear(bu);
                    }
                    if (take) {
                        global.err = local.err;
                        global.idx = local.idx;
                        global.have = true;
                    }
                }
            }
        }
    } else
#endif
    {
        for (std::size_t i = 0; i < all.size(); ++i) eval(i, global);
    }

    stats.argmin = all[global.idx];
    stats.err = global.err;
    stats.min_err_lower = global.lower;
    stats.min_err_mid = global.err.mid_d();
    return stats;
}

} // namespace okcf
