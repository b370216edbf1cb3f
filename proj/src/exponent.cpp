#include "okcf/exponent.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace okcf {

namespace {

double log_mpz(const mpz_class& n) {
    // exact integer -> double log via a short mpfr round-trip
    mpfr_t t;
    mpfr_init2(t, 64);
    mpfr_set_z(t, n.get_mpz_t(), MPFR_RNDN);
    mpfr_log(t, t, MPFR_RNDN);
    double v = mpfr_get_d(t, MPFR_RNDN);
    mpfr_clear(t);
    return v;
}

mpq_class mpq_pow(const mpq_class& x, int e) {
    mpq_class r(1);
    for (int i = 0; i < e; ++i) r *= x;
    r.canonicalize();
    return r;
}

const char* class_name(TargetClass c) {
    switch (c) {
    case TargetClass::kOrigin: return "origin";
    case TargetClass::kRationalSlope: return "rational";
    case TargetClass::kIrrationalSlope: return "irrational";
    }
    return "?";
}

} // namespace

OrbitRecord to_record(const GammaResult& r, int d) {
    OrbitRecord rec;
    rec.cls = class_name(r.cls);
    rec.d = d;
    rec.k = r.k;
    rec.j = r.j;
    rec.ell = r.ell;
    rec.log_height = 0.5 * log_mpz(r.height_norm_sq);
    rec.height = std::exp(rec.log_height);
    rec.err = r.err.mid_d();
    rec.log_err = std::log(rec.err);
    rec.predicted = r.predicted.mid_d();
    rec.measured_const = r.measured_const;
    return rec;
}

MuEstimate estimate_mu(const std::vector<OrbitRecord>& records,
                       double window_decades) {
    std::set<double> heights;
    for (const auto& r : records)
        if (r.height > 1.0) heights.insert(r.height);
    if (heights.size() < 10)
        throw insufficient_data_error(
            "estimate_mu: need >= 10 records with distinct heights > 1");

    MuEstimate est;
    est.window_decades = window_decades;
    double max_log10 = 0;
    for (const auto& r : records)
        max_log10 = std::max(max_log10, r.log_height / std::log(10.0));

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int n = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (!(r.height > 1.0) || !(r.err > 0.0)) continue;
        double x = r.log_height, y = r.log_err;
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++n;
        if (x / std::log(10.0) >= max_log10 - window_decades) {
            double ratio = -y / x;
            if (est.window_count == 0 || ratio > est.mu_emp) {
                est.mu_emp = ratio;
                est.argmax_index = (int)i;
            }
            ++est.window_count;
        }
    }
    est.n_used = n;
    double denom = n * sxx - sx * sx;
    double slope = denom != 0 ? (n * sxy - sx * sy) / denom : 0.0;
    est.mu_fit = -slope;
    double icept = (sy - slope * sx) / n;
    double ss = 0;
    for (const auto& r : records) {
        if (!(r.height > 1.0) || !(r.err > 0.0)) continue;
        double res = r.log_err - (icept + slope * r.log_height);
        ss += res * res;
    }
    est.fit_residual = std::sqrt(ss / n);
    return est;
}

MuHatEstimate estimate_mu_hat(const std::vector<OrbitRecord>& records,
                              double grid_ratio, double tail_fraction) {
    std::vector<std::pair<double, double>> pts; // (height, err)
    for (const auto& r : records)
        if (r.height > 1.0 && r.err > 0.0) pts.emplace_back(r.height, r.err);
    if (pts.size() < 4)
        throw insufficient_data_error("estimate_mu_hat: too few records");
    std::sort(pts.begin(), pts.end());
    std::vector<double> prefix_min(pts.size());
    double m = HUGE_VAL;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        m = std::min(m, pts[i].second);
        prefix_min[i] = m;
    }
    double hmin = pts.front().first, hmax = pts.back().first;

    MuHatEstimate est;
    for (double T = 2.0 * hmin; T <= hmax * 1.0000001; T *= grid_ratio) {
        MuHatRow row;
        row.T = T;
        auto it = std::upper_bound(
            pts.begin(), pts.end(), std::make_pair(T, HUGE_VAL));
        if (it == pts.begin()) {
            row.empty = true;
            est.warnings.push_back("no record below T = " +
                                   std::to_string(T));
        } else {
            row.best_err = prefix_min[(std::size_t)(it - pts.begin()) - 1];
            row.ratio = -std::log(row.best_err) / std::log(T);
        }
        est.table.push_back(row);
    }
    if (est.table.empty())
        throw insufficient_data_error("estimate_mu_hat: empty grid");

    std::size_t tail_count = (std::size_t)std::ceil(
        tail_fraction * (double)est.table.size());
    tail_count = std::max<std::size_t>(1, std::min(tail_count,
                                                   est.table.size()));
    est.tail_begin = est.table.size() - tail_count;
    bool have = false;
    for (std::size_t i = est.tail_begin; i < est.table.size(); ++i) {
        if (est.table[i].empty) continue;
        if (!have || est.table[i].ratio < est.mu_hat) {
            est.mu_hat = est.table[i].ratio;
            have = true;
        }
    }
    if (!have)
        throw insufficient_data_error("estimate_mu_hat: tail grid empty");
    return est;
}

std::vector<OrbitRecord> synthetic_stream(double s, double cmin, double cmax,
                                          int n, std::uint64_t seed,
                                          double hmin, double hmax) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uh(std::log(hmin), std::log(hmax));
    std::uniform_real_distribution<double> uc(std::log(cmin), std::log(cmax));
    std::vector<OrbitRecord> out;
    out.reserve((std::size_t)n);
    for (int i = 0; i < n; ++i) {
        OrbitRecord r;
        r.cls = "synthetic";
        r.log_height = uh(rng);
        r.height = std::exp(r.log_height);
        double c = std::exp(uc(rng));
        r.err = c * std::pow(r.height, -s);
        r.log_err = std::log(r.err);
        out.push_back(r);
    }
    return out;
}

OmegaEstimate omega_K_estimate(const CFExpansion& exp, int tail_start) {
    if (exp.size() < 10)
        throw insufficient_data_error("omega_K_estimate: depth < 10");
    OmegaEstimate est;
    for (int n = std::max(1, tail_start); n + 1 < exp.size(); ++n) {
        mpz_class n0 = exp.q(n).norm();
        if (n0 <= 1) continue;
        double r = log_mpz(exp.q(n + 1).norm()) / log_mpz(n0);
        if (est.argmax_index < 0 || r > est.omega) {
            est.omega = r;
            est.argmax_index = n;
        }
    }
    if (est.argmax_index < 0)
        throw insufficient_data_error("omega_K_estimate: no usable indices");
    return est;
}

PredictedBounds predicted_bounds(const mpq_class& omega_xi,
                                 const mpq_class& omega_y,
                                 const CFConstants& cs) {
    if (omega_xi < 1 || omega_y < 1)
        throw error("predicted_bounds: omega measures must be >= 1");
    const mpq_class& w = omega_xi;
    const mpq_class& wy = omega_y;
    mpq_class wr1 = mpq_pow(w, cs.r1);        // w^r1
    mpq_class wr1m = mpq_pow(w, cs.r1 - 1);   // w^(r1-1)

    PredictedBounds b;
    b.origin_mu = 1;
    b.origin_mu_hat_lo = mpq_class(1) / w;
    b.origin_mu_hat_hi = 1;
    b.irr_mu_lo = (1 + 4 * w - 3 * wr1) / (3 * w * (wr1m + 1));
    b.irr_mu_hat_lo =
        ((2 - wr1m) * wy + 1) / ((2 * wy + 1) * (w + wr1));
    b.irr_mu_hi = mpq_class(1, 2);
    b.rat_mu_lo = mpq_class(1) / (wr1m + 1);
    b.rat_mu_hat_lo = mpq_class(1) / (wr1 + 1);
    b.rat_mu_hi = w / (w + 1);
    b.tau = wy / (2 * wy + 1) * wr1m;
    for (mpq_class* q :
         {&b.origin_mu, &b.origin_mu_hat_lo, &b.origin_mu_hat_hi,
          &b.irr_mu_lo, &b.irr_mu_hat_lo, &b.irr_mu_hi, &b.rat_mu_lo,
          &b.rat_mu_hat_lo, &b.rat_mu_hi, &b.tau})
        q->canonicalize();
    b.omega_in_range = (w >= 1 && w < 3);
    b.tau_lt_one = (wr1m < 2);
    b.irr_exponent_positive =
        (mpq_class(1) / (3 * w) + mpq_class(4, 3) - wr1m > 0);
    return b;
}

InhomPair inhomogeneous_pair(const CFExpansion& exp_xi, const Vec2& z_orig,
                             bool z_flipped, const PComplex& y, double T,
                             const mpq_class& omega) {
    const RingSpec& ring = exp_xi.ring();
    mpfr_prec_t prec = exp_xi.prec();
    Vec2 z_norm{exp_xi.value() * z_orig.x2, z_orig.x2};
    if (z_flipped) {
        // exp_xi expands the flipped slope; reconstruct the normalized pair
        z_norm = Vec2{-z_orig.x2, z_orig.x1};
    }
    Vec2 yv{y, y};

    // largest k whose gamma stays within the height cap
    GammaResult best;
    bool have = false;
    for (int k = 1; k + 1 < exp_xi.size(); ++k) {
        GammaResult r;
        try {
            r = gamma_rational(exp_xi, OKInt::one(ring), OKInt::one(ring),
                               z_norm, yv, omega, k);
        } catch (const near_zero_error&) {
            continue;
        }
        mpz_class t2((long)T);
        t2 *= (long)T;
        if (r.height_norm_sq <= t2) {
            best = r;
            have = true;
        } else if (have) {
            break;
        }
    }
    if (!have)
        throw insufficient_data_error(
            "inhomogeneous_pair: no gamma within the height cap; raise T");
    GammaResult eff = unnormalize(best, z_flipped, false, z_orig, yv);

    // rows of gamma as (q, p); keep the better one
    auto row_err = [&](const OKInt& q, const OKInt& p) {
        return (to_complex(q, prec) * z_orig.x1 / z_orig.x2 +
                to_complex(p, prec) - y)
            .abs();
    };
    InhomPair out;
    out.k = best.k;
    out.height = std::sqrt(mpz_get_d(eff.gamma.height_norm_sq().get_mpz_t()));
    PReal e1 = row_err(eff.gamma.v1(), eff.gamma.u1());
    PReal e2 = row_err(eff.gamma.v2(), eff.gamma.u2());
    if (e1.mid_d() <= e2.mid_d()) {
        out.q = eff.gamma.v1();
        out.p = eff.gamma.u1();
        out.err = e1;
    } else {
        out.q = eff.gamma.v2();
        out.p = eff.gamma.u2();
        out.err = e2;
    }
    return out;
}

FloorCheckReport residual_floor_check(const CFExpansion& exp_z, const Vec2& z,
                                      const OKInt& a, const OKInt& b, long H,
                                      const Sl2BallOptions& opts,
                                      double planted_min_err) {
    const RingSpec& ring = exp_z.ring();
    mpfr_prec_t prec = exp_z.prec();
    Vec2 y{to_complex(a, prec), to_complex(b, prec)};

    FloorCheckReport rep;
    rep.H = H;
    Sl2BallStats stats = sl2_ball_min_error(ring, H, z, y, opts);
    rep.enumerated = stats.count;
    rep.argmin = stats.argmin;
    rep.min_err_lower = stats.min_err_lower;
    rep.min_err_mid = stats.min_err_mid;
    if (planted_min_err >= 0) {
        rep.min_err_lower = planted_min_err;
        rep.min_err_mid = planted_min_err;
    }

    CFConstants cs = constants(ring);
    PReal c1 = PReal::from_quad(cs.c1, prec);
    PReal babs = PReal::sqrt_mpz(b.norm(), prec);
    PReal z2abs = z.x2.abs();
    rep.pass = true;
    rep.tightest_margin = HUGE_VAL;
    for (int k = 0; k + 1 < exp_z.size(); ++k) {
        FloorCheckReport::KRow row;
        row.k = k;
        // ball condition: (1/(3 C1)) |y2/z2| |q_k q_{k+1}| >= H
        PReal cond = babs / z2abs / (c1 * 3) * exp_z.q_abs(k) *
                     exp_z.q_abs(k + 1);
        row.applicable = cond.lower_d() >= (double)H;
        PReal floor_ball = z2abs / (babs * 3) / exp_z.q_abs(k);
        row.floor_val = floor_ball.mid_d();
        row.margin = rep.min_err_mid / row.floor_val;
        row.holds = rep.min_err_lower >= floor_ball.upper_d();
        if (row.applicable) {
            rep.pass = rep.pass && row.holds;
            rep.tightest_margin = std::min(rep.tightest_margin, row.margin);
        }
        rep.rows.push_back(row);
    }
    return rep;
}

} // namespace okcf
