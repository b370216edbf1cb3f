#pragma once

#include <string>
#include <vector>

#include "okcf/kernels.hpp"

namespace okcf {

/// One approximation event |gamma z - y| at height |gamma|.
struct OrbitRecord {
    std::string cls; // origin | rational | irrational | synthetic
    int d = 1;
    int k = -1, j = -1;
    OKInt ell;
    double height = 0, err = 0;
    double log_height = 0, log_err = 0; // natural logs
    double predicted = 0;
    double measured_const = 0;
};

OrbitRecord to_record(const GammaResult& r, int d);

struct MuEstimate {
    double mu_emp = 0;       // max of -log err / log height, top window
    int argmax_index = -1;
    double mu_fit = 0;       // minus the least-squares slope
    double fit_residual = 0; // rms residual of the fit
    int n_used = 0;
    int window_count = 0;
    double window_decades = 1.0;
};

/// Operationalizes the asymptotic exponent: the supremum over infinitely
/// many events becomes a max over the top height-decade window, with the
/// log-log regression slope as a diagnostic. Needs >= 10 distinct heights.
MuEstimate estimate_mu(const std::vector<OrbitRecord>& records,
                       double window_decades = 1.0);

struct MuHatRow {
    double T = 0;
    double best_err = 0; // min err over height <= T
    double ratio = 0;    // -log best_err / log T
    bool empty = false;  // no record below this threshold
};

struct MuHatEstimate {
    double mu_hat = 0; // min of ratio over the tail grid
    std::vector<MuHatRow> table;
    std::size_t tail_begin = 0;
    std::vector<std::string> warnings;
};

/// Uniform exponent surrogate: geometric T-grid spanning the heights,
/// best error within each ball, estimate throttled by the worst tail T.
MuHatEstimate estimate_mu_hat(const std::vector<OrbitRecord>& records,
                              double grid_ratio = 2.0,
                              double tail_fraction = 0.5);

/// Synthetic stream err = c * height^(-s) with c log-uniform in
/// [cmin, cmax]; heights log-uniform. Estimator calibration oracle.
std::vector<OrbitRecord> synthetic_stream(double s, double cmin, double cmax,
                                          int n, std::uint64_t seed,
                                          double hmin = 8.0,
                                          double hmax = 1e9);

struct OmegaEstimate {
    double omega = 0; // max over the tail of log|q_{n+1}| / log|q_n|
    int argmax_index = -1;
};

/// Growth-exponent proxy for the K-irrationality measure, from the exact
/// denominator norms of an expansion.
OmegaEstimate omega_K_estimate(const CFExpansion& exp, int tail_start = 5);

/// Closed-form bounds evaluated in exact rational arithmetic.
struct PredictedBounds {
    mpq_class origin_mu;        // 1
    mpq_class origin_mu_hat_lo; // 1/omega_xi
    mpq_class origin_mu_hat_hi; // 1
    mpq_class irr_mu_lo;        // (1 + 4w - 3w^r1) / (3w (w^(r1-1) + 1))
    mpq_class irr_mu_hat_lo;    // ((2 - w^(r1-1)) wy + 1) /
                                //   ((2 wy + 1)(w + w^r1))
    mpq_class irr_mu_hi;        // 1/2 for generic targets
    mpq_class rat_mu_lo;        // 1/(w^(r1-1) + 1)
    mpq_class rat_mu_hat_lo;    // 1/(w^r1 + 1)
    mpq_class rat_mu_hi;        // w/(w + 1)
    mpq_class tau;              // wy/(2 wy + 1) * w^(r1-1)
    bool omega_in_range = true;        // 1 <= w < 3
    bool tau_lt_one = true;            // w^(r1-1) < 2
    bool irr_exponent_positive = true; // 1/(3w) + 4/3 - w^(r1-1) > 0
};

PredictedBounds predicted_bounds(const mpq_class& omega_xi,
                                 const mpq_class& omega_y,
                                 const CFConstants& cs);

struct InhomPair {
    OKInt q, p;
    PReal err; // |q xi + p - y|
    int k = -1;
    double height = 0; // |gamma| the pair was cut from
};

/// Minkowski-style inhomogeneous approximation: runs the rational-slope
/// construction on z = (xi, 1), y = (y, y) and extracts the better row of
/// the largest gamma with |gamma| <= T.
InhomPair inhomogeneous_pair(const CFExpansion& exp_xi, const Vec2& z_orig,
                             bool z_flipped, const PComplex& y, double T,
                             const mpq_class& omega);

struct FloorCheckReport {
    long H = 0;
    std::size_t enumerated = 0;
    double min_err_lower = 0; // certified lower bound over the whole ball
    double min_err_mid = 0;
    Mat2 argmin;
    struct KRow {
        int k = -1;
        bool applicable = false; // ball bound covers this k
        double floor_val = 0;
        double margin = 0; // min_err / floor
        bool holds = false;
    };
    std::vector<KRow> rows;
    bool pass = false;
    double tightest_margin = 0;
};

/// Enumerates the height ball |gamma| <= H and checks the residual floor
/// |gamma z - y| >= |z2/(3b)| / |q_k| for every k whose ball condition
/// (1/(3 C1)) |y2/z2| |q_k q_{k+1}| >= H applies. `planted_min_err`
/// (>= 0) substitutes a fabricated minimum, as a negative control of the
/// comparison logic.
FloorCheckReport residual_floor_check(const CFExpansion& exp_z, const Vec2& z,
                                      const OKInt& a, const OKInt& b, long H,
                                      const Sl2BallOptions& opts = {},
                                      double planted_min_err = -1.0);

} // namespace okcf
