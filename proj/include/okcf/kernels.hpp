#pragma once

#include <cstdint>
#include <vector>

#include "okcf/matrix.hpp"

namespace okcf {

struct DirichletHit {
    OKInt q, p;
    PReal err;          // certified ball at the report precision
    double err_mid = 0; // midpoint convenience
};

struct DirichletOptions {
    bool parallel = true;
    mpfr_prec_t scan_prec = 64;    // midpoint precision in the hot loop
    mpfr_prec_t report_prec = 256; // winner recertification
    std::uint64_t shuffle_seed = 0; // nonzero: serial scan in shuffled order
};

/// Exhaustive scan over q in O_K with 0 < |q| <= Q, p = nearest integer to
/// q*z, minimizing |q z - p|. The reduction key (error midpoint, then lex
/// coefficients) is a total order, so the result does not depend on the
/// thread count or iteration order.
DirichletHit dirichlet_search(const PComplex& z, double Q,
                              const RingSpec& ring,
                              const DirichletOptions& opts = {});

/// Single-threaded reference in full ball arithmetic; kept for testing the
/// kernel and for rings where certified scanning is wanted wholesale.
DirichletHit dirichlet_search_serial(const PComplex& z, double Q,
                                     const RingSpec& ring,
                                     mpfr_prec_t prec = 192);

/// Number of nonzero q with |q| <= Q (exact norm filter).
std::size_t lattice_count(double Q, const RingSpec& ring);

struct Sl2BallOptions {
    std::size_t budget = 10'000'000; // candidate cap before budget_error
    bool parallel = true;
    mpfr_prec_t prec = 128;
};

struct Sl2BallStats {
    std::size_t count = 0; // matrices with |gamma| <= H
    Mat2 argmin;
    PReal err;              // residual of argmin (ball)
    double min_err_lower = 0; // certified lower bound over the whole ball
    double min_err_mid = 0;
};

/// Minimum of |gamma z - y| (sup norm) over all gamma in SL2(O_K) with
/// |gamma| <= H. Structured enumeration: coprime bottom rows, top row from
/// the Bezout solution plus unipotent translates. OpenMP over bottom rows.
Sl2BallStats sl2_ball_min_error(const RingSpec& ring, long H, const Vec2& z,
                                const Vec2& y,
                                const Sl2BallOptions& opts = {});

/// Theta(P^4) filter over all entry quadruples; the enumeration oracle for
/// small H.
std::vector<Mat2> sl2_ball_naive(const RingSpec& ring, long H);

/// Materialized structured enumeration (same set as the naive oracle).
std::vector<Mat2> sl2_ball_structured(const RingSpec& ring, long H,
                                      std::size_t budget = 10'000'000);

/// Deterministic order for comparing enumerations.
bool mat2_lex_less(const Mat2& a, const Mat2& b);

} // namespace okcf
