#pragma once

#include <optional>
#include <vector>

#include "okcf/cf.hpp"
#include "okcf/pcomplex.hpp"

namespace okcf {

/// Element of SL2(O_K), rows (v1 u1; v2 u2).
class Mat2 {
public:
    Mat2() = default;
    Mat2(OKInt v1, OKInt u1, OKInt v2, OKInt u2)
        : v1_(std::move(v1)), u1_(std::move(u1)), v2_(std::move(v2)),
          u2_(std::move(u2)) {}

    static Mat2 identity(const RingSpec& ring) {
        return {OKInt::one(ring), OKInt::zero(ring), OKInt::zero(ring),
                OKInt::one(ring)};
    }
    /// J = (0 -1; 1 0); |Jz| = |z| and J gamma has the height of gamma.
    static Mat2 J(const RingSpec& ring) {
        return {OKInt::zero(ring), -OKInt::one(ring), OKInt::one(ring),
                OKInt::zero(ring)};
    }
    /// Upper unipotent U^ell = (1 ell; 0 1).
    static Mat2 U(const OKInt& ell) {
        const RingSpec& ring = ell.ring();
        return {OKInt::one(ring), ell, OKInt::zero(ring), OKInt::one(ring)};
    }

    const OKInt& v1() const { return v1_; }
    const OKInt& u1() const { return u1_; }
    const OKInt& v2() const { return v2_; }
    const OKInt& u2() const { return u2_; }

    OKInt det() const { return v1_ * u2_ - u1_ * v2_; }
    bool is_unimodular() const { return det() == OKInt::one(v1_.ring()); }

    Mat2 operator*(const Mat2& o) const {
        return {v1_ * o.v1_ + u1_ * o.v2_, v1_ * o.u1_ + u1_ * o.u2_,
                v2_ * o.v1_ + u2_ * o.v2_, v2_ * o.u1_ + u2_ * o.u2_};
    }

    Mat2 inverse() const { // for det 1: (u2 -u1; -v2 v1)
        return {u2_, -u1_, -v2_, v1_};
    }

    bool operator==(const Mat2& o) const {
        return v1_ == o.v1_ && u1_ == o.u1_ && v2_ == o.v2_ && u2_ == o.u2_;
    }

    /// Exact squared height: max of the entry norms.
    mpz_class height_norm_sq() const {
        mpz_class m = v1_.norm();
        for (const mpz_class& n :
             {u1_.norm(), v2_.norm(), u2_.norm()})
            if (n > m) m = n;
        return m;
    }
    PReal height(mpfr_prec_t prec) const {
        return PReal::sqrt_mpz(height_norm_sq(), prec);
    }

    Vec2 apply(const Vec2& z, mpfr_prec_t prec) const {
        return {to_complex(v1_, prec) * z.x1 + to_complex(u1_, prec) * z.x2,
                to_complex(v2_, prec) * z.x1 + to_complex(u2_, prec) * z.x2};
    }

private:
    OKInt v1_, u1_, v2_, u2_;
};

/// M_k = (q_k  -p_k; (-1)^{k-1} q_{k-1}  (-1)^k p_{k-1}); det 1 exactly.
Mat2 convergent_matrix(const CFExpansion& exp, int k);

/// Flips z by J when the slope is certified above 1 in modulus; within the
/// documented tolerance an overlapping comparison counts as already <= 1.
std::pair<Vec2, bool> normalize_slope(const Vec2& z);

/// N = (a a'; b b') with det 1 and |b'| <= |b|, via the Bezout cofactor
/// reduced by a nearest-integer multiple of b. Requires max{1,|a|} <= |b|.
Mat2 target_matrix_rational(const OKInt& a, const OKInt& b);

/// N_j = (t_j (-1)^{j-1} t_{j-1}; s_j (-1)^{j-1} s_{j-1}) from the target
/// slope expansion; det 1 exactly.
Mat2 target_matrix_irrational(const CFExpansion& exp_y, int j);

/// rho = (-1)^{k-1} y2/(z2 s eps_{k-1}) - (-1)^{k-1} eps_k/eps_{k-1} - s'/s
/// with (s, s') the bottom row of N.
PComplex rho(const CFExpansion& exp_z, int k, const Mat2& N,
             const PComplex& z2, const PComplex& y2);

struct EllChoice {
    OKInt ell;
    bool within_radius = false; // certified |ell - rho| <= 2*cover
    bool norm_ok = false;       // |ell| <= |rho| not certified-violated
    bool relaxed = false;       // no candidate satisfied the norm constraint
};

/// Lattice point near rho subject to |ell| <= |rho|: enumerate points within
/// twice the covering radius, keep those not certified to violate the norm
/// constraint, take the one minimizing |ell - rho| (deterministic order).
/// Falls back to the plain nearest point, flagged, if the filter is empty.
EllChoice choose_ell(const PComplex& rho_val, const RingSpec& ring);

/// gamma = N U^ell M_k, exact product.
Mat2 build_gamma(const Mat2& N, const OKInt& ell, const Mat2& Mk);

/// Residual (Lambda1, Lambda2) = gamma z - y, computed both directly and
/// through the slope identity and cross-checked within the combined radii.
std::pair<PComplex, PComplex> residual(const Mat2& gamma, const Vec2& z,
                                       const Vec2& y);

enum class TargetClass { kOrigin, kRationalSlope, kIrrationalSlope };

struct GammaResult {
    TargetClass cls = TargetClass::kOrigin;
    int k = -1;
    int j = -1;
    Mat2 gamma;
    OKInt ell;
    PComplex rho_val;
    PComplex lam1, lam2;
    PReal err;                // sup norm of the residual
    PReal height;             // |gamma| as a ball over the exact norm
    mpz_class height_norm_sq; // exact
    PReal height_lb, height_ub; // predicted height-bound shapes
    PReal predicted;            // predicted residual-bound shape
    double measured_const = 0;  // err / predicted, midpoints
    double measured_height_const = 0; // height / height_lb, midpoints
    bool ell_within_radius = false, ell_norm_ok = false, ell_relaxed = false;
    bool origin_bound_certified = false; // (only origin class)
    // Whether |ell| >= |y2 q_k/(C1 z2 s)| - (C3 + 2) held (recorded, not
    // enforced; the derivation only covers large k).
    bool ell_range_lb_holds = false;
};

/// gamma = M_k aimed at the origin; checks |M_k z| <= |z| C1/|q_k|.
GammaResult gamma_origin(const CFExpansion& exp_z, int k, const Vec2& z);

/// Rational-slope target: gamma = N U^ell M_k for the point `yv` whose
/// slope is a/b (yv = lambda (a, b)). Requires a normalized coprime pair
/// (max{1,|a|} <= |b|) and slope-normalized z matching exp_z.
GammaResult gamma_rational(const CFExpansion& exp_z, const OKInt& a,
                           const OKInt& b, const Vec2& z, const Vec2& yv,
                           const mpq_class& omega, int k);

/// Convenience: target point (a, b) itself.
GammaResult gamma_rational(const CFExpansion& exp_z, const OKInt& a,
                           const OKInt& b, const Vec2& z,
                           const mpq_class& omega, int k);

/// All pairs (j, k) with |q_{k-1}|^{1/3} < |s_j| <= |q_k|^{1/3} < |s_{j+1}|,
/// decided by exact integer comparisons norm(q)^1 vs norm(s)^3.
std::vector<std::pair<int, int>> select_indices(const CFExpansion& exp_z,
                                                const CFExpansion& exp_y);

/// Irrational-slope target: gamma = N_j U^ell M_k for an admissible (j, k).
GammaResult gamma_irrational(const CFExpansion& exp_z,
                             const CFExpansion& exp_y, int j, int k,
                             const Vec2& z, const Vec2& y,
                             const mpq_class& omega);

/// Rebase a result built against (J^s z, J^t y) to the original pair:
/// gamma <- J^{-t} gamma J^{s}, residuals recomputed against (z, y).
GammaResult unnormalize(GammaResult r, bool z_flipped, bool y_flipped,
                        const Vec2& z, const Vec2& y);

} // namespace okcf
