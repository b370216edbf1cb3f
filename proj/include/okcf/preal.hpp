#pragma once

#include <gmpxx.h>
#include <mpfr.h>
#include <string>

#include "okcf/errors.hpp"
#include "okcf/quadval.hpp"

namespace okcf {

/// Ball-arithmetic real: a midpoint at `prec` bits plus an error radius that
/// is propagated conservatively (never underestimated) through every
/// operation. Comparisons that cannot be certified because the intervals
/// overlap are reported as such instead of being decided silently.
class PReal {
public:
    static constexpr mpfr_prec_t kRadiusPrec = 64;

    explicit PReal(mpfr_prec_t prec = 256);
    PReal(const PReal& o);
    PReal(PReal&& o) noexcept;
    PReal& operator=(const PReal& o);
    PReal& operator=(PReal&& o) noexcept;
    ~PReal();

    static PReal from_long(long v, mpfr_prec_t prec);
    static PReal from_mpz(const mpz_class& v, mpfr_prec_t prec);
    static PReal from_mpq(const mpq_class& v, mpfr_prec_t prec);
    static PReal from_quad(const QuadVal& v, mpfr_prec_t prec);
    static PReal from_double(double v, mpfr_prec_t prec);
    /// sqrt of an exact nonnegative integer (used for |q| from exact norms).
    static PReal sqrt_mpz(const mpz_class& v, mpfr_prec_t prec);

    mpfr_prec_t prec() const { return mpfr_get_prec(mid_); }
    bool is_exact() const { return mpfr_zero_p(rad_) != 0; }

    PReal operator-() const;
    PReal operator+(const PReal& o) const;
    PReal operator-(const PReal& o) const;
    PReal operator*(const PReal& o) const;
    PReal operator/(const PReal& o) const;

    PReal operator+(long v) const;
    PReal operator-(long v) const;
    PReal operator*(long v) const;
    PReal operator/(long v) const;

    PReal abs() const;
    /// Square with the sign information kept (never dips below zero).
    PReal sq() const;
    /// Requires the interval to allow a nonnegative value; an interval
    /// dipping below zero is clamped at zero on the low side.
    PReal sqrt() const;
    /// Requires a certified-positive interval.
    PReal log() const;
    /// Base must be certified nonnegative. Exponent may be any ball.
    PReal pow(const PReal& expo) const;

    /// mid - rad rounded down / mid + rad rounded up.
    double lower_d() const;
    double upper_d() const;
    double mid_d() const { return mpfr_get_d(mid_, MPFR_RNDN); }
    double rad_d() const { return mpfr_get_d(rad_, MPFR_RNDU); }
    void lower(mpfr_t out) const; // out must be initialized
    void upper(mpfr_t out) const;

    bool contains_zero() const { return mpfr_cmpabs(mid_, rad_) <= 0; }
    bool is_positive() const;  // certified > 0
    bool is_negative() const;  // certified < 0
    bool is_nonneg() const;    // certified >= 0

    /// -1 if certified *this < o, +1 if certified *this > o, 0 on overlap.
    int cmp(const PReal& o) const;
    bool lt_certified(const PReal& o) const { return cmp(o) < 0; }
    bool gt_certified(const PReal& o) const { return cmp(o) > 0; }
    /// upper(*this) <= lower(o): certified <=.
    bool le_certified(const PReal& o) const;
    bool ge_certified(const PReal& o) const { return o.le_certified(*this); }
    bool overlaps(const PReal& o) const { return cmp(o) == 0; }
    /// True when both balls are exact points with equal midpoints.
    bool eq_exact(const PReal& o) const;

    /// Midpoint rendered with mpfr round-half-even at `digits` significant
    /// decimal digits (scientific notation). Deterministic across runs.
    std::string str(int digits) const;

    const mpfr_t& mid_raw() const { return mid_; }
    const mpfr_t& rad_raw() const { return rad_; }
    /// Inflate the radius by an extra amount (for external error terms).
    void add_error(const PReal& amount);

private:
    friend class PComplex;
    friend PReal ball_max(const PReal& a, const PReal& b);
    void bump_rad_ulp(int ternary);
    void rad_add(const mpfr_t x); // rad_ += x, rounded up

    mpfr_t mid_;
    mpfr_t rad_;
};

PReal operator+(long v, const PReal& x);
PReal operator-(long v, const PReal& x);
PReal operator*(long v, const PReal& x);
PReal operator/(long v, const PReal& x);

/// max/min of two balls (a valid enclosure of pointwise max/min).
PReal ball_max(const PReal& a, const PReal& b);
PReal ball_min(const PReal& a, const PReal& b);

} // namespace okcf
