#pragma once

#include "okcf/preal.hpp"
#include "okcf/ring.hpp"

namespace okcf {

/// Ball-arithmetic complex number: one PReal per component, so the enclosure
/// is a box. err_radius() reports the Euclidean radius of the box.
class PComplex {
public:
    explicit PComplex(mpfr_prec_t prec = 256) : re_(prec), im_(prec) {}
    PComplex(PReal re, PReal im) : re_(std::move(re)), im_(std::move(im)) {}

    static PComplex from_real(PReal re) {
        PReal im(re.prec());
        return {std::move(re), std::move(im)};
    }
    static PComplex from_long(long v, mpfr_prec_t prec) {
        return from_real(PReal::from_long(v, prec));
    }

    const PReal& re() const { return re_; }
    const PReal& im() const { return im_; }
    mpfr_prec_t prec() const { return std::max(re_.prec(), im_.prec()); }

    bool is_exact() const { return re_.is_exact() && im_.is_exact(); }
    bool contains_zero() const {
        return re_.contains_zero() && im_.contains_zero();
    }

    PComplex operator-() const { return {-re_, -im_}; }
    PComplex conj() const { return {re_, -im_}; }

    PComplex operator+(const PComplex& o) const {
        return {re_ + o.re_, im_ + o.im_};
    }
    PComplex operator-(const PComplex& o) const {
        return {re_ - o.re_, im_ - o.im_};
    }
    PComplex operator*(const PComplex& o) const {
        return {re_ * o.re_ - im_ * o.im_, re_ * o.im_ + im_ * o.re_};
    }
    PComplex operator*(const PReal& s) const { return {re_ * s, im_ * s}; }
    PComplex operator*(long s) const { return {re_ * s, im_ * s}; }

    /// Throws near_zero_error when |o| is not certified away from zero.
    PComplex operator/(const PComplex& o) const {
        PReal n = o.abs_sq();
        PComplex w = *this * o.conj();
        return {w.re_ / n, w.im_ / n};
    }
    PComplex operator/(const PReal& s) const { return {re_ / s, im_ / s}; }

    PComplex inverse() const {
        PReal n = abs_sq();
        return {re_ / n, -(im_ / n)};
    }

    PReal abs_sq() const { return re_.sq() + im_.sq(); }
    PReal abs() const { return abs_sq().sqrt(); }

    /// Euclidean radius of the enclosure box (upper bound).
    PReal err_radius() const;

    std::string str(int digits) const {
        return re_.str(digits) + (im_.is_negative() ? " - " : " + ") +
               im_.abs().str(digits) + "i";
    }

private:
    PReal re_, im_;
};

/// Exact embedding of a + b*omega into C at `prec` bits; the result's
/// err_radius covers the rounding of sqrt(disc) (zero for d = 1).
PComplex to_complex(const OKInt& x, mpfr_prec_t prec);

/// Embedding of omega itself.
PComplex omega_value(const RingSpec& ring, mpfr_prec_t prec);

/// Nearest lattice point of O_K to z. Ties are broken toward the
/// lexicographically smallest coefficient pair (a, b), but only when the
/// tie is certified exactly (point intervals with equal squared distances);
/// an overlap that cannot be certified raises precision_error.
OKInt nearest_integer(const PComplex& z, const RingSpec& ring);

/// Lattice points within (certified) distance at most `radius_sq`^(1/2)
/// of z, in deterministic order. Points whose distance interval straddles
/// the boundary are included (conservative).
std::vector<OKInt> lattice_points_near(const PComplex& z, const RingSpec& ring,
                                       const mpq_class& radius_sq);

/// A pair of complex numbers (a point of C^2).
struct Vec2 {
    PComplex x1, x2;

    Vec2 operator-(const Vec2& o) const { return {x1 - o.x1, x2 - o.x2}; }
    /// Sup norm, the height convention used for matrices as well.
    PReal sup_norm() const { return ball_max(x1.abs(), x2.abs()); }
};

} // namespace okcf
