#pragma once

#include <gmpxx.h>
#include <array>
#include <iosfwd>
#include <utility>
#include <vector>

#include "okcf/errors.hpp"
#include "okcf/quadval.hpp"

namespace okcf {

/// Parameters of the ring of integers O_K of K = Q(sqrt(-d)).
///
/// The generator omega satisfies omega^2 = trace*omega - nrm with integer
/// trace and nrm, so O_K = Z + Z*omega is closed under multiplication and
/// the norm form a^2 + trace*a*b + nrm*b^2 takes integer values.
struct RingSpec {
    int d;                 // 1, 3, 7 or 11
    long omega_trace;      // omega + conj(omega)
    long omega_norm;       // |omega|^2
    unsigned long disc;    // 4*omega_norm - omega_trace^2; Im(omega) = sqrt(disc)/2
    mpq_class cover_sq;    // squared covering radius of the lattice, exact
    QuadVal theta;         // growth ratio: |q_{n+r0}| >= theta*|q_n|
    QuadVal theta_sq;
    int r0;
    bool growth_proven;    // true when theta/r0 are backed by published results
    std::vector<std::pair<long, long>> unit_coeffs; // (a, b) of each unit

    static const RingSpec& get(int d);
    static const std::array<int, 4>& supported();
};

/// Element a + b*omega of O_K with arbitrary-precision integer coefficients.
class OKInt {
public:
    OKInt() : a_(0), b_(0), d_(1) {}
    OKInt(mpz_class a, mpz_class b, const RingSpec& ring)
        : a_(std::move(a)), b_(std::move(b)), d_(ring.d) {}
    OKInt(long a, long b, const RingSpec& ring) : a_(a), b_(b), d_(ring.d) {}

    static OKInt zero(const RingSpec& ring) { return {0, 0, ring}; }
    static OKInt one(const RingSpec& ring) { return {1, 0, ring}; }

    const mpz_class& a() const { return a_; }
    const mpz_class& b() const { return b_; }
    int d() const { return d_; }
    const RingSpec& ring() const { return RingSpec::get(d_); }

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_unit() const { return norm() == 1; }

    /// |x|^2 = a^2 + t*a*b + n*b^2, exact and nonnegative.
    mpz_class norm() const {
        const RingSpec& r = ring();
        return a_ * a_ + r.omega_trace * a_ * b_ + r.omega_norm * b_ * b_;
    }

    OKInt conj() const {
        // conj(a + b*omega) = (a + t*b) - b*omega
        return raw(a_ + ring().omega_trace * b_, -b_, d_);
    }

    OKInt operator-() const { return raw(-a_, -b_, d_); }

    OKInt operator+(const OKInt& o) const {
        check_ring(o);
        return raw(a_ + o.a_, b_ + o.b_, d_);
    }
    OKInt operator-(const OKInt& o) const {
        check_ring(o);
        return raw(a_ - o.a_, b_ - o.b_, d_);
    }
    OKInt operator*(const OKInt& o) const {
        check_ring(o);
        const RingSpec& r = ring();
        // (a + b*omega)(c + e*omega) with omega^2 = t*omega - n
        mpz_class be = b_ * o.b_;
        mpz_class na = a_ * o.a_ - r.omega_norm * be;
        mpz_class nb = a_ * o.b_ + b_ * o.a_ + r.omega_trace * be;
        return raw(std::move(na), std::move(nb), d_);
    }
    OKInt operator*(long s) const { return raw(a_ * s, b_ * s, d_); }

    bool operator==(const OKInt& o) const {
        return d_ == o.d_ && a_ == o.a_ && b_ == o.b_;
    }
    bool operator!=(const OKInt& o) const { return !(*this == o); }

    /// Lexicographic order on (a, b); the documented tie-break order.
    bool lex_less(const OKInt& o) const {
        int c = cmp(a_, o.a_);
        if (c != 0) return c < 0;
        return b_ < o.b_;
    }

    /// Inverse of a unit (conjugate, since the norm is 1).
    OKInt unit_inverse() const {
        if (!is_unit()) throw error("OKInt: inverse of a non-unit");
        return conj();
    }

private:
    static OKInt raw(mpz_class a, mpz_class b, int d) {
        OKInt x;
        x.a_ = std::move(a);
        x.b_ = std::move(b);
        x.d_ = d;
        return x;
    }
    void check_ring(const OKInt& o) const {
        if (d_ != o.d_) throw error("OKInt: mixed rings");
    }

    mpz_class a_, b_;
    int d_;
};

std::ostream& operator<<(std::ostream& os, const OKInt& x);

/// The unit group of O_K: 4 elements for d=1, 6 for d=3, 2 for d=7,11.
std::vector<OKInt> units(const RingSpec& ring);

/// Exact division: returns q with x = q*y, or throws if y does not divide x.
OKInt exact_div(const OKInt& x, const OKInt& y);
bool divides(const OKInt& y, const OKInt& x);

/// Nearest-integer quotient of u/v in O_K, computed exactly: the lattice
/// point minimizing |u/v - t| (squared distance compared as exact integers),
/// ties broken by lexicographically smallest (a, b). The remainder u - t*v
/// then has norm(u - t*v) <= cover_sq * norm(v) < norm(v).
OKInt divide_round(const OKInt& u, const OKInt& v);

struct ExtendedGcd {
    OKInt g, x, y; // g = a*x + b*y
};

/// Euclidean descent with nearest-integer quotients; g = a*x + b*y exactly.
ExtendedGcd extended_gcd(const OKInt& a, const OKInt& b);

/// True when gcd(a, b) is a unit.
bool is_coprime(const OKInt& a, const OKInt& b);

} // namespace okcf
