#pragma once

#include <optional>
#include <vector>

#include "okcf/input_expr.hpp"
#include "okcf/pcomplex.hpp"
#include "okcf/ring.hpp"

namespace okcf {

/// Derived growth/error constants of the nearest-integer expansion, all
/// exact. C0 = r0*theta^2/(theta^2-1); C1 = C0 + 1; r1 is the smallest
/// positive integer with theta^floor(r1/r0) > C0, and
/// C2 = 1 - C0/theta^floor(r1/r0), which lands in (0, 1).
struct CFConstants {
    QuadVal theta, theta_sq;
    int r0 = 0;
    QuadVal c0, c1, c2;
    int r1 = 0;
};

CFConstants constants(const RingSpec& ring);

/// Nearest-integer continued fraction expansion of a complex number:
/// partial quotients, convergent pairs indexed from -2, and the error
/// terms eps_n = q_n z - p_n at working precision.
class CFExpansion {
public:
    const RingSpec& ring() const { return RingSpec::get(d_); }
    mpfr_prec_t prec() const { return prec_; }
    const PComplex& value() const { return value_; }

    /// Number of computed partial quotients (indices 0 .. size()-1).
    int size() const { return (int)a_.size(); }
    bool terminated() const { return terminated_; }

    const OKInt& a(int n) const { return a_.at((size_t)n); }
    /// Convergent numerator/denominator, defined for n >= -2.
    const OKInt& p(int n) const { return p_.at((size_t)(n + 2)); }
    const OKInt& q(int n) const { return q_.at((size_t)(n + 2)); }
    const PComplex& eps(int n) const { return eps_.at((size_t)n); }
    const std::vector<PComplex>& error_terms() const { return eps_; }

    /// |q_n| as a certified ball (from the exact norm).
    PReal q_abs(int n) const {
        return PReal::sqrt_mpz(q(n).norm(), prec_);
    }

private:
    friend CFExpansion expand_value(const PComplex&, const RingSpec&, int);
    friend CFExpansion expand_exact(const OKInt&, const OKInt&,
                                    const RingSpec&, int, mpfr_prec_t);
    int d_ = 1;
    mpfr_prec_t prec_ = 256;
    PComplex value_;
    std::vector<OKInt> a_, p_, q_; // p_, q_ are offset by +2
    std::vector<PComplex> eps_;
    bool terminated_ = false;
};

/// One Hurwitz iteration pass at the precision carried by z. Throws
/// precision_error when a nearest-integer choice or an inversion cannot be
/// certified.
CFExpansion expand_value(const PComplex& z, const RingSpec& ring,
                         int max_terms);

/// Exact expansion of the K-rational u/v (v != 0) by ring division. Total:
/// exact Voronoi ties resolve through divide_round's lex rule.
CFExpansion expand_exact(const OKInt& u, const OKInt& v, const RingSpec& ring,
                         int max_terms, mpfr_prec_t prec = 256);

struct ExpandOptions {
    int max_terms = 50;
    mpfr_prec_t prec = 256;
    mpfr_prec_t prec_cap = 8192; // retry-doubling stops here
};

/// Expansion with the retry policy: on precision_error the input expression
/// is re-evaluated at doubled precision, up to the configured cap.
CFExpansion expand(const ComplexSpec& spec, const RingSpec& ring,
                   const ExpandOptions& opts = {});

struct HypothesisReport {
    bool monotone_ok = true;
    int first_violation = -1;        // index n of the first |q_n| <= |q_{n-1}|
    mpq_class min_ratio_sq;          // min over n of norm(q_{n+r0})/norm(q_n)
    int min_ratio_at = -1;
    double min_ratio = 0.0;          // sqrt of the above
    bool theta_pass = false;         // exact: min_ratio_sq >= theta^2
};

/// Empirical check of the growth hypotheses: monotone denominators and
/// |q_{n+r0}| >= theta |q_n|, decided by exact integer/quadratic comparisons.
HypothesisReport check_hypothesis(const CFExpansion& exp);

struct SandwichReport {
    enum Status { kOk, kRationalInput, kTooShallow } status = kOk;
    int tail_start = 5;
    bool upper_ok = true, lower_ok = true;
    int first_upper_fail = -1, first_lower_fail = -1;
    struct IndexMargin {
        int n;
        double upper_margin; // (C1/|q_{n+1}|) / |eps_n|, >= 1 on pass
        double lower_margin; // |eps_n| / (C2/|q_{n+1}|^{omega^(r1-1)})
    };
    std::vector<IndexMargin> margins;
    bool all_pass() const { return upper_ok && lower_ok; }
};

/// Checks C2/|q_{n+1}|^{omega^(r1-1)} <= |eps_n| <= C1/|q_{n+1}| on the
/// tail window n >= tail_start, with certified comparisons.
SandwichReport error_sandwich_check(const CFExpansion& exp,
                                    const mpq_class& omega,
                                    int tail_start = 5);

/// Evaluates [a_0; a_1, ..., a_n] bottom-up as an exact fraction of O_K
/// elements. Equals (p_n, q_n) of the forward recurrences.
std::pair<OKInt, OKInt> reconstruct_fraction(const CFExpansion& exp, int n);

} // namespace okcf
