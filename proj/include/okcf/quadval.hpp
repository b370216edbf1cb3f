#pragma once

#include <gmpxx.h>
#include <iosfwd>

namespace okcf {

/// Exact value of the form x + y*sqrt(D) with x, y rational and D a fixed
/// nonnegative integer. Closed under +, -, *, / (for a fixed D), which is
/// all the ring constants theta, C0, C1, C2 need. Comparisons are exact.
class QuadVal {
public:
    QuadVal() : x_(0), y_(0), D_(0) {}
    QuadVal(mpq_class x) : x_(std::move(x)), y_(0), D_(0) {}
    QuadVal(long x) : x_(x), y_(0), D_(0) {}
    QuadVal(mpq_class x, mpq_class y, unsigned long D)
        : x_(std::move(x)), y_(std::move(y)), D_(D) {
        if (y_ == 0) D_ = 0;
        canonicalize();
    }

    const mpq_class& rational_part() const { return x_; }
    const mpq_class& surd_coeff() const { return y_; }
    unsigned long surd() const { return D_; }
    bool is_rational() const { return y_ == 0; }

    QuadVal operator-() const { return QuadVal(-x_, -y_, D_); }

    QuadVal operator+(const QuadVal& o) const {
        return QuadVal(x_ + o.x_, y_ + o.y_, merged_surd(o));
    }
    QuadVal operator-(const QuadVal& o) const {
        return QuadVal(x_ - o.x_, y_ - o.y_, merged_surd(o));
    }
    QuadVal operator*(const QuadVal& o) const {
        unsigned long D = merged_surd(o);
        mpq_class x = x_ * o.x_ + y_ * o.y_ * (long)D;
        mpq_class y = x_ * o.y_ + y_ * o.x_;
        return QuadVal(std::move(x), std::move(y), D);
    }
    QuadVal operator/(const QuadVal& o) const {
        // 1/(c + e*sqrt(D)) = (c - e*sqrt(D)) / (c^2 - e^2 D)
        unsigned long D = merged_surd(o);
        mpq_class den = o.x_ * o.x_ - o.y_ * o.y_ * (long)D;
        QuadVal num = *this * QuadVal(o.x_, -o.y_, D);
        return QuadVal(num.x_ / den, num.y_ / den, D);
    }

    QuadVal pow(unsigned e) const {
        QuadVal r(1);
        QuadVal b = *this;
        while (e) {
            if (e & 1u) r = r * b;
            b = b * b;
            e >>= 1;
        }
        return r;
    }

    /// Exact sign of x + y*sqrt(D).
    int sign() const {
        int sx = sgn(x_), sy = sgn(y_);
        if (sy == 0) return sx;
        if (sx == 0) return sy;
        if (sx == sy) return sx;
        // Opposite signs: compare x^2 against y^2 D.
        mpq_class lhs = x_ * x_, rhs = y_ * y_ * (long)D_;
        int c = cmp(lhs, rhs);
        if (c == 0) return 0;
        // |x| dominates iff x^2 > y^2 D.
        return c > 0 ? sx : sy;
    }

    int compare(const QuadVal& o) const { return (*this - o).sign(); }
    bool operator<(const QuadVal& o) const { return compare(o) < 0; }
    bool operator<=(const QuadVal& o) const { return compare(o) <= 0; }
    bool operator>(const QuadVal& o) const { return compare(o) > 0; }
    bool operator>=(const QuadVal& o) const { return compare(o) >= 0; }
    bool operator==(const QuadVal& o) const { return compare(o) == 0; }

    double to_double() const;

private:
    static int sgn(const mpq_class& q) { return mpq_sgn(q.get_mpq_t()); }

    unsigned long merged_surd(const QuadVal& o) const {
        if (D_ == 0) return o.D_;
        if (o.D_ == 0 || o.D_ == D_) return D_;
        throw std::logic_error("QuadVal: mixed surds");
    }
    void canonicalize() {
        x_.canonicalize();
        y_.canonicalize();
    }

    mpq_class x_, y_;
    unsigned long D_;
};

std::ostream& operator<<(std::ostream& os, const QuadVal& v);

} // namespace okcf
