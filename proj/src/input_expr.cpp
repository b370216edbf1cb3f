#include "okcf/input_expr.hpp"

#include <cctype>

namespace okcf {

struct ComplexSpec::Node {
    enum Kind { kNum, kImag, kNeg, kAdd, kSub, kMul, kDiv, kSqrt } kind;
    mpq_class value; // kNum
    std::shared_ptr<const Node> lhs, rhs;

    PComplex eval(mpfr_prec_t prec) const {
        switch (kind) {
        case kNum:
            return PComplex::from_real(PReal::from_mpq(value, prec));
        case kImag:
            return {PReal(prec), PReal::from_long(1, prec)};
        case kNeg:
            return -lhs->eval(prec);
        case kAdd:
            return lhs->eval(prec) + rhs->eval(prec);
        case kSub:
            return lhs->eval(prec) - rhs->eval(prec);
        case kMul:
            return lhs->eval(prec) * rhs->eval(prec);
        case kDiv:
            return lhs->eval(prec) / rhs->eval(prec);
        case kSqrt: {
            PComplex arg = lhs->eval(prec);
            bool real_arg = arg.im().is_exact() && arg.im().contains_zero();
            if (!real_arg || !arg.re().is_nonneg())
                throw config_error(
                    "sqrt() argument must be a certified nonnegative real");
            return PComplex::from_real(arg.re().sqrt());
        }
        }
        throw config_error("corrupt expression node");
    }

    using Rat = std::pair<mpq_class, mpq_class>;

    std::optional<Rat> eval_exact() const {
        switch (kind) {
        case kNum:
            return Rat{value, mpq_class(0)};
        case kImag:
            return Rat{mpq_class(0), mpq_class(1)};
        case kNeg: {
            auto v = lhs->eval_exact();
            if (!v) return std::nullopt;
            return Rat{-v->first, -v->second};
        }
        case kAdd:
        case kSub: {
            auto a = lhs->eval_exact(), b = rhs->eval_exact();
            if (!a || !b) return std::nullopt;
            if (kind == kAdd)
                return Rat{a->first + b->first, a->second + b->second};
            return Rat{a->first - b->first, a->second - b->second};
        }
        case kMul: {
            auto a = lhs->eval_exact(), b = rhs->eval_exact();
            if (!a || !b) return std::nullopt;
            return Rat{a->first * b->first - a->second * b->second,
                       a->first * b->second + a->second * b->first};
        }
        case kDiv: {
            auto a = lhs->eval_exact(), b = rhs->eval_exact();
            if (!a || !b) return std::nullopt;
            mpq_class n = b->first * b->first + b->second * b->second;
            if (n == 0) throw config_error("division by zero in expression");
            return Rat{(a->first * b->first + a->second * b->second) / n,
                       (a->second * b->first - a->first * b->second) / n};
        }
        case kSqrt: {
            auto a = lhs->eval_exact();
            if (!a || a->second != 0 || a->first < 0) return std::nullopt;
            // exact only for perfect squares of numerator and denominator
            mpz_class num = a->first.get_num(), den = a->first.get_den();
            if (mpz_perfect_square_p(num.get_mpz_t()) &&
                mpz_perfect_square_p(den.get_mpz_t())) {
                mpz_class sn, sd;
                mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
                mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
                mpq_class r(sn, sd);
                r.canonicalize();
                return Rat{r, mpq_class(0)};
            }
            return std::nullopt;
        }
        }
        return std::nullopt;
    }
};

namespace {

using NodePtr = std::shared_ptr<const ComplexSpec::Node>;
using Node = ComplexSpec::Node;

NodePtr make(Node::Kind k, NodePtr l = nullptr, NodePtr r = nullptr) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(l);
    n->rhs = std::move(r);
    return n;
}

class Parser {
public:
    explicit Parser(const std::string& s) : s_(s) {}

    NodePtr run() {
        NodePtr e = expr();
        skip_ws();
        if (pos_ != s_.size())
            throw config_error("unexpected trailing input in expression: '" +
                               s_.substr(pos_) + "'");
        return e;
    }

private:
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace((unsigned char)s_[pos_]))
            ++pos_;
    }
    char peek() {
        skip_ws();
        return pos_ < s_.size() ? s_[pos_] : '\0';
    }
    bool eat(char c) {
        if (peek() == c) {
            ++pos_;
            return true;
        }
        return false;
    }

    NodePtr expr() {
        NodePtr e = term();
        for (;;) {
            if (eat('+')) {
                e = make(Node::kAdd, e, term());
            } else if (eat('-')) {
                e = make(Node::kSub, e, term());
            } else {
                return e;
            }
        }
    }

    NodePtr term() {
        NodePtr e = factor();
        for (;;) {
            if (eat('*')) {
                e = make(Node::kMul, e, factor());
            } else if (eat('/')) {
                e = make(Node::kDiv, e, factor());
            } else {
                return e;
            }
        }
    }

    NodePtr factor() {
        if (eat('-')) return make(Node::kNeg, factor());
        if (eat('+')) return factor();
        return primary();
    }

    bool at_imag_unit() const {
        if (pos_ >= s_.size() || s_[pos_] != 'i') return false;
        // not the start of an identifier
        return pos_ + 1 == s_.size() ||
               !std::isalnum((unsigned char)s_[pos_ + 1]);
    }

    NodePtr primary() {
        skip_ws();
        if (pos_ >= s_.size()) throw config_error("truncated expression");
        char c = s_[pos_];
        if (c == '(') {
            ++pos_;
            NodePtr e = expr();
            if (!eat(')')) throw config_error("missing ')' in expression");
            if (at_imag_unit()) { // (expr)i
                ++pos_;
                return make(Node::kMul, e, make(Node::kImag));
            }
            return e;
        }
        if (at_imag_unit()) {
            ++pos_;
            return make(Node::kImag);
        }
        if (s_.compare(pos_, 4, "sqrt") == 0) {
            pos_ += 4;
            if (!eat('(')) throw config_error("sqrt expects '('");
            NodePtr e = expr();
            if (!eat(')')) throw config_error("missing ')' after sqrt");
            return make(Node::kSqrt, e);
        }
        if (std::isdigit((unsigned char)c) || c == '.') return number();
        throw config_error(std::string("unexpected character '") + c +
                           "' in expression");
    }

    NodePtr number() {
        size_t start = pos_;
        std::string digits;
        long frac_digits = -1;
        while (pos_ < s_.size()) {
            char c = s_[pos_];
            if (std::isdigit((unsigned char)c)) {
                digits.push_back(c);
                if (frac_digits >= 0) ++frac_digits;
                ++pos_;
            } else if (c == '.' && frac_digits < 0) {
                frac_digits = 0;
                ++pos_;
            } else {
                break;
            }
        }
        if (digits.empty())
            throw config_error("malformed number at position " +
                               std::to_string(start));
        mpq_class v{mpz_class(digits, 10)};
        if (frac_digits > 0) {
            mpz_class den;
            mpz_ui_pow_ui(den.get_mpz_t(), 10, (unsigned long)frac_digits);
            v /= mpq_class(den);
        }
        v.canonicalize();
        auto n = std::make_shared<Node>();
        n->kind = Node::kNum;
        n->value = v;
        if (at_imag_unit()) {
            ++pos_;
            return make(Node::kMul, n, make(Node::kImag));
        }
        return n;
    }

    const std::string& s_;
    size_t pos_ = 0;
};

} // namespace

ComplexSpec ComplexSpec::parse(const std::string& text) {
    ComplexSpec spec;
    spec.text_ = text;
    spec.node_ = Parser(text).run();
    return spec;
}

PComplex ComplexSpec::eval(mpfr_prec_t prec) const {
    if (!node_) throw config_error("empty expression");
    return node_->eval(prec);
}

std::optional<std::pair<mpq_class, mpq_class>> ComplexSpec::eval_exact()
    const {
    if (!node_) throw config_error("empty expression");
    auto v = node_->eval_exact();
    if (v) {
        v->first.canonicalize();
        v->second.canonicalize();
    }
    return v;
}

} // namespace okcf
