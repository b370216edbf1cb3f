#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "okcf/pcomplex.hpp"

namespace okcf {

/// An exact complex-valued input expression that can be (re)evaluated at any
/// working precision. Supported grammar:
///
///   expr    := term (('+'|'-') term)*
///   term    := factor (('*'|'/') factor)*
///   factor  := ('+'|'-')* primary
///   primary := NUMBER ['i'] | 'i' | 'sqrt' '(' expr ')' | '(' expr ')'
///
/// NUMBER is an integer or decimal literal, read exactly as a rational.
/// sqrt() takes a certified nonnegative real argument.
class ComplexSpec {
public:
    ComplexSpec() = default;
    static ComplexSpec parse(const std::string& text);

    PComplex eval(mpfr_prec_t prec) const;

    /// Exact rational value (re, im) when the expression denotes one
    /// (sqrt() of perfect squares included), otherwise nullopt.
    std::optional<std::pair<mpq_class, mpq_class>> eval_exact() const;

    const std::string& text() const { return text_; }
    bool empty() const { return node_ == nullptr; }

    struct Node;

private:
    std::shared_ptr<const Node> node_;
    std::string text_;
};

} // namespace okcf
