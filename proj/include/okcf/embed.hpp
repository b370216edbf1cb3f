#pragma once

#include <array>

#include "okcf/exponent.hpp"
#include "okcf/matrix.hpp"

namespace okcf {

/// 4x4 integer matrix (row-major), the image of SL2(Z[i]) in SL4(Z).
struct Mat4Z {
    std::array<mpz_class, 16> m;

    static Mat4Z identity();
    const mpz_class& at(int r, int c) const { return m[(size_t)(4 * r + c)]; }
    mpz_class& at(int r, int c) { return m[(size_t)(4 * r + c)]; }

    Mat4Z operator*(const Mat4Z& o) const;
    bool operator==(const Mat4Z& o) const { return m == o.m; }

    mpz_class det() const; // exact cofactor expansion
    /// Height: max |entry| over the 16 integers.
    mpz_class height() const;
};

/// a + ib -> (a -b; b a). Gaussian integers only.
std::array<mpz_class, 4> embed_scalar(const OKInt& x);

/// Blockwise embedding; an exact group homomorphism with det 1.
Mat4Z embed_matrix(const Mat2& g);

/// (z1, z2) -> (Re z1, Im z1, Re z2, Im z2).
std::array<PReal, 4> vec_c2_to_r4(const Vec2& z);

/// embed_matrix(g) * vec(z) equals vec(g z) within the combined radii.
bool compatibility_check(const Mat2& g, const Vec2& z);

/// Exact certificate of h1/sqrt(2) <= h2 <= h1 for the embedding heights,
/// i.e. h2^2 <= max entry norm <= 2 h2^2 over the integers.
bool height_ratio_certified(const Mat2& g);

/// The same approximation event viewed in R^4: height from the embedded
/// matrix, error in the sup norm over the four real coordinates.
OrbitRecord to_record_r4(const GammaResult& r, const Vec2& z, const Vec2& y);

} // namespace okcf
