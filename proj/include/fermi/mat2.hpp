#ifndef FERMI_MAT2_HPP
#define FERMI_MAT2_HPP

#include <cmath>

#include "fermi/errors.hpp"

namespace fermi {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double c) const { return {c * x, c * y}; }
    double norm() const { return std::hypot(x, y); }
    double norm_inf() const { return std::max(std::abs(x), std::abs(y)); }
};

struct Mat2 {
    double m11 = 1.0, m12 = 0.0;
    double m21 = 0.0, m22 = 1.0;

    static Mat2 identity() { return {}; }

    Mat2 operator*(const Mat2& o) const
    {
        return {m11 * o.m11 + m12 * o.m21, m11 * o.m12 + m12 * o.m22,
                m21 * o.m11 + m22 * o.m21, m21 * o.m12 + m22 * o.m22};
    }
    Vec2 operator*(const Vec2& v) const
    {
        return {m11 * v.x + m12 * v.y, m21 * v.x + m22 * v.y};
    }
    double trace() const { return m11 + m22; }
    double det() const { return m11 * m22 - m12 * m21; }
    Mat2 inverse() const
    {
        double d = det();
        return {m22 / d, -m12 / d, -m21 / d, m11 / d};
    }
};

/// Hyperbolicity test for a unimodular matrix: |trace| > 2.
/// Rejects input with |det - 1| > 1e-9.
struct TraceCriterion {
    double trace;
    bool hyperbolic;
};
inline TraceCriterion trace_criterion(const Mat2& A)
{
    if (std::abs(A.det() - 1.0) > 1e-9)
        throw std::invalid_argument("trace_criterion: matrix is not unimodular");
    double tr = A.trace();
    return {tr, std::abs(tr) > 2.0};
}

/// Eigen-split of a hyperbolic unimodular 2x2 matrix:
/// lambda_s, lambda_u with |lambda_s| < 1 < |lambda_u|, and P with
/// P A P^{-1} = diag(lambda_s, lambda_u). Eigenvectors (the columns of
/// P^{-1}) are unit length with positive first component.
struct SpectralSplit {
    double lambda_s;
    double lambda_u;
    Mat2 P;
    Mat2 P_inv;

    Vec2 stable_dir() const { return {P_inv.m11, P_inv.m21}; }
    Vec2 unstable_dir() const { return {P_inv.m12, P_inv.m22}; }
};

inline SpectralSplit spectral_split(const Mat2& A)
{
    double tr = A.trace();
    if (std::abs(tr) <= 2.0 + 1e-12)
        throw NotHyperbolic("spectral_split: |trace| <= 2");
    double disc = std::sqrt(tr * tr - 4.0);
    double lu = 0.5 * (tr + std::copysign(disc, tr));   // no cancellation
    double ls = A.det() / lu;

    auto eigvec = [&](double lam) -> Vec2 {
        // rows of (A - lam I) are parallel; take the better-conditioned one
        Vec2 v1{A.m12, lam - A.m11};
        Vec2 v2{lam - A.m22, A.m21};
        Vec2 v = v1.norm() >= v2.norm() ? v1 : v2;
        double n = v.norm();
        v = v * (1.0 / n);
        if (v.x < 0 || (v.x == 0 && v.y < 0))
            v = v * -1.0;
        return v;
    };
    Vec2 es = eigvec(ls), eu = eigvec(lu);
    Mat2 V{es.x, eu.x, es.y, eu.y};
    return {ls, lu, V.inverse(), V};
}

} // namespace fermi

#endif
