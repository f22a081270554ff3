// Test-only oracles, kept independent of the implementation paths they check.
#ifndef FERMI_TESTS_ORACLES_HPP
#define FERMI_TESTS_ORACLES_HPP

#include <array>
#include <cmath>
#include <stdexcept>

#include "fermi/trig_poly.hpp"

namespace oracles {

// Coefficients (b1, a2, b2) for given a1 = g*s from the raw cycle conditions
//   2': 2(t1-t0) + (4/g) p'(t1) = W
//   3 : p(t0) = p(t1)
//   4': (4/g)(p'(t0) + p'(t1)) = V
// at t0 = 0, t1 = 5/12 + k, W = 2k+1, V = 1, assembled and solved as a dense
// 3x3 system with partial pivoting. No reuse of the closed forms under test.
inline fermi::TrigPoly2 family_from_conditions(double s, double g, long long k)
{
    const double pi = 3.14159265358979323846264338327950288;
    double t0 = 0.0, t1 = 5.0 / 12.0 + double(k);
    double W = double(2 * k + 1), V = 1.0;
    double a1 = g * s;

    auto s1 = [&](double t) { return std::sin(2 * pi * t); };
    auto c1 = [&](double t) { return std::cos(2 * pi * t); };
    auto s2 = [&](double t) { return std::sin(4 * pi * t); };
    auto c2 = [&](double t) { return std::cos(4 * pi * t); };

    // unknown order: (b1, a2, b2)
    double M[3][4];
    // row 1: condition 2'
    M[0][0] = (4 / g) * (-2 * pi * s1(t1));
    M[0][1] = (4 / g) * (4 * pi * c2(t1));
    M[0][2] = (4 / g) * (-4 * pi * s2(t1));
    M[0][3] = W - 2 * (t1 - t0) - (4 / g) * (2 * pi * c1(t1)) * a1;
    // row 2: condition 3
    M[1][0] = c1(t0) - c1(t1);
    M[1][1] = s2(t0) - s2(t1);
    M[1][2] = c2(t0) - c2(t1);
    M[1][3] = -(s1(t0) - s1(t1)) * a1;
    // row 3: condition 4'
    M[2][0] = (4 / g) * (-2 * pi) * (s1(t0) + s1(t1));
    M[2][1] = (4 / g) * (4 * pi) * (c2(t0) + c2(t1));
    M[2][2] = (4 / g) * (-4 * pi) * (s2(t0) + s2(t1));
    M[2][3] = V - (4 / g) * (2 * pi) * (c1(t0) + c1(t1)) * a1;

    for (int col = 0; col < 3; ++col) {
        int piv = col;
        for (int r = col + 1; r < 3; ++r)
            if (std::abs(M[r][col]) > std::abs(M[piv][col]))
                piv = r;
        for (int c = 0; c < 4; ++c)
            std::swap(M[col][c], M[piv][c]);
        if (M[col][col] == 0)
            throw std::runtime_error("family_from_conditions: singular system");
        for (int r = 0; r < 3; ++r) {
            if (r == col)
                continue;
            double m = M[r][col] / M[col][col];
            for (int c = col; c < 4; ++c)
                M[r][c] -= m * M[col][c];
        }
    }
    fermi::TrigPoly2 p;
    p.a1 = a1;
    p.b1 = M[0][3] / M[0][0];
    p.a2 = M[1][3] / M[1][1];
    p.b2 = M[2][3] / M[2][2];
    return p;
}

// Pure-bisection impact gap, independent of the Newton path.
inline double impact_gap_bisect(const fermi::TrigPoly2& f, double t0, double v,
                                double g, double tol = 1e-14)
{
    double f0 = f.value(t0);
    auto F = [&](double D) {
        return D - (2 / g) * v + (2 / g) * (f.value(t0 + D) - f0) / D;
    };
    double lo = 1.0, hi = 4 * v / g;
    double flo = F(lo);
    if ((flo > 0) == (F(hi) > 0))
        throw std::runtime_error("impact_gap_bisect: bracket has no sign change");
    for (int i = 0; i < 200 && hi - lo > tol; ++i) {
        double mid = 0.5 * (lo + hi);
        if ((F(mid) > 0) == (flo > 0)) { lo = mid; flo = F(mid); }
        else                             hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Grid maximum of p' over one period at 1e6 nodes.
inline double dense_max_derivative(const fermi::TrigPoly2& p, int n = 1000000)
{
    double best = -1e300;
    for (int i = 0; i < n; ++i)
        best = std::max(best, p.deriv(double(i) / n));
    return best;
}

} // namespace oracles

#endif
