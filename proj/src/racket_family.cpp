#include "fermi/racket_family.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace fermi {

TrigPoly2 family_coefficients(const FamilyParams& params)
{
    if (!(params.g > 0))
        throw std::invalid_argument("family_coefficients: g must be positive");
    const double s = params.s, g = params.g;
    const double pi = M_PI, r3 = std::sqrt(3.0);
    TrigPoly2 p;
    p.a1 = g * s;
    p.b1 = g * ((2 - r3) * s + (4 * r3 - 7) / (4 * pi));
    p.a2 = g * (5 / (96 * pi) - s / 2);
    p.b2 = g * ((r3 / 2) * s + (48 - 29 * r3) / (96 * pi));
    return p;
}

double derivative_bound(const FamilyParams& params)
{
    if (!(params.g > 0))
        throw std::invalid_argument("derivative_bound: g must be positive");
    TrigPoly2 p = family_coefficients(params);
    const double pi = M_PI;
    return (2 * pi * std::hypot(p.a1, p.b1) + 4 * pi * std::hypot(p.a2, p.b2)) / params.g;
}

double true_max_derivative(const TrigPoly2& p)
{
    const int n = 4096;
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i)
        d[i] = p.deriv(double(i) / n);
    double best = *std::max_element(d.begin(), d.end());

    // polish every discrete local maximum: ṗ has a critical point where p̈
    // changes sign, bracketed by the two neighbouring grid nodes
    for (int i = 0; i < n; ++i) {
        double dm = d[(i + n - 1) % n], dc = d[i], dp = d[(i + 1) % n];
        if (dc < dm || dc < dp)
            continue;
        double lo = (double(i) - 1) / n, hi = (double(i) + 1) / n;
        double flo = p.deriv2(lo), fhi = p.deriv2(hi);
        if (flo <= 0 || fhi >= 0)
            continue;
        for (int it = 0; it < 70 && hi - lo > 1e-15; ++it) {
            double mid = 0.5 * (lo + hi), fm = p.deriv2(mid);
            (fm > 0 ? lo : hi) = mid;
            (fm > 0 ? flo : fhi) = fm;
        }
        best = std::max(best, p.deriv(0.5 * (lo + hi)));
    }
    return best;
}

double max_abs_derivative(const TrigPoly2& p)
{
    return std::max(true_max_derivative(p), true_max_derivative(-p));
}

namespace detail {

MinimizeResult golden_minimize_impl(double (*fn)(double, void*), void* ctx,
                                    double s_lo, double s_hi, double tol)
{
    if (!(s_lo < s_hi))
        throw std::invalid_argument("golden_minimize: bracket is degenerate");
    if (!(tol > 0))
        throw std::invalid_argument("golden_minimize: tol must be positive");

    int evals = 0;
    auto f = [&](double x) { ++evals; return fn(x, ctx); };

    // prescan: the minimum must be interior, otherwise the bracket is wrong
    const int pre = 9;
    int ibest = 0;
    double fbest = 0;
    for (int i = 0; i < pre; ++i) {
        double x = s_lo + (s_hi - s_lo) * i / (pre - 1);
        double fx = f(x);
        if (i == 0 || fx < fbest) { fbest = fx; ibest = i; }
    }
    if (ibest == 0 || ibest == pre - 1)
        throw std::domain_error("golden_minimize: no interior minimum in bracket "
                                "(function is monotone toward an endpoint)");

    double a = s_lo + (s_hi - s_lo) * (ibest - 1) / (pre - 1);
    double b = s_lo + (s_hi - s_lo) * (ibest + 1) / (pre - 1);
    const double invphi = 0.6180339887498948482;
    double c = b - invphi * (b - a);
    double d = a + invphi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - invphi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + invphi * (b - a);
            fd = f(d);
        }
    }
    double x = fc < fd ? c : d;
    return {x, fc < fd ? fc : fd, evals};
}

} // namespace detail

MinimizeResult minimize_bound(double s_lo, double s_hi, double tol)
{
    return golden_minimize([](double s) {
        return derivative_bound({s, 1.0});
    }, s_lo, s_hi, tol);
}

} // namespace fermi
