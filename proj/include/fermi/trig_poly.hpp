#ifndef FERMI_TRIG_POLY_HPP
#define FERMI_TRIG_POLY_HPP

#include <cmath>
#include <stdexcept>

namespace fermi {

/// Degree-2 trigonometric polynomial with period 1,
///   p(t) = a1 sin(2πt) + b1 cos(2πt) + a2 sin(4πt) + b2 cos(4πt),
/// with closed-form derivatives up to third order.
struct TrigPoly2 {
    double a1 = 0.0;
    double b1 = 0.0;
    double a2 = 0.0;
    double b2 = 0.0;

    static constexpr double two_pi = 6.283185307179586476925286766559;

    // t is reduced mod 1 before evaluation; the reduction t - floor(t) is
    // exact in floating point, which keeps the phase accurate for the huge
    // impact times that show up along unbounded orbits.
    double value(double t) const
    {
        double u = t - std::floor(t);
        double w = two_pi * u;
        return a1 * std::sin(w) + b1 * std::cos(w)
             + a2 * std::sin(2 * w) + b2 * std::cos(2 * w);
    }

    double deriv(double t) const
    {
        double u = t - std::floor(t);
        double w = two_pi * u;
        return two_pi * (a1 * std::cos(w) - b1 * std::sin(w))
             + 2 * two_pi * (a2 * std::cos(2 * w) - b2 * std::sin(2 * w));
    }

    double deriv2(double t) const
    {
        double u = t - std::floor(t);
        double w = two_pi * u;
        double k1 = two_pi * two_pi;
        return -k1 * (a1 * std::sin(w) + b1 * std::cos(w))
             - 4 * k1 * (a2 * std::sin(2 * w) + b2 * std::cos(2 * w));
    }

    double deriv3(double t) const
    {
        double u = t - std::floor(t);
        double w = two_pi * u;
        double k1 = two_pi * two_pi * two_pi;
        return -k1 * (a1 * std::cos(w) - b1 * std::sin(w))
             - 8 * k1 * (a2 * std::cos(2 * w) - b2 * std::sin(2 * w));
    }

    double eval(double t, int order) const
    {
        switch (order) {
            case 0: return value(t);
            case 1: return deriv(t);
            case 2: return deriv2(t);
            case 3: return deriv3(t);
        }
        throw std::invalid_argument("TrigPoly2::eval: order must be 0..3");
    }

    bool is_zero() const
    {
        return a1 == 0 && b1 == 0 && a2 == 0 && b2 == 0;
    }

    TrigPoly2 operator-() const { return {-a1, -b1, -a2, -b2}; }
};

} // namespace fermi

#endif
