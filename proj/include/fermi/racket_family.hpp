#ifndef FERMI_RACKET_FAMILY_HPP
#define FERMI_RACKET_FAMILY_HPP

#include <type_traits>

#include "fermi/trig_poly.hpp"

namespace fermi {

/// One-parameter racket motion family p_s(t): the degree-2 trigonometric
/// polynomials whose N=2 bouncing orbit (reference times t0*=0, t1*=5/12+k)
/// gains g/2 of velocity per cycle. All four coefficients are linear in g
/// and affine in s.
struct FamilyParams {
    double s = 0.0;
    double g = 1.0;
};

/// Closed-form coefficients of p_s. Rejects g <= 0.
TrigPoly2 family_coefficients(const FamilyParams& params);

/// Dimensionless bound p̄(s) with max ṗ_s <= g·p̄(s),
/// p̄ = [2π√(a1²+b1²) + 4π√(a2²+b2²)]/g. Rejects g <= 0.
double derivative_bound(const FamilyParams& params);

/// Global maximum of ṗ over one period: dense grid (>= 4096 nodes) with the
/// interior maxima polished by bisecting p̈ across its sign change. Never
/// returns less than the sampled maximum.
double true_max_derivative(const TrigPoly2& p);

/// max |ṗ| over one period (max of ṗ and of -ṗ).
double max_abs_derivative(const TrigPoly2& p);

struct MinimizeResult {
    double s_min;
    double value;
    int evaluations;
};

/// Golden-section minimization of derivative_bound over [s_lo, s_hi].
/// Throws std::invalid_argument for a degenerate bracket and
/// std::domain_error when the prescan finds no interior minimum.
MinimizeResult minimize_bound(double s_lo, double s_hi, double tol);

/// Same bracketing minimizer for an arbitrary scalar function.
template <typename F>
MinimizeResult golden_minimize(F&& fn, double s_lo, double s_hi, double tol);

namespace detail {
MinimizeResult golden_minimize_impl(double (*fn)(double, void*), void* ctx,
                                    double s_lo, double s_hi, double tol);
}

template <typename F>
MinimizeResult golden_minimize(F&& fn, double s_lo, double s_hi, double tol)
{
    auto thunk = [](double x, void* ctx) -> double {
        return (*static_cast<std::remove_reference_t<F>*>(ctx))(x);
    };
    return detail::golden_minimize_impl(thunk, &fn, s_lo, s_hi, tol);
}

} // namespace fermi

#endif
