#include "fermi/impact_map.hpp"

#include <cmath>
#include <limits>

#include "fermi/racket_family.hpp"

namespace fermi {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();

// Residual of the forward time equation in the gap variable D = T - t0:
//   F(D) = D - (2/g)v + (2/g)(f(t0+D) - f(t0))/D
struct ForwardEq {
    const TrigPoly2& f;
    double t0, v, g, f0;

    ForwardEq(const TrigPoly2& f_, double t0_, double v_, double g_)
        : f(f_), t0(t0_), v(v_), g(g_), f0(f_.value(t0_)) {}

    double residual(double D) const
    {
        return D - (2 / g) * v + (2 / g) * (f.value(t0 + D) - f0) / D;
    }
    double derivative(double D) const
    {
        double dd = (f.value(t0 + D) - f0) / D;
        return 1 + (2 / g) * (f.deriv(t0 + D) - dd) / D;
    }
};

// Backward time equation in the gap D = t1 - t0 (v1 known):
//   G(D) = D - (2/g)v1 + (4/g)ḟ(t1) - (2/g)(f(t1) - f(t1-D))/D
struct BackwardEq {
    const TrigPoly2& f;
    double t1, v1, g, f1, fd1;

    BackwardEq(const TrigPoly2& f_, double t1_, double v1_, double g_)
        : f(f_), t1(t1_), v1(v1_), g(g_), f1(f_.value(t1_)), fd1(f_.deriv(t1_)) {}

    double residual(double D) const
    {
        return D - (2 / g) * v1 + (4 / g) * fd1 - (2 / g) * (f1 - f.value(t1 - D)) / D;
    }
    double derivative(double D) const
    {
        double dd = (f1 - f.value(t1 - D)) / D;
        return 1 - (2 / g) * (f.deriv(t1 - D) - dd) / D;
    }
};

template <typename Eq>
double bisect(const Eq& eq, double lo, double hi, double flo, double tol, int iters)
{
    for (int i = 0; i < iters && hi - lo > 0.25 * tol; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = eq.residual(mid);
        if ((fm > 0) == (flo > 0)) { lo = mid; flo = fm; }
        else                        hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Newton on the gap equation with a scale-aware residual target; two extra
// polishing iterations after the target is met push the root to roundoff,
// which the hyperbolic pullbacks need.
template <typename Eq>
bool newton(const Eq& eq, double& D, double lo, double hi, double tol, int iters)
{
    double target = std::max(tol, 8 * eps * std::max(std::abs(D), 1.0));
    int polish = 2;
    for (int i = 0; i < iters + polish; ++i) {
        double F = eq.residual(D);
        double Fp = eq.derivative(D);
        if (Fp == 0)
            return false;
        double Dn = D - F / Fp;
        if (!(Dn > lo && Dn < hi))
            return false;
        bool done = std::abs(F) < target;
        D = Dn;
        if (done && --polish < 0)
            return true;
        if (done)
            continue;
        if (i >= iters)
            return false;
    }
    return std::abs(eq.residual(D)) < target;
}

template <typename Eq>
double solve_gap(const Eq& eq, double v, const SolverConfig& cfg, double g,
                 const char* who)
{
    double D0 = 2 * v / g;
    double D = D0;
    double hi = 2 * D0;
    if (newton(eq, D, 0.5, hi, cfg.newton_tol, cfg.max_newton_iters))
        return D;
    if (!cfg.bisection_fallback)
        throw NoConvergence(std::string(who) + ": Newton failed and bisection is off");

    double lo = 1.0;
    hi = 2 * D0;
    for (int widen = 0; widen <= 3; ++widen) {
        double flo = eq.residual(lo), fhi = eq.residual(hi);
        if ((flo > 0) != (fhi > 0)) {
            D = bisect(eq, lo, hi, flo, std::max(cfg.newton_tol, 8 * eps * hi), 200);
            // one Newton cleanup from the bisection root
            newton(eq, D, lo, hi, cfg.newton_tol, cfg.max_newton_iters);
            return D;
        }
        hi *= 2;
    }
    throw NoConvergence(std::string(who) + ": no sign change in bracket");
}

} // namespace

SolverConfig solver_config_for(const TrigPoly2& f, double g, const SolverConfig& base)
{
    SolverConfig cfg = base;
    cfg.velocity_floor = g + 10 * max_abs_derivative(f);
    return cfg;
}

double divided_difference(const TrigPoly2& f, double t1, double t0)
{
    if (std::abs(t1 - t0) < 1e-8)
        return f.deriv(0.5 * (t1 + t0));
    return (f.value(t1) - f.value(t0)) / (t1 - t0);
}

double impact_time(const TrigPoly2& f, const ImpactState& state,
                   const SolverConfig& cfg, double g)
{
    if (state.v <= cfg.velocity_floor)
        throw VelocityTooLow("impact_time: v <= velocity floor");
    ForwardEq eq(f, state.t, state.v, g);
    return state.t + solve_gap(eq, state.v, cfg, g, "impact_time");
}

ImpactState step_forward(const TrigPoly2& f, const ImpactState& state,
                         const SolverConfig& cfg, double g)
{
    double t1 = impact_time(f, state, cfg, g);
    double dd = divided_difference(f, t1, state.t);
    return {t1, state.v + 2 * f.deriv(t1) - 2 * dd};
}

ImpactState step_backward(const TrigPoly2& f, const ImpactState& state,
                          const SolverConfig& cfg, double g)
{
    BackwardEq eq(f, state.t, state.v, g);
    double D0 = 2 * state.v / g;

    // preimage ambiguity scan over the search bracket
    double lo = 1.0, hi = 2 * D0;
    const int scan = 64;
    int sign_changes = 0;
    double prev = eq.residual(lo);
    for (int i = 1; i <= scan; ++i) {
        double x = lo + (hi - lo) * i / scan;
        double cur = eq.residual(x);
        if ((cur > 0) != (prev > 0))
            ++sign_changes;
        prev = cur;
    }
    if (sign_changes > 1)
        throw AmbiguousPreimage("step_backward: multiple preimages in bracket");

    double D = D0;
    if (!newton(eq, D, 0.5, hi, cfg.newton_tol, cfg.max_newton_iters))
        D = solve_gap(eq, state.v, cfg, g, "step_backward");
    double t0 = state.t - D;
    double dd = divided_difference(f, state.t, t0);
    return {t0, state.v - 2 * f.deriv(state.t) + 2 * dd};
}

ImpactState gs_step(const TrigPoly2& f, const ImpactState& state, double g)
{
    double t1 = state.t + (2 / g) * state.v;
    return {t1, state.v + 2 * f.deriv(t1)};
}

Orbit iterate(const TrigPoly2& f, const ImpactState& state0, int n_steps,
              const SolverConfig& cfg, double g, MapMode mode)
{
    if (n_steps < 0)
        throw std::invalid_argument("iterate: n_steps must be >= 0");
    Orbit orbit;
    orbit.states.reserve(n_steps + 1);
    orbit.states.push_back(state0);
    for (int n = 0; n < n_steps; ++n) {
        try {
            const ImpactState& cur = orbit.states.back();
            orbit.states.push_back(mode == MapMode::full
                                       ? step_forward(f, cur, cfg, g)
                                       : gs_step(f, cur, g));
        } catch (const std::exception& e) {
            orbit.failed_index = n;
            orbit.error = e.what();
            break;
        }
    }
    return orbit;
}

} // namespace fermi
