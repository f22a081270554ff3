#ifndef FERMI_IMPACT_MAP_HPP
#define FERMI_IMPACT_MAP_HPP

#include <string>
#include <vector>

#include "fermi/errors.hpp"
#include "fermi/trig_poly.hpp"

namespace fermi {

/// One impact event: time of impact and outgoing velocity.
struct ImpactState {
    double t = 0.0;
    double v = 0.0;
};

struct SolverConfig {
    double newton_tol = 1e-12;
    int max_newton_iters = 50;
    bool bisection_fallback = true;
    double velocity_floor = 0.0;   // 0 means "not set"; see solver_config_for
};

/// Fills velocity_floor = g + 10·max|ḟ| for the given racket motion.
SolverConfig solver_config_for(const TrigPoly2& f, double g,
                               const SolverConfig& base = SolverConfig{});

/// Divided difference f[t1,t0] = (f(t1)-f(t0))/(t1-t0); switches to the
/// derivative limit when |t1-t0| < 1e-8 to avoid cancellation.
double divided_difference(const TrigPoly2& f, double t1, double t0);

/// Next impact time: the solution T >= t+1 of
///   T = t + (2/g)v - (2/g) f[T,t],
/// Newton from T0 = t + 2v/g, bisection fallback on [t+1, t+4v/g]
/// (bracket widened at most 3 times). Solved internally in the gap
/// variable T-t so the residual is unaffected by the size of t.
double impact_time(const TrigPoly2& f, const ImpactState& state,
                   const SolverConfig& cfg, double g);

/// Full impact map P_f: (t0,v0) -> (t1, v0 + 2ḟ(t1) - 2 f[t1,t0]).
ImpactState step_forward(const TrigPoly2& f, const ImpactState& state,
                         const SolverConfig& cfg, double g);

/// Inverse of step_forward. Scans the preimage bracket for sign changes and
/// refuses to guess when two candidate preimages are present.
ImpactState step_backward(const TrigPoly2& f, const ImpactState& state,
                          const SolverConfig& cfg, double g);

/// Generalized standard map: t1 = t0 + (2/g)v0, v1 = v0 + 2ḟ(t1).
ImpactState gs_step(const TrigPoly2& f, const ImpactState& state, double g);

enum class MapMode { full, gs };

/// Orbit of n_steps map applications (states[0] is the initial state).
/// On a step failure the partial orbit is kept and failed_index names the
/// step that failed.
struct Orbit {
    std::vector<ImpactState> states;
    int failed_index = -1;
    std::string error;
    bool ok() const { return failed_index < 0; }
};

Orbit iterate(const TrigPoly2& f, const ImpactState& state0, int n_steps,
              const SolverConfig& cfg, double g, MapMode mode = MapMode::full);

} // namespace fermi

#endif
