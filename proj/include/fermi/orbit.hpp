#ifndef FERMI_ORBIT_HPP
#define FERMI_ORBIT_HPP

#include <cstdint>
#include <vector>

#include "fermi/impact_map.hpp"
#include "fermi/trig_poly.hpp"

namespace fermi {

/// Certified unbounded-orbit schedule: every N bounces the impact time
/// advances by an integer and the velocity by gV/2. t_star holds the first
/// cycle's reference times; everything later follows in closed form.
struct OrbitSchedule {
    int N = 2;
    std::int64_t W = 0;   // time advance of the first cycle
    int V = 1;            // velocity quanta per cycle
    std::int64_t k = 0;   // gap offset used by the N=2 construction
    std::vector<double> t_star;
    double v0_star = 0.0;
};

/// The N=2 schedule of the racket family: t* = [0, 5/12+k], W = 2k+1, V = 1,
/// v0* = g(5/12+k)/2. The schedule is the same for every family member.
OrbitSchedule build_n2_schedule(double g, std::int64_t k);

/// Pustyl'nikov step-1 ladder: requires ḟ(t0) = g/4 (to 1e-12·g), gives the
/// N=1 schedule with v0* = mg/2 and gaps t_{n+1}-t_n = n+m.
OrbitSchedule build_pustylnikov_ladder(const TrigPoly2& f, double t0,
                                       std::int64_t m, double g);

/// Exact schedule point (t*_n, v*_n) in closed form (no solver drift).
ImpactState orbit_point(const TrigPoly2& f, const OrbitSchedule& sched,
                        std::int64_t n, double g);

/// Residuals of the cycle conditions and of following the orbit with the
/// full map. Orbit residuals are measured per cycle with each cycle started
/// at the exact schedule point; free-run shadowing is reported separately
/// (rounding noise grows like the unstable multiplier per cycle, so a free
/// run cannot track a hyperbolic orbit for long).
struct CertificateReport {
    // cycle-condition residuals
    double c1 = 0.0;    // GS-propagated t_N - t_0 - W
    double c2p = 0.0;   // 2(t1*-t0*) + (4/g) ḟ(t1*) - W      (N=2)
    double c3 = 0.0;    // max_j |f(t*_j) - f(t*_0)|
    double c4p = 0.0;   // (4/g) Σ ḟ(t*_j) - V                 (N=2: 4')
    std::vector<double> c4_interior;
    bool conditions_ok = false;

    // anchored orbit-following residuals over the horizon
    int horizon = 0;
    double max_integrality = 0.0;
    double max_velocity_residual = 0.0;
    double max_divdiff = 0.0;
    bool orbit_ok = false;

    // free-run diagnostic: steps a single forward run stays within orbit_tol
    int shadow_steps = 0;

    double condition_tol = 1e-12;
    double orbit_tol = 1e-8;
    bool certified = false;
};

CertificateReport check_cycle_conditions(const TrigPoly2& f,
                                         const OrbitSchedule& sched, double g);

CertificateReport certify_unbounded(const TrigPoly2& f, const OrbitSchedule& sched,
                                    int horizon, const SolverConfig& cfg, double g);

/// Free-run ladder residuals from an arbitrary start (diagnostic / sensitivity
/// probe): max integrality and velocity-ladder residuals over the first
/// `steps` map applications, plus how many steps stayed within tol.
struct FreeRunReport {
    int steps = 0;
    int shadow_steps = 0;
    double max_integrality = 0.0;
    double max_velocity_residual = 0.0;
};
FreeRunReport free_run_ladder(const TrigPoly2& f, const OrbitSchedule& sched,
                              ImpactState start, int steps,
                              const SolverConfig& cfg, double g, double tol);

} // namespace fermi

#endif
