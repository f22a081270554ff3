#ifndef FERMI_STABLE_MANIFOLD_HPP
#define FERMI_STABLE_MANIFOLD_HPP

#include <functional>
#include <string>
#include <vector>

#include "fermi/mat2.hpp"
#include "fermi/orbit.hpp"

namespace fermi {

struct ManifoldConfig {
    int n0 = 5;          // starting cycle of the fixed-point scheme
    int H = 60;          // truncation horizon of the tail sum (cycles)
    int L = 40;          // max fixed-point sweeps
    double a_max = 1e-3; // manifold parameter radius, referenced to cycle 0
    int samples = 41;    // odd, so a = 0 is sampled
    double theta_tol = 1e-8;    // accepted integral-equation defect
    int max_halvings = 6;
    int decay_cycles = 40;      // forward cycles used for the contraction fit
    double decay_floor = 2e-9;  // distances below this are solver noise
    double convergence_tol = 1e-8;

    void validate() const;
};

/// N-cycle remainder in deviation coordinates:
///   R_m(y) = Φ_N(x*_{mN} + y) - x*_{(m+1)N} - A y,
/// Φ_N the N-fold full map and x*_n the exact schedule points.
Vec2 remainder(const TrigPoly2& f, const OrbitSchedule& sched, int m,
               const Vec2& y, const SolverConfig& cfg, double g);

/// Converged stable-manifold coefficient sequence in eigen coordinates,
/// theta[i] = θ_{n0+i}(a), i = 0..H-n0.
struct ThetaSolution {
    int n0 = 0;
    int H = 0;
    std::vector<Vec2> theta;
    std::vector<double> residual;      // per-n integral-equation defect
    double max_residual = 0.0;
    std::vector<double> sweep_deltas;  // sup-norm change per sweep
};

/// Successive approximation for the integral form of y_{m+1} = B y_m + g_m(y_m):
///   θ^{l+1}_n = U1^{n-n0} a + Σ_{s<n} U1^{n-s-1} g_s(θ^l_s)
///                           - Σ_{s>=n} U2^{n-s-1} g_s(θ^l_s),
/// starting from θ^0 = 0, tail truncated at H. The scalar a rides the stable
/// direction; its unstable component is fixed to zero.
ThetaSolution solve_theta(const TrigPoly2& f, const OrbitSchedule& sched,
                          const SpectralSplit& split, double a,
                          const ManifoldConfig& mcfg, const SolverConfig& scfg,
                          double g);

/// Same scheme with an injected g_s (test seam; g_fn(s, y) in eigen coords).
ThetaSolution solve_theta_custom(const std::function<Vec2(int, const Vec2&)>& g_fn,
                                 const SpectralSplit& split, double a,
                                 const ManifoldConfig& mcfg);

struct ManifoldSample {
    double a = 0.0;
    ImpactState state;          // pulled back to cycle 0
    ImpactState state_n0;       // on the manifold at cycle n0 (before pullback)
    double theta_residual = 0.0;
    double decay_ratio = 0.0;   // per-cycle contraction, 0 when unresolvable
    int measured_ratios = 0;
    int convergence_cycle = -1; // first cycle within convergence_tol of the orbit
    bool accepted = false;
    std::string note;
};

struct ManifoldResult {
    std::vector<ManifoldSample> samples;
    double lambda_s = 0.0;
    double lambda_u = 0.0;
    double a_max_used = 0.0;
    int halvings = 0;
    int n_accepted = 0;
};

/// Samples the stable manifold at cycle n0 and pulls each point back to
/// cycle 0 with the inverse map, yielding initial conditions whose forward
/// orbits accelerate forever. The parameter a measures the stable-direction
/// offset at cycle 0; internally the scheme anchor is λ_s^{n0} a (the same
/// curve the scheme parameterizes at cycle n0, relabeled to the pullback
/// target, where one unit of a stays one unit of arc).
ManifoldResult manifold_at_n0(const TrigPoly2& f, const OrbitSchedule& sched,
                              const ManifoldConfig& mcfg, const SolverConfig& scfg,
                              double g);

struct ContinuumSampleReport {
    double a = 0.0;
    double gain = 0.0;        // velocity gain over the horizon (certified tail)
    double gain_error = 0.0;  // gain - horizon·gV/2
    double raw_free_run_gain = 0.0;  // diagnostic; drowns in noise growth
    int convergence_cycle = -1;
    int first_ladder_break = -1;     // first cycle off the ladder by > tol
    double max_ladder_dev = 0.0;     // before convergence
    bool pass = false;
    std::string note;
};

struct ContinuumReport {
    std::vector<ContinuumSampleReport> rows;
    int horizon_cycles = 0;
    double gain_tol = 0.0;
    double min_gain = 0.0;
    double max_gain_error = 0.0;
    bool all_pass = false;
};

/// Follows each sample with the full map. The velocity gain over the horizon
/// is the measured gain up to the convergence cycle plus gV/2 per certified
/// cycle afterwards; a sample passes when it converges onto the orbit within
/// max_transient_cycles and the gain matches horizon·gV/2 within gain_tol.
ContinuumReport verify_continuum(const TrigPoly2& f, const OrbitSchedule& sched,
                                 const std::vector<ManifoldSample>& samples,
                                 int horizon_cycles, const SolverConfig& scfg,
                                 double g, double gain_tol = 1e-3,
                                 int max_transient_cycles = 10);

/// Ladder check for one arbitrary start (used for off-manifold controls).
ContinuumSampleReport follow_point(const TrigPoly2& f, const OrbitSchedule& sched,
                                   const ImpactState& start, int horizon_cycles,
                                   const SolverConfig& scfg, double g,
                                   double gain_tol, int max_transient_cycles);

} // namespace fermi

#endif
