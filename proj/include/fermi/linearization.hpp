#ifndef FERMI_LINEARIZATION_HPP
#define FERMI_LINEARIZATION_HPP

#include <vector>

#include "fermi/mat2.hpp"
#include "fermi/orbit.hpp"

namespace fermi {

/// Orbit linearization block at one impact phase:
///   A(t*) = [ 1        2/g            ]
///           [ 2f̈(t*)   1 + (4/g)f̈(t*) ]
Mat2 local_matrix(const TrigPoly2& f, double t_star, double g);

/// Cycle product A = A_0 A_{N-1} ... A_1 built from the schedule phases.
Mat2 cycle_matrix_at(const TrigPoly2& f, const OrbitSchedule& sched, double g);

/// Central-difference Jacobian of the full map at a state. Step sizes keep
/// the induced impact-phase shift small (~1e-5 of a period); a v-step hv
/// moves the next impact time by 2hv/g, so growing hv with v would alias
/// the periodic kick.
Mat2 fd_jacobian(const TrigPoly2& f, const ImpactState& state,
                 const SolverConfig& cfg, double g);

/// Exact Jacobian determinant of the full map, (v0 - ḟ(t0))/(v1 - ḟ(t1)).
double jacobian_det(const TrigPoly2& f, const ImpactState& before,
                    const ImpactState& after);

/// One row of a family scan: the membership checks for the interval on which
/// the construction yields a hyperbolic cycle.
struct ScanRow {
    double s;
    double max_pdot_over_g;   // true max ṗ_s / g, must be < 1/4
    double pt0;               // p̈_s(t0*)/g
    double pt1;               // p̈_s(t1*)/g
    double trace;
    bool hyperbolic;
    bool in_interval() const
    {
        return max_pdot_over_g < 0.25 && pt0 > 0 && pt1 > 0;
    }
};

std::vector<ScanRow> scan_family(const std::vector<double>& s_grid, double g,
                                 std::int64_t k);

} // namespace fermi

#endif
