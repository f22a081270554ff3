#include "fermi/linearization.hpp"

#include <algorithm>
#include <cmath>

#include "fermi/racket_family.hpp"

namespace fermi {

Mat2 local_matrix(const TrigPoly2& f, double t_star, double g)
{
    double c = f.deriv2(t_star);
    return {1.0, 2 / g, 2 * c, 1 + (4 / g) * c};
}

Mat2 cycle_matrix_at(const TrigPoly2& f, const OrbitSchedule& sched, double g)
{
    Mat2 A = local_matrix(f, sched.t_star[0], g);
    for (int j = sched.N - 1; j >= 1; --j)
        A = A * local_matrix(f, sched.t_star[j], g);
    return A;
}

Mat2 fd_jacobian(const TrigPoly2& f, const ImpactState& state,
                 const SolverConfig& cfg, double g)
{
    double ht = std::min(1e-6 * std::max(1.0, std::abs(state.v)), 1e-5);
    double hv = std::min(1e-6 * std::max(1.0, std::abs(state.v)), 5e-6 * g);
    ImpactState tp = step_forward(f, {state.t + ht, state.v}, cfg, g);
    ImpactState tm = step_forward(f, {state.t - ht, state.v}, cfg, g);
    ImpactState vp = step_forward(f, {state.t, state.v + hv}, cfg, g);
    ImpactState vm = step_forward(f, {state.t, state.v - hv}, cfg, g);
    return {(tp.t - tm.t) / (2 * ht), (vp.t - vm.t) / (2 * hv),
            (tp.v - tm.v) / (2 * ht), (vp.v - vm.v) / (2 * hv)};
}

double jacobian_det(const TrigPoly2& f, const ImpactState& before,
                    const ImpactState& after)
{
    return (before.v - f.deriv(before.t)) / (after.v - f.deriv(after.t));
}

std::vector<ScanRow> scan_family(const std::vector<double>& s_grid, double g,
                                 std::int64_t k)
{
    if (s_grid.empty())
        throw std::invalid_argument("scan_family: empty grid");
    OrbitSchedule sched = build_n2_schedule(g, k);
    std::vector<ScanRow> rows;
    rows.reserve(s_grid.size());
    for (double s : s_grid) {
        TrigPoly2 p = family_coefficients({s, g});
        ScanRow row;
        row.s = s;
        row.max_pdot_over_g = true_max_derivative(p) / g;
        row.pt0 = p.deriv2(sched.t_star[0]) / g;
        row.pt1 = p.deriv2(sched.t_star[1]) / g;
        Mat2 A = cycle_matrix_at(p, sched, g);
        auto tc = trace_criterion(A);
        row.trace = tc.trace;
        row.hyperbolic = tc.hyperbolic;
        rows.push_back(row);
    }
    return rows;
}

} // namespace fermi
