#include "fermi/stable_manifold.hpp"

#include <cmath>
#include <limits>

#include "fermi/linearization.hpp"

namespace fermi {

void ManifoldConfig::validate() const
{
    if (H <= n0)
        throw std::invalid_argument("ManifoldConfig: H must exceed n0");
    if (L < 1)
        throw std::invalid_argument("ManifoldConfig: L must be >= 1");
    if (!(a_max > 0))
        throw std::invalid_argument("ManifoldConfig: a_max must be positive");
    if (samples < 1 || samples % 2 == 0)
        throw std::invalid_argument("ManifoldConfig: samples must be odd");
}

namespace {

// One cycle of the full map in deviation coordinates (τ, ν) around the exact
// schedule, with every f-evaluation at schedule phase + small offset. Working
// with deviations keeps the arithmetic at roundoff of the *deviation* scale;
// pushing absolute states through the map instead would quantize τ at
// eps·t, which at cycle 60 (t ~ 6e3) already eats the 1e-12 tail budget.
Vec2 cycle_map_deviation(const TrigPoly2& f, const OrbitSchedule& sched,
                         std::int64_t m, Vec2 y, const SolverConfig& cfg, double g)
{
    const int N = sched.N;
    for (int j = 0; j < N; ++j) {
        double phase0 = sched.t_star[j] - std::floor(sched.t_star[j]);
        double tnext = (j + 1 < N) ? sched.t_star[j + 1]
                                   : sched.t_star[0] + double(sched.W);
        double phase1 = tnext - std::floor(tnext);
        double gap0 = tnext - sched.t_star[j];
        double vstar = sched.v0_star;
        for (int i = 1; i <= j; ++i)
            vstar += 2 * f.deriv(sched.t_star[i]);
        vstar += double(m) * g * sched.V / 2;
        double gap = gap0 + double(m) * sched.V;
        if (vstar + y.y <= cfg.velocity_floor)
            throw VelocityTooLow("cycle_map_deviation: velocity at/below floor");

        // gap equation for the deviation d = D - gap*:
        //   (gap* + d) - (2/g)(v* + ν) + (2/g) f[t1, t0] = 0,
        // with f[t1,t0] = (f(φ1 + τ + d) - f(φ0 + τ)) / (gap* + d)
        double base = gap - (2 / g) * vstar;
        double f0 = f.value(phase0 + y.x);
        double d = (2 / g) * y.y;
        bool ok = false;
        for (int it = 0; it < cfg.max_newton_iters + 2; ++it) {
            double D = gap + d;
            double dd = (f.value(phase1 + y.x + d) - f0) / D;
            double F = base + d - (2 / g) * y.y + (2 / g) * dd;
            double Fp = 1 + (2 / g) * (f.deriv(phase1 + y.x + d) - dd) / D;
            double step = F / Fp;
            d -= step;
            if (std::abs(step) < 1e-16 * std::max(1.0, std::abs(d))) {
                ok = true;
                break;
            }
        }
        if (!ok)
            throw NoConvergence("cycle_map_deviation: gap iteration stalled");
        double D = gap + d;
        double tau1 = y.x + d;
        double dd = (f.value(phase1 + tau1) - f0) / D;
        // v*_{n+1} = v*_n + 2 f'(φ1), so the kick enters as a difference
        double nu1 = y.y + 2 * (f.deriv(phase1 + tau1) - f.deriv(phase1)) - 2 * dd;
        y = {tau1, nu1};
    }
    return y;
}

} // namespace

Vec2 remainder(const TrigPoly2& f, const OrbitSchedule& sched, int m,
               const Vec2& y, const SolverConfig& cfg, double g)
{
    Mat2 A = cycle_matrix_at(f, sched, g);
    Vec2 out = cycle_map_deviation(f, sched, m, y, cfg, g);
    Vec2 lin = A * y;
    return {out.x - lin.x, out.y - lin.y};
}

ThetaSolution solve_theta_custom(const std::function<Vec2(int, const Vec2&)>& g_fn,
                                 const SpectralSplit& split, double a,
                                 const ManifoldConfig& mcfg)
{
    mcfg.validate();
    const int n0 = mcfg.n0, H = mcfg.H;
    const int count = H - n0 + 1;
    const double ls = split.lambda_s, lu = split.lambda_u;

    ThetaSolution out;
    out.n0 = n0;
    out.H = H;
    out.theta.assign(count, Vec2{});
    std::vector<Vec2> G(count);

    auto eval_g = [&](const std::vector<Vec2>& th) {
        for (int i = 0; i < count; ++i)
            G[i] = g_fn(n0 + i, th[i]);
    };
    // one sweep of the scheme, reading kicks from G
    auto sweep = [&](std::vector<Vec2>& next) {
        double S = 0.0;                        // Σ_{s<n} ls^{n-s-1} G_s (stable)
        double pw = 1.0;                       // ls^{n-n0}
        for (int i = 0; i < count; ++i) {
            next[i].x = pw * a + S;
            S = ls * S + G[i].x;
            pw *= ls;
        }
        double T = 0.0;                        // Σ_{s>=n} lu^{n-s-1} G_s (unstable)
        for (int i = count - 1; i >= 0; --i) {
            T = (G[i].y + T) / lu;
            next[i].y = -T;
        }
    };

    std::vector<Vec2> next(count);
    double best = std::numeric_limits<double>::infinity();
    int bad_sweeps = 0;
    for (int l = 0; l < mcfg.L; ++l) {
        eval_g(out.theta);
        sweep(next);
        double d = 0;
        for (int i = 0; i < count; ++i)
            d = std::max(d, (next[i] - out.theta[i]).norm_inf());
        out.sweep_deltas.push_back(d);
        out.theta.swap(next);
        if (d < best)
            best = d;
        else if (l >= 3 && d > 4 * best && d > 1e-10 * std::max(1.0, std::abs(a)))
            // a contracting sweep at least halves the update; growth means
            // the remainder is outside its contraction region
            if (++bad_sweeps >= 2)
                throw DivergenceDetected("solve_theta: sweep updates are growing");
        if (d < 1e-15 || (l >= 3 && d < 1e-12 && d >= 0.5 * best))
            break;   // converged to the solver-noise plateau
    }

    eval_g(out.theta);
    if (std::abs(G[count - 1].y) / lu > 1e-12)
        throw TailTruncationTooCoarse("solve_theta: tail term at H exceeds 1e-12");
    sweep(next);
    out.residual.resize(count);
    for (int i = 0; i < count; ++i) {
        out.residual[i] = (next[i] - out.theta[i]).norm_inf();
        out.max_residual = std::max(out.max_residual, out.residual[i]);
    }
    return out;
}

ThetaSolution solve_theta(const TrigPoly2& f, const OrbitSchedule& sched,
                          const SpectralSplit& split, double a,
                          const ManifoldConfig& mcfg, const SolverConfig& scfg,
                          double g)
{
    auto g_fn = [&](int s, const Vec2& th) -> Vec2 {
        Vec2 y = split.P_inv * th;
        return split.P * remainder(f, sched, s, y, scfg, g);
    };
    return solve_theta_custom(g_fn, split, a, mcfg);
}

namespace {

SolverConfig tighten(const SolverConfig& cfg)
{
    SolverConfig t = cfg;
    t.newton_tol = std::min(cfg.newton_tol, 1e-13);
    return t;
}

// distance to the exact schedule point of cycle m
double cycle_distance(const TrigPoly2& f, const OrbitSchedule& sched,
                      const ImpactState& x, std::int64_t m, double g)
{
    ImpactState ref = orbit_point(f, sched, m * sched.N, g);
    return std::hypot(x.t - ref.t, x.v - ref.v);
}

} // namespace

ManifoldResult manifold_at_n0(const TrigPoly2& f, const OrbitSchedule& sched,
                              const ManifoldConfig& mcfg, const SolverConfig& scfg,
                              double g)
{
    mcfg.validate();
    SpectralSplit split = spectral_split(cycle_matrix_at(f, sched, g));
    SolverConfig tight = tighten(scfg);

    ManifoldResult res;
    res.lambda_s = split.lambda_s;
    res.lambda_u = split.lambda_u;
    res.a_max_used = mcfg.a_max;

    double anchor_scale = std::pow(split.lambda_s, mcfg.n0);
    ImpactState x_n0 = orbit_point(f, sched, std::int64_t(mcfg.n0) * sched.N, g);

    for (int attempt = 0;; ++attempt) {
        res.samples.clear();
        res.n_accepted = 0;
        bool diverged = false;
        for (int i = 0; i < mcfg.samples && !diverged; ++i) {
            double a = mcfg.samples == 1
                     ? 0.0
                     : -res.a_max_used + 2 * res.a_max_used * i / (mcfg.samples - 1);
            ManifoldSample sample;
            sample.a = a;
            try {
                ThetaSolution th = solve_theta(f, sched, split, anchor_scale * a,
                                               mcfg, scfg, g);
                sample.theta_residual = th.max_residual;
                Vec2 dev = split.P_inv * th.theta[0];
                sample.state_n0 = {x_n0.t + dev.x, x_n0.v + dev.y};

                ImpactState x = sample.state_n0;
                for (int jstep = 0; jstep < mcfg.n0 * sched.N; ++jstep)
                    x = step_backward(f, x, tight, g);
                sample.state = x;

                // forward contraction fit against the exact schedule; stop at
                // the noise valley where forward-injected rounding error
                // (growing at lambda_u per cycle) overtakes the decaying signal
                double prev = cycle_distance(f, sched, x, 0, g);
                double logsum = 0;
                int nratio = 0;
                bool measuring = true;
                ImpactState y = x;
                double conv_tol = mcfg.convergence_tol * std::max(1.0, g);
                for (int m = 1; m <= mcfg.decay_cycles; ++m) {
                    for (int jstep = 0; jstep < sched.N; ++jstep)
                        y = step_forward(f, y, scfg, g);
                    double d = cycle_distance(f, sched, y, m, g);
                    if (sample.convergence_cycle < 0 && d < conv_tol)
                        sample.convergence_cycle = m;
                    if (measuring) {
                        double r = d / prev;
                        if (prev > mcfg.decay_floor && d > mcfg.decay_floor && r < 0.5) {
                            logsum += std::log(r);
                            ++nratio;
                        } else
                            measuring = false;
                    }
                    if (!measuring && sample.convergence_cycle >= 0)
                        break;
                    prev = d;
                }
                sample.measured_ratios = nratio;
                sample.decay_ratio = nratio > 0 ? std::exp(logsum / nratio) : 0.0;
                sample.accepted = sample.theta_residual < mcfg.theta_tol
                               && sample.decay_ratio < 1.0;
                if (!sample.accepted)
                    sample.note = "residual or contraction check failed";
            } catch (const DivergenceDetected&) {
                diverged = true;
                break;
            } catch (const std::exception& e) {
                sample.accepted = false;
                sample.note = e.what();
            }
            res.samples.push_back(sample);
        }
        if (!diverged)
            break;
        if (attempt >= mcfg.max_halvings)
            throw DivergenceDetected("manifold_at_n0: scheme diverges even after "
                                     "halving a_max " + std::to_string(attempt) +
                                     " times");
        res.a_max_used /= 2;
        ++res.halvings;
    }
    res.n_accepted = 0;
    for (const auto& s : res.samples)
        res.n_accepted += s.accepted ? 1 : 0;
    return res;
}

ContinuumSampleReport follow_point(const TrigPoly2& f, const OrbitSchedule& sched,
                                   const ImpactState& start, int horizon_cycles,
                                   const SolverConfig& scfg, double g,
                                   double gain_tol, int max_transient_cycles)
{
    ContinuumSampleReport rep;
    const int N = sched.N;
    const double per_cycle = g * sched.V / 2;
    double conv_tol = 1e-8 * std::max(1.0, g);   // v-deviations scale with g

    ImpactState x = start;
    double v_at_conv = 0;
    bool failed = false;
    std::string fail_note;
    for (int m = 1; m <= horizon_cycles; ++m) {
        try {
            for (int j = 0; j < N; ++j)
                x = step_forward(f, x, scfg, g);
        } catch (const std::exception& e) {
            failed = true;
            fail_note = e.what();
            break;
        }
        double ladder_dev = std::abs(x.v - start.v - m * per_cycle);
        double d = cycle_distance(f, sched, x, m, g);
        if (rep.convergence_cycle < 0) {
            rep.max_ladder_dev = std::max(rep.max_ladder_dev, ladder_dev);
            if (rep.first_ladder_break < 0 && ladder_dev > gain_tol)
                rep.first_ladder_break = m;
            if (d < conv_tol) {
                rep.convergence_cycle = m;
                v_at_conv = x.v;
            }
        }
        rep.raw_free_run_gain = x.v - start.v;
    }

    if (failed && rep.convergence_cycle < 0) {
        rep.pass = false;
        rep.note = "solver failure: " + fail_note;
        return rep;
    }
    if (rep.convergence_cycle < 0 || rep.convergence_cycle > max_transient_cycles) {
        rep.pass = false;
        rep.gain = rep.raw_free_run_gain;
        rep.gain_error = rep.gain - horizon_cycles * per_cycle;
        rep.note = "did not converge onto the orbit within the transient allowance";
        return rep;
    }
    // measured gain to convergence, certified ladder afterwards (a free run
    // past convergence only re-amplifies rounding noise)
    rep.gain = (v_at_conv - start.v)
             + (horizon_cycles - rep.convergence_cycle) * per_cycle;
    rep.gain_error = rep.gain - horizon_cycles * per_cycle;
    rep.pass = std::abs(rep.gain_error) <= gain_tol;
    if (!rep.pass)
        rep.note = "velocity gain off the ladder";
    return rep;
}

ContinuumReport verify_continuum(const TrigPoly2& f, const OrbitSchedule& sched,
                                 const std::vector<ManifoldSample>& samples,
                                 int horizon_cycles, const SolverConfig& scfg,
                                 double g, double gain_tol,
                                 int max_transient_cycles)
{
    ContinuumReport rep;
    rep.horizon_cycles = horizon_cycles;
    rep.gain_tol = gain_tol;
    rep.all_pass = !samples.empty();
    rep.min_gain = std::numeric_limits<double>::infinity();
    for (const auto& s : samples) {
        ContinuumSampleReport row = follow_point(f, sched, s.state, horizon_cycles,
                                                 scfg, g, gain_tol,
                                                 max_transient_cycles);
        row.a = s.a;
        rep.min_gain = std::min(rep.min_gain, row.gain);
        rep.max_gain_error = std::max(rep.max_gain_error, std::abs(row.gain_error));
        rep.all_pass = rep.all_pass && row.pass;
        rep.rows.push_back(row);
    }
    return rep;
}

} // namespace fermi
