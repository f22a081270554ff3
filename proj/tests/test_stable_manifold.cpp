#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "fermi/linearization.hpp"
#include "fermi/racket_family.hpp"
#include "fermi/stable_manifold.hpp"

using namespace fermi;

namespace {

const double sbar = 0.009569094523943;
const double g = 1.0;

struct Setup {
    TrigPoly2 f = family_coefficients({sbar, g});
    OrbitSchedule sched = build_n2_schedule(g, 20);
    SolverConfig scfg = solver_config_for(f, g);
    SpectralSplit split = spectral_split(cycle_matrix_at(f, sched, g));
};

} // namespace

TEST_CASE("remainder agrees with the raw two-step construction")
{
    Setup su;
    Mat2 A = cycle_matrix_at(su.f, su.sched, g);
    for (int m : {0, 2, 8}) {
        for (double rad : {1e-3, 1e-4}) {
            for (int i = 0; i < 4; ++i) {
                double ang = 2 * M_PI * i / 4 + 0.3;
                Vec2 y{rad * std::cos(ang), rad * std::sin(ang)};
                Vec2 dev = remainder(su.f, su.sched, m, y, su.scfg, g);
                // raw route: absolute states through the full map
                ImpactState anchor = orbit_point(su.f, su.sched, 2 * m, g);
                ImpactState target = orbit_point(su.f, su.sched, 2 * (m + 1), g);
                ImpactState x{anchor.t + y.x, anchor.v + y.y};
                x = step_forward(su.f, x, su.scfg, g);
                x = step_forward(su.f, x, su.scfg, g);
                Vec2 lin = A * y;
                Vec2 raw{x.t - target.t - lin.x, x.v - target.v - lin.y};
                CHECK((dev - raw).norm_inf() < 1e-10);
            }
        }
    }
}

TEST_CASE("remainder vanishes on the orbit and shrinks along it")
{
    Setup su;
    for (int m : {0, 3, 10}) {
        Vec2 r0 = remainder(su.f, su.sched, m, {0, 0}, su.scfg, g);
        CHECK(r0.norm() < 1e-12);
    }

    // |R_m(y)|/|y| on a small circle: bounded as |y| shrinks (first-order
    // coefficient is O(1/v), not zero), and decreasing in m
    auto lip = [&](int m, double rad) {
        double worst = 0;
        for (int i = 0; i < 8; ++i) {
            double ang = 2 * M_PI * i / 8;
            Vec2 y{rad * std::cos(ang), rad * std::sin(ang)};
            worst = std::max(worst,
                             remainder(su.f, su.sched, m, y, su.scfg, g).norm() / rad);
        }
        return worst;
    };
    double r3 = lip(1, 1e-3), r4 = lip(1, 1e-4);
    CHECK(r4 < 10 * r3);
    double l1 = lip(1, 1e-4), l10 = lip(10, 1e-4), l30 = lip(30, 1e-4);
    CHECK(l10 < l1);
    CHECK(l30 < l10);
}

TEST_CASE("solve_theta: zero parameter gives the zero sequence")
{
    Setup su;
    ManifoldConfig mcfg;
    ThetaSolution th = solve_theta(su.f, su.sched, su.split, 0.0, mcfg, su.scfg, g);
    for (const auto& v : th.theta)
        CHECK(v.norm() < 1e-11);
    CHECK(th.max_residual < 1e-10);
}

TEST_CASE("solve_theta with zeroed remainder is the pure linear decay")
{
    Setup su;
    ManifoldConfig mcfg;
    double a = 1e-4;
    auto zero_g = [](int, const Vec2&) { return Vec2{0, 0}; };
    ThetaSolution th = solve_theta_custom(zero_g, su.split, a, mcfg);
    for (int i = 0; i < int(th.theta.size()); ++i) {
        CHECK(th.theta[i].x ==
              doctest::Approx(std::pow(su.split.lambda_s, i) * a).epsilon(1e-14));
        CHECK(th.theta[i].y == 0.0);
    }
}

TEST_CASE("solve_theta at a = 1e-4: residuals, contraction, difference equation")
{
    Setup su;
    ManifoldConfig mcfg;
    double a = 1e-4;
    ThetaSolution th = solve_theta(su.f, su.sched, su.split, a, mcfg, su.scfg, g);
    CHECK(th.max_residual < 1e-10);
    for (double r : th.residual)
        CHECK(r < 1e-10);

    // sweep updates halve (at least) until they reach the noise plateau
    const auto& d = th.sweep_deltas;
    REQUIRE(d.size() >= 2);
    for (size_t l = 1; l < d.size(); ++l)
        CHECK((d[l] <= 0.5 * d[l - 1] || d[l] < 1e-12));

    // the converged sequence satisfies y_{n+1} = B y_n + g_n(y_n)
    for (int i = 0; i + 1 < int(th.theta.size()); ++i) {
        int n = mcfg.n0 + i;
        Vec2 y = su.split.P_inv * th.theta[i];
        Vec2 gn = su.split.P * remainder(su.f, su.sched, n, y, su.scfg, g);
        Vec2 pred{su.split.lambda_s * th.theta[i].x + gn.x,
                  su.split.lambda_u * th.theta[i].y + gn.y};
        CHECK((pred - th.theta[i + 1]).norm_inf() < 1e-9);
    }

    // uniform geometric decay |theta_n| <= C alpha^(n-n0)
    double alpha = su.split.lambda_s * 1.2;
    double C = 2 * std::abs(a);
    for (int i = 0; i < int(th.theta.size()); ++i)
        CHECK(th.theta[i].norm() <= C * std::pow(alpha, i) + 1e-12);
}

TEST_CASE("solve_theta diagnostics: divergence and tail truncation")
{
    Setup su;
    ManifoldConfig mcfg;
    auto blowup = [](int, const Vec2& y) -> Vec2 {
        return {5.0 * y.x + 1e-3, 5.0 * y.y + 1e-3};
    };
    CHECK_THROWS_AS(solve_theta_custom(blowup, su.split, 1e-3, mcfg),
                    DivergenceDetected);

    auto fat_tail = [&](int s, const Vec2&) -> Vec2 {
        return {0.0, s == mcfg.H ? 1e-6 : 0.0};
    };
    CHECK_THROWS_AS(solve_theta_custom(fat_tail, su.split, 1e-3, mcfg),
                    TailTruncationTooCoarse);

    ManifoldConfig bad = mcfg;
    bad.samples = 40;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = mcfg;
    bad.H = bad.n0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("manifold_at_n0: samples, pullback, contraction")
{
    Setup su;
    ManifoldConfig mcfg;
    ManifoldResult res = manifold_at_n0(su.f, su.sched, mcfg, su.scfg, g);
    REQUIRE(int(res.samples.size()) == mcfg.samples);
    CHECK(res.halvings == 0);
    CHECK(res.n_accepted == mcfg.samples);
    CHECK(res.lambda_s == doctest::Approx(0.0876860753502329).epsilon(1e-10));
    CHECK(res.lambda_u == doctest::Approx(11.4043192833735).epsilon(1e-10));

    const ManifoldSample& center = res.samples[mcfg.samples / 2];
    CHECK(center.a == 0.0);
    CHECK(std::abs(center.state.t - su.sched.t_star[0]) < 1e-8);
    CHECK(std::abs(center.state.v - su.sched.v0_star) < 1e-8);

    for (const auto& s : res.samples) {
        CHECK(s.theta_residual < 1e-8);
        CHECK(s.decay_ratio < 1.0);
        if (std::abs(s.a) > 1e-4) {
            CHECK(s.measured_ratios >= 3);
            CHECK(s.decay_ratio == doctest::Approx(res.lambda_s).epsilon(0.2));
            CHECK(s.convergence_cycle >= 0);
            CHECK(s.convergence_cycle <= 10);
        }
    }

    // graph property: cycle-0 points are a monotone arc in a, evenly spaced
    for (int i = 1; i < mcfg.samples; ++i) {
        const auto& lo = res.samples[i - 1];
        const auto& hi = res.samples[i];
        CHECK(hi.state.t > lo.state.t);
        double gap = std::hypot(hi.state.t - lo.state.t, hi.state.v - lo.state.v);
        CHECK(gap < 10 * (2 * mcfg.a_max / (mcfg.samples - 1)));
    }

    // pullback consistency: forward N*n0 steps returns to the cycle-n0 state
    for (int idx : {0, mcfg.samples / 2, mcfg.samples - 1}) {
        ImpactState x = res.samples[idx].state;
        for (int j = 0; j < mcfg.n0 * su.sched.N; ++j)
            x = step_forward(su.f, x, su.scfg, g);
        CHECK(std::abs(x.t - res.samples[idx].state_n0.t) < 1e-8);
        CHECK(std::abs(x.v - res.samples[idx].state_n0.v) < 1e-8);
    }
}

TEST_CASE("manifold pipeline is g-independent in its certificates")
{
    for (double gg : {9.81, 0.5}) {
        TrigPoly2 f = family_coefficients({sbar, gg});
        OrbitSchedule sched = build_n2_schedule(gg, 20);
        SolverConfig scfg = solver_config_for(f, gg);
        ManifoldConfig mcfg;
        mcfg.samples = 7;
        ManifoldResult res = manifold_at_n0(f, sched, mcfg, scfg, gg);
        CHECK(res.n_accepted == mcfg.samples);
        CHECK(res.lambda_s == doctest::Approx(0.0876860753502329).epsilon(1e-9));
        for (const auto& s : res.samples)
            CHECK(s.theta_residual < 1e-10);
        ContinuumReport rep = verify_continuum(f, sched, res.samples, 100, scfg,
                                               gg, 1e-3 * gg);
        CHECK(rep.all_pass);
    }
}

TEST_CASE("verify_continuum: ladder gain with certified tail")
{
    Setup su;
    ManifoldConfig mcfg;
    ManifoldResult res = manifold_at_n0(su.f, su.sched, mcfg, su.scfg, g);
    ContinuumReport rep = verify_continuum(su.f, su.sched, res.samples, 100,
                                           su.scfg, g, 1e-3 * g);
    CHECK(rep.all_pass);
    CHECK(rep.max_gain_error < 1e-3 * g);
    CHECK(rep.min_gain > 50 * g - 1e-3 * g);
    const auto& center = rep.rows[mcfg.samples / 2];
    CHECK(std::abs(center.gain - 50 * g) < 1e-6 * g);

    // off-manifold control: unstable displacement escapes within 10 cycles
    Vec2 eu = su.split.unstable_dir();
    ImpactState ctrl{su.sched.t_star[0] + 1e-2 * eu.x,
                     su.sched.v0_star + 1e-2 * eu.y};
    ContinuumSampleReport bad = follow_point(su.f, su.sched, ctrl, 100, su.scfg,
                                             g, 1e-3 * g, 10);
    CHECK(!bad.pass);
    CHECK(bad.first_ladder_break >= 1);
    CHECK(bad.first_ladder_break <= 10);
}
