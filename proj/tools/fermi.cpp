// fermi: bouncing-ball dynamics tool.
// Subcommands: coeffs, optimize, orbit, verify, trace, manifold.
// Exit codes: 0 ok / certified, 1 failed certification, 2 invalid input,
// 3 solver failure.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fermi/emit.hpp"
#include "fermi/errors.hpp"
#include "fermi/impact_map.hpp"
#include "fermi/linearization.hpp"
#include "fermi/orbit.hpp"
#include "fermi/racket_family.hpp"
#include "fermi/stable_manifold.hpp"

namespace {

struct RunConfig {
    double s = 0.009569094523943;
    double g = 1.0;
    std::int64_t k = 20;
    std::string out;
    std::string format = "json";
    int steps = 200;
    int horizon = 200;
    int manifold_cycles = 100;
    int samples = 41;
    double a_max = 1e-3;
    int n0 = 5;
    double newton_tol = 1e-12;
    double s_min = 0.0;
    double s_max = 0.05;
    double tol = 1e-12;
    std::string mode = "full";
};

void add_common(CLI::App* cmd, RunConfig& cfg)
{
    cmd->add_option("--s", cfg.s, "family parameter")->envname("FERMI_S");
    cmd->add_option("--g", cfg.g, "gravity")->envname("FERMI_G");
    cmd->add_option("--k", cfg.k, "orbit gap offset")->envname("FERMI_K");
    cmd->add_option("--out", cfg.out, "output file (stdout when omitted)")
        ->envname("FERMI_OUT");
    cmd->add_option("--format", cfg.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}))->envname("FERMI_FORMAT");
    cmd->add_option("--newton-tol", cfg.newton_tol, "impact solver tolerance")
        ->envname("FERMI_NEWTON_TOL");
}

void emit(const RunConfig& cfg, const std::string& content)
{
    if (cfg.out.empty())
        std::cout << content;
    else
        fermi::atomic_write(cfg.out, content);
}

fermi::SolverConfig solver_for(const RunConfig& cfg, const fermi::TrigPoly2& f)
{
    fermi::SolverConfig base;
    base.newton_tol = cfg.newton_tol;
    return fermi::solver_config_for(f, cfg.g, base);
}

void validate(const RunConfig& cfg)
{
    if (!(cfg.g > 0))
        throw std::invalid_argument("--g must be positive");
    if (cfg.k < 1)
        throw std::invalid_argument("--k must be >= 1");
}

int cmd_coeffs(const RunConfig& cfg)
{
    validate(cfg);
    fermi::TrigPoly2 p = fermi::family_coefficients({cfg.s, cfg.g});
    double bound = fermi::derivative_bound({cfg.s, cfg.g});
    double tmax = fermi::true_max_derivative(p);
    emit(cfg, cfg.format == "csv"
                  ? fermi::coeffs_csv(cfg.s, cfg.g, p, bound, tmax)
                  : fermi::coeffs_json(cfg.s, cfg.g, p, bound, tmax));
    return 0;
}

int cmd_optimize(const RunConfig& cfg)
{
    fermi::MinimizeResult res = fermi::minimize_bound(cfg.s_min, cfg.s_max, cfg.tol);
    if (cfg.format == "csv")
        emit(cfg, "s_min,value\n" + fermi::format_g15(res.s_min) + "," +
                      fermi::format_g15(res.value) + "\n");
    else
        emit(cfg, fermi::optimize_json(res));
    return 0;
}

int cmd_orbit(const RunConfig& cfg)
{
    validate(cfg);
    fermi::TrigPoly2 p = fermi::family_coefficients({cfg.s, cfg.g});
    fermi::OrbitSchedule sched = fermi::build_n2_schedule(cfg.g, cfg.k);
    fermi::SolverConfig scfg = solver_for(cfg, p);
    fermi::Orbit orbit = fermi::iterate(p, {sched.t_star[0], sched.v0_star},
                                        cfg.steps, scfg, cfg.g,
                                        cfg.mode == "gs" ? fermi::MapMode::gs
                                                         : fermi::MapMode::full);
    emit(cfg, fermi::orbit_csv(orbit));
    if (!orbit.ok()) {
        std::cerr << "orbit: step " << orbit.failed_index << " failed: "
                  << orbit.error << "\n";
        return 3;
    }
    fermi::CertificateReport rep =
        fermi::certify_unbounded(p, sched, cfg.steps, scfg, cfg.g);
    return rep.certified ? 0 : 1;
}

int cmd_verify(const RunConfig& cfg)
{
    validate(cfg);
    fermi::TrigPoly2 p = fermi::family_coefficients({cfg.s, cfg.g});
    fermi::OrbitSchedule sched = fermi::build_n2_schedule(cfg.g, cfg.k);
    fermi::CertificateReport rep =
        fermi::certify_unbounded(p, sched, cfg.horizon, solver_for(cfg, p), cfg.g);
    emit(cfg, fermi::certificate_json(rep));
    return rep.certified ? 0 : 1;
}

int cmd_trace(const RunConfig& cfg)
{
    validate(cfg);
    if (!(cfg.s_min < cfg.s_max))
        throw std::invalid_argument("--s-min must be below --s-max");
    if (cfg.samples < 2)
        throw std::invalid_argument("--samples must be >= 2");
    std::vector<double> grid(cfg.samples);
    for (int i = 0; i < cfg.samples; ++i)
        grid[i] = cfg.s_min + (cfg.s_max - cfg.s_min) * i / (cfg.samples - 1);
    emit(cfg, fermi::scan_csv(fermi::scan_family(grid, cfg.g, cfg.k)));
    return 0;
}

int cmd_manifold(const RunConfig& cfg)
{
    validate(cfg);
    fermi::TrigPoly2 p = fermi::family_coefficients({cfg.s, cfg.g});
    fermi::OrbitSchedule sched = fermi::build_n2_schedule(cfg.g, cfg.k);
    fermi::SolverConfig scfg = solver_for(cfg, p);
    fermi::ManifoldConfig mcfg;
    mcfg.n0 = cfg.n0;
    mcfg.a_max = cfg.a_max;
    mcfg.samples = cfg.samples;
    fermi::ManifoldResult man = fermi::manifold_at_n0(p, sched, mcfg, scfg, cfg.g);
    fermi::ContinuumReport follow = fermi::verify_continuum(
        p, sched, man.samples, cfg.manifold_cycles, scfg, cfg.g, 1e-3 * cfg.g);
    std::string csv = fermi::manifold_csv(man, follow);
    std::string summary = fermi::manifold_summary_json(man, follow);
    if (cfg.out.empty()) {
        std::cout << csv;
        std::cerr << summary;
    } else {
        fermi::atomic_write(cfg.out, csv);
        std::cout << summary;
    }
    bool ok = follow.all_pass && man.n_accepted == int(man.samples.size());
    return ok ? 0 : 1;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"bouncing-ball impact map: racket family, unbounded orbits, "
                 "hyperbolic linearization, stable-manifold continuum"};
    app.require_subcommand(1);
    RunConfig cfg;

    CLI::App* coeffs = app.add_subcommand("coeffs", "family coefficients and bounds");
    add_common(coeffs, cfg);

    CLI::App* optimize = app.add_subcommand("optimize",
                                            "minimize the derivative bound over s");
    add_common(optimize, cfg);
    optimize->add_option("--s-min", cfg.s_min, "bracket start");
    optimize->add_option("--s-max", cfg.s_max, "bracket end");
    optimize->add_option("--tol", cfg.tol, "bracket tolerance");

    CLI::App* orbit = app.add_subcommand("orbit", "iterate the orbit, emit CSV");
    add_common(orbit, cfg);
    orbit->add_option("--steps", cfg.steps, "number of map applications")
        ->envname("FERMI_STEPS");
    orbit->add_option("--mode", cfg.mode, "full|gs")
        ->check(CLI::IsMember({"full", "gs"}));

    CLI::App* verify = app.add_subcommand("verify",
                                          "certify the unbounded orbit, emit JSON");
    add_common(verify, cfg);
    verify->add_option("--horizon", cfg.horizon, "certification steps")
        ->envname("FERMI_HORIZON");

    CLI::App* trace = app.add_subcommand("trace", "scan the family, emit CSV");
    add_common(trace, cfg);
    trace->add_option("--s-min", cfg.s_min, "scan start");
    trace->add_option("--s-max", cfg.s_max, "scan end");
    trace->add_option("--samples", cfg.samples, "grid size")
        ->envname("FERMI_SAMPLES");

    CLI::App* manifold = app.add_subcommand("manifold",
                                            "stable-manifold continuum, emit CSV");
    add_common(manifold, cfg);
    manifold->add_option("--samples", cfg.samples, "manifold samples (odd)")
        ->envname("FERMI_SAMPLES");
    manifold->add_option("--a-max", cfg.a_max, "parameter radius")
        ->envname("FERMI_A_MAX");
    manifold->add_option("--n0", cfg.n0, "scheme start cycle")
        ->envname("FERMI_N0");
    manifold->add_option("--horizon", cfg.manifold_cycles, "verification cycles")
        ->envname("FERMI_HORIZON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (coeffs->parsed())   return cmd_coeffs(cfg);
        if (optimize->parsed()) return cmd_optimize(cfg);
        if (orbit->parsed())    { cfg.horizon = cfg.steps; return cmd_orbit(cfg); }
        if (verify->parsed())   return cmd_verify(cfg);
        if (trace->parsed())    return cmd_trace(cfg);
        if (manifold->parsed()) return cmd_manifold(cfg);
    } catch (const fermi::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "invalid input: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
