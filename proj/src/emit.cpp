#include "fermi/emit.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace fermi {

std::string format_g15(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.15g", x);
    return buf;
}

std::string orbit_csv(const Orbit& orbit)
{
    std::ostringstream out;
    out << "n,t,v,gap,dv\n";
    const auto& st = orbit.states;
    for (size_t n = 0; n < st.size(); ++n) {
        out << n << ',' << format_g15(st[n].t) << ',' << format_g15(st[n].v) << ',';
        if (n > 0)
            out << format_g15(st[n].t - st[n - 1].t) << ','
                << format_g15(st[n].v - st[n - 1].v);
        else
            out << ',';
        out << '\n';
    }
    return out.str();
}

std::string scan_csv(const std::vector<ScanRow>& rows)
{
    std::ostringstream out;
    out << "s,max_pdot_over_g,pt0,pt1,trace,hyperbolic\n";
    for (const auto& r : rows)
        out << format_g15(r.s) << ',' << format_g15(r.max_pdot_over_g) << ','
            << format_g15(r.pt0) << ',' << format_g15(r.pt1) << ','
            << format_g15(r.trace) << ',' << (r.hyperbolic ? 1 : 0) << '\n';
    return out.str();
}

std::string manifold_csv(const ManifoldResult& manifold, const ContinuumReport& follow)
{
    std::ostringstream out;
    out << "a,t0,v0,theta_residual,decay_ratio,pass\n";
    for (size_t i = 0; i < manifold.samples.size(); ++i) {
        const auto& s = manifold.samples[i];
        bool pass = s.accepted && i < follow.rows.size() && follow.rows[i].pass;
        out << format_g15(s.a) << ',' << format_g15(s.state.t) << ','
            << format_g15(s.state.v) << ',' << format_g15(s.theta_residual) << ','
            << format_g15(s.decay_ratio) << ',' << (pass ? 1 : 0) << '\n';
    }
    return out.str();
}

std::string coeffs_csv(double s, double g, const TrigPoly2& p, double bound,
                       double true_max)
{
    std::ostringstream out;
    out << "s,g,a1,b1,a2,b2,bound,true_max\n"
        << format_g15(s) << ',' << format_g15(g) << ',' << format_g15(p.a1) << ','
        << format_g15(p.b1) << ',' << format_g15(p.a2) << ',' << format_g15(p.b2)
        << ',' << format_g15(bound) << ',' << format_g15(true_max) << '\n';
    return out.str();
}

std::string coeffs_json(double s, double g, const TrigPoly2& p, double bound,
                        double true_max)
{
    nlohmann::ordered_json j;
    j["s"] = s;
    j["g"] = g;
    j["a1"] = p.a1;
    j["b1"] = p.b1;
    j["a2"] = p.a2;
    j["b2"] = p.b2;
    j["bound"] = bound;
    j["true_max"] = true_max;
    return j.dump(2) + "\n";
}

std::string certificate_json(const CertificateReport& rep)
{
    nlohmann::ordered_json j;
    j["conditions"] = {{"c1", rep.c1}, {"c2p", rep.c2p}, {"c3", rep.c3},
                       {"c4p", rep.c4p}};
    j["orbit"] = {{"horizon", rep.horizon},
                  {"max_integrality", rep.max_integrality},
                  {"max_velocity_residual", rep.max_velocity_residual},
                  {"max_divdiff", rep.max_divdiff}};
    j["certified"] = rep.certified;
    return j.dump(2) + "\n";
}

std::string manifold_summary_json(const ManifoldResult& manifold,
                                  const ContinuumReport& follow)
{
    int passed = 0;
    for (const auto& r : follow.rows)
        passed += r.pass ? 1 : 0;
    nlohmann::ordered_json j;
    j["lambda_s"] = manifold.lambda_s;
    j["lambda_u"] = manifold.lambda_u;
    j["a_max_used"] = manifold.a_max_used;
    j["counts"] = {{"samples", manifold.samples.size()},
                   {"accepted", manifold.n_accepted},
                   {"passed", passed}};
    j["horizon_cycles"] = follow.horizon_cycles;
    j["max_gain_error"] = follow.max_gain_error;
    return j.dump(2) + "\n";
}

std::string optimize_json(const MinimizeResult& res)
{
    nlohmann::ordered_json j;
    j["s_min"] = res.s_min;
    j["value"] = res.value;
    j["evaluations"] = res.evaluations;
    return j.dump(2) + "\n";
}

void atomic_write(const std::string& path, const std::string& content)
{
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path())
        fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out.flush())
            throw std::runtime_error("write failed for " + tmp.string());
    }
    fs::rename(tmp, target);
}

} // namespace fermi
