#ifndef FERMI_EMIT_HPP
#define FERMI_EMIT_HPP

#include <string>
#include <vector>

#include "fermi/linearization.hpp"
#include "fermi/orbit.hpp"
#include "fermi/racket_family.hpp"
#include "fermi/stable_manifold.hpp"

namespace fermi {

/// 15 significant digits, round-trip safe for the data files.
std::string format_g15(double x);

std::string orbit_csv(const Orbit& orbit);
std::string scan_csv(const std::vector<ScanRow>& rows);
std::string manifold_csv(const ManifoldResult& manifold, const ContinuumReport& follow);
std::string coeffs_csv(double s, double g, const TrigPoly2& p, double bound,
                       double true_max);

std::string coeffs_json(double s, double g, const TrigPoly2& p, double bound,
                        double true_max);
std::string certificate_json(const CertificateReport& rep);
std::string manifold_summary_json(const ManifoldResult& manifold,
                                  const ContinuumReport& follow);
std::string optimize_json(const MinimizeResult& res);

/// Write-to-temp + rename, so failures never leave partial files behind.
void atomic_write(const std::string& path, const std::string& content);

} // namespace fermi

#endif
