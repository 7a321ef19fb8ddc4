#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "reso/dynamics.hpp"
#include "reso/invariants.hpp"
#include "reso/lattice.hpp"

namespace reso {

using json = nlohmann::json;

// ---- triad catalogs -------------------------------------------------------

/// Schema v1: {schema, params:{theta1..3}, box, tol,
///             triads:[{k,m,n,signs,lambdas,residual}]}.
/// signs and lambdas are aligned in (k, m, n) member order.
json catalog_to_json(const TriadCatalog& cat);
TriadCatalog catalog_from_json(const json& j);

/// Replays the catalog invariants: canonical entries, sorted, residual within
/// tolerance. Throws std::domain_error on violation.
void validate_catalog(const TriadCatalog& cat);

json primitive_to_json(const PrimitivePair& pp);

std::string curve_to_csv(const std::vector<CurvePoint>& pts);

// ---- run configuration ----------------------------------------------------

struct RunConfig {
    SystemParams params;
    std::string ic_type;  // explicit | thm3.9 | thm3.11 | near-saddle
    std::vector<double> ic;  // resolved flat initial state
    double t_end = 0.0;
    double rtol = 1e-12;
    double atol = 1e-14;
    double sample_dt = 0.0;
    bool renormalize_energy = false;
    std::vector<double> s_list = {3.0};
    std::string out_trajectory;  // empty: derived from the config path
    std::string out_report;
};

/// Strict parse: unknown keys anywhere are rejected with std::domain_error.
RunConfig parse_run_config(const json& j);
json run_config_to_json(const RunConfig& cfg);

// ---- trajectory CSV -------------------------------------------------------

std::vector<std::string> trajectory_columns(const SystemParams& params,
                                            const std::vector<double>& s_list);
std::string trajectory_to_csv(const Trajectory& traj, const SystemParams& params,
                              const std::vector<double>& s_list);

struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> data;  // column-major

    const std::vector<double>& column(const std::string& name) const;
    bool has_column(const std::string& name) const;
    size_t rows() const { return data.empty() ? 0 : data[0].size(); }
};

CsvTable read_csv(std::istream& in);
CsvTable read_csv_file(const std::string& path);

/// Fields E, H, Xi, W_s (map keyed by s), manley_rowe, E1, E2, E3, alpha,
/// alphaTilde; optional blocks are omitted when not applicable.
json invariant_report_to_json(const InvariantReport& rep);

/// Run metadata sidecar: system, eigenvalues, couplings, tolerances, resolved
/// IC with its invariant report, step stats, max invariant drifts, warnings.
json run_report_json(const RunConfig& cfg, const Trajectory& traj);

// ---- files ----------------------------------------------------------------

/// Write-to-temp-then-rename so concurrent sweeps never expose partial files.
void write_file_atomic(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

/// %.17g formatting used across all CSV output (round-trip exact,
/// byte-deterministic).
std::string format_double(double x);

}  // namespace reso
