#include <algorithm>
#include <cmath>
#include <filesystem>
#include <future>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "reso/analysis.hpp"
#include "reso/closed_form.hpp"
#include "reso/dynamics.hpp"
#include "reso/invariants.hpp"
#include "reso/io.hpp"
#include "reso/lattice.hpp"

namespace fs = std::filesystem;
using reso::json;

namespace {

void emit_error(int code, const std::string& kind, const std::string& message) {
    json err{{"schema", "v1"},
             {"error", {{"code", code}, {"kind", kind}, {"message", message}}}};
    std::cerr << err.dump() << "\n";
}

long long parse_int_strict(const std::string& s) {
    size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::domain_error("malformed integer '" + s + "'");
    return v;
}

double parse_double_strict(const std::string& s) {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::domain_error("malformed number '" + s + "'");
    return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

reso::WaveVector parse_wavevector(const std::string& s) {
    auto parts = split(s, ',');
    if (parts.size() != 3) throw std::domain_error("wavevector must be 'n1,n2,n3': " + s);
    return {parse_int_strict(parts[0]), parse_int_strict(parts[1]), parse_int_strict(parts[2])};
}

reso::LatticeParams parse_theta(const std::string& s) {
    auto parts = split(s, ',');
    if (parts.size() != 3) throw std::domain_error("--theta must be 'a,b,c': " + s);
    reso::LatticeParams p{parse_double_strict(parts[0]), parse_double_strict(parts[1]),
                          parse_double_strict(parts[2])};
    p.validate();
    return p;
}

std::vector<double> parse_grid(const std::string& s) {
    auto parts = split(s, ':');
    if (parts.size() != 3) throw std::domain_error("--grid must be 'lo:hi:steps': " + s);
    double lo = parse_double_strict(parts[0]), hi = parse_double_strict(parts[1]);
    long long steps = parse_int_strict(parts[2]);
    if (!(lo > 0.0) || !(hi > lo) || steps < 2)
        throw std::domain_error("--grid needs 0 < lo < hi and steps >= 2");
    std::vector<double> grid(steps);
    for (long long i = 0; i < steps; ++i)
        grid[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(steps - 1);
    return grid;
}

std::string default_meta_path(const std::string& traj_path) {
    fs::path p(traj_path);
    p.replace_extension(".report.json");
    return p.string();
}

void print_report(const json& rep, const std::string& format) {
    if (format == "csv") {
        std::string out = "key,value\n";
        for (auto it = rep.begin(); it != rep.end(); ++it) {
            if (it->is_number() || it->is_boolean() || it->is_string())
                out += it.key() + "," + it->dump() + "\n";
        }
        std::cout << out;
    } else {
        std::cout << rep.dump(2) << "\n";
    }
}

struct SimulateResult {
    json report;
    int exit_code = 0;
};

SimulateResult run_simulation(reso::RunConfig cfg, const std::string& config_path,
                              const std::string& out_dir) {
    if (cfg.out_trajectory.empty()) {
        fs::path stem = fs::path(config_path).stem();
        cfg.out_trajectory = (fs::path(out_dir) / stem).string() + ".csv";
    } else if (!fs::path(cfg.out_trajectory).is_absolute()) {
        cfg.out_trajectory = (fs::path(out_dir) / cfg.out_trajectory).string();
    }
    if (cfg.out_report.empty()) {
        cfg.out_report = default_meta_path(cfg.out_trajectory);
    } else if (!fs::path(cfg.out_report).is_absolute()) {
        cfg.out_report = (fs::path(out_dir) / cfg.out_report).string();
    }

    reso::IntegrateOptions opts;
    opts.rtol = cfg.rtol;
    opts.atol = cfg.atol;
    opts.sample_dt = cfg.sample_dt;
    opts.renormalize_energy = cfg.renormalize_energy;

    SimulateResult res;
    try {
        reso::Trajectory traj = reso::integrate(cfg.params, cfg.ic, cfg.t_end, opts);
        reso::write_file_atomic(cfg.out_trajectory,
                                reso::trajectory_to_csv(traj, cfg.params, cfg.s_list));
        res.report = reso::run_report_json(cfg, traj);
        reso::write_file_atomic(cfg.out_report, res.report.dump(2) + "\n");
    } catch (const reso::IntegrationError& e) {
        reso::write_file_atomic(cfg.out_trajectory,
                                reso::trajectory_to_csv(e.partial, cfg.params, cfg.s_list));
        res.report = reso::run_report_json(cfg, e.partial);
        res.report["failure"] = {{"kind", "numerical"}, {"message", e.what()}};
        reso::write_file_atomic(cfg.out_report, res.report.dump(2) + "\n");
        res.exit_code = 4;
    }
    return res;
}

json analyze_burst(const reso::CsvTable& csv, const json& meta, const std::string& norm) {
    auto lambdas = meta.at("lambdas").get<std::vector<double>>();
    if (lambdas.size() != 3) throw std::domain_error("burst analysis needs a triad run");
    const auto& t = csv.column("t");

    reso::BurstBounds bounds;
    double base = 0.0;
    const std::vector<double>* signal = nullptr;
    if (norm == "h3") {
        signal = &csv.column("W_3");
        base = (*signal)[0];
        bounds = reso::burst_bounds_h3(lambdas[0], lambdas[1], lambdas[2], base);
    } else if (norm == "enstrophy") {
        signal = &csv.column("Xi");
        base = (*signal)[0];
        bounds = reso::burst_bounds_enstrophy(lambdas[0], lambdas[1], lambdas[2], base);
    } else {
        throw std::domain_error("--norm must be h3 or enstrophy");
    }

    double measured_ratio = reso::refined_max(t, *signal) / base;
    auto t_star = reso::first_passage(t, *signal, bounds.ratio_bound * base);
    bool pass = bounds.regime_ok() && measured_ratio >= bounds.ratio_bound && t_star &&
                *t_star <= bounds.t_star_bound;
    json rep{{"schema", "v1"},
             {"kind", "burst"},
             {"norm", norm},
             {"regime_flags",
              {{"mu_small", bounds.mu_small},
               {"lambda_nu_comparable", bounds.lambda_nu_comparable},
               {"opposite_polarity", bounds.opposite_polarity}}},
             {"ratio_bound", bounds.ratio_bound},
             {"t_star_bound", bounds.t_star_bound},
             {"measured_ratio", measured_ratio},
             {"measured_t_star", t_star ? json(*t_star) : json(nullptr)},
             {"pass", pass}};
    return rep;
}

json analyze_period(const reso::CsvTable& csv, const json& meta) {
    if (meta.at("system").get<std::string>() != "real_triad")
        throw std::domain_error("period analysis needs a real_triad run");
    auto lambdas = meta.at("lambdas").get<std::vector<double>>();
    auto ic = meta.at("ic").at("values").get<std::vector<double>>();
    if (ic.size() != 3 || ic[2] != 0.0)
        throw std::domain_error("period analysis requires r(0) = 0 initial data");

    double measured = reso::measure_half_period(csv.column("t"), csv.column("p"),
                                                csv.column("q"), csv.column("r"));
    reso::CubicData c = reso::cubic_data(lambdas[0], lambdas[1], lambdas[2], ic[0], ic[1]);
    double quad = reso::half_period(c);
    double quad_integral = reso::period_integral(c.x_minus, c.x_zero, c.x_plus);
    double asym = reso::period_asymptotic(c.x_minus, c.x_zero, c.x_plus);
    return json{{"schema", "v1"},
                {"kind", "period"},
                {"measured_half_period", measured},
                {"quadrature_half_period", quad},
                {"measured_over_quadrature", measured / quad},
                {"asymptotic_integral", asym},
                {"quadrature_integral", quad_integral},
                {"asymptotic_over_quadrature", asym / quad_integral},
                {"cubic",
                 {{"x_minus", c.x_minus},
                  {"x_zero", c.x_zero},
                  {"x_plus", c.x_plus},
                  {"K", c.K}}}};
}

json analyze_hamiltonian(const reso::CsvTable& csv, const json& meta) {
    if (meta.at("system").get<std::string>() != "coupled")
        throw std::domain_error("hamiltonian analysis needs a coupled run");
    auto lv = meta.at("lambdas").get<std::vector<double>>();
    std::array<double, 5> lambdas{};
    std::copy(lv.begin(), lv.end(), lambdas.begin());
    double Gamma = meta.at("couplings").value("Gamma", 1.0);
    double GammaTilde = meta.at("couplings").value("GammaTilde", 1.0);
    double alpha = reso::coupled_alpha(lambdas);
    double alphaTilde = reso::coupled_alpha_tilde(lambdas);

    const auto& t = csv.column("t");
    const auto& am = csv.column("a_m");
    const auto& amt = csv.column("a_mt");
    const auto& ak = csv.column("a_k");
    const auto& an = csv.column("a_n");
    const auto& akt = csv.column("a_kt");
    double E1 = csv.column("E1")[0];
    double E3 = csv.column("E3")[0];

    json segments = json::array();
    double overall = 0.0;
    for (const auto& seg : reso::sign_segments(ak, an, akt)) {
        if (seg.sign_ak == 0 || seg.sign_akt == 0) continue;
        if (seg.end - seg.begin < 8) continue;
        size_t lo = seg.begin + 2, hi = seg.end - 2;  // trim boundary samples
        int s1 = 1;
        int s2 = -seg.sign_ak * seg.sign_akt;
        std::vector<double> H;
        for (size_t i = lo; i <= hi; ++i)
            H.push_back(reso::reduced_hamiltonian(am[i], amt[i], E1, E3, alpha, alphaTilde,
                                                  Gamma, GammaTilde, lambdas[0], lambdas[2],
                                                  lambdas[4], s1, s2));
        std::vector<double> sorted = H;
        std::sort(sorted.begin(), sorted.end());
        double med = sorted[sorted.size() / 2];
        double dev = 0.0;
        for (double h : H) dev = std::max(dev, std::abs(h - med));
        overall = std::max(overall, dev);
        segments.push_back({{"t_begin", t[lo]},
                            {"t_end", t[hi]},
                            {"samples", hi - lo + 1},
                            {"sign_ak", seg.sign_ak},
                            {"sign_akt", seg.sign_akt},
                            {"H", med},
                            {"max_abs_dev", dev}});
    }
    return json{{"schema", "v1"},
                {"kind", "hamiltonian"},
                {"segments", segments},
                {"max_abs_dev", overall}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"resonant triad laboratory"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string out_dir = ".";
    std::string format = "json";
    bool seedless = true;
    app.add_option("--out-dir", out_dir, "output directory (default .)");
    app.add_option("--format", format, "report format on stdout: json|csv")
        ->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--seedless", seedless, "reserved; all runs are deterministic");

    // triads ------------------------------------------------------------
    auto* triads = app.add_subcommand("triads", "lattice resonance tools");
    triads->fallthrough();
    triads->require_subcommand(1);

    std::string theta_str = "1,1,1", k_str, m_str, n_str, grid_str, out_path;
    long long box = 1;
    double tol = 1e-12;
    int idx_i = 1, idx_j = 2;

    auto* search = triads->add_subcommand("search", "enumerate canonical resonant triads");
    search->fallthrough();
    search->add_option("--theta", theta_str, "lattice parameters a,b,c")->required();
    search->add_option("--box", box, "component bound for k and m")->required();
    search->add_option("--tol", tol, "residual tolerance (default 1e-12)");
    search->add_option("--out", out_path, "catalog path (default catalog.json)");

    auto* curve = triads->add_subcommand("curve", "trace a resonance curve");
    curve->fallthrough();
    curve->add_option("--k", k_str, "wavevector k as n1,n2,n3")->required();
    curve->add_option("--m", m_str, "wavevector m as n1,n2,n3")->required();
    curve->add_option("--n", n_str, "optional n (checked against k+m)");
    curve->add_option("--grid", grid_str, "theta2/theta1 grid lo:hi:steps")->required();
    curve->add_option("--out", out_path, "curve CSV path (default curve.csv)");

    auto* decomp = triads->add_subcommand("decompose", "primitive decomposition of a degenerate pair");
    decomp->fallthrough();
    decomp->add_option("--k", k_str, "wavevector k")->required();
    decomp->add_option("--m", m_str, "wavevector m")->required();
    decomp->add_option("--i", idx_i, "first symmetry index (1..3)")->required();
    decomp->add_option("--j", idx_j, "second symmetry index (1..3)")->required();
    decomp->add_option("--out", out_path, "output path (default decomposition.json)");

    // simulate ------------------------------------------------------------
    std::string config_path;
    double cli_t_end = -1.0, cli_rtol = -1.0, cli_atol = -1.0;
    auto* simulate = app.add_subcommand("simulate", "integrate a resonant system from a config");
    simulate->fallthrough();
    simulate->add_option("--config", config_path, "run config JSON")->required();
    simulate->add_option("--t-end", cli_t_end, "override t_end");
    simulate->add_option("--rtol", cli_rtol, "override rtol");
    simulate->add_option("--atol", cli_atol, "override atol");

    // analyze ------------------------------------------------------------
    auto* analyze = app.add_subcommand("analyze", "post-process a trajectory CSV");
    analyze->fallthrough();
    analyze->require_subcommand(1);
    std::string traj_path, meta_path, norm = "h3";
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--traj", traj_path, "trajectory CSV from simulate")->required();
        sub->add_option("--meta", meta_path, "metadata sidecar (default <traj>.report.json)");
        sub->add_option("--out", out_path, "also write the report here");
    };
    auto* burst = analyze->add_subcommand("burst", "measured burst vs theorem bounds");
    burst->fallthrough();
    add_common(burst);
    burst->add_option("--norm", norm, "h3 | enstrophy");
    auto* period = analyze->add_subcommand("period", "measured vs quadrature vs asymptotic period");
    period->fallthrough();
    add_common(period);
    auto* hamil = analyze->add_subcommand("hamiltonian", "per-segment reduced Hamiltonian constancy");
    hamil->fallthrough();
    add_common(hamil);

    // sweep ------------------------------------------------------------
    std::vector<std::string> sweep_configs;
    int jobs = 0;
    auto* sweep = app.add_subcommand("sweep", "run several configs concurrently");
    sweep->fallthrough();
    sweep->add_option("--config", sweep_configs, "config JSON paths")->required();
    sweep->add_option("--jobs", jobs, "max concurrent runs (default hardware)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        emit_error(2, "usage", e.what());
        return 2;
    }

    try {
        if (search->parsed()) {
            reso::LatticeParams p = parse_theta(theta_str);
            if (box < 1 || !(tol > 0.0)) throw std::domain_error("need --box >= 1 and --tol > 0");
            reso::TriadCatalog cat = reso::search_triads(p, box, tol);
            std::string path = out_path.empty() ? (fs::path(out_dir) / "catalog.json").string()
                                                : out_path;
            reso::write_file_atomic(path, reso::catalog_to_json(cat).dump(2) + "\n");
            std::cout << json{{"schema", "v1"}, {"catalog", path}, {"triads", cat.entries.size()}}
                             .dump()
                      << "\n";
            return 0;
        }
        if (curve->parsed()) {
            reso::WaveVector k = parse_wavevector(k_str), m = parse_wavevector(m_str);
            reso::WaveVector n = k + m;
            if (!n_str.empty() && !(parse_wavevector(n_str) == n))
                throw std::domain_error("--n does not equal k + m");
            if (reso::irreducibility_det(k, m, n) == 0)
                throw reso::ReducibleError("reducible: zero determinant");
            auto pts = reso::resonance_curve(k, m, parse_grid(grid_str));
            std::string path =
                out_path.empty() ? (fs::path(out_dir) / "curve.csv").string() : out_path;
            reso::write_file_atomic(path, reso::curve_to_csv(pts));
            size_t gaps = 0;
            for (const auto& pt : pts) gaps += pt.branch_flag == 2;
            std::cout << json{{"schema", "v1"}, {"curve", path}, {"points", pts.size()},
                              {"gaps", gaps}}
                             .dump()
                      << "\n";
            return 0;
        }
        if (decomp->parsed()) {
            reso::WaveVector k = parse_wavevector(k_str), m = parse_wavevector(m_str);
            reso::PrimitivePair pp = reso::decompose_primitive(k, m, idx_i, idx_j);
            json rep = reso::primitive_to_json(pp);
            std::string path = out_path.empty()
                                   ? (fs::path(out_dir) / "decomposition.json").string()
                                   : out_path;
            reso::write_file_atomic(path, rep.dump(2) + "\n");
            print_report(rep, format);
            return 0;
        }
        if (simulate->parsed()) {
            reso::RunConfig cfg = reso::parse_run_config(json::parse(reso::read_file(config_path)));
            if (cli_t_end > 0.0) cfg.t_end = cli_t_end;
            if (cli_rtol > 0.0) cfg.rtol = cli_rtol;
            if (cli_atol > 0.0) cfg.atol = cli_atol;
            SimulateResult res = run_simulation(cfg, config_path, out_dir);
            print_report(res.report, format);
            if (res.exit_code != 0) {
                emit_error(res.exit_code, "numerical", "integration failed; partial outputs written");
                return res.exit_code;
            }
            return 0;
        }
        if (analyze->parsed()) {
            if (meta_path.empty()) meta_path = default_meta_path(traj_path);
            reso::CsvTable csv = reso::read_csv_file(traj_path);
            json meta = json::parse(reso::read_file(meta_path));
            json rep;
            if (burst->parsed()) rep = analyze_burst(csv, meta, norm);
            if (period->parsed()) rep = analyze_period(csv, meta);
            if (hamil->parsed()) rep = analyze_hamiltonian(csv, meta);
            if (!out_path.empty()) reso::write_file_atomic(out_path, rep.dump(2) + "\n");
            print_report(rep, format);
            return 0;
        }
        if (sweep->parsed()) {
            if (jobs <= 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
            if (jobs < 1) jobs = 1;
            std::vector<reso::RunConfig> cfgs;
            for (const auto& path : sweep_configs)
                cfgs.push_back(reso::parse_run_config(json::parse(reso::read_file(path))));
            std::vector<SimulateResult> results(cfgs.size());
            for (size_t base = 0; base < cfgs.size(); base += jobs) {
                std::vector<std::future<SimulateResult>> batch;
                for (size_t i = base; i < std::min(cfgs.size(), base + jobs); ++i)
                    batch.push_back(std::async(std::launch::async, run_simulation, cfgs[i],
                                               sweep_configs[i], out_dir));
                for (size_t i = base; i < std::min(cfgs.size(), base + jobs); ++i)
                    results[i] = batch[i - base].get();
            }
            json out = json::array();
            int code = 0;
            for (size_t i = 0; i < results.size(); ++i) {
                out.push_back({{"config", sweep_configs[i]},
                               {"ok", results[i].exit_code == 0},
                               {"trajectory", results[i].report["outputs"]["trajectory"]}});
                code = std::max(code, results[i].exit_code);
            }
            std::cout << out.dump(2) << "\n";
            if (code != 0) emit_error(code, "numerical", "one or more sweep runs failed");
            return code;
        }
    } catch (const reso::IntegrationError& e) {
        emit_error(4, "numerical", e.what());
        return 4;
    } catch (const reso::DegeneracyError& e) {
        emit_error(3, "precondition", e.what());
        return 3;
    } catch (const reso::ReducibleError& e) {
        emit_error(3, "precondition", e.what());
        return 3;
    } catch (const reso::CatalyticError& e) {
        emit_error(3, "precondition", e.what());
        return 3;
    } catch (const std::invalid_argument& e) {
        emit_error(3, "precondition", e.what());
        return 3;
    } catch (const json::exception& e) {
        emit_error(2, "usage", e.what());
        return 2;
    } catch (const std::domain_error& e) {
        emit_error(2, "usage", e.what());
        return 2;
    } catch (const std::exception& e) {
        emit_error(2, "usage", e.what());
        return 2;
    }
    return 0;
}
