#include "reso/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "reso/invariants.hpp"

namespace reso {

namespace {

json wavevector_to_json(const WaveVector& v) { return json::array({v.n1, v.n2, v.n3}); }

WaveVector wavevector_from_json(const json& j) {
    if (!j.is_array() || j.size() != 3) throw std::domain_error("wavevector must be [n1,n2,n3]");
    return {j[0].get<long long>(), j[1].get<long long>(), j[2].get<long long>()};
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : allowed)
            if (it.key() == k) ok = true;
        if (!ok) throw std::domain_error("unknown key '" + it.key() + "' in " + where);
    }
}

}  // namespace

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

json catalog_to_json(const TriadCatalog& cat) {
    json triads = json::array();
    for (const Triad& t : cat.entries) {
        triads.push_back({{"k", wavevector_to_json(t.k)},
                          {"m", wavevector_to_json(t.m)},
                          {"n", wavevector_to_json(t.n)},
                          {"signs", json::array({t.signs.sk, t.signs.sm, t.signs.sn})},
                          {"lambdas", json::array({t.lambdas[0], t.lambdas[1], t.lambdas[2]})},
                          {"residual", t.residual}});
    }
    return json{{"schema", "v1"},
                {"params",
                 {{"theta1", cat.params.theta1},
                  {"theta2", cat.params.theta2},
                  {"theta3", cat.params.theta3}}},
                {"box", cat.box},
                {"tol", cat.tol},
                {"triads", triads}};
}

TriadCatalog catalog_from_json(const json& j) {
    reject_unknown_keys(j, {"schema", "params", "box", "tol", "triads"}, "catalog");
    if (j.at("schema").get<std::string>() != "v1")
        throw std::domain_error("catalog: unsupported schema");
    TriadCatalog cat;
    const json& p = j.at("params");
    reject_unknown_keys(p, {"theta1", "theta2", "theta3"}, "catalog.params");
    cat.params = {p.at("theta1").get<double>(), p.at("theta2").get<double>(),
                  p.at("theta3").get<double>()};
    cat.box = j.at("box").get<long long>();
    cat.tol = j.at("tol").get<double>();
    for (const json& e : j.at("triads")) {
        reject_unknown_keys(e, {"k", "m", "n", "signs", "lambdas", "residual"},
                            "catalog.triads[]");
        Triad t;
        t.k = wavevector_from_json(e.at("k"));
        t.m = wavevector_from_json(e.at("m"));
        t.n = wavevector_from_json(e.at("n"));
        t.signs.sk = e.at("signs")[0].get<int>();
        t.signs.sm = e.at("signs")[1].get<int>();
        t.signs.sn = e.at("signs")[2].get<int>();
        for (int i = 0; i < 3; ++i) t.lambdas[i] = e.at("lambdas")[i].get<double>();
        t.residual = e.at("residual").get<double>();
        cat.entries.push_back(t);
    }
    return cat;
}

void validate_catalog(const TriadCatalog& cat) {
    cat.params.validate();
    auto key = [](const Triad& t) {
        return std::array<long long, 6>{t.k.n1, t.k.n2, t.k.n3, t.m.n1, t.m.n2, t.m.n3};
    };
    for (size_t i = 0; i < cat.entries.size(); ++i) {
        const Triad& t = cat.entries[i];
        if (!(t.n == t.k + t.m)) throw std::domain_error("catalog: n != k + m");
        if (t.k.n3 == 0 || t.m.n3 == 0 || t.n.n3 == 0)
            throw std::domain_error("catalog: catalytic entry");
        auto [ck, cm] = canonical_pair(t.k, t.m);
        if (!(ck == t.k) || !(cm == t.m))
            throw std::domain_error("catalog: entry not canonical");
        double res = residual(t.k, t.m, cat.params, t.signs);
        if (!(std::abs(res) <= cat.tol))
            throw std::domain_error("catalog: residual exceeds tolerance");
        if (i > 0 && !(key(cat.entries[i - 1]) < key(t)))
            throw std::domain_error("catalog: entries not sorted");
    }
}

json primitive_to_json(const PrimitivePair& pp) {
    PrimitiveChecks checks = verify_primitive_pair(pp);
    return json{{"schema", "v1"},
                {"kbar", wavevector_to_json(pp.kbar)},
                {"mbar", wavevector_to_json(pp.mbar)},
                {"a", pp.a},
                {"aPrime", pp.aPrime},
                {"b", pp.b},
                {"bPrime", pp.bPrime},
                {"i", pp.i},
                {"j", pp.j},
                {"alpha", {{"num", pp.alpha.num}, {"den", pp.alpha.den}}},
                {"beta", {{"num", pp.beta.num}, {"den", pp.beta.den}}},
                {"n", wavevector_to_json(primitive_n(pp))},
                {"gcd_checks",
                 {{"a_aPrime", checks.gcd_a_aprime},
                  {"b_bPrime", checks.gcd_b_bprime},
                  {"a_b", checks.gcd_a_b},
                  {"aPrime_bPrime", checks.gcd_aprime_bprime},
                  {"kbar_mbar", checks.gcd_kbar_mbar}}},
                {"reconstructs", checks.reconstructs}};
}

std::string curve_to_csv(const std::vector<CurvePoint>& pts) {
    std::string out = "ratio2,ratio3,residual,branch_flag\n";
    for (const CurvePoint& p : pts) {
        out += format_double(p.ratio2);
        out += ',';
        out += format_double(p.ratio3);
        out += ',';
        out += format_double(p.residual);
        out += ',';
        out += std::to_string(p.branch_flag);
        out += '\n';
    }
    return out;
}

RunConfig parse_run_config(const json& j) {
    reject_unknown_keys(j,
                        {"schema", "system", "lambdas", "couplings", "ic", "t_end", "rtol",
                         "atol", "sample_dt", "renormalize_energy", "s_list", "out"},
                        "config");
    if (j.at("schema").get<std::string>() != "v1")
        throw std::domain_error("config: unsupported schema");
    RunConfig cfg;
    cfg.params.id = system_from_string(j.at("system").get<std::string>());
    cfg.params.lambdas = j.at("lambdas").get<std::vector<double>>();
    if (j.contains("couplings")) {
        const json& c = j.at("couplings");
        reject_unknown_keys(c, {"C", "Gamma", "GammaTilde"}, "config.couplings");
        if (c.contains("C")) cfg.params.C = c.at("C").get<double>();
        if (c.contains("Gamma")) cfg.params.Gamma = c.at("Gamma").get<double>();
        if (c.contains("GammaTilde")) cfg.params.GammaTilde = c.at("GammaTilde").get<double>();
    }
    cfg.params.validate();

    const json& ic = j.at("ic");
    reject_unknown_keys(ic, {"type", "values", "W0", "Xi0", "E0", "epsilon"}, "config.ic");
    cfg.ic_type = ic.at("type").get<std::string>();
    const auto& l = cfg.params.lambdas;
    if (cfg.ic_type == "explicit") {
        cfg.ic = ic.at("values").get<std::vector<double>>();
        if (cfg.ic.size() != cfg.params.dim())
            throw std::domain_error("config: ic.values has the wrong length");
    } else if (cfg.ic_type == "thm3.9" || cfg.ic_type == "thm3.11") {
        if (cfg.params.id != SystemId::real_triad)
            throw std::domain_error("config: theorem IC splits require system real_triad");
        if (cfg.ic_type == "thm3.9") {
            double W0 = ic.at("W0").get<double>();
            if (!(W0 > 0.0)) throw std::domain_error("config: W0 must be > 0");
            double amp = std::sqrt(W0 / 2.0);
            cfg.ic = {amp / std::pow(std::abs(l[0]), 3.0), amp / std::pow(std::abs(l[1]), 3.0),
                      0.0};
        } else {
            double Xi0 = ic.at("Xi0").get<double>();
            if (!(Xi0 > 0.0)) throw std::domain_error("config: Xi0 must be > 0");
            double amp = std::sqrt(Xi0 / 2.0);
            cfg.ic = {amp / std::abs(l[0]), amp / std::abs(l[1]), 0.0};
        }
    } else if (cfg.ic_type == "near-saddle") {
        if (cfg.params.id != SystemId::real_triad)
            throw std::domain_error("config: near-saddle IC requires system real_triad");
        double E0 = ic.contains("E0") ? ic.at("E0").get<double>() : 1.0;
        double eps = ic.contains("epsilon") ? ic.at("epsilon").get<double>() : 1e-4;
        if (!(E0 > 0.0) || !(eps > 0.0 && eps < 1.0))
            throw std::domain_error("config: near-saddle needs E0 > 0 and epsilon in (0,1)");
        double s = std::sqrt(E0);
        cfg.ic = {0.0, s * (1.0 - eps), eps * s};
    } else {
        throw std::domain_error("config: unknown ic.type '" + cfg.ic_type + "'");
    }

    for (double v : cfg.ic)
        if (!std::isfinite(v))
            throw std::domain_error("config: initial state must be finite");

    cfg.t_end = j.at("t_end").get<double>();
    if (j.contains("rtol")) cfg.rtol = j.at("rtol").get<double>();
    if (j.contains("atol")) cfg.atol = j.at("atol").get<double>();
    if (j.contains("sample_dt")) cfg.sample_dt = j.at("sample_dt").get<double>();
    if (j.contains("renormalize_energy"))
        cfg.renormalize_energy = j.at("renormalize_energy").get<bool>();
    if (j.contains("s_list")) {
        cfg.s_list = j.at("s_list").get<std::vector<double>>();
        for (double s : cfg.s_list)
            if (!(s >= 1.0)) throw std::domain_error("config: s_list values must be >= 1");
    }
    if (j.contains("out")) {
        const json& o = j.at("out");
        reject_unknown_keys(o, {"trajectory", "report"}, "config.out");
        if (o.contains("trajectory")) cfg.out_trajectory = o.at("trajectory").get<std::string>();
        if (o.contains("report")) cfg.out_report = o.at("report").get<std::string>();
    }
    return cfg;
}

json run_config_to_json(const RunConfig& cfg) {
    json couplings;
    if (cfg.params.id == SystemId::complex_triad) couplings["C"] = cfg.params.C;
    if (cfg.params.id == SystemId::coupled) {
        couplings["Gamma"] = cfg.params.Gamma;
        couplings["GammaTilde"] = cfg.params.GammaTilde;
    }
    return json{{"schema", "v1"},
                {"system", to_string(cfg.params.id)},
                {"lambdas", cfg.params.lambdas},
                {"couplings", couplings},
                {"ic", {{"type", cfg.ic_type}, {"values", cfg.ic}}},
                {"t_end", cfg.t_end},
                {"rtol", cfg.rtol},
                {"atol", cfg.atol},
                {"sample_dt", cfg.sample_dt},
                {"renormalize_energy", cfg.renormalize_energy},
                {"s_list", cfg.s_list}};
}

std::vector<std::string> trajectory_columns(const SystemParams& params,
                                            const std::vector<double>& s_list) {
    std::vector<std::string> cols = {"t"};
    switch (params.id) {
        case SystemId::real_triad: cols.insert(cols.end(), {"p", "q", "r"}); break;
        case SystemId::complex_triad:
            cols.insert(cols.end(),
                        {"Uk_re", "Uk_im", "Um_re", "Um_im", "Un_re", "Un_im"});
            break;
        case SystemId::coupled:
            cols.insert(cols.end(), {"a_k", "a_m", "a_n", "a_mt", "a_kt"});
            break;
    }
    cols.insert(cols.end(), {"E", "H", "Xi"});
    for (double s : s_list) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "W_%.10g", s);
        cols.push_back(buf);
    }
    if (params.id == SystemId::coupled) cols.insert(cols.end(), {"E1", "E2", "E3"});
    return cols;
}

std::string trajectory_to_csv(const Trajectory& traj, const SystemParams& params,
                              const std::vector<double>& s_list) {
    auto cols = trajectory_columns(params, s_list);
    std::string out;
    for (size_t i = 0; i < cols.size(); ++i) {
        out += cols[i];
        out += (i + 1 < cols.size()) ? ',' : '\n';
    }
    std::vector<size_t> rows = traj.sample_indices;
    if (rows.empty()) {
        rows.resize(traj.size());
        for (size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    }
    for (size_t r : rows) {
        InvariantReport rep = invariant_report(params, traj.states[r], s_list);
        std::vector<double> vals;
        vals.push_back(traj.times[r]);
        for (double x : traj.states[r]) vals.push_back(x);
        vals.insert(vals.end(), {rep.E, rep.H, rep.Xi});
        for (const auto& [s, w] : rep.W_s) vals.push_back(w);
        if (rep.coupled)
            vals.insert(vals.end(), {rep.coupled->E1, rep.coupled->E2, rep.coupled->E3});
        for (size_t i = 0; i < vals.size(); ++i) {
            out += format_double(vals[i]);
            out += (i + 1 < vals.size()) ? ',' : '\n';
        }
    }
    return out;
}

const std::vector<double>& CsvTable::column(const std::string& name) const {
    for (size_t i = 0; i < columns.size(); ++i)
        if (columns[i] == name) return data[i];
    throw std::domain_error("csv: missing column '" + name + "'");
}

bool CsvTable::has_column(const std::string& name) const {
    for (const auto& c : columns)
        if (c == name) return true;
    return false;
}

CsvTable read_csv(std::istream& in) {
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw std::domain_error("csv: empty input");
    std::stringstream hs(line);
    std::string tok;
    while (std::getline(hs, tok, ',')) t.columns.push_back(tok);
    t.data.resize(t.columns.size());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        size_t i = 0;
        while (std::getline(ls, tok, ',')) {
            if (i >= t.columns.size()) throw std::domain_error("csv: row wider than header");
            t.data[i++].push_back(std::strtod(tok.c_str(), nullptr));
        }
        if (i != t.columns.size()) throw std::domain_error("csv: short row");
    }
    return t;
}

CsvTable read_csv_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::domain_error("cannot open " + path);
    return read_csv(in);
}

json invariant_report_to_json(const InvariantReport& rep) {
    json j{{"E", rep.E}, {"H", rep.H}, {"Xi", rep.Xi}};
    json ws = json::object();
    for (const auto& [s, w] : rep.W_s) {
        char key[32];
        std::snprintf(key, sizeof(key), "%.10g", s);
        ws[key] = w;
    }
    j["W_s"] = ws;
    if (rep.manley_rowe) {
        j["manley_rowe"] = {{"phase_invariant", rep.manley_rowe->phase_invariant},
                            {"E1", rep.manley_rowe->E1},
                            {"E2", rep.manley_rowe->E2},
                            {"phase_conserved", rep.manley_rowe->phase_conserved},
                            {"E1_conserved", rep.manley_rowe->E1_conserved},
                            {"E2_conserved", rep.manley_rowe->E2_conserved},
                            {"degenerate", rep.manley_rowe->degenerate}};
    }
    if (rep.coupled) {
        j["E1"] = rep.coupled->E1;
        j["E2"] = rep.coupled->E2;
        j["E3"] = rep.coupled->E3;
        j["alpha"] = rep.coupled->alpha;
        j["alphaTilde"] = rep.coupled->alphaTilde;
    }
    return j;
}

json run_report_json(const RunConfig& cfg, const Trajectory& traj) {
    json drift;
    for (const auto& name : traj.invariant_names) drift[name] = traj.max_drift(name);
    json rep = run_config_to_json(cfg);
    rep["stats"] = {{"accepted", traj.stats.accepted},
                    {"rejected", traj.stats.rejected},
                    {"rhs_evaluations", traj.stats.rhs_evaluations}};
    rep["invariants_initial"] =
        invariant_report_to_json(invariant_report(cfg.params, cfg.ic, cfg.s_list));
    rep["drift"] = drift;
    rep["warnings"] = traj.warnings;
    rep["outputs"] = {{"trajectory", cfg.out_trajectory}};
    return rep;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path target(path);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + tmp.string());
        out << content;
    }
    fs::rename(tmp, target);
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::domain_error("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace reso
