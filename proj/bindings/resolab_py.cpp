#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "reso/closed_form.hpp"
#include "reso/dynamics.hpp"
#include "reso/invariants.hpp"
#include "reso/lattice.hpp"

namespace py = pybind11;
using namespace reso;

namespace {

WaveVector to_wv(const std::array<long long, 3>& a) { return {a[0], a[1], a[2]}; }
std::array<long long, 3> from_wv(const WaveVector& v) { return {v.n1, v.n2, v.n3}; }

SignBranch to_branch(const std::array<int, 3>& s) { return {s[0], s[1], s[2]}; }

py::dict triad_dict(const Triad& t) {
    py::dict d;
    d["k"] = from_wv(t.k);
    d["m"] = from_wv(t.m);
    d["n"] = from_wv(t.n);
    d["signs"] = std::array<int, 3>{t.signs.sk, t.signs.sm, t.signs.sn};
    d["lambdas"] = t.lambdas;
    d["residual"] = t.residual;
    return d;
}

}  // namespace

PYBIND11_MODULE(resolab, mod) {
    mod.doc() = "resonant triad laboratory: lattice resonances, rigid-body triad "
                "dynamics, conservation laws and closed-form period/burst bounds";

    mod.def(
        "dispersion_ratio",
        [](std::array<long long, 3> v, double t1, double t2, double t3) {
            return dispersion_ratio(to_wv(v), {t1, t2, t3});
        },
        py::arg("v"), py::arg("theta1") = 1.0, py::arg("theta2") = 1.0, py::arg("theta3") = 1.0);

    mod.def(
        "residual",
        [](std::array<long long, 3> k, std::array<long long, 3> m, double t1, double t2,
           double t3, std::array<int, 3> signs_nkm) {
            return residual(to_wv(k), to_wv(m), {t1, t2, t3}, to_branch(signs_nkm));
        },
        py::arg("k"), py::arg("m"), py::arg("theta1"), py::arg("theta2"), py::arg("theta3"),
        py::arg("signs"), "signs ordered (sn, sk, sm)");

    mod.def("apply_symmetry", [](int j, std::array<long long, 3> v) {
        return from_wv(apply_symmetry(j, to_wv(v)));
    });

    mod.def(
        "search_triads",
        [](double t1, double t2, double t3, long long box, double tol) {
            TriadCatalog cat = search_triads({t1, t2, t3}, box, tol);
            py::list out;
            for (const Triad& t : cat.entries) out.append(triad_dict(t));
            return out;
        },
        py::arg("theta1"), py::arg("theta2"), py::arg("theta3"), py::arg("box"),
        py::arg("tol") = 1e-12);

    mod.def("quartic_coefficients", &quartic_coefficients);

    mod.def(
        "solve_theta3",
        [](std::array<long long, 3> k, std::array<long long, 3> m, double t1, double t2) {
            py::list out;
            for (const auto& r : solve_theta3(to_wv(k), to_wv(m), t1, t2)) {
                py::dict d;
                d["theta3"] = r.theta3;
                d["signs"] = std::array<int, 3>{r.signs.sn, r.signs.sk, r.signs.sm};
                d["residual"] = r.residual;
                out.append(d);
            }
            return out;
        },
        py::arg("k"), py::arg("m"), py::arg("theta1") = 1.0, py::arg("theta2") = 1.0);

    mod.def("beta_asymptotic", &beta_asymptotic);

    mod.def("irreducibility_det",
            [](std::array<long long, 3> k, std::array<long long, 3> m,
               std::array<long long, 3> n) {
                return irreducibility_det(to_wv(k), to_wv(m), to_wv(n));
            });

    mod.def("degeneracy_G",
            [](std::array<long long, 3> k, std::array<long long, 3> m, int i, int j) {
                return degeneracy_G(to_wv(k), to_wv(m), i, j);
            });

    mod.def("decompose_primitive",
            [](std::array<long long, 3> k, std::array<long long, 3> m, int i, int j) {
                PrimitivePair pp = decompose_primitive(to_wv(k), to_wv(m), i, j);
                py::dict d;
                d["kbar"] = from_wv(pp.kbar);
                d["mbar"] = from_wv(pp.mbar);
                d["a"] = pp.a;
                d["aPrime"] = pp.aPrime;
                d["b"] = pp.b;
                d["bPrime"] = pp.bPrime;
                d["i"] = pp.i;
                d["j"] = pp.j;
                d["n"] = from_wv(primitive_n(pp));
                d["checks_pass"] = verify_primitive_pair(pp).all();
                return d;
            });

    mod.def("rhs_real", [](std::array<double, 3> y, std::array<double, 3> lam) {
        RealTriadState s{y[0], y[1], y[2], lam[0], lam[1], lam[2]};
        return rhs_real(s);
    });

    mod.def(
        "rhs_complex",
        [](std::array<std::complex<double>, 3> U, std::array<double, 3> lam, double C) {
            ComplexTriadState s;
            s.U_k = U[0];
            s.U_m = U[1];
            s.U_n = U[2];
            s.lambda_k = lam[0];
            s.lambda_m = lam[1];
            s.lambda_n = lam[2];
            s.C = C;
            return rhs_complex(s);
        },
        py::arg("U"), py::arg("lambdas"), py::arg("C") = 1.0);

    mod.def(
        "manley_rowe",
        [](std::array<std::complex<double>, 3> U, std::array<double, 3> lam) {
            ComplexTriadState s;
            s.U_k = U[0];
            s.U_m = U[1];
            s.U_n = U[2];
            s.lambda_k = lam[0];
            s.lambda_m = lam[1];
            s.lambda_n = lam[2];
            ManleyRowe mr = manley_rowe(s);
            py::dict d;
            d["phase_invariant"] = mr.phase_invariant;
            d["E1"] = mr.E1;
            d["E2"] = mr.E2;
            d["phase_conserved"] = mr.phase_conserved;
            d["E1_conserved"] = mr.E1_conserved;
            d["E2_conserved"] = mr.E2_conserved;
            d["degenerate"] = mr.degenerate;
            return d;
        },
        py::arg("U"), py::arg("lambdas"));

    mod.def("rhs_coupled", [](std::array<double, 5> y, std::array<double, 5> lam,
                              double Gamma, double GammaTilde) {
        CoupledState s;
        s.a_k = y[0];
        s.a_m = y[1];
        s.a_n = y[2];
        s.a_mt = y[3];
        s.a_kt = y[4];
        s.lambdas = lam;
        s.Gamma = Gamma;
        s.GammaTilde = GammaTilde;
        return rhs_coupled(s);
    });

    mod.def(
        "integrate",
        [](const std::string& system, std::vector<double> lambdas, std::vector<double> y0,
           double t_end, double rtol, double atol, double sample_dt) {
            SystemParams sp;
            sp.id = system_from_string(system);
            sp.lambdas = std::move(lambdas);
            IntegrateOptions opts;
            opts.rtol = rtol;
            opts.atol = atol;
            opts.sample_dt = sample_dt;
            Trajectory tr = integrate(sp, y0, t_end, opts);
            py::dict d;
            d["times"] = tr.times;
            d["states"] = tr.states;
            py::dict drift;
            for (const auto& name : tr.invariant_names) drift[name.c_str()] = tr.max_drift(name);
            d["drift"] = drift;
            d["accepted"] = tr.stats.accepted;
            return d;
        },
        py::arg("system"), py::arg("lambdas"), py::arg("y0"), py::arg("t_end"),
        py::arg("rtol") = 1e-10, py::arg("atol") = 1e-12, py::arg("sample_dt") = 0.0);

    mod.def(
        "invariant_report",
        [](const std::string& system, std::vector<double> lambdas, std::vector<double> y,
           std::vector<double> s_list) {
            SystemParams sp;
            sp.id = system_from_string(system);
            sp.lambdas = std::move(lambdas);
            InvariantReport rep = invariant_report(sp, y, s_list);
            py::dict d;
            d["E"] = rep.E;
            d["H"] = rep.H;
            d["Xi"] = rep.Xi;
            py::dict ws;
            for (const auto& [s, w] : rep.W_s) ws[py::cast(s)] = w;
            d["W_s"] = ws;
            if (rep.coupled) {
                d["E1"] = rep.coupled->E1;
                d["E2"] = rep.coupled->E2;
                d["E3"] = rep.coupled->E3;
                d["alpha"] = rep.coupled->alpha;
                d["alphaTilde"] = rep.coupled->alphaTilde;
            }
            if (rep.manley_rowe) d["manley_rowe"] = rep.manley_rowe->phase_invariant;
            return d;
        },
        py::arg("system"), py::arg("lambdas"), py::arg("y"),
        py::arg("s_list") = std::vector<double>{1.0, 3.0});

    mod.def("vandermonde_recover", [](double E, double H, double Xi, double l, double m,
                                      double n) {
        auto r = vandermonde_recover(E, H, Xi, l, m, n);
        return py::make_tuple(r.p2, r.q2, r.r2, r.feasible);
    });

    mod.def("cubic_data", [](double l, double m, double n, double p0, double q0) {
        CubicData c = cubic_data(l, m, n, p0, q0);
        py::dict d;
        d["x_minus"] = c.x_minus;
        d["x_zero"] = c.x_zero;
        d["x_plus"] = c.x_plus;
        d["K"] = c.K;
        return d;
    });

    mod.def("half_period", [](double xm, double x0, double xp, double K) {
        CubicData c;
        c.x_minus = xm;
        c.x_zero = x0;
        c.x_plus = xp;
        c.K = K;
        return half_period(c);
    });

    mod.def("period_asymptotic", &period_asymptotic);

    mod.def("burst_bounds_h3", [](double l, double m, double n, double W0) {
        BurstBounds b = burst_bounds_h3(l, m, n, W0);
        return py::make_tuple(b.ratio_bound, b.t_star_bound, b.regime_ok());
    });

    mod.def("burst_bounds_enstrophy", [](double l, double m, double n, double Xi0) {
        BurstBounds b = burst_bounds_enstrophy(l, m, n, Xi0);
        return py::make_tuple(b.ratio_bound, b.t_star_bound, b.regime_ok());
    });

    mod.def("classify_equilibria", [](double l, double m, double n, double E) {
        py::list out;
        for (const auto& e : classify_equilibria(l, m, n, E)) {
            py::dict d;
            d["point"] = e.point;
            d["type"] = e.type == EquilibriumType::saddle ? "saddle" : "center";
            out.append(d);
        }
        return out;
    });
}
