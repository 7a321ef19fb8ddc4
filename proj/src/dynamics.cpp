#include "reso/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "reso/invariants.hpp"

namespace reso {

std::string to_string(SystemId id) {
    switch (id) {
        case SystemId::real_triad: return "real_triad";
        case SystemId::complex_triad: return "complex_triad";
        case SystemId::coupled: return "coupled";
    }
    return "?";
}

SystemId system_from_string(const std::string& s) {
    if (s == "real_triad") return SystemId::real_triad;
    if (s == "complex_triad") return SystemId::complex_triad;
    if (s == "coupled") return SystemId::coupled;
    throw std::domain_error("unknown system id: " + s);
}

std::array<std::complex<double>, 3> rhs_complex(const ComplexTriadState& s) {
    const std::complex<double> I(0.0, 1.0);
    std::complex<double> dUn = -I * (s.lambda_k - s.lambda_m) * s.C * s.U_k * s.U_m;
    std::complex<double> dUk = I * (s.lambda_m - s.lambda_n) * s.C * s.U_n * std::conj(s.U_m);
    std::complex<double> dUm = I * (s.lambda_n - s.lambda_k) * s.C * s.U_n * std::conj(s.U_k);
    return {dUk, dUm, dUn};
}

std::array<double, 3> rhs_real(const RealTriadState& s) {
    return {-(s.mu - s.nu) * s.q * s.r, -(s.nu - s.lambda) * s.r * s.p,
            -(s.lambda - s.mu) * s.p * s.q};
}

std::array<double, 5> rhs_coupled(const CoupledState& s) {
    const auto& l = s.lambdas;  // (lk, lm, ln, lmt, lkt)
    double dak = (l[1] - l[2]) * s.Gamma * s.a_m * s.a_n;
    double dam = (l[2] - l[0]) * s.Gamma * s.a_n * s.a_k;
    double dan = (l[0] - l[1]) * s.Gamma * s.a_k * s.a_m +
                 (l[4] - l[3]) * s.GammaTilde * s.a_kt * s.a_mt;
    double damt = (l[2] - l[4]) * s.GammaTilde * s.a_n * s.a_kt;
    double dakt = (l[3] - l[2]) * s.GammaTilde * s.a_mt * s.a_n;
    return {dak, dam, dan, damt, dakt};
}

double coupled_alpha(const std::array<double, 5>& l) {
    if (l[2] == l[0]) throw std::domain_error("coupled_alpha: lambda_n = lambda_k");
    return (l[1] - l[0]) / (l[2] - l[0]);
}

double coupled_alpha_tilde(const std::array<double, 5>& l) {
    if (l[4] == l[2]) throw std::domain_error("coupled_alpha_tilde: lambda_kt = lambda_n");
    return (l[3] - l[2]) / (l[4] - l[2]);
}

namespace {

// Roots of x^3 + b x^2 + c x + d.
std::array<std::complex<double>, 3> cubic_roots(double b, double c, double d) {
    double p = c - b * b / 3.0;
    double q = 2.0 * b * b * b / 27.0 - b * c / 3.0 + d;
    double shift = -b / 3.0;
    double disc = q * q / 4.0 + p * p * p / 27.0;
    std::array<std::complex<double>, 3> roots;
    if (disc > 0.0) {
        double sq = std::sqrt(disc);
        double u = std::cbrt(-q / 2.0 + sq), v = std::cbrt(-q / 2.0 - sq);
        roots[0] = u + v + shift;
        double re = -(u + v) / 2.0 + shift, im = std::sqrt(3.0) / 2.0 * (u - v);
        roots[1] = {re, im};
        roots[2] = {re, -im};
    } else {
        constexpr double pi = 3.14159265358979323846;
        double r = std::sqrt(std::max(0.0, -p / 3.0));
        if (r == 0.0) {
            roots.fill(shift);
        } else {
            double arg = std::clamp(-q / (2.0 * r * r * r), -1.0, 1.0);
            double phi = std::acos(arg);
            for (int k = 0; k < 3; ++k)
                roots[k] = 2.0 * r * std::cos((phi + 2.0 * pi * k) / 3.0) + shift;
        }
    }
    return roots;
}

}  // namespace

std::vector<Equilibrium> classify_equilibria(double lambda, double mu, double nu, double E) {
    if (!(lambda > mu && mu > nu))
        throw std::domain_error("classify_equilibria: requires lambda > mu > nu");
    if (!(E > 0.0)) throw std::domain_error("classify_equilibria: E must be > 0");
    double s = std::sqrt(E);

    std::vector<Equilibrium> out;
    for (auto [p, q, r] : {std::array<double, 3>{s, 0, 0}, {-s, 0, 0}, {0, s, 0}, {0, -s, 0},
                           {0, 0, s}, {0, 0, -s}}) {
        // Jacobian of rhs_real at (p, q, r)
        double J[3][3] = {{0.0, -(mu - nu) * r, -(mu - nu) * q},
                          {-(nu - lambda) * r, 0.0, -(nu - lambda) * p},
                          {-(lambda - mu) * q, -(lambda - mu) * p, 0.0}};
        double tr = J[0][0] + J[1][1] + J[2][2];
        double minors = (J[1][1] * J[2][2] - J[1][2] * J[2][1]) +
                        (J[0][0] * J[2][2] - J[0][2] * J[2][0]) +
                        (J[0][0] * J[1][1] - J[0][1] * J[1][0]);
        double det = J[0][0] * (J[1][1] * J[2][2] - J[1][2] * J[2][1]) -
                     J[0][1] * (J[1][0] * J[2][2] - J[1][2] * J[2][0]) +
                     J[0][2] * (J[1][0] * J[2][1] - J[1][1] * J[2][0]);
        auto eig = cubic_roots(-tr, minors, -det);

        double scale = 0.0;
        for (const auto& e : eig) scale = std::max(scale, std::abs(e));
        double tol = 1e-9 * std::max(scale, 1e-300);
        bool positive_real = false, oscillatory = false;
        for (const auto& e : eig) {
            if (e.real() > tol) positive_real = true;
            if (std::abs(e.imag()) > tol) oscillatory = true;
        }
        Equilibrium eq;
        eq.point = {p, q, r};
        eq.eigenvalues = eig;
        eq.type = positive_real ? EquilibriumType::saddle : EquilibriumType::center;
        (void)oscillatory;
        out.push_back(eq);
    }
    return out;
}

void SystemParams::validate() const {
    auto distinct = [](double a, double b) { return a != b; };
    switch (id) {
        case SystemId::real_triad:
        case SystemId::complex_triad:
            if (lambdas.size() != 3)
                throw std::domain_error("triad systems need 3 eigenvalues");
            if (!distinct(lambdas[0], lambdas[1]) || !distinct(lambdas[1], lambdas[2]) ||
                !distinct(lambdas[0], lambdas[2]))
                throw std::domain_error("triad eigenvalues must be pairwise distinct");
            break;
        case SystemId::coupled:
            if (lambdas.size() != 5)
                throw std::domain_error("coupled system needs 5 eigenvalues");
            if (!distinct(lambdas[0], lambdas[1]) || !distinct(lambdas[1], lambdas[2]) ||
                !distinct(lambdas[0], lambdas[2]))
                throw std::domain_error("lambda_k, lambda_m, lambda_n must be pairwise distinct");
            if (!distinct(lambdas[3], lambdas[2]) || !distinct(lambdas[2], lambdas[4]) ||
                !distinct(lambdas[3], lambdas[4]))
                throw std::domain_error("lambda_mt, lambda_n, lambda_kt must be pairwise distinct");
            break;
    }
    for (double l : lambdas)
        if (!std::isfinite(l)) throw std::domain_error("eigenvalues must be finite");
    if (!std::isfinite(C) || !std::isfinite(Gamma) || !std::isfinite(GammaTilde))
        throw std::domain_error("coupling constants must be finite");
}

size_t SystemParams::dim() const {
    switch (id) {
        case SystemId::real_triad: return 3;
        case SystemId::complex_triad: return 6;
        case SystemId::coupled: return 5;
    }
    return 0;
}

std::vector<double> flatten(const ComplexTriadState& s) {
    return {s.U_k.real(), s.U_k.imag(), s.U_m.real(),
            s.U_m.imag(), s.U_n.real(), s.U_n.imag()};
}

ComplexTriadState complex_state_from_flat(const std::vector<double>& y,
                                          const std::array<double, 3>& lambdas, double C) {
    ComplexTriadState s;
    s.U_k = {y[0], y[1]};
    s.U_m = {y[2], y[3]};
    s.U_n = {y[4], y[5]};
    s.lambda_k = lambdas[0];
    s.lambda_m = lambdas[1];
    s.lambda_n = lambdas[2];
    s.C = C;
    return s;
}

namespace {

constexpr size_t kMaxDim = 8;
using Buf = std::array<double, kMaxDim>;

void eval_rhs(const SystemParams& sp, const double* y, double* dy) {
    switch (sp.id) {
        case SystemId::real_triad: {
            RealTriadState s{y[0], y[1], y[2], sp.lambdas[0], sp.lambdas[1], sp.lambdas[2]};
            auto d = rhs_real(s);
            std::copy(d.begin(), d.end(), dy);
            break;
        }
        case SystemId::complex_triad: {
            ComplexTriadState s;
            s.U_k = {y[0], y[1]};
            s.U_m = {y[2], y[3]};
            s.U_n = {y[4], y[5]};
            s.lambda_k = sp.lambdas[0];
            s.lambda_m = sp.lambdas[1];
            s.lambda_n = sp.lambdas[2];
            s.C = sp.C;
            auto d = rhs_complex(s);
            dy[0] = d[0].real();
            dy[1] = d[0].imag();
            dy[2] = d[1].real();
            dy[3] = d[1].imag();
            dy[4] = d[2].real();
            dy[5] = d[2].imag();
            break;
        }
        case SystemId::coupled: {
            CoupledState s;
            s.a_k = y[0];
            s.a_m = y[1];
            s.a_n = y[2];
            s.a_mt = y[3];
            s.a_kt = y[4];
            for (int i = 0; i < 5; ++i) s.lambdas[i] = sp.lambdas[i];
            s.Gamma = sp.Gamma;
            s.GammaTilde = sp.GammaTilde;
            auto d = rhs_coupled(s);
            std::copy(d.begin(), d.end(), dy);
            break;
        }
    }
}

std::vector<std::string> invariant_names_for(SystemId id) {
    switch (id) {
        case SystemId::real_triad: return {"E", "H"};
        case SystemId::complex_triad: return {"E", "H", "MR", "MR1", "MR2"};
        case SystemId::coupled: return {"E", "H", "E1", "E2", "E3"};
    }
    return {};
}

std::vector<double> conserved_values(const SystemParams& sp, const double* y, size_t n) {
    std::vector<double> flat(y, y + n);
    InvariantReport rep = invariant_report(sp, flat, {});
    switch (sp.id) {
        case SystemId::real_triad: return {rep.E, rep.H};
        case SystemId::complex_triad:
            // the conserved Manley-Rowe combinations (see invariants.hpp)
            return {rep.E, rep.H, rep.manley_rowe->phase_conserved,
                    rep.manley_rowe->E1_conserved, rep.manley_rowe->E2_conserved};
        case SystemId::coupled:
            return {rep.E, rep.H, rep.coupled->E1, rep.coupled->E2, rep.coupled->E3};
    }
    return {};
}

// Dormand-Prince 5(4) coefficients.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

}  // namespace

Trajectory integrate(const SystemParams& params, const std::vector<double>& y0, double t_end,
                     const IntegrateOptions& opts) {
    params.validate();
    const size_t n = params.dim();
    if (y0.size() != n) throw std::domain_error("integrate: state size mismatch");
    if (!(t_end > 0.0)) throw std::domain_error("integrate: t_end must be > 0");
    if (t_end > 1e4) throw std::domain_error("integrate: t_end capped at 1e4");
    if (!(opts.rtol > 0.0 && opts.rtol <= 1e-3) || !(opts.atol > 0.0 && opts.atol <= 1e-3))
        throw std::domain_error("integrate: tolerances must lie in (0, 1e-3]");
    if (opts.sample_dt < 0.0) throw std::domain_error("integrate: sample_dt must be >= 0");

    auto f = [&](const double* y, double* dy) {
        eval_rhs(params, y, dy);
        if (opts.reverse_time)
            for (size_t i = 0; i < n; ++i) dy[i] = -dy[i];
    };

    Trajectory traj;
    traj.system = params.id;
    traj.invariant_names = invariant_names_for(params.id);

    Buf y{}, ynew{}, yerr{}, k1{}, k2{}, k3{}, k4{}, k5{}, k6{}, k7{}, ytmp{};
    std::copy(y0.begin(), y0.end(), y.begin());

    double t = 0.0;
    f(y.data(), k1.data());
    traj.stats.rhs_evaluations++;

    auto record = [&](double tt, const Buf& yy, const Buf& ff, bool on_grid) {
        traj.times.push_back(tt);
        traj.states.emplace_back(yy.begin(), yy.begin() + n);
        traj.derivs.emplace_back(ff.begin(), ff.begin() + n);
        traj.invariants.push_back(conserved_values(params, yy.data(), n));
        if (on_grid) traj.sample_indices.push_back(traj.times.size() - 1);
    };
    record(0.0, y, k1, true);

    // initial step from the scale of y and f
    double h;
    {
        double ynorm = 0.0, fnorm = 0.0;
        for (size_t i = 0; i < n; ++i) {
            ynorm = std::max(ynorm, std::abs(y[i]));
            fnorm = std::max(fnorm, std::abs(k1[i]));
        }
        h = (fnorm > 0.0) ? 0.01 * std::max(ynorm, opts.atol) / fnorm : 1e-4;
        h = std::min(h, t_end);
    }

    double err_prev = 1.0;
    size_t next_sample = 1;
    size_t saddle_dwell = 0;

    double energy0 = 0.0;
    for (size_t i = 0; i < n; ++i) energy0 += y0[i] * y0[i];

    const double saddle_E = [&] {
        if (params.id != SystemId::real_triad) return 0.0;
        double E0 = 0.0;
        for (size_t i = 0; i < n; ++i) E0 += y0[i] * y0[i];
        return E0;
    }();

    while (t < t_end) {
        double t_target = t_end;
        bool target_is_sample = false;
        if (opts.sample_dt > 0.0) {
            double ts = static_cast<double>(next_sample) * opts.sample_dt;
            if (ts < t_target) {
                t_target = ts;
                target_is_sample = true;
            } else if (ts == t_target) {
                target_is_sample = true;
            }
        }
        bool clipped = false;
        if (t + h >= t_target) {
            h = t_target - t;
            clipped = true;
        }
        if (h < 16.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, t))
            throw IntegrationError("integrate: step size underflow at t = " + std::to_string(t),
                                   std::move(traj));

        auto stage = [&](Buf& out, std::initializer_list<std::pair<const Buf*, double>> terms) {
            for (size_t i = 0; i < n; ++i) {
                double acc = y[i];
                for (const auto& [kv, c] : terms) acc += h * c * (*kv)[i];
                out[i] = acc;
            }
        };
        stage(ytmp, {{&k1, a21}});
        f(ytmp.data(), k2.data());
        stage(ytmp, {{&k1, a31}, {&k2, a32}});
        f(ytmp.data(), k3.data());
        stage(ytmp, {{&k1, a41}, {&k2, a42}, {&k3, a43}});
        f(ytmp.data(), k4.data());
        stage(ytmp, {{&k1, a51}, {&k2, a52}, {&k3, a53}, {&k4, a54}});
        f(ytmp.data(), k5.data());
        stage(ytmp, {{&k1, a61}, {&k2, a62}, {&k3, a63}, {&k4, a64}, {&k5, a65}});
        f(ytmp.data(), k6.data());
        for (size_t i = 0; i < n; ++i)
            ynew[i] = y[i] + h * (b1 * k1[i] + b3 * k3[i] + b4 * k4[i] + b5 * k5[i] + b6 * k6[i]);
        f(ynew.data(), k7.data());
        traj.stats.rhs_evaluations += 6;

        double err = 0.0;
        for (size_t i = 0; i < n; ++i) {
            yerr[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] +
                           e7 * k7[i]);
            double sc = opts.atol + opts.rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
            double r = yerr[i] / sc;
            err += r * r;
        }
        err = std::sqrt(err / static_cast<double>(n));

        if (err <= 1.0) {
            t = clipped ? t_target : t + h;  // land exactly on grid/end times
            y = ynew;
            k1 = k7;  // FSAL
            if (opts.renormalize_energy) {
                double e = 0.0;
                for (size_t i = 0; i < n; ++i) e += y[i] * y[i];
                if (e > 0.0) {
                    double scale = std::sqrt(energy0 / e);
                    for (size_t i = 0; i < n; ++i) y[i] *= scale;
                    f(y.data(), k1.data());  // FSAL derivative at the rescaled state
                    traj.stats.rhs_evaluations++;
                }
            }
            traj.stats.accepted++;
            bool on_grid = clipped && target_is_sample;
            record(t, y, k1, on_grid);
            if (on_grid) next_sample++;

            if (params.id == SystemId::real_triad) {
                double dq = std::abs(y[1]) - std::sqrt(saddle_E);
                if (std::sqrt(y[0] * y[0] + y[2] * y[2] + dq * dq) < 1e-8) saddle_dwell++;
            } else if (params.id == SystemId::coupled) {
                if (std::sqrt(y[1] * y[1] + y[2] * y[2] + y[3] * y[3]) < 1e-8) saddle_dwell++;
            }
        } else {
            traj.stats.rejected++;
        }

        // PI step control (Lund stabilization)
        double fac = 0.9 * std::pow(std::max(err, 1e-16), -0.14) * std::pow(err_prev, 0.08);
        fac = std::clamp(fac, 0.2, err <= 1.0 ? 5.0 : 1.0);
        h *= fac;
        if (err <= 1.0) err_prev = std::max(err, 1e-16);
    }

    if (traj.stats.accepted > 20 && saddle_dwell > traj.stats.accepted / 10)
        traj.warnings.push_back("slow-passage: state within 1e-8 of a hyperbolic point for >10% of steps");
    if (opts.sample_dt == 0.0) traj.sample_indices.clear();
    return traj;
}

double Trajectory::max_drift(const std::string& name) const {
    for (size_t j = 0; j < invariant_names.size(); ++j) {
        if (invariant_names[j] != name) continue;
        double v0 = invariants.front()[j], d = 0.0;
        for (const auto& row : invariants) d = std::max(d, std::abs(row[j] - v0));
        return d;
    }
    throw std::domain_error("max_drift: unknown invariant " + name);
}

std::vector<double> Trajectory::state_at(double t) const {
    if (times.empty()) throw std::domain_error("state_at: empty trajectory");
    if (t <= times.front()) return states.front();
    if (t >= times.back()) return states.back();
    size_t hi = std::upper_bound(times.begin(), times.end(), t) - times.begin();
    size_t lo = hi - 1;
    double h = times[hi] - times[lo];
    double s = (t - times[lo]) / h;
    double h00 = (1 + 2 * s) * (1 - s) * (1 - s), h10 = s * (1 - s) * (1 - s);
    double h01 = s * s * (3 - 2 * s), h11 = s * s * (s - 1);
    std::vector<double> out(states[lo].size());
    for (size_t i = 0; i < out.size(); ++i)
        out[i] = h00 * states[lo][i] + h * h10 * derivs[lo][i] + h01 * states[hi][i] +
                 h * h11 * derivs[hi][i];
    return out;
}

}  // namespace reso
