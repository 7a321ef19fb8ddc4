#include "reso/invariants.hpp"

#include <cmath>
#include <stdexcept>

namespace reso {

namespace {

void check_s_list(const std::vector<double>& s_list) {
    for (double s : s_list)
        if (!(s >= 1.0)) throw std::domain_error("invariant_report: s values must be >= 1");
}

// Sum of |lambda|^(2s) * amp2 over modes; the eigenvalue sign enters only H.
double sobolev_sum(const double* lam, const double* amp2, size_t n, double s) {
    double acc = 0.0;
    for (size_t i = 0; i < n; ++i) acc += std::pow(std::abs(lam[i]), 2.0 * s) * amp2[i];
    return acc;
}

InvariantReport base_report(const double* lam, const double* amp2, size_t n,
                            const std::vector<double>& s_list) {
    check_s_list(s_list);
    InvariantReport rep;
    for (size_t i = 0; i < n; ++i) {
        rep.E += amp2[i];
        rep.H += lam[i] * amp2[i];
        rep.Xi += lam[i] * lam[i] * amp2[i];
    }
    for (double s : s_list) rep.W_s.emplace_back(s, sobolev_sum(lam, amp2, n, s));
    return rep;
}

}  // namespace

ManleyRowe manley_rowe(const ComplexTriadState& s) {
    ManleyRowe mr;
    double rk2 = std::norm(s.U_k), rm2 = std::norm(s.U_m), rn2 = std::norm(s.U_n);
    std::complex<double> prod = s.U_n * std::conj(s.U_k) * std::conj(s.U_m);
    mr.phase_invariant = std::imag(prod);
    mr.phase_conserved = std::real(prod);
    mr.E1 = (s.lambda_k - s.lambda_m) * rn2 - (s.lambda_m - s.lambda_n) * rk2;
    mr.E2 = (s.lambda_m - s.lambda_n) * rk2 - (s.lambda_n - s.lambda_k) * rm2;
    mr.E1_conserved = (s.lambda_m - s.lambda_n) * rn2 - (s.lambda_k - s.lambda_m) * rk2;
    mr.E2_conserved = (s.lambda_n - s.lambda_k) * rk2 - (s.lambda_m - s.lambda_n) * rm2;
    mr.degenerate = (rk2 == 0.0 || rm2 == 0.0 || rn2 == 0.0);
    return mr;
}

InvariantReport invariant_report(const RealTriadState& s, const std::vector<double>& s_list) {
    double lam[3] = {s.lambda, s.mu, s.nu};
    double amp2[3] = {s.p * s.p, s.q * s.q, s.r * s.r};
    return base_report(lam, amp2, 3, s_list);
}

InvariantReport invariant_report(const ComplexTriadState& s, const std::vector<double>& s_list) {
    double lam[3] = {s.lambda_k, s.lambda_m, s.lambda_n};
    double amp2[3] = {std::norm(s.U_k), std::norm(s.U_m), std::norm(s.U_n)};
    InvariantReport rep = base_report(lam, amp2, 3, s_list);
    rep.manley_rowe = manley_rowe(s);
    return rep;
}

InvariantReport invariant_report(const CoupledState& s, const std::vector<double>& s_list) {
    double amp2[5] = {s.a_k * s.a_k, s.a_m * s.a_m, s.a_n * s.a_n, s.a_mt * s.a_mt,
                      s.a_kt * s.a_kt};
    InvariantReport rep = base_report(s.lambdas.data(), amp2, 5, s_list);
    CoupledInvariants ci;
    ci.alpha = coupled_alpha(s.lambdas);
    ci.alphaTilde = coupled_alpha_tilde(s.lambdas);
    ci.E1 = amp2[0] + (1.0 - ci.alpha) * amp2[1];
    ci.E2 = amp2[2] + ci.alpha * amp2[1] + (1.0 - ci.alphaTilde) * amp2[3];
    ci.E3 = amp2[4] + ci.alphaTilde * amp2[3];
    rep.coupled = ci;
    return rep;
}

InvariantReport invariant_report(const SystemParams& params, const std::vector<double>& y,
                                 const std::vector<double>& s_list) {
    params.validate();
    if (y.size() != params.dim())
        throw std::domain_error("invariant_report: state size does not match system");
    switch (params.id) {
        case SystemId::real_triad: {
            RealTriadState s{y[0], y[1], y[2], params.lambdas[0], params.lambdas[1],
                             params.lambdas[2]};
            return invariant_report(s, s_list);
        }
        case SystemId::complex_triad:
            return invariant_report(
                complex_state_from_flat(y, {params.lambdas[0], params.lambdas[1],
                                            params.lambdas[2]},
                                        params.C),
                s_list);
        case SystemId::coupled: {
            CoupledState s;
            s.a_k = y[0];
            s.a_m = y[1];
            s.a_n = y[2];
            s.a_mt = y[3];
            s.a_kt = y[4];
            for (int i = 0; i < 5; ++i) s.lambdas[i] = params.lambdas[i];
            s.Gamma = params.Gamma;
            s.GammaTilde = params.GammaTilde;
            return invariant_report(s, s_list);
        }
    }
    throw std::logic_error("invariant_report: unknown system");
}

VandermondeResult vandermonde_recover(double E, double H, double Xi, double lambda,
                                      double mu, double nu) {
    if (lambda == mu || mu == nu || lambda == nu)
        throw std::domain_error("vandermonde_recover: eigenvalues must be pairwise distinct");
    VandermondeResult r;
    r.p2 = (Xi - (mu + nu) * H + mu * nu * E) / ((lambda - mu) * (lambda - nu));
    r.q2 = (Xi - (nu + lambda) * H + nu * lambda * E) / ((mu - nu) * (mu - lambda));
    r.r2 = (Xi - (lambda + mu) * H + lambda * mu * E) / ((nu - lambda) * (nu - mu));
    r.feasible = (r.p2 >= 0.0 && r.q2 >= 0.0 && r.r2 >= 0.0);
    return r;
}

}  // namespace reso
