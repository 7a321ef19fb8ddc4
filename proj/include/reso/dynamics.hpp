#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace reso {

enum class SystemId { real_triad, complex_triad, coupled };

std::string to_string(SystemId id);
SystemId system_from_string(const std::string& s);

/// Complex SO(3;C) triad amplitudes with signed curl eigenvalues and the
/// real coupling constant C.
struct ComplexTriadState {
    std::complex<double> U_k, U_m, U_n;
    double lambda_k = 0.0, lambda_m = 0.0, lambda_n = 0.0;
    double C = 1.0;
};

/// Real rigid-body form on the invariant manifold U_k in iR, U_m, U_n in R,
/// time rescaled by C.
struct RealTriadState {
    double p = 0.0, q = 0.0, r = 0.0;
    double lambda = 0.0, mu = 0.0, nu = 0.0;
};

/// Two rigid bodies coupled through the shared axis amplitude a_n.
/// lambdas order: (lambda_k, lambda_m, lambda_n, lambda_mt, lambda_kt).
struct CoupledState {
    double a_k = 0.0, a_m = 0.0, a_n = 0.0, a_mt = 0.0, a_kt = 0.0;
    std::array<double, 5> lambdas{};
    double Gamma = 1.0, GammaTilde = 1.0;
};

std::array<std::complex<double>, 3> rhs_complex(const ComplexTriadState& s);
std::array<double, 3> rhs_real(const RealTriadState& s);
std::array<double, 5> rhs_coupled(const CoupledState& s);

/// alpha = (lambda_m - lambda_k)/(lambda_n - lambda_k); throws on equal
/// eigenvalues.
double coupled_alpha(const std::array<double, 5>& lambdas);
/// alphaTilde = (lambda_mt - lambda_n)/(lambda_kt - lambda_n).
double coupled_alpha_tilde(const std::array<double, 5>& lambdas);

enum class EquilibriumType { saddle, center };

struct Equilibrium {
    std::array<double, 3> point{};
    EquilibriumType type = EquilibriumType::center;
    std::array<std::complex<double>, 3> eigenvalues{};
};

/// The six axis equilibria of the real triad on the sphere of energy E,
/// labeled from the linearization spectrum. Requires lambda > mu > nu.
std::vector<Equilibrium> classify_equilibria(double lambda, double mu, double nu, double E);

/// System data for the generic integrator. lambdas has 3 entries for the
/// triad systems and 5 for the coupled one.
struct SystemParams {
    SystemId id = SystemId::real_triad;
    std::vector<double> lambdas;
    double C = 1.0;
    double Gamma = 1.0, GammaTilde = 1.0;

    void validate() const;
    size_t dim() const;
};

struct IntegrateOptions {
    double rtol = 1e-10;
    double atol = 1e-12;
    double sample_dt = 0.0;    // > 0: force accepted steps onto this grid
    bool reverse_time = false; // integrate the time-reversed flow
    // Rescale the state onto the initial energy sphere after each accepted
    // step. Off by default: conservation drift is a measured output.
    bool renormalize_energy = false;
};

struct StepStats {
    size_t accepted = 0, rejected = 0, rhs_evaluations = 0;
};

/// Accepted-step record of one integration run. `states`/`derivs` are
/// row-per-step; `invariants` holds the conserved functionals named in
/// `invariant_names`, evaluated at every accepted step.
struct Trajectory {
    SystemId system = SystemId::real_triad;
    std::vector<double> times;
    std::vector<std::vector<double>> states;
    std::vector<std::vector<double>> derivs;
    std::vector<size_t> sample_indices;  // rows on the sample_dt grid (empty: all)
    StepStats stats;
    std::vector<std::string> invariant_names;
    std::vector<std::vector<double>> invariants;
    std::vector<std::string> warnings;

    size_t size() const { return times.size(); }
    /// Max |I(t) - I(0)| over the run for the named conserved quantity.
    double max_drift(const std::string& name) const;
    /// Cubic Hermite interpolation of the state at time t.
    std::vector<double> state_at(double t) const;
};

/// Thrown on step-size underflow; carries the partial trajectory.
struct IntegrationError : std::runtime_error {
    IntegrationError(const std::string& what, Trajectory partial_)
        : std::runtime_error(what), partial(std::move(partial_)) {}
    Trajectory partial;
};

/// Embedded Dormand-Prince 5(4) pair with PI step control. Output at every
/// accepted step; with sample_dt set, steps are clipped so rows land exactly
/// on the uniform grid.
Trajectory integrate(const SystemParams& params, const std::vector<double>& y0,
                     double t_end, const IntegrateOptions& opts);

/// Flat state layouts used by integrate():
///   real_triad:    [p, q, r]
///   complex_triad: [Re U_k, Im U_k, Re U_m, Im U_m, Re U_n, Im U_n]
///   coupled:       [a_k, a_m, a_n, a_mt, a_kt]
std::vector<double> flatten(const ComplexTriadState& s);
ComplexTriadState complex_state_from_flat(const std::vector<double>& y,
                                          const std::array<double, 3>& lambdas, double C);

}  // namespace reso
