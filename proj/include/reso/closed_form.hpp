#pragma once

#include <array>

#include "reso/dynamics.hpp"

namespace reso {

/// Roots of the cubic governing the enstrophy oscillation (r(0) = 0 data)
/// and the prefactor K of the second-order Xi equation.
struct CubicData {
    double x_minus = 0.0, x_zero = 0.0, x_plus = 0.0;
    double K = 0.0;
    std::array<double, 3> lambdas{};  // (lambda, mu, nu)
};

CubicData cubic_data(double lambda, double mu, double nu, double p0, double q0);

/// P(x) = (x - x_minus)(x - x_zero)(x - x_plus) and its derivative.
double cubic_P(const CubicData& c, double x);
double cubic_P_prime(const CubicData& c, double x);

/// Half-period T = (1/(2 sqrt K)) * int_{x0}^{x+} dx / sqrt(-P(x)), computed
/// by adaptive quadrature after the x = x0 + (x+ - x0) sin^2(phi)
/// substitution removes the endpoint singularities. Relative accuracy 1e-10.
double half_period(const CubicData& c);

/// Modulus-1 asymptotic of the period integral:
/// (1/sqrt(x+ - x-)) * ln(1 / (1 - sqrt((x+ - x0)/(x+ - x-)))).
double period_asymptotic(double x_minus, double x_zero, double x_plus);

/// The period integral int_{x0}^{x+} dx / sqrt(-P(x)) itself (no K factor),
/// by the same adaptive quadrature as half_period.
double period_integral(double x_minus, double x_zero, double x_plus);

struct BurstBounds {
    double ratio_bound = 0.0;
    double t_star_bound = 0.0;
    bool mu_small = false;             // |mu| / lambda <= 0.1
    bool lambda_nu_comparable = false; // |lambda/nu| in [0.8, 1.25]
    bool opposite_polarity = false;    // lambda * nu < 0

    bool regime_ok() const { return mu_small && lambda_nu_comparable && opposite_polarity; }
};

/// H^3 burst bound: W jumps to >= (1/4)(lambda/mu)^6 W(0) within
/// t* <= (6/sqrt(W0)) mu^2 ln(rho)/rho, rho = lambda/|mu|.
BurstBounds burst_bounds_h3(double lambda, double mu, double nu, double W0);

/// Enstrophy burst bound: ratio rho^2 against Xi(0), first passage within
/// t** <= (1/sqrt(2 Xi0)) ln(rho)/rho.
BurstBounds burst_bounds_enstrophy(double lambda, double mu, double nu, double Xi0);

struct XiResidualReport {
    double max_rel_residual = 0.0;  // relative to max |2 K P'(Xi)| on the window
    bool constant_flag = false;     // equilibrium trajectory, residual vacuous
};

/// Central-difference check of Xi_ddot = -2 K P'(Xi) on a uniformly sampled
/// real-triad trajectory. Points with |Xi_dot| at or below its 10th
/// percentile (extrema neighborhoods) are excluded.
XiResidualReport xi_ode_residual(const Trajectory& traj, const CubicData& c);

/// Conserved functional of the reduced (a_m, a_mt) Hamiltonian flow on a
/// sign-fixed segment: s1*GammaTilde*(ln - lkt)*F1(a_m) + s2*Gamma*(ln - lk)*F2(a_mt)
/// with F1 the arcsine antiderivative (coefficient 1 - alpha > 0) and F2 the
/// inverse-hyperbolic one (coefficient -alphaTilde > 0).
double reduced_hamiltonian(double a_m, double a_mt, double E1, double E3, double alpha,
                           double alphaTilde, double Gamma, double GammaTilde,
                           double lambda_k, double lambda_n, double lambda_kt, int s1, int s2);

}  // namespace reso
