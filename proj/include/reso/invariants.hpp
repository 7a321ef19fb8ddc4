#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "reso/dynamics.hpp"

namespace reso {

/// The Manley-Rowe functionals of the complex triad. `degenerate` is set
/// when some modulus vanishes (phase convention: term = 0).
///
/// phase_invariant/E1/E2 are the textbook display forms; the *_conserved
/// fields are the combinations that the triad equations actually hold fixed
/// (the display phase uses the rotated convention of the real form, where
/// the k-mode amplitude is i U_k; in the U variables the conserved phase
/// functional is the cosine form Re(U_n conj(U_k) conj(U_m))).
struct ManleyRowe {
    double phase_invariant = 0.0;  // r_k r_m r_n sin(theta_n - theta_k - theta_m)
    double E1 = 0.0;               // (lk - lm) r_n^2 - (lm - ln) r_k^2
    double E2 = 0.0;               // (lm - ln) r_k^2 - (ln - lk) r_m^2
    double phase_conserved = 0.0;  // r_k r_m r_n cos(theta_n - theta_k - theta_m)
    double E1_conserved = 0.0;     // (lm - ln) r_n^2 - (lk - lm) r_k^2
    double E2_conserved = 0.0;     // (ln - lk) r_k^2 - (lm - ln) r_m^2
    bool degenerate = false;
};

ManleyRowe manley_rowe(const ComplexTriadState& s);

struct CoupledInvariants {
    double E1 = 0.0, E2 = 0.0, E3 = 0.0;
    double alpha = 0.0, alphaTilde = 0.0;
};

/// Conserved and monitored functionals of one state. W_s is keyed by s;
/// Xi always equals the s = 1 entry of the family.
struct InvariantReport {
    double E = 0.0, H = 0.0, Xi = 0.0;
    std::vector<std::pair<double, double>> W_s;  // (s, value), in s_list order
    std::optional<ManleyRowe> manley_rowe;
    std::optional<CoupledInvariants> coupled;
};

InvariantReport invariant_report(const RealTriadState& s, const std::vector<double>& s_list);
InvariantReport invariant_report(const ComplexTriadState& s, const std::vector<double>& s_list);
InvariantReport invariant_report(const CoupledState& s, const std::vector<double>& s_list);

/// Report on a flat integrator state (layouts as in dynamics.hpp).
InvariantReport invariant_report(const SystemParams& params, const std::vector<double>& y,
                                 const std::vector<double>& s_list);

struct VandermondeResult {
    double p2 = 0.0, q2 = 0.0, r2 = 0.0;
    bool feasible = false;  // all squares >= 0 (values returned unclamped)
};

/// Inverts (E, H, Xi) -> (p^2, q^2, r^2) through the printed Vandermonde
/// inverse rows. Inconsistent inputs yield negative squares, reported as-is.
VandermondeResult vandermonde_recover(double E, double H, double Xi, double lambda,
                                      double mu, double nu);

}  // namespace reso
