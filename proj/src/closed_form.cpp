#include "reso/closed_form.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

namespace reso {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Gauss-Kronrod 15(7) on [-1, 1], symmetric halves.
constexpr double kx[8] = {0.991455371120813, 0.949107912342759, 0.864864423359769,
                          0.741531185599394, 0.586087235467691, 0.405845151377397,
                          0.207784955007898, 0.0};
constexpr double kw[8] = {0.022935322010529, 0.063092092629979, 0.104790010322250,
                          0.140653259715525, 0.169004726639267, 0.190350578064785,
                          0.204432940075298, 0.209482141084728};
constexpr double gw[4] = {0.129484966168870, 0.279705391489277, 0.381830050505119,
                          0.417959183673469};

struct GK {
    double k15, g7;
};

GK gk15(const std::function<double(double)>& f, double a, double b) {
    double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double fk = 0.0, fg = 0.0;
    for (int i = 0; i < 8; ++i) {
        double v = (i == 7) ? f(c) : f(c - h * kx[i]) + f(c + h * kx[i]);
        fk += kw[i] * v;
        if (i % 2 == 1) fg += gw[i / 2] * v;  // embedded G7 shares odd nodes
    }
    return {fk * h, fg * h};
}

double adaptive_gk(const std::function<double(double)>& f, double a, double b, double tol_abs,
                   int depth) {
    GK r = gk15(f, a, b);
    if (std::abs(r.k15 - r.g7) <= tol_abs || depth >= 60) return r.k15;
    double c = 0.5 * (a + b);
    return adaptive_gk(f, a, c, 0.5 * tol_abs, depth + 1) +
           adaptive_gk(f, c, b, 0.5 * tol_abs, depth + 1);
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol) {
    double rough = std::abs(gk15(f, a, b).k15);
    double tol_abs = rel_tol * std::max(rough, 1e-300);
    return adaptive_gk(f, a, b, tol_abs, 0);
}

void require_ordered(double x_minus, double x_zero, double x_plus) {
    if (!(x_minus < x_zero && x_zero < x_plus))
        throw std::domain_error("cubic roots must satisfy x_minus < x_zero < x_plus");
}

}  // namespace

CubicData cubic_data(double lambda, double mu, double nu, double p0, double q0) {
    if (lambda == mu || mu == nu || lambda == nu)
        throw std::domain_error("cubic_data: eigenvalues must be pairwise distinct");
    if (mu == 0.0) throw std::domain_error("cubic_data: mu must be nonzero");
    CubicData c;
    c.lambdas = {lambda, mu, nu};
    double p2 = p0 * p0, q2 = q0 * q0;
    c.x_minus = lambda * nu * p2 + mu * mu * q2 + mu * (lambda - nu) * p2;
    c.x_zero = lambda * lambda * p2 + mu * mu * q2;
    c.x_plus = lambda * lambda * p2 +
               ((nu + lambda) / mu - nu * lambda / (mu * mu)) * (mu * mu) * q2;
    double num = lambda * lambda * (mu - nu) + mu * mu * (nu - lambda) +
                 nu * nu * (lambda - mu);
    double den = (lambda - mu) * (lambda - nu) * (mu - nu);
    c.K = num / den;
    return c;
}

double cubic_P(const CubicData& c, double x) {
    return (x - c.x_minus) * (x - c.x_zero) * (x - c.x_plus);
}

double cubic_P_prime(const CubicData& c, double x) {
    return (x - c.x_zero) * (x - c.x_plus) + (x - c.x_minus) * (x - c.x_plus) +
           (x - c.x_minus) * (x - c.x_zero);
}

double period_integral(double x_minus, double x_zero, double x_plus) {
    require_ordered(x_minus, x_zero, x_plus);
    // x = x0 + (x+ - x0) sin^2(phi) turns the improper integral into a smooth
    // one: int dx/sqrt(-P) = 2 int_0^{pi/2} dphi / sqrt(a + b sin^2 phi).
    double a = x_zero - x_minus, b = x_plus - x_zero;
    auto f = [a, b](double phi) {
        double s = std::sin(phi);
        return 1.0 / std::sqrt(a + b * s * s);
    };
    return 2.0 * integrate_adaptive(f, 0.0, kPi / 2.0, 1e-10);
}

double half_period(const CubicData& c) {
    if (!(c.K > 0.0)) throw std::domain_error("half_period: K must be > 0");
    return period_integral(c.x_minus, c.x_zero, c.x_plus) / (2.0 * std::sqrt(c.K));
}

double period_asymptotic(double x_minus, double x_zero, double x_plus) {
    require_ordered(x_minus, x_zero, x_plus);
    double m = (x_plus - x_zero) / (x_plus - x_minus);
    double denom = 1.0 - std::sqrt(m);
    if (!(denom > 0.0))
        throw std::domain_error("period_asymptotic: diverges as x_zero -> x_minus");
    return std::log(1.0 / denom) / std::sqrt(x_plus - x_minus);
}

namespace {

BurstBounds regime_flags(double lambda, double mu, double nu) {
    BurstBounds b;
    b.mu_small = lambda > 0.0 && std::abs(mu) / lambda <= 0.1;
    if (nu != 0.0) {
        double r = std::abs(lambda / nu);
        b.lambda_nu_comparable = r >= 0.8 && r <= 1.25;
    }
    b.opposite_polarity = lambda * nu < 0.0;
    return b;
}

}  // namespace

BurstBounds burst_bounds_h3(double lambda, double mu, double nu, double W0) {
    if (mu == 0.0) throw std::domain_error("burst_bounds_h3: mu must be nonzero");
    if (!(W0 > 0.0)) throw std::domain_error("burst_bounds_h3: W0 must be > 0");
    BurstBounds b = regime_flags(lambda, mu, nu);
    double u = (lambda / mu) * (lambda / mu);
    double rho = std::abs(lambda / mu);
    b.ratio_bound = 0.25 * u * u * u;
    b.t_star_bound = 6.0 / std::sqrt(W0) * mu * mu * std::log(rho) / rho;
    return b;
}

BurstBounds burst_bounds_enstrophy(double lambda, double mu, double nu, double Xi0) {
    if (mu == 0.0) throw std::domain_error("burst_bounds_enstrophy: mu must be nonzero");
    if (!(Xi0 > 0.0)) throw std::domain_error("burst_bounds_enstrophy: Xi0 must be > 0");
    BurstBounds b = regime_flags(lambda, mu, nu);
    double rho = std::abs(lambda / mu);
    b.ratio_bound = rho * rho;
    b.t_star_bound = std::log(rho) / (std::sqrt(2.0) * rho * std::sqrt(Xi0));
    return b;
}

XiResidualReport xi_ode_residual(const Trajectory& traj, const CubicData& c) {
    if (traj.system != SystemId::real_triad)
        throw std::domain_error("xi_ode_residual: real-triad trajectory required");

    // Work on the uniform sample grid when present, else all accepted rows.
    std::vector<size_t> rows = traj.sample_indices;
    if (rows.empty()) {
        rows.resize(traj.size());
        for (size_t i = 0; i < rows.size(); ++i) rows[i] = i;
    }
    if (rows.size() < 10) throw std::domain_error("xi_ode_residual: trajectory too short");

    double dt = traj.times[rows[1]] - traj.times[rows[0]];
    for (size_t i = 0; i + 1 < rows.size(); ++i) {
        double d = traj.times[rows[i + 1]] - traj.times[rows[i]];
        if (std::abs(d - dt) > 1e-6 * std::max(std::abs(dt), 1e-300))
            throw std::domain_error("xi_ode_residual: uniform sampling required");
    }

    const double l2 = c.lambdas[0] * c.lambdas[0], m2 = c.lambdas[1] * c.lambdas[1],
                 n2 = c.lambdas[2] * c.lambdas[2];
    size_t N = rows.size();
    std::vector<double> xi(N), xidot(N);
    for (size_t i = 0; i < N; ++i) {
        const auto& s = traj.states[rows[i]];
        const auto& d = traj.derivs[rows[i]];
        xi[i] = l2 * s[0] * s[0] + m2 * s[1] * s[1] + n2 * s[2] * s[2];
        xidot[i] = 2.0 * (l2 * s[0] * d[0] + m2 * s[1] * d[1] + n2 * s[2] * d[2]);
    }

    double scale = 0.0;
    for (size_t i = 1; i + 1 < N; ++i)
        scale = std::max(scale, std::abs(-2.0 * c.K * cubic_P_prime(c, xi[i])));
    XiResidualReport rep;
    if (scale < 1e-300) {
        rep.constant_flag = true;
        return rep;
    }

    std::vector<double> speeds(N);
    for (size_t i = 0; i < N; ++i) speeds[i] = std::abs(xidot[i]);
    std::vector<double> sorted = speeds;
    std::sort(sorted.begin(), sorted.end());
    double cutoff = sorted[sorted.size() / 10];

    for (size_t i = 1; i + 1 < N; ++i) {
        if (speeds[i] <= cutoff) continue;
        double fd = (xi[i + 1] - 2.0 * xi[i] + xi[i - 1]) / (dt * dt);
        double target = -2.0 * c.K * cubic_P_prime(c, xi[i]);
        rep.max_rel_residual = std::max(rep.max_rel_residual, std::abs(fd - target) / scale);
    }
    return rep;
}

namespace {

// int dx / sqrt(E1 - c1 x^2), c1 > 0: arcsine branch, odd in x.
double antiderivative_trig(double x, double E1, double c1) {
    if (!(E1 > 0.0)) throw std::domain_error("reduced_hamiltonian: E1 must be > 0");
    double arg = x * std::sqrt(c1 / E1);
    if (std::abs(arg) > 1.0 + 1e-12)
        throw std::domain_error("reduced_hamiltonian: a_m outside the E1 ellipse");
    return std::asin(std::clamp(arg, -1.0, 1.0)) / std::sqrt(c1);
}

// int dx / sqrt(E3 + c2 x^2), c2 > 0: inverse-hyperbolic branch, odd in x.
double antiderivative_hyp(double x, double E3, double c2) {
    double disc = E3 + c2 * x * x;
    if (!(disc >= 0.0)) throw std::domain_error("reduced_hamiltonian: argument outside domain");
    double sc = std::sqrt(c2);
    if (E3 > 0.0) return std::asinh(x * sc / std::sqrt(E3)) / sc;
    if (E3 < 0.0) {
        double arg = std::abs(x) * sc / std::sqrt(-E3);
        if (arg < 1.0 - 1e-12)
            throw std::domain_error("reduced_hamiltonian: a_mt inside the E3 hyperbola gap");
        double sgn = x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0);
        return sgn * std::acosh(std::max(arg, 1.0)) / sc;
    }
    if (x == 0.0) throw std::domain_error("reduced_hamiltonian: singular at a_mt = 0, E3 = 0");
    return (x > 0.0 ? 1.0 : -1.0) * std::log(std::abs(x) * sc) / sc;
}

}  // namespace

double reduced_hamiltonian(double a_m, double a_mt, double E1, double E3, double alpha,
                           double alphaTilde, double Gamma, double GammaTilde,
                           double lambda_k, double lambda_n, double lambda_kt, int s1,
                           int s2) {
    if ((s1 != 1 && s1 != -1) || (s2 != 1 && s2 != -1))
        throw std::domain_error("reduced_hamiltonian: branch signs must be +1 or -1");
    double c1 = 1.0 - alpha;
    double c2 = -alphaTilde;
    if (!(c1 > 0.0)) throw std::domain_error("reduced_hamiltonian: requires alpha < 1");
    if (!(c2 > 0.0)) throw std::domain_error("reduced_hamiltonian: requires alphaTilde < 0");
    return s1 * GammaTilde * (lambda_n - lambda_kt) * antiderivative_trig(a_m, E1, c1) +
           s2 * Gamma * (lambda_n - lambda_k) * antiderivative_hyp(a_mt, E3, c2);
}

}  // namespace reso
