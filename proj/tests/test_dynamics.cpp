#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "reso/dynamics.hpp"
#include "reso/invariants.hpp"

using namespace reso;
using cplx = std::complex<double>;

TEST_CASE("rhs_real worked values and first-integral stationarity") {
    RealTriadState s{1.0, 1.0, 1.0, 2.0, 1.0, -1.0};
    auto d = rhs_real(s);
    CHECK(d[0] == doctest::Approx(-2.0));
    CHECK(d[1] == doctest::Approx(3.0));
    CHECK(d[2] == doctest::Approx(-1.0));
    CHECK(s.p * d[0] + s.q * d[1] + s.r * d[2] == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(s.lambda * s.p * d[0] + s.mu * s.q * d[1] + s.nu * s.r * d[2] ==
          doctest::Approx(0.0).epsilon(1e-15));

    RealTriadState zero{0.0, 0.0, 0.0, 2.0, 1.0, -1.0};
    auto dz = rhs_real(zero);
    CHECK((dz[0] == 0.0 && dz[1] == 0.0 && dz[2] == 0.0));

    RealTriadState eq{0.0, 1.0, 0.0, 2.0, 1.0, -1.0};
    auto de = rhs_real(eq);
    CHECK((de[0] == 0.0 && de[1] == 0.0 && de[2] == 0.0));
}

TEST_CASE("rhs_real enstrophy derivative identity") {
    // d/dt Xi = -2 (l^2(mu-nu) + mu^2(nu-l) + nu^2(l-mu)) p q r
    oracles::Rng rng(42);
    for (int i = 0; i < 1000; ++i) {
        RealTriadState s;
        s.lambda = rng.real(-5, 5);
        s.mu = rng.real(-5, 5);
        s.nu = rng.real(-5, 5);
        s.p = rng.real(-2, 2);
        s.q = rng.real(-2, 2);
        s.r = rng.real(-2, 2);
        auto d = rhs_real(s);
        double lhs = 2.0 * (s.lambda * s.lambda * s.p * d[0] + s.mu * s.mu * s.q * d[1] +
                            s.nu * s.nu * s.r * d[2]);
        double coeff = s.lambda * s.lambda * (s.mu - s.nu) + s.mu * s.mu * (s.nu - s.lambda) +
                       s.nu * s.nu * (s.lambda - s.mu);
        double rhs = -2.0 * coeff * s.p * s.q * s.r;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("rhs_complex printed form, zero state, phase equivariance") {
    ComplexTriadState s;
    s.lambda_k = 2.0;
    s.lambda_m = 1.0;
    s.lambda_n = -1.0;
    s.C = 1.3;
    s.U_k = {0.4, -0.2};
    s.U_m = {-0.7, 0.5};
    s.U_n = {0.1, 0.9};
    auto d = rhs_complex(s);
    const cplx I(0.0, 1.0);
    CHECK(std::abs(d[2] - (-I * (s.lambda_k - s.lambda_m) * s.C * s.U_k * s.U_m)) < 1e-15);
    CHECK(std::abs(d[0] - (I * (s.lambda_m - s.lambda_n) * s.C * s.U_n * std::conj(s.U_m))) <
          1e-15);
    CHECK(std::abs(d[1] - (I * (s.lambda_n - s.lambda_k) * s.C * s.U_n * std::conj(s.U_k))) <
          1e-15);

    ComplexTriadState z = s;
    z.U_k = z.U_m = z.U_n = 0.0;
    auto dz = rhs_complex(z);
    CHECK(std::abs(dz[0]) + std::abs(dz[1]) + std::abs(dz[2]) == 0.0);

    // (U_k, U_m, U_n) -> (e^{i chi2} U_k, e^{i chi3} U_m, e^{i chi1} U_n),
    // chi1 = chi2 + chi3 maps derivatives the same way
    double chi2 = 0.7, chi3 = -0.4, chi1 = chi2 + chi3;
    ComplexTriadState sp = s;
    sp.U_k *= std::exp(I * chi2);
    sp.U_m *= std::exp(I * chi3);
    sp.U_n *= std::exp(I * chi1);
    auto dp = rhs_complex(sp);
    CHECK(std::abs(dp[0] - d[0] * std::exp(I * chi2)) < 1e-14);
    CHECK(std::abs(dp[1] - d[1] * std::exp(I * chi3)) < 1e-14);
    CHECK(std::abs(dp[2] - d[2] * std::exp(I * chi1)) < 1e-14);
}

TEST_CASE("complex system restricted to the real manifold matches rhs_real") {
    // U_k in iR, U_m, U_n in R; p = i U_k, q = U_m, r = U_n; time scaled by C
    double p = 0.3, q = -0.8, r = 0.6, C = 2.5;
    ComplexTriadState s;
    s.lambda_k = 2.0;
    s.lambda_m = 1.0;
    s.lambda_n = -1.0;
    s.C = C;
    s.U_k = cplx(0.0, -p);  // i U_k = p
    s.U_m = q;
    s.U_n = r;
    auto d = rhs_complex(s);
    // derivatives stay on the manifold
    CHECK(d[0].real() == 0.0);
    CHECK(d[1].imag() == 0.0);
    CHECK(d[2].imag() == 0.0);

    RealTriadState rs{p, q, r, 2.0, 1.0, -1.0};
    auto dr = rhs_real(rs);
    CHECK((cplx(0.0, 1.0) * d[0]).real() == doctest::Approx(C * dr[0]).epsilon(1e-14));
    CHECK(d[1].real() == doctest::Approx(C * dr[1]).epsilon(1e-14));
    CHECK(d[2].real() == doctest::Approx(C * dr[2]).epsilon(1e-14));
}

TEST_CASE("rhs_coupled worked values and stationary invariants") {
    CoupledState s;
    s.a_k = s.a_m = s.a_n = s.a_mt = s.a_kt = 1.0;
    s.lambdas = {1.0, -1.0, 2.0, -2.0, 3.0};
    s.Gamma = s.GammaTilde = 1.0;
    auto d = rhs_coupled(s);
    CHECK(d[0] == doctest::Approx(-3.0));
    CHECK(d[1] == doctest::Approx(1.0));
    CHECK(d[2] == doctest::Approx(7.0));
    CHECK(d[3] == doctest::Approx(-1.0));
    CHECK(d[4] == doctest::Approx(-4.0));

    double a[5] = {s.a_k, s.a_m, s.a_n, s.a_mt, s.a_kt};
    double e_dot = 0.0, h_dot = 0.0;
    for (int i = 0; i < 5; ++i) {
        e_dot += a[i] * d[i];
        h_dot += s.lambdas[i] * a[i] * d[i];
    }
    CHECK(e_dot == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(h_dot == doctest::Approx(0.0).epsilon(1e-15));

    // equilibria (+-a_k, 0, 0, 0, +-a_kt)
    CoupledState eq = s;
    eq.a_m = eq.a_n = eq.a_mt = 0.0;
    auto de = rhs_coupled(eq);
    for (double x : de) CHECK(x == 0.0);

    // GammaTilde = 0 decouples the first rigid body; the two printed systems
    // carry opposite overall sign conventions (t -> -t)
    CoupledState dec = s;
    dec.GammaTilde = 0.0;
    dec.Gamma = 1.0;
    auto dd = rhs_coupled(dec);
    RealTriadState rt{dec.a_k, dec.a_m, dec.a_n, dec.lambdas[0], dec.lambdas[1],
                      dec.lambdas[2]};
    auto dr = rhs_real(rt);
    CHECK(dd[0] == doctest::Approx(-dr[0]));
    CHECK(dd[1] == doctest::Approx(-dr[1]));
    CHECK(dd[2] == doctest::Approx(-dr[2]));
}

TEST_CASE("classify_equilibria derives labels from the spectrum") {
    auto eqs = classify_equilibria(2.0, 1.0, -1.0, 1.0);
    REQUIRE(eqs.size() == 6);
    int saddles = 0, centers = 0;
    for (const auto& e : eqs) {
        if (e.point[1] != 0.0) {
            CHECK(e.type == EquilibriumType::saddle);
            ++saddles;
            // one strictly positive real eigenvalue
            bool pos = false;
            for (const auto& ev : e.eigenvalues)
                if (ev.real() > 1e-12 && std::abs(ev.imag()) < 1e-9) pos = true;
            CHECK(pos);
        } else {
            CHECK(e.type == EquilibriumType::center);
            ++centers;
            bool imag = false;
            for (const auto& ev : e.eigenvalues)
                if (std::abs(ev.imag()) > 1e-12 && std::abs(ev.real()) < 1e-9) imag = true;
            CHECK(imag);
        }
    }
    CHECK(saddles == 2);
    CHECK(centers == 4);
    CHECK_THROWS_AS(classify_equilibria(1.0, 1.0, -1.0, 1.0), std::domain_error);
}

TEST_CASE("integrate: equilibrium stays put, conservation, reversibility") {
    SystemParams sp;
    sp.id = SystemId::real_triad;
    sp.lambdas = {2.0, 1.0, -1.0};
    IntegrateOptions opts;
    opts.rtol = 1e-12;
    opts.atol = 1e-14;

    // equilibrium IC -> constant trajectory
    Trajectory eq = integrate(sp, {0.0, 1.0, 0.0}, 5.0, opts);
    for (const auto& st : eq.states) {
        CHECK(std::abs(st[0]) <= opts.atol);
        CHECK(std::abs(st[1] - 1.0) <= 1e-12);
        CHECK(std::abs(st[2]) <= opts.atol);
    }

    // conservation on a reference run: E(0) = 1.01, H(0) = 1.02
    Trajectory tr = integrate(sp, {0.1, 1.0, 0.0}, 50.0, opts);
    CHECK(tr.invariants.front()[0] == doctest::Approx(1.01).epsilon(1e-15));
    CHECK(tr.invariants.front()[1] == doctest::Approx(1.02).epsilon(1e-15));
    CHECK(tr.max_drift("E") / 1.01 <= 1e-9);
    CHECK(tr.max_drift("H") / 1.02 <= 1e-9);

    // time reversal returns to the initial state
    std::vector<double> yT = tr.states.back();
    IntegrateOptions back = opts;
    back.reverse_time = true;
    Trajectory rev = integrate(sp, yT, tr.times.back(), back);
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(rev.states.back()[i] - tr.states.front()[i]) < 1e-6);
}

TEST_CASE("integrate: drift scales with rtol (conservation <= 100 rtol)") {
    SystemParams sp;
    sp.id = SystemId::real_triad;
    sp.lambdas = {2.0, 1.0, -1.0};
    for (double rtol : {1e-10, 1e-8}) {
        IntegrateOptions opts;
        opts.rtol = rtol;
        opts.atol = rtol * 1e-2;
        Trajectory tr = integrate(sp, {0.5, 0.7, 0.3}, 100.0, opts);
        double E0 = tr.invariants.front()[0];
        CHECK(tr.max_drift("E") / E0 <= 100.0 * rtol);
        CHECK(tr.max_drift("H") / std::abs(tr.invariants.front()[1]) <= 100.0 * rtol);
    }
}

TEST_CASE("integrate: complex manifold closure and Manley-Rowe constancy") {
    SystemParams sp;
    sp.id = SystemId::complex_triad;
    sp.lambdas = {2.0, 1.0, -1.0};
    sp.C = 1.0;
    IntegrateOptions opts;
    opts.rtol = 1e-12;
    opts.atol = 1e-14;

    // start on U_k in iR, U_m, U_n in R: off-manifold parts stay 0
    Trajectory tr = integrate(sp, {0.0, -0.1, 1.0, 0.0, 0.0, 0.0}, 50.0, opts);
    for (const auto& st : tr.states) {
        CHECK(std::abs(st[0]) <= 1e-10);  // Re U_k
        CHECK(std::abs(st[3]) <= 1e-10);  // Im U_m
        CHECK(std::abs(st[5]) <= 1e-10);  // Im U_n
    }

    // generic complex run: E, H, MR all conserved
    Trajectory tg = integrate(sp, {0.4, 0.3, 0.5, -0.2, 0.1, 0.6}, 50.0, opts);
    double mr0 = tg.invariants.front()[2];
    REQUIRE(std::abs(mr0) > 1e-3);
    CHECK(tg.max_drift("E") / tg.invariants.front()[0] <= 1e-9);
    CHECK(tg.max_drift("H") / std::abs(tg.invariants.front()[1]) <= 1e-9);
    CHECK(tg.max_drift("MR") <= 1e-8);
}

TEST_CASE("integrate: coupled invariants and cone invariance") {
    SystemParams sp;
    sp.id = SystemId::coupled;
    sp.lambdas = {1.0, -1.0, 2.0, -2.0, 3.0};
    IntegrateOptions opts;
    opts.rtol = 1e-12;
    opts.atol = 1e-14;

    Trajectory tr = integrate(sp, {0.4, 0.3, 0.5, 0.2, 0.6}, 50.0, opts);
    for (const char* name : {"E", "H", "E1", "E2", "E3"})
        CHECK(tr.max_drift(name) <= 1e-9 * std::max(1.0, std::abs(tr.invariants.front()[0])));

    // cone E2 = 0: a_n^2 + (1 - alphaTilde) a_mt^2 = -alpha a_m^2
    double am = 1.0, amt = 0.3;
    double an = std::sqrt(2.0 * am * am - 5.0 * amt * amt);  // alpha=-2, alphaTilde=-4
    Trajectory cone = integrate(sp, {1.0, am, an, amt, 0.7}, 100.0, opts);
    CHECK(std::abs(cone.invariants.front()[3]) < 1e-14);
    CHECK(cone.max_drift("E2") <= 1e-9);
}

TEST_CASE("integrate: optional energy renormalization pins E to the sphere") {
    SystemParams sp;
    sp.id = SystemId::real_triad;
    sp.lambdas = {2.0, 1.0, -1.0};
    IntegrateOptions loose;
    loose.rtol = 1e-6;
    loose.atol = 1e-8;
    Trajectory off = integrate(sp, {1.0, 1.0, 0.0}, 50.0, loose);
    IntegrateOptions on = loose;
    on.renormalize_energy = true;
    Trajectory ren = integrate(sp, {1.0, 1.0, 0.0}, 50.0, on);
    CHECK(ren.max_drift("E") <= 1e-12);
    CHECK(ren.max_drift("E") < off.max_drift("E"));
    // H is not projected; it still drifts at the tolerance scale
    CHECK(ren.max_drift("H") < 1e-3);
}

TEST_CASE("integrate: slow-passage warning near the saddle") {
    SystemParams sp;
    sp.id = SystemId::real_triad;
    sp.lambdas = {2.0, 1.0, -1.0};
    IntegrateOptions opts;
    opts.rtol = 1e-10;
    opts.atol = 1e-14;
    opts.sample_dt = 0.01;

    double eps = 1e-13;  // deep inside the 1e-8 dwell ball
    Trajectory slow = integrate(sp, {0.0, 1.0 - eps, eps}, 45.0, opts);
    REQUIRE(slow.warnings.size() == 1);
    CHECK(slow.warnings[0].find("slow-passage") != std::string::npos);

    // an orbit far from the saddles does not warn
    Trajectory fast = integrate(sp, {1.0, 1.0, 0.0}, 45.0, opts);
    CHECK(fast.warnings.empty());
}

TEST_CASE("integrate input validation and sampling grid") {
    SystemParams sp;
    sp.id = SystemId::real_triad;
    sp.lambdas = {2.0, 1.0, -1.0};
    IntegrateOptions opts;
    CHECK_THROWS_AS(integrate(sp, {1.0, 0.0}, 1.0, opts), std::domain_error);
    CHECK_THROWS_AS(integrate(sp, {1.0, 0.0, 0.0}, -1.0, opts), std::domain_error);
    IntegrateOptions bad = opts;
    bad.rtol = 0.5;  // above the 1e-3 cap
    CHECK_THROWS_AS(integrate(sp, {1.0, 0.0, 0.0}, 1.0, bad), std::domain_error);
    SystemParams dup = sp;
    dup.lambdas = {1.0, 1.0, -1.0};
    CHECK_THROWS_AS(integrate(dup, {1.0, 0.0, 0.0}, 1.0, opts), std::domain_error);

    opts.sample_dt = 0.01;
    opts.rtol = 1e-10;
    opts.atol = 1e-12;
    Trajectory tr = integrate(sp, {0.5, 0.7, 0.3}, 1.0, opts);
    REQUIRE(tr.sample_indices.size() == 101);
    for (size_t i = 0; i < tr.sample_indices.size(); ++i)
        CHECK(tr.times[tr.sample_indices[i]] ==
              doctest::Approx(0.01 * static_cast<double>(i)).epsilon(1e-12));

    // Hermite dense output between accepted steps, checked against a fresh
    // run clipped exactly to the midpoint time
    double tmid = 0.5 * (tr.times[3] + tr.times[4]);
    auto mid = tr.state_at(tmid);
    IntegrateOptions o2;
    o2.rtol = 1e-12;
    o2.atol = 1e-14;
    Trajectory tr2 = integrate(sp, {0.5, 0.7, 0.3}, tmid, o2);
    for (int i = 0; i < 3; ++i) CHECK(std::abs(mid[i] - tr2.states.back()[i]) < 1e-8);
}
