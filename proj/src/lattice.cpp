#include "reso/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace reso {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kThetaMax = 1e4;          // root search cap for solve_theta3
constexpr double kRadicalTol = 1e-10;      // radical verification tolerance

long long comp1(const WaveVector& v, int idx) {
    // 1-based component access
    switch (idx) {
        case 1: return v.n1;
        case 2: return v.n2;
        case 3: return v.n3;
        default: throw std::domain_error("component index must be in {1,2,3}");
    }
}

WaveVector reduce_by_gcd(const WaveVector& v) {
    long long g = component_gcd(v);
    return g > 1 ? WaveVector{v.n1 / g, v.n2 / g, v.n3 / g} : v;
}

std::array<long long, 6> pair_key(const WaveVector& k, const WaveVector& m) {
    return {k.n1, k.n2, k.n3, m.n1, m.n2, m.n3};
}

// All 8 sign branches in a fixed order; ties in best_branch resolve to the
// earliest entry.
constexpr std::array<SignBranch, 8> kBranches = {{
    {+1, +1, +1}, {+1, +1, -1}, {+1, -1, +1}, {+1, -1, -1},
    {-1, +1, +1}, {-1, +1, -1}, {-1, -1, +1}, {-1, -1, -1},
}};

}  // namespace

WaveVector apply_symmetry(int j, const WaveVector& v) {
    switch (j) {
        case 0: return v;
        case 1: return {-v.n1, v.n2, v.n3};
        case 2: return {v.n1, -v.n2, v.n3};
        case 3: return {v.n1, v.n2, -v.n3};
        default: throw std::domain_error("symmetry index must be in {0,1,2,3}");
    }
}

double dispersion_ratio(const WaveVector& v, const LatticeParams& p) {
    p.validate();
    if (v.is_zero()) throw std::domain_error("dispersion_ratio: zero wavevector");
    WaveVector r = reduce_by_gcd(v);
    double x1 = static_cast<double>(r.n1), x2 = static_cast<double>(r.n2),
           x3 = static_cast<double>(r.n3);
    double s = p.theta1 * (x1 * x1) + p.theta2 * (x2 * x2) + p.theta3 * (x3 * x3);
    return x3 / std::sqrt(s);
}

double residual(const WaveVector& k, const WaveVector& m, const LatticeParams& p,
                const SignBranch& s) {
    WaveVector n = k + m;
    if (n.is_zero()) throw std::domain_error("residual: k + m = 0");
    if (k.n3 == 0 || m.n3 == 0 || n.n3 == 0)
        throw CatalyticError("residual: catalytic triad (zero vertical wavenumber)");
    return s.sn * dispersion_ratio(n, p) + s.sk * dispersion_ratio(k, p) +
           s.sm * dispersion_ratio(m, p);
}

std::pair<SignBranch, double> best_branch(const WaveVector& k, const WaveVector& m,
                                          const LatticeParams& p) {
    WaveVector n = k + m;
    if (k.n3 == 0 || m.n3 == 0 || n.n3 == 0)
        throw CatalyticError("best_branch: catalytic triad");
    double rn = dispersion_ratio(n, p);
    double rk = dispersion_ratio(k, p);
    double rm = dispersion_ratio(m, p);
    SignBranch best = kBranches[0];
    double best_abs = std::numeric_limits<double>::infinity();
    double best_val = 0.0;
    for (const SignBranch& s : kBranches) {
        double val = s.sn * rn + s.sk * rk + s.sm * rm;
        if (std::abs(val) < best_abs) {
            best_abs = std::abs(val);
            best_val = val;
            best = s;
        }
    }
    return {best, best_val};
}

Triad make_triad(const WaveVector& k, const WaveVector& m, const LatticeParams& p) {
    Triad t;
    t.k = k;
    t.m = m;
    t.n = k + m;
    auto [s, val] = best_branch(k, m, p);
    t.signs = s;
    t.residual = val;
    auto mag = [&p](const WaveVector& v) {
        double x1 = static_cast<double>(v.n1), x2 = static_cast<double>(v.n2),
               x3 = static_cast<double>(v.n3);
        return std::sqrt(p.theta1 * x1 * x1 + p.theta2 * x2 * x2 + p.theta3 * x3 * x3);
    };
    t.lambdas = {s.sk * mag(k), s.sm * mag(m), s.sn * mag(t.n)};
    return t;
}

std::pair<WaveVector, WaveVector> canonical_pair(const WaveVector& k, const WaveVector& m) {
    long long g = std::gcd(component_gcd(k), component_gcd(m));
    WaveVector k0 = k, m0 = m;
    if (g > 1) {
        k0 = {k.n1 / g, k.n2 / g, k.n3 / g};
        m0 = {m.n1 / g, m.n2 / g, m.n3 / g};
    }
    std::array<long long, 6> best{};
    bool first = true;
    for (int e1 : {1, -1})
        for (int e2 : {1, -1})
            for (int e3 : {1, -1}) {
                WaveVector ka{e1 * k0.n1, e2 * k0.n2, e3 * k0.n3};
                WaveVector ma{e1 * m0.n1, e2 * m0.n2, e3 * m0.n3};
                for (auto key : {pair_key(ka, ma), pair_key(ma, ka)}) {
                    if (first || key < best) {
                        best = key;
                        first = false;
                    }
                }
            }
    return {WaveVector{best[0], best[1], best[2]}, WaveVector{best[3], best[4], best[5]}};
}

Triad canonicalize(const Triad& t, const LatticeParams& p) {
    auto [ck, cm] = canonical_pair(t.k, t.m);
    return make_triad(ck, cm, p);
}

TriadCatalog search_triads(const LatticeParams& p, long long box, double tol) {
    p.validate();
    if (box < 1) throw std::domain_error("search_triads: box must be >= 1");
    if (box > 32) throw std::domain_error("search_triads: box capped at 32 (O(box^6) search)");
    if (!(tol > 0.0)) throw std::domain_error("search_triads: tol must be > 0");

    const long long N = box;
    auto idx = [N](long long c) { return static_cast<size_t>(c + N); };
    const size_t side = static_cast<size_t>(2 * N + 1);
    const size_t side2 = static_cast<size_t>(4 * N + 1);

    // Ratio caches; dispersion_ratio is gcd-reduced so cached values equal
    // any later per-triad replay bit for bit.
    std::vector<double> rv(side * side * side, 0.0);
    for (long long a = -N; a <= N; ++a)
        for (long long b = -N; b <= N; ++b)
            for (long long c = -N; c <= N; ++c) {
                WaveVector v{a, b, c};
                if (v.is_zero() || c == 0) continue;
                rv[(idx(a) * side + idx(b)) * side + idx(c)] = dispersion_ratio(v, p);
            }
    auto idx2 = [N](long long c) { return static_cast<size_t>(c + 2 * N); };
    std::vector<double> rn(side2 * side2 * side2, 0.0);
    for (long long a = -2 * N; a <= 2 * N; ++a)
        for (long long b = -2 * N; b <= 2 * N; ++b)
            for (long long c = -2 * N; c <= 2 * N; ++c) {
                WaveVector v{a, b, c};
                if (v.is_zero() || c == 0) continue;
                rn[(idx2(a) * side2 + idx2(b)) * side2 + idx2(c)] = dispersion_ratio(v, p);
            }

    std::set<std::array<long long, 6>> canon;
    for (long long k1 = -N; k1 <= N; ++k1)
        for (long long k2 = -N; k2 <= N; ++k2)
            for (long long k3 = -N; k3 <= N; ++k3) {
                if (k3 == 0) continue;
                double rk = rv[(idx(k1) * side + idx(k2)) * side + idx(k3)];
                for (long long m1 = -N; m1 <= N; ++m1)
                    for (long long m2 = -N; m2 <= N; ++m2)
                        for (long long m3 = -N; m3 <= N; ++m3) {
                            if (m3 == 0 || k3 + m3 == 0) continue;
                            double rm = rv[(idx(m1) * side + idx(m2)) * side + idx(m3)];
                            double rnn = rn[(idx2(k1 + m1) * side2 + idx2(k2 + m2)) * side2 +
                                            idx2(k3 + m3)];
                            double a = std::abs(rnn + rk + rm);
                            double b = std::abs(rnn + rk - rm);
                            double c = std::abs(rnn - rk + rm);
                            double d = std::abs(rnn - rk - rm);
                            double best = std::min(std::min(a, b), std::min(c, d));
                            if (best <= tol) {
                                auto [ck, cm] =
                                    canonical_pair({k1, k2, k3}, {m1, m2, m3});
                                canon.insert(pair_key(ck, cm));
                            }
                        }
            }

    TriadCatalog cat;
    cat.params = p;
    cat.box = box;
    cat.tol = tol;
    for (const auto& key : canon) {
        WaveVector k{key[0], key[1], key[2]}, m{key[3], key[4], key[5]};
        Triad t = make_triad(k, m, p);
        if (std::abs(t.residual) <= tol) cat.entries.push_back(t);
    }
    return cat;
}

double lattice_h(const WaveVector& v, double theta1, double theta2) {
    if (v.n3 == 0) throw std::domain_error("lattice_h: zero vertical wavenumber");
    WaveVector r = reduce_by_gcd(v);
    double x1 = static_cast<double>(r.n1), x2 = static_cast<double>(r.n2),
           x3 = static_cast<double>(r.n3);
    return (theta1 * x1 * x1 + theta2 * x2 * x2) / (x3 * x3);
}

std::array<double, 5> quartic_coefficients(double h_k, double h_m, double h_n) {
    double p4 = -3.0;
    double p3 = -4.0 * (h_k + h_m + h_n);
    double p2 = -6.0 * (h_k * h_m + h_k * h_n + h_m * h_n);
    double p1 = -12.0 * h_k * h_m * h_n;
    double p0 = h_m * h_m * h_n * h_n + h_k * h_k * h_n * h_n + h_m * h_m * h_k * h_k -
                2.0 * (h_k * h_m * h_n * h_n + h_k * h_n * h_m * h_m + h_m * h_n * h_k * h_k);
    return {p4, p3, p2, p1, p0};
}

namespace {

double poly4(const std::array<double, 5>& c, double x) {
    return (((c[0] * x + c[1]) * x + c[2]) * x + c[3]) * x + c[4];
}

// Real roots of a*x^3 + b*x^2 + c*x + d (a != 0 expected; quadratic fallback).
std::vector<double> real_cubic_roots(double a, double b, double c, double d) {
    std::vector<double> out;
    if (std::abs(a) < 1e-300) {
        if (std::abs(b) < 1e-300) {
            if (std::abs(c) > 0.0) out.push_back(-d / c);
            return out;
        }
        double disc = c * c - 4.0 * b * d;
        if (disc >= 0.0) {
            double sq = std::sqrt(disc);
            out.push_back((-c + sq) / (2.0 * b));
            out.push_back((-c - sq) / (2.0 * b));
        }
        return out;
    }
    double B = b / a, C = c / a, D = d / a;
    double p = C - B * B / 3.0;
    double q = 2.0 * B * B * B / 27.0 - B * C / 3.0 + D;
    double shift = -B / 3.0;
    double disc = q * q / 4.0 + p * p * p / 27.0;
    if (disc > 0.0) {
        double sq = std::sqrt(disc);
        double u = std::cbrt(-q / 2.0 + sq), v = std::cbrt(-q / 2.0 - sq);
        out.push_back(u + v + shift);
    } else {
        double r = std::sqrt(std::max(0.0, -p / 3.0));
        if (r == 0.0) {
            out.push_back(shift);
        } else {
            double arg = std::clamp(-q / (2.0 * r * r * r), -1.0, 1.0);
            double phi = std::acos(arg);
            for (int k = 0; k < 3; ++k)
                out.push_back(2.0 * r * std::cos((phi + 2.0 * kPi * k) / 3.0) + shift);
        }
    }
    return out;
}

double bisect_poly(const std::array<double, 5>& c, double lo, double hi) {
    double flo = poly4(c, lo);
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        double fm = poly4(c, mid);
        if ((fm >= 0.0) == (flo >= 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace

std::vector<Theta3Root> solve_theta3(const WaveVector& k, const WaveVector& m,
                                     double theta1, double theta2) {
    if (!(theta1 > 0.0 && theta2 > 0.0))
        throw std::domain_error("solve_theta3: theta1, theta2 must be > 0");
    WaveVector n = k + m;
    if (k.n3 == 0 || m.n3 == 0 || n.n3 == 0)
        throw CatalyticError("solve_theta3: catalytic triad");

    auto c = quartic_coefficients(lattice_h(k, theta1, theta2), lattice_h(m, theta1, theta2),
                                  lattice_h(n, theta1, theta2));

    // Partition (0, kThetaMax] at the quartic's critical points, then bisect
    // every sign change; critical points themselves are kept as candidates so
    // tangential (double) roots are not lost.
    std::vector<double> breaks = {1e-14, kThetaMax};
    for (double x : real_cubic_roots(4.0 * c[0], 3.0 * c[1], 2.0 * c[2], c[3]))
        if (x > 1e-14 && x < kThetaMax) breaks.push_back(x);
    std::sort(breaks.begin(), breaks.end());

    std::vector<double> candidates;
    for (size_t i = 0; i + 1 < breaks.size(); ++i) {
        double lo = breaks[i], hi = breaks[i + 1];
        if ((poly4(c, lo) >= 0.0) != (poly4(c, hi) >= 0.0))
            candidates.push_back(bisect_poly(c, lo, hi));
    }
    for (size_t i = 1; i + 1 < breaks.size(); ++i) candidates.push_back(breaks[i]);
    std::sort(candidates.begin(), candidates.end());

    LatticeParams p{theta1, theta2, 1.0};
    std::vector<Theta3Root> roots;
    for (double x : candidates) {
        if (!(x > 0.0)) continue;
        bool dup = false;
        for (const auto& r : roots)
            if (std::abs(x - r.theta3) <= 1e-9 * std::max(1.0, std::abs(r.theta3))) dup = true;
        if (dup) continue;
        p.theta3 = x;
        auto [s, val] = best_branch(k, m, p);
        if (std::abs(val) <= kRadicalTol) roots.push_back({x, s, val});
    }
    return roots;
}

std::vector<CurvePoint> resonance_curve(const WaveVector& k, const WaveVector& m,
                                        const std::vector<double>& ratio2_grid) {
    if (ratio2_grid.empty()) throw std::domain_error("resonance_curve: empty grid");
    for (size_t i = 0; i < ratio2_grid.size(); ++i) {
        if (!(ratio2_grid[i] > 0.0))
            throw std::domain_error("resonance_curve: grid values must be > 0");
        if (i > 0 && !(ratio2_grid[i] > ratio2_grid[i - 1]))
            throw std::domain_error("resonance_curve: grid must be strictly increasing");
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<CurvePoint> out;
    double prev = nan;
    for (double g : ratio2_grid) {
        auto roots = solve_theta3(k, m, 1.0, g);
        CurvePoint pt;
        pt.ratio2 = g;
        if (roots.empty()) {
            pt.ratio3 = nan;
            pt.residual = nan;
            pt.branch_flag = 2;
        } else {
            size_t pick = 0;
            bool ambiguous = false;
            if (std::isnan(prev)) {
                pick = 0;  // roots sorted ascending: smallest
            } else {
                double bestd = std::numeric_limits<double>::infinity();
                for (size_t i = 0; i < roots.size(); ++i) {
                    double d = std::abs(roots[i].theta3 - prev);
                    if (d < bestd - 1e-12 * std::max(1.0, prev)) {
                        bestd = d;
                        pick = i;
                        ambiguous = false;
                    } else if (std::abs(d - bestd) <= 1e-12 * std::max(1.0, prev) &&
                               roots[i].theta3 != roots[pick].theta3) {
                        ambiguous = true;  // equidistant: keep smaller (earlier) root
                    }
                }
            }
            pt.ratio3 = roots[pick].theta3;
            pt.residual = roots[pick].residual;
            pt.branch_flag = ambiguous ? 1 : 0;
            prev = pt.ratio3;
        }
        out.push_back(pt);
    }
    return out;
}

double beta_asymptotic(long long n1, long long n2, double psi) {
    if (n1 < 1) throw std::domain_error("beta_asymptotic: n1 must be >= 1");
    const double half_pi = kPi / 2.0;
    if (!(std::abs(psi) <= 1e-12 || std::abs(psi - half_pi) <= 1e-12 ||
          std::abs(psi + half_pi) <= 1e-12))
        throw std::domain_error("beta_asymptotic: psi must be one of {0, +pi/2, -pi/2}");
    return static_cast<double>(n1) * kPi + static_cast<double>(n2) * half_pi + kPi / 4.0 + psi;
}

long long irreducibility_det(const WaveVector& k, const WaveVector& m, const WaveVector& n) {
    // rows n, k, m; columns (third, second, first components squared)
    auto sq = [](long long x) { return static_cast<__int128>(x) * x; };
    __int128 r[3][3] = {{sq(n.n3), sq(n.n2), sq(n.n1)},
                        {sq(k.n3), sq(k.n2), sq(k.n1)},
                        {sq(m.n3), sq(m.n2), sq(m.n1)}};
    __int128 det = r[0][0] * (r[1][1] * r[2][2] - r[1][2] * r[2][1]) -
                   r[0][1] * (r[1][0] * r[2][2] - r[1][2] * r[2][0]) +
                   r[0][2] * (r[1][0] * r[2][1] - r[1][1] * r[2][0]);
    if (det > std::numeric_limits<long long>::max() ||
        det < std::numeric_limits<long long>::min())
        throw std::overflow_error("irreducibility_det: components too large");
    return static_cast<long long>(det);
}

long long degeneracy_G(const WaveVector& k, const WaveVector& m, const WaveVector& n,
                       int i, int j) {
    if (i == j) throw std::domain_error("degeneracy_G: indices i, j must differ");
    if (i < 1 || i > 3 || j < 1 || j > 3)
        throw std::domain_error("degeneracy_G: indices must be in {1,2,3}");
    int l = 6 - i - j;
    return comp1(k, i) * comp1(n, j) * comp1(m, l) + comp1(k, l) * comp1(m, j) * comp1(n, i);
}

long long degeneracy_G(const WaveVector& k, const WaveVector& m, int i, int j) {
    return degeneracy_G(k, m, k + m, i, j);
}

namespace {

// num/den in lowest terms with den > 0.
Rational reduce_fraction(long long num, long long den) {
    if (den == 0) throw ReducibleError("decompose_primitive: vanishing denominator");
    long long g = std::gcd(std::abs(num), std::abs(den));
    if (g == 0) g = 1;
    num /= g;
    den /= g;
    if (den < 0) {
        num = -num;
        den = -den;
    }
    return {num, den};
}

bool divides_vector(long long d, const WaveVector& v) {
    return v.n1 % d == 0 && v.n2 % d == 0 && v.n3 % d == 0;
}

}  // namespace

PrimitivePair decompose_primitive(const WaveVector& k, const WaveVector& m, int i, int j) {
    if (i == j || i < 1 || i > 3 || j < 1 || j > 3)
        throw std::domain_error("decompose_primitive: i, j must be distinct indices in {1,2,3}");
    if (degeneracy_G(k, m, i, j) != 0)
        throw DegeneracyError("decompose_primitive: degeneracy condition violated (G != 0)");
    int l = 6 - i - j;

    long long mi = comp1(m, i), mj = comp1(m, j), ml = comp1(m, l);
    long long ki = comp1(k, i), kj = comp1(k, j), kl = comp1(k, l);

    Rational alpha = reduce_fraction(mi * kl - ml * ki, mi * kl + ml * ki);
    Rational beta = reduce_fraction(ml * kj - mj * kl, ml * kj + mj * kl);
    for (const Rational& r : {alpha, beta})
        if (r.num == 0 || std::abs(r.num) == std::abs(r.den))
            throw ReducibleError("decompose_primitive: alpha or beta in {0, +-1}");

    long long a = alpha.den, aPrime = alpha.num;
    long long b = beta.den, bPrime = beta.num;
    if (!divides_vector(a, k) || !divides_vector(b, m))
        throw std::invalid_argument("decompose_primitive: a does not divide k or b does not divide m");

    PrimitivePair pp;
    pp.i = i;
    pp.j = j;
    pp.kbar = {k.n1 / a, k.n2 / a, k.n3 / a};
    pp.mbar = {m.n1 / b, m.n2 / b, m.n3 / b};
    long long d = std::gcd(component_gcd(pp.kbar), component_gcd(pp.mbar));
    if (d > 1) {
        pp.kbar = {pp.kbar.n1 / d, pp.kbar.n2 / d, pp.kbar.n3 / d};
        pp.mbar = {pp.mbar.n1 / d, pp.mbar.n2 / d, pp.mbar.n3 / d};
    }
    pp.a = a;
    pp.b = b;
    pp.aPrime = aPrime;
    pp.bPrime = bPrime;
    pp.alpha = alpha;
    pp.beta = beta;

    if (!verify_primitive_pair(pp).all())
        throw std::invalid_argument("decompose_primitive: reconstructed pair fails its invariants");
    return pp;
}

WaveVector primitive_n(const PrimitivePair& pp) {
    return pp.a * pp.kbar + pp.b * pp.mbar;
}

PrimitiveChecks verify_primitive_pair(const PrimitivePair& pp) {
    PrimitiveChecks c;
    c.gcd_a_aprime = std::gcd(std::abs(pp.a), std::abs(pp.aPrime)) == 1;
    c.gcd_b_bprime = std::gcd(std::abs(pp.b), std::abs(pp.bPrime)) == 1;
    c.gcd_a_b = std::gcd(std::abs(pp.a), std::abs(pp.b)) == 1;
    c.gcd_aprime_bprime = std::gcd(std::abs(pp.aPrime), std::abs(pp.bPrime)) == 1;
    c.gcd_kbar_mbar = std::gcd(component_gcd(pp.kbar), component_gcd(pp.mbar)) == 1;
    WaveVector n1 = primitive_n(pp);
    WaveVector n2 = pp.aPrime * apply_symmetry(pp.i, pp.kbar) +
                    pp.bPrime * apply_symmetry(pp.j, pp.mbar);
    c.reconstructs = (n1 == n2);
    return c;
}

}  // namespace reso
