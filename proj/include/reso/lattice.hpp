#pragma once

#include <array>
#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace reso {

/// Integer wavevector indexing a curl/Fourier mode. n3 is the vertical
/// (axial) wavenumber, n2 the azimuthal one.
struct WaveVector {
    long long n1 = 0, n2 = 0, n3 = 0;

    friend bool operator==(const WaveVector&, const WaveVector&) = default;

    long long& operator[](int i) { return i == 0 ? n1 : i == 1 ? n2 : n3; }
    long long operator[](int i) const { return i == 0 ? n1 : i == 1 ? n2 : n3; }

    bool is_zero() const { return n1 == 0 && n2 == 0 && n3 == 0; }
};

inline WaveVector operator+(const WaveVector& a, const WaveVector& b) {
    return {a.n1 + b.n1, a.n2 + b.n2, a.n3 + b.n3};
}
inline WaveVector operator-(const WaveVector& a, const WaveVector& b) {
    return {a.n1 - b.n1, a.n2 - b.n2, a.n3 - b.n3};
}
inline WaveVector operator*(long long g, const WaveVector& v) {
    return {g * v.n1, g * v.n2, g * v.n3};
}
inline bool lex_less(const WaveVector& a, const WaveVector& b) {
    if (a.n1 != b.n1) return a.n1 < b.n1;
    if (a.n2 != b.n2) return a.n2 < b.n2;
    return a.n3 < b.n3;
}

/// gcd of the three components (0 for the zero vector).
inline long long component_gcd(const WaveVector& v) {
    long long g = std::gcd(std::gcd(std::abs(v.n1), std::abs(v.n2)), std::abs(v.n3));
    return g;
}

/// sigma_j flips component j; sigma_0 is the identity. j in {0,1,2,3}.
WaveVector apply_symmetry(int j, const WaveVector& v);

/// Dimensionless lattice/aspect parameters; the cylinder aspect enters as
/// theta3 = 1/h^2.
struct LatticeParams {
    double theta1 = 1.0, theta2 = 1.0, theta3 = 1.0;

    friend bool operator==(const LatticeParams&, const LatticeParams&) = default;

    void validate() const {
        if (!(theta1 > 0.0 && theta2 > 0.0 && theta3 > 0.0))
            throw std::domain_error("lattice parameters must be strictly positive");
    }
};

/// Polarity assignment for the three members of a triad. Fields name the
/// member the sign belongs to (sn pairs with n = k + m).
struct SignBranch {
    int sn = 1, sk = 1, sm = 1;

    friend bool operator==(const SignBranch&, const SignBranch&) = default;
};

/// Thrown when a triad has a zero vertical wavenumber (two-wave/catalytic
/// resonances are outside the strict three-wave set).
struct CatalyticError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Thrown by decompose_primitive when alpha or beta lands in {0, +-1} or a
/// defining denominator vanishes.
struct ReducibleError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Thrown when the degeneracy precondition G_{i,j} = 0 does not hold.
struct DegeneracyError : std::domain_error {
    using std::domain_error::domain_error;
};

/// v3 / sqrt(theta1 v1^2 + theta2 v2^2 + theta3 v3^2).
/// The vector is reduced by the gcd of its components first, so the value is
/// bitwise invariant under integer homothety.
double dispersion_ratio(const WaveVector& v, const LatticeParams& p);

/// Signed resonance defect sn*ratio(k+m) + sk*ratio(k) + sm*ratio(m).
/// Zero characterizes strict three-wave resonance for that sign branch.
double residual(const WaveVector& k, const WaveVector& m, const LatticeParams& p,
                const SignBranch& s);

/// Smallest-|residual| branch among all 8 sign choices (first in enumeration
/// order on exact ties).
std::pair<SignBranch, double> best_branch(const WaveVector& k, const WaveVector& m,
                                          const LatticeParams& p);

/// A resonant wavevector triple with signed curl eigenvalues.
struct Triad {
    WaveVector k, m, n;
    SignBranch signs;
    std::array<double, 3> lambdas{};  // (lambda_k, lambda_m, lambda_n), signed
    double residual = 0.0;
};

/// Builds a Triad from (k, m): checks non-catalyticity, picks the best sign
/// branch, records signed eigenvalues.
Triad make_triad(const WaveVector& k, const WaveVector& m, const LatticeParams& p);

/// Canonical representative of (k, m) under componentwise sign flips,
/// integer homothety and the k<->m swap: divide by the gcd of all six
/// components, then take the lexicographically smallest of the 16 images.
std::pair<WaveVector, WaveVector> canonical_pair(const WaveVector& k, const WaveVector& m);

/// Canonical representative of a triad; idempotent.
Triad canonicalize(const Triad& t, const LatticeParams& p);

struct TriadCatalog {
    LatticeParams params;
    long long box = 0;
    double tol = 0.0;
    std::vector<Triad> entries;  // canonical, lexicographically sorted
};

/// All canonical triads with |k|,|m| components <= box, n = k + m,
/// k3 m3 n3 != 0 and some sign branch with |residual| <= tol.
TriadCatalog search_triads(const LatticeParams& p, long long box, double tol);

/// h_v = (theta1 v1^2 + theta2 v2^2) / v3^2 for the lattice dispersion law.
double lattice_h(const WaveVector& v, double theta1, double theta2);

/// Coefficients (P4, P3, P2, P1, P0) of the degree-four dispersion
/// polynomial in theta3.
std::array<double, 5> quartic_coefficients(double h_k, double h_m, double h_n);

struct Theta3Root {
    double theta3 = 0.0;
    SignBranch signs;
    double residual = 0.0;
};

/// Positive roots of the dispersion quartic for (k, m) at given theta1,
/// theta2, each verified against the radical resonance relation to 1e-10;
/// spurious roots from the squaring are discarded. Roots are capped at 1e4.
std::vector<Theta3Root> solve_theta3(const WaveVector& k, const WaveVector& m,
                                     double theta1, double theta2);

struct CurvePoint {
    double ratio2 = 0.0;
    double ratio3 = 0.0;    // NaN on gaps
    double residual = 0.0;  // NaN on gaps
    int branch_flag = 0;    // 0 ok, 1 ambiguous tie, 2 gap
};

/// Resonance curve theta3/theta1 as a function of theta2/theta1, tracked by
/// continuity (nearest verified root to the previous point). On the first
/// defined point the smallest root is chosen; equidistant ties pick the
/// smaller root and set branch_flag = 1.
std::vector<CurvePoint> resonance_curve(const WaveVector& k, const WaveVector& m,
                                        const std::vector<double>& ratio2_grid);

/// Large-beta asymptotic of the radial eigenvalue: n1*pi + n2*pi/2 + pi/4 + psi,
/// psi in {0, +-pi/2}.
double beta_asymptotic(long long n1, long long n2, double psi);

/// Exact determinant of the squared-component matrix, rows (n, k, m),
/// columns (third^2, second^2, first^2). Nonzero = irreducible curve.
long long irreducibility_det(const WaveVector& k, const WaveVector& m, const WaveVector& n);

/// Degeneracy bilinear form G = k_i n_j m_l + k_l m_j n_i with explicit n;
/// linear in each of k, m, n. Indices are 1-based, (i,j,l) a permutation of (1,2,3).
long long degeneracy_G(const WaveVector& k, const WaveVector& m, const WaveVector& n,
                       int i, int j);

/// Same with n = k + m (the convolution case).
long long degeneracy_G(const WaveVector& k, const WaveVector& m, int i, int j);

struct Rational {
    long long num = 0, den = 1;

    friend bool operator==(const Rational&, const Rational&) = default;
};

/// Primitive generators of a degenerate equivariant triad family:
/// n = a*kbar + b*mbar = aPrime*sigma_i(kbar) + bPrime*sigma_j(mbar).
struct PrimitivePair {
    WaveVector kbar, mbar;
    long long a = 0, b = 0, aPrime = 0, bPrime = 0;
    int i = 0, j = 0;
    Rational alpha, beta;  // aPrime/a, bPrime/b in lowest terms
};

/// Splits a degenerate pair (G_{i,j}(k,m) = 0) into its primitive data.
/// Throws DegeneracyError when G != 0, ReducibleError when alpha or beta is
/// in {0, +-1} or undefined, std::invalid_argument on non-divisibility.
PrimitivePair decompose_primitive(const WaveVector& k, const WaveVector& m, int i, int j);

struct PrimitiveChecks {
    bool gcd_a_aprime = false, gcd_b_bprime = false, gcd_a_b = false,
         gcd_aprime_bprime = false, gcd_kbar_mbar = false;
    bool reconstructs = false;  // both decompositions of n hold exactly

    bool all() const {
        return gcd_a_aprime && gcd_b_bprime && gcd_a_b && gcd_aprime_bprime &&
               gcd_kbar_mbar && reconstructs;
    }
};

/// Replays the five gcd conditions and the two reconstructions of n.
PrimitiveChecks verify_primitive_pair(const PrimitivePair& pp);

/// n as reconstructed from the primitive data, n = a*kbar + b*mbar.
WaveVector primitive_n(const PrimitivePair& pp);

}  // namespace reso
