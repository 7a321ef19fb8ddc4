#include "reso/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace reso {

namespace {

// Lagrange interpolation through up to four samples around [i, i+1].
double local_interp(const std::vector<double>& t, const std::vector<double>& g, size_t i,
                    double x) {
    size_t lo = i > 0 ? i - 1 : i;
    size_t hi = std::min(g.size() - 1, i + 2);
    double acc = 0.0;
    for (size_t a = lo; a <= hi; ++a) {
        double term = g[a];
        for (size_t b = lo; b <= hi; ++b) {
            if (a == b) continue;
            term *= (x - t[b]) / (t[a] - t[b]);
        }
        acc += term;
    }
    return acc;
}

double refine_zero(const std::vector<double>& t, const std::vector<double>& g, size_t i) {
    double lo = t[i], hi = t[i + 1];
    double flo = local_interp(t, g, i, lo);
    for (int it = 0; it < 80; ++it) {
        double mid = 0.5 * (lo + hi);
        double fm = local_interp(t, g, i, mid);
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

std::vector<double> zero_crossings(const std::vector<double>& t, const std::vector<double>& g) {
    if (t.size() != g.size()) throw std::domain_error("zero_crossings: size mismatch");
    std::vector<double> out;
    size_t start = 0;
    while (start < g.size() && g[start] == 0.0) ++start;  // skip the t = 0 zero block
    for (size_t i = start; i + 1 < g.size(); ++i) {
        if (g[i + 1] == 0.0) {
            out.push_back(t[i + 1]);
            while (i + 1 < g.size() && g[i + 1] == 0.0) ++i;
            continue;
        }
        if ((g[i] > 0.0 && g[i + 1] < 0.0) || (g[i] < 0.0 && g[i + 1] > 0.0))
            out.push_back(refine_zero(t, g, i));
    }
    return out;
}

std::vector<Extremum> find_extrema(const std::vector<double>& t, const std::vector<double>& v) {
    if (t.size() != v.size()) throw std::domain_error("find_extrema: size mismatch");
    std::vector<Extremum> out;
    for (size_t i = 1; i + 1 < v.size(); ++i) {
        bool mx = v[i] >= v[i - 1] && v[i] >= v[i + 1] && (v[i] > v[i - 1] || v[i] > v[i + 1]);
        bool mn = v[i] <= v[i - 1] && v[i] <= v[i + 1] && (v[i] < v[i - 1] || v[i] < v[i + 1]);
        if (!mx && !mn) continue;
        // parabola through the three samples
        double h1 = t[i] - t[i - 1], h2 = t[i + 1] - t[i];
        double d1 = (v[i] - v[i - 1]) / h1, d2 = (v[i + 1] - v[i]) / h2;
        double curv = 2.0 * (d2 - d1) / (h1 + h2);
        Extremum e;
        e.is_max = mx;
        if (curv != 0.0) {
            // vertex of the parabola through the three samples
            double a = curv / 2.0;
            double b = d1 + a * h1;  // parabola slope at t[i]
            double dt = -b / (2.0 * a);
            e.t = t[i] + dt;
            e.value = v[i] + b * dt + a * dt * dt;
        } else {
            e.t = t[i];
            e.value = v[i];
        }
        out.push_back(e);
    }
    return out;
}

double refined_max(const std::vector<double>& t, const std::vector<double>& v) {
    if (v.empty()) throw std::domain_error("refined_max: empty signal");
    double best = *std::max_element(v.begin(), v.end());
    for (const auto& e : find_extrema(t, v))
        if (e.is_max) best = std::max(best, e.value);
    return best;
}

double refined_min(const std::vector<double>& t, const std::vector<double>& v) {
    if (v.empty()) throw std::domain_error("refined_min: empty signal");
    double best = *std::min_element(v.begin(), v.end());
    for (const auto& e : find_extrema(t, v))
        if (!e.is_max) best = std::min(best, e.value);
    return best;
}

std::optional<double> first_passage(const std::vector<double>& t, const std::vector<double>& v,
                                    double level) {
    if (t.size() != v.size()) throw std::domain_error("first_passage: size mismatch");
    if (!v.empty() && v[0] >= level) return t[0];
    for (size_t i = 0; i + 1 < v.size(); ++i) {
        if (v[i + 1] >= level) {
            double f = (level - v[i]) / (v[i + 1] - v[i]);
            return t[i] + f * (t[i + 1] - t[i]);
        }
    }
    return std::nullopt;
}

double measure_half_period(const std::vector<double>& t, const std::vector<double>& p,
                           const std::vector<double>& q, const std::vector<double>& r) {
    std::vector<double> g(t.size());
    for (size_t i = 0; i < t.size(); ++i) g[i] = p[i] * q[i] * r[i];
    auto zeros = zero_crossings(t, g);
    if (zeros.size() < 2)
        throw std::domain_error("measure_half_period: fewer than two enstrophy extrema");
    double acc = 0.0;
    for (size_t i = 0; i + 1 < zeros.size(); ++i) acc += zeros[i + 1] - zeros[i];
    return acc / static_cast<double>(zeros.size() - 1);
}

std::vector<SignSegment> sign_segments(const std::vector<double>& ak,
                                       const std::vector<double>& an,
                                       const std::vector<double>& akt) {
    auto sgn = [](double x) { return x > 0.0 ? 1 : (x < 0.0 ? -1 : 0); };
    std::vector<SignSegment> out;
    size_t n = ak.size();
    if (an.size() != n || akt.size() != n)
        throw std::domain_error("sign_segments: size mismatch");
    size_t i = 0;
    while (i < n) {
        SignSegment seg;
        seg.begin = i;
        seg.sign_ak = sgn(ak[i]);
        seg.sign_an = sgn(an[i]);
        seg.sign_akt = sgn(akt[i]);
        size_t j = i;
        while (j + 1 < n && sgn(ak[j + 1]) == seg.sign_ak && sgn(an[j + 1]) == seg.sign_an &&
               sgn(akt[j + 1]) == seg.sign_akt)
            ++j;
        seg.end = j;
        out.push_back(seg);
        i = j + 1;
    }
    return out;
}

}  // namespace reso
