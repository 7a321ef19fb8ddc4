#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace reso {

/// Zero crossings of a sampled signal, refined through a local cubic
/// interpolant. Exact zeros at the first sample are skipped (they are the
/// r(0) = 0 starting condition, not a detected event).
std::vector<double> zero_crossings(const std::vector<double>& t, const std::vector<double>& g);

struct Extremum {
    double t = 0.0;
    double value = 0.0;
    bool is_max = false;
};

/// Interior extrema of a sampled signal with parabolic refinement.
std::vector<Extremum> find_extrema(const std::vector<double>& t, const std::vector<double>& v);

/// Global max/min over the samples including three-point refinement at
/// interior extremes.
double refined_max(const std::vector<double>& t, const std::vector<double>& v);
double refined_min(const std::vector<double>& t, const std::vector<double>& v);

/// First time the signal reaches `level` (linear interpolation between the
/// bracketing samples); nullopt when it never does.
std::optional<double> first_passage(const std::vector<double>& t, const std::vector<double>& v,
                                    double level);

/// Mean spacing of the zero crossings of p*q*r: the half-period of the
/// enstrophy oscillation. Requires at least two crossings.
double measure_half_period(const std::vector<double>& t, const std::vector<double>& p,
                           const std::vector<double>& q, const std::vector<double>& r);

struct SignSegment {
    size_t begin = 0, end = 0;  // inclusive sample range
    int sign_ak = 0, sign_an = 0, sign_akt = 0;
};

/// Maximal index ranges on which every watched signal keeps a fixed sign.
std::vector<SignSegment> sign_segments(const std::vector<double>& ak,
                                       const std::vector<double>& an,
                                       const std::vector<double>& akt);

}  // namespace reso
