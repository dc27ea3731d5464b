#pragma once

#include <optional>
#include <vector>

#include "latfold/boundary.hpp"

namespace latfold {

struct McEstimate {
    double estimate = 0.0;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    double stderr_ = 0.0;  // sample standard deviation / sqrt(samples)
};

struct VolumeBounds {
    double lower = 0.0;
    double upper = 0.0;
};

// Bounds for the A_n simplex with edge length sqrt(2): lower n(n-1)/(2^n (n+1)^{3/2} n!),
// upper Vol(P(B))/n! = sqrt(n+1)/n!.
VolumeBounds simplex_volume_bounds(int n);

// |det(v_1 - v_0, ..., v_n - v_0)| / n!
double simplex_volume(const std::vector<Vec>& vertices);

// Vertices of the region above the cap of corner b_1 and below y_1 = (b_1.e_1)/2:
// the apex equidistant from b_1 and its n neighbours, and the n points where
// n - 1 of those bisectors meet the plane. Requires the cap to have n members.
std::vector<Vec> boundary_simplex_vertices(const OrientedBasis& b, const BoundaryFunction& f);
double exact_simplex_volume(const OrientedBasis& b);

struct VolumeReport {
    int n = 0;
    std::optional<double> exact;
    double lower = 0.0;
    double upper = 0.0;
};

VolumeReport volume_report(int n);  // A_n

struct L1Gap {
    McEstimate raw;      // integral of |f - h_Phi| over D(B)
    McEstimate clipped;  // same with f and h_Phi clipped to the fiber inside P(B)
    double bound = 0.0;  // 2^n Vol(P(B)) / n!
};

L1Gap l1_gap_mc(const OrientedBasis& b, const BoundaryFunction& f, std::uint64_t seed, std::size_t samples);

double corollary_bound(int n);

// Fraction of uniform P(B) points where [y_1 > (b_1.e_1)/2] differs from z_1 of the nearest corner.
McEstimate hyperplane_decoding_error_mc(const OrientedBasis& b, std::uint64_t seed, std::size_t samples);

struct SeparationReport {
    int n = 0, M = 0, L = 0, w = 0;
    double log2_K = 0.0;        // K = 2^{M(n-1)} copies of P(B)
    double simplex_lower = 0.0; // per-simplex volume lower bound
    double log2_budget = 0.0;   // (n-1) L log2 w
    double threshold = 0.0;     // L log2 w + n
    bool satisfied = false;     // M >= threshold
};

SeparationReport separation_report(int n, int M, int L, int w);

}  // namespace latfold
