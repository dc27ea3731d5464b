#pragma once

#include <optional>
#include <string>
#include <vector>

#include "latfold/common.hpp"

namespace latfold {

enum class Family { An, DnConstA, DnSecond, En };

struct FamilyId {
    Family family;
    int n;
};

std::string family_name(Family f);          // "an", "dn-const-a", "dn-second", "en"
std::optional<Family> parse_family(const std::string& s);
bool family_valid(const FamilyId& id);
void require_valid(const FamilyId& id);     // throws DomainError
int family_min_n(Family f);
int family_max_n(Family f);                 // En caps at 8, others return a large value

Mat build_gram(const FamilyId& id);

struct OrientedBasis {
    int n = 0;
    Mat gram;
    Mat G;      // rows b_1..b_n; upper triangular, b_1.e_1 > 0
    Mat Ginv;
    std::optional<FamilyId> family;

    double g11() const { return G(0, 0); }
    double volume() const;  // |det G|
};

OrientedBasis orient_basis(const Mat& gram);
OrientedBasis orient_basis(const FamilyId& id);
// Multiplies every generator by s (Gram by s^2).
OrientedBasis scale_basis(const OrientedBasis& b, double s);
// Rescales so that |det G| = 1.
OrientedBasis unit_volume(const OrientedBasis& b);

struct LatticePoint {
    std::vector<int> z;
    Vec x;
};

LatticePoint make_point(const OrientedBasis& b, std::vector<int> z);

// Corner i has z_j = bit (j-1) of i, so z_1 is the least significant bit.
struct CornerSet {
    int n = 0;
    std::vector<LatticePoint> all;   // indexed by corner id
    std::vector<int> c0;             // ids with z_1 = 0, ascending
    std::vector<int> c1;             // ids with z_1 = 1, ascending
    std::vector<double> coords;      // row-major corner coordinates
};

constexpr int kCornerCap = 20;

CornerSet enumerate_corners(const OrientedBasis& b, int cap = kCornerCap);

std::vector<int> corner_z(int id, int n);
Vec corner_x(const OrientedBasis& b, int id);

struct Shell {
    double min_norm = 0.0;
    std::vector<LatticePoint> vectors;
};

// Minimal nonzero shell over z in [-r, r]^n.
Shell relevant_vectors(const OrientedBasis& b, int r = 3);

// Exact nearest corner by depth-first branch and bound; ties go to the
// lexicographically smallest z (z_1 most significant).
LatticePoint cvp_corners(const OrientedBasis& b, const Vec& y);

// Same answer via a full scan of precomputed corners (SIMD distance kernel).
LatticePoint cvp_corners_scan(const OrientedBasis& b, const CornerSet& cs, const Vec& y);

// Brute force over z in [floor(alpha) - r, floor(alpha) + r + 1]^n.
LatticePoint cvp_box(const OrientedBasis& b, const Vec& y, int r, std::size_t budget = 50'000'000);

Vec alpha_coords(const OrientedBasis& b, const Vec& y);  // y G^{-1}

std::vector<Vec> sample_parallelotope(const OrientedBasis& b, std::uint64_t seed, std::size_t count);

// JSON {family, n, gram, generator}
std::string basis_to_json(const OrientedBasis& b);
OrientedBasis basis_from_json(const std::string& text);

}  // namespace latfold
