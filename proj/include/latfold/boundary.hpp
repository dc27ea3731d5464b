#pragma once

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "latfold/lattice.hpp"

namespace latfold {

// Bisector between a C^1 corner x and a C^0 neighbour x':
// y.v = p with v = x - x', p = (|x|^2 - |x'|^2) / 2.
struct Membership {
    int group = 0;
    int corner = 0;      // corner id of x
    int neighbour = 0;   // corner id of x'
    Vec v;
    double p = 0.0;
    int hyper = 0;       // canonical hyperplane id
};

struct Group {
    int corner = 0;
    int begin = 0, end = 0;  // membership range
    int cap = 0;             // lowest group index with the same hyperplane set
};

struct BoundaryFunction {
    int n = 0;
    double min_norm = 0.0;
    std::vector<Membership> members;
    std::vector<Group> groups;
    std::vector<Vec> hyperplanes;  // canonical (v/|v|, p/|v|), length n + 1
    // h_j(y~) = A.row(j) . y~ + c[j], the y_1 where y crosses bisector j.
    Mat A;
    Vec c;
};

using PieceKey = std::pair<int, int>;  // (cap, canonical hyperplane)

// Corner ids x' in C^0 with x - x' in the minimal shell.
std::vector<int> neighbors_in_c0(const OrientedBasis& b, double min_norm, int corner);
std::vector<int> neighbors_in_c0(const OrientedBasis& b, int corner);

BoundaryFunction build_boundary(const OrientedBasis& b);

struct BoundaryValue {
    double value;
    int active;  // membership index
};

BoundaryValue eval_boundary(const BoundaryFunction& f, const Vec& yt);
PieceKey piece_key(const BoundaryFunction& f, int membership);

// A piece is a distinct (cap, hyperplane) pair; identical caps collapse.
std::set<PieceKey> all_pieces(const BoundaryFunction& f);
long count_pieces_oracle(const BoundaryFunction& f);

// Number of distinct canonical bisector hyperplanes over all memberships.
long count_distinct_hyperplanes(const BoundaryFunction& f);

struct PieceFormula {
    long value = 0;
    // En only: the same sum with the multiplicity binomial read as C(n-3, i).
    std::optional<long> alternate;
};

PieceFormula count_pieces_formula(const FamilyId& id);

// The t-interval of points (t, y~) inside P(B).
struct Fiber {
    double lo, hi;
    double length() const { return hi - lo; }
};

Fiber fiber(const OrientedBasis& b, const Vec& yt);
bool in_domain(const OrientedBasis& b, const Vec& yt);

// Grid with `density` points per axis over the bounding box of D(B).
std::set<PieceKey> sampled_pieces_grid(const OrientedBasis& b, const BoundaryFunction& f, int density);
long count_pieces_sampled(const OrientedBasis& b, const BoundaryFunction& f, int density);

// Projections of uniform P(B) samples.
std::set<PieceKey> sampled_pieces_random(const OrientedBasis& b, const BoundaryFunction& f,
                                         std::uint64_t seed, std::size_t samples);

// Uniform samples of D(B) by rejection from its bounding box.
std::vector<Vec> sample_domain(const OrientedBasis& b, std::uint64_t seed, std::size_t count);

enum class Decision { Zero, One, Ambiguous };

Decision decode_bit(const BoundaryFunction& f, const Vec& y, double tol = kAmbiguityBand);

Vec tail(const Vec& y);  // coordinates 2..n

}  // namespace latfold
