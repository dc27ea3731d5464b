#pragma once

#include <optional>
#include <set>
#include <vector>

#include "latfold/boundary.hpp"

namespace latfold {

// Mirror through the hyperplane y~ . v = 0, with v the tail of b_j - b_k.
struct Reflection {
    int j = 0, k = 0;  // 1-based basis indices
    Vec v;             // length n - 1
};

struct FoldingSchedule {
    FamilyId id;
    std::vector<Reflection> reflections;
};

FoldingSchedule build_schedule(const FamilyId& id, const OrientedBasis& b);

// Reflects whenever y~ . v < 0, sweeping the schedule until nothing fires.
// `sweeps` (optional) receives the number of passes that fired at least once.
Vec apply_fold(const FoldingSchedule& s, const Vec& yt, int* sweeps = nullptr);

// One ordered pass, the map realized by a chain of reflection blocks.
Vec apply_fold_once(const FoldingSchedule& s, const Vec& yt);

bool on_folded_side(const FoldingSchedule& s, const Vec& yt, double tol = kGeomTol);

double verify_fold_invariance(const OrientedBasis& b, const BoundaryFunction& f, const FoldingSchedule& s,
                              std::uint64_t seed, std::size_t count);

// Pieces whose corner pair (x, x') has both tails on the folded side.
std::set<PieceKey> folded_pieces_corner_pairs(const OrientedBasis& b, const BoundaryFunction& f,
                                              const FoldingSchedule& s);

// Active pieces over D'(B): fold images of uniform D(B) samples together with
// the samples that already satisfy the folded-side predicate.
std::set<PieceKey> folded_pieces_sampled(const OrientedBasis& b, const BoundaryFunction& f,
                                         const FoldingSchedule& s, std::uint64_t seed, std::size_t samples);

struct FoldedCountReport {
    FamilyId id;
    long corner_pairs = 0;
    long sampled_low = 0;
    long sampled_high = 0;
    std::optional<long> stated;  // published closed form for the family
    std::optional<long> sketch;  // value implied by the proof arithmetic
};

FoldedCountReport folded_piece_count_oracle(const OrientedBasis& b, const BoundaryFunction& f,
                                            const FoldingSchedule& s, std::uint64_t seed,
                                            std::size_t samples_low, std::size_t samples_high);

struct Reduction {
    Vec y;
    LatticePoint shift;
};

// y0 must lie in P({b_1, 2^M b_2, ..., 2^M b_n}).
Reduction reduce_to_parallelotope(const OrientedBasis& b, const Vec& y0, int M);

// f of the periodic extension: f(y~0) = f(y~) with y the reduction of y0.
double eval_extended(const OrientedBasis& b, const BoundaryFunction& f, const Vec& y0, int M);

// Uniform samples of the extended parallelotope with every alpha coordinate
// at least `margin` away from an integer cell boundary.
std::vector<Vec> sample_extended(const OrientedBasis& b, int M, std::uint64_t seed, std::size_t count,
                                 double margin = 1e-6);

}  // namespace latfold
