#include "latfold/folding.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <thread>

namespace latfold {

FoldingSchedule build_schedule(const FamilyId& id, const OrientedBasis& b) {
    require_valid(id);
    if (b.n != id.n) throw DomainError("schedule: basis dimension does not match family");
    FoldingSchedule s{id, {}};
    const int n = id.n;
    auto add = [&](int j, int k) {
        Reflection r;
        r.j = j;
        r.k = k;
        Vec d = (b.G.row(j - 1) - b.G.row(k - 1)).transpose();
        if (std::abs(d[0]) > kGeomTol) throw InternalError("reflection normal has nonzero first coordinate");
        r.v = tail(d);
        s.reflections.push_back(std::move(r));
    };
    int first = 2;
    if (id.family == Family::DnSecond) first = 3;
    if (id.family == Family::En) first = 4;
    for (int j = first; j <= n; ++j)
        for (int k = j + 1; k <= n; ++k) add(j, k);
    if (id.family == Family::En) add(2, 3);
    return s;
}

namespace {

bool reflect_if_negative(const Reflection& r, Vec& yt) {
    double d = yt.dot(r.v);
    if (d >= 0.0) return false;
    yt -= (2.0 * d / r.v.squaredNorm()) * r.v;
    return true;
}

}  // namespace

Vec apply_fold(const FoldingSchedule& s, const Vec& yt, int* sweeps) {
    Vec out = yt;
    const int n = s.id.n;
    int fired_passes = 0;
    for (int pass = 0; pass < n * n; ++pass) {
        bool fired = false;
        for (const auto& r : s.reflections) fired |= reflect_if_negative(r, out);
        if (!fired) {
            if (sweeps) *sweeps = fired_passes;
            return out;
        }
        ++fired_passes;
    }
    throw InternalError("folding did not reach a fixpoint");
}

Vec apply_fold_once(const FoldingSchedule& s, const Vec& yt) {
    Vec out = yt;
    for (const auto& r : s.reflections) reflect_if_negative(r, out);
    return out;
}

bool on_folded_side(const FoldingSchedule& s, const Vec& yt, double tol) {
    for (const auto& r : s.reflections)
        if (yt.dot(r.v) < -tol * r.v.norm()) return false;
    return true;
}

double verify_fold_invariance(const OrientedBasis& b, const BoundaryFunction& f, const FoldingSchedule& s,
                              std::uint64_t seed, std::size_t count) {
    double dev = 0.0;
    for (const auto& yt : sample_domain(b, seed, count)) {
        double a = eval_boundary(f, yt).value;
        double c = eval_boundary(f, apply_fold(s, yt)).value;
        dev = std::max(dev, std::abs(a - c));
    }
    return dev;
}

std::set<PieceKey> folded_pieces_corner_pairs(const OrientedBasis& b, const BoundaryFunction& f,
                                              const FoldingSchedule& s) {
    std::set<PieceKey> out;
    for (std::size_t j = 0; j < f.members.size(); ++j) {
        const auto& m = f.members[j];
        if (on_folded_side(s, tail(corner_x(b, m.corner))) && on_folded_side(s, tail(corner_x(b, m.neighbour))))
            out.insert(piece_key(f, static_cast<int>(j)));
    }
    return out;
}

std::set<PieceKey> folded_pieces_sampled(const OrientedBasis& b, const BoundaryFunction& f,
                                         const FoldingSchedule& s, std::uint64_t seed, std::size_t samples) {
    const auto pts = sample_domain(b, seed, samples);
    const unsigned workers = std::max(1u, std::min<unsigned>(worker_count(), pts.size() / 4096 + 1));
    std::vector<std::set<PieceKey>> parts(workers);
    auto work = [&](unsigned w) {
        for (std::size_t i = w; i < pts.size(); i += workers) {
            const Vec& yt = pts[i];
            parts[w].insert(piece_key(f, eval_boundary(f, apply_fold(s, yt)).active));
            if (on_folded_side(s, yt, 0.0)) parts[w].insert(piece_key(f, eval_boundary(f, yt).active));
        }
    };
    std::vector<std::thread> pool;
    for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work, w);
    work(0);
    for (auto& t : pool) t.join();
    std::set<PieceKey> out;
    for (const auto& p : parts) out.insert(p.begin(), p.end());
    return out;
}

FoldedCountReport folded_piece_count_oracle(const OrientedBasis& b, const BoundaryFunction& f,
                                            const FoldingSchedule& s, std::uint64_t seed,
                                            std::size_t samples_low, std::size_t samples_high) {
    FoldedCountReport r;
    r.id = s.id;
    r.corner_pairs = static_cast<long>(folded_pieces_corner_pairs(b, f, s).size());
    r.sampled_low = static_cast<long>(folded_pieces_sampled(b, f, s, seed, samples_low).size());
    r.sampled_high = static_cast<long>(folded_pieces_sampled(b, f, s, seed + 1, samples_high).size());
    const long n = s.id.n;
    switch (s.id.family) {
        case Family::An: break;
        case Family::DnConstA: r.stated = 2 * n - 1; break;
        case Family::DnSecond:
            r.stated = 6 * n - 6;
            r.sketch = 6 * n - 12;
            break;
        case Family::En:
            r.stated = 12 * n - 40;
            r.sketch = 12 * n - 28;
            break;
    }
    return r;
}

Reduction reduce_to_parallelotope(const OrientedBasis& b, const Vec& y0, int M) {
    if (M < 0) throw DomainError("M must be >= 0");
    Vec a = alpha_coords(b, y0);
    const double top = std::ldexp(1.0, M);
    if (!(a[0] >= 0.0 && a[0] < 1.0)) throw DomainError("point outside the extended parallelotope (alpha_1)");
    std::vector<int> z(b.n, 0);
    for (int j = 1; j < b.n; ++j) {
        if (!(a[j] >= 0.0 && a[j] < top)) throw DomainError("point outside the extended parallelotope");
        z[j] = static_cast<int>(std::floor(a[j]));
    }
    Reduction r;
    r.shift = make_point(b, z);
    r.y = y0 - r.shift.x;
    return r;
}

double eval_extended(const OrientedBasis& b, const BoundaryFunction& f, const Vec& y0, int M) {
    return eval_boundary(f, tail(reduce_to_parallelotope(b, y0, M).y)).value;
}

std::vector<Vec> sample_extended(const OrientedBasis& b, int M, std::uint64_t seed, std::size_t count,
                                 double margin) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double top = std::ldexp(1.0, M);
    std::vector<Vec> out;
    out.reserve(count);
    Vec a(b.n);
    while (out.size() < count) {
        a[0] = u(rng);
        bool ok = a[0] >= margin && a[0] <= 1.0 - margin;
        for (int j = 1; j < b.n; ++j) {
            a[j] = top * u(rng);
            double fr = a[j] - std::floor(a[j]);
            ok = ok && fr >= margin && fr <= 1.0 - margin;
        }
        if (ok) out.push_back(b.G.transpose() * a);
    }
    return out;
}

}  // namespace latfold
