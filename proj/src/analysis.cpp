#include "latfold/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

namespace latfold {

namespace {

double factorial(int n) {
    double r = 1.0;
    for (int i = 2; i <= n; ++i) r *= i;
    return r;
}

struct Moments {
    double sum = 0.0, sumsq = 0.0;
    std::size_t count = 0;
};

constexpr std::size_t kChunk = 1 << 14;

// Splits `samples` into fixed chunks, each with its own seeded stream, so the
// result does not depend on the worker count.
template <class Fn>
std::vector<Moments> run_chunks(std::uint64_t seed, std::size_t samples, std::size_t columns, Fn fn) {
    const std::size_t chunks = (samples + kChunk - 1) / kChunk;
    std::vector<std::vector<Moments>> parts(chunks, std::vector<Moments>(columns));
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t c; (c = next++) < chunks;) {
            std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                              static_cast<std::uint32_t>(c)};
            std::mt19937_64 rng(seq);
            std::size_t count = std::min(kChunk, samples - c * kChunk);
            fn(rng, count, parts[c]);
        }
    };
    unsigned workers = std::min<std::size_t>(worker_count(), std::max<std::size_t>(chunks, 1));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < workers; ++i) pool.emplace_back(work);
    work();
    for (auto& t : pool) t.join();
    std::vector<Moments> out(columns);
    for (const auto& p : parts)
        for (std::size_t k = 0; k < columns; ++k) {
            out[k].sum += p[k].sum;
            out[k].sumsq += p[k].sumsq;
            out[k].count += p[k].count;
        }
    return out;
}

McEstimate finish(const Moments& m, std::uint64_t seed) {
    McEstimate e;
    e.samples = m.count;
    e.seed = seed;
    if (m.count == 0) return e;
    double mean = m.sum / m.count;
    e.estimate = mean;
    if (m.count > 1) {
        double var = std::max(0.0, (m.sumsq - m.count * mean * mean) / (m.count - 1));
        e.stderr_ = std::sqrt(var / m.count);
    }
    return e;
}

void add(Moments& m, double v) {
    m.sum += v;
    m.sumsq += v * v;
    ++m.count;
}

}  // namespace

VolumeBounds simplex_volume_bounds(int n) {
    if (n < 2) throw DomainError("volume bounds need n >= 2");
    VolumeBounds v;
    v.lower = n * (n - 1.0) / (std::ldexp(1.0, n) * std::pow(n + 1.0, 1.5) * factorial(n));
    v.upper = std::sqrt(n + 1.0) / factorial(n);
    return v;
}

double simplex_volume(const std::vector<Vec>& vertices) {
    if (vertices.empty()) throw DomainError("empty vertex set");
    const int n = static_cast<int>(vertices[0].size());
    if (static_cast<int>(vertices.size()) != n + 1) throw DomainError("a simplex in R^n needs n + 1 vertices");
    Mat E(n, n);
    double scale = 0.0;
    for (int i = 0; i < n; ++i) {
        E.row(i) = (vertices[i + 1] - vertices[0]).transpose();
        scale = std::max(scale, E.row(i).norm());
    }
    double det = std::abs(E.determinant());
    if (!(det > 1e-12 * std::pow(scale, n))) throw InternalError("degenerate simplex vertex set");
    return det / factorial(n);
}

std::vector<Vec> boundary_simplex_vertices(const OrientedBasis& b, const BoundaryFunction& f) {
    const int n = b.n;
    const Group* g = nullptr;
    for (const auto& gr : f.groups)
        if (gr.corner == 1) g = &gr;
    if (!g || g->end - g->begin != n)
        throw DomainError("the cap of b_1 does not have n facets; no simplex to extract");
    Mat N(n, n);
    Vec P(n);
    for (int r = 0; r < n; ++r) {
        N.row(r) = f.members[g->begin + r].v.transpose();
        P[r] = f.members[g->begin + r].p;
    }
    std::vector<Vec> verts;
    Eigen::FullPivLU<Mat> lu(N);
    if (!lu.isInvertible()) throw InternalError("degenerate simplex vertex set");
    verts.push_back(lu.solve(P));
    for (int k = 0; k < n; ++k) {
        Mat Nk = N;
        Vec Pk = P;
        Nk.row(k) = Vec::Unit(n, 0).transpose();
        Pk[k] = 0.5 * b.g11();
        Eigen::FullPivLU<Mat> luk(Nk);
        if (!luk.isInvertible()) throw InternalError("degenerate simplex vertex set");
        verts.push_back(luk.solve(Pk));
    }
    return verts;
}

double exact_simplex_volume(const OrientedBasis& b) {
    if (b.n > 8) throw ResourceError("simplex extraction supports n <= 8");
    return simplex_volume(boundary_simplex_vertices(b, build_boundary(b)));
}

VolumeReport volume_report(int n) {
    VolumeReport r;
    r.n = n;
    auto bounds = simplex_volume_bounds(n);
    r.lower = bounds.lower;
    r.upper = bounds.upper;
    if (n <= 8) r.exact = exact_simplex_volume(orient_basis(FamilyId{Family::An, n}));
    return r;
}

L1Gap l1_gap_mc(const OrientedBasis& b, const BoundaryFunction& f, std::uint64_t seed, std::size_t samples) {
    const double vol = b.volume();
    const double h = 0.5 * b.g11();
    auto m = run_chunks(seed, samples, 2, [&](std::mt19937_64& rng, std::size_t count, std::vector<Moments>& out) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        Vec a(b.n);
        for (std::size_t i = 0; i < count; ++i) {
            for (int j = 0; j < b.n; ++j) a[j] = u(rng);
            Vec yt = tail(b.G.transpose() * a);
            Fiber fb = fiber(b, yt);
            // Uniform P(B) points project to density L(y~)/Vol; reweight to Lebesgue on D(B).
            double w = vol / fb.length();
            double fv = eval_boundary(f, yt).value;
            double lo = fb.lo, hi = fb.hi;
            add(out[0], w * std::abs(fv - h));
            add(out[1], w * std::abs(std::clamp(fv, lo, hi) - std::clamp(h, lo, hi)));
        }
    });
    L1Gap g;
    g.raw = finish(m[0], seed);
    g.clipped = finish(m[1], seed);
    g.bound = std::ldexp(1.0, b.n) * vol / factorial(b.n);
    return g;
}

double corollary_bound(int n) {
    if (n < 2) throw DomainError("corollary bound needs n >= 2");
    const double e = std::numbers::e, pi = std::numbers::pi;
    return 1.0 / (std::sqrt(2.0 * pi * n) * std::pow(2.0, n * std::log2(n / e) - n));
}

McEstimate hyperplane_decoding_error_mc(const OrientedBasis& b, std::uint64_t seed, std::size_t samples) {
    if (b.n > kCornerCap) throw ResourceError("decoding error estimate capped at n=" + std::to_string(kCornerCap));
    const double h = 0.5 * b.g11();
    auto m = run_chunks(seed, samples, 1, [&](std::mt19937_64& rng, std::size_t count, std::vector<Moments>& out) {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        Vec a(b.n);
        for (std::size_t i = 0; i < count; ++i) {
            for (int j = 0; j < b.n; ++j) a[j] = u(rng);
            Vec y = b.G.transpose() * a;
            int z1 = cvp_corners(b, y).z[0];
            int guess = y[0] > h ? 1 : 0;
            add(out[0], z1 != guess ? 1.0 : 0.0);
        }
    });
    return finish(m[0], seed);
}

SeparationReport separation_report(int n, int M, int L, int w) {
    if (M < 1) throw DomainError("separation report needs M >= 1");
    if (n < 2 || L < 1 || w < 1) throw DomainError("separation report needs n >= 2, L >= 1, w >= 1");
    SeparationReport r;
    r.n = n;
    r.M = M;
    r.L = L;
    r.w = w;
    r.log2_K = static_cast<double>(M) * (n - 1);
    r.simplex_lower = simplex_volume_bounds(n).lower;
    r.log2_budget = (n - 1.0) * L * std::log2(static_cast<double>(w));
    r.threshold = L * std::log2(static_cast<double>(w)) + n;
    r.satisfied = M >= r.threshold;
    return r;
}

}  // namespace latfold
