#include "latfold/boundary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "latfold/kernels.hpp"

namespace latfold {

namespace {

long binom(long n, long k) {
    if (k < 0 || n < 0 || k > n) return 0;
    long r = 1;
    for (long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

bool is_shell_step(const OrientedBasis& b, double min_norm, int x, int xp) {
    Vec d = Vec::Zero(b.n);
    for (int j = 0; j < b.n; ++j) {
        int dz = ((x >> j) & 1) - ((xp >> j) & 1);
        if (dz) d += dz * b.G.row(j).transpose();
    }
    return std::abs(d.squaredNorm() - min_norm) <= kGeomTol * std::max(1.0, min_norm);
}

}  // namespace

Vec tail(const Vec& y) { return y.tail(y.size() - 1); }

std::vector<int> neighbors_in_c0(const OrientedBasis& b, double min_norm, int corner) {
    if (!(corner & 1)) throw DomainError("neighbors_in_c0 expects a corner with z_1 = 1");
    std::vector<int> out;
    const int count = 1 << b.n;
    for (int xp = 0; xp < count; xp += 2)
        if (is_shell_step(b, min_norm, corner, xp)) out.push_back(xp);
    return out;
}

std::vector<int> neighbors_in_c0(const OrientedBasis& b, int corner) {
    return neighbors_in_c0(b, relevant_vectors(b).min_norm, corner);
}

BoundaryFunction build_boundary(const OrientedBasis& b) {
    if (b.n < 2) throw DomainError("boundary function needs n >= 2");
    if (b.n > kCornerCap) throw ResourceError("corner enumeration capped at n=" + std::to_string(kCornerCap));
    BoundaryFunction f;
    f.n = b.n;
    f.min_norm = relevant_vectors(b).min_norm;
    const int count = 1 << b.n;
    const double scale = std::max(1.0, std::sqrt(f.min_norm));
    for (int x = 1; x < count; x += 2) {
        auto nb = neighbors_in_c0(b, f.min_norm, x);
        if (nb.empty()) continue;
        Group g;
        g.corner = x;
        g.begin = static_cast<int>(f.members.size());
        Vec X = corner_x(b, x);
        for (int xp : nb) {
            Vec Xp = corner_x(b, xp);
            Membership m;
            m.group = static_cast<int>(f.groups.size());
            m.corner = x;
            m.neighbour = xp;
            m.v = X - Xp;
            m.p = 0.5 * (X.squaredNorm() - Xp.squaredNorm());
            if (std::abs(m.v[0]) <= kGeomTol)
                throw InternalError("bisector of corners " + std::to_string(x) + " and " +
                                    std::to_string(xp) + " is parallel to e_1");
            Vec key(b.n + 1);
            double nv = m.v.norm();
            key.head(b.n) = m.v / nv;
            key[b.n] = m.p / nv;
            for (int i = 0; i < b.n; ++i) {
                if (std::abs(key[i]) > kGeomTol) {
                    if (key[i] < 0) key = -key;
                    break;
                }
            }
            m.hyper = -1;
            for (std::size_t h = 0; h < f.hyperplanes.size(); ++h) {
                if ((f.hyperplanes[h] - key).cwiseAbs().maxCoeff() <= kGeomTol * scale) {
                    m.hyper = static_cast<int>(h);
                    break;
                }
            }
            if (m.hyper < 0) {
                m.hyper = static_cast<int>(f.hyperplanes.size());
                f.hyperplanes.push_back(key);
            }
            f.members.push_back(std::move(m));
        }
        g.end = static_cast<int>(f.members.size());
        f.groups.push_back(g);
    }
    // Caps: groups compared as sets of canonical hyperplanes.
    std::vector<std::vector<int>> sets(f.groups.size());
    for (std::size_t gi = 0; gi < f.groups.size(); ++gi) {
        auto& s = sets[gi];
        for (int j = f.groups[gi].begin; j < f.groups[gi].end; ++j) s.push_back(f.members[j].hyper);
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        f.groups[gi].cap = static_cast<int>(gi);
        for (std::size_t gj = 0; gj < gi; ++gj) {
            if (sets[gj] == s) {
                f.groups[gi].cap = static_cast<int>(gj);
                break;
            }
        }
    }
    const int m = static_cast<int>(f.members.size());
    f.A.resize(m, b.n - 1);
    f.c.resize(m);
    for (int j = 0; j < m; ++j) {
        const auto& mb = f.members[j];
        f.A.row(j) = -mb.v.tail(b.n - 1).transpose() / mb.v[0];
        f.c[j] = mb.p / mb.v[0];
    }
    return f;
}

BoundaryValue eval_boundary(const BoundaryFunction& f, const Vec& yt) {
    thread_local std::vector<double> h;
    h.resize(f.members.size());
    kernels::active().affine(f.A.data(), f.c.data(), yt.data(), h.data(), f.members.size(), f.n - 1);
    BoundaryValue out{std::numeric_limits<double>::infinity(), -1};
    for (const auto& g : f.groups) {
        int arg = g.begin;
        for (int j = g.begin + 1; j < g.end; ++j)
            if (h[j] > h[arg]) arg = j;
        if (h[arg] < out.value - 1e-12) out = {h[arg], arg};
    }
    return out;
}

PieceKey piece_key(const BoundaryFunction& f, int membership) {
    const auto& m = f.members[membership];
    return {f.groups[m.group].cap, m.hyper};
}

std::set<PieceKey> all_pieces(const BoundaryFunction& f) {
    std::set<PieceKey> out;
    for (std::size_t j = 0; j < f.members.size(); ++j) out.insert(piece_key(f, static_cast<int>(j)));
    return out;
}

long count_pieces_oracle(const BoundaryFunction& f) { return static_cast<long>(all_pieces(f).size()); }

long count_distinct_hyperplanes(const BoundaryFunction& f) { return static_cast<long>(f.hyperplanes.size()); }

PieceFormula count_pieces_formula(const FamilyId& id) {
    require_valid(id);
    const long n = id.n;
    PieceFormula out;
    switch (id.family) {
        case Family::An:
            for (long i = 1; i <= n; ++i) out.value += i * binom(n - 1, n - i);
            break;
        case Family::DnConstA:
            for (long i = 0; i <= n - 2; ++i) out.value += ((n - 1 - i) + binom(n - 1 - i, 2)) * binom(n - 1, i);
            break;
        case Family::DnSecond:
            for (long i = 0; i <= n - 2; ++i) {
                long k = n - 2 - i;
                out.value += ((1 + k) + (1 + 2 * k + binom(k, 2))) * binom(n - 2, i);
            }
            out.value -= 1;
            break;
        case Family::En: {
            long lit = 0, alt = 0;
            for (long i = 0; i <= n - 3; ++i) {
                long k = n - 3 - i;
                long t = (1 + k) + 2 * (1 + 2 * k + binom(k, 2)) + (1 + 3 * k + 3 * binom(k, 2) + binom(k, 3));
                lit += t * binom(n - 3, n - i);
                alt += t * binom(n - 3, i);
            }
            out.value = lit - 3;
            out.alternate = alt - 3;
            break;
        }
    }
    return out;
}

Fiber fiber(const OrientedBasis& b, const Vec& yt) {
    Vec y0 = Vec::Zero(b.n);
    y0.tail(b.n - 1) = yt;
    Vec a0 = alpha_coords(b, y0);
    Fiber fb{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (int i = 0; i < b.n; ++i) {
        double ci = b.Ginv(0, i);
        if (std::abs(ci) < 1e-14) {
            if (a0[i] < 0.0 || a0[i] > 1.0) return {1.0, 0.0};
            continue;
        }
        double t1 = -a0[i] / ci, t2 = (1.0 - a0[i]) / ci;
        fb.lo = std::max(fb.lo, std::min(t1, t2));
        fb.hi = std::min(fb.hi, std::max(t1, t2));
    }
    return fb;
}

bool in_domain(const OrientedBasis& b, const Vec& yt) { return fiber(b, yt).length() > kGeomTol; }

namespace {

std::pair<Vec, Vec> domain_box(const OrientedBasis& b) {
    const int count = 1 << b.n;
    Vec lo = Vec::Constant(b.n - 1, std::numeric_limits<double>::infinity());
    Vec hi = -lo;
    for (int i = 0; i < count; ++i) {
        Vec t = tail(corner_x(b, i));
        lo = lo.cwiseMin(t);
        hi = hi.cwiseMax(t);
    }
    return {lo, hi};
}

}  // namespace

std::set<PieceKey> sampled_pieces_grid(const OrientedBasis& b, const BoundaryFunction& f, int density) {
    if (density < 10) throw DomainError("grid density must be >= 10 per axis");
    const int d = b.n - 1;
    if (std::pow(static_cast<double>(density), d) > 5e7) throw ResourceError("grid too large");
    auto [lo, hi] = domain_box(b);
    std::set<PieceKey> out;
    std::vector<int> idx(d, 0);
    Vec yt(d);
    while (true) {
        for (int k = 0; k < d; ++k) yt[k] = lo[k] + (hi[k] - lo[k]) * idx[k] / (density - 1);
        if (in_domain(b, yt)) out.insert(piece_key(f, eval_boundary(f, yt).active));
        int k = 0;
        while (k < d && ++idx[k] == density) idx[k++] = 0;
        if (k == d) break;
    }
    return out;
}

long count_pieces_sampled(const OrientedBasis& b, const BoundaryFunction& f, int density) {
    return static_cast<long>(sampled_pieces_grid(b, f, density).size());
}

std::set<PieceKey> sampled_pieces_random(const OrientedBasis& b, const BoundaryFunction& f,
                                         std::uint64_t seed, std::size_t samples) {
    std::set<PieceKey> out;
    for (const auto& y : sample_parallelotope(b, seed, samples)) out.insert(piece_key(f, eval_boundary(f, tail(y)).active));
    return out;
}

std::vector<Vec> sample_domain(const OrientedBasis& b, std::uint64_t seed, std::size_t count) {
    auto [lo, hi] = domain_box(b);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Vec> out;
    out.reserve(count);
    Vec yt(b.n - 1);
    while (out.size() < count) {
        for (int k = 0; k < b.n - 1; ++k) yt[k] = lo[k] + (hi[k] - lo[k]) * u(rng);
        if (in_domain(b, yt)) out.push_back(yt);
    }
    return out;
}

Decision decode_bit(const BoundaryFunction& f, const Vec& y, double tol) {
    double d = y[0] - eval_boundary(f, tail(y)).value;
    if (d > tol) return Decision::One;
    if (d < -tol) return Decision::Zero;
    return Decision::Ambiguous;
}

}  // namespace latfold
