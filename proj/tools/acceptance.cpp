// Acceptance checks: one PASS/FAIL line per criterion, details indented below it.
// Usage: acceptance [--criterion K]   (K in 1..10, default all)
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "latfold/analysis.hpp"
#include "latfold/relu_net.hpp"

using namespace latfold;

namespace {

constexpr double kFoldTol = 1e-9;
constexpr double kNetTol = 1e-9;
constexpr double kPeriodTol = 1e-9;
constexpr double kVolumeRelTol = 1e-12;
constexpr double kSigma = 3.0;
constexpr std::uint64_t kSeed = 42;
constexpr std::size_t kUniform = 10000;
constexpr std::size_t kMc = 1000000;
constexpr std::size_t kFoldLow = 200000;
constexpr std::size_t kFoldHigh = 400000;

struct Range {
    Family f;
    int lo, hi;
};

const std::vector<Range> kAll = {
    {Family::An, 2, 8}, {Family::DnConstA, 2, 8}, {Family::DnSecond, 2, 8}, {Family::En, 6, 8}};

struct Outcome {
    bool pass = true;
    std::vector<std::string> details;
    std::string summary;

    void note(const char* fmt, auto... args) {
        char buf[512];
        std::snprintf(buf, sizeof buf, fmt, args...);
        details.emplace_back(buf);
    }
};

std::string name(const FamilyId& id) { return family_name(id.family) + " n=" + std::to_string(id.n); }

Outcome c1() {
    Outcome o;
    const std::vector<Range> ranges = {{Family::An, 2, 8}, {Family::DnConstA, 3, 8}, {Family::DnSecond, 3, 8}};
    int checked = 0;
    for (auto r : ranges)
        for (int n = r.lo; n <= r.hi; ++n) {
            FamilyId id{r.f, n};
            long oracle = count_pieces_oracle(build_boundary(orient_basis(id)));
            long formula = count_pieces_formula(id).value;
            ++checked;
            if (oracle != formula) {
                o.pass = false;
                o.note("%s: oracle %ld != closed form %ld", name(id).c_str(), oracle, formula);
            }
        }
    o.summary = "piece-count oracle equals closed form on " + std::to_string(checked) + " instances";
    return o;
}

Outcome c2() {
    Outcome o;
    for (int n = 6; n <= 8; ++n) {
        FamilyId id{Family::En, n};
        long oracle = count_pieces_oracle(build_boundary(orient_basis(id)));
        auto fm = count_pieces_formula(id);
        bool lit = oracle == fm.value, alt = oracle == *fm.alternate;
        o.note("en n=%d: oracle %ld, binom(n-3,n-i) reading %ld, binom(n-3,i) reading %ld -> %s", n, oracle, fm.value,
               *fm.alternate, lit == alt ? "ambiguous" : (lit ? "binom(n-3,n-i)" : "binom(n-3,i)"));
        if (lit == alt) o.pass = false;
    }
    o.summary = "E_n oracle matches exactly one binomial reading";
    return o;
}

Outcome c3() {
    Outcome o;
    double worst = 0.0;
    for (auto r : kAll)
        for (int n = r.lo; n <= r.hi; ++n) {
            FamilyId id{r.f, n};
            auto b = orient_basis(id);
            double dev = verify_fold_invariance(b, build_boundary(b), build_schedule(id, b), kSeed, kUniform);
            worst = std::max(worst, dev);
            if (dev > kFoldTol) {
                o.pass = false;
                o.note("%s: max |f - f o F| = %.3e", name(id).c_str(), dev);
            }
        }
    char buf[128];
    std::snprintf(buf, sizeof buf, "fold invariance, worst deviation %.2e (tol %.0e)", worst, kFoldTol);
    o.summary = buf;
    return o;
}

Outcome c4() {
    Outcome o;
    const std::vector<Range> ranges = {{Family::DnConstA, 3, 8}, {Family::DnSecond, 3, 8}, {Family::En, 6, 8}};
    for (auto r : ranges)
        for (int n = r.lo; n <= r.hi; ++n) {
            FamilyId id{r.f, n};
            auto b = orient_basis(id);
            auto f = build_boundary(b);
            auto rep = folded_piece_count_oracle(b, f, build_schedule(id, b), kSeed, kFoldLow, kFoldHigh);
            bool stable = rep.sampled_low == rep.sampled_high && rep.sampled_high == rep.corner_pairs;
            bool ok = stable;
            if (r.f == Family::DnConstA) ok = ok && rep.corner_pairs == *rep.stated;
            if (!ok) o.pass = false;
            if (rep.sketch)
                o.note("%s: measured %ld (samples %ld/%ld), stated %ld, sketch %ld%s", name(id).c_str(), rep.corner_pairs,
                       rep.sampled_low, rep.sampled_high, *rep.stated, *rep.sketch, ok ? "" : "  <- unstable");
            else
                o.note("%s: measured %ld (samples %ld/%ld), stated %ld%s", name(id).c_str(), rep.corner_pairs,
                       rep.sampled_low, rep.sampled_high, *rep.stated, ok ? "" : "  <- mismatch");
        }
    o.summary = "folded piece counts (D_n Construction A must equal 2n-1; others stable and enumeration-consistent)";
    return o;
}

Outcome c5() {
    Outcome o;
    double worst = 0.0;
    int nets = 0;
    for (auto r : kAll)
        for (int n = std::max(r.lo, 2); n <= r.hi; ++n) {
            FamilyId id{r.f, n};
            auto b = orient_basis(id);
            auto f = build_boundary(b);
            auto s = build_schedule(id, b);
            for (int M = 0; M <= 2; ++M) {
                auto syn = synthesize(b, s, f, M);
                auto st = stats(syn.net);
                double dev = 0.0;
                for (const auto& y : sample_extended(b, M, kSeed + M, kUniform))
                    dev = std::max(dev, std::abs(eval_network(syn.net, b, y) - eval_extended(b, f, y, M)));
                worst = std::max(worst, dev);
                ++nets;
                if (dev > kNetTol || st.depth != 3 * M + syn.base_depth) {
                    o.pass = false;
                    o.note("%s M=%d: deviation %.3e, depth %d vs 3M+L_base %d", name(id).c_str(), M, dev, st.depth,
                           3 * M + syn.base_depth);
                }
            }
        }
    char buf[160];
    std::snprintf(buf, sizeof buf, "network equivalence on %d networks, worst deviation %.2e, depth = 3M + L_base", nets,
                  worst);
    o.summary = buf;
    return o;
}

Outcome c6() {
    Outcome o;
    long total = 0, ambiguous = 0;
    for (int n = 2; n <= 10; ++n) {
        auto b = orient_basis(FamilyId{Family::An, n});
        auto f = build_boundary(b);
        long bad = 0;
        for (const auto& y : sample_parallelotope(b, kSeed + n, kUniform)) {
            auto d = decode_bit(f, y);
            if (d == Decision::Ambiguous) {
                ++ambiguous;
                continue;
            }
            ++total;
            if ((d == Decision::One ? 1 : 0) != cvp_corners(b, y).z[0]) ++bad;
        }
        if (bad) {
            o.pass = false;
            o.note("an n=%d: %ld disagreements", n, bad);
        }
    }
    o.summary = "decode_bit vs nearest corner, " + std::to_string(total) + " decisions, " + std::to_string(ambiguous) +
                " in the ambiguity band";
    return o;
}

Outcome c7() {
    Outcome o;
    for (int n : {8, 12, 16}) {
        auto e = hyperplane_decoding_error_mc(orient_basis(FamilyId{Family::An, n}), kSeed, kMc);
        double bound = corollary_bound(n);
        bool ok = e.estimate + kSigma * e.stderr_ < bound;
        if (!ok) o.pass = false;
        o.note("an n=%d: error %.5f +/- %.1e, bound %.3e %s", n, e.estimate, e.stderr_, bound, ok ? "ok" : "exceeded");
    }
    o.summary = "hyperplane decoding error + 3 sigma below the closed-form bound";
    return o;
}

Outcome c8() {
    Outcome o;
    for (int n : {4, 6, 8}) {
        auto b = unit_volume(orient_basis(FamilyId{Family::An, n}));
        auto g = l1_gap_mc(b, build_boundary(b), kSeed, kMc);
        bool ok = g.raw.estimate + kSigma * g.raw.stderr_ < g.bound;
        if (!ok) o.pass = false;
        o.note("an n=%d: L1 %.5f +/- %.1e (clipped to P(B): %.5f), bound %.5f %s", n, g.raw.estimate, g.raw.stderr_,
               g.clipped.estimate, g.bound, ok ? "ok" : "exceeded");
    }
    o.summary = "unit-volume L1 gap + 3 sigma below 2^n Vol(P(B))/n!";
    return o;
}

Outcome c9() {
    Outcome o;
    for (int n = 3; n <= 8; ++n) {
        auto v = volume_report(n);
        bool ok = *v.exact >= v.lower * (1 - kVolumeRelTol) && *v.exact <= v.upper * (1 + kVolumeRelTol);
        if (!ok) o.pass = false;
        o.note("n=%d: %.6e in [%.6e, %.6e] %s", n, *v.exact, v.lower, v.upper, ok ? "ok" : "outside");
    }
    o.summary = "non-truncated simplex volume within [lower, upper]";
    return o;
}

Outcome c10() {
    Outcome o;
    double worst_shift = 0.0, worst_period = 0.0;
    for (auto r : kAll)
        for (int n = r.lo; n <= r.hi; ++n) {
            FamilyId id{r.f, n};
            auto b = orient_basis(id);
            auto f = build_boundary(b);
            for (int M = 1; M <= 3; ++M) {
                Network net;
                net.input_dim = n;
                for (int level = 1; level <= M; ++level) append(net, translation_block(b, level, M));
                for (const auto& y0 : sample_extended(b, M, kSeed + 10 * M, 1000)) {
                    Vec y = forward(net, y0);
                    auto red = reduce_to_parallelotope(b, y0, M);
                    worst_shift = std::max(worst_shift, (y - red.y).cwiseAbs().maxCoeff());
                    double period = std::abs(eval_boundary(f, tail(y)).value - eval_boundary(f, tail(red.y)).value);
                    worst_period = std::max(worst_period, period);
                }
            }
        }
    if (worst_shift > kPeriodTol || worst_period > kPeriodTol) o.pass = false;
    char buf[160];
    std::snprintf(buf, sizeof buf, "translation blocks vs floor oracle: max offset %.2e, periodicity %.2e (tol %.0e)",
                  worst_shift, worst_period, kPeriodTol);
    o.summary = buf;
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
            only = std::atoi(argv[++i]);
        } else {
            std::fprintf(stderr, "usage: acceptance [--criterion K]\n");
            return 2;
        }
    }
    const std::vector<std::function<Outcome()>> checks = {c1, c2, c3, c4, c5, c6, c7, c8, c9, c10};
    if (only < 0 || only > static_cast<int>(checks.size())) {
        std::fprintf(stderr, "criterion must be in 1..%zu\n", checks.size());
        return 2;
    }
    bool all = true;
    for (std::size_t k = 0; k < checks.size(); ++k) {
        if (only && static_cast<int>(k) + 1 != only) continue;
        auto t0 = std::chrono::steady_clock::now();
        Outcome o = checks[k]();
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %zu %s: %s [%.1fs]\n", k + 1, o.pass ? "PASS" : "FAIL", o.summary.c_str(), secs);
        for (const auto& d : o.details) std::printf("  %s\n", d.c_str());
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
