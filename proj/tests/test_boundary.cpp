#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "doctest.h"
#include "latfold/boundary.hpp"

using namespace latfold;

namespace {

struct Frozen {
    Family f;
    int n;
    long memberships, pieces, hyperplanes;
};

// Values obtained from an independent prototype of the neighbour enumeration.
const Frozen kFrozen[] = {
    {Family::An, 2, 3, 3, 3},           {Family::An, 3, 8, 8, 5},
    {Family::An, 4, 20, 20, 7},         {Family::An, 5, 48, 48, 9},
    {Family::An, 6, 112, 112, 11},      {Family::An, 7, 256, 256, 13},
    {Family::An, 8, 576, 576, 15},      {Family::DnConstA, 3, 5, 5, 5},
    {Family::DnConstA, 4, 18, 18, 12},  {Family::DnConstA, 5, 56, 56, 22},
    {Family::DnConstA, 6, 160, 160, 35}, {Family::DnConstA, 7, 432, 432, 51},
    {Family::DnConstA, 8, 1120, 1120, 70}, {Family::DnSecond, 3, 7, 6, 5},
    {Family::DnSecond, 4, 21, 20, 12},  {Family::DnSecond, 5, 58, 57, 22},
    {Family::DnSecond, 6, 152, 151, 35}, {Family::DnSecond, 7, 384, 383, 51},
    {Family::DnSecond, 8, 944, 943, 70}, {Family::En, 6, 159, 156, 50},
    {Family::En, 7, 448, 445, 95},      {Family::En, 8, 1208, 1205, 161},
};

// Direct min-of-max evaluation from the stored (v, p) pairs.
double direct_f(const BoundaryFunction& f, const Vec& yt) {
    double best = INFINITY;
    for (const auto& g : f.groups) {
        double mx = -INFINITY;
        for (int j = g.begin; j < g.end; ++j) {
            const auto& m = f.members[j];
            mx = std::max(mx, (m.p - m.v.tail(f.n - 1).dot(yt)) / m.v[0]);
        }
        best = std::min(best, mx);
    }
    return best;
}

}  // namespace

TEST_CASE("neighbour sets") {
    auto a2 = orient_basis(FamilyId{Family::An, 2});
    CHECK(neighbors_in_c0(a2, 1) == std::vector<int>{0, 2});
    auto d3 = orient_basis(FamilyId{Family::DnSecond, 3});
    CHECK(neighbors_in_c0(d3, 1) == std::vector<int>{0, 4});      // 0 and b_3
    CHECK(neighbors_in_c0(d3, 3) == std::vector<int>{2, 4, 6});   // b_2, b_3, b_2 + b_3
    CHECK_THROWS_AS(neighbors_in_c0(d3, 2), DomainError);
}

TEST_CASE("group structure") {
    auto a2 = build_boundary(orient_basis(FamilyId{Family::An, 2}));
    REQUIRE(a2.groups.size() == 2);
    CHECK(a2.groups[0].corner == 1);
    CHECK(a2.groups[1].corner == 3);
    auto a3 = build_boundary(orient_basis(FamilyId{Family::An, 3}));
    CHECK(a3.groups.size() == 4);
    CHECK(a3.members.size() == 8);
    // D_n Construction A, n = 3: two 1-member caps and one 3-member cap.
    auto d3 = build_boundary(orient_basis(FamilyId{Family::DnConstA, 3}));
    std::vector<int> sizes;
    for (const auto& g : d3.groups) sizes.push_back(g.end - g.begin);
    std::sort(sizes.begin(), sizes.end());
    CHECK(sizes == std::vector<int>{1, 1, 3});
    for (const auto& g : d3.groups) {
        if (g.corner == 1) {
            std::vector<int> nb;
            for (int j = g.begin; j < g.end; ++j) nb.push_back(d3.members[j].neighbour);
            CHECK(nb == std::vector<int>{2, 4, 6});
        } else {
            REQUIRE(g.end - g.begin == 1);
            CHECK(d3.members[g.begin].neighbour == 6);
        }
    }
}

TEST_CASE("frozen membership, piece and hyperplane counts") {
    for (const auto& fr : kFrozen) {
        CAPTURE(family_name(fr.f));
        CAPTURE(fr.n);
        auto f = build_boundary(orient_basis(FamilyId{fr.f, fr.n}));
        CHECK(static_cast<long>(f.members.size()) == fr.memberships);
        CHECK(count_pieces_oracle(f) == fr.pieces);
        CHECK(count_distinct_hyperplanes(f) == fr.hyperplanes);
        CHECK(f.groups.size() <= (1u << (fr.n - 1)));
        for (const auto& g : f.groups) CHECK(g.end > g.begin);
    }
}

TEST_CASE("closed forms agree with the oracle") {
    CHECK(count_pieces_formula({Family::An, 3}).value == 8);
    CHECK(count_pieces_formula({Family::DnConstA, 3}).value == 5);
    CHECK(count_pieces_formula({Family::DnSecond, 3}).value == 6);
    for (const auto& fr : kFrozen) {
        auto fm = count_pieces_formula({fr.f, fr.n});
        if (fr.f == Family::En) {
            REQUIRE(fm.alternate.has_value());
            CHECK(*fm.alternate == fr.pieces);
            CHECK(fm.value != fr.pieces);
        } else {
            CHECK(!fm.alternate.has_value());
            CHECK(fm.value == fr.pieces);
        }
    }
    CHECK(count_pieces_formula({Family::En, 6}).value == 1);
    CHECK(count_pieces_formula({Family::En, 7}).value == 25);
    CHECK(count_pieces_formula({Family::En, 8}).value == 122);
}

TEST_CASE("bisectors pass through midpoints and corners sit above their caps") {
    for (const auto& fr : kFrozen) {
        auto b = orient_basis(FamilyId{fr.f, fr.n});
        auto f = build_boundary(b);
        for (const auto& m : f.members) {
            Vec x = corner_x(b, m.corner), xp = corner_x(b, m.neighbour);
            CHECK(std::abs((0.5 * (x + xp)).dot(m.v) - m.p) <= 1e-9);
            CHECK((x - xp).squaredNorm() == doctest::Approx(f.min_norm));
        }
        for (const auto& g : f.groups) {
            Vec x = corner_x(b, g.corner);
            double cap = -INFINITY;
            for (int j = g.begin; j < g.end; ++j) cap = std::max(cap, f.A.row(j).dot(tail(x)) + f.c[j]);
            CHECK(x[0] > cap);
        }
    }
}

TEST_CASE("evaluation matches a direct min-of-max") {
    std::mt19937_64 rng(1);
    for (const auto& fr : kFrozen) {
        auto b = orient_basis(FamilyId{fr.f, fr.n});
        auto f = build_boundary(b);
        for (const auto& yt : sample_domain(b, fr.n, 200)) {
            auto v = eval_boundary(f, yt);
            CHECK(v.value == doctest::Approx(direct_f(f, yt)).epsilon(1e-12));
            const auto& m = f.members[v.active];
            CHECK((m.p - m.v.tail(fr.n - 1).dot(yt)) / m.v[0] == doctest::Approx(v.value).epsilon(1e-12));
        }
    }
}

TEST_CASE("A_2 at the origin sits on the bisector of b_1 and 0") {
    auto b = orient_basis(FamilyId{Family::An, 2});
    auto f = build_boundary(b);
    Vec yt = Vec::Zero(1);
    // y = (t, 0) on the bisector: t g11 = |b_1|^2 / 2.
    double t = 0.5 * b.gram(0, 0) / b.g11();
    CHECK(eval_boundary(f, yt).value == doctest::Approx(t));
}

TEST_CASE("active midpoints lie on f") {
    for (int n = 2; n <= 5; ++n) {
        auto b = orient_basis(FamilyId{Family::An, n});
        auto f = build_boundary(b);
        for (std::size_t j = 0; j < f.members.size(); ++j) {
            const auto& m = f.members[j];
            Vec mid = 0.5 * (corner_x(b, m.corner) + corner_x(b, m.neighbour));
            CHECK(eval_boundary(f, tail(mid)).value == doctest::Approx(mid[0]).epsilon(1e-12));
        }
    }
}

TEST_CASE("A_3 boundary stays within the slab") {
    auto b = orient_basis(FamilyId{Family::An, 3});
    auto f = build_boundary(b);
    for (const auto& yt : sample_domain(b, 4, 1000)) {
        double v = eval_boundary(f, yt).value;
        CHECK(v >= 0.0);
        CHECK(v <= b.g11());
    }
}

TEST_CASE("Lipschitz bound") {
    std::mt19937_64 rng(2);
    for (const auto& fr : kFrozen) {
        auto b = orient_basis(FamilyId{fr.f, fr.n});
        auto f = build_boundary(b);
        double L = f.A.rowwise().norm().maxCoeff();
        auto pts = sample_domain(b, 77, 200);
        for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
            double df = std::abs(eval_boundary(f, pts[i]).value - eval_boundary(f, pts[i + 1]).value);
            CHECK(df <= L * (pts[i] - pts[i + 1]).norm() + 1e-12);
        }
    }
}

TEST_CASE("grid-sampled piece counts") {
    auto a2 = orient_basis(FamilyId{Family::An, 2});
    CHECK(count_pieces_sampled(a2, build_boundary(a2), 200) == 3);
    auto a3 = orient_basis(FamilyId{Family::An, 3});
    CHECK(count_pieces_sampled(a3, build_boundary(a3), 60) == 8);
    auto d3 = orient_basis(FamilyId{Family::DnSecond, 3});
    CHECK(count_pieces_sampled(d3, build_boundary(d3), 60) == 6);
    CHECK_THROWS_AS(count_pieces_sampled(a2, build_boundary(a2), 5), DomainError);
}

TEST_CASE("sampled pieces never exceed the oracle") {
    for (const auto& fr : kFrozen) {
        if (fr.n > 6) continue;
        auto b = orient_basis(FamilyId{fr.f, fr.n});
        auto f = build_boundary(b);
        auto s = sampled_pieces_random(b, f, 3, 20000);
        auto all = all_pieces(f);
        for (const auto& k : s) CHECK(all.count(k) == 1);
        CHECK(static_cast<long>(s.size()) <= count_pieces_oracle(f));
    }
}

TEST_CASE("each piece is one connected region on a fine grid (n <= 3)") {
    // Flood fill over grid cells labelled by piece key; a piece split in two would
    // show up as more components than keys. Cell centres are offset off the
    // symmetric lines, where members of one cap tie exactly.
    for (auto id : {FamilyId{Family::An, 2}, FamilyId{Family::An, 3}, FamilyId{Family::DnConstA, 3},
                    FamilyId{Family::DnSecond, 3}}) {
        CAPTURE(family_name(id.family));
        CAPTURE(id.n);
        auto b = orient_basis(id);
        auto f = build_boundary(b);
        const int d = id.n - 1, N = id.n == 2 ? 2000 : 200;
        Vec lo = Vec::Constant(d, INFINITY), hi = -lo;
        for (int i = 0; i < (1 << id.n); ++i) {
            lo = lo.cwiseMin(tail(corner_x(b, i)));
            hi = hi.cwiseMax(tail(corner_x(b, i)));
        }
        const long cells = d == 1 ? N : static_cast<long>(N) * N;
        std::vector<int> label(cells, -1);
        std::map<PieceKey, int> ids;
        for (long c = 0; c < cells; ++c) {
            Vec yt(d);
            yt[0] = lo[0] + (hi[0] - lo[0]) * ((c % N) + 0.381966) / N;
            if (d == 2) yt[1] = lo[1] + (hi[1] - lo[1]) * ((c / N) + 0.618034) / N;
            if (!in_domain(b, yt)) continue;
            auto key = piece_key(f, eval_boundary(f, yt).active);
            label[c] = ids.emplace(key, static_cast<int>(ids.size())).first->second;
        }
        std::vector<char> seen(cells, 0);
        int components = 0;
        for (long c = 0; c < cells; ++c) {
            if (label[c] < 0 || seen[c]) continue;
            ++components;
            std::vector<long> stack{c};
            seen[c] = 1;
            while (!stack.empty()) {
                long cur = stack.back();
                stack.pop_back();
                long x = cur % N, y = cur / N;
                const long nb[8][2] = {{x - 1, y},     {x + 1, y},     {x, y - 1},     {x, y + 1},
                                       {x - 1, y - 1}, {x + 1, y - 1}, {x - 1, y + 1}, {x + 1, y + 1}};
                for (auto& q : nb) {
                    if (q[0] < 0 || q[0] >= N || q[1] < 0 || (d == 1 ? q[1] > 0 : q[1] >= N)) continue;
                    long k = q[1] * N + q[0];
                    if (!seen[k] && label[k] == label[cur]) {
                        seen[k] = 1;
                        stack.push_back(k);
                    }
                }
            }
        }
        CHECK(components == static_cast<int>(ids.size()));
        CHECK(static_cast<long>(ids.size()) == count_pieces_oracle(f));
    }
}

TEST_CASE("fiber and domain membership") {
    auto b = orient_basis(FamilyId{Family::En, 6});
    for (int i = 0; i < 64; i += 5) {
        Vec yt = tail(corner_x(b, i));
        Fiber fb = fiber(b, yt);
        CHECK(fb.lo <= fb.hi + 1e-12);
    }
    Vec centre = tail(0.5 * b.G.colwise().sum().transpose());
    CHECK(in_domain(b, centre));
    CHECK(!in_domain(b, Vec::Constant(5, 100.0)));
    for (const auto& yt : sample_domain(b, 1, 100)) CHECK(in_domain(b, yt));
}

TEST_CASE("decode examples") {
    auto b = orient_basis(FamilyId{Family::An, 3});
    auto f = build_boundary(b);
    CHECK(decode_bit(f, b.G.row(0).transpose()) == Decision::One);
    CHECK(decode_bit(f, Vec::Zero(3)) == Decision::Zero);
    Vec on = Vec::Zero(3);
    on[0] = eval_boundary(f, tail(on)).value + 1e-9;
    CHECK(decode_bit(f, on) == Decision::Ambiguous);
}

TEST_CASE("decode agrees with the nearest corner outside the band") {
    for (int n = 2; n <= 6; ++n) {
        auto b = orient_basis(FamilyId{Family::An, n});
        auto f = build_boundary(b);
        int bad = 0;
        for (const auto& y : sample_parallelotope(b, 50 + n, 10000)) {
            auto d = decode_bit(f, y);
            if (d == Decision::Ambiguous) continue;
            bad += (d == Decision::One ? 1 : 0) != cvp_corners(b, y).z[0];
        }
        CHECK(bad == 0);
    }
}
