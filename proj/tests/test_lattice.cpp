#include <algorithm>
#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "latfold/lattice.hpp"

using namespace latfold;

namespace {

const std::vector<FamilyId> kInstances = [] {
    std::vector<FamilyId> v;
    for (int n = 1; n <= 10; ++n) v.push_back({Family::An, n});
    for (int n = 2; n <= 8; ++n) v.push_back({Family::DnConstA, n});
    for (int n = 2; n <= 8; ++n) v.push_back({Family::DnSecond, n});
    for (int n = 6; n <= 8; ++n) v.push_back({Family::En, n});
    return v;
}();

// Plain scan over {0,1}^n in lexicographic order (z_1 most significant), strict improvement.
std::vector<int> naive_nearest_corner(const OrientedBasis& b, const Vec& y) {
    const int n = b.n;
    std::vector<int> best;
    double best_d = INFINITY;
    for (int code = 0; code < (1 << n); ++code) {
        std::vector<int> z(n);
        for (int j = 0; j < n; ++j) z[j] = (code >> (n - 1 - j)) & 1;
        Vec x = Vec::Zero(n);
        for (int j = 0; j < n; ++j) x += z[j] * b.G.row(j).transpose();
        double d = (y - x).squaredNorm();
        if (d < best_d) {
            best_d = d;
            best = z;
        }
    }
    return best;
}

// Unpruned enumeration of the minimal shell over [-r, r]^n.
std::set<std::vector<int>> naive_shell(const OrientedBasis& b, int r) {
    const int n = b.n, side = 2 * r + 1;
    long total = 1;
    for (int i = 0; i < n; ++i) total *= side;
    double best = INFINITY;
    std::set<std::vector<int>> out;
    for (long code = 0; code < total; ++code) {
        std::vector<int> z(n);
        long c = code;
        bool zero = true;
        for (int j = 0; j < n; ++j) {
            z[j] = static_cast<int>(c % side) - r;
            c /= side;
            zero = zero && z[j] == 0;
        }
        if (zero) continue;
        Vec zv(n);
        for (int j = 0; j < n; ++j) zv[j] = z[j];
        double q = (b.G.transpose() * zv).squaredNorm();
        if (q < best - 1e-9) {
            best = q;
            out.clear();
        }
        if (std::abs(q - best) <= 1e-9) out.insert(z);
    }
    return out;
}

}  // namespace

TEST_CASE("gram matrices of the four families") {
    Mat a2(2, 2);
    a2 << 2, 1, 1, 2;
    CHECK(build_gram({Family::An, 2}) == a2);
    Mat d3(3, 3);
    d3 << 4, 2, 2, 2, 2, 1, 2, 1, 2;
    CHECK(build_gram({Family::DnConstA, 3}) == d3);
    Mat s3(3, 3);
    s3 << 2, 0, 1, 0, 2, 1, 1, 1, 2;
    CHECK(build_gram({Family::DnSecond, 3}) == s3);
    Mat e6 = build_gram({Family::En, 6});
    CHECK(e6(0, 1) == 0);
    CHECK(e6(0, 2) == 0);
    CHECK(e6(2, 0) == 0);
    CHECK(e6(1, 2) == 1);
    CHECK(e6.diagonal().minCoeff() == 2);
}

TEST_CASE("family ranges are enforced") {
    CHECK_THROWS_AS(build_gram({Family::En, 5}), DomainError);
    CHECK_THROWS_AS(build_gram({Family::En, 9}), DomainError);
    CHECK_THROWS_AS(build_gram({Family::An, 0}), DomainError);
    CHECK_THROWS_AS(build_gram({Family::DnConstA, 1}), DomainError);
    CHECK_THROWS_AS(build_gram({Family::DnSecond, 1}), DomainError);
    CHECK_NOTHROW(build_gram({Family::An, 1}));
    CHECK(parse_family("dn-second") == Family::DnSecond);
    CHECK(!parse_family("e8").has_value());
}

TEST_CASE("orientation reproduces the gram matrix with b_2..b_n in e_1-perp") {
    for (const auto& id : kInstances) {
        CAPTURE(family_name(id.family));
        CAPTURE(id.n);
        auto b = orient_basis(id);
        CHECK((b.G * b.G.transpose() - b.gram).cwiseAbs().maxCoeff() <= 1e-9);
        CHECK(b.g11() > 0.0);
        for (int j = 1; j < id.n; ++j) CHECK(std::abs(b.G(j, 0)) <= 1e-12);
        CHECK(b.G.determinant() == doctest::Approx(std::sqrt(b.gram.determinant())).epsilon(1e-12));
        CHECK((b.G * b.Ginv - Mat::Identity(id.n, id.n)).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("orientation examples") {
    auto a2 = orient_basis(FamilyId{Family::An, 2});
    CHECK(a2.G(1, 0) == 0.0);
    CHECK(a2.G(1, 1) == doctest::Approx(std::sqrt(2.0)));
    auto id2 = orient_basis(Mat::Identity(2, 2));
    CHECK((id2.G * id2.G.transpose() - Mat::Identity(2, 2)).norm() < 1e-15);
    CHECK(id2.G(1, 0) == 0.0);
    CHECK(id2.G(1, 1) == 1.0);
    Mat bad(2, 2);
    bad << 1, 2, 2, 1;
    CHECK_THROWS_AS(orient_basis(bad), InternalError);
    Mat asym(2, 2);
    asym << 2, 1, 0, 2;
    CHECK_THROWS_AS(orient_basis(asym), DomainError);
}

TEST_CASE("unit-volume rescale") {
    for (int n = 2; n <= 10; ++n) {
        auto b = unit_volume(orient_basis(FamilyId{Family::An, n}));
        CHECK(b.volume() == doctest::Approx(1.0).epsilon(1e-9));
        // Same as scaling the Gram matrix by (n+1)^(-1/n).
        auto c = orient_basis(build_gram({Family::An, n}) * std::pow(n + 1.0, -1.0 / n));
        CHECK((b.G - c.G).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("corner enumeration") {
    auto a2 = orient_basis(FamilyId{Family::An, 2});
    auto cs = enumerate_corners(a2);
    REQUIRE(cs.all.size() == 4);
    CHECK(cs.all[0].x.norm() == 0.0);
    CHECK((cs.all[1].x - a2.G.row(0).transpose()).norm() < 1e-15);
    CHECK((cs.all[2].x - a2.G.row(1).transpose()).norm() < 1e-15);
    CHECK((cs.all[3].x - (a2.G.row(0) + a2.G.row(1)).transpose()).norm() < 1e-15);
    CHECK(enumerate_corners(orient_basis(FamilyId{Family::An, 3})).c1.size() == 4);
    auto e6 = enumerate_corners(orient_basis(FamilyId{Family::En, 6}));
    CHECK(e6.c1.size() == 32);
    CHECK(e6.c0.size() == 32);
    CHECK(e6.all.size() == 64);
    // Adding b_1 maps C^0 onto C^1.
    for (int x : e6.c0) {
        CHECK(e6.all[x].z[0] == 0);
        CHECK(e6.all[x + 1].z[0] == 1);
    }
    CHECK_THROWS_AS(enumerate_corners(orient_basis(FamilyId{Family::An, 4}), 3), ResourceError);
}

TEST_CASE("minimal shell sizes") {
    auto a2 = relevant_vectors(orient_basis(FamilyId{Family::An, 2}));
    CHECK(a2.vectors.size() == 6);
    CHECK(a2.min_norm == doctest::Approx(2.0));
    CHECK(relevant_vectors(orient_basis(FamilyId{Family::DnConstA, 4})).vectors.size() == 24);
    CHECK(relevant_vectors(orient_basis(FamilyId{Family::DnSecond, 4})).vectors.size() == 24);
    CHECK(relevant_vectors(orient_basis(FamilyId{Family::En, 6})).vectors.size() == 72);
    CHECK(relevant_vectors(orient_basis(FamilyId{Family::En, 7})).vectors.size() == 126);
    CHECK(relevant_vectors(orient_basis(FamilyId{Family::En, 8})).vectors.size() == 240);
    CHECK(relevant_vectors(orient_basis(FamilyId{Family::An, 8})).vectors.size() == 72);
}

TEST_CASE("shell is stable in r, closed under negation, and matches unpruned enumeration") {
    for (const auto& id : kInstances) {
        if (id.n > 8) continue;
        CAPTURE(family_name(id.family));
        CAPTURE(id.n);
        auto b = orient_basis(id);
        auto s3 = relevant_vectors(b, 3), s4 = relevant_vectors(b, 4);
        REQUIRE(s3.vectors.size() == s4.vectors.size());
        std::set<std::vector<int>> zs;
        for (const auto& v : s3.vectors) {
            zs.insert(v.z);
            CHECK(v.x.squaredNorm() == doctest::Approx(s3.min_norm));
        }
        for (const auto& v : s4.vectors) CHECK(zs.count(v.z) == 1);
        for (const auto& z : zs) {
            auto neg = z;
            for (auto& c : neg) c = -c;
            CHECK(zs.count(neg) == 1);
        }
        if (id.n <= 5) CHECK(naive_shell(b, 2) == zs);
    }
}

TEST_CASE("nearest-corner examples") {
    auto b = orient_basis(FamilyId{Family::An, 4});
    CHECK(cvp_corners(b, Vec::Zero(4)).z == std::vector<int>{0, 0, 0, 0});
    CHECK(cvp_corners(b, b.G.row(0).transpose()).z == std::vector<int>{1, 0, 0, 0});
    Vec mid = 0.5 * b.G.row(0).transpose() + 0.01 * b.G.row(0).transpose();
    CHECK(cvp_corners(b, mid).z == std::vector<int>{1, 0, 0, 0});
    // Exact tie on the midpoint: lexicographically smallest z.
    CHECK(cvp_corners(b, 0.5 * b.G.row(0).transpose()).z == std::vector<int>{0, 0, 0, 0});
}

TEST_CASE("branch and bound, SIMD scan and naive scan agree") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.5, 1.5);
    for (const auto& id : kInstances) {
        if (id.n > 8) continue;
        auto b = orient_basis(id);
        auto cs = enumerate_corners(b);
        for (int t = 0; t < 200; ++t) {
            Vec a(id.n);
            for (int j = 0; j < id.n; ++j) a[j] = u(rng);
            Vec y = b.G.transpose() * a;
            auto ref = naive_nearest_corner(b, y);
            CHECK(cvp_corners(b, y).z == ref);
            CHECK(cvp_corners_scan(b, cs, y).z == ref);
        }
    }
}

TEST_CASE("box search agrees with the nearest corner inside P(B) for A_n") {
    for (int n = 2; n <= 6; ++n) {
        auto b = orient_basis(FamilyId{Family::An, n});
        for (const auto& y : sample_parallelotope(b, 100 + n, 500)) CHECK(cvp_box(b, y, 2).z == cvp_corners(b, y).z);
    }
}

TEST_CASE("box search returns exact lattice inputs") {
    auto b = orient_basis(FamilyId{Family::DnSecond, 4});
    CHECK(cvp_box(b, Vec::Zero(4), 1).x.norm() == 0.0);
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> u(-4, 4);
    for (int t = 0; t < 50; ++t) {
        std::vector<int> z(4);
        for (auto& c : z) c = u(rng);
        auto p = make_point(b, z);
        CHECK(cvp_box(b, p.x, 1).z == z);
    }
    CHECK_THROWS_AS(cvp_box(b, Vec::Zero(4), 2, 100), ResourceError);
    CHECK_THROWS_AS(cvp_box(b, Vec::Zero(4), 0), DomainError);
}

TEST_CASE("parallelotope sampling") {
    auto b = orient_basis(FamilyId{Family::En, 7});
    auto s1 = sample_parallelotope(b, 9, 1000), s2 = sample_parallelotope(b, 9, 1000);
    REQUIRE(s1.size() == 1000);
    for (std::size_t i = 0; i < s1.size(); ++i) CHECK(s1[i] == s2[i]);
    CHECK(sample_parallelotope(b, 10, 1)[0] != s1[0]);
    for (const auto& y : s1) {
        Vec a = alpha_coords(b, y);
        CHECK(a.minCoeff() >= -1e-12);
        CHECK(a.maxCoeff() < 1.0 + 1e-12);
    }
    // alpha = 1/2 everywhere is the centroid.
    Vec half = Vec::Constant(7, 0.5);
    Vec centroid = 0.5 * b.G.colwise().sum().transpose();
    CHECK((b.G.transpose() * half - centroid).norm() < 1e-14);
}

TEST_CASE("basis JSON round trip") {
    auto b = orient_basis(FamilyId{Family::DnConstA, 5});
    auto c = basis_from_json(basis_to_json(b));
    CHECK(c.n == 5);
    CHECK(c.G == b.G);
    CHECK(c.gram == b.gram);
    REQUIRE(c.family.has_value());
    CHECK(c.family->family == Family::DnConstA);
    CHECK_THROWS_AS(basis_from_json("{"), DomainError);
    CHECK_THROWS_AS(basis_from_json("{\"n\": 2}"), DomainError);
}
