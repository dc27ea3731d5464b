#include "latfold/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include "json.hpp"
#include <random>

#include "latfold/kernels.hpp"

namespace latfold {

std::string family_name(Family f) {
    switch (f) {
        case Family::An: return "an";
        case Family::DnConstA: return "dn-const-a";
        case Family::DnSecond: return "dn-second";
        case Family::En: return "en";
    }
    return "?";
}

std::optional<Family> parse_family(const std::string& s) {
    if (s == "an") return Family::An;
    if (s == "dn-const-a") return Family::DnConstA;
    if (s == "dn-second") return Family::DnSecond;
    if (s == "en") return Family::En;
    return std::nullopt;
}

int family_min_n(Family f) {
    switch (f) {
        case Family::An: return 1;
        case Family::DnConstA:
        case Family::DnSecond: return 2;
        case Family::En: return 6;
    }
    return 1;
}

int family_max_n(Family f) { return f == Family::En ? 8 : 64; }

bool family_valid(const FamilyId& id) {
    return id.n >= family_min_n(id.family) && id.n <= family_max_n(id.family);
}

void require_valid(const FamilyId& id) {
    if (!family_valid(id))
        throw DomainError("unsupported dimension n=" + std::to_string(id.n) + " for family " +
                          family_name(id.family));
}

Mat build_gram(const FamilyId& id) {
    require_valid(id);
    const int n = id.n;
    Mat g = Mat::Ones(n, n) + Mat::Identity(n, n);
    switch (id.family) {
        case Family::An: break;
        case Family::DnConstA:
            g.row(0).setConstant(2.0);
            g.col(0).setConstant(2.0);
            g(0, 0) = 4.0;
            break;
        case Family::DnSecond:
            g(0, 1) = g(1, 0) = 0.0;
            break;
        case Family::En:
            g(0, 1) = g(1, 0) = 0.0;
            g(0, 2) = g(2, 0) = 0.0;
            break;
    }
    return g;
}

double OrientedBasis::volume() const { return std::abs(G.determinant()); }

OrientedBasis orient_basis(const Mat& gram) {
    const int n = static_cast<int>(gram.rows());
    if (n < 1 || gram.cols() != n) throw DomainError("gram matrix must be square and non-empty");
    if (!gram.isApprox(gram.transpose(), 1e-12)) throw DomainError("gram matrix is not symmetric");
    // Reverse, factor, reverse back: the upper-triangular result puts b_2..b_n in e_1^perp.
    Mat rev = gram.reverse();
    Eigen::LLT<Mat> llt(rev);
    if (llt.info() != Eigen::Success) throw InternalError("gram matrix is not positive definite");
    Mat L = llt.matrixL();
    OrientedBasis b;
    b.n = n;
    b.gram = gram;
    b.G = L.reverse();
    for (int j = 1; j < n; ++j)
        for (int c = 0; c < j; ++c) b.G(j, c) = 0.0;
    b.Ginv = b.G.inverse();
    return b;
}

OrientedBasis orient_basis(const FamilyId& id) {
    OrientedBasis b = orient_basis(build_gram(id));
    b.family = id;
    return b;
}

OrientedBasis scale_basis(const OrientedBasis& b, double s) {
    OrientedBasis out = b;
    out.G = b.G * s;
    out.gram = b.gram * (s * s);
    out.Ginv = b.Ginv / s;
    return out;
}

OrientedBasis unit_volume(const OrientedBasis& b) {
    return scale_basis(b, std::pow(b.volume(), -1.0 / b.n));
}

LatticePoint make_point(const OrientedBasis& b, std::vector<int> z) {
    Vec zv(b.n);
    for (int i = 0; i < b.n; ++i) zv[i] = z[i];
    LatticePoint p;
    p.x = b.G.transpose() * zv;
    p.z = std::move(z);
    return p;
}

std::vector<int> corner_z(int id, int n) {
    std::vector<int> z(n);
    for (int j = 0; j < n; ++j) z[j] = (id >> j) & 1;
    return z;
}

Vec corner_x(const OrientedBasis& b, int id) {
    Vec x = Vec::Zero(b.n);
    for (int j = 0; j < b.n; ++j)
        if ((id >> j) & 1) x += b.G.row(j).transpose();
    return x;
}

CornerSet enumerate_corners(const OrientedBasis& b, int cap) {
    if (b.n > cap) throw ResourceError("corner enumeration capped at n=" + std::to_string(cap));
    CornerSet cs;
    cs.n = b.n;
    const int count = 1 << b.n;
    cs.all.reserve(count);
    for (int i = 0; i < count; ++i) {
        cs.all.push_back(LatticePoint{corner_z(i, b.n), corner_x(b, i)});
        for (int c = 0; c < b.n; ++c) cs.coords.push_back(cs.all.back().x[c]);
        (i & 1 ? cs.c1 : cs.c0).push_back(i);
    }
    return cs;
}

Shell relevant_vectors(const OrientedBasis& b, int r) {
    if (r < 1) throw DomainError("enumeration radius must be >= 1");
    const int n = b.n;
    // Any basis vector bounds the minimum norm from above.
    double bound = b.gram.diagonal().minCoeff();
    const double tol = kGeomTol * std::max(1.0, bound);
    std::vector<std::pair<double, std::vector<int>>> found;
    std::vector<int> z(n, 0);
    Vec x = Vec::Zero(n);
    // x_c depends on z_1..z_c only, so the partial sum over c <= k is a lower bound.
    std::function<void(int, double)> rec = [&](int k, double partial) {
        if (k == n) {
            if (partial > tol) found.emplace_back(partial, z);
            return;
        }
        double base = 0.0;
        for (int j = 0; j < k; ++j) base += z[j] * b.G(j, k);
        for (int v = -r; v <= r; ++v) {
            double xk = base + v * b.G(k, k);
            double p = partial + xk * xk;
            if (p > bound + tol) continue;
            z[k] = v;
            rec(k + 1, p);
        }
        z[k] = 0;
    };
    rec(0, 0.0);
    if (found.empty()) throw InternalError("empty minimal shell");
    Shell s;
    s.min_norm = std::min_element(found.begin(), found.end())->first;
    for (auto& [q, zz] : found)
        if (std::abs(q - s.min_norm) <= tol) s.vectors.push_back(make_point(b, zz));
    std::sort(s.vectors.begin(), s.vectors.end(),
              [](const LatticePoint& a, const LatticePoint& c) { return a.z < c.z; });
    return s;
}

LatticePoint cvp_corners(const OrientedBasis& b, const Vec& y) {
    const int n = b.n;
    std::vector<int> z(n, 0), best(n, 0);
    double best_d = std::numeric_limits<double>::infinity();
    // Nearer child first for a tight bound; equal distances resolved by lexicographic z.
    std::function<void(int, double)> rec = [&](int k, double partial) {
        if (partial > best_d) return;
        if (k == n) {
            if (partial < best_d || z < best) {
                best_d = partial;
                best = z;
            }
            return;
        }
        double base = 0.0;
        for (int j = 0; j < k; ++j) base += z[j] * b.G(j, k);
        double d0 = y[k] - base, d1 = d0 - b.G(k, k);
        double q0 = partial + d0 * d0, q1 = partial + d1 * d1;
        if (q1 < q0) {
            z[k] = 1;
            rec(k + 1, q1);
            z[k] = 0;
            rec(k + 1, q0);
        } else {
            z[k] = 0;
            rec(k + 1, q0);
            z[k] = 1;
            rec(k + 1, q1);
        }
        z[k] = 0;
    };
    rec(0, 0.0);
    return make_point(b, best);
}

LatticePoint cvp_corners_scan(const OrientedBasis& b, const CornerSet& cs, const Vec& y) {
    const std::size_t count = cs.all.size();
    thread_local std::vector<double> dist;
    dist.resize(count);
    kernels::active().sqdist(cs.coords.data(), count, b.n, y.data(), dist.data());
    std::size_t best = 0;
    for (std::size_t i = 1; i < count; ++i) {
        if (dist[i] < dist[best] || (dist[i] == dist[best] && cs.all[i].z < cs.all[best].z)) best = i;
    }
    return cs.all[best];
}

Vec alpha_coords(const OrientedBasis& b, const Vec& y) { return b.Ginv.transpose() * y; }

LatticePoint cvp_box(const OrientedBasis& b, const Vec& y, int r, std::size_t budget) {
    if (r < 1) throw DomainError("box radius must be >= 1");
    const int n = b.n;
    double box = std::pow(2.0 * r + 2.0, n);
    if (box > static_cast<double>(budget)) throw ResourceError("cvp_box search box exceeds budget");
    Vec a = alpha_coords(b, y);
    std::vector<int> lo(n);
    for (int i = 0; i < n; ++i) lo[i] = static_cast<int>(std::floor(a[i])) - r;
    std::vector<int> z(n, 0), best(n, 0);
    double best_d = std::numeric_limits<double>::infinity();
    std::function<void(int, double)> rec = [&](int k, double partial) {
        if (partial >= best_d) return;
        if (k == n) {
            best_d = partial;
            best = z;
            return;
        }
        double base = 0.0;
        for (int j = 0; j < k; ++j) base += z[j] * b.G(j, k);
        for (int v = lo[k]; v <= lo[k] + 2 * r + 1; ++v) {
            double d = y[k] - (base + v * b.G(k, k));
            z[k] = v;
            rec(k + 1, partial + d * d);
        }
        z[k] = 0;
    };
    rec(0, 0.0);
    return make_point(b, best);
}

std::vector<Vec> sample_parallelotope(const OrientedBasis& b, std::uint64_t seed, std::size_t count) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Vec> out;
    out.reserve(count);
    Vec a(b.n);
    for (std::size_t i = 0; i < count; ++i) {
        for (int j = 0; j < b.n; ++j) a[j] = u(rng);
        out.push_back(b.G.transpose() * a);
    }
    return out;
}

namespace {

nlohmann::json mat_json(const Mat& m) {
    auto j = nlohmann::json::array();
    for (int r = 0; r < m.rows(); ++r) {
        auto row = nlohmann::json::array();
        for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
        j.push_back(row);
    }
    return j;
}

Mat json_mat(const nlohmann::json& j) {
    const int rows = static_cast<int>(j.size());
    if (rows == 0) throw DomainError("empty matrix");
    const int cols = static_cast<int>(j[0].size());
    Mat m(rows, cols);
    for (int r = 0; r < rows; ++r) {
        if (static_cast<int>(j[r].size()) != cols) throw DomainError("ragged matrix");
        for (int c = 0; c < cols; ++c) m(r, c) = j[r][c].get<double>();
    }
    return m;
}

}  // namespace

std::string basis_to_json(const OrientedBasis& b) {
    nlohmann::json j;
    j["family"] = b.family ? family_name(b.family->family) : "custom";
    j["n"] = b.n;
    j["gram"] = mat_json(b.gram);
    j["generator"] = mat_json(b.G);
    return j.dump(2);
}

OrientedBasis basis_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("basis json: ") + e.what());
    }
    try {
        OrientedBasis b;
        b.gram = json_mat(j.at("gram"));
        b.G = json_mat(j.at("generator"));
        b.n = j.at("n").get<int>();
        if (b.G.rows() != b.n || b.G.cols() != b.n || b.gram.rows() != b.n)
            throw DomainError("basis json: dimension mismatch");
        b.Ginv = b.G.inverse();
        if (auto f = parse_family(j.value("family", std::string{}))) b.family = FamilyId{*f, b.n};
        return b;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError(std::string("basis json: ") + e.what());
    }
}

}  // namespace latfold
