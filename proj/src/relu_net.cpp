#include "latfold/relu_net.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "json.hpp"
#include "latfold/kernels.hpp"

namespace latfold {

const char* activation_name(Activation a) {
    switch (a) {
        case Activation::Relu: return "relu";
        case Activation::NegRelu: return "neg_relu";
        case Activation::Identity: return "identity";
        case Activation::Sawtooth2: return "sawtooth2";
    }
    return "?";
}

Activation parse_activation(const std::string& s) {
    if (s == "relu") return Activation::Relu;
    if (s == "neg_relu") return Activation::NegRelu;
    if (s == "identity") return Activation::Identity;
    if (s == "sawtooth2") return Activation::Sawtooth2;
    throw DomainError("unknown activation '" + s + "'");
}

double activate(Activation a, double u) {
    switch (a) {
        case Activation::Relu: return u > 0.0 ? u : 0.0;
        case Activation::NegRelu: return u < 0.0 ? -u : 0.0;
        case Activation::Identity: return u;
        case Activation::Sawtooth2: return u - std::floor(u);
    }
    return u;
}

NetworkStats stats(const Network& net) {
    NetworkStats s;
    s.depth = static_cast<int>(net.layers.size());
    for (const auto& l : net.layers) {
        s.width = std::max(s.width, l.out());
        s.params += static_cast<long>(l.W.size() + l.b.size());
    }
    return s;
}

Vec forward(const Network& net, const Vec& x) {
    if (x.size() != net.input_dim) throw DomainError("forward: input dimension mismatch");
    Vec cur = x, next;
    for (const auto& l : net.layers) {
        next.resize(l.out());
        kernels::active().affine(l.W.data(), l.b.data(), cur.data(), next.data(), l.out(), l.in());
        for (int i = 0; i < l.out(); ++i) next[i] = activate(l.act[i], next[i]);
        std::swap(cur, next);
    }
    return cur;
}

void append(Network& net, const Network& frag) {
    if (net.layers.empty() && net.input_dim == 0) net.input_dim = frag.input_dim;
    if (frag.input_dim != net.output_dim()) throw DomainError("append: dimension mismatch");
    for (const auto& l : frag.layers) net.layers.push_back(l);
}

namespace {

Layer make_layer(int out, int in, Activation a, const std::string& tag) {
    Layer l;
    l.W = Mat::Zero(out, in);
    l.b = Vec::Zero(out);
    l.act.assign(out, a);
    l.tag = tag;
    return l;
}

}  // namespace

Mat householder_to_e1(const Vec& u) {
    const int d = static_cast<int>(u.size());
    Vec w = u;
    w[0] -= 1.0;
    double ww = w.squaredNorm();
    if (ww < 1e-30) return Mat::Identity(d, d);
    return Mat::Identity(d, d) - (2.0 / ww) * (w * w.transpose());
}

Network reflection_block(const Vec& v, double p) {
    const int d = static_cast<int>(v.size());
    double nv = v.norm();
    if (!(nv > 0.0)) throw DomainError("reflection block needs a nonzero normal");
    Vec u = v / nv;
    double pu = p / nv;
    Mat H = householder_to_e1(u);
    // Layer 1: s = u.y - p split into relu/neg_relu, plus the other rotated coordinates.
    Layer l1 = make_layer(d + 1, d, Activation::Identity, "reflection");
    l1.W.row(0) = u.transpose();
    l1.W.row(1) = u.transpose();
    l1.b[0] = l1.b[1] = -pu;
    l1.act[0] = Activation::Relu;
    l1.act[1] = Activation::NegRelu;
    for (int i = 1; i < d; ++i) l1.W.row(i + 1) = H.row(i);
    // Layer 2: rotate back with |s| + p in the first rotated coordinate.
    Layer l2 = make_layer(d, d + 1, Activation::Identity, "reflection");
    l2.W.col(0) = H.col(0);
    l2.W.col(1) = H.col(0);
    for (int i = 1; i < d; ++i) l2.W.col(i + 1) = H.col(i);
    l2.b = H.col(0) * pu;
    Network net;
    net.input_dim = d;
    net.layers = {std::move(l1), std::move(l2)};
    return net;
}

Network translation_block(const OrientedBasis& b, int level, int M) {
    if (level < 1 || level > M) throw DomainError("translation level must lie in [1, M]");
    const int n = b.n;
    const double s = std::ldexp(1.0, M - level);
    Vec scale = Vec::Constant(n, 1.0 / s);
    scale[0] = 1.0;
    Layer l1 = make_layer(n, n, Activation::Identity, "translation");
    l1.W = scale.asDiagonal() * b.Ginv.transpose();
    Layer l2 = make_layer(n, n, Activation::Sawtooth2, "translation");
    l2.W = Mat::Identity(n, n);
    l2.act[0] = Activation::Identity;
    Layer l3 = make_layer(n, n, Activation::Identity, "translation");
    l3.W = b.G.transpose() * scale.cwiseInverse().asDiagonal();
    Network net;
    net.input_dim = n;
    net.layers = {std::move(l1), std::move(l2), std::move(l3)};
    return net;
}

Network segment_tree(const std::vector<int>& sizes, bool take_max) {
    Network net;
    net.input_dim = 0;
    for (int s : sizes) {
        if (s < 1) throw DomainError("segment sizes must be >= 1");
        net.input_dim += s;
    }
    std::vector<int> cur = sizes;
    const double sign = take_max ? 1.0 : -1.0;
    while (*std::max_element(cur.begin(), cur.end()) > 1) {
        int in = 0, mid = 0;
        for (int s : cur) {
            in += s;
            mid += 3 * (s / 2) + (s % 2);
        }
        Layer a = make_layer(mid, in, Activation::Identity, "maxmin");
        int r = 0, c = 0;
        for (int s : cur) {
            for (int k = 0; k + 1 < s; k += 2, c += 2) {
                a.W(r, c) = a.W(r, c + 1) = 1.0;
                a.W(r + 1, c) = a.W(r + 2, c) = 1.0;
                a.W(r + 1, c + 1) = a.W(r + 2, c + 1) = -1.0;
                a.act[r + 1] = Activation::Relu;
                a.act[r + 2] = Activation::NegRelu;
                r += 3;
            }
            if (s % 2) a.W(r++, c++) = 1.0;
        }
        std::vector<int> next;
        int out = 0;
        for (int s : cur) {
            next.push_back((s + 1) / 2);
            out += (s + 1) / 2;
        }
        Layer bl = make_layer(out, mid, Activation::Identity, "maxmin");
        r = 0;
        int o = 0;
        for (int s : cur) {
            for (int k = 0; k + 1 < s; k += 2) {
                bl.W(o, r) = 0.5;
                bl.W(o, r + 1) = bl.W(o, r + 2) = 0.5 * sign;
                r += 3;
                ++o;
            }
            if (s % 2) bl.W(o++, r++) = 1.0;
        }
        net.layers.push_back(std::move(a));
        net.layers.push_back(std::move(bl));
        cur = std::move(next);
    }
    return net;
}

Network max_net(int k) { return segment_tree({k}, true); }
Network min_net(int k) { return segment_tree({k}, false); }

namespace {

struct PieceSelection {
    std::map<int, std::set<int>> caps;  // cap representative group -> kept memberships

    double value(const Vec& h) const {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& [g, ms] : caps) {
            double mx = -std::numeric_limits<double>::infinity();
            for (int j : ms) mx = std::max(mx, h[j]);
            best = std::min(best, mx);
        }
        return best;
    }
};

// Group argmax per cap representative and the global argmin, with the same tie rules as eval_boundary.
struct Evaluation {
    std::vector<int> argmax;  // per group
    int argmin_group = -1;
};

Evaluation evaluate_groups(const BoundaryFunction& f, const Vec& h) {
    Evaluation e;
    e.argmax.resize(f.groups.size());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t gi = 0; gi < f.groups.size(); ++gi) {
        const auto& g = f.groups[gi];
        int arg = g.begin;
        for (int j = g.begin + 1; j < g.end; ++j)
            if (h[j] > h[arg]) arg = j;
        e.argmax[gi] = arg;
        if (h[arg] < best - 1e-12) {
            best = h[arg];
            e.argmin_group = static_cast<int>(gi);
        }
    }
    return e;
}

Vec all_h(const BoundaryFunction& f, const Vec& yt) {
    Vec h(f.members.size());
    kernels::active().affine(f.A.data(), f.c.data(), yt.data(), h.data(), f.members.size(), f.n - 1);
    return h;
}

std::vector<Vec> folded_samples(const OrientedBasis& b, const FoldingSchedule& s, std::uint64_t seed,
                                std::size_t count) {
    std::vector<Vec> out;
    out.reserve(count);
    for (const auto& yt : sample_domain(b, seed, count)) out.push_back(apply_fold_once(s, yt));
    return out;
}

PieceSelection select_pieces(const OrientedBasis& b, const FoldingSchedule& s, const BoundaryFunction& f,
                             const SynthOptions& opt) {
    PieceSelection sel;
    for (const auto& [cap, hyper] : folded_pieces_corner_pairs(b, f, s)) {
        const auto& g = f.groups[cap];
        for (int j = g.begin; j < g.end; ++j)
            if (f.members[j].hyper == hyper) {
                sel.caps[cap].insert(j);
                break;
            }
    }
    auto train = folded_samples(b, s, opt.seed, opt.prune_samples);
    std::vector<Vec> hs;
    hs.reserve(train.size());
    for (const auto& q : train) {
        hs.push_back(all_h(f, q));
        auto e = evaluate_groups(f, hs.back());
        sel.caps[f.groups[e.argmin_group].cap];
    }
    for (const auto& h : hs) {
        auto e = evaluate_groups(f, h);
        for (auto& [g, ms] : sel.caps) ms.insert(e.argmax[g]);
    }
    auto check = folded_samples(b, s, opt.seed + 1, opt.prune_samples);
    for (int round = 0; round < 64; ++round) {
        bool changed = false;
        for (const auto& q : check) {
            Vec h = all_h(f, q);
            double ref = eval_boundary(f, q).value;
            if (std::abs(sel.value(h) - ref) <= 1e-12 * std::max(1.0, std::abs(ref))) continue;
            auto e = evaluate_groups(f, h);
            sel.caps[f.groups[e.argmin_group].cap];
            for (auto& [g, ms] : sel.caps) ms.insert(e.argmax[g]);
            changed = true;
        }
        if (!changed) return sel;
    }
    throw InternalError("piece selection did not converge");
}

}  // namespace

Synthesis synthesize(const OrientedBasis& b, const FoldingSchedule& s, const BoundaryFunction& f, int M,
                     const SynthOptions& opt) {
    if (f.n != b.n || s.id.n != b.n) throw DomainError("synthesize: dimension mismatch");
    if (M < 0) throw DomainError("M must be >= 0");
    const int n = b.n;
    Synthesis out;
    Network& net = out.net;
    net.input_dim = n;
    net.M = M;
    net.hybrid = opt.strict_relu;
    if (!opt.strict_relu)
        for (int level = 1; level <= M; ++level) append(net, translation_block(b, level, M));
    for (const auto& r : s.reflections) {
        Vec v = Vec::Zero(n);
        v.tail(n - 1) = r.v;
        append(net, reflection_block(v, 0.0));
    }
    PieceSelection sel = select_pieces(b, s, f, opt);
    std::vector<int> sizes;
    for (const auto& [g, ms] : sel.caps) {
        out.kept_caps.push_back(g);
        sizes.push_back(static_cast<int>(ms.size()));
        out.kept_members.insert(out.kept_members.end(), ms.begin(), ms.end());
    }
    const int units = static_cast<int>(out.kept_members.size());
    Layer pieces = make_layer(units, n, Activation::Identity, "pieces");
    for (int r = 0; r < units; ++r) {
        int j = out.kept_members[r];
        pieces.W.row(r).tail(n - 1) = f.A.row(j);
        pieces.b[r] = f.c[j];
    }
    Network stage;
    stage.input_dim = n;
    stage.layers.push_back(std::move(pieces));
    append(net, stage);
    append(net, segment_tree(sizes, true));
    append(net, segment_tree({static_cast<int>(sizes.size())}, false));
    net.piece_units = units;
    out.base_depth = static_cast<int>(net.layers.size()) - (opt.strict_relu ? 0 : 3 * M);
    return out;
}

double eval_network(const Network& net, const OrientedBasis& b, const Vec& y0) {
    if (net.hybrid) return forward(net, reduce_to_parallelotope(b, y0, net.M).y)[0];
    return forward(net, y0)[0];
}

std::string network_to_json(const Network& net) {
    using nlohmann::json;
    json layers = json::array();
    json prov = json::array();
    for (const auto& l : net.layers) {
        json w = json::array();
        for (int r = 0; r < l.out(); ++r) {
            json row = json::array();
            for (int c = 0; c < l.in(); ++c) row.push_back(l.W(r, c));
            w.push_back(std::move(row));
        }
        json bias = json::array();
        for (int r = 0; r < l.out(); ++r) bias.push_back(l.b[r]);
        json act = json::array();
        for (auto a : l.act) act.push_back(activation_name(a));
        layers.push_back({{"w", std::move(w)}, {"b", std::move(bias)}, {"act", std::move(act)}});
        prov.push_back(l.tag);
    }
    auto st = stats(net);
    json meta = {{"depth", st.depth},   {"width", st.width},   {"provenance", prov},
                 {"input_dim", net.input_dim}, {"M", net.M}, {"hybrid", net.hybrid},
                 {"piece_units", net.piece_units}};
    return json{{"layers", layers}, {"meta", meta}}.dump();
}

Network network_from_json(const std::string& text) {
    using nlohmann::json;
    try {
        json j = json::parse(text);
        Network net;
        const auto& meta = j.at("meta");
        net.input_dim = meta.at("input_dim").get<int>();
        net.M = meta.value("M", 0);
        net.hybrid = meta.value("hybrid", false);
        net.piece_units = meta.value("piece_units", 0);
        const auto& prov = meta.at("provenance");
        int in = net.input_dim;
        std::size_t idx = 0;
        for (const auto& lj : j.at("layers")) {
            Layer l;
            const auto& w = lj.at("w");
            const int out = static_cast<int>(w.size());
            l.W.resize(out, in);
            for (int r = 0; r < out; ++r) {
                if (static_cast<int>(w[r].size()) != in) throw DomainError("network json: ragged weights");
                for (int c = 0; c < in; ++c) l.W(r, c) = w[r][c].get<double>();
            }
            const auto& bj = lj.at("b");
            if (static_cast<int>(bj.size()) != out) throw DomainError("network json: bias size");
            l.b.resize(out);
            for (int r = 0; r < out; ++r) l.b[r] = bj[r].get<double>();
            for (const auto& a : lj.at("act")) l.act.push_back(parse_activation(a.get<std::string>()));
            if (static_cast<int>(l.act.size()) != out) throw DomainError("network json: activation count");
            l.tag = idx < prov.size() ? prov[idx].get<std::string>() : "";
            net.layers.push_back(std::move(l));
            in = out;
            ++idx;
        }
        return net;
    } catch (const json::exception& e) {
        throw DomainError(std::string("network json: ") + e.what());
    }
}

}  // namespace latfold
