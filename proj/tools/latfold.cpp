// latfold: command-line front end for the lattice decision-boundary library.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "latfold/analysis.hpp"
#include "latfold/relu_net.hpp"

using namespace latfold;
using ojson = nlohmann::ordered_json;

namespace {

struct Config {
    std::string family;
    int n = 0;
    std::uint64_t seed = 42;
    std::size_t samples = 10000;
    int M = 0;
    std::string out;
    std::string in;
    std::string format = "csv";
};

// Rows of named cells rendered either as CSV or as a JSON array of objects.
class Report {
public:
    explicit Report(std::vector<std::string> cols) : cols_(std::move(cols)) {}

    void add(ojson row) { rows_.push_back(std::move(row)); }

    std::string render(const std::string& format) const {
        std::ostringstream os;
        if (format == "json") {
            os << ojson(rows_).dump(2) << "\n";
            return os.str();
        }
        for (std::size_t i = 0; i < cols_.size(); ++i) os << (i ? "," : "") << cols_[i];
        os << "\n";
        for (const auto& r : rows_) {
            for (std::size_t i = 0; i < cols_.size(); ++i) {
                if (i) os << ",";
                const auto& v = r.contains(cols_[i]) ? r.at(cols_[i]) : ojson();
                if (v.is_null()) continue;
                if (v.is_number_float()) {
                    char buf[64];
                    std::snprintf(buf, sizeof buf, "%.10g", v.get<double>());
                    os << buf;
                } else if (v.is_string()) {
                    os << v.get<std::string>();
                } else {
                    os << v.dump();
                }
            }
            os << "\n";
        }
        return os.str();
    }

private:
    std::vector<std::string> cols_;
    std::vector<ojson> rows_;
};

void emit(const Config& cfg, const std::string& text) {
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(cfg.out);
    if (!f) throw DomainError("cannot write " + cfg.out);
    f << text;
}

Family family_of(const std::string& s) {
    auto f = parse_family(s);
    if (!f) throw DomainError("unknown family '" + s + "' (an, dn-const-a, dn-second, en)");
    return *f;
}

// Explicit (family, n), or the default verification range of every selected family.
std::vector<FamilyId> targets(const Config& cfg) {
    std::vector<Family> fams;
    if (cfg.family.empty())
        fams = {Family::An, Family::DnConstA, Family::DnSecond, Family::En};
    else
        fams = {family_of(cfg.family)};
    std::vector<FamilyId> out;
    for (auto f : fams) {
        if (cfg.n > 0) {
            FamilyId id{f, cfg.n};
            require_valid(id);
            out.push_back(id);
            continue;
        }
        int lo = f == Family::An ? 2 : (f == Family::En ? 6 : 3);
        for (int n = lo; n <= 8; ++n) out.push_back({f, n});
    }
    return out;
}

FamilyId single(const Config& cfg) {
    if (cfg.family.empty() || cfg.n <= 0) throw DomainError("--family and --n are required");
    FamilyId id{family_of(cfg.family), cfg.n};
    require_valid(id);
    return id;
}

std::string read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw DomainError("cannot read " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::vector<Vec> read_points(const std::string& path, int n) {
    std::ifstream f(path);
    if (!f) throw DomainError("cannot read " + path);
    std::vector<Vec> pts;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream ls(line);
        std::vector<double> vals;
        std::string tok;
        while (ls >> tok) {
            try {
                std::size_t used = 0;
                vals.push_back(std::stod(tok, &used));
                if (used != tok.size()) throw std::invalid_argument(tok);
            } catch (const std::exception&) {
                throw DomainError(path + ":" + std::to_string(lineno) + ": bad number '" + tok + "'");
            }
        }
        if (static_cast<int>(vals.size()) != n)
            throw DomainError(path + ":" + std::to_string(lineno) + ": expected " + std::to_string(n) + " values");
        pts.push_back(Eigen::Map<Vec>(vals.data(), n));
    }
    return pts;
}

int cmd_basis(const Config& cfg) {
    auto id = single(cfg);
    auto b = orient_basis(id);
    if (cfg.format == "json") {
        emit(cfg, basis_to_json(b) + "\n");
        return 0;
    }
    Report r({"matrix", "row", "col", "value"});
    for (const char* which : {"gram", "generator"}) {
        const Mat& m = std::string(which) == "gram" ? b.gram : b.G;
        for (int i = 0; i < b.n; ++i)
            for (int j = 0; j < b.n; ++j) r.add({{"matrix", which}, {"row", i + 1}, {"col", j + 1}, {"value", m(i, j)}});
    }
    emit(cfg, r.render(cfg.format));
    return 0;
}

int cmd_count(const Config& cfg) {
    Report r({"family", "n", "formula", "oracle", "sampled", "match", "formula_alt", "reading", "hyperplanes"});
    bool ok = true;
    for (const auto& id : targets(cfg)) {
        auto b = orient_basis(id);
        auto f = build_boundary(b);
        auto formula = count_pieces_formula(id);
        long oracle = count_pieces_oracle(f);
        long sampled = static_cast<long>(sampled_pieces_random(b, f, cfg.seed, cfg.samples).size());
        ojson row{{"family", family_name(id.family)}, {"n", id.n}, {"formula", formula.value},
                  {"oracle", oracle}, {"sampled", sampled}};
        bool match = oracle == formula.value;
        std::string reading = "closed-form";
        if (formula.alternate) {
            row["formula_alt"] = *formula.alternate;
            bool lit = oracle == formula.value, alt = oracle == *formula.alternate;
            match = lit != alt;
            reading = lit ? "binom(n-3,n-i)" : (alt ? "binom(n-3,i)" : "none");
        }
        row["match"] = match;
        row["reading"] = reading;
        row["hyperplanes"] = count_distinct_hyperplanes(f);
        ok = ok && match;
        r.add(std::move(row));
    }
    emit(cfg, r.render(cfg.format));
    return ok ? 0 : 1;
}

int cmd_fold(const Config& cfg) {
    Report r({"family", "n", "samples", "max_dev", "reflections", "corner_pairs", "sampled_low", "sampled_high",
              "stated", "sketch"});
    bool ok = true;
    for (const auto& id : targets(cfg)) {
        auto b = orient_basis(id);
        auto f = build_boundary(b);
        auto s = build_schedule(id, b);
        double dev = verify_fold_invariance(b, f, s, cfg.seed, cfg.samples);
        auto fc = folded_piece_count_oracle(b, f, s, cfg.seed, cfg.samples, 2 * cfg.samples);
        ojson row{{"family", family_name(id.family)}, {"n", id.n}, {"samples", cfg.samples}, {"max_dev", dev},
                  {"reflections", s.reflections.size()}, {"corner_pairs", fc.corner_pairs},
                  {"sampled_low", fc.sampled_low}, {"sampled_high", fc.sampled_high}};
        if (fc.stated) row["stated"] = *fc.stated;
        if (fc.sketch) row["sketch"] = *fc.sketch;
        ok = ok && dev <= 1e-9;
        r.add(std::move(row));
    }
    emit(cfg, r.render(cfg.format));
    return ok ? 0 : 1;
}

Synthesis build_network(const Config& cfg, const FamilyId& id, const OrientedBasis& b, bool strict) {
    auto f = build_boundary(b);
    auto s = build_schedule(id, b);
    SynthOptions opt;
    opt.seed = cfg.seed;
    opt.strict_relu = strict;
    return synthesize(b, s, f, cfg.M, opt);
}

int cmd_synth(const Config& cfg, bool strict) {
    auto id = single(cfg);
    auto b = orient_basis(id);
    auto syn = build_network(cfg, id, b, strict);
    auto st = stats(syn.net);
    if (!strict && st.depth != 3 * cfg.M + syn.base_depth) {
        std::cerr << "depth bookkeeping violated\n";
        return 1;
    }
    emit(cfg, network_to_json(syn.net) + "\n");
    return 0;
}

int cmd_eval(const Config& cfg, const std::string& network_path) {
    auto id = single(cfg);
    auto b = orient_basis(id);
    auto f = build_boundary(b);
    Network net;
    if (!network_path.empty()) {
        net = network_from_json(read_file(network_path));
        if (net.input_dim != b.n) throw DomainError("network input dimension does not match --n");
    } else {
        net = build_network(cfg, id, b, false).net;
    }
    const int M = net.M;
    if (!cfg.in.empty()) {
        Report r({"f", "network"});
        for (const auto& y : read_points(cfg.in, b.n))
            r.add({{"f", eval_extended(b, f, y, M)}, {"network", eval_network(net, b, y)}});
        emit(cfg, r.render(cfg.format));
        return 0;
    }
    double dev = 0.0;
    for (const auto& y : sample_extended(b, M, cfg.seed, cfg.samples))
        dev = std::max(dev, std::abs(eval_network(net, b, y) - eval_extended(b, f, y, M)));
    auto st = stats(net);
    Report r({"family", "n", "M", "samples", "max_dev", "depth", "width", "piece_units", "pass"});
    bool pass = dev <= 1e-9;
    r.add({{"family", family_name(id.family)}, {"n", id.n}, {"M", M}, {"samples", cfg.samples}, {"max_dev", dev},
           {"depth", st.depth}, {"width", st.width}, {"piece_units", net.piece_units}, {"pass", pass}});
    emit(cfg, r.render(cfg.format));
    return pass ? 0 : 1;
}

int cmd_decode(const Config& cfg) {
    auto id = single(cfg);
    if (cfg.in.empty()) throw DomainError("--in is required");
    auto b = orient_basis(id);
    auto f = build_boundary(b);
    auto pts = read_points(cfg.in, b.n);
    std::ostringstream os;
    ojson arr = ojson::array();
    int mismatches = 0;
    for (const auto& y : pts) {
        Vec a = alpha_coords(b, y);
        if ((a.array() < -kGeomTol).any() || (a.array() > 1.0 + kGeomTol).any())
            throw DomainError("point outside P(B); reduce it first");
        auto d = decode_bit(f, y);
        const char* s = d == Decision::One ? "1" : (d == Decision::Zero ? "0" : "?");
        if (d != Decision::Ambiguous && (d == Decision::One ? 1 : 0) != cvp_corners(b, y).z[0]) ++mismatches;
        os << s << "\n";
        arr.push_back(s);
    }
    emit(cfg, cfg.format == "json" ? arr.dump() + "\n" : os.str());
    if (mismatches) {
        std::cerr << mismatches << " decision(s) disagree with the nearest corner\n";
        return 1;
    }
    return 0;
}

int cmd_mc(const Config& cfg, const std::string& kind, bool raw_scale) {
    FamilyId id{cfg.family.empty() ? Family::An : family_of(cfg.family), cfg.n};
    if (cfg.n <= 0) throw DomainError("--n is required");
    require_valid(id);
    auto b = orient_basis(id);
    Report r({"kind", "family", "n", "seed", "samples", "estimate", "stderr", "bound", "pass", "clipped",
              "clipped_stderr"});
    ojson row{{"kind", kind}, {"family", family_name(id.family)}, {"n", id.n}, {"seed", cfg.seed},
              {"samples", cfg.samples}};
    bool asserted = true, pass = false;
    if (kind == "decode") {
        auto e = hyperplane_decoding_error_mc(b, cfg.seed, cfg.samples);
        double bound = corollary_bound(id.n);
        pass = e.estimate + 3 * e.stderr_ < bound;
        asserted = id.n >= 6;
        row.update({{"estimate", e.estimate}, {"stderr", e.stderr_}, {"bound", bound}, {"pass", pass}});
    } else if (kind == "l1") {
        if (!raw_scale) b = unit_volume(b);
        auto f = build_boundary(b);
        auto g = l1_gap_mc(b, f, cfg.seed, cfg.samples);
        pass = g.raw.estimate + 3 * g.raw.stderr_ < g.bound;
        row.update({{"estimate", g.raw.estimate}, {"stderr", g.raw.stderr_}, {"bound", g.bound}, {"pass", pass},
                    {"clipped", g.clipped.estimate}, {"clipped_stderr", g.clipped.stderr_}});
    } else {
        throw DomainError("--kind must be decode or l1");
    }
    r.add(std::move(row));
    emit(cfg, r.render(cfg.format));
    return pass || !asserted ? 0 : 1;
}

int cmd_bounds(const Config& cfg, bool separation, int L, int w) {
    if (separation) {
        if (cfg.n < 2) throw DomainError("--n >= 2 is required");
        auto s = separation_report(cfg.n, cfg.M, L, w);
        Report r({"n", "M", "L", "w", "log2_K", "simplex_lower", "log2_budget", "threshold", "satisfied"});
        r.add({{"n", s.n}, {"M", s.M}, {"L", s.L}, {"w", s.w}, {"log2_K", s.log2_K}, {"simplex_lower", s.simplex_lower},
               {"log2_budget", s.log2_budget}, {"threshold", s.threshold}, {"satisfied", s.satisfied}});
        emit(cfg, r.render(cfg.format));
        return 0;
    }
    std::vector<int> ns;
    if (cfg.n > 0)
        ns = {cfg.n};
    else
        for (int n = 3; n <= 8; ++n) ns.push_back(n);
    Report r({"n", "lower", "upper", "exact", "in_range"});
    bool ok = true;
    for (int n : ns) {
        if (n < 2) throw DomainError("--n >= 2 is required");
        auto v = volume_report(n);
        ojson row{{"n", n}, {"lower", v.lower}, {"upper", v.upper}};
        if (v.exact) {
            bool in = v.lower <= *v.exact && *v.exact <= v.upper;
            row["exact"] = *v.exact;
            row["in_range"] = in;
            ok = ok && in;
        }
        r.add(std::move(row));
    }
    emit(cfg, r.render(cfg.format));
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lattice decision boundaries, folding and ReLU network synthesis"};
    app.require_subcommand(1);
    Config cfg;
    auto common = [&](CLI::App* sub, bool with_samples) {
        sub->add_option("--family", cfg.family, "an | dn-const-a | dn-second | en");
        sub->add_option("--n", cfg.n, "dimension");
        sub->add_option("--seed", cfg.seed, "random seed")->capture_default_str();
        if (with_samples) sub->add_option("--samples", cfg.samples, "sample count")->capture_default_str();
        sub->add_option("--out", cfg.out, "output file (default stdout)");
        sub->add_option("--format", cfg.format, "csv | json")
            ->capture_default_str()
            ->check(CLI::IsMember({"csv", "json"}));
    };
    auto* basis = app.add_subcommand("basis", "Gram matrix and oriented generator");
    common(basis, false);
    auto* count = app.add_subcommand("count", "piece counts: closed form, oracle, sampled");
    common(count, true);
    auto* fold = app.add_subcommand("fold", "fold invariance and folded piece counts");
    common(fold, true);
    auto* synth = app.add_subcommand("synth", "synthesize the ReLU network as JSON");
    common(synth, false);
    bool strict = false;
    synth->add_option("--M", cfg.M, "translation levels")->capture_default_str();
    synth->add_flag("--strict-relu", strict, "keep translation outside the network (hybrid)");
    auto* eval = app.add_subcommand("eval", "compare a network with the extended boundary function");
    common(eval, true);
    std::string network_path;
    eval->add_option("--M", cfg.M, "translation levels")->capture_default_str();
    eval->add_option("--network", network_path, "network JSON (default: synthesize)");
    eval->add_option("--in", cfg.in, "points file, one vector per line");
    auto* decode = app.add_subcommand("decode", "decode z_1 for points of P(B)");
    common(decode, false);
    decode->add_option("--in", cfg.in, "points file, one vector per line");
    auto* mc = app.add_subcommand("mc", "Monte Carlo estimates against their bounds");
    common(mc, true);
    std::string kind = "decode";
    bool raw_scale = false;
    mc->add_option("--kind", kind, "decode | l1")->capture_default_str();
    mc->add_flag("--unscaled", raw_scale, "l1: keep the unscaled basis instead of unit volume");
    auto* bounds = app.add_subcommand("bounds", "simplex volume bounds or separation arithmetic");
    common(bounds, false);
    bool separation = false;
    int L = 1, w = 2;
    bounds->add_flag("--separation", separation, "report the depth-separation quantities");
    bounds->add_option("--M", cfg.M, "levels (separation)");
    bounds->add_option("--L", L, "layers (separation)");
    bounds->add_option("--w", w, "width (separation)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*basis) return cmd_basis(cfg);
        if (*count) return cmd_count(cfg);
        if (*fold) return cmd_fold(cfg);
        if (*synth) return cmd_synth(cfg, strict);
        if (*eval) return cmd_eval(cfg, network_path);
        if (*decode) return cmd_decode(cfg);
        if (*mc) return cmd_mc(cfg, kind, raw_scale);
        if (*bounds) return cmd_bounds(cfg, separation, L, w);
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
