#pragma once

#include <string>
#include <vector>

#include "latfold/folding.hpp"

namespace latfold {

enum class Activation { Relu, NegRelu, Identity, Sawtooth2 };

const char* activation_name(Activation a);
Activation parse_activation(const std::string& s);
double activate(Activation a, double u);

struct Layer {
    Mat W;  // out x in
    Vec b;
    std::vector<Activation> act;
    std::string tag;  // translation | reflection | pieces | maxmin

    int in() const { return static_cast<int>(W.cols()); }
    int out() const { return static_cast<int>(W.rows()); }
};

struct Network {
    int input_dim = 0;
    std::vector<Layer> layers;
    // Extended networks: M translation levels in front of a base network.
    int M = 0;
    // Translation stage replaced by the floor oracle outside the network.
    bool hybrid = false;
    int piece_units = 0;

    int output_dim() const { return layers.empty() ? input_dim : layers.back().out(); }
};

struct NetworkStats {
    int depth = 0;
    int width = 0;
    long params = 0;
};

NetworkStats stats(const Network& net);
Vec forward(const Network& net, const Vec& x);

// Appends `frag` after `net`; dimensions must chain.
void append(Network& net, const Network& frag);

// Householder reflector H (symmetric, orthogonal) with H u = e_1 for a unit vector u.
Mat householder_to_e1(const Vec& u);

// Mirror image through {y : y.v = p} for points on the negative side, identity otherwise.
Network reflection_block(const Vec& v, double p);

// Level `level` of M: halves the alpha range of coordinates 2..n.
Network translation_block(const OrientedBasis& b, int level, int M);

// Reduces each segment of consecutive inputs to its max (min), one output per segment,
// in ceil(log2(largest segment)) stages of two layers.
Network segment_tree(const std::vector<int>& sizes, bool take_max);
Network max_net(int k);
Network min_net(int k);

struct SynthOptions {
    std::uint64_t seed = 42;
    std::size_t prune_samples = 20000;
    bool strict_relu = false;
};

struct Synthesis {
    Network net;
    int base_depth = 0;
    std::vector<int> kept_members;  // membership ids realized in the piece stage
    std::vector<int> kept_caps;
};

// M translation blocks, one reflection block per schedule entry, the affine piece
// layer restricted to pieces reachable on the folded domain, then max/min trees.
Synthesis synthesize(const OrientedBasis& b, const FoldingSchedule& s, const BoundaryFunction& f, int M,
                     const SynthOptions& opt = {});

// Evaluates an extended network on y0, applying the floor reduction first for hybrid networks.
double eval_network(const Network& net, const OrientedBasis& b, const Vec& y0);

std::string network_to_json(const Network& net);
Network network_from_json(const std::string& text);

}  // namespace latfold
