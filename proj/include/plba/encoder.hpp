// Copyright (c) 2026 the plba project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <map>
#include <string>
#include <vector>

#include "plba/graph.hpp"
#include "plba/rng.hpp"
#include "plba/tape.hpp"

namespace plba {

// Where layer queries come from. `initial` builds q_i from the embedding
// output h^0 at every layer; `previous` uses the current layer state.
enum class QuerySource { initial, previous };

struct ModelConfig {
    int hidden_dim = 64;
    int num_layers = 4;
    int num_heads = 4;
    int rbf_centers = 20;
    double rbf_min = 0.0;   // angstrom
    double rbf_max = 10.0;  // angstrom
    int k = 8;              // graph in-degree
    QuerySource query_source = QuerySource::initial;
    bool disable_geometry = false;  // ablation: constants replace distances

    int head_dim() const { return hidden_dim / num_heads; }
    void validate() const;
};

// Gaussian bumps at evenly spaced centers; width = center spacing.
class RbfEmbedding {
public:
    RbfEmbedding(int count, double lo, double hi);

    std::vector<double> embed(double d) const;
    int size() const { return static_cast<int>(centers_.size()); }
    double center(int i) const { return centers_[i]; }
    double width() const { return tau_; }

private:
    std::vector<double> centers_;
    double tau_;
};

struct Parameter {
    std::string name;
    Tensor value;
    bool requires_grad = true;
};

// Tape handles of registered parameters, keyed by name.
using TapeParams = std::map<std::string, Var>;

// Distance the no-geometry ablation substitutes for every edge length.
inline constexpr double kAblationDistance = 4.0;

struct EncodeResult {
    Var all;      // (N+M) x D
    Var protein;  // N x D
    Var ligand;   // M x D
    Var initial;  // h^0
};

// Creates encoder parameters in deterministic order (weights uniform in
// +-1/sqrt(fan_in), biases zero, layer-norm gain one).
std::vector<Parameter> init_encoder_params(const ModelConfig& cfg, Rng& rng);

Var embed_initial(Tape& tape, const ComplexGraph& g, const TapeParams& p);

// Message for one node from its in-edges at one layer; exposed for tests.
Var attention_message(Tape& tape, const ComplexGraph& g, int node, Var h,
                      Var h0, const TapeParams& p, int layer,
                      const ModelConfig& cfg);

Var layer_forward(Tape& tape, const ComplexGraph& g, Var h, Var h0,
                  const TapeParams& p, int layer, const ModelConfig& cfg);

EncodeResult encode(Tape& tape, const ComplexGraph& g, const TapeParams& p,
                    const ModelConfig& cfg);

}  // namespace plba
