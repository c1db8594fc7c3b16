// Copyright (c) 2026 the plba project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <vector>

#include "plba/complex.hpp"
#include "plba/tensor.hpp"

namespace plba {

// Edge kind by (source partition, destination partition).
enum class EdgeKind : int { PP = 0, LL = 1, PL = 2, LP = 3 };

inline std::array<double, 4> edge_kind_one_hot(EdgeKind k) {
    std::array<double, 4> v{0.0, 0.0, 0.0, 0.0};
    v[static_cast<int>(k)] = 1.0;
    return v;
}

struct Edge {
    int src = 0;
    int dst = 0;
    EdgeKind kind = EdgeKind::PP;
    double distance = 0.0;  // angstrom
};

// Directed kNN graph over the combined atom set, protein atoms first.
// Edges are sorted by (dst, distance, src); in_offsets[i]..in_offsets[i+1]
// is the in-edge slice of node i.
struct ComplexGraph {
    Tensor protein_features;  // N x 27
    Tensor ligand_features;   // M x 26
    Tensor positions;         // (N+M) x 3
    std::vector<Edge> edges;
    std::vector<int> in_offsets;  // size N+M+1
    int num_protein = 0;
    int num_ligand = 0;

    int num_nodes() const { return num_protein + num_ligand; }
    bool is_protein_node(int i) const { return i < num_protein; }
};

// k in-neighbors per node by Euclidean distance (all n-1 when the graph is
// small); distance ties broken toward the lower node index.
ComplexGraph build_knn_graph(const Complex& c, int k);

// Coordinate-free variant for the no-geometry ablation: every ordered pair
// is an edge, ordered by (dst, src).
ComplexGraph build_complete_graph(const Complex& c);

}  // namespace plba
