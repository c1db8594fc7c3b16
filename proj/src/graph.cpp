// Copyright (c) 2026 the plba project
// SPDX-License-Identifier: Apache-2.0

#include "plba/graph.hpp"

#include <algorithm>
#include <cmath>

#include "plba/error.hpp"

namespace plba {

namespace {

Tensor positions_of(const Complex& c) {
    Tensor pos = Tensor::zeros({c.num_atoms(), 3});
    for (std::size_t i = 0; i < c.num_atoms(); ++i) {
        const Vec3& p = c.position(i);
        pos.at(i, 0) = p[0];
        pos.at(i, 1) = p[1];
        pos.at(i, 2) = p[2];
    }
    return pos;
}

EdgeKind kind_of(bool src_is_protein, bool dst_is_protein) {
    if (src_is_protein && dst_is_protein) return EdgeKind::PP;
    if (!src_is_protein && !dst_is_protein) return EdgeKind::LL;
    return src_is_protein ? EdgeKind::PL : EdgeKind::LP;
}

ComplexGraph graph_shell(const Complex& c) {
    ComplexGraph g;
    g.protein_features = featurize_protein(c);
    g.ligand_features = featurize_ligand(c);
    g.positions = positions_of(c);
    g.num_protein = static_cast<int>(c.num_protein());
    g.num_ligand = static_cast<int>(c.num_ligand());
    return g;
}

void fill_offsets(ComplexGraph& g) {
    const int n = g.num_nodes();
    g.in_offsets.assign(n + 1, 0);
    for (const Edge& e : g.edges) g.in_offsets[e.dst + 1]++;
    for (int i = 0; i < n; ++i) g.in_offsets[i + 1] += g.in_offsets[i];
}

}  // namespace

ComplexGraph build_knn_graph(const Complex& c, int k) {
    if (k < 1) throw_data("build_knn_graph: k must be >= 1");
    ComplexGraph g = graph_shell(c);
    const int n = g.num_nodes();
    if (n < 2) throw_data("build_knn_graph: need at least 2 atoms");

    // selection by squared distance; sqrt is monotone so the order (and the
    // lower-index tie break) is identical
    struct Cand {
        double d2;
        int j;
    };
    std::vector<Cand> cands;
    cands.reserve(n - 1);
    const int keep = std::min(k, n - 1);
    g.edges.reserve(static_cast<std::size_t>(keep) * n);

    for (int dst = 0; dst < n; ++dst) {
        cands.clear();
        const Vec3& pd = c.position(dst);
        for (int j = 0; j < n; ++j) {
            if (j == dst) continue;
            const Vec3& pj = c.position(j);
            const double dx = pj[0] - pd[0], dy = pj[1] - pd[1],
                         dz = pj[2] - pd[2];
            cands.push_back({dx * dx + dy * dy + dz * dz, j});
        }
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            if (a.d2 != b.d2) return a.d2 < b.d2;
            return a.j < b.j;
        });
        for (int s = 0; s < keep; ++s) {
            const Cand& cd = cands[s];
            g.edges.push_back({cd.j, dst,
                               kind_of(g.is_protein_node(cd.j),
                                       g.is_protein_node(dst)),
                               std::sqrt(cd.d2)});
        }
    }
    fill_offsets(g);
    return g;
}

ComplexGraph build_complete_graph(const Complex& c) {
    ComplexGraph g = graph_shell(c);
    const int n = g.num_nodes();
    if (n < 2) throw_data("build_complete_graph: need at least 2 atoms");
    g.edges.reserve(static_cast<std::size_t>(n) * (n - 1));
    for (int dst = 0; dst < n; ++dst) {
        for (int src = 0; src < n; ++src) {
            if (src == dst) continue;
            g.edges.push_back({src, dst,
                               kind_of(g.is_protein_node(src),
                                       g.is_protein_node(dst)),
                               distance(c.position(src), c.position(dst))});
        }
    }
    fill_offsets(g);
    return g;
}

}  // namespace plba
