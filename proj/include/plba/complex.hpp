// Copyright (c) 2026 the plba project
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "plba/tensor.hpp"

namespace plba {

using Vec3 = std::array<double, 3>;

inline double distance(const Vec3& a, const Vec3& b) {
    const double dx = a[0] - b[0], dy = a[1] - b[1], dz = a[2] - b[2];
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

struct ProteinAtom {
    std::string element;       // symbol; anything outside {C,N,O,S} buckets as other
    std::string residue_name;  // 3-letter code
    int residue_index = 0;
    char chain_id = 'A';
    bool is_backbone = false;
    Vec3 position{0.0, 0.0, 0.0};
};

enum class Hybridization { sp, sp2, sp3, other };

struct LigandAtom {
    std::string element;
    Hybridization hybridization = Hybridization::other;
    int formal_charge = 0;  // stored raw, clamped to [-2, 2] at featurization
    int degree = 0;
    bool is_aromatic = false;
    Vec3 position{0.0, 0.0, 0.0};
};

struct Complex {
    std::string id;
    std::vector<ProteinAtom> protein;
    std::vector<LigandAtom> ligand;
    std::optional<double> affinity;  // pK units

    std::size_t num_protein() const { return protein.size(); }
    std::size_t num_ligand() const { return ligand.size(); }
    std::size_t num_atoms() const { return protein.size() + ligand.size(); }

    // Position of combined-graph node i (protein atoms first).
    const Vec3& position(std::size_t i) const {
        return i < protein.size() ? protein[i].position
                                  : ligand[i - protein.size()].position;
    }
};

// Feature vector widths. Protein: element(5) + amino acid(21) + backbone(1).
// Ligand: element(10) + hybridization(4) + charge(5) + degree(6) +
// aromatic(1).
inline constexpr std::size_t kProteinFeatureDim = 27;
inline constexpr std::size_t kLigandFeatureDim = 26;

std::vector<double> featurize_protein_atom(const ProteinAtom& a);
std::vector<double> featurize_ligand_atom(const LigandAtom& a);

Tensor featurize_protein(const Complex& c);  // N x 27
Tensor featurize_ligand(const Complex& c);   // M x 26

// Parses the JSON interchange document. Throws Error(data) with a message
// prefixed "syntax error", "schema error" or "validation error".
Complex parse_complex(const std::string& text);
Complex load_complex(const std::string& path);

std::string complex_to_json(const Complex& c);

// Per-element van der Waals radii in angstrom; requires an `other` fallback
// entry. Values are configuration, shipped in data/vdw_radii.json.
class VdwRadiiTable {
public:
    static VdwRadiiTable defaults();
    static VdwRadiiTable from_map(std::map<std::string, double> radii);
    static VdwRadiiTable load(const std::string& path);

    double radius(const std::string& element) const;
    double radius_sum(const std::string& e1, const std::string& e2) const {
        return radius(e1) + radius(e2);
    }

    const std::map<std::string, double>& radii() const { return radii_; }

private:
    std::map<std::string, double> radii_;
};

}  // namespace plba
