// Copyright (c) 2026 the plba project
// SPDX-License-Identifier: Apache-2.0

#include "plba/complex.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "plba/error.hpp"

namespace plba {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

const std::vector<std::string> kProteinElements = {"C", "N", "O", "S"};
const std::vector<std::string> kLigandElements = {"C", "N", "O",  "S", "P",
                                                  "F", "Cl", "Br", "I"};
const std::vector<std::string> kAminoAcids = {
    "ALA", "ARG", "ASN", "ASP", "CYS", "GLN", "GLU", "GLY", "HIS", "ILE",
    "LEU", "LYS", "MET", "PHE", "PRO", "SER", "THR", "TRP", "TYR", "VAL"};

int vocab_index(const std::vector<std::string>& vocab,
                const std::string& value) {
    for (std::size_t i = 0; i < vocab.size(); ++i)
        if (vocab[i] == value) return static_cast<int>(i);
    return static_cast<int>(vocab.size());  // fallback bucket
}

[[noreturn]] void schema_error(const std::string& msg) {
    throw_data("schema error: " + msg);
}

[[noreturn]] void validation_error(const std::string& msg) {
    throw_data("validation error: " + msg);
}

void check_keys(const json& obj, const std::vector<std::string>& allowed,
                const std::string& where) {
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const auto& k : allowed)
            if (item.key() == k) known = true;
        if (!known)
            schema_error("unknown key '" + item.key() + "' in " + where);
    }
    for (const auto& k : allowed)
        if (!obj.contains(k))
            schema_error("missing key '" + k + "' in " + where);
}

Vec3 parse_xyz(const json& v, const std::string& where) {
    if (!v.is_array() || v.size() != 3)
        schema_error("'xyz' must be an array of 3 numbers in " + where);
    Vec3 out;
    for (int i = 0; i < 3; ++i) {
        if (!v[i].is_number())
            schema_error("'xyz' must be numeric in " + where);
        out[i] = v[i].get<double>();
        if (!std::isfinite(out[i]))
            validation_error("nonfinite coordinate in " + where);
    }
    return out;
}

Hybridization parse_hybridization(const json& v, const std::string& where) {
    if (!v.is_string())
        schema_error("'hybridization' must be a string in " + where);
    const std::string s = v.get<std::string>();
    if (s == "sp") return Hybridization::sp;
    if (s == "sp2") return Hybridization::sp2;
    if (s == "sp3") return Hybridization::sp3;
    if (s == "other") return Hybridization::other;
    schema_error("unknown hybridization '" + s + "' in " + where);
}

const char* hybridization_name(Hybridization h) {
    switch (h) {
        case Hybridization::sp: return "sp";
        case Hybridization::sp2: return "sp2";
        case Hybridization::sp3: return "sp3";
        case Hybridization::other: return "other";
    }
    return "other";
}

}  // namespace

std::vector<double> featurize_protein_atom(const ProteinAtom& a) {
    std::vector<double> f(kProteinFeatureDim, 0.0);
    f[vocab_index(kProteinElements, a.element)] = 1.0;
    f[5 + vocab_index(kAminoAcids, a.residue_name)] = 1.0;
    if (a.is_backbone) f[26] = 1.0;
    return f;
}

std::vector<double> featurize_ligand_atom(const LigandAtom& a) {
    std::vector<double> f(kLigandFeatureDim, 0.0);
    f[vocab_index(kLigandElements, a.element)] = 1.0;
    f[10 + static_cast<int>(a.hybridization)] = 1.0;
    const int charge = std::max(-2, std::min(2, a.formal_charge));
    f[14 + charge + 2] = 1.0;
    const int degree = std::min(a.degree, 5);
    f[19 + degree] = 1.0;
    if (a.is_aromatic) f[25] = 1.0;
    return f;
}

Tensor featurize_protein(const Complex& c) {
    Tensor out = Tensor::zeros({c.num_protein(), kProteinFeatureDim});
    for (std::size_t i = 0; i < c.num_protein(); ++i) {
        const auto f = featurize_protein_atom(c.protein[i]);
        for (std::size_t j = 0; j < kProteinFeatureDim; ++j)
            out.at(i, j) = f[j];
    }
    return out;
}

Tensor featurize_ligand(const Complex& c) {
    Tensor out = Tensor::zeros({c.num_ligand(), kLigandFeatureDim});
    for (std::size_t i = 0; i < c.num_ligand(); ++i) {
        const auto f = featurize_ligand_atom(c.ligand[i]);
        for (std::size_t j = 0; j < kLigandFeatureDim; ++j)
            out.at(i, j) = f[j];
    }
    return out;
}

Complex parse_complex(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw_data(std::string("syntax error: ") + e.what());
    }
    if (!doc.is_object()) schema_error("document root must be an object");
    check_keys(doc, {"id", "affinity", "protein", "ligand"}, "document");

    Complex c;
    if (!doc["id"].is_string()) schema_error("'id' must be a string");
    c.id = doc["id"].get<std::string>();

    if (doc["affinity"].is_null())
        c.affinity = std::nullopt;
    else if (doc["affinity"].is_number())
        c.affinity = doc["affinity"].get<double>();
    else
        schema_error("'affinity' must be a number or null");

    if (!doc["protein"].is_array()) schema_error("'protein' must be an array");
    if (!doc["ligand"].is_array()) schema_error("'ligand' must be an array");
    if (doc["protein"].empty()) schema_error("'protein' must not be empty");
    if (doc["ligand"].empty()) schema_error("'ligand' must not be empty");

    int n = 0;
    for (const json& pa : doc["protein"]) {
        const std::string where = "protein atom " + std::to_string(n++);
        if (!pa.is_object()) schema_error(where + " must be an object");
        check_keys(pa,
                   {"element", "residue_name", "residue_index", "chain_id",
                    "is_backbone", "xyz"},
                   where);
        ProteinAtom a;
        if (!pa["element"].is_string())
            schema_error("'element' must be a string in " + where);
        a.element = pa["element"].get<std::string>();
        if (!pa["residue_name"].is_string())
            schema_error("'residue_name' must be a string in " + where);
        a.residue_name = pa["residue_name"].get<std::string>();
        if (!pa["residue_index"].is_number_integer())
            schema_error("'residue_index' must be an integer in " + where);
        a.residue_index = pa["residue_index"].get<int>();
        if (!pa["chain_id"].is_string() ||
            pa["chain_id"].get<std::string>().size() != 1)
            schema_error("'chain_id' must be a single character in " + where);
        a.chain_id = pa["chain_id"].get<std::string>()[0];
        if (!pa["is_backbone"].is_boolean())
            schema_error("'is_backbone' must be a boolean in " + where);
        a.is_backbone = pa["is_backbone"].get<bool>();
        a.position = parse_xyz(pa["xyz"], where);
        c.protein.push_back(std::move(a));
    }

    int m = 0;
    for (const json& la : doc["ligand"]) {
        const std::string where = "ligand atom " + std::to_string(m++);
        if (!la.is_object()) schema_error(where + " must be an object");
        check_keys(la,
                   {"element", "hybridization", "formal_charge", "degree",
                    "is_aromatic", "xyz"},
                   where);
        LigandAtom a;
        if (!la["element"].is_string())
            schema_error("'element' must be a string in " + where);
        a.element = la["element"].get<std::string>();
        a.hybridization = parse_hybridization(la["hybridization"], where);
        if (!la["formal_charge"].is_number_integer())
            schema_error("'formal_charge' must be an integer in " + where);
        a.formal_charge = la["formal_charge"].get<int>();
        if (!la["degree"].is_number_integer() || la["degree"].get<int>() < 0)
            schema_error("'degree' must be a non-negative integer in " +
                         where);
        a.degree = la["degree"].get<int>();
        if (a.degree > 8)
            validation_error("degree > 8 in " + where);
        if (!la["is_aromatic"].is_boolean())
            schema_error("'is_aromatic' must be a boolean in " + where);
        a.is_aromatic = la["is_aromatic"].get<bool>();
        a.position = parse_xyz(la["xyz"], where);
        c.ligand.push_back(std::move(a));
    }

    // duplicate-coordinate inputs fail loudly: the LJ term diverges as d -> 0
    const std::size_t total = c.num_atoms();
    for (std::size_t i = 0; i < total; ++i)
        for (std::size_t j = i + 1; j < total; ++j)
            if (distance(c.position(i), c.position(j)) <= 1e-3)
                validation_error(
                    "duplicate coordinates: atoms " + std::to_string(i) +
                    " and " + std::to_string(j) + " in complex '" + c.id +
                    "'");
    return c;
}

Complex load_complex(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_data("cannot open complex file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_complex(ss.str());
    } catch (const Error& e) {
        throw Error(e.kind(), path + ": " + e.what());
    }
}

std::string complex_to_json(const Complex& c) {
    ordered_json doc;
    doc["id"] = c.id;
    if (c.affinity)
        doc["affinity"] = *c.affinity;
    else
        doc["affinity"] = nullptr;
    doc["protein"] = ordered_json::array();
    for (const ProteinAtom& a : c.protein) {
        ordered_json pa;
        pa["element"] = a.element;
        pa["residue_name"] = a.residue_name;
        pa["residue_index"] = a.residue_index;
        pa["chain_id"] = std::string(1, a.chain_id);
        pa["is_backbone"] = a.is_backbone;
        pa["xyz"] = {a.position[0], a.position[1], a.position[2]};
        doc["protein"].push_back(std::move(pa));
    }
    doc["ligand"] = ordered_json::array();
    for (const LigandAtom& a : c.ligand) {
        ordered_json la;
        la["element"] = a.element;
        la["hybridization"] = hybridization_name(a.hybridization);
        la["formal_charge"] = a.formal_charge;
        la["degree"] = a.degree;
        la["is_aromatic"] = a.is_aromatic;
        la["xyz"] = {a.position[0], a.position[1], a.position[2]};
        doc["ligand"].push_back(std::move(la));
    }
    return doc.dump(2) + "\n";
}

VdwRadiiTable VdwRadiiTable::defaults() {
    // X-score-flavoured contact radii, one per vocabulary element.
    return from_map({{"C", 1.9},
                     {"N", 1.8},
                     {"O", 1.7},
                     {"S", 2.0},
                     {"P", 2.1},
                     {"F", 1.5},
                     {"Cl", 1.8},
                     {"Br", 1.95},
                     {"I", 2.15},
                     {"other", 1.8}});
}

VdwRadiiTable VdwRadiiTable::from_map(std::map<std::string, double> radii) {
    if (radii.find("other") == radii.end())
        throw_data("vdW radii table requires an 'other' entry");
    for (const auto& [el, r] : radii)
        if (!(r > 0.0) || !std::isfinite(r))
            throw_data("vdW radius for '" + el + "' must be positive");
    VdwRadiiTable t;
    t.radii_ = std::move(radii);
    return t;
}

VdwRadiiTable VdwRadiiTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw_data("cannot open vdW radii table: " + path);
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw_data("vdW radii table " + path + ": " + e.what());
    }
    if (!doc.is_object()) throw_data("vdW radii table must be a JSON object");
    std::map<std::string, double> radii;
    for (const auto& item : doc.items()) {
        if (!item.value().is_number())
            throw_data("vdW radius for '" + item.key() + "' must be a number");
        radii[item.key()] = item.value().get<double>();
    }
    return from_map(std::move(radii));
}

double VdwRadiiTable::radius(const std::string& element) const {
    auto it = radii_.find(element);
    if (it == radii_.end()) it = radii_.find("other");
    return it->second;
}

}  // namespace plba
