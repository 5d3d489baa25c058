#pragma once

#include "polaris/abstract_graphs.hpp"
#include "polaris/apartments.hpp"
#include "polaris/polar_space.hpp"

#include <json.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace polaris {

using Json = nlohmann::ordered_json;

// Subspace format: {"p": prime, "ambient": d, "rows": [[ints]]} with rows in
// canonical reduced row-echelon form, so file-level equality is subspace
// equality.

inline Json subspace_to_json(const RowSpace& x) {
    Json j;
    j["p"] = x.p;
    j["ambient"] = x.ambient;
    j["rows"] = Json::array();
    for (const auto& row : x.rows) j["rows"].push_back(row);
    return j;
}

inline RowSpace subspace_from_json(const Json& j) {
    uint32_t p = j.at("p").get<uint32_t>();
    int ambient = j.at("ambient").get<int>();
    Matrix rows;
    for (const auto& r : j.at("rows")) rows.push_back(r.get<Vec>());
    RowSpace canon = rref_canonical(rows, p, ambient);
    if (canon.rows != rows)
        throw std::invalid_argument("subspace rows are not in canonical form");
    return canon;
}

inline Json signed_set_to_json(const SignedSet& v) {
    Json j = Json::array();
    for (int e : v.elems) j.push_back(e);
    return j;
}

inline SignedSet signed_set_from_json(const Json& j) {
    return SignedSet::of(j.get<std::vector<int>>());
}

inline Json header_json(const std::string& command, uint64_t seed) {
    Json h;
    h["tool"] = "polaris";
    h["format"] = 1;
    h["command"] = command;
    h["generator"] = "splitmix64";
    h["seed"] = seed;
    return h;
}

// ---------------------------------------------------------------------------
// Graphs

/// Graph with subspace-labeled vertices (Grassmann levels).
inline Json grassmann_graph_to_json(const PolarSpace& s, const std::vector<RowSpace>& verts,
                                    const std::vector<std::vector<uint8_t>>& adj,
                                    const Json& header) {
    (void)s;
    Json j;
    j["header"] = header;
    j["vertices"] = Json::array();
    for (size_t i = 0; i < verts.size(); ++i) {
        Json v;
        v["id"] = i;
        v["subspace"] = subspace_to_json(verts[i]);
        j["vertices"].push_back(std::move(v));
    }
    j["edges"] = Json::array();
    for (size_t a = 0; a < verts.size(); ++a)
        for (size_t b = a + 1; b < verts.size(); ++b)
            if (adj[a][b]) j["edges"].push_back(Json::array({a, b}));
    return j;
}

inline Json abstract_graph_to_json(const AbstractGraph& g, const Json& header) {
    Json j;
    j["header"] = header;
    j["name"] = g.name;
    j["vertices"] = Json::array();
    for (int i = 0; i < g.size(); ++i) {
        Json v;
        v["id"] = i;
        v["set"] = signed_set_to_json(g.labels[i]);
        j["vertices"].push_back(std::move(v));
    }
    j["edges"] = Json::array();
    for (int a = 0; a < g.size(); ++a)
        for (int b = a + 1; b < g.size(); ++b)
            if (g.adj[a][b]) j["edges"].push_back(Json::array({a, b}));
    return j;
}

struct ParsedGraph {
    std::vector<RowSpace> subspaces; // when vertices carry subspaces
    std::vector<SignedSet> sets;     // when vertices carry signed sets
    std::vector<std::pair<int, int>> edges;
};

inline ParsedGraph graph_from_json(const Json& j) {
    ParsedGraph g;
    for (const auto& v : j.at("vertices")) {
        if (v.contains("subspace")) g.subspaces.push_back(subspace_from_json(v.at("subspace")));
        if (v.contains("set")) g.sets.push_back(signed_set_from_json(v.at("set")));
    }
    for (const auto& e : j.at("edges"))
        g.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    return g;
}

/// DOT export: stable registry-order ids, no layout hints.
inline std::string graph_to_dot(const std::string& name, size_t vertex_count,
                                const std::vector<std::pair<int, int>>& edges,
                                const std::vector<std::string>& labels = {}) {
    std::ostringstream os;
    os << "graph \"" << name << "\" {\n";
    for (size_t v = 0; v < vertex_count; ++v) {
        os << "  " << v;
        if (v < labels.size()) os << " [label=\"" << labels[v] << "\"]";
        os << ";\n";
    }
    for (const auto& [a, b] : edges) os << "  " << a << " -- " << b << ";\n";
    os << "}\n";
    return os.str();
}

// ---------------------------------------------------------------------------
// Subspace lists and certificates

inline Json members_to_json(const std::vector<RowSpace>& xs, const Json& header) {
    Json j;
    j["header"] = header;
    j["members"] = Json::array();
    for (const auto& x : xs) j["members"].push_back(subspace_to_json(x));
    return j;
}

inline std::vector<RowSpace> members_from_json(const Json& j) {
    std::vector<RowSpace> out;
    for (const auto& x : j.at("members")) out.push_back(subspace_from_json(x));
    return out;
}

inline Json certificate_to_json(const Certificate& cert, const Json& header) {
    Json j;
    j["header"] = header;
    j["l"] = cert.l;
    j["m"] = cert.m;
    j["k"] = cert.k;
    j["N"] = subspace_to_json(cert.n);
    j["Q"] = Json::array();
    for (const auto& q : cert.q) j["Q"].push_back(subspace_to_json(q));
    // sigma pairs the slots (2i, 2i+1)
    Json sigma = Json::array();
    for (size_t i = 0; i < cert.q.size(); ++i) sigma.push_back(i ^ 1);
    j["sigma"] = std::move(sigma);
    j["spanning_table"] = Json::array();
    for (size_t v = 0; v < cert.vertices.size(); ++v) {
        Json row;
        row["vertex"] = signed_set_to_json(cert.vertices[v]);
        row["q_slots"] = cert.table[v];
        row["member"] = subspace_to_json(cert.regenerated[v]);
        j["spanning_table"].push_back(std::move(row));
    }
    return j;
}

inline Json rejection_to_json(const Rejection& r, const Json& header) {
    Json j;
    j["header"] = header;
    j["clause"] = r.clause;
    j["detail"] = r.detail;
    return j;
}

// ---------------------------------------------------------------------------
// Atomic file output: write to a temp sibling, then rename.

inline void atomic_write(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
        out << content;
        if (!out) throw std::runtime_error("write failed for " + tmp);
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
        throw std::runtime_error("rename failed for " + path);
}

inline void write_json(const std::string& path, const Json& j) {
    atomic_write(path, j.dump(2) + "\n");
}

inline Json read_json(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    Json j;
    in >> j;
    return j;
}

} // namespace polaris
