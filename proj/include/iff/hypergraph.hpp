#pragma once

#include "iff/tokens.hpp"

namespace iff {

/// Hyperedges carry a set-valued arity over a name pool and a tuple assigning a
/// node to every name in that arity.
struct Hypergraph {
    TokenSet names;
    TokenSet nodes;
    std::map<Token, Assignment> edges;  // edge -> tuple (its domain is the arity)

    TokenSet arity(const Token& e) const {
        TokenSet out;
        for (const auto& [n, _] : at(edges, e, "hyperedge")) out.insert(n);
        return out;
    }

    TokenSet edge_ids() const {
        TokenSet out;
        for (const auto& [e, _] : edges) out.insert(e);
        return out;
    }

    friend bool operator==(const Hypergraph&, const Hypergraph&) = default;
};

inline std::vector<std::string> validate_hypergraph(const Hypergraph& h) {
    std::vector<std::string> out;
    for (const auto& [e, tuple] : h.edges)
        for (const auto& [n, v] : tuple) {
            if (!h.names.count(n)) out.push_back("edge " + e + " uses unknown name " + n);
            if (!h.nodes.count(v)) out.push_back("edge " + e + " links unknown node " + v);
        }
    return out;
}

struct HypergraphMorphism {
    Hypergraph source, target;
    TokenMap nodeMap, edgeMap, nameMap;
};

struct HypergraphCheck {
    bool ok = true;
    std::string witness;
    explicit operator bool() const { return ok; }
};

inline HypergraphCheck hypergraph_morphism_valid(const HypergraphMorphism& m) {
    auto total = [](const TokenMap& f, const TokenSet& dom, const TokenSet& cod, const char* what) {
        for (const auto& d : dom) {
            auto it = f.find(d);
            if (it == f.end() || !cod.count(it->second))
                throw DomainError(std::string(what) + " is not total on " + d);
        }
    };
    total(m.nodeMap, m.source.nodes, m.target.nodes, "node map");
    total(m.edgeMap, m.source.edge_ids(), m.target.edge_ids(), "edge map");
    total(m.nameMap, m.source.names, m.target.names, "name map");
    for (const auto& [e, tuple] : m.source.edges) {
        const auto& fe = m.edgeMap.at(e);
        if (m.target.arity(fe) != image(m.nameMap, m.source.arity(e)))
            return {false, "arity of " + e};
        const auto& target_tuple = m.target.edges.at(fe);
        for (const auto& [x, node] : tuple)
            if (target_tuple.at(m.nameMap.at(x)) != m.nodeMap.at(node))
                return {false, "tuple of " + e + " at " + x};
    }
    return {};
}

struct HypergraphProduct {
    Hypergraph product;
    HypergraphMorphism first, second;
};

/// Pairs nodes, and pairs hyperedges of equal arity.
inline HypergraphProduct hypergraph_product(const Hypergraph& a, const Hypergraph& b) {
    if (a.names != b.names) throw NameSetMismatch("hypergraph product needs a shared name pool");
    Hypergraph p;
    p.names = a.names;
    for (const auto& x : a.nodes)
        for (const auto& y : b.nodes) p.nodes.insert(tok::pair(x, y));
    for (const auto& [e, te] : a.edges)
        for (const auto& [f, tf] : b.edges) {
            if (a.arity(e) != b.arity(f)) continue;
            Assignment t;
            for (const auto& [n, v] : te) t[n] = tok::pair(v, tf.at(n));
            p.edges[tok::pair(e, f)] = t;
        }
    HypergraphProduct out{p, {p, a, {}, {}, {}}, {p, b, {}, {}, {}}};
    for (const auto& n : p.names) out.first.nameMap[n] = out.second.nameMap[n] = n;
    for (const auto& x : a.nodes)
        for (const auto& y : b.nodes) {
            out.first.nodeMap[tok::pair(x, y)] = x;
            out.second.nodeMap[tok::pair(x, y)] = y;
        }
    for (const auto& [e, _] : a.edges)
        for (const auto& [f, __] : b.edges)
            if (a.arity(e) == b.arity(f)) {
                out.first.edgeMap[tok::pair(e, f)] = e;
                out.second.edgeMap[tok::pair(e, f)] = f;
            }
    return out;
}

/// Subset of nodes and edges, agreeing with sup on arity and tuple, and closed:
/// every node linked by a retained edge is retained.
inline bool sub_hypergraph_check(const Hypergraph& sub, const Hypergraph& sup) {
    if (!is_subset(sub.names, sup.names) || !is_subset(sub.nodes, sup.nodes)) return false;
    for (const auto& [e, tuple] : sub.edges) {
        auto it = sup.edges.find(e);
        if (it == sup.edges.end() || it->second != tuple) return false;
        for (const auto& [_, v] : tuple)
            if (!sub.nodes.count(v)) return false;
    }
    return true;
}

}  // namespace iff
