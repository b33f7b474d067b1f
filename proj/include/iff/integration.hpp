#pragma once

// Alignment diagrams, unification by fusion, and integration over a shared
// sub-universe.

#include "iff/logic.hpp"

namespace iff {

/// A validation failure on a named edge of an alignment diagram.
class EdgeFailure : public Error {
public:
    EdgeFailure(std::string edge, const std::string& witness)
        : Error(edge + ": " + witness), edge(std::move(edge)) {}
    std::string edge;
};

struct AlignmentDiagram {
    Logic L1, L2, P1, P2;
    LogicMorphism p1, p2;  // Lk -> Pk
    Theory T;
    TheoryMorphism g1, g2;  // T -> th(Pk)
    Logic K;                // the mediating logic
    LogicMorphism k1, k2;   // K -> Pk
};

struct IntegrationResult {
    Logic fused;
    LogicMorphism q;       // P1 + P2 -> fused
    LogicMorphism v1, v2;  // Pk -> fused
    LogicMorphism f1, f2;  // Lk -> fused
    Fusion detail;
};

struct IntegrationOptions {
    std::size_t bound = 2;
    std::size_t budget = kDefaultBudget;
    FreeLogicOptions free{};
};

inline void require_edge(const std::string& edge, const LogicMorphismVerdict& v) {
    if (!v) throw EdgeFailure(edge, v.witness());
}

inline void require_logic(const std::string& name, const Logic& l) {
    if (auto errs = validate_logic(l); !errs.empty()) throw EdgeFailure(name, errs.front());
    if (!is_sound(l)) throw EdgeFailure(name, "logic is not sound");
}

/// Validates every edge and lifts g1, g2 to k1, k2 through the free logic over T.
inline AlignmentDiagram build_alignment(const Logic& L1, const Logic& L2, const Logic& P1, const Logic& P2,
                                        const LogicMorphism& p1, const LogicMorphism& p2, const Theory& T,
                                        const TheoryMorphism& g1, const TheoryMorphism& g2,
                                        const IntegrationOptions& opt = {}) {
    require_logic("L1", L1);
    require_logic("L2", L2);
    require_logic("P1", P1);
    require_logic("P2", P2);
    if (!(p1.source == L1) || !(p1.target == P1)) throw EdgeFailure("p1", "does not link L1 to P1");
    if (!(p2.source == L2) || !(p2.target == P2)) throw EdgeFailure("p2", "does not link L2 to P2");
    require_edge("p1", logic_morphism_valid(p1, opt.bound, opt.budget));
    require_edge("p2", logic_morphism_valid(p2, opt.bound, opt.budget));
    if (auto errs = validate_theory(T); !errs.empty()) throw EdgeFailure("T", errs.front());
    for (const auto& [name, g, P] : {std::tuple{"g1", &g1, &P1}, std::tuple{"g2", &g2, &P2}}) {
        if (!(g->source == T) || !(g->target == P->theory))
            throw EdgeFailure(name, "does not link T to the portal theory");
        if (auto v = theory_morphism_valid(*g, opt.bound, opt.budget); !v) throw EdgeFailure(name, v.witness());
    }
    AlignmentDiagram d{L1, L2, P1, P2, p1, p2, T, g1, g2, {}, {}, {}};
    d.k1 = transpose(g1, P1, opt.free);
    d.k2 = transpose(g2, P2, opt.free);
    d.K = d.k1.source;
    require_edge("k1", logic_morphism_valid(d.k1, opt.bound, opt.budget));
    require_edge("k2", logic_morphism_valid(d.k2, opt.bound, opt.budget));
    return d;
}

/// Fuses the portals along k1, k2 and closes the opspan with the portal links.
inline IntegrationResult unify(const AlignmentDiagram& d, const IntegrationOptions& opt = {}) {
    IntegrationResult r;
    r.detail = fusion(d.k1, d.k2);
    r.fused = r.detail.fused;
    r.q = r.detail.quotient;
    r.v1 = r.detail.left;
    r.v2 = r.detail.right;
    r.f1 = compose(d.p1, r.v1);
    r.f2 = compose(d.p2, r.v2);
    require_logic("fused logic", r.fused);
    require_edge("v1", logic_morphism_valid(r.v1, opt.bound, opt.budget));
    require_edge("v2", logic_morphism_valid(r.v2, opt.bound, opt.budget));
    require_edge("f1", logic_morphism_valid(r.f1, opt.bound, opt.budget));
    require_edge("f2", logic_morphism_valid(r.f2, opt.bound, opt.budget));
    return r;
}

inline Theory empty_theory() { return {}; }

/// The morphism from the empty theory.
inline TheoryMorphism from_empty(const Theory& target) { return {empty_theory(), target, {{}, target.language, {}, {}, {}, false}}; }

/// Nothing aligned: the portals are the communities and the mediating theory is empty.
inline IntegrationResult trivial_integration(const Logic& L1, const Logic& L2, const IntegrationOptions& opt = {}) {
    auto d = build_alignment(L1, L2, L1, L2, identity(L1), identity(L2), empty_theory(), from_empty(L1.theory),
                             from_empty(L2.theory), opt);
    return unify(d, opt);
}

/// Everything aligned: both sides are l, mediated by l itself through identities.
inline IntegrationResult self_integration(const Logic& l, const IntegrationOptions& opt = {}) {
    require_logic("L", l);
    auto id = identity(l);
    AlignmentDiagram d{l, l, l, l, id, id, l.theory, identity(l.theory), identity(l.theory), l, id, id};
    return unify(d, opt);
}

// ---------------------------------------------------------------------------
// Integration over a shared sub-universe C

struct PracticalResult {
    IntegrationResult result;
    Restriction portal1, portal2;
    Logic fiber1, fiber2;
    Logic K;                    // the mediating logic at C
    LogicMorphism k1, k2;       // K -> Pk@C
    LogicMorphism mediating;    // free_logic(T) -> K
    Fusion freeFusion;          // fusion of the transposes over the free logic
    LogicMorphism comparison;   // free fusion -> fused logic
    std::vector<std::string> report;
};

/// First difference between two logics, as (what, instance, type).
inline std::optional<std::tuple<std::string, Token, Token>> first_difference(const Logic& a, const Logic& b) {
    auto diff = [](const PairSet& x, const PairSet& y) -> std::optional<TokenPair> {
        for (const auto& p : x)
            if (!y.count(p)) return p;
        for (const auto& p : y)
            if (!x.count(p)) return p;
        return std::nullopt;
    };
    if (!(a.theory == b.theory)) return std::tuple{std::string("theories"), Token{}, Token{}};
    if (auto d = diff(a.model.entityIncidence, b.model.entityIncidence))
        return std::tuple{std::string("entity incidence"), d->first, d->second};
    if (auto d = diff(a.model.relationIncidence, b.model.relationIncidence))
        return std::tuple{std::string("relation incidence"), d->first, d->second};
    if (a.model.entities != b.model.entities) return std::tuple{std::string("entities"), Token{}, Token{}};
    for (const auto& [t, c] : a.model.tuples) {
        auto it = b.model.tuples.find(t);
        if (it == b.model.tuples.end() || it->second != c)
            return std::tuple{std::string("tuple coordinates"), t, tok::assignment(c)};
    }
    if (a.model.tuples.size() != b.model.tuples.size()) return std::tuple{std::string("tuples"), Token{}, Token{}};
    if (a.normalEntities != b.normalEntities || a.normalTuples != b.normalTuples)
        return std::tuple{std::string("normal instances"), Token{}, Token{}};
    return std::nullopt;
}

/// K -> P that maps types through g and is the identity on instances.
inline LogicMorphism fiber_link(const Logic& K, const Logic& P, const TheoryMorphism& g) {
    LogicMorphism k{K, P, g.language, {}, {}};
    for (const auto& e : P.model.entities) k.entityMap[e] = e;
    for (const auto& [t, _] : P.model.tuples) k.tupleMap[t] = t;
    return k;
}

inline PracticalResult practical_integrate(const Logic& L1, const Logic& L2, const TokenSet& C, const Theory& T,
                                           const TheoryMorphism& g1, const TheoryMorphism& g2,
                                           const IntegrationOptions& opt = {}) {
    require_logic("L1", L1);
    require_logic("L2", L2);
    if (!is_subset(C, L1.model.entities) || !is_subset(C, L2.model.entities))
        throw SubsetViolation("C is not inside both universes");
    for (const auto& [name, g, L] : {std::tuple{"g1", &g1, &L1}, std::tuple{"g2", &g2, &L2}}) {
        if (!(g->source == T) || !(g->target == L->theory))
            throw EdgeFailure(name, "does not link T to the community theory");
        if (auto v = theory_morphism_valid(*g, opt.bound, opt.budget); !v) throw EdgeFailure(name, v.witness());
    }
    PracticalResult r;
    r.portal1 = restrict(L1, C);
    r.portal2 = restrict(L2, C);
    const auto& P1 = r.portal1.restricted;
    const auto& P2 = r.portal2.restricted;
    r.fiber1 = fiber(g1, P1);
    r.fiber2 = fiber(g2, P2);
    if (auto d = first_difference(r.fiber1, r.fiber2)) {
        auto [what, instance, type] = *d;
        throw AgreementFailure(what + " at (" + instance + ", " + type + ")", instance, type);
    }
    r.report.push_back("fibers agree on C");
    r.K = r.fiber1;
    r.k1 = fiber_link(r.K, P1, g1);
    r.k2 = fiber_link(r.K, P2, g2);
    require_edge("k1", logic_morphism_valid(r.k1, opt.bound, opt.budget));
    require_edge("k2", logic_morphism_valid(r.k2, opt.bound, opt.budget));

    AlignmentDiagram d{L1, L2, P1, P2, r.portal1.portal, r.portal2.portal, T, g1, g2, r.K, r.k1, r.k2};
    r.result = unify(d, opt);

    auto expected = theory_quotient(theory_sum(L1.theory, L2.theory).sum, r.result.detail.invariant.theoryPart);
    if (!(r.result.fused.theory == expected.quotient)) throw Error("fused theory differs from the theory fusion");
    r.report.push_back("fused theory is the theory fusion over T");
    TokenSet diagonal;
    for (const auto& c : C) diagonal.insert(tok::pair(c, c));
    if (r.result.fused.model.entities != diagonal) throw Error("fused universe is not the diagonal of C");
    r.report.push_back("fused universe is C");

    r.mediating = free_to_mediating(T, r.K, opt.free);
    require_edge("free logic -> K", logic_morphism_valid(r.mediating, opt.bound, opt.budget));
    r.freeFusion = fusion(transpose(g1, P1, opt.free), transpose(g2, P2, opt.free));
    r.comparison = LogicMorphism{r.freeFusion.fused, r.result.fused, identity(r.result.fused.theory.language), {}, {}};
    if (!(r.freeFusion.fused.theory == r.result.fused.theory))
        throw Error("free fusion and fusion at C carry different theories");
    for (const auto& e : r.result.fused.model.entities) r.comparison.entityMap[e] = e;
    for (const auto& [t, _] : r.result.fused.model.tuples) r.comparison.tupleMap[t] = t;
    require_edge("comparison", logic_morphism_valid(r.comparison, opt.bound, opt.budget));
    r.report.push_back("comparison morphism from the free fusion is valid");
    return r;
}

}  // namespace iff
