#pragma once

// Finite models: an entity classification and a relation classification over
// one type language, whose instances form a hypergraph (tuples are hyperedges
// whose coordinates are entities).

#include "iff/classification.hpp"
#include "iff/hypergraph.hpp"
#include "iff/language.hpp"

namespace iff {

struct Model {
    TypeLanguage language;
    TokenSet entities;
    PairSet entityIncidence;              // (entity, entity type)
    std::map<Token, Assignment> tuples;   // tuple -> coordinates; the domain is its arity
    PairSet relationIncidence;            // (tuple, relation type)

    bool entity_has(const Token& e, const Token& type) const { return entityIncidence.count({e, type}) > 0; }
    bool tuple_has(const Token& t, const Token& rel) const { return relationIncidence.count({t, rel}) > 0; }

    TokenSet tuple_ids() const {
        TokenSet out;
        for (const auto& [t, _] : tuples) out.insert(t);
        return out;
    }

    TokenSet arity(const Token& t) const {
        TokenSet out;
        for (const auto& [x, _] : at(tuples, t, "tuple")) out.insert(x);
        return out;
    }

    TokenSet sort_extent(const Token& type) const {
        TokenSet out;
        for (const auto& [e, a] : entityIncidence)
            if (a == type) out.insert(e);
        return out;
    }

    /// Restrictions to arity(rel) of the coordinates of every tuple classified by rel.
    std::set<Assignment> relation_extent(const Token& rel) const {
        std::set<Assignment> out;
        const auto& ar = language.arity_of(rel);
        for (const auto& [t, r] : relationIncidence)
            if (r == rel) out.insert(restrict_to(tuples.at(t), ar));
        return out;
    }

    Classification entity_classification() const {
        return {entities, language.entityTypes, entityIncidence};
    }
    Classification relation_classification() const {
        return {tuple_ids(), language.relationTypes, relationIncidence};
    }
    Hypergraph instance_hypergraph() const { return {language.variables, entities, tuples}; }

    friend bool operator==(const Model&, const Model&) = default;
};

/// Tuples are the extent assignments themselves and a tuple is classified by
/// every relation type whose arity it covers and whose extent holds its restriction.
inline Model model_from_extents(const TypeLanguage& language, const TokenSet& entities,
                                const PairSet& entityIncidence,
                                const std::map<Token, std::set<Assignment>>& extents) {
    Model m{language, entities, entityIncidence, {}, {}};
    for (const auto& [rel, ext] : extents) {
        if (!language.relationTypes.count(rel)) throw DomainError("extent for unknown relation " + rel);
        for (const auto& a : ext) m.tuples[tok::assignment(a)] = a;
    }
    for (const auto& [t, coords] : m.tuples)
        for (const auto& [rel, ext] : extents) {
            const auto& ar = language.arity_of(rel);
            if (is_subset(ar, m.arity(t)) && ext.count(restrict_to(coords, ar)))
                m.relationIncidence.insert({t, rel});
        }
    return m;
}

inline std::vector<std::string> validate_model(const Model& m) {
    auto out = validate_language(m.language);
    for (const auto& [e, a] : m.entityIncidence) {
        if (!m.entities.count(e)) out.push_back("entity incidence names unknown entity " + e);
        if (!m.language.entityTypes.count(a)) out.push_back("entity incidence names unknown type " + a);
    }
    for (const auto& [t, coords] : m.tuples)
        for (const auto& [x, e] : coords) {
            if (!m.language.variables.count(x)) out.push_back("tuple " + t + " uses unknown variable " + x);
            if (!m.entities.count(e)) out.push_back("tuple " + t + " links unknown entity " + e);
        }
    for (const auto& [t, r] : m.relationIncidence) {
        if (!m.tuples.count(t)) {
            out.push_back("relation incidence names unknown tuple " + t);
            continue;
        }
        if (!m.language.relationTypes.count(r)) {
            out.push_back("relation incidence names unknown relation type " + r);
            continue;
        }
        const auto& coords = m.tuples.at(t);
        for (const auto& x : m.language.arity_of(r)) {
            auto it = coords.find(x);
            if (it == coords.end())
                out.push_back("tuple " + t + " is classified by " + r + " but lacks variable " + x);
            else if (!m.entity_has(it->second, m.language.reference_of(x)))
                out.push_back("tuple " + t + " is classified by " + r + " but is ill-sorted at " + x);
        }
    }
    return out;
}

/// Recursive evaluation of expressions at assignments.  Quantifiers range over
/// the extent of the bound variable's sort.
class Evaluator {
public:
    explicit Evaluator(Model m) : m_(std::move(m)) {
        for (const auto& a : m_.language.entityTypes) sorts_[a] = m_.sort_extent(a);
        for (const auto& r : m_.language.relationTypes) extents_[r] = m_.relation_extent(r);
    }

    bool well_sorted(const Assignment& a) const {
        for (const auto& [x, e] : a)
            if (!m_.language.variables.count(x) || !sorts_.at(m_.language.reference_of(x)).count(e))
                return false;
        return true;
    }

    bool holds(const Assignment& t, const Expression& e) const {
        auto fv = free_vars(m_.language, e);
        for (const auto& x : fv)
            if (!t.count(x)) throw LaxViolation("expression " + e.str() + " needs variable " + x);
        auto local = restrict_to(t, fv);
        if (!well_sorted(local)) throw Error("ill-sorted assignment " + tok::assignment(local));
        return eval(local, e);
    }

    /// Every well-sorted assignment on exactly free_vars(e) holds e.
    bool satisfies(const Expression& e) const {
        auto fv = free_vars(m_.language, e);
        bool ok = true;
        for_each_assignment(fv, [&](const Assignment& a) {
            if (ok && !eval(a, e)) ok = false;
        });
        return ok;
    }

    void for_each_assignment(const TokenSet& vars, const std::function<void(const Assignment&)>& fn) const {
        std::vector<Token> xs(vars.begin(), vars.end());
        Assignment a;
        std::function<void(std::size_t)> rec = [&](std::size_t i) {
            if (i == xs.size()) {
                fn(a);
                return;
            }
            for (const auto& e : sorts_.at(m_.language.reference_of(xs[i]))) {
                a[xs[i]] = e;
                rec(i + 1);
            }
            a.erase(xs[i]);
        };
        rec(0);
    }

    const TokenSet& sort(const Token& type) const { return sorts_.at(type); }

private:
    bool eval(const Assignment& a, const Expression& e) const {
        switch (e.op()) {
            case Op::Atom:
                return extents_.at(e.name()).count(restrict_to(a, m_.language.arity_of(e.name()))) > 0;
            case Op::Not: return !eval(a, e.body());
            case Op::And: return eval(a, e.lhs()) && eval(a, e.rhs());
            case Op::Or: return eval(a, e.lhs()) || eval(a, e.rhs());
            case Op::Implies: return !eval(a, e.lhs()) || eval(a, e.rhs());
            case Op::Exists:
            case Op::Forall: {
                const bool exists = e.op() == Op::Exists;
                Assignment b = a;
                for (const auto& d : sorts_.at(m_.language.reference_of(e.name()))) {
                    b[e.name()] = d;
                    if (eval(b, e.body()) == exists) return exists;
                }
                return !exists;
            }
            case Op::Subst: {
                Assignment b;
                for (const auto& y : free_vars(m_.language, e.body()))
                    b[y] = a.at(e.mapping().at(y));
                return eval(b, e.body());
            }
        }
        return false;
    }

    Model m_;
    std::map<Token, TokenSet> sorts_;
    std::map<Token, std::set<Assignment>> extents_;
};

inline bool holds(const Model& m, const Assignment& t, const Expression& e) { return Evaluator(m).holds(t, e); }
inline bool satisfies(const Model& m, const Expression& e) { return Evaluator(m).satisfies(e); }

/// Lax classification of a tuple by an expression: explicit incidence for
/// atoms, evaluation at the tuple's coordinates otherwise.
inline bool tuple_satisfies(const Model& m, const Token& tuple, const Expression& e) {
    if (e.op() == Op::Atom) return m.tuple_has(tuple, e.name());
    const auto& coords = m.tuples.at(tuple);
    Evaluator ev(m);
    for (const auto& x : free_vars(m.language, e))
        if (!coords.count(x)) return false;
    auto local = restrict_to(coords, free_vars(m.language, e));
    return ev.well_sorted(local) && ev.holds(local, e);
}

/// Types forward along `language`; entities and tuples backward.
struct ModelMorphism {
    Model source, target;
    LanguageMorphism language;
    TokenMap entityMap;  // target entities -> source entities
    TokenMap tupleMap;   // target tuples -> source tuples
};

inline Infomorphism entity_infomorphism(const ModelMorphism& f) {
    return {f.source.entity_classification(), f.target.entity_classification(), f.language.entityMap,
            f.entityMap};
}

inline Infomorphism relation_infomorphism(const ModelMorphism& f) {
    Infomorphism r{f.source.relation_classification(), f.target.relation_classification(), {}, f.tupleMap};
    for (const auto& rel : f.source.language.relationTypes) r.typeMap[rel] = f.language.relation_of(rel);
    return r;
}

inline MorphismCheck model_morphism_valid(const ModelMorphism& f) {
    auto lang = language_morphism_valid(f.language);
    if (!lang) return MorphismCheck::fail("language: " + lang.witness);
    require_total(f.entityMap, f.target.entities, f.source.entities, "entity map");
    require_total(f.tupleMap, f.target.tuple_ids(), f.source.tuple_ids(), "tuple map");

    if (auto c = infomorphism_valid(entity_infomorphism(f)); !c)
        return MorphismCheck::fail("entity infomorphism at (" + c.witness->first + ", " + c.witness->second + ")");

    for (const auto& [c, t] : f.tupleMap)
        for (const auto& rel : f.source.language.relationTypes)
            if (f.source.tuple_has(t, rel) != tuple_satisfies(f.target, c, f.language.relationMap.at(rel)))
                return MorphismCheck::fail("relation infomorphism at (" + c + ", " + rel + ")");

    for (const auto& [c, t] : f.tupleMap) {
        const auto& tc = f.target.tuples.at(c);
        const auto& ts = f.source.tuples.at(t);
        TokenSet pulled;
        for (const auto& [x, y] : f.language.varMap)
            if (tc.count(y)) pulled.insert(x);
        if (f.source.arity(t) != pulled) return MorphismCheck::fail("arity of tuple " + c);
        for (const auto& x : pulled)
            if (ts.at(x) != f.entityMap.at(tc.at(f.language.varMap.at(x))))
                return MorphismCheck::fail("coordinate of tuple " + c + " at " + x);
    }
    return {};
}

inline ModelMorphism identity(const Model& m) {
    ModelMorphism f{m, m, identity(m.language), {}, {}};
    for (const auto& e : m.entities) f.entityMap[e] = e;
    for (const auto& [t, _] : m.tuples) f.tupleMap[t] = t;
    return f;
}

/// f then g.
inline ModelMorphism compose(const ModelMorphism& f, const ModelMorphism& g) {
    ModelMorphism h{f.source, g.target, compose(f.language, g.language), {}, {}};
    for (const auto& [c, b] : g.entityMap) h.entityMap[c] = at(f.entityMap, b, "entity map");
    for (const auto& [c, b] : g.tupleMap) h.tupleMap[c] = at(f.tupleMap, b, "tuple map");
    return h;
}

/// Keeps the given entities, and those of the given tuples whose coordinates all survive.
inline Model submodel(const Model& m, const TokenSet& entities, const TokenSet& tuples) {
    Model s{m.language, entities, {}, {}, {}};
    for (const auto& p : m.entityIncidence)
        if (entities.count(p.first)) s.entityIncidence.insert(p);
    for (const auto& t : tuples) {
        const auto& coords = at(m.tuples, t, "tuple");
        if (std::all_of(coords.begin(), coords.end(), [&](const auto& kv) { return entities.count(kv.second); }))
            s.tuples[t] = coords;
    }
    for (const auto& p : m.relationIncidence)
        if (s.tuples.count(p.first)) s.relationIncidence.insert(p);
    return s;
}

struct ModelSum {
    Model sum;
    ModelMorphism left, right;
    std::map<Token, std::pair<Token, Token>> entityParts;  // sum entity -> components
    std::map<Token, std::pair<Token, Token>> tupleParts;   // sum tuple -> component tuples
};

/// Entities pair up.  A sum tuple pairs a tuple of each side and places, at
/// every tagged variable of either arity, an entity pair whose own side is the
/// component coordinate and whose other side ranges over all entities.
inline ModelSum model_sum(const Model& a, const Model& b) {
    auto ls = language_sum(a.language, b.language);
    ModelSum out;
    auto& s = out.sum;
    s.language = ls.sum;
    for (const auto& x : a.entities)
        for (const auto& y : b.entities) {
            auto p = tok::pair(x, y);
            s.entities.insert(p);
            out.entityParts[p] = {x, y};
            for (const auto& t : a.entity_classification().intent(x)) s.entityIncidence.insert({p, tok::left(t)});
            for (const auto& t : b.entity_classification().intent(y)) s.entityIncidence.insert({p, tok::right(t)});
        }
    for (const auto& [t1, c1] : a.tuples)
        for (const auto& [t2, c2] : b.tuples) {
            // slots: (sum variable, fixed component, is-left)
            std::vector<std::tuple<Token, Token, bool>> slots;
            for (const auto& [x, e] : c1) slots.emplace_back(tok::left(x), e, true);
            for (const auto& [y, e] : c2) slots.emplace_back(tok::right(y), e, false);
            Assignment coords;
            std::function<void(std::size_t)> rec = [&](std::size_t i) {
                if (i == slots.size()) {
                    auto id = "<" + t1 + "," + t2 + "," + tok::assignment(coords) + ">";
                    s.tuples[id] = coords;
                    out.tupleParts[id] = {t1, t2};
                    return;
                }
                const auto& [var, fixed, isLeft] = slots[i];
                for (const auto& other : isLeft ? b.entities : a.entities) {
                    coords[var] = isLeft ? tok::pair(fixed, other) : tok::pair(other, fixed);
                    rec(i + 1);
                }
                coords.erase(var);
            };
            rec(0);
        }
    for (const auto& [id, parts] : out.tupleParts) {
        for (const auto& r : a.language.relationTypes)
            if (a.tuple_has(parts.first, r)) s.relationIncidence.insert({id, tok::left(r)});
        for (const auto& r : b.language.relationTypes)
            if (b.tuple_has(parts.second, r)) s.relationIncidence.insert({id, tok::right(r)});
    }
    out.left = ModelMorphism{a, s, ls.left, {}, {}};
    out.right = ModelMorphism{b, s, ls.right, {}, {}};
    for (const auto& [p, parts] : out.entityParts) {
        out.left.entityMap[p] = parts.first;
        out.right.entityMap[p] = parts.second;
    }
    for (const auto& [id, parts] : out.tupleParts) {
        out.left.tupleMap[id] = parts.first;
        out.right.tupleMap[id] = parts.second;
    }
    return out;
}

/// Retained entities and tuples (a closed sub-hypergraph) and an endorelation on types.
struct ModelDualInvariant {
    TokenSet entities;
    TokenSet tuples;
    LanguageEndorelation types;
};

struct ModelQuotient {
    Model quotient;
    ModelMorphism canonical;  // a -> quotient
    LanguageQuotient language;
};

inline ModelQuotient model_dual_quotient(const Model& a, const ModelDualInvariant& j) {
    Hypergraph sub{a.language.variables, j.entities, {}};
    for (const auto& t : j.tuples) sub.edges[t] = at(a.tuples, t, "tuple");
    if (!sub_hypergraph_check(sub, a.instance_hypergraph()))
        throw Error("dual invariant instances do not form a closed sub-hypergraph");

    auto lq = language_quotient(a.language, j.types);
    auto ent = classification_quotient(a.entity_classification(), {j.entities, j.types.entityTypes});
    auto rel = classification_quotient(a.relation_classification(), {j.tuples, j.types.relationTypes});

    ModelQuotient out;
    out.language = lq;
    auto& q = out.quotient;
    q.language = lq.quotient;
    q.entities = j.entities;
    q.entityIncidence = ent.quotient.incidence;
    q.relationIncidence = rel.quotient.incidence;
    for (const auto& t : j.tuples) {
        const auto& coords = a.tuples.at(t);
        Assignment qc;
        for (const auto& [x, e] : coords) {
            const auto& cls = lq.varClass.at(x);
            auto [it, fresh] = qc.emplace(cls, e);
            if (!fresh && it->second != e) throw RespectViolation(t, x, cls);
        }
        for (const auto& [x, cls] : lq.varClass)
            if (qc.count(cls) && !coords.count(x)) throw RespectViolation(t, x, cls);
        q.tuples[t] = qc;
    }
    out.canonical = ModelMorphism{a, q, lq.canonical, {}, {}};
    for (const auto& e : j.entities) out.canonical.entityMap[e] = e;
    for (const auto& t : j.tuples) out.canonical.tupleMap[t] = t;
    return out;
}

}  // namespace iff
