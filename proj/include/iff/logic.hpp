#pragma once

// Logics: a theory and a model over one language, with designated normal
// instances.  Morphisms, free logics, sums, quotients, fusion, restriction and
// fibers.

#include "iff/theory.hpp"

namespace iff {

struct Logic {
    Theory theory;
    Model model;
    TokenSet normalEntities;
    TokenSet normalTuples;

    friend bool operator==(const Logic&, const Logic&) = default;
};

/// All instances normal.
inline Logic make_logic(Theory t, Model m) {
    Logic l{std::move(t), std::move(m), {}, {}};
    l.normalEntities = l.model.entities;
    l.normalTuples = l.model.tuple_ids();
    return l;
}

inline Model normal_submodel(const Logic& l) { return submodel(l.model, l.normalEntities, l.normalTuples); }

inline std::vector<std::string> validate_logic(const Logic& l) {
    auto out = validate_theory(l.theory);
    for (auto& s : validate_model(l.model)) out.push_back(std::move(s));
    if (!(l.theory.language == l.model.language)) out.push_back("theory and model languages differ");
    if (!out.empty()) return out;
    if (!is_subset(l.normalEntities, l.model.entities)) out.push_back("normal entities are not entities");
    for (const auto& t : l.normalTuples) {
        auto it = l.model.tuples.find(t);
        if (it == l.model.tuples.end()) {
            out.push_back("normal tuple " + t + " is not a tuple");
            continue;
        }
        for (const auto& [x, e] : it->second)
            if (!l.normalEntities.count(e)) out.push_back("normal tuple " + t + " has abnormal coordinate " + x);
    }
    if (!out.empty()) return out;
    Evaluator ev(normal_submodel(l));
    for (const auto& ax : l.theory.axioms)
        if (!ev.satisfies(ax)) out.push_back("normal instances violate axiom " + ax.str());
    return out;
}

inline bool is_sound(const Logic& l) {
    return l.normalEntities == l.model.entities && l.normalTuples == l.model.tuple_ids();
}

inline Logic sound_part(const Logic& l) { return make_logic(l.theory, normal_submodel(l)); }

/// One language morphism shared by the theory and model aspects.
struct LogicMorphism {
    Logic source, target;
    LanguageMorphism language;
    TokenMap entityMap;  // target entities -> source entities
    TokenMap tupleMap;   // target tuples -> source tuples

    TheoryMorphism theory_aspect() const { return {source.theory, target.theory, language}; }
    ModelMorphism model_aspect() const { return {source.model, target.model, language, entityMap, tupleMap}; }
};

struct LogicMorphismVerdict {
    MorphismCheck model;
    TheoryMorphismVerdict theory;
    std::string normality;  // nonempty when a normal instance maps to an abnormal one

    bool ok() const { return model.ok && theory.ok() && normality.empty(); }
    explicit operator bool() const { return ok(); }
    std::string witness() const {
        if (!model) return "model aspect: " + model.witness;
        if (!theory) return "theory aspect: " + theory.witness();
        return normality;
    }
};

inline LogicMorphismVerdict logic_morphism_valid(const LogicMorphism& f, std::size_t maxEntities,
                                                 std::size_t budget = kDefaultBudget) {
    LogicMorphismVerdict v;
    v.model = model_morphism_valid(f.model_aspect());
    if (!v.model) return v;
    v.theory = theory_morphism_valid(f.theory_aspect(), maxEntities, budget);
    for (const auto& e : f.target.normalEntities)
        if (!f.source.normalEntities.count(f.entityMap.at(e))) {
            v.normality = "normal entity " + e + " maps to an abnormal entity";
            return v;
        }
    for (const auto& t : f.target.normalTuples)
        if (!f.source.normalTuples.count(f.tupleMap.at(t))) {
            v.normality = "normal tuple " + t + " maps to an abnormal tuple";
            return v;
        }
    return v;
}

inline LogicMorphism identity(const Logic& l) {
    auto m = identity(l.model);
    return {l, l, m.language, m.entityMap, m.tupleMap};
}

/// f then g.
inline LogicMorphism compose(const LogicMorphism& f, const LogicMorphism& g) {
    auto m = compose(f.model_aspect(), g.model_aspect());
    return {f.source, g.target, m.language, m.entityMap, m.tupleMap};
}

// ---------------------------------------------------------------------------
// Free logics

struct FreeLogicOptions {
    bool strict = false;             // every entity type must be the sort of a unary relation type
    std::size_t maxEntityTypes = 12;
    std::size_t maxVariables = 12;
    std::size_t budget = kDefaultBudget;  // cap on generated tuples
};

inline Token free_tuple_id(const TokenSet& vars, const TokenSet& rels) {
    return tok::pair(tok::set(vars), tok::set(rels));
}

/// Coordinate of a free tuple at x: the sorts of x contributed by the relation types covering x.
inline Token free_coordinate(const TypeLanguage& l, const TokenSet& rels, const Token& x) {
    TokenSet sorts;
    for (const auto& r : rels)
        if (l.arity_of(r).count(x)) sorts.insert(l.reference_of(x));
    return tok::set(sorts);
}

inline void check_strict(const Theory& t) {
    const auto& l = t.language;
    for (const auto& a : l.entityTypes) {
        bool found = std::any_of(l.relationTypes.begin(), l.relationTypes.end(), [&](const Token& r) {
            const auto& ar = l.arity_of(r);
            return ar.size() == 1 && l.reference_of(*ar.begin()) == a;
        });
        if (!found) throw Error("strict free logic: entity type " + a + " is not the sort of a unary relation type");
    }
}

/// The free model over t before normality is decided: power classification on
/// entity types, tuples (X, R) with every arity in R inside X.
inline Model free_model(const Theory& t, const FreeLogicOptions& opt = {}) {
    const auto& l = t.language;
    if (l.entityTypes.size() > opt.maxEntityTypes)
        throw BudgetExceeded("free logic: too many entity types (" + std::to_string(l.entityTypes.size()) + ")");
    if (l.variables.size() > opt.maxVariables)
        throw BudgetExceeded("free logic: too many variables (" + std::to_string(l.variables.size()) + ")");
    auto power = power_classification(l.entityTypes);
    Model m{l, power.instances, power.incidence, {}, {}};
    for (const auto& vars : subsets(l.variables)) {
        TokenSet fitting;
        for (const auto& r : l.relationTypes)
            if (is_subset(l.arity_of(r), vars)) fitting.insert(r);
        for (const auto& rels : subsets(fitting)) {
            if (m.tuples.size() >= opt.budget)
                throw BudgetExceeded("free logic exceeded " + std::to_string(opt.budget) + " tuples");
            auto id = free_tuple_id(vars, rels);
            Assignment coords;
            for (const auto& x : vars) coords[x] = free_coordinate(l, rels, x);
            m.tuples[id] = coords;
            for (const auto& r : rels) m.relationIncidence.insert({id, r});
        }
    }
    return m;
}

/// A free tuple is normal when the free model carrying it as its only tuple
/// satisfies every axiom.  The returned logic is the sound part.
inline Logic free_logic(const Theory& t, const FreeLogicOptions& opt = {}) {
    if (opt.strict) check_strict(t);
    auto m = free_model(t, opt);
    Logic l{t, m, m.entities, {}};
    for (const auto& [id, _] : m.tuples) {
        Evaluator ev(submodel(m, m.entities, {id}));
        if (std::all_of(t.axioms.begin(), t.axioms.end(), [&](const Expression& ax) { return ev.satisfies(ax); }))
            l.normalTuples.insert(id);
    }
    return sound_part(l);
}

/// Identity on types; entities to their intents, tuples to (arity, classifying relation types).
inline LogicMorphism counit(const Logic& l, const FreeLogicOptions& opt = {}) {
    if (!is_sound(l)) throw SoundnessViolation("counit needs a sound logic");
    auto free = free_logic(l.theory, opt);
    LogicMorphism f{free, l, identity(l.theory.language), {}, {}};
    auto ec = l.model.entity_classification();
    for (const auto& e : l.model.entities) f.entityMap[e] = tok::set(ec.intent(e));
    auto rc = l.model.relation_classification();
    for (const auto& [t, _] : l.model.tuples) f.tupleMap[t] = free_tuple_id(l.model.arity(t), rc.intent(t));
    return f;
}

/// The logic morphism free_logic(T) -> l whose theory aspect is g.
inline LogicMorphism transpose(const TheoryMorphism& g, const Logic& l, const FreeLogicOptions& opt = {}) {
    if (!is_sound(l)) throw SoundnessViolation("transpose needs a sound logic");
    if (!(g.target == l.theory)) throw TheoryMismatch("transpose: morphism target is not the logic's theory");
    const auto& T = g.source;
    auto free = free_logic(T, opt);
    LogicMorphism f{free, l, g.language, {}, {}};
    for (const auto& e : l.model.entities) {
        TokenSet types;
        for (const auto& a : T.language.entityTypes)
            if (l.model.entity_has(e, g.language.entityMap.at(a))) types.insert(a);
        f.entityMap[e] = tok::set(types);
    }
    for (const auto& [t, coords] : l.model.tuples) {
        TokenSet vars;
        for (const auto& [x, y] : g.language.varMap)
            if (coords.count(y)) vars.insert(x);
        TokenSet rels;
        for (const auto& r : T.language.relationTypes)
            if (tuple_satisfies(l.model, t, g.language.relationMap.at(r))) rels.insert(r);
        f.tupleMap[t] = free_tuple_id(vars, rels);
    }
    return f;
}

inline LogicMorphism free_to_mediating(const Theory& t, const Logic& lAtC, const FreeLogicOptions& opt = {}) {
    if (!(lAtC.theory == t)) throw TheoryMismatch("mediating logic does not carry the given theory");
    return counit(lAtC, opt);
}

// ---------------------------------------------------------------------------
// Sums and quotients

struct LogicSum {
    Logic sum;
    LogicMorphism left, right;
    ModelSum parts;
};

/// A pair is normal when both components are; a sum tuple when both component
/// tuples and all its coordinates are.
inline LogicSum logic_sum(const Logic& a, const Logic& b) {
    auto ms = model_sum(a.model, b.model);
    auto ts = theory_sum(a.theory, b.theory);
    Logic s{ts.sum, ms.sum, {}, {}};
    for (const auto& [p, parts] : ms.entityParts)
        if (a.normalEntities.count(parts.first) && b.normalEntities.count(parts.second))
            s.normalEntities.insert(p);
    for (const auto& [id, parts] : ms.tupleParts) {
        if (!a.normalTuples.count(parts.first) || !b.normalTuples.count(parts.second)) continue;
        const auto& coords = ms.sum.tuples.at(id);
        if (std::all_of(coords.begin(), coords.end(), [&](const auto& kv) { return s.normalEntities.count(kv.second); }))
            s.normalTuples.insert(id);
    }
    LogicMorphism left{a, s, ms.left.language, ms.left.entityMap, ms.left.tupleMap};
    LogicMorphism right{b, s, ms.right.language, ms.right.entityMap, ms.right.tupleMap};
    left.language.target = right.language.target = s.theory.language;
    return {s, left, right, ms};
}

struct LogicDualInvariant {
    ModelDualInvariant modelPart;
    LanguageEndorelation theoryPart;
};

struct LogicQuotient {
    Logic quotient;
    LogicMorphism canonical;  // l -> quotient
    LanguageQuotient language;
};

/// Throws RespectViolation, or SoundnessViolation when retained normal
/// instances fail a quotient axiom.
inline LogicQuotient logic_dual_quotient(const Logic& l, const LogicDualInvariant& j) {
    const auto& mt = j.modelPart.types;
    const auto& tt = j.theoryPart;
    if (mt.variables != tt.variables || mt.entityTypes != tt.entityTypes || mt.relationTypes != tt.relationTypes)
        throw Error("dual invariant: model and theory endorelations differ");
    auto mq = model_dual_quotient(l.model, j.modelPart);
    auto tq = theory_quotient(l.theory, tt);
    Logic q{tq.quotient, mq.quotient, {}, {}};
    for (const auto& e : q.model.entities)
        if (l.normalEntities.count(e)) q.normalEntities.insert(e);
    for (const auto& [t, _] : q.model.tuples)
        if (l.normalTuples.count(t)) q.normalTuples.insert(t);
    Evaluator ev(normal_submodel(q));
    for (const auto& ax : q.theory.axioms)
        if (!ev.satisfies(ax)) throw SoundnessViolation("quotient axiom " + ax.str() + " fails on retained instances");
    LogicMorphism c{l, q, mq.canonical.language, mq.canonical.entityMap, mq.canonical.tupleMap};
    return {q, c, mq.language};
}

// ---------------------------------------------------------------------------
// Fusion

struct Fusion {
    Logic fused;
    LogicSum sum;
    LogicDualInvariant invariant;
    LogicMorphism quotient;        // sum -> fused
    LogicMorphism left, right;     // L0 -> fused, L1 -> fused
};

/// The invariant on L0 + L1 induced by a span L -> L0, L -> L1.
inline LogicDualInvariant fusion_invariant(const LogicMorphism& f0, const LogicMorphism& f1, const LogicSum& s) {
    LogicDualInvariant j;
    auto& types = j.theoryPart;
    for (const auto& x : f0.source.model.language.variables)
        types.variables.insert({tok::left(f0.language.varMap.at(x)), tok::right(f1.language.varMap.at(x))});
    for (const auto& a : f0.source.model.language.entityTypes)
        types.entityTypes.insert({tok::left(f0.language.entityMap.at(a)), tok::right(f1.language.entityMap.at(a))});
    for (const auto& r : f0.source.model.language.relationTypes)
        types.relationTypes.insert({tok::left(f0.language.relation_of(r)), tok::right(f1.language.relation_of(r))});
    j.modelPart.types = types;

    for (const auto& [p, parts] : s.parts.entityParts)
        if (f0.entityMap.at(parts.first) == f1.entityMap.at(parts.second)) j.modelPart.entities.insert(p);

    Partition vars(s.sum.model.language.variables);
    for (const auto& [x, y] : types.variables) vars.unite(x, y);
    auto cls = vars.naming();
    for (const auto& [id, parts] : s.parts.tupleParts) {
        if (f0.tupleMap.at(parts.first) != f1.tupleMap.at(parts.second)) continue;
        const auto& coords = s.sum.model.tuples.at(id);
        bool keep = true;
        std::map<Token, Token> perClass;
        for (const auto& [x, e] : coords) {
            if (!j.modelPart.entities.count(e)) keep = false;
            auto [it, fresh] = perClass.emplace(cls.at(x), e);
            if (!fresh && it->second != e) keep = false;
        }
        for (const auto& [x, c] : cls)
            if (perClass.count(c) && !coords.count(x)) keep = false;
        if (keep) j.modelPart.tuples.insert(id);
    }
    return j;
}

inline Fusion fusion(const LogicMorphism& f0, const LogicMorphism& f1) {
    if (!(f0.source == f1.source)) throw Error("fusion needs a span with a shared source");
    if (!f0.language.atomic() || !f1.language.atomic())
        throw Error("fusion needs relation types mapped to relation types");
    Fusion out;
    out.sum = logic_sum(f0.target, f1.target);
    out.invariant = fusion_invariant(f0, f1, out.sum);
    auto q = logic_dual_quotient(out.sum.sum, out.invariant);
    out.fused = q.quotient;
    out.quotient = q.canonical;
    out.left = compose(out.sum.left, q.canonical);
    out.right = compose(out.sum.right, q.canonical);
    return out;
}

// ---------------------------------------------------------------------------
// Restriction and fibers

struct Restriction {
    Logic restricted;
    LogicMorphism portal;  // l -> l@C
};

inline Restriction restrict(const Logic& l, const TokenSet& c) {
    if (!is_subset(c, l.model.entities)) throw SubsetViolation("restriction set is not a subset of the universe");
    auto m = submodel(l.model, c, l.model.tuple_ids());
    Logic r{l.theory, m, {}, {}};
    for (const auto& e : c)
        if (l.normalEntities.count(e)) r.normalEntities.insert(e);
    for (const auto& [t, _] : m.tuples)
        if (l.normalTuples.count(t)) r.normalTuples.insert(t);
    LogicMorphism p{l, r, identity(l.theory.language), {}, {}};
    for (const auto& e : m.entities) p.entityMap[e] = e;
    for (const auto& [t, _] : m.tuples) p.tupleMap[t] = t;
    return {r, p};
}

/// Reclassifies p's instances by the source types of g through their images.
inline Logic fiber(const TheoryMorphism& g, const Logic& p) {
    if (!(g.target == p.theory)) throw TheoryMismatch("fiber: morphism target is not the logic's theory");
    const auto& T = g.source;
    Model m{T.language, p.model.entities, {}, {}, {}};
    for (const auto& e : p.model.entities)
        for (const auto& a : T.language.entityTypes)
            if (p.model.entity_has(e, g.language.entityMap.at(a))) m.entityIncidence.insert({e, a});
    for (const auto& [t, coords] : p.model.tuples) {
        Assignment pulled;
        for (const auto& [x, y] : g.language.varMap)
            if (auto it = coords.find(y); it != coords.end()) pulled[x] = it->second;
        m.tuples[t] = pulled;
        for (const auto& r : T.language.relationTypes)
            if (tuple_satisfies(p.model, t, g.language.relationMap.at(r))) m.relationIncidence.insert({t, r});
    }
    return {T, m, p.normalEntities, p.normalTuples};
}

}  // namespace iff
