#pragma once

#include "iff/tokens.hpp"

namespace iff {

/// Instances, types, and the incidence "instance |= type" between them.
struct Classification {
    TokenSet instances;
    TokenSet types;
    PairSet incidence;  // (instance, type)

    bool holds(const Token& instance, const Token& type) const {
        return incidence.count({instance, type}) > 0;
    }

    TokenSet intent(const Token& instance) const {
        TokenSet out;
        for (auto it = incidence.lower_bound({instance, Token{}});
             it != incidence.end() && it->first == instance; ++it)
            out.insert(it->second);
        return out;
    }

    TokenSet extent(const Token& type) const {
        TokenSet out;
        for (const auto& [i, t] : incidence)
            if (t == type) out.insert(i);
        return out;
    }

    friend bool operator==(const Classification&, const Classification&) = default;
};

/// Types forward, instances backward.
struct Infomorphism {
    Classification source;
    Classification target;
    TokenMap typeMap;      // source.types -> target.types
    TokenMap instanceMap;  // target.instances -> source.instances
};

/// Generator pairs on types plus the retained instances.  The module closes the
/// relation reflexively, symmetrically and transitively.
struct ClassificationInvariant {
    TokenSet instanceSubset;
    PairSet typeRelation;
};

inline std::vector<std::string> validate_classification(const Classification& c) {
    std::vector<std::string> out;
    for (const auto& [i, t] : c.incidence) {
        if (!c.instances.count(i)) out.push_back("incidence references unknown instance " + i);
        if (!c.types.count(t)) out.push_back("incidence references unknown type " + t);
    }
    return out;
}

struct InfomorphismCheck {
    bool ok = true;
    std::optional<TokenPair> witness;  // (target instance, source type)
    explicit operator bool() const { return ok; }
};

inline void require_total(const TokenMap& m, const TokenSet& dom, const TokenSet& cod,
                          const std::string& what) {
    for (const auto& d : dom) {
        auto it = m.find(d);
        if (it == m.end()) throw DomainError(what + " is not defined on " + d);
        if (!cod.count(it->second))
            throw DomainError(what + " sends " + d + " outside its codomain (" + it->second + ")");
    }
}

inline InfomorphismCheck infomorphism_valid(const Infomorphism& f) {
    require_total(f.typeMap, f.source.types, f.target.types, "type map");
    require_total(f.instanceMap, f.target.instances, f.source.instances, "instance map");
    for (const auto& b : f.target.instances) {
        const auto& a = f.instanceMap.at(b);
        for (const auto& alpha : f.source.types)
            if (f.source.holds(a, alpha) != f.target.holds(b, f.typeMap.at(alpha)))
                return {false, TokenPair{b, alpha}};
    }
    return {};
}

/// g after f: types f then g, instances g then f.
inline Infomorphism compose(const Infomorphism& f, const Infomorphism& g) {
    Infomorphism h{f.source, g.target, {}, {}};
    for (const auto& [t, u] : f.typeMap) h.typeMap[t] = at(g.typeMap, u, "type map");
    for (const auto& [i, j] : g.instanceMap) h.instanceMap[i] = at(f.instanceMap, j, "instance map");
    return h;
}

inline Infomorphism identity(const Classification& c) {
    Infomorphism f{c, c, {}, {}};
    for (const auto& t : c.types) f.typeMap[t] = t;
    for (const auto& i : c.instances) f.instanceMap[i] = i;
    return f;
}

/// Instances are all subsets of s (encoded as set tokens); X |= a iff a in X.
inline Classification power_classification(const TokenSet& s) {
    Classification c;
    c.types = s;
    for (const auto& sub : subsets(s)) {
        auto name = tok::set(sub);
        c.instances.insert(name);
        for (const auto& a : sub) c.incidence.insert({name, a});
    }
    return c;
}

struct ClassificationSum {
    Classification sum;
    Infomorphism left, right;
};

inline ClassificationSum classification_sum(const Classification& a, const Classification& b) {
    Classification s;
    for (const auto& t : a.types) s.types.insert(tok::left(t));
    for (const auto& t : b.types) s.types.insert(tok::right(t));
    for (const auto& x : a.instances)
        for (const auto& y : b.instances) {
            auto p = tok::pair(x, y);
            s.instances.insert(p);
            for (const auto& t : a.intent(x)) s.incidence.insert({p, tok::left(t)});
            for (const auto& t : b.intent(y)) s.incidence.insert({p, tok::right(t)});
        }
    ClassificationSum out{s, {a, s, {}, {}}, {b, s, {}, {}}};
    for (const auto& t : a.types) out.left.typeMap[t] = tok::left(t);
    for (const auto& t : b.types) out.right.typeMap[t] = tok::right(t);
    for (const auto& x : a.instances)
        for (const auto& y : b.instances) {
            out.left.instanceMap[tok::pair(x, y)] = x;
            out.right.instanceMap[tok::pair(x, y)] = y;
        }
    return out;
}

/// Throws RespectViolation if some retained instance separates two related types.
inline TokenMap invariant_classes(const Classification& c, const ClassificationInvariant& j) {
    Partition part(c.types);
    for (const auto& [x, y] : j.typeRelation) {
        if (!c.types.count(x) || !c.types.count(y))
            throw DomainError("invariant relates unknown type " + (c.types.count(x) ? y : x));
        part.unite(x, y);
    }
    for (const auto& i : j.instanceSubset)
        if (!c.instances.count(i)) throw DomainError("invariant retains unknown instance " + i);
    for (auto& [_, members] : part.classes()) {
        const auto& rep = *members.begin();
        for (const auto& i : j.instanceSubset)
            for (const auto& m : members)
                if (c.holds(i, rep) != c.holds(i, m)) throw RespectViolation(i, rep, m);
    }
    return part.naming();
}

struct ClassificationQuotient {
    Classification quotient;
    Infomorphism canonical;  // c -> quotient
};

inline ClassificationQuotient classification_quotient(const Classification& c,
                                                      const ClassificationInvariant& j) {
    auto names = invariant_classes(c, j);
    Classification q;
    q.instances = j.instanceSubset;
    for (const auto& [_, n] : names) q.types.insert(n);
    for (const auto& [i, t] : c.incidence)
        if (q.instances.count(i)) q.incidence.insert({i, names.at(t)});
    ClassificationQuotient out{q, {c, q, names, {}}};
    for (const auto& i : q.instances) out.canonical.instanceMap[i] = i;
    return out;
}

}  // namespace iff
