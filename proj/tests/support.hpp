#pragma once

// Shared test helpers: random small structures, a naive evaluator used as an
// oracle, brute-force morphism enumeration and mediator counting.

#include <fstream>
#include <random>
#include <sstream>

#include "iff/document.hpp"

namespace iff::test {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline Document load_doc(const std::string& relative) {
    return parse_document(read_file(std::string(IFF_DATA_DIR) + "/" + relative));
}

struct Rng {
    std::mt19937 gen;
    explicit Rng(unsigned seed) : gen(seed) {}
    int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
    bool coin(double p = 0.5) { return std::bernoulli_distribution(p)(gen); }
    template <class C>
    const auto& pick(const C& c) {
        auto it = c.begin();
        std::advance(it, uniform(0, static_cast<int>(c.size()) - 1));
        return *it;
    }
};

struct LanguageShape {
    int entityTypes = 2, variables = 2, relations = 2, maxArity = 2;
};

inline TypeLanguage random_language(Rng& rng, const LanguageShape& s, const std::string& prefix = "") {
    TypeLanguage l;
    for (int i = 0; i < s.entityTypes; ++i) l.entityTypes.insert(prefix + "A" + std::to_string(i));
    for (int i = 0; i < s.variables; ++i) {
        auto x = prefix + "x" + std::to_string(i);
        l.variables.insert(x);
        l.reference[x] = rng.pick(l.entityTypes);
    }
    for (int i = 0; i < s.relations; ++i) {
        auto r = prefix + "r" + std::to_string(i);
        l.relationTypes.insert(r);
        TokenSet ar;
        int n = rng.uniform(0, std::min(s.maxArity, s.variables));
        while (static_cast<int>(ar.size()) < n) ar.insert(rng.pick(l.variables));
        l.arity[r] = ar;
    }
    return l;
}

inline TokenSet entity_names(int n, const std::string& prefix = "d") {
    TokenSet out;
    for (int i = 0; i < n; ++i) out.insert(prefix + std::to_string(i));
    return out;
}

/// Random incidence and random well-sorted extents.
inline Model random_model(Rng& rng, const TypeLanguage& l, int entities, double p = 0.5,
                          const std::string& prefix = "d") {
    auto es = entity_names(entities, prefix);
    PairSet inc;
    std::map<Token, TokenSet> sorts;
    for (const auto& a : l.entityTypes) sorts[a];
    for (const auto& e : es)
        for (const auto& a : l.entityTypes)
            if (rng.coin(p)) {
                inc.insert({e, a});
                sorts[a].insert(e);
            }
    std::map<Token, std::set<Assignment>> ext;
    for (const auto& r : l.relationTypes) {
        auto& set = ext[r];
        for (const auto& a : well_sorted_assignments(l, l.arity_of(r), sorts))
            if (rng.coin(p)) set.insert(a);
    }
    return model_from_extents(l, es, inc, ext);
}

/// Tuples with arbitrary arities and explicit classification, respecting signatures.
inline Model random_general_model(Rng& rng, const TypeLanguage& l, int entities, int tuples, double p = 0.5) {
    Model m{l, entity_names(entities), {}, {}, {}};
    for (const auto& e : m.entities)
        for (const auto& a : l.entityTypes)
            if (rng.coin(p)) m.entityIncidence.insert({e, a});
    if (m.entities.empty()) return m;
    for (int i = 0; i < tuples; ++i) {
        auto id = "t" + std::to_string(i);
        Assignment coords;
        for (const auto& x : l.variables)
            if (rng.coin(0.6)) coords[x] = rng.pick(m.entities);
        m.tuples[id] = coords;
        for (const auto& r : l.relationTypes) {
            bool fits = true;
            for (const auto& x : l.arity_of(r)) {
                auto it = coords.find(x);
                fits = fits && it != coords.end() && m.entity_has(it->second, l.reference_of(x));
            }
            if (fits && rng.coin(p)) m.relationIncidence.insert({id, r});
        }
    }
    return m;
}

inline TokenSet same_sort(const TypeLanguage& l, const Token& x) {
    TokenSet out;
    for (const auto& y : l.variables)
        if (l.reference_of(y) == l.reference_of(x)) out.insert(y);
    return out;
}

inline Expression random_expression(Rng& rng, const TypeLanguage& l, int depth) {
    if (depth == 0 || rng.coin(0.25)) return Expression::atom(rng.pick(l.relationTypes));
    switch (rng.uniform(0, 6)) {
        case 0: return Expression::negation(random_expression(rng, l, depth - 1));
        case 1: return Expression::conj(random_expression(rng, l, depth - 1), random_expression(rng, l, depth - 1));
        case 2: return Expression::disj(random_expression(rng, l, depth - 1), random_expression(rng, l, depth - 1));
        case 3:
            return Expression::implies(random_expression(rng, l, depth - 1), random_expression(rng, l, depth - 1));
        case 4: return Expression::exists(rng.pick(l.variables), random_expression(rng, l, depth - 1));
        case 5: return Expression::forall(rng.pick(l.variables), random_expression(rng, l, depth - 1));
        default: {
            auto body = random_expression(rng, l, depth - 1);
            TokenMap sigma;
            for (const auto& y : free_vars(l, body)) sigma[y] = rng.pick(same_sort(l, y));
            return Expression::subst(sigma, body);
        }
    }
}

// ---------------------------------------------------------------------------
// Naive evaluator: scans explicit tuples and incidence on every call.

inline bool naive_holds(const Model& m, const Assignment& a, const Expression& e) {
    const auto& l = m.language;
    switch (e.op()) {
        case Op::Atom:
            for (const auto& [t, coords] : m.tuples) {
                if (!m.relationIncidence.count({t, e.name()})) continue;
                bool match = true;
                for (const auto& x : l.arity.at(e.name())) match = match && coords.at(x) == a.at(x);
                if (match) return true;
            }
            return false;
        case Op::Not: return !naive_holds(m, a, e.body());
        case Op::And: return naive_holds(m, a, e.lhs()) && naive_holds(m, a, e.rhs());
        case Op::Or: return naive_holds(m, a, e.lhs()) || naive_holds(m, a, e.rhs());
        case Op::Implies: return !naive_holds(m, a, e.lhs()) || naive_holds(m, a, e.rhs());
        case Op::Exists:
        case Op::Forall: {
            bool any = false, all = true;
            for (const auto& d : m.entities) {
                if (!m.entityIncidence.count({d, l.reference.at(e.name())})) continue;
                auto b = a;
                b[e.name()] = d;
                bool v = naive_holds(m, b, e.body());
                any = any || v;
                all = all && v;
            }
            return e.op() == Op::Exists ? any : all;
        }
        case Op::Subst: {
            Assignment b;
            for (const auto& [y, z] : e.mapping())
                if (a.count(z)) b[y] = a.at(z);
            return naive_holds(m, b, e.body());
        }
    }
    return false;
}

/// Every well-sorted assignment on `vars`, by brute force over all entity choices.
inline std::vector<Assignment> naive_assignments(const Model& m, const TokenSet& vars) {
    std::vector<Assignment> out;
    for_each_function(vars, m.entities, [&](const TokenMap& f) {
        for (const auto& [x, d] : f)
            if (!m.entityIncidence.count({d, m.language.reference.at(x)})) return;
        out.push_back(f);
    });
    return out;
}

inline bool naive_satisfies(const Model& m, const Expression& e) {
    for (const auto& a : naive_assignments(m, free_vars(m.language, e)))
        if (!naive_holds(m, a, e)) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Brute-force morphism enumeration

/// Every valid language morphism a -> b with relation types mapped to relation types.
inline std::vector<LanguageMorphism> all_language_morphisms(const TypeLanguage& a, const TypeLanguage& b) {
    std::vector<LanguageMorphism> out;
    for_each_function(a.variables, b.variables, [&](const TokenMap& vm) {
        for_each_function(a.entityTypes, b.entityTypes, [&](const TokenMap& em) {
            for_each_function(a.relationTypes, b.relationTypes, [&](const TokenMap& rm) {
                LanguageMorphism m{a, b, vm, em, {}, false};
                for (const auto& [r, s] : rm) m.map_relation(r, s);
                if (language_morphism_valid(m)) out.push_back(m);
            });
        });
    });
    return out;
}

/// Product of per-element candidate lists, calling fn with each combination.
inline void for_each_choice(const std::vector<std::pair<Token, std::vector<Token>>>& candidates,
                            const std::function<void(const TokenMap&)>& fn) {
    TokenMap current;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == candidates.size()) {
            fn(current);
            return;
        }
        for (const auto& c : candidates[i].second) {
            current[candidates[i].first] = c;
            rec(i + 1);
        }
        current.erase(candidates[i].first);
    };
    rec(0);
}

/// Every assignment of instance maps making (A, B, lm) a valid model morphism
/// that also preserves normality.  Candidates are pruned pointwise by the
/// conditions that involve a single element, then checked in full.
inline std::vector<LogicMorphism> all_instance_completions(const Logic& A, const Logic& B, const LanguageMorphism& lm) {
    std::vector<LogicMorphism> out;
    std::vector<std::pair<Token, std::vector<Token>>> ents;
    for (const auto& e : B.model.entities) {
        std::vector<Token> c;
        for (const auto& a : A.model.entities) {
            bool ok = !B.normalEntities.count(e) || A.normalEntities.count(a);
            for (const auto& t : A.model.language.entityTypes)
                ok = ok && A.model.entity_has(a, t) == B.model.entity_has(e, lm.entityMap.at(t));
            if (ok) c.push_back(a);
        }
        ents.emplace_back(e, c);
    }
    for_each_choice(ents, [&](const TokenMap& em) {
        std::vector<std::pair<Token, std::vector<Token>>> tups;
        for (const auto& [c, cc] : B.model.tuples) {
            std::vector<Token> cand;
            for (const auto& [t, tc] : A.model.tuples) {
                LogicMorphism probe{A, B, lm, em, {{c, t}}};
                bool ok = !B.normalTuples.count(c) || A.normalTuples.count(t);
                for (const auto& r : A.model.language.relationTypes)
                    ok = ok && A.model.tuple_has(t, r) == tuple_satisfies(B.model, c, lm.relationMap.at(r));
                TokenSet pulled;
                for (const auto& [x, y] : lm.varMap)
                    if (cc.count(y)) pulled.insert(x);
                ok = ok && A.model.arity(t) == pulled;
                for (const auto& x : pulled) ok = ok && tc.at(x) == em.at(cc.at(lm.varMap.at(x)));
                if (ok) cand.push_back(t);
            }
            tups.emplace_back(c, cand);
        }
        for_each_choice(tups, [&](const TokenMap& tm) {
            LogicMorphism f{A, B, lm, em, tm};
            if (model_morphism_valid(f.model_aspect())) out.push_back(f);
        });
    });
    return out;
}

/// Theory validity where a capturing translation counts as invalid.
inline bool theory_valid(const TheoryMorphism& g, std::size_t bound) {
    try {
        return theory_morphism_valid(g, bound).ok();
    } catch (const CaptureError&) {
        return false;
    }
}

/// Every valid logic morphism A -> B (theory aspect checked at `bound`).
inline std::vector<LogicMorphism> all_logic_morphisms(const Logic& A, const Logic& B, std::size_t bound) {
    std::vector<LogicMorphism> out;
    for (const auto& lm : all_language_morphisms(A.theory.language, B.theory.language)) {
        if (!theory_valid({A.theory, B.theory, lm}, bound)) continue;
        for (auto& f : all_instance_completions(A, B, lm)) out.push_back(std::move(f));
    }
    return out;
}

struct Leg {
    LogicMorphism into;   // Lk -> S
    LogicMorphism given;  // Lk -> X
};

/// Candidate images in X for each symbol of S, pruned by the legs.
inline std::vector<std::pair<Token, std::vector<Token>>> type_candidates(
    const TokenSet& sSymbols, const TokenSet& xSymbols, const std::vector<Leg>& legs,
    const std::function<std::vector<std::pair<Token, Token>>(const Leg&)>& pairs) {
    std::vector<std::pair<Token, std::vector<Token>>> out;
    for (const auto& s : sSymbols) {
        std::vector<Token> c;
        for (const auto& x : xSymbols) {
            bool ok = true;
            for (const auto& leg : legs)
                for (const auto& [via, want] : pairs(leg))
                    if (via == s && want != x) ok = false;
            if (ok) c.push_back(x);
        }
        out.emplace_back(s, c);
    }
    return out;
}

/// Number of valid logic morphisms h: S -> X with into_k then h equal to given_k.
inline std::size_t count_mediators(const Logic& S, const Logic& X, const std::vector<Leg>& legs, std::size_t bound) {
    const auto& ls = S.theory.language;
    const auto& lx = X.theory.language;
    auto mapped = [](auto member) {
        return [member](const Leg& leg) {
            std::vector<std::pair<Token, Token>> out;
            for (const auto& [k, v] : leg.into.language.*member) out.emplace_back(v, (leg.given.language.*member).at(k));
            return out;
        };
    };
    auto vars = type_candidates(ls.variables, lx.variables, legs, mapped(&LanguageMorphism::varMap));
    auto ents = type_candidates(ls.entityTypes, lx.entityTypes, legs, mapped(&LanguageMorphism::entityMap));
    auto rels = type_candidates(ls.relationTypes, lx.relationTypes, legs, [](const Leg& leg) {
        std::vector<std::pair<Token, Token>> out;
        for (const auto& [k, _] : leg.into.language.relationMap)
            out.emplace_back(leg.into.language.relation_of(k), leg.given.language.relation_of(k));
        return out;
    });
    std::size_t count = 0;
    for_each_choice(vars, [&](const TokenMap& vm) {
        for_each_choice(ents, [&](const TokenMap& em) {
            for_each_choice(rels, [&](const TokenMap& rm) {
                LanguageMorphism lm{ls, lx, vm, em, {}, false};
                for (const auto& [r, s] : rm) lm.map_relation(r, s);
                if (!language_morphism_valid(lm)) return;
                if (!theory_valid({S.theory, X.theory, lm}, bound)) return;
                for (const auto& h : all_instance_completions(S, X, lm)) {
                    bool commutes = true;
                    for (const auto& leg : legs) {
                        for (const auto& [e, img] : leg.given.entityMap)
                            commutes = commutes && leg.into.entityMap.at(h.entityMap.at(e)) == img;
                        for (const auto& [t, img] : leg.given.tupleMap)
                            commutes = commutes && leg.into.tupleMap.at(h.tupleMap.at(t)) == img;
                    }
                    if (commutes) ++count;
                }
            });
        });
    });
    return count;
}

// ---------------------------------------------------------------------------
// Renaming, for isomorphism checks by explicit bijection

struct Renaming {
    TokenMap vars, entityTypes, relationTypes, entities, tuples;
};

inline Logic rename(const Logic& l, const Renaming& r) {
    const auto& src = l.theory.language;
    TypeLanguage lang;
    for (const auto& x : src.variables) lang.variables.insert(r.vars.at(x));
    for (const auto& a : src.entityTypes) lang.entityTypes.insert(r.entityTypes.at(a));
    for (const auto& p : src.relationTypes) lang.relationTypes.insert(r.relationTypes.at(p));
    for (const auto& [x, a] : src.reference) lang.reference[r.vars.at(x)] = r.entityTypes.at(a);
    for (const auto& [p, ar] : src.arity) lang.arity[r.relationTypes.at(p)] = image(r.vars, ar);
    LanguageMorphism lm{src, lang, r.vars, r.entityTypes, {}, false};
    for (const auto& p : src.relationTypes) lm.map_relation(p, r.relationTypes.at(p));
    Theory t{lang, {}};
    for (const auto& ax : l.theory.axioms) t.axioms.insert(translate_expression(lm, ax));
    Model m{lang, image(r.entities, l.model.entities), {}, {}, {}};
    for (const auto& [e, a] : l.model.entityIncidence) m.entityIncidence.insert({r.entities.at(e), r.entityTypes.at(a)});
    for (const auto& [tid, coords] : l.model.tuples) {
        Assignment c;
        for (const auto& [x, e] : coords) c[r.vars.at(x)] = r.entities.at(e);
        m.tuples[r.tuples.at(tid)] = c;
    }
    for (const auto& [tid, p] : l.model.relationIncidence) m.relationIncidence.insert({r.tuples.at(tid), r.relationTypes.at(p)});
    return {t, m, image(r.entities, l.normalEntities), image(r.tuples, l.normalTuples)};
}

inline bool injective(const TokenMap& m) {
    TokenSet seen;
    for (const auto& [_, v] : m)
        if (!seen.insert(v).second) return false;
    return true;
}

/// True when the renaming is a bijection on every kind and carries a onto b exactly.
inline bool isomorphic_via(const Logic& a, const Logic& b, const Renaming& r) {
    for (const auto* m : {&r.vars, &r.entityTypes, &r.relationTypes, &r.entities, &r.tuples})
        if (!injective(*m)) return false;
    try {
        return rename(a, r) == b;
    } catch (const std::out_of_range&) {
        return false;
    }
}

// ---------------------------------------------------------------------------
// Small theories over languages with at most two types

inline std::vector<Theory> small_theories(const std::string& prefix) {
    auto lang = [&](bool second, const TokenSet& arity) {
        TypeLanguage l;
        l.variables = {prefix + "x", prefix + "y"};
        l.entityTypes = {prefix + "A"};
        l.reference = {{prefix + "x", prefix + "A"}, {prefix + "y", prefix + "A"}};
        if (second) {
            l.relationTypes = {prefix + "r"};
            TokenSet ar;
            for (const auto& v : arity) ar.insert(prefix + v);
            l.arity[prefix + "r"] = ar;
        }
        return l;
    };
    std::vector<Theory> out;
    out.push_back({lang(false, {}), {}});
    for (const TokenSet& ar : {TokenSet{}, TokenSet{"x"}, TokenSet{"x", "y"}}) {
        auto l = lang(true, ar);
        auto r = Expression::atom(prefix + "r");
        out.push_back({l, {}});
        out.push_back({l, {r}});
        out.push_back({l, {Expression::negation(r)}});
        if (!ar.empty()) out.push_back({l, {Expression::exists(prefix + "x", r)}});
    }
    return out;
}

/// Every valid theory morphism a -> b over atomic relation maps.
inline std::vector<TheoryMorphism> all_theory_morphisms(const Theory& a, const Theory& b, std::size_t bound) {
    std::vector<TheoryMorphism> out;
    for (const auto& lm : all_language_morphisms(a.language, b.language))
        if (theory_valid({a, b, lm}, bound)) out.push_back({a, b, lm});
    return out;
}

/// Number of valid theory morphisms h: S -> X with into_k then h equal to given_k on types.
inline std::size_t count_theory_mediators(const Theory& S, const Theory& X,
                                          const std::vector<std::pair<TheoryMorphism, TheoryMorphism>>& legs,
                                          std::size_t bound) {
    std::size_t count = 0;
    for (const auto& h : all_theory_morphisms(S, X, bound)) {
        bool commutes = true;
        for (const auto& [into, given] : legs) {
            auto c = compose(into.language, h.language);
            commutes = commutes && c.varMap == given.language.varMap && c.entityMap == given.language.entityMap &&
                       c.relationMap == given.language.relationMap;
        }
        if (commutes) ++count;
    }
    return count;
}

/// The bijection from l onto a fusion (or integration) of l with itself along
/// identities: symbols to their merged class, instances to the diagonal.
inline std::optional<Renaming> diagonal_renaming(const Logic& l, const ModelSum& parts, const Logic& fused) {
    Renaming r;
    auto cls = [](const Token& t) { return tok::cls({tok::left(t), tok::right(t)}); };
    const auto& lang = l.theory.language;
    for (const auto& x : lang.variables) r.vars[x] = cls(x);
    for (const auto& a : lang.entityTypes) r.entityTypes[a] = cls(a);
    for (const auto& p : lang.relationTypes) r.relationTypes[p] = cls(p);
    for (const auto& e : l.model.entities) r.entities[e] = tok::pair(e, e);
    for (const auto& [id, pr] : parts.tupleParts) {
        if (pr.first != pr.second || !fused.model.tuples.count(id)) continue;
        if (r.tuples.count(pr.first)) return std::nullopt;  // two diagonal candidates
        r.tuples[pr.first] = id;
    }
    if (r.tuples.size() != l.model.tuples.size()) return std::nullopt;
    return r;
}

}  // namespace iff::test
