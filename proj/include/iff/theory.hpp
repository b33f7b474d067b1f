#pragma once

// Theories over a type language, bounded entailment by countermodel search,
// theory morphisms, sums and quotients.

#include "iff/model.hpp"

namespace iff {

struct Theory {
    TypeLanguage language;
    std::set<Expression> axioms;

    friend bool operator==(const Theory&, const Theory&) = default;
};

inline std::vector<std::string> validate_theory(const Theory& t) {
    auto out = validate_language(t.language);
    for (const auto& a : t.axioms)
        if (auto err = check_expression(t.language, a)) out.push_back("axiom " + a.str() + ": " + *err);
    return out;
}

struct TheoryMorphism {
    Theory source, target;
    LanguageMorphism language;
};

/// Either a countermodel or the absence of one up to a size bound.
struct EntailmentVerdict {
    std::optional<Model> counterModel;
    std::size_t bound = 0;

    bool refuted() const { return counterModel.has_value(); }
    std::string str() const {
        return refuted() ? "Refuted" : "NoCounterexampleUpTo(" + std::to_string(bound) + ")";
    }
};

constexpr std::size_t kDefaultBudget = 10000;

/// Entity tokens of enumerated models.
inline Token canonical_entity(std::size_t i) { return "e" + std::to_string(i); }

/// Every well-sorted assignment on vars, given the sort extents.
inline std::vector<Assignment> well_sorted_assignments(const TypeLanguage& l, const TokenSet& vars,
                                                       const std::map<Token, TokenSet>& sorts) {
    std::vector<Assignment> out{Assignment{}};
    for (const auto& x : vars) {
        std::vector<Assignment> next;
        for (const auto& a : out)
            for (const auto& e : sorts.at(l.reference_of(x))) {
                auto b = a;
                b[x] = e;
                next.push_back(std::move(b));
            }
        out = std::move(next);
    }
    return out;
}

/// Calls fn with every model of t on entities e0..e(k-1), k <= maxEntities.
/// Stops early when fn returns false.  Throws BudgetExceeded once more than
/// `budget` candidate models have been generated.
inline void enumerate_models(const Theory& t, std::size_t maxEntities,
                             const std::function<bool(const Model&)>& fn,
                             std::size_t budget = kDefaultBudget) {
    const auto& l = t.language;
    std::vector<Token> types(l.entityTypes.begin(), l.entityTypes.end());
    std::vector<Token> rels(l.relationTypes.begin(), l.relationTypes.end());
    std::size_t candidates = 0;
    bool stop = false;

    for (std::size_t k = 0; k <= maxEntities && !stop; ++k) {
        TokenSet entities;
        for (std::size_t i = 0; i < k; ++i) entities.insert(canonical_entity(i));
        std::vector<TokenPair> cells;
        for (const auto& e : entities)
            for (const auto& a : types) cells.emplace_back(e, a);
        if (cells.size() >= 63) throw BudgetExceeded("too many entity incidence cells");

        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << cells.size()) && !stop; ++mask) {
            PairSet inc;
            std::map<Token, TokenSet> sorts;
            for (const auto& a : types) sorts[a];
            for (std::size_t i = 0; i < cells.size(); ++i)
                if (mask & (std::uint64_t{1} << i)) {
                    inc.insert(cells[i]);
                    sorts[cells[i].second].insert(cells[i].first);
                }
            std::vector<std::vector<Assignment>> pools;
            for (const auto& r : rels) pools.push_back(well_sorted_assignments(l, l.arity_of(r), sorts));

            std::map<Token, std::set<Assignment>> extents;
            std::function<void(std::size_t)> rec = [&](std::size_t i) {
                if (stop) return;
                if (i == rels.size()) {
                    if (++candidates > budget)
                        throw BudgetExceeded("model enumeration exceeded " + std::to_string(budget) +
                                             " candidates");
                    auto m = model_from_extents(l, entities, inc, extents);
                    Evaluator ev(m);
                    for (const auto& ax : t.axioms)
                        if (!ev.satisfies(ax)) return;
                    if (!fn(m)) stop = true;
                    return;
                }
                const auto& pool = pools[i];
                if (pool.size() >= 63) throw BudgetExceeded("too many assignments for " + rels[i]);
                for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << pool.size()) && !stop; ++sub) {
                    auto& ext = extents[rels[i]];
                    ext.clear();
                    for (std::size_t j = 0; j < pool.size(); ++j)
                        if (sub & (std::uint64_t{1} << j)) ext.insert(pool[j]);
                    rec(i + 1);
                }
                extents.erase(rels[i]);
            };
            rec(0);
        }
    }
}

inline std::vector<Model> models_of(const Theory& t, std::size_t maxEntities, std::size_t budget = kDefaultBudget) {
    std::vector<Model> out;
    enumerate_models(t, maxEntities, [&](const Model& m) {
        out.push_back(m);
        return true;
    }, budget);
    return out;
}

inline EntailmentVerdict entails(const Theory& t, const Expression& e, std::size_t maxEntities,
                                 std::size_t budget = kDefaultBudget) {
    EntailmentVerdict v{std::nullopt, maxEntities};
    if (t.axioms.count(e)) return v;
    if (auto err = check_expression(t.language, e)) throw Error("query is not well formed: " + *err);
    enumerate_models(t, maxEntities, [&](const Model& m) {
        if (satisfies(m, e)) return true;
        v.counterModel = m;
        return false;
    }, budget);
    return v;
}

inline bool is_theorem(const Theory& t, const Expression& e, std::size_t maxEntities,
                       std::size_t budget = kDefaultBudget) {
    return !entails(t, e, maxEntities, budget).refuted();
}

struct TheoryMorphismVerdict {
    std::string languageFailure;  // nonempty when the language morphism is invalid
    std::vector<std::pair<Expression, EntailmentVerdict>> axioms;

    bool ok() const {
        return languageFailure.empty() &&
               std::none_of(axioms.begin(), axioms.end(), [](const auto& p) { return p.second.refuted(); });
    }
    explicit operator bool() const { return ok(); }

    /// First failure, or empty.
    std::string witness() const {
        if (!languageFailure.empty()) return languageFailure;
        for (const auto& [a, v] : axioms)
            if (v.refuted()) return "axiom " + a.str() + " is refuted";
        return {};
    }
};

inline TheoryMorphismVerdict theory_morphism_valid(const TheoryMorphism& g, std::size_t maxEntities,
                                                   std::size_t budget = kDefaultBudget) {
    TheoryMorphismVerdict out;
    if (auto c = language_morphism_valid(g.language); !c) {
        out.languageFailure = c.witness;
        return out;
    }
    for (const auto& a : g.source.axioms)
        out.axioms.emplace_back(a, entails(g.target, translate_expression(g.language, a), maxEntities, budget));
    return out;
}

/// Same verdict; additionally every source type must have an image.
inline TheoryMorphismVerdict refinement_check(const TheoryMorphism& g, std::size_t maxEntities,
                                              std::size_t budget = kDefaultBudget) {
    require_total_language_maps(g.language);
    return theory_morphism_valid(g, maxEntities, budget);
}

inline TheoryMorphism identity(const Theory& t) { return {t, t, identity(t.language)}; }

/// g then h.
inline TheoryMorphism compose(const TheoryMorphism& g, const TheoryMorphism& h) {
    return {g.source, h.target, compose(g.language, h.language)};
}

struct TheorySum {
    Theory sum;
    TheoryMorphism left, right;
};

inline TheorySum theory_sum(const Theory& a, const Theory& b) {
    auto ls = language_sum(a.language, b.language);
    Theory s{ls.sum, {}};
    for (const auto& ax : a.axioms) s.axioms.insert(translate_expression(ls.left, ax));
    for (const auto& ax : b.axioms) s.axioms.insert(translate_expression(ls.right, ax));
    ls.left.target = ls.right.target = s.language;
    return {s, {a, s, ls.left}, {b, s, ls.right}};
}

struct TheoryQuotient {
    Theory quotient;
    TheoryMorphism canonical;
    LanguageQuotient language;
};

inline TheoryQuotient theory_quotient(const Theory& t, const LanguageEndorelation& j) {
    auto lq = language_quotient(t.language, j);
    Theory q{lq.quotient, {}};
    for (const auto& ax : t.axioms) q.axioms.insert(translate_expression(lq.canonical, ax));
    return {q, {t, q, lq.canonical}, lq};
}

/// Every expression of depth <= depth that m satisfies.
inline Theory theory_of_model(const Model& m, std::size_t depth) {
    if (depth < 1) throw Error("theory depth bound must be at least 1");
    Theory t{m.language, {}};
    Evaluator ev(m);
    for (const auto& e : enumerate_expressions(m.language, depth))
        if (ev.satisfies(e)) t.axioms.insert(e);
    return t;
}

}  // namespace iff
