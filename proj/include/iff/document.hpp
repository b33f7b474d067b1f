#pragma once

// Ontology documents: named top-level forms for languages, theories, models,
// logics, theory and logic morphisms, and alignments.

#include "iff/integration.hpp"
#include "iff/sexpr.hpp"

namespace iff {

class ReferenceError : public Error {
public:
    explicit ReferenceError(const std::string& name) : Error("unresolved reference " + name), name(name) {}
    std::string name;
};

struct TheoryDecl {
    std::string language;
    Theory theory;
    friend bool operator==(const TheoryDecl&, const TheoryDecl&) = default;
};

struct ModelDecl {
    std::string language;
    Model model;
    friend bool operator==(const ModelDecl&, const ModelDecl&) = default;
};

struct LogicDecl {
    std::string theory, model;
    std::optional<TokenSet> normalEntities, normalTuples;  // absent means all
    friend bool operator==(const LogicDecl&, const LogicDecl&) = default;
};

struct TypeMaps {
    TokenMap varMap, entityMap;
    std::map<Token, Expression> relationMap;
    bool refinement = false;
    friend bool operator==(const TypeMaps&, const TypeMaps&) = default;
};

struct TheoryMorphismDecl {
    std::string source, target;
    TypeMaps maps;
    friend bool operator==(const TheoryMorphismDecl&, const TheoryMorphismDecl&) = default;
};

struct LogicMorphismDecl {
    std::string source, target;
    TypeMaps maps;
    TokenMap entityMap, tupleMap;
    friend bool operator==(const LogicMorphismDecl&, const LogicMorphismDecl&) = default;
};

struct AlignmentDecl {
    std::string left, right, mediating, leftLink, rightLink;
    std::optional<std::pair<std::string, std::string>> leftPortal, rightPortal;  // (portal logic, link)
    std::optional<TokenSet> common;
    friend bool operator==(const AlignmentDecl&, const AlignmentDecl&) = default;
};

struct Document {
    std::vector<std::pair<std::string, std::string>> order;  // (kind, name) as written
    std::map<std::string, TypeLanguage> languages;
    std::map<std::string, TheoryDecl> theories;
    std::map<std::string, ModelDecl> models;
    std::map<std::string, LogicDecl> logics;
    std::map<std::string, TheoryMorphismDecl> theoryMorphisms;
    std::map<std::string, LogicMorphismDecl> logicMorphisms;
    std::map<std::string, AlignmentDecl> alignments;

    friend bool operator==(const Document&, const Document&) = default;

    bool has(const std::string& name) const {
        return std::any_of(order.begin(), order.end(), [&](const auto& p) { return p.second == name; });
    }

    const Theory& theory(const std::string& name) const { return find(theories, name).theory; }
    const Model& model(const std::string& name) const { return find(models, name).model; }

    Logic logic(const std::string& name) const {
        const auto& d = find(logics, name);
        Logic l{theory(d.theory), model(d.model), {}, {}};
        l.normalEntities = d.normalEntities.value_or(l.model.entities);
        l.normalTuples = d.normalTuples.value_or(l.model.tuple_ids());
        return l;
    }

    TheoryMorphism theory_morphism(const std::string& name) const {
        const auto& d = find(theoryMorphisms, name);
        TheoryMorphism g{theory(d.source), theory(d.target), {}};
        g.language = language_morphism(d.maps, g.source.language, g.target.language);
        return g;
    }

    LogicMorphism logic_morphism(const std::string& name) const {
        const auto& d = find(logicMorphisms, name);
        LogicMorphism f{logic(d.source), logic(d.target), {}, d.entityMap, d.tupleMap};
        f.language = language_morphism(d.maps, f.source.theory.language, f.target.theory.language);
        return f;
    }

    static LanguageMorphism language_morphism(const TypeMaps& m, const TypeLanguage& s, const TypeLanguage& t) {
        return {s, t, m.varMap, m.entityMap, m.relationMap, m.refinement};
    }

    void declare(const std::string& kind, const std::string& name) {
        if (has(name)) throw Error("duplicate form name " + name);
        order.emplace_back(kind, name);
    }

    /// Adds a logic with its language, theory and model under derived names.
    void add_logic(const std::string& name, const Logic& l) {
        auto lang = name + "-language", th = name + "-theory", mo = name + "-model";
        declare("language", lang);
        languages[lang] = l.theory.language;
        declare("theory", th);
        theories[th] = {lang, l.theory};
        declare("model", mo);
        models[mo] = {lang, l.model};
        declare("logic", name);
        LogicDecl d{th, mo, {}, {}};
        if (l.normalEntities != l.model.entities) d.normalEntities = l.normalEntities;
        if (l.normalTuples != l.model.tuple_ids()) d.normalTuples = l.normalTuples;
        logics[name] = d;
    }

    void add_logic_morphism(const std::string& name, const std::string& source, const std::string& target,
                            const LogicMorphism& f) {
        declare("logic-morphism", name);
        logicMorphisms[name] = {source, target,
                                {f.language.varMap, f.language.entityMap, f.language.relationMap, f.language.refinement},
                                f.entityMap, f.tupleMap};
    }

private:
    template <class V>
    static const V& find(const std::map<std::string, V>& m, const std::string& name) {
        auto it = m.find(name);
        if (it == m.end()) throw ReferenceError(name);
        return it->second;
    }
};

namespace detail {

[[noreturn]] inline void fail(const SExpr& at, const std::string& what) { throw ParseError(what, at.line, at.column); }

inline const std::string& symbol(const SExpr& e, const char* what) {
    if (!e.atom) fail(e, std::string("expected a symbol for ") + what);
    return e.symbol;
}

inline TokenSet symbols(const SExpr& clause, std::size_t from = 1) {
    TokenSet out;
    for (std::size_t i = from; i < clause.items.size(); ++i) out.insert(symbol(clause.items[i], "set member"));
    return out;
}

/// (a b) pairs following the clause head.
inline std::vector<std::pair<Token, Token>> pairs(const SExpr& clause) {
    std::vector<std::pair<Token, Token>> out;
    for (std::size_t i = 1; i < clause.items.size(); ++i) {
        const auto& p = clause.items[i];
        if (p.atom || p.items.size() != 2) fail(p, "expected a pair (a b)");
        out.emplace_back(symbol(p.items[0], "pair"), symbol(p.items[1], "pair"));
    }
    return out;
}

inline TokenMap pair_map(const SExpr& clause) {
    TokenMap out;
    for (const auto& [a, b] : pairs(clause))
        if (!out.emplace(a, b).second) fail(clause, "duplicate key " + a);
    return out;
}

/// ((x a) (y b)) -> assignment
inline Assignment assignment(const SExpr& e) {
    if (e.atom) fail(e, "expected an assignment list");
    SExpr wrapped = SExpr::list({SExpr::sym("_")});
    for (const auto& i : e.items) wrapped.items.push_back(i);
    wrapped.line = e.line;
    wrapped.column = e.column;
    return pair_map(wrapped);
}

inline Expression expression(const SExpr& e) {
    if (e.atom) fail(e, "expected an expression form");
    auto h = e.head();
    auto arity = [&](std::size_t n) {
        if (e.items.size() != n + 1) fail(e, h + " takes " + std::to_string(n) + " arguments");
    };
    if (h == "atom") {
        arity(1);
        return Expression::atom(symbol(e.items[1], "relation type"));
    }
    if (h == "not") {
        arity(1);
        return Expression::negation(expression(e.items[1]));
    }
    if (h == "and" || h == "or" || h == "implies") {
        arity(2);
        auto a = expression(e.items[1]), b = expression(e.items[2]);
        return h == "and" ? Expression::conj(a, b) : h == "or" ? Expression::disj(a, b) : Expression::implies(a, b);
    }
    if (h == "exists" || h == "forall") {
        arity(2);
        const auto& x = symbol(e.items[1], "bound variable");
        auto body = expression(e.items[2]);
        return h == "exists" ? Expression::exists(x, body) : Expression::forall(x, body);
    }
    if (h == "subst") {
        arity(2);
        return Expression::subst(assignment(e.items[1]), expression(e.items[2]));
    }
    fail(e, "unknown expression form '" + h + "'");
}

inline SExpr to_sexpr(const Expression& e) { return read_sexprs(e.str()).at(0); }

/// Clauses of a top-level form, keyed by head, each at most once.
inline std::map<std::string, const SExpr*> clauses(const SExpr& form, const std::set<std::string>& allowed) {
    std::map<std::string, const SExpr*> out;
    for (std::size_t i = 2; i < form.items.size(); ++i) {
        const auto& c = form.items[i];
        auto h = c.head();
        if (h.empty()) fail(c, "expected a clause");
        if (!allowed.count(h)) fail(c, "unknown clause '" + h + "' in " + form.head());
        if (!out.emplace(h, &c).second) fail(c, "repeated clause '" + h + "'");
    }
    return out;
}

inline const SExpr& required(const std::map<std::string, const SExpr*>& cs, const SExpr& form, const std::string& h) {
    auto it = cs.find(h);
    if (it == cs.end()) fail(form, form.head() + " needs a (" + h + " ...) clause");
    return *it->second;
}

inline std::string single(const std::map<std::string, const SExpr*>& cs, const SExpr& form, const std::string& h) {
    const auto& c = required(cs, form, h);
    if (c.items.size() != 2) fail(c, "(" + h + " NAME) takes one name");
    return symbol(c.items[1], h.c_str());
}

inline void check_report(const SExpr& form, const std::vector<std::string>& errs) {
    if (!errs.empty()) fail(form, form.head() + " " + form.items[1].symbol + ": " + errs.front());
}

inline TypeMaps type_maps(const std::map<std::string, const SExpr*>& cs) {
    TypeMaps m;
    m.refinement = cs.count("refinement") > 0;
    if (cs.count("variables")) m.varMap = pair_map(*cs.at("variables"));
    if (cs.count("entity-types")) m.entityMap = pair_map(*cs.at("entity-types"));
    if (cs.count("relations"))
        for (std::size_t i = 1; i < cs.at("relations")->items.size(); ++i) {
            const auto& p = cs.at("relations")->items[i];
            if (p.atom || p.items.size() != 2) fail(p, "expected (relation image)");
            const auto& r = symbol(p.items[0], "relation type");
            auto img = p.items[1].atom ? Expression::atom(p.items[1].symbol) : expression(p.items[1]);
            m.relationMap.insert_or_assign(r, img);
        }
    return m;
}

inline const std::set<std::string> kKinds{"language", "theory", "model", "logic", "theory-morphism",
                                          "logic-morphism", "alignment"};

}  // namespace detail

inline Document parse_document(const std::string& text) {
    using namespace detail;
    Document d;
    auto forms = read_sexprs(text);
    for (const auto& f : forms) {
        auto h = f.head();
        if (!kKinds.count(h)) fail(f, h.empty() ? "expected a top-level form" : "unknown form '" + h + "'");
        if (f.items.size() < 2) fail(f, h + " needs a name");
        const auto& name = symbol(f.items[1], "form name");
        if (d.has(name)) fail(f.items[1], "duplicate form name " + name);
        d.order.emplace_back(h, name);
    }
    // Resolve in dependency order so that forms may appear in any order.
    auto pass = [&](const std::string& kind, auto&& fn) {
        for (const auto& f : forms)
            if (f.head() == kind) fn(f, f.items[1].symbol);
    };
    auto resolve = [&](const SExpr& at, const std::string& name, const auto& table) {
        if (!table.count(name)) fail(at, "unresolved reference " + name);
    };

    pass("language", [&](const SExpr& f, const std::string& name) {
        auto cs = clauses(f, {"variables", "entity-types", "reference", "relations"});
        TypeLanguage l;
        if (cs.count("variables")) l.variables = symbols(*cs["variables"]);
        if (cs.count("entity-types")) l.entityTypes = symbols(*cs["entity-types"]);
        if (cs.count("reference")) l.reference = pair_map(*cs["reference"]);
        if (cs.count("relations"))
            for (std::size_t i = 1; i < cs["relations"]->items.size(); ++i) {
                const auto& r = cs["relations"]->items[i];
                if (r.atom || r.items.size() != 2 || r.items[1].atom) fail(r, "expected (relation (variables...))");
                const auto& rn = symbol(r.items[0], "relation type");
                l.relationTypes.insert(rn);
                l.arity[rn] = symbols(r.items[1], 0);
            }
        check_report(f, validate_language(l));
        d.languages[name] = l;
    });
    pass("theory", [&](const SExpr& f, const std::string& name) {
        auto cs = clauses(f, {"language", "axioms"});
        auto lang = single(cs, f, "language");
        resolve(*cs["language"], lang, d.languages);
        Theory t{d.languages.at(lang), {}};
        if (cs.count("axioms"))
            for (std::size_t i = 1; i < cs["axioms"]->items.size(); ++i)
                t.axioms.insert(expression(cs["axioms"]->items[i]));
        check_report(f, validate_theory(t));
        d.theories[name] = {lang, t};
    });
    pass("model", [&](const SExpr& f, const std::string& name) {
        auto cs = clauses(f, {"language", "entities", "incidence", "extents", "tuples", "classify"});
        auto lang = single(cs, f, "language");
        resolve(*cs["language"], lang, d.languages);
        const auto& l = d.languages.at(lang);
        TokenSet entities = cs.count("entities") ? symbols(*cs["entities"]) : TokenSet{};
        PairSet inc;
        if (cs.count("incidence"))
            for (const auto& p : pairs(*cs["incidence"])) inc.insert(p);
        Model m;
        if (cs.count("extents")) {
            if (cs.count("tuples") || cs.count("classify")) fail(f, "model mixes (extents) with (tuples)/(classify)");
            std::map<Token, std::set<Assignment>> ext;
            for (std::size_t i = 1; i < cs["extents"]->items.size(); ++i) {
                const auto& r = cs["extents"]->items[i];
                if (r.atom || r.items.empty()) fail(r, "expected (relation assignment...)");
                auto& set = ext[symbol(r.items[0], "relation type")];
                for (std::size_t j = 1; j < r.items.size(); ++j) set.insert(assignment(r.items[j]));
            }
            try {
                m = model_from_extents(l, entities, inc, ext);
            } catch (const DomainError& e) {
                fail(*cs["extents"], e.what());
            }
        } else {
            m = Model{l, entities, inc, {}, {}};
            if (cs.count("tuples"))
                for (std::size_t i = 1; i < cs["tuples"]->items.size(); ++i) {
                    const auto& t = cs["tuples"]->items[i];
                    if (t.atom || t.items.size() != 2) fail(t, "expected (tuple ((variable entity)...))");
                    if (!m.tuples.emplace(symbol(t.items[0], "tuple"), assignment(t.items[1])).second)
                        fail(t, "duplicate tuple " + t.items[0].symbol);
                }
            if (cs.count("classify"))
                for (const auto& p : pairs(*cs["classify"])) m.relationIncidence.insert(p);
        }
        check_report(f, validate_model(m));
        d.models[name] = {lang, m};
    });
    pass("logic", [&](const SExpr& f, const std::string& name) {
        auto cs = clauses(f, {"theory", "model", "normal-entities", "normal-tuples"});
        LogicDecl ld{single(cs, f, "theory"), single(cs, f, "model"), {}, {}};
        resolve(*cs["theory"], ld.theory, d.theories);
        resolve(*cs["model"], ld.model, d.models);
        if (!(d.theories.at(ld.theory).theory.language == d.models.at(ld.model).model.language))
            fail(f, "logic " + name + ": theory and model languages differ");
        if (cs.count("normal-entities")) ld.normalEntities = symbols(*cs["normal-entities"]);
        if (cs.count("normal-tuples")) ld.normalTuples = symbols(*cs["normal-tuples"]);
        const auto& m = d.models.at(ld.model).model;
        if (ld.normalEntities && !is_subset(*ld.normalEntities, m.entities))
            fail(*cs["normal-entities"], "normal entities are not entities of " + ld.model);
        if (ld.normalTuples && !is_subset(*ld.normalTuples, m.tuple_ids()))
            fail(*cs["normal-tuples"], "normal tuples are not tuples of " + ld.model);
        d.logics[name] = ld;
    });
    pass("theory-morphism", [&](const SExpr& f, const std::string& name) {
        auto cs = clauses(f, {"source", "target", "refinement", "variables", "entity-types", "relations"});
        TheoryMorphismDecl g{single(cs, f, "source"), single(cs, f, "target"), type_maps(cs)};
        resolve(*cs["source"], g.source, d.theories);
        resolve(*cs["target"], g.target, d.theories);
        d.theoryMorphisms[name] = g;
    });
    pass("logic-morphism", [&](const SExpr& f, const std::string& name) {
        auto cs = clauses(f, {"source", "target", "refinement", "variables", "entity-types", "relations", "entities",
                              "tuples"});
        LogicMorphismDecl g{single(cs, f, "source"), single(cs, f, "target"), type_maps(cs), {}, {}};
        resolve(*cs["source"], g.source, d.logics);
        resolve(*cs["target"], g.target, d.logics);
        if (cs.count("entities")) g.entityMap = pair_map(*cs["entities"]);
        if (cs.count("tuples")) g.tupleMap = pair_map(*cs["tuples"]);
        d.logicMorphisms[name] = g;
    });
    pass("alignment", [&](const SExpr& f, const std::string& name) {
        auto cs = clauses(f, {"left", "right", "mediating", "left-link", "right-link", "left-portal", "right-portal",
                              "common"});
        AlignmentDecl a{single(cs, f, "left"), single(cs, f, "right"), single(cs, f, "mediating"),
                        single(cs, f, "left-link"), single(cs, f, "right-link"), {}, {}, {}};
        resolve(*cs["left"], a.left, d.logics);
        resolve(*cs["right"], a.right, d.logics);
        resolve(*cs["mediating"], a.mediating, d.theories);
        resolve(*cs["left-link"], a.leftLink, d.theoryMorphisms);
        resolve(*cs["right-link"], a.rightLink, d.theoryMorphisms);
        for (const auto& [side, slot] : {std::pair{"left-portal", &a.leftPortal}, std::pair{"right-portal", &a.rightPortal}}) {
            if (!cs.count(side)) continue;
            const auto& c = *cs[side];
            if (c.items.size() != 3) fail(c, std::string("(") + side + " PORTAL LINK) takes two names");
            *slot = std::pair{symbol(c.items[1], side), symbol(c.items[2], side)};
            resolve(c, (*slot)->first, d.logics);
            resolve(c, (*slot)->second, d.logicMorphisms);
        }
        if (cs.count("common")) a.common = symbols(*cs["common"]);
        d.alignments[name] = a;
    });
    return d;
}

namespace detail {

inline SExpr set_clause(const std::string& head, const TokenSet& s) {
    auto c = SExpr::list({SExpr::sym(head)});
    for (const auto& x : s) c.add(x);
    return c;
}

inline SExpr map_clause(const std::string& head, const TokenMap& m) {
    auto c = SExpr::list({SExpr::sym(head)});
    for (const auto& [a, b] : m) c.add(SExpr::list({SExpr::sym(a), SExpr::sym(b)}));
    return c;
}

inline SExpr assignment_sexpr(const Assignment& a) {
    auto c = SExpr::list();
    for (const auto& [x, e] : a) c.add(SExpr::list({SExpr::sym(x), SExpr::sym(e)}));
    return c;
}

inline void add_type_maps(SExpr& f, const TypeMaps& m) {
    if (m.refinement) f.add(SExpr::list({SExpr::sym("refinement")}));
    f.add(map_clause("variables", m.varMap));
    f.add(map_clause("entity-types", m.entityMap));
    auto rels = SExpr::list({SExpr::sym("relations")});
    for (const auto& [r, img] : m.relationMap)
        rels.add(SExpr::list({SExpr::sym(r), img.op() == Op::Atom ? SExpr::sym(img.name()) : to_sexpr(img)}));
    f.add(rels);
}

inline SExpr head(const std::string& kind, const std::string& name) {
    return SExpr::list({SExpr::sym(kind), SExpr::sym(name)});
}

/// Extents shorthand when the model is exactly what the shorthand would rebuild.
inline std::optional<std::map<Token, std::set<Assignment>>> as_extents(const Model& m) {
    std::map<Token, std::set<Assignment>> ext;
    for (const auto& r : m.language.relationTypes) ext[r] = m.relation_extent(r);
    try {
        if (model_from_extents(m.language, m.entities, m.entityIncidence, ext) == m) return ext;
    } catch (const Error&) {
    }
    return std::nullopt;
}

}  // namespace detail

inline std::string serialize(const Document& d) {
    using namespace detail;
    std::string out;
    for (const auto& [kind, name] : d.order) {
        SExpr f = head(kind, name);
        if (kind == "language") {
            const auto& l = d.languages.at(name);
            f.add(set_clause("variables", l.variables));
            f.add(set_clause("entity-types", l.entityTypes));
            f.add(map_clause("reference", l.reference));
            auto rels = SExpr::list({SExpr::sym("relations")});
            for (const auto& r : l.relationTypes) {
                auto ar = SExpr::list();
                for (const auto& x : l.arity_of(r)) ar.add(x);
                rels.add(SExpr::list({SExpr::sym(r), ar}));
            }
            f.add(rels);
        } else if (kind == "theory") {
            const auto& t = d.theories.at(name);
            f.add(SExpr::list({SExpr::sym("language"), SExpr::sym(t.language)}));
            auto ax = SExpr::list({SExpr::sym("axioms")});
            for (const auto& a : t.theory.axioms) ax.add(to_sexpr(a));
            f.add(ax);
        } else if (kind == "model") {
            const auto& md = d.models.at(name);
            const auto& m = md.model;
            f.add(SExpr::list({SExpr::sym("language"), SExpr::sym(md.language)}));
            f.add(set_clause("entities", m.entities));
            auto inc = SExpr::list({SExpr::sym("incidence")});
            for (const auto& [e, a] : m.entityIncidence) inc.add(SExpr::list({SExpr::sym(e), SExpr::sym(a)}));
            f.add(inc);
            if (auto ext = as_extents(m)) {
                auto c = SExpr::list({SExpr::sym("extents")});
                for (const auto& [r, set] : *ext) {
                    auto rc = SExpr::list({SExpr::sym(r)});
                    for (const auto& a : set) rc.add(assignment_sexpr(a));
                    c.add(rc);
                }
                f.add(c);
            } else {
                auto ts = SExpr::list({SExpr::sym("tuples")});
                for (const auto& [t, coords] : m.tuples) ts.add(SExpr::list({SExpr::sym(t), assignment_sexpr(coords)}));
                f.add(ts);
                auto cl = SExpr::list({SExpr::sym("classify")});
                for (const auto& [t, r] : m.relationIncidence) cl.add(SExpr::list({SExpr::sym(t), SExpr::sym(r)}));
                f.add(cl);
            }
        } else if (kind == "logic") {
            const auto& l = d.logics.at(name);
            f.add(SExpr::list({SExpr::sym("theory"), SExpr::sym(l.theory)}));
            f.add(SExpr::list({SExpr::sym("model"), SExpr::sym(l.model)}));
            if (l.normalEntities) f.add(set_clause("normal-entities", *l.normalEntities));
            if (l.normalTuples) f.add(set_clause("normal-tuples", *l.normalTuples));
        } else if (kind == "theory-morphism") {
            const auto& g = d.theoryMorphisms.at(name);
            f.add(SExpr::list({SExpr::sym("source"), SExpr::sym(g.source)}));
            f.add(SExpr::list({SExpr::sym("target"), SExpr::sym(g.target)}));
            add_type_maps(f, g.maps);
        } else if (kind == "logic-morphism") {
            const auto& g = d.logicMorphisms.at(name);
            f.add(SExpr::list({SExpr::sym("source"), SExpr::sym(g.source)}));
            f.add(SExpr::list({SExpr::sym("target"), SExpr::sym(g.target)}));
            add_type_maps(f, g.maps);
            f.add(map_clause("entities", g.entityMap));
            f.add(map_clause("tuples", g.tupleMap));
        } else if (kind == "alignment") {
            const auto& a = d.alignments.at(name);
            for (const auto& [h, v] : {std::pair{"left", &a.left}, std::pair{"right", &a.right},
                                       std::pair{"mediating", &a.mediating}, std::pair{"left-link", &a.leftLink},
                                       std::pair{"right-link", &a.rightLink}})
                f.add(SExpr::list({SExpr::sym(h), SExpr::sym(*v)}));
            if (a.leftPortal)
                f.add(SExpr::list({SExpr::sym("left-portal"), SExpr::sym(a.leftPortal->first), SExpr::sym(a.leftPortal->second)}));
            if (a.rightPortal)
                f.add(SExpr::list({SExpr::sym("right-portal"), SExpr::sym(a.rightPortal->first), SExpr::sym(a.rightPortal->second)}));
            if (a.common) f.add(set_clause("common", *a.common));
        }
        out += write_form(f) + "\n";
    }
    return out;
}

}  // namespace iff
