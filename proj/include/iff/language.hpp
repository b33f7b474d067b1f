#pragma once

// Type languages (variables, entity types, relation types with set-valued
// arities), the expression algebra over them, and language morphisms.

#include <compare>
#include <memory>

#include "iff/tokens.hpp"

namespace iff {

/// A single reference function sends each variable to its entity type; the
/// signature of a relation type is that function restricted to its arity.
struct TypeLanguage {
    TokenSet variables;
    TokenSet entityTypes;
    TokenSet relationTypes;
    TokenMap reference;
    std::map<Token, TokenSet> arity;

    const TokenSet& arity_of(const Token& rel) const { return at(arity, rel, "arity"); }
    const Token& reference_of(const Token& var) const { return at(reference, var, "reference"); }

    TokenMap signature(const Token& rel) const {
        TokenMap sig;
        for (const auto& x : arity_of(rel)) sig[x] = reference_of(x);
        return sig;
    }

    friend bool operator==(const TypeLanguage&, const TypeLanguage&) = default;
};

inline std::vector<std::string> validate_language(const TypeLanguage& l) {
    std::vector<std::string> out;
    for (const auto& x : l.variables) {
        auto it = l.reference.find(x);
        if (it == l.reference.end())
            out.push_back("variable " + x + " has no reference");
        else if (!l.entityTypes.count(it->second))
            out.push_back("variable " + x + " references unknown entity type " + it->second);
    }
    for (const auto& [x, _] : l.reference)
        if (!l.variables.count(x)) out.push_back("reference given for unknown variable " + x);
    for (const auto& r : l.relationTypes) {
        auto it = l.arity.find(r);
        if (it == l.arity.end()) {
            out.push_back("relation type " + r + " has no arity");
            continue;
        }
        for (const auto& x : it->second)
            if (!l.variables.count(x)) out.push_back("arity of " + r + " uses unknown variable " + x);
    }
    for (const auto& [r, _] : l.arity)
        if (!l.relationTypes.count(r)) out.push_back("arity given for unknown relation type " + r);
    return out;
}

enum class Op { Atom, Not, And, Or, Implies, Exists, Forall, Subst };

/// Immutable expression tree.  Atoms carry no argument list: the variables of
/// an atom are the arity of its relation type.
class Expression {
public:
    static Expression atom(Token rel) { return make(Op::Atom, std::move(rel), {}, {}); }
    static Expression negation(Expression e) { return make(Op::Not, {}, {}, {std::move(e)}); }
    static Expression conj(Expression a, Expression b) {
        return make(Op::And, {}, {}, {std::move(a), std::move(b)});
    }
    static Expression disj(Expression a, Expression b) {
        return make(Op::Or, {}, {}, {std::move(a), std::move(b)});
    }
    static Expression implies(Expression a, Expression b) {
        return make(Op::Implies, {}, {}, {std::move(a), std::move(b)});
    }
    static Expression exists(Token var, Expression e) {
        return make(Op::Exists, std::move(var), {}, {std::move(e)});
    }
    static Expression forall(Token var, Expression e) {
        return make(Op::Forall, std::move(var), {}, {std::move(e)});
    }
    static Expression subst(TokenMap sigma, Expression e) {
        return make(Op::Subst, {}, std::move(sigma), {std::move(e)});
    }

    Op op() const { return node_->op; }
    /// Relation type of an atom, bound variable of a quantifier.
    const Token& name() const { return node_->name; }
    const TokenMap& mapping() const { return node_->mapping; }
    const Expression& lhs() const { return node_->children.at(0); }
    const Expression& rhs() const { return node_->children.at(1); }
    const Expression& body() const { return node_->children.at(0); }

    bool is_binary() const { return op() == Op::And || op() == Op::Or || op() == Op::Implies; }

    std::strong_ordering operator<=>(const Expression& o) const {
        if (node_ == o.node_) return std::strong_ordering::equal;
        if (auto c = op() <=> o.op(); c != 0) return c;
        if (auto c = name() <=> o.name(); c != 0) return c;
        if (auto c = mapping() <=> o.mapping(); c != 0) return c;
        return node_->children <=> o.node_->children;
    }
    bool operator==(const Expression& o) const { return (*this <=> o) == 0; }

    std::size_t depth() const {
        std::size_t d = 0;
        for (const auto& c : node_->children) d = std::max(d, c.depth() + 1);
        return d;
    }

    std::string str() const {
        switch (op()) {
            case Op::Atom: return "(atom " + name() + ")";
            case Op::Not: return "(not " + body().str() + ")";
            case Op::And: return "(and " + lhs().str() + " " + rhs().str() + ")";
            case Op::Or: return "(or " + lhs().str() + " " + rhs().str() + ")";
            case Op::Implies: return "(implies " + lhs().str() + " " + rhs().str() + ")";
            case Op::Exists: return "(exists " + name() + " " + body().str() + ")";
            case Op::Forall: return "(forall " + name() + " " + body().str() + ")";
            case Op::Subst: {
                std::string s = "(subst (";
                bool first = true;
                for (const auto& [x, y] : mapping()) {
                    s += (first ? "(" : " (") + x + " " + y + ")";
                    first = false;
                }
                return s + ") " + body().str() + ")";
            }
        }
        return {};
    }

    /// Same constructor with new children.
    Expression with_children(std::vector<Expression> children) const {
        return make(op(), name(), mapping(), std::move(children));
    }
    const std::vector<Expression>& children() const { return node_->children; }

private:
    struct Node {
        Op op;
        Token name;
        TokenMap mapping;
        std::vector<Expression> children;
    };

    explicit Expression(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

    static Expression make(Op op, Token name, TokenMap mapping, std::vector<Expression> children) {
        return Expression(std::make_shared<const Node>(
            Node{op, std::move(name), std::move(mapping), std::move(children)}));
    }

    std::shared_ptr<const Node> node_;
};

inline TokenSet free_vars(const TypeLanguage& l, const Expression& e) {
    switch (e.op()) {
        case Op::Atom: return l.arity_of(e.name());
        case Op::Not: return free_vars(l, e.body());
        case Op::And:
        case Op::Or:
        case Op::Implies: {
            auto s = free_vars(l, e.lhs());
            s.merge(free_vars(l, e.rhs()));
            return s;
        }
        case Op::Exists:
        case Op::Forall: {
            auto s = free_vars(l, e.body());
            s.erase(e.name());
            return s;
        }
        case Op::Subst: return image(e.mapping(), free_vars(l, e.body()), "substitution");
    }
    return {};
}

/// Empty when e is well formed over l; otherwise the first problem found.
inline std::optional<std::string> check_expression(const TypeLanguage& l, const Expression& e) {
    switch (e.op()) {
        case Op::Atom:
            if (!l.relationTypes.count(e.name())) return "unknown relation type " + e.name();
            return std::nullopt;
        case Op::Exists:
        case Op::Forall:
            if (!l.variables.count(e.name())) return "unknown bound variable " + e.name();
            return check_expression(l, e.body());
        case Op::Subst: {
            if (auto err = check_expression(l, e.body())) return err;
            for (const auto& [x, y] : e.mapping()) {
                if (!l.variables.count(x) || !l.variables.count(y))
                    return "substitution mentions unknown variable " + (l.variables.count(x) ? y : x);
                if (l.reference_of(x) != l.reference_of(y))
                    return "substitution " + x + "->" + y + " changes sort";
            }
            for (const auto& x : free_vars(l, e.body()))
                if (!e.mapping().count(x)) return "substitution undefined on free variable " + x;
            return std::nullopt;
        }
        default:
            for (const auto& c : e.children())
                if (auto err = check_expression(l, c)) return err;
            return std::nullopt;
    }
}

inline bool well_formed(const TypeLanguage& l, const Expression& e) { return !check_expression(l, e); }

/// Relation types go to relation types, or to expressions when `refinement` is set.
struct LanguageMorphism {
    TypeLanguage source, target;
    TokenMap varMap, entityMap;
    std::map<Token, Expression> relationMap;
    bool refinement = false;

    void map_relation(const Token& from, const Token& to) {
        relationMap.insert_or_assign(from, Expression::atom(to));
    }

    /// The target relation type of an atomic image; throws when the image is compound.
    Token relation_of(const Token& rel) const {
        const auto& img = at(relationMap, rel, "relation map");
        if (img.op() != Op::Atom) throw Error("relation " + rel + " maps to a compound expression");
        return img.name();
    }

    bool atomic() const {
        return std::all_of(relationMap.begin(), relationMap.end(),
                           [](const auto& kv) { return kv.second.op() == Op::Atom; });
    }
};

struct MorphismCheck {
    bool ok = true;
    std::string witness;
    explicit operator bool() const { return ok; }
    static MorphismCheck fail(std::string w) { return {false, std::move(w)}; }
};

inline void require_total_language_maps(const LanguageMorphism& m) {
    for (const auto& x : m.source.variables)
        if (!m.varMap.count(x) || !m.target.variables.count(m.varMap.at(x)))
            throw DomainError("variable map is not total on " + x);
    for (const auto& a : m.source.entityTypes)
        if (!m.entityMap.count(a) || !m.target.entityTypes.count(m.entityMap.at(a)))
            throw DomainError("entity map is not total on " + a);
    for (const auto& r : m.source.relationTypes)
        if (!m.relationMap.count(r)) throw DomainError("relation map is not total on " + r);
}

inline MorphismCheck language_morphism_valid(const LanguageMorphism& m) {
    require_total_language_maps(m);
    for (const auto& x : m.source.variables)
        if (m.target.reference_of(m.varMap.at(x)) != m.entityMap.at(m.source.reference_of(x)))
            return MorphismCheck::fail("reference of variable " + x);
    for (const auto& r : m.source.relationTypes) {
        const auto& img = m.relationMap.at(r);
        if (!m.refinement && img.op() != Op::Atom)
            return MorphismCheck::fail("relation " + r + " maps to an expression without refinement");
        if (auto err = check_expression(m.target, img))
            return MorphismCheck::fail("image of " + r + ": " + *err);
        if (free_vars(m.target, img) != image(m.varMap, m.source.arity_of(r)))
            return MorphismCheck::fail("arity of relation " + r);
    }
    return {};
}

inline Expression translate_expression(const LanguageMorphism& m, const Expression& e) {
    const auto& src = m.source;
    switch (e.op()) {
        case Op::Atom: return at(m.relationMap, e.name(), "relation map");
        case Op::Exists:
        case Op::Forall: {
            const auto& bound = at(m.varMap, e.name(), "variable map");
            for (const auto& y : free_vars(src, e))
                if (at(m.varMap, y, "variable map") == bound)
                    throw CaptureError("translating binds " + y + " under " + e.name());
            auto body = translate_expression(m, e.body());
            return e.op() == Op::Exists ? Expression::exists(bound, body) : Expression::forall(bound, body);
        }
        case Op::Subst: {
            TokenMap sigma;
            for (const auto& [x, y] : e.mapping()) {
                auto key = at(m.varMap, x, "variable map");
                auto val = at(m.varMap, y, "variable map");
                auto [it, fresh] = sigma.emplace(key, val);
                if (!fresh && it->second != val)
                    throw CaptureError("substitution becomes ill-defined at " + key);
            }
            return Expression::subst(std::move(sigma), translate_expression(m, e.body()));
        }
        default: {
            std::vector<Expression> kids;
            for (const auto& c : e.children()) kids.push_back(translate_expression(m, c));
            return e.with_children(std::move(kids));
        }
    }
}

/// m1 then m2.
inline LanguageMorphism compose(const LanguageMorphism& m1, const LanguageMorphism& m2) {
    LanguageMorphism out{m1.source, m2.target, {}, {}, {}, m1.refinement || m2.refinement};
    for (const auto& [x, y] : m1.varMap) out.varMap[x] = at(m2.varMap, y, "variable map");
    for (const auto& [a, b] : m1.entityMap) out.entityMap[a] = at(m2.entityMap, b, "entity map");
    for (const auto& [r, img] : m1.relationMap)
        out.relationMap.insert_or_assign(r, translate_expression(m2, img));
    return out;
}

inline LanguageMorphism identity(const TypeLanguage& l) {
    LanguageMorphism m{l, l, {}, {}, {}, false};
    for (const auto& x : l.variables) m.varMap[x] = x;
    for (const auto& a : l.entityTypes) m.entityMap[a] = a;
    for (const auto& r : l.relationTypes) m.map_relation(r, r);
    return m;
}

/// Every well-formed expression of depth <= maxDepth (atoms have depth 0).
/// Substitutions range over the sort-preserving maps on the body's free variables.
inline std::vector<Expression> enumerate_expressions(const TypeLanguage& l, std::size_t maxDepth) {
    std::set<Expression> all;
    std::vector<Expression> frontier;
    for (const auto& r : l.relationTypes) {
        all.insert(Expression::atom(r));
        frontier.push_back(Expression::atom(r));
    }
    for (std::size_t d = 1; d <= maxDepth; ++d) {
        std::vector<Expression> prev(all.begin(), all.end());
        std::vector<Expression> next;
        auto add = [&](Expression e) {
            if (all.insert(e).second) next.push_back(std::move(e));
        };
        for (const auto& e : prev) {
            add(Expression::negation(e));
            for (const auto& x : l.variables) {
                add(Expression::exists(x, e));
                add(Expression::forall(x, e));
            }
            auto fv = free_vars(l, e);
            TokenSet vars(l.variables);
            for_each_function(fv, vars, [&](const TokenMap& sigma) {
                for (const auto& [x, y] : sigma)
                    if (l.reference_of(x) != l.reference_of(y)) return;
                add(Expression::subst(sigma, e));
            });
            for (const auto& f : prev) {
                add(Expression::conj(e, f));
                add(Expression::disj(e, f));
                add(Expression::implies(e, f));
            }
        }
        frontier = std::move(next);
    }
    return {all.begin(), all.end()};
}

struct ExpressionLanguage {
    TypeLanguage language;                    // relation types are printed expressions
    std::map<Token, Expression> expressions;  // printed form -> expression
    LanguageMorphism embedding;               // rel -> (atom rel)
};

inline ExpressionLanguage expression_language(const TypeLanguage& l, std::size_t depth) {
    if (depth < 1) throw Error("expression language depth bound must be at least 1");
    ExpressionLanguage out;
    out.language.variables = l.variables;
    out.language.entityTypes = l.entityTypes;
    out.language.reference = l.reference;
    for (const auto& e : enumerate_expressions(l, depth)) {
        auto name = e.str();
        out.language.relationTypes.insert(name);
        out.language.arity[name] = free_vars(l, e);
        out.expressions.emplace(name, e);
    }
    out.embedding = identity(l);
    out.embedding.target = out.language;
    for (const auto& r : l.relationTypes) out.embedding.map_relation(r, Expression::atom(r).str());
    return out;
}

struct LanguageSum {
    TypeLanguage sum;
    LanguageMorphism left, right;
};

inline TypeLanguage tag_language(const TypeLanguage& l, Token (*tag)(const Token&)) {
    TypeLanguage t;
    for (const auto& x : l.variables) t.variables.insert(tag(x));
    for (const auto& a : l.entityTypes) t.entityTypes.insert(tag(a));
    for (const auto& r : l.relationTypes) t.relationTypes.insert(tag(r));
    for (const auto& [x, a] : l.reference) t.reference[tag(x)] = tag(a);
    for (const auto& [r, ar] : l.arity) {
        TokenSet tagged;
        for (const auto& x : ar) tagged.insert(tag(x));
        t.arity[tag(r)] = tagged;
    }
    return t;
}

inline LanguageMorphism tagging_morphism(const TypeLanguage& l, const TypeLanguage& sum,
                                         Token (*tag)(const Token&)) {
    LanguageMorphism m{l, sum, {}, {}, {}, false};
    for (const auto& x : l.variables) m.varMap[x] = tag(x);
    for (const auto& a : l.entityTypes) m.entityMap[a] = tag(a);
    for (const auto& r : l.relationTypes) m.map_relation(r, tag(r));
    return m;
}

/// Componentwise disjoint union with positional L:/R: tags.
inline LanguageSum language_sum(const TypeLanguage& a, const TypeLanguage& b) {
    auto la = tag_language(a, tok::left), lb = tag_language(b, tok::right);
    TypeLanguage s = la;
    s.variables.merge(lb.variables);
    s.entityTypes.merge(lb.entityTypes);
    s.relationTypes.merge(lb.relationTypes);
    s.reference.merge(lb.reference);
    s.arity.merge(lb.arity);
    return {s, tagging_morphism(a, s, tok::left), tagging_morphism(b, s, tok::right)};
}

/// Generator pairs on each sort of symbol.
struct LanguageEndorelation {
    PairSet variables;
    PairSet entityTypes;
    PairSet relationTypes;

    bool empty() const { return variables.empty() && entityTypes.empty() && relationTypes.empty(); }
};

struct LanguageQuotient {
    TypeLanguage quotient;
    LanguageMorphism canonical;
    TokenMap varClass, entityClass, relationClass;
};

inline LanguageQuotient language_quotient(const TypeLanguage& l, const LanguageEndorelation& j) {
    auto close = [](const TokenSet& elems, const PairSet& gens, const char* what) {
        Partition p(elems);
        for (const auto& [a, b] : gens) {
            if (!elems.count(a) || !elems.count(b))
                throw DomainError(std::string("endorelation relates unknown ") + what + " " +
                                  (elems.count(a) ? b : a));
            p.unite(a, b);
        }
        return p.naming();
    };
    LanguageQuotient out;
    out.varClass = close(l.variables, j.variables, "variable");
    out.entityClass = close(l.entityTypes, j.entityTypes, "entity type");
    out.relationClass = close(l.relationTypes, j.relationTypes, "relation type");

    auto& q = out.quotient;
    for (const auto& [x, c] : out.varClass) {
        q.variables.insert(c);
        auto ref = out.entityClass.at(l.reference_of(x));
        auto [it, fresh] = q.reference.emplace(c, ref);
        if (!fresh && it->second != ref) {
            auto other = std::find_if(out.varClass.begin(), out.varClass.end(), [&](const auto& kv) {
                return kv.second == c && out.entityClass.at(l.reference_of(kv.first)) != ref;
            });
            throw IncompatibleQuotient(x, other->first, "variables of unrelated sorts");
        }
    }
    for (const auto& [_, c] : out.entityClass) q.entityTypes.insert(c);
    std::map<Token, Token> witness;
    for (const auto& [r, c] : out.relationClass) {
        q.relationTypes.insert(c);
        auto ar = image(out.varClass, l.arity_of(r));
        auto [it, fresh] = q.arity.emplace(c, ar);
        if (fresh)
            witness[c] = r;
        else if (it->second != ar)
            throw IncompatibleQuotient(witness[c], r, "relation types of different arity");
    }
    out.canonical = LanguageMorphism{l, q, out.varClass, out.entityClass, {}, false};
    for (const auto& [r, c] : out.relationClass) out.canonical.map_relation(r, c);
    return out;
}

}  // namespace iff
