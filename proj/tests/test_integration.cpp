#include <gtest/gtest.h>

#include "support.hpp"

using namespace iff;
using namespace iff::test;

namespace {

const Document& w_doc() {
    static const Document d = load_doc("corpus/w_fixture.iff");
    return d;
}

AlignmentDiagram w_diagram() {
    const auto& d = w_doc();
    auto L1 = d.logic("L1"), L2 = d.logic("L2");
    return build_alignment(L1, L2, L1, L2, identity(L1), identity(L2), d.theory("T"), d.theory_morphism("g1"),
                           d.theory_morphism("g2"));
}

Token swap_tag(const Token& t) {
    if (t.rfind("L:", 0) == 0) return "R:" + t.substr(2);
    if (t.rfind("R:", 0) == 0) return "L:" + t.substr(2);
    return t;
}

Token swap_symbol(const Token& t) {
    if (t.size() > 1 && t.front() == '[') {
        auto parts = tok::split_top(t.substr(1, t.size() - 2));
        TokenSet members;
        for (const auto& p : parts) members.insert(swap_tag(p));
        return tok::cls(members);
    }
    return swap_tag(t);
}

// The renaming that exchanges the two sides of a fused logic.
Renaming side_swap(const IntegrationResult& a, const IntegrationResult& b) {
    Renaming r;
    const auto& lang = a.fused.theory.language;
    for (const auto& x : lang.variables) r.vars[x] = swap_symbol(x);
    for (const auto& t : lang.entityTypes) r.entityTypes[t] = swap_symbol(t);
    for (const auto& t : lang.relationTypes) r.relationTypes[t] = swap_symbol(t);
    for (const auto& e : a.fused.model.entities) {
        const auto& [x, y] = a.detail.sum.parts.entityParts.at(e);
        r.entities[e] = tok::pair(y, x);
    }
    for (const auto& [id, coords] : a.fused.model.tuples) {
        const auto& [t1, t2] = a.detail.sum.parts.tupleParts.at(id);
        for (const auto& [id2, coords2] : b.fused.model.tuples) {
            if (b.detail.sum.parts.tupleParts.at(id2) != std::pair{t2, t1}) continue;
            Assignment renamed;
            for (const auto& [x, e] : coords) renamed[r.vars.at(x)] = r.entities.at(e);
            if (renamed == coords2) r.tuples[id] = id2;
        }
    }
    return r;
}

}  // namespace

TEST(Integration, DegenerateAlignment) {
    const auto& d = w_doc();
    auto L1 = d.logic("L1"), L2 = d.logic("L2");
    auto diag = build_alignment(L1, L2, L1, L2, identity(L1), identity(L2), empty_theory(), from_empty(L1.theory),
                                from_empty(L2.theory));
    EXPECT_TRUE(diag.K.theory.language.entityTypes.empty());
    EXPECT_EQ(diag.K.model.entities, TokenSet{"{}"});
}

TEST(Integration, FixtureAlignmentValid) {
    auto diag = w_diagram();
    EXPECT_TRUE(logic_morphism_valid(diag.k1, 2).ok());
    EXPECT_TRUE(logic_morphism_valid(diag.k2, 2).ok());
    // k is the transpose, recomputed
    auto t1 = transpose(diag.g1, diag.P1);
    EXPECT_EQ(diag.k1.entityMap, t1.entityMap);
    EXPECT_EQ(diag.k1.tupleMap, t1.tupleMap);
}

TEST(Integration, BrokenLinkIsNamed) {
    const auto& d = w_doc();
    auto L1 = d.logic("L1"), L2 = d.logic("L2");
    auto g1 = d.theory_morphism("g1");
    g1.language.entityMap["Agent"] = "Company";  // a still refers to Person
    try {
        build_alignment(L1, L2, L1, L2, identity(L1), identity(L2), d.theory("T"), g1, d.theory_morphism("g2"));
        FAIL() << "expected an edge failure";
    } catch (const EdgeFailure& e) {
        EXPECT_EQ(e.edge, "g1");
    }
}

TEST(Integration, BrokenPortalLinkIsNamed) {
    const auto& d = w_doc();
    auto L1 = d.logic("L1"), L2 = d.logic("L2");
    auto p1 = identity(L1);
    p1.entityMap["bob"] = "acme";
    try {
        build_alignment(L1, L2, L1, L2, p1, identity(L2), d.theory("T"), d.theory_morphism("g1"),
                        d.theory_morphism("g2"));
        FAIL() << "expected an edge failure";
    } catch (const EdgeFailure& e) {
        EXPECT_EQ(e.edge, "p1");
    }
}

TEST(Integration, TrivialIsSum) {
    const auto& d = w_doc();
    auto L1 = d.logic("L1"), L2 = d.logic("L2");
    auto r = trivial_integration(L1, L2);
    EXPECT_EQ(r.fused, logic_sum(L1, L2).sum);
    EXPECT_TRUE(is_sound(r.fused));
}

TEST(Integration, SelfIntegrationIsomorphic) {
    for (const auto& name : {"L1", "L2"}) {
        auto l = w_doc().logic(name);
        auto r = self_integration(l);
        auto ren = diagonal_renaming(l, r.detail.sum.parts, r.fused);
        ASSERT_TRUE(ren.has_value());
        EXPECT_TRUE(isomorphic_via(l, r.fused, *ren));
    }
}

TEST(Integration, FixtureUnification) {
    auto diag = w_diagram();
    auto r = unify(diag);
    const auto& lang = r.fused.theory.language;
    EXPECT_EQ(lang.entityTypes, (TokenSet{"[L:Company,R:Firm]", "[L:Person,R:Human]"}));
    EXPECT_EQ(lang.relationTypes, TokenSet{"[L:WorksFor,R:EmployedBy]"});
    EXPECT_EQ(lang.variables, (TokenSet{"[L:x,R:u]", "[L:y,R:v]"}));
    TokenSet agreeing;
    for (const auto& a : diag.P1.model.entities)
        for (const auto& b : diag.P2.model.entities)
            if (diag.k1.entityMap.at(a) == diag.k2.entityMap.at(b)) agreeing.insert(tok::pair(a, b));
    EXPECT_EQ(r.fused.model.entities, agreeing);
    EXPECT_EQ(agreeing.size(), 6u);  // 2 persons x 2 humans + 1 company x 2 firms
    EXPECT_TRUE(is_sound(r.fused));
}

TEST(Integration, OpspanCommutes) {
    auto diag = w_diagram();
    auto r = unify(diag);
    auto a = compose(diag.k1, r.v1), b = compose(diag.k2, r.v2);
    EXPECT_EQ(a.language.varMap, b.language.varMap);
    EXPECT_EQ(a.language.entityMap, b.language.entityMap);
    EXPECT_EQ(a.language.relationMap, b.language.relationMap);
    for (const auto& e : r.fused.model.entities) EXPECT_EQ(a.entityMap.at(e), b.entityMap.at(e));
    for (const auto& [t, _] : r.fused.model.tuples) EXPECT_EQ(a.tupleMap.at(t), b.tupleMap.at(t));
}

TEST(Integration, UnifyIsSymmetric) {
    const auto& d = w_doc();
    auto L1 = d.logic("L1"), L2 = d.logic("L2");
    auto T = d.theory("T");
    auto g1 = d.theory_morphism("g1"), g2 = d.theory_morphism("g2");
    auto r = unify(build_alignment(L1, L2, L1, L2, identity(L1), identity(L2), T, g1, g2));
    auto s = unify(build_alignment(L2, L1, L2, L1, identity(L2), identity(L1), T, g2, g1));
    auto ren = side_swap(r, s);
    EXPECT_TRUE(isomorphic_via(r.fused, s.fused, ren));
}

TEST(Integration, PracticalSymmetricCase) {
    auto l = w_doc().logic("L1");
    auto g = identity(l.theory);
    auto p = practical_integrate(l, l, l.model.entities, l.theory, g, g);
    TokenSet diagonal;
    for (const auto& e : l.model.entities) diagonal.insert(tok::pair(e, e));
    EXPECT_EQ(p.result.fused.model.entities, diagonal);
}

TEST(Integration, PracticalFixture) {
    const auto& d = w_doc();
    auto L1 = d.logic("L1"), L2 = d.logic("L2");
    auto p = practical_integrate(L1, L2, {"bob", "acme"}, d.theory("T"), d.theory_morphism("g1"),
                                 d.theory_morphism("g2"));
    EXPECT_EQ(p.result.fused.model.entities, (TokenSet{"<acme,acme>", "<bob,bob>"}));
    LanguageEndorelation j{{{"L:x", "R:u"}, {"L:y", "R:v"}},
                           {{"L:Person", "R:Human"}, {"L:Company", "R:Firm"}},
                           {{"L:WorksFor", "R:EmployedBy"}}};
    auto expected = theory_quotient(theory_sum(L1.theory, L2.theory).sum, j).quotient;
    EXPECT_EQ(p.result.fused.theory, expected);
    EXPECT_EQ(p.result.fused.model.tuples.size(), 1u);
    EXPECT_EQ(p.comparison.language.varMap, identity(expected.language).varMap);
    EXPECT_TRUE(logic_morphism_valid(p.comparison, 2).ok());
    EXPECT_TRUE(logic_morphism_valid(p.mediating, 2).ok());
}

TEST(Integration, PracticalAgreementFailure) {
    const auto& d = w_doc();
    auto L1 = d.logic("L1"), L2 = d.logic("L2");
    // acme stops being a Firm on the right: the fibers disagree at (acme, Org)
    L2.model.entityIncidence.erase({"acme", "Firm"});
    L2.model.relationIncidence.erase({"job1", "EmployedBy"});
    try {
        practical_integrate(L1, L2, {"bob", "acme"}, d.theory("T"), d.theory_morphism("g1"),
                            d.theory_morphism("g2"));
        FAIL() << "expected an agreement failure";
    } catch (const AgreementFailure& e) {
        EXPECT_NE(std::string(e.what()).find("(acme, Org)"), std::string::npos) << e.what();
    }
}

TEST(Integration, PracticalSubsetViolation) {
    const auto& d = w_doc();
    EXPECT_THROW(practical_integrate(d.logic("L1"), d.logic("L2"), {"carol"}, d.theory("T"),
                                     d.theory_morphism("g1"), d.theory_morphism("g2")),
                 SubsetViolation);
}
