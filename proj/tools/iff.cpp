// Command-line front end over ontology documents.
//
// Exit status: 0 success, 1 validation or verdict failure, 2 usage error.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "iff/document.hpp"

namespace {

using namespace iff;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Options {
    std::string file, output;
    std::size_t bound = 2;
    std::size_t budget = kDefaultBudget;
    bool practical = false;
    bool strict = false;
};

Document load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse_document(ss.str());
    } catch (const ParseError& e) {
        throw Error(path + ":" + e.what());
    }
}

void need(const Document& d, const std::string& name, const char* what) {
    if (name.empty()) throw UsageError(std::string("missing --") + what);
    if (!d.has(name)) throw UsageError(std::string("no form named ") + name);
}

void emit(const Options& o, const Document& out) {
    if (o.output.empty()) return;
    std::ofstream f(o.output);
    if (!f) throw UsageError("cannot write " + o.output);
    f << serialize(out);
}

IntegrationOptions integration_options(const Options& o) {
    IntegrationOptions io;
    io.bound = o.bound;
    io.budget = o.budget;
    io.free.strict = o.strict;
    io.free.budget = std::max<std::size_t>(o.budget, io.free.budget);
    return io;
}

void print_classes(std::ostream& out, const char* what, const TokenSet& s) {
    out << what << ":";
    for (const auto& x : s) out << " " << x;
    out << "\n";
}

int cmd_check(const Options& o) {
    auto d = load(o.file);
    int failures = 0;
    auto line = [&](const std::string& kind, const std::string& name, const std::string& witness) {
        if (witness.empty()) {
            std::cout << "ok   " << kind << " " << name << "\n";
        } else {
            std::cout << "FAIL " << kind << " " << name << ": " << witness << "\n";
            ++failures;
        }
    };
    for (const auto& [kind, name] : d.order) {
        std::string w;
        try {
            if (kind == "logic") {
                auto errs = validate_logic(d.logic(name));
                if (!errs.empty()) w = errs.front();
            } else if (kind == "theory-morphism") {
                auto v = theory_morphism_valid(d.theory_morphism(name), o.bound, o.budget);
                w = v.witness();
            } else if (kind == "logic-morphism") {
                auto v = logic_morphism_valid(d.logic_morphism(name), o.bound, o.budget);
                w = v.witness();
            } else if (kind == "alignment") {
                const auto& a = d.alignments.at(name);
                auto L1 = d.logic(a.left), L2 = d.logic(a.right);
                auto P1 = a.leftPortal ? d.logic(a.leftPortal->first) : L1;
                auto P2 = a.rightPortal ? d.logic(a.rightPortal->first) : L2;
                auto p1 = a.leftPortal ? d.logic_morphism(a.leftPortal->second) : identity(L1);
                auto p2 = a.rightPortal ? d.logic_morphism(a.rightPortal->second) : identity(L2);
                build_alignment(L1, L2, P1, P2, p1, p2, d.theory(a.mediating), d.theory_morphism(a.leftLink),
                                d.theory_morphism(a.rightLink), integration_options(o));
            }
        } catch (const Error& e) {
            w = e.what();
        }
        line(kind, name, w);
    }
    std::cout << (failures ? "check failed: " + std::to_string(failures) + " form(s)" : std::string("check passed"))
              << "\n";
    return failures ? 1 : 0;
}

int cmd_entails(const Options& o, const std::string& theory, const std::string& query) {
    auto d = load(o.file);
    need(d, theory, "theory");
    if (query.empty()) throw UsageError("missing --query");
    auto forms = read_sexprs(query);
    if (forms.size() != 1) throw UsageError("--query takes one expression");
    auto e = detail::expression(forms[0]);
    auto v = entails(d.theory(theory), e, o.bound, o.budget);
    std::cout << theory << " |= " << e.str() << " : " << v.str() << "\n";
    if (v.refuted()) {
        Document out;
        out.declare("language", "countermodel-language");
        out.languages["countermodel-language"] = v.counterModel->language;
        out.declare("model", "countermodel");
        out.models["countermodel"] = {"countermodel-language", *v.counterModel};
        emit(o, out);
        return 1;
    }
    return 0;
}

int cmd_free_logic(const Options& o, const std::string& theory) {
    auto d = load(o.file);
    need(d, theory, "theory");
    auto io = integration_options(o);
    auto l = free_logic(d.theory(theory), io.free);
    std::cout << "free logic over " << theory << ": " << l.model.entities.size() << " entities, "
              << l.model.tuples.size() << " tuples\n";
    Document out;
    out.add_logic("free", l);
    emit(o, out);
    return 0;
}

int cmd_sum(const Options& o, const std::string& left, const std::string& right) {
    auto d = load(o.file);
    need(d, left, "left");
    need(d, right, "right");
    auto s = logic_sum(d.logic(left), d.logic(right));
    std::cout << "sum of " << left << " and " << right << ": " << s.sum.model.entities.size() << " entities, "
              << s.sum.model.tuples.size() << " tuples, sound=" << (is_sound(s.sum) ? "yes" : "no") << "\n";
    Document out;
    out.add_logic("sum", s.sum);
    emit(o, out);
    return 0;
}

int cmd_quotient(const Options& o, const std::string& logic, const std::vector<std::string>& merges,
                 const std::vector<std::string>& drops) {
    auto d = load(o.file);
    need(d, logic, "logic");
    auto l = d.logic(logic);
    const auto& lang = l.theory.language;
    LogicDualInvariant j;
    for (const auto& m : merges) {
        auto eq = m.find('=');
        if (eq == std::string::npos) throw UsageError("--merge takes A=B");
        TokenPair p{m.substr(0, eq), m.substr(eq + 1)};
        if (lang.variables.count(p.first)) j.theoryPart.variables.insert(p);
        else if (lang.entityTypes.count(p.first)) j.theoryPart.entityTypes.insert(p);
        else if (lang.relationTypes.count(p.first)) j.theoryPart.relationTypes.insert(p);
        else throw UsageError("--merge names unknown type " + p.first);
    }
    j.modelPart.types = j.theoryPart;
    j.modelPart.entities = l.model.entities;
    for (const auto& e : drops) j.modelPart.entities.erase(e);
    for (const auto& [t, coords] : l.model.tuples)
        if (std::all_of(coords.begin(), coords.end(), [&](const auto& kv) { return j.modelPart.entities.count(kv.second); }))
            j.modelPart.tuples.insert(t);
    auto q = logic_dual_quotient(l, j);
    std::cout << "quotient of " << logic << ": " << q.quotient.model.entities.size() << " entities, "
              << q.quotient.model.tuples.size() << " tuples\n";
    print_classes(std::cout, "entity types", q.quotient.theory.language.entityTypes);
    print_classes(std::cout, "relation types", q.quotient.theory.language.relationTypes);
    Document out;
    out.add_logic("quotient", q.quotient);
    emit(o, out);
    return 0;
}

int cmd_fuse(const Options& o, const std::string& left, const std::string& right) {
    auto d = load(o.file);
    need(d, left, "left");
    need(d, right, "right");
    auto f0 = d.logic_morphism(left), f1 = d.logic_morphism(right);
    for (const auto& [name, f] : {std::pair{left, &f0}, std::pair{right, &f1}})
        if (auto v = logic_morphism_valid(*f, o.bound, o.budget); !v) {
            std::cout << "invalid morphism " << name << ": " << v.witness() << "\n";
            return 1;
        }
    auto fu = fusion(f0, f1);
    std::cout << "fusion of " << left << " and " << right << "\n";
    print_classes(std::cout, "entity types", fu.fused.theory.language.entityTypes);
    print_classes(std::cout, "relation types", fu.fused.theory.language.relationTypes);
    Document out;
    out.add_logic("fused", fu.fused);
    emit(o, out);
    return 0;
}

int cmd_restrict(const Options& o, const std::string& logic, const std::vector<std::string>& common) {
    auto d = load(o.file);
    need(d, logic, "logic");
    auto r = restrict(d.logic(logic), TokenSet(common.begin(), common.end()));
    std::cout << "restriction of " << logic << ": " << r.restricted.model.entities.size() << " entities, "
              << r.restricted.model.tuples.size() << " tuples\n";
    Document out;
    out.add_logic("restricted", r.restricted);
    emit(o, out);
    return 0;
}

int cmd_fiber(const Options& o, const std::string& morphism, const std::string& logic) {
    auto d = load(o.file);
    need(d, morphism, "morphism");
    need(d, logic, "logic");
    auto g = d.theory_morphism(morphism);
    if (auto v = theory_morphism_valid(g, o.bound, o.budget); !v) {
        std::cout << "invalid morphism " << morphism << ": " << v.witness() << "\n";
        return 1;
    }
    auto f = fiber(g, d.logic(logic));
    std::cout << "fiber of " << logic << " along " << morphism << "\n";
    for (const auto& a : f.theory.language.entityTypes) print_classes(std::cout, a.c_str(), f.model.sort_extent(a));
    Document out;
    out.add_logic("fiber", f);
    emit(o, out);
    return 0;
}

int cmd_sound_part(const Options& o, const std::string& logic) {
    auto d = load(o.file);
    need(d, logic, "logic");
    auto l = d.logic(logic);
    auto s = sound_part(l);
    std::cout << logic << " is " << (is_sound(l) ? "sound" : "not sound") << "; sound part keeps "
              << s.model.entities.size() << " entities and " << s.model.tuples.size() << " tuples\n";
    Document out;
    out.add_logic("sound", s);
    emit(o, out);
    return 0;
}

int cmd_integrate(const Options& o, std::string left, std::string right, const std::string& alignment) {
    auto d = load(o.file);
    need(d, alignment, "alignment");
    const auto& a = d.alignments.at(alignment);
    if (left.empty()) left = a.left;
    if (right.empty()) right = a.right;
    if (left != a.left || right != a.right) throw UsageError("alignment " + alignment + " links other logics");
    auto io = integration_options(o);
    auto L1 = d.logic(left), L2 = d.logic(right);
    auto T = d.theory(a.mediating);
    auto g1 = d.theory_morphism(a.leftLink), g2 = d.theory_morphism(a.rightLink);
    Logic fused;
    if (o.practical) {
        TokenSet common;
        if (a.common) {
            common = *a.common;
        } else {
            std::set_intersection(L1.model.entities.begin(), L1.model.entities.end(), L2.model.entities.begin(),
                                  L2.model.entities.end(), std::inserter(common, common.end()));
        }
        auto r = practical_integrate(L1, L2, common, T, g1, g2, io);
        for (const auto& line : r.report) std::cout << line << "\n";
        fused = r.result.fused;
    } else {
        auto P1 = a.leftPortal ? d.logic(a.leftPortal->first) : L1;
        auto P2 = a.rightPortal ? d.logic(a.rightPortal->first) : L2;
        auto p1 = a.leftPortal ? d.logic_morphism(a.leftPortal->second) : identity(L1);
        auto p2 = a.rightPortal ? d.logic_morphism(a.rightPortal->second) : identity(L2);
        auto diagram = build_alignment(L1, L2, P1, P2, p1, p2, T, g1, g2, io);
        std::cout << "alignment " << alignment << " is valid\n";
        fused = unify(diagram, io).fused;
    }
    std::cout << "integrated " << left << " and " << right << " over " << a.mediating << "\n";
    print_classes(std::cout, "entity types", fused.theory.language.entityTypes);
    print_classes(std::cout, "relation types", fused.theory.language.relationTypes);
    std::cout << "entities: " << fused.model.entities.size() << ", tuples: " << fused.model.tuples.size() << "\n";
    Document out;
    out.add_logic("fused", fused);
    emit(o, out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ontology integration over logics, theories and models"};
    app.require_subcommand(1);
    Options o;
    std::string theory, query, left, right, logic, morphism, alignment;
    std::vector<std::string> merges, drops, common;

    auto common_flags = [&](CLI::App* sub) {
        sub->add_option("file", o.file, "input document")->required();
        sub->add_option("-o,--output", o.output, "write resulting forms to this file");
        sub->add_option("--bound", o.bound, "maximum entities for model enumeration")->capture_default_str();
        sub->add_option("--budget", o.budget, "maximum candidates for enumeration")->capture_default_str();
    };
    auto* check = app.add_subcommand("check", "validate every form");
    common_flags(check);
    auto* ent = app.add_subcommand("entails", "bounded entailment");
    common_flags(ent);
    ent->add_option("--theory", theory, "theory name")->required();
    ent->add_option("--query", query, "sequent to decide")->required();
    auto* free = app.add_subcommand("free-logic", "free logic over a theory");
    common_flags(free);
    free->add_option("--theory", theory, "theory name")->required();
    free->add_flag("--strict-free-logic", o.strict, "reject sorts without a unary relation type");
    auto* sum = app.add_subcommand("sum", "sum of two logics");
    common_flags(sum);
    sum->add_option("--left", left, "first logic")->required();
    sum->add_option("--right", right, "second logic")->required();
    auto* quot = app.add_subcommand("quotient", "dual quotient of a logic");
    common_flags(quot);
    quot->add_option("--logic", logic, "logic name")->required();
    quot->add_option("--merge", merges, "identify two types, A=B");
    quot->add_option("--drop", drops, "drop an entity (and every tuple through it)");
    auto* fuse = app.add_subcommand("fuse", "fusion of a span of logic morphisms");
    common_flags(fuse);
    fuse->add_option("--left", left, "first logic morphism")->required();
    fuse->add_option("--right", right, "second logic morphism")->required();
    auto* res = app.add_subcommand("restrict", "restriction to a sub-universe");
    common_flags(res);
    res->add_option("--logic", logic, "logic name")->required();
    res->add_option("--common", common, "retained entities")->delimiter(',');
    auto* fib = app.add_subcommand("fiber", "fiber of a logic along a theory morphism");
    common_flags(fib);
    fib->add_option("--morphism", morphism, "theory morphism name")->required();
    fib->add_option("--logic", logic, "logic over the morphism target")->required();
    auto* sp = app.add_subcommand("sound-part", "sound part of a logic");
    common_flags(sp);
    sp->add_option("--logic", logic, "logic name")->required();
    auto* integ = app.add_subcommand("integrate", "integrate two logics along an alignment");
    common_flags(integ);
    integ->add_option("--left", left, "first logic, checked against the alignment");
    integ->add_option("--right", right, "second logic, checked against the alignment");
    integ->add_option("--alignment", alignment, "alignment name")->required();
    integ->add_flag("--practical", o.practical, "integrate over the shared sub-universe");
    integ->add_flag("--strict-free-logic", o.strict, "reject sorts without a unary relation type");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (check->parsed()) return cmd_check(o);
        if (ent->parsed()) return cmd_entails(o, theory, query);
        if (free->parsed()) return cmd_free_logic(o, theory);
        if (sum->parsed()) return cmd_sum(o, left, right);
        if (quot->parsed()) return cmd_quotient(o, logic, merges, drops);
        if (fuse->parsed()) return cmd_fuse(o, left, right);
        if (res->parsed()) return cmd_restrict(o, logic, common);
        if (fib->parsed()) return cmd_fiber(o, morphism, logic);
        if (sp->parsed()) return cmd_sound_part(o, logic);
        if (integ->parsed()) return cmd_integrate(o, left, right, alignment);
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
