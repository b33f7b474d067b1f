#pragma once

// Minimal S-expression reader and writer.  Symbols are runs of characters
// other than whitespace, parentheses and ';' (which starts a line comment).

#include <cctype>
#include <string>
#include <vector>

#include "iff/tokens.hpp"

namespace iff {

class ParseError : public Error {
public:
    ParseError(const std::string& what, int line, int column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + what), line(line), column(column) {}
    int line, column;
};

struct SExpr {
    bool atom = false;
    std::string symbol;
    std::vector<SExpr> items;
    int line = 0, column = 0;

    static SExpr sym(std::string s) { return {true, std::move(s), {}, 0, 0}; }
    static SExpr list(std::vector<SExpr> items = {}) { return {false, {}, std::move(items), 0, 0}; }

    bool is_list() const { return !atom; }
    /// Head symbol of a nonempty list whose first item is a symbol, else empty.
    std::string head() const { return !atom && !items.empty() && items[0].atom ? items[0].symbol : std::string{}; }

    SExpr& add(SExpr e) {
        items.push_back(std::move(e));
        return *this;
    }
    SExpr& add(std::string s) { return add(sym(std::move(s))); }
};

inline std::vector<SExpr> read_sexprs(const std::string& text) {
    std::vector<SExpr> stack{SExpr::list()};
    std::vector<std::pair<int, int>> opened;
    int line = 1, col = 1;
    std::size_t i = 0;
    auto advance = [&](char c) {
        if (c == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
        ++i;
    };
    while (i < text.size()) {
        char c = text[i];
        if (c == ';') {
            while (i < text.size() && text[i] != '\n') advance(text[i]);
        } else if (std::isspace(static_cast<unsigned char>(c))) {
            advance(c);
        } else if (c == '(') {
            auto l = SExpr::list();
            l.line = line;
            l.column = col;
            stack.push_back(std::move(l));
            opened.emplace_back(line, col);
            advance(c);
        } else if (c == ')') {
            if (stack.size() == 1) throw ParseError("unexpected ')'", line, col);
            auto done = std::move(stack.back());
            stack.pop_back();
            opened.pop_back();
            stack.back().items.push_back(std::move(done));
            advance(c);
        } else {
            SExpr s = SExpr::sym({});
            s.line = line;
            s.column = col;
            while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])) && text[i] != '(' &&
                   text[i] != ')' && text[i] != ';') {
                s.symbol += text[i];
                advance(text[i]);
            }
            stack.back().items.push_back(std::move(s));
        }
    }
    if (stack.size() > 1) throw ParseError("unclosed '('", opened.back().first, opened.back().second);
    return std::move(stack[0].items);
}

/// Single-line rendering.
inline std::string write_sexpr(const SExpr& e) {
    if (e.atom) return e.symbol;
    std::string s = "(";
    for (std::size_t i = 0; i < e.items.size(); ++i) {
        if (i) s += ' ';
        s += write_sexpr(e.items[i]);
    }
    return s + ")";
}

/// Top-level form rendering: the head and name on the first line, each further
/// item on its own line indented by two spaces.  A clause longer than `width`
/// puts each of its members on a line of its own, indented by four.
inline std::string write_form(const SExpr& e, std::size_t width = 100) {
    if (e.atom || e.items.size() <= 2) return write_sexpr(e);
    std::string s = "(" + write_sexpr(e.items[0]) + " " + write_sexpr(e.items[1]);
    for (std::size_t i = 2; i < e.items.size(); ++i) {
        const auto& c = e.items[i];
        auto flat = write_sexpr(c);
        if (flat.size() + 2 <= width || c.atom || c.items.size() < 2) {
            s += "\n  " + flat;
            continue;
        }
        s += "\n  (" + write_sexpr(c.items[0]);
        for (std::size_t j = 1; j < c.items.size(); ++j) s += "\n    " + write_sexpr(c.items[j]);
        s += ")";
    }
    return s + ")";
}

}  // namespace iff
