#pragma once

// Opaque tokens, canonical encodings of composite tokens, and the error types
// shared by every layer.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace iff {

using Token = std::string;
using TokenSet = std::set<Token>;
using TokenMap = std::map<Token, Token>;
using TokenPair = std::pair<Token, Token>;
using PairSet = std::set<TokenPair>;

/// Partial function from variables to entities.  Its domain is its arity.
using Assignment = std::map<Token, Token>;

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A map that should be total on its stated domain is not.
class DomainError : public Error {
public:
    using Error::Error;
};

class RespectViolation : public Error {
public:
    RespectViolation(Token instance, Token a, Token b)
        : Error("invariant does not respect incidence: instance " + instance + " separates " + a +
                " and " + b),
          instance(std::move(instance)), typeA(std::move(a)), typeB(std::move(b)) {}
    Token instance, typeA, typeB;
};

class IncompatibleQuotient : public Error {
public:
    IncompatibleQuotient(Token a, Token b, const std::string& why)
        : Error("incompatible quotient: " + a + " ~ " + b + " (" + why + ")"), left(std::move(a)),
          right(std::move(b)) {}
    Token left, right;
};

class LaxViolation : public Error {
public:
    using Error::Error;
};

class NameSetMismatch : public Error {
public:
    using Error::Error;
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
};

class CaptureError : public Error {
public:
    using Error::Error;
};

class SoundnessViolation : public Error {
public:
    using Error::Error;
};

class AgreementFailure : public Error {
public:
    AgreementFailure(const std::string& what, Token instance, Token type)
        : Error("fiber logics disagree: " + what), instance(std::move(instance)), type(std::move(type)) {}
    Token instance, type;
};

class SubsetViolation : public Error {
public:
    using Error::Error;
};

class TheoryMismatch : public Error {
public:
    using Error::Error;
};

namespace tok {

inline std::string join(const auto& range, char sep = ',') {
    std::string out;
    bool first = true;
    for (const auto& t : range) {
        if (!first) out += sep;
        out += t;
        first = false;
    }
    return out;
}

inline Token set(const TokenSet& s) { return "{" + join(s) + "}"; }
inline Token pair(const Token& a, const Token& b) { return "<" + a + "," + b + ">"; }
inline Token cls(const TokenSet& members) { return "[" + join(members) + "]"; }
inline Token left(const Token& t) { return "L:" + t; }
inline Token right(const Token& t) { return "R:" + t; }

inline Token assignment(const Assignment& a) {
    std::vector<std::string> parts;
    for (const auto& [k, v] : a) parts.push_back(k + "=" + v);
    return "{" + join(parts) + "}";
}

/// Splits a brace/bracket/angle-delimited composite token at its top-level commas.
inline std::vector<std::string> split_top(const std::string& inner) {
    std::vector<std::string> parts;
    int depth = 0;
    std::string cur;
    for (char c : inner) {
        if (c == '{' || c == '<' || c == '[') ++depth;
        if (c == '}' || c == '>' || c == ']') --depth;
        if (c == ',' && depth == 0) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty() || !parts.empty()) parts.push_back(cur);
    return parts;
}

/// Decodes a token produced by `set`.
inline TokenSet decode_set(const Token& t) {
    if (t.size() < 2 || t.front() != '{' || t.back() != '}') throw Error("not a set token: " + t);
    auto parts = split_top(t.substr(1, t.size() - 2));
    return TokenSet(parts.begin(), parts.end());
}

}  // namespace tok

/// Disjoint-set forest over tokens.  A merged class is named by its sorted member
/// list; a singleton keeps its element's name.
class Partition {
public:
    explicit Partition(const TokenSet& elements) {
        for (const auto& e : elements) parent_[e] = e;
    }

    void unite(const Token& a, const Token& b) {
        auto ra = find(a), rb = find(b);
        if (ra != rb) parent_[std::max(ra, rb)] = std::min(ra, rb);
    }

    Token find(const Token& a) {
        auto it = parent_.find(a);
        if (it == parent_.end()) throw DomainError("partition: unknown element " + a);
        if (it->second == a) return a;
        auto root = find(it->second);
        parent_[a] = root;
        return root;
    }

    std::map<Token, TokenSet> classes() {
        std::map<Token, TokenSet> out;
        for (auto& [e, _] : parent_) out[find(e)].insert(e);
        return out;
    }

    /// element -> canonical class name
    TokenMap naming() {
        TokenMap names;
        for (auto& [_, members] : classes())
            for (const auto& m : members) names[m] = members.size() == 1 ? m : tok::cls(members);
        return names;
    }

private:
    std::map<Token, Token> parent_;
};

template <class K, class V>
const V& at(const std::map<K, V>& m, const K& k, const char* what) {
    auto it = m.find(k);
    if (it == m.end()) throw DomainError(std::string(what) + " not defined on " + k);
    return it->second;
}

inline TokenSet image(const TokenMap& f, const TokenSet& s, const char* what = "map") {
    TokenSet out;
    for (const auto& x : s) out.insert(at(f, x, what));
    return out;
}

inline TokenSet preimage(const TokenMap& f, const TokenSet& s) {
    TokenSet out;
    for (const auto& [k, v] : f)
        if (s.count(v)) out.insert(k);
    return out;
}

inline Assignment restrict_to(const Assignment& a, const TokenSet& dom) {
    Assignment out;
    for (const auto& x : dom) {
        auto it = a.find(x);
        if (it != a.end()) out.emplace(x, it->second);
    }
    return out;
}

inline std::vector<TokenSet> subsets(const TokenSet& s) {
    std::vector<Token> items(s.begin(), s.end());
    std::vector<TokenSet> out;
    const std::size_t n = items.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
        TokenSet sub;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (std::size_t{1} << i)) sub.insert(items[i]);
        out.push_back(std::move(sub));
    }
    return out;
}

/// Calls fn for every total function dom -> codomain (as a TokenMap).
inline void for_each_function(const TokenSet& dom, const TokenSet& codomain,
                              const std::function<void(const TokenMap&)>& fn) {
    std::vector<Token> d(dom.begin(), dom.end()), c(codomain.begin(), codomain.end());
    if (!d.empty() && c.empty()) return;
    std::vector<std::size_t> idx(d.size(), 0);
    TokenMap m;
    while (true) {
        for (std::size_t i = 0; i < d.size(); ++i) m[d[i]] = c[idx[i]];
        fn(m);
        std::size_t i = 0;
        while (i < d.size() && ++idx[i] == c.size()) idx[i++] = 0;
        if (i == d.size()) break;
    }
}

inline bool is_subset(const TokenSet& a, const TokenSet& b) {
    return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace iff
