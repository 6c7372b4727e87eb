#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sea {

using i64 = std::int64_t;

// Base for every error the library raises on purpose.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct InternalError : Error {
    using Error::Error;
};

// ---------------------------------------------------------------- terms

struct Atom {
    enum Kind { Const, Var, Str } kind = Const;
    char ch = 0;
    std::string var;  // Var: the string variable; Str: the word variable
    std::string len;  // Str only: the length variable

    static Atom chr(char c) { return Atom{Const, c, {}, {}}; }
    static Atom bare(std::string s) { return Atom{Var, 0, std::move(s), {}}; }
    static Atom str(std::string u, std::string n) { return Atom{Str, 0, std::move(u), std::move(n)}; }

    bool is_var() const { return kind != Const; }
    friend bool operator==(const Atom&, const Atom&) = default;
    friend auto operator<=>(const Atom&, const Atom&) = default;
};

// Flat concatenation; the empty vector is epsilon.
using Term = std::vector<Atom>;

inline Term word(const std::string& w) {
    Term t;
    for (char c : w) t.push_back(Atom::chr(c));
    return t;
}

inline Term cat(Term a, const Term& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

inline bool is_ground(const Term& t) {
    return std::none_of(t.begin(), t.end(), [](const Atom& a) { return a.is_var(); });
}

inline std::string ground_word(const Term& t) {
    std::string w;
    for (const Atom& a : t) {
        if (a.is_var()) throw InternalError("ground_word on a term with variables");
        w += a.ch;
    }
    return w;
}

struct Equation {
    Term lhs, rhs;
    friend bool operator==(const Equation&, const Equation&) = default;
};

// ---------------------------------------------------------------- regex

struct RegexNode;
using Regex = std::shared_ptr<const RegexNode>;

struct RegexNode {
    enum Kind { Empty, Eps, Lit, Word, Cat, Union, Inter, Comp, Star } kind = Empty;
    char ch = 0;
    std::string word;
    Regex a, b;
};

namespace re {
inline Regex mk(RegexNode n) { return std::make_shared<const RegexNode>(std::move(n)); }
inline Regex empty() { return mk({RegexNode::Empty}); }
inline Regex eps() { return mk({RegexNode::Eps}); }
inline Regex lit(char c) { return mk({RegexNode::Lit, c}); }
inline Regex word(std::string w) { return mk({RegexNode::Word, 0, std::move(w)}); }
inline Regex cat(Regex a, Regex b) { return mk({RegexNode::Cat, 0, {}, std::move(a), std::move(b)}); }
inline Regex alt(Regex a, Regex b) { return mk({RegexNode::Union, 0, {}, std::move(a), std::move(b)}); }
inline Regex inter(Regex a, Regex b) { return mk({RegexNode::Inter, 0, {}, std::move(a), std::move(b)}); }
inline Regex comp(Regex a) { return mk({RegexNode::Comp, 0, {}, std::move(a), nullptr}); }
inline Regex star(Regex a) { return mk({RegexNode::Star, 0, {}, std::move(a), nullptr}); }
}  // namespace re

inline bool same(const Regex& x, const Regex& y) {
    if (x == y) return true;
    if (!x || !y) return false;
    if (x->kind != y->kind || x->ch != y->ch || x->word != y->word) return false;
    return same(x->a, y->a) && same(x->b, y->b);
}

inline void regex_chars(const Regex& r, std::set<char>& out) {
    if (!r) return;
    if (r->kind == RegexNode::Lit) out.insert(r->ch);
    for (char c : r->word) out.insert(c);
    regex_chars(r->a, out);
    regex_chars(r->b, out);
}

inline Regex map_chars(const Regex& r, const std::map<char, char>& m) {
    if (!r) return r;
    RegexNode n = *r;
    auto f = [&](char c) {
        auto it = m.find(c);
        return it == m.end() ? c : it->second;
    };
    n.ch = f(n.ch);
    for (char& c : n.word) c = f(c);
    n.a = map_chars(r->a, m);
    n.b = map_chars(r->b, m);
    return re::mk(std::move(n));
}

inline std::string to_string(const Regex& r) {
    switch (r->kind) {
        case RegexNode::Empty: return "none";
        case RegexNode::Eps: return "eps";
        case RegexNode::Lit: return std::string(1, r->ch);
        case RegexNode::Word: return r->word.empty() ? "eps" : r->word;
        case RegexNode::Cat: return "(" + to_string(r->a) + to_string(r->b) + ")";
        case RegexNode::Union: return "(" + to_string(r->a) + "|" + to_string(r->b) + ")";
        case RegexNode::Inter: return "(" + to_string(r->a) + "&" + to_string(r->b) + ")";
        case RegexNode::Comp: return "~(" + to_string(r->a) + ")";
        case RegexNode::Star: return "(" + to_string(r->a) + ")*";
    }
    return "?";
}

// ---------------------------------------------------------------- arithmetic

struct ExprNode;
using Expr = std::shared_ptr<const ExprNode>;

struct ExprNode {
    enum Kind { Const, Var, Len, Scale, Neg, Mod, Add, Max, Min } kind = Const;
    i64 k = 0;         // Const value, Scale factor
    std::string name;  // Var: int variable, Len: string variable
    Expr a, b;
};

namespace ex {
inline Expr mk(ExprNode n) { return std::make_shared<const ExprNode>(std::move(n)); }
inline Expr k(i64 v) { return mk({ExprNode::Const, v}); }
inline Expr v(std::string n) { return mk({ExprNode::Var, 0, std::move(n)}); }
inline Expr len(std::string s) { return mk({ExprNode::Len, 0, std::move(s)}); }
inline Expr scale(i64 f, Expr a) { return mk({ExprNode::Scale, f, {}, std::move(a)}); }
inline Expr neg(Expr a) { return mk({ExprNode::Neg, 0, {}, std::move(a)}); }
inline Expr mod(Expr a, Expr p) { return mk({ExprNode::Mod, 0, {}, std::move(a), std::move(p)}); }
inline Expr add(Expr a, Expr b) { return mk({ExprNode::Add, 0, {}, std::move(a), std::move(b)}); }
inline Expr sub(Expr a, Expr b) { return add(std::move(a), neg(std::move(b))); }
inline Expr max(Expr a, Expr b) { return mk({ExprNode::Max, 0, {}, std::move(a), std::move(b)}); }
inline Expr min(Expr a, Expr b) { return mk({ExprNode::Min, 0, {}, std::move(a), std::move(b)}); }
}  // namespace ex

inline bool same(const Expr& x, const Expr& y) {
    if (x == y) return true;
    if (!x || !y) return false;
    if (x->kind != y->kind || x->k != y->k || x->name != y->name) return false;
    return same(x->a, y->a) && same(x->b, y->b);
}

struct ArithAtom {
    enum Kind { Eq, Leq } kind = Eq;
    Expr lhs, rhs;
};

inline ArithAtom mk_eq(Expr a, Expr b) { return {ArithAtom::Eq, std::move(a), std::move(b)}; }
inline ArithAtom mk_le(Expr a, Expr b) { return {ArithAtom::Leq, std::move(a), std::move(b)}; }
// Strict order over the integers: a < b is a+1 <= b.
inline ArithAtom mk_lt(Expr a, Expr b) { return mk_le(ex::add(std::move(a), ex::k(1)), std::move(b)); }
inline ArithAtom mk_false() { return mk_le(ex::k(1), ex::k(0)); }

inline bool same(const ArithAtom& x, const ArithAtom& y) {
    return x.kind == y.kind && same(x.lhs, y.lhs) && same(x.rhs, y.rhs);
}

inline std::string to_string(const Expr& e) {
    switch (e->kind) {
        case ExprNode::Const: return std::to_string(e->k);
        case ExprNode::Var: return e->name;
        case ExprNode::Len: return "|" + e->name + "|";
        case ExprNode::Scale: return std::to_string(e->k) + "*" + to_string(e->a);
        case ExprNode::Neg: return "-(" + to_string(e->a) + ")";
        case ExprNode::Mod: return "(" + to_string(e->a) + " % " + to_string(e->b) + ")";
        case ExprNode::Add:
            if (e->b->kind == ExprNode::Neg) return "(" + to_string(e->a) + "-" + to_string(e->b->a) + ")";
            return "(" + to_string(e->a) + "+" + to_string(e->b) + ")";
        case ExprNode::Max: return "max(" + to_string(e->a) + "," + to_string(e->b) + ")";
        case ExprNode::Min: return "min(" + to_string(e->a) + "," + to_string(e->b) + ")";
    }
    return "?";
}

inline std::string to_string(const ArithAtom& a) {
    return to_string(a.lhs) + (a.kind == ArithAtom::Eq ? "=" : "<=") + to_string(a.rhs);
}

template <class F>
void visit_expr(const Expr& e, F&& f) {
    if (!e) return;
    f(*e);
    visit_expr(e->a, f);
    visit_expr(e->b, f);
}

inline void int_vars(const Expr& e, std::set<std::string>& out) {
    visit_expr(e, [&](const ExprNode& n) {
        if (n.kind == ExprNode::Var) out.insert(n.name);
    });
}

inline std::set<std::string> int_vars(const std::vector<ArithAtom>& atoms) {
    std::set<std::string> out;
    for (auto& a : atoms) {
        int_vars(a.lhs, out);
        int_vars(a.rhs, out);
    }
    return out;
}

// Replace Var nodes (and, if given, Len nodes) by expressions.
inline Expr subst_expr(const Expr& e, const std::map<std::string, Expr>& vars,
                       const std::map<std::string, Expr>& lens = {}) {
    if (!e) return e;
    if (e->kind == ExprNode::Var) {
        auto it = vars.find(e->name);
        return it == vars.end() ? e : it->second;
    }
    if (e->kind == ExprNode::Len) {
        auto it = lens.find(e->name);
        return it == lens.end() ? e : it->second;
    }
    if (!e->a) return e;
    ExprNode n = *e;
    n.a = subst_expr(e->a, vars, lens);
    n.b = subst_expr(e->b, vars, lens);
    return ex::mk(std::move(n));
}

inline ArithAtom subst_atom(const ArithAtom& a, const std::map<std::string, Expr>& vars,
                            const std::map<std::string, Expr>& lens = {}) {
    return {a.kind, subst_expr(a.lhs, vars, lens), subst_expr(a.rhs, vars, lens)};
}

inline std::map<std::string, Expr> renaming(const std::map<std::string, std::string>& m) {
    std::map<std::string, Expr> out;
    for (auto& [from, to] : m) out[from] = ex::v(to);
    return out;
}

// ---------------------------------------------------------------- subterm constraints

struct SubtermConstraint {
    enum Kind {
        CharPrefix,  // a = ch.b
        Split,       // a = b.c
        EpsBind,     // a = eps
        Alias        // a = b
    } kind = Alias;
    std::string a, b, c;
    char ch = 0;

    static SubtermConstraint prefix(std::string outer, char c, std::string tail) {
        return {CharPrefix, std::move(outer), std::move(tail), {}, c};
    }
    static SubtermConstraint split(std::string outer, std::string p, std::string q) {
        return {Split, std::move(outer), std::move(p), std::move(q)};
    }
    static SubtermConstraint eps(std::string s) { return {EpsBind, std::move(s)}; }
    static SubtermConstraint alias(std::string s, std::string t) { return {Alias, std::move(s), std::move(t)}; }

    friend bool operator==(const SubtermConstraint&, const SubtermConstraint&) = default;
};

inline std::string to_string(const SubtermConstraint& c) {
    switch (c.kind) {
        case SubtermConstraint::CharPrefix: return c.a + "=" + std::string(1, c.ch) + "." + c.b;
        case SubtermConstraint::Split: return c.a + "=" + c.b + "." + c.c;
        case SubtermConstraint::EpsBind: return c.a + "=eps";
        case SubtermConstraint::Alias: return c.a + "=" + c.b;
    }
    return "?";
}

// ---------------------------------------------------------------- normalized formula

struct Membership {
    std::string var;
    Regex re;
};

struct NormalizedFormula {
    std::vector<Equation> es;
    std::vector<Membership> ups;
    std::vector<ArithAtom> I;
    std::vector<SubtermConstraint> lam;

    // Length variable of every string variable that ever got a STR binding.
    // The binding |s| = len_of[s] stays part of the formula's meaning even
    // after the STR instance has been consumed from Es.
    std::map<std::string, std::string> len_of;
    std::vector<std::string> orig_vars;  // problem-level string variables, in order
    std::set<std::string> reserved;      // names fresh() must avoid
    int next_str = 0, next_int = 0;
    std::string sigma;  // sorted alphabet

    std::string fresh_str() { return fresh("u", next_str); }
    std::string fresh_int() { return fresh("n", next_int); }

private:
    std::string fresh(const std::string& base, int& counter) {
        for (;;) {
            std::string name = counter == 0 ? base : base + std::to_string(counter);
            ++counter;
            if (!reserved.count(name)) return name;
        }
    }
};

inline std::size_t equation_size(const Equation& e) { return e.lhs.size() + e.rhs.size(); }

inline Expr atom_length(const Atom& a) {
    switch (a.kind) {
        case Atom::Const: return ex::k(1);
        case Atom::Var: return ex::len(a.var);
        case Atom::Str: return ex::v(a.len);
    }
    return ex::k(0);
}

// |t1.t2| = |t1| + |t2|, built as a left spine so that appending one atom
// wraps the previous expression in a single Add.
inline Expr length_expr(const Term& t) {
    if (t.empty()) return ex::k(0);
    Expr e = atom_length(t[0]);
    for (std::size_t i = 1; i < t.size(); ++i) e = ex::add(e, atom_length(t[i]));
    return e;
}

inline Term substitute(const Term& t, const Atom& pattern, const Term& repl) {
    Term out;
    for (const Atom& a : t) {
        if (a == pattern)
            out.insert(out.end(), repl.begin(), repl.end());
        else
            out.push_back(a);
    }
    return out;
}

inline Equation substitute(const Equation& e, const Atom& pattern, const Term& repl) {
    return {substitute(e.lhs, pattern, repl), substitute(e.rhs, pattern, repl)};
}

inline void rename_in_lambda(std::vector<SubtermConstraint>& lam, const std::string& from, const std::string& to) {
    for (auto& c : lam) {
        if (c.a == from) c.a = to;
        if (c.b == from) c.b = to;
        if (c.c == from) c.c = to;
    }
}

// Substitution over Es only; Lambda renaming is separate and opt-in.
inline NormalizedFormula substitute(NormalizedFormula f, const Atom& pattern, const Term& repl,
                                    const std::pair<std::string, std::string>* lambda_rename = nullptr) {
    for (auto& e : f.es) e = substitute(e, pattern, repl);
    if (lambda_rename) rename_in_lambda(f.lam, lambda_rename->first, lambda_rename->second);
    return f;
}

inline void term_vars(const Term& t, std::set<std::string>& out) {
    for (const Atom& a : t)
        if (a.is_var()) out.insert(a.var);
}

inline std::set<std::string> free_string_vars(const NormalizedFormula& f) {
    std::set<std::string> out;
    for (auto& e : f.es) {
        term_vars(e.lhs, out);
        term_vars(e.rhs, out);
    }
    for (auto& m : f.ups) out.insert(m.var);
    for (auto& c : f.lam) {
        for (const std::string* s : {&c.a, &c.b, &c.c})
            if (!s->empty()) out.insert(*s);
    }
    return out;
}

inline std::string to_string(const Atom& a) {
    switch (a.kind) {
        case Atom::Const: return std::string(1, a.ch);
        case Atom::Var: return a.var;
        case Atom::Str: return "STR(" + a.var + "," + a.len + ")";
    }
    return "?";
}

inline std::string to_string(const Term& t) {
    if (t.empty()) return "eps";
    std::string s;
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (i) s += ".";
        s += to_string(t[i]);
    }
    return s;
}

inline std::string to_string(const Equation& e) { return to_string(e.lhs) + " = " + to_string(e.rhs); }

inline std::string to_string(const NormalizedFormula& f) {
    std::vector<std::string> parts;
    for (auto& e : f.es) parts.push_back(to_string(e));
    for (auto& m : f.ups) parts.push_back(m.var + " in " + to_string(m.re));
    for (auto& a : f.I) parts.push_back(to_string(a));
    for (auto& c : f.lam) parts.push_back(to_string(c));
    if (parts.empty()) return "true";
    std::string s;
    for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? " & " : "") + parts[i];
    return s;
}

// ---------------------------------------------------------------- models

struct Model {
    std::map<std::string, std::string> words;
    std::map<std::string, i64> ints;
    friend bool operator==(const Model&, const Model&) = default;
};

}  // namespace sea
