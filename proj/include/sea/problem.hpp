#pragma once

// Problem-level formulas as parsed, before normalization.

#include <memory>
#include <set>
#include <string>
#include <vector>

#include "sea/arith.hpp"
#include "sea/ast.hpp"

namespace sea {

// Errors raised while reading a problem carry the 1-based source position
// when one is known (line 0 means none).
struct ParseError : Error {
    int line = 0, col = 0;
    ParseError(const std::string& msg, int l = 0, int c = 0)
        : Error(l ? std::to_string(l) + ":" + std::to_string(c) + ": " + msg : msg), line(l), col(c) {}
};
struct SyntaxError : ParseError {
    using ParseError::ParseError;
};
struct UnknownIdentifier : ParseError {
    using ParseError::ParseError;
};
struct UnsupportedConstruct : ParseError {
    using ParseError::ParseError;
};

struct FNode;
using Formula = std::shared_ptr<const FNode>;

struct FNode {
    enum Kind { True, False, WordEq, InRe, Arith, Not, And, Or } kind = True;
    Term lhs, rhs;  // WordEq: both sides; InRe: lhs is the term
    Regex re;
    ArithAtom atom;
    std::vector<Formula> kids;
};

namespace fm {
inline Formula mk(FNode n) { return std::make_shared<const FNode>(std::move(n)); }
inline Formula top() { return mk({FNode::True}); }
inline Formula bottom() { return mk({FNode::False}); }
inline Formula eq(Term l, Term r) { return mk({FNode::WordEq, std::move(l), std::move(r)}); }
inline Formula in(Term t, Regex r) { return mk({FNode::InRe, std::move(t), {}, std::move(r)}); }
inline Formula arith(ArithAtom a) { return mk({FNode::Arith, {}, {}, nullptr, std::move(a)}); }
inline Formula neg(Formula f) { return mk({FNode::Not, {}, {}, nullptr, {}, {std::move(f)}}); }
inline Formula conj(std::vector<Formula> fs) { return mk({FNode::And, {}, {}, nullptr, {}, std::move(fs)}); }
inline Formula disj(std::vector<Formula> fs) { return mk({FNode::Or, {}, {}, nullptr, {}, std::move(fs)}); }
}  // namespace fm

struct Problem {
    std::vector<std::string> str_vars, int_vars;
    std::string extra_chars;
    std::vector<Formula> assertions;

    Formula formula() const { return assertions.size() == 1 ? assertions[0] : fm::conj(assertions); }
};

inline bool same(const Formula& x, const Formula& y) {
    if (x->kind != y->kind || x->lhs != y->lhs || x->rhs != y->rhs || x->kids.size() != y->kids.size()) return false;
    if (bool(x->re) != bool(y->re) || (x->re && !same(x->re, y->re))) return false;
    if (x->kind == FNode::Arith && !same(x->atom, y->atom)) return false;
    for (std::size_t i = 0; i < x->kids.size(); ++i)
        if (!same(x->kids[i], y->kids[i])) return false;
    return true;
}

inline bool same(const Problem& x, const Problem& y) {
    if (x.str_vars != y.str_vars || x.int_vars != y.int_vars || x.extra_chars != y.extra_chars) return false;
    if (x.assertions.size() != y.assertions.size()) return false;
    for (std::size_t i = 0; i < x.assertions.size(); ++i)
        if (!same(x.assertions[i], y.assertions[i])) return false;
    return true;
}

inline void formula_chars(const Formula& f, std::set<char>& out) {
    for (const Term* t : {&f->lhs, &f->rhs})
        for (const Atom& a : *t)
            if (a.kind == Atom::Const) out.insert(a.ch);
    if (f->re) regex_chars(f->re, out);
    for (auto& k : f->kids) formula_chars(k, out);
}

// Characters occurring anywhere in the problem plus declared extras, sorted.
inline std::string alphabet(const Problem& p) {
    std::set<char> cs(p.extra_chars.begin(), p.extra_chars.end());
    for (auto& a : p.assertions) formula_chars(a, cs);
    return std::string(cs.begin(), cs.end());
}

enum class Verdict { Sat, Unsat, Unknown };

struct Answer {
    Verdict verdict = Verdict::Unknown;
    Model model;  // Sat only
};

struct Conjunct {
    std::vector<Equation> eqs;
    std::vector<std::pair<Term, Regex>> mems;
    std::vector<ArithAtom> arith;
    bool trivially_false = false;
};

inline Formula to_formula(const Conjunct& c) {
    std::vector<Formula> fs;
    if (c.trivially_false) fs.push_back(fm::bottom());
    for (auto& e : c.eqs) fs.push_back(fm::eq(e.lhs, e.rhs));
    for (auto& [t, r] : c.mems) fs.push_back(fm::in(t, r));
    for (auto& a : c.arith) fs.push_back(fm::arith(a));
    return fm::conj(fs);
}

// Disjunctive normal form; `not` is only legal directly over arithmetic atoms.
inline std::vector<Conjunct> to_dnf(const Formula& f, std::size_t cap = 4096) {
    switch (f->kind) {
        case FNode::True: return {Conjunct{}};
        case FNode::False: return {};
        case FNode::WordEq: return {Conjunct{{{f->lhs, f->rhs}}, {}, {}}};
        case FNode::InRe: return {Conjunct{{}, {{f->lhs, f->re}}, {}}};
        case FNode::Arith: return {Conjunct{{}, {}, {f->atom}}};
        case FNode::Not: {
            const Formula& g = f->kids[0];
            if (g->kind == FNode::True) return {};
            if (g->kind == FNode::False) return {Conjunct{}};
            if (g->kind != FNode::Arith) throw UnsupportedConstruct("negation is only supported over arithmetic atoms");
            std::vector<Conjunct> out;
            for (auto& a : negate(g->atom)) out.push_back(Conjunct{{}, {}, {a}});
            return out;
        }
        case FNode::Or: {
            std::vector<Conjunct> out;
            for (auto& k : f->kids)
                for (auto& c : to_dnf(k, cap)) out.push_back(std::move(c));
            if (out.size() > cap) throw UnsupportedConstruct("disjunctive normal form too large");
            return out;
        }
        case FNode::And: {
            std::vector<Conjunct> acc{Conjunct{}};
            for (auto& k : f->kids) {
                auto rhs = to_dnf(k, cap);
                std::vector<Conjunct> next;
                for (auto& a : acc)
                    for (auto& b : rhs) {
                        Conjunct c = a;
                        c.eqs.insert(c.eqs.end(), b.eqs.begin(), b.eqs.end());
                        c.mems.insert(c.mems.end(), b.mems.begin(), b.mems.end());
                        c.arith.insert(c.arith.end(), b.arith.begin(), b.arith.end());
                        next.push_back(std::move(c));
                    }
                if (next.size() > cap) throw UnsupportedConstruct("disjunctive normal form too large");
                acc = std::move(next);
            }
            return acc;
        }
    }
    return {};
}

}  // namespace sea
