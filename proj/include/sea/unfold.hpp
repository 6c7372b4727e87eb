#pragma once

// Pairing of string variables with STR instances, and the head-directed
// unfolding rules on the first equation.

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "sea/ast.hpp"
#include "sea/oracle.hpp"
#include "sea/problem.hpp"

namespace sea {

namespace detail {

inline void collect_names(const Formula& f, std::set<std::string>& out) {
    std::set<std::string> ints;
    detail::formula_vars(f, out, ints);
    out.insert(ints.begin(), ints.end());
}

inline Expr lens_to_vars(const Expr& e, const std::map<std::string, std::string>& len_of) {
    std::map<std::string, Expr> lens;
    for (auto& [s, n] : len_of) lens[s] = ex::v(n);
    return subst_expr(e, {}, lens);
}

}  // namespace detail

// Every string variable of the conjunct gets its own STR(u,n) with s = u in
// Lambda; |s| becomes n. Memberships over ground terms are decided here,
// memberships over compound terms get a fresh '#' variable.
inline NormalizedFormula init_1sea(const Problem& p, const Conjunct& c) {
    NormalizedFormula f;
    f.sigma = alphabet(p);
    for (auto& v : p.str_vars) f.reserved.insert(v);
    for (auto& v : p.int_vars) f.reserved.insert(v);
    detail::collect_names(to_formula(c), f.reserved);

    std::vector<Equation> es = c.eqs;
    std::vector<std::pair<std::string, Regex>> mems;
    int hash = 0;
    for (auto& [t, r] : c.mems) {
        if (t.size() == 1 && t[0].kind == Atom::Var) {
            mems.push_back({t[0].var, r});
        } else if (is_ground(t)) {
            if (!regex_match(r, ground_word(t))) f.I.push_back(mk_false());
        } else {
            std::string h;
            do h = "#m" + std::to_string(++hash);
            while (f.reserved.count(h));
            f.reserved.insert(h);
            es.push_back({{Atom::bare(h)}, t});
            mems.push_back({h, r});
        }
    }

    std::set<std::string> occurring;
    for (auto& e : es) {
        term_vars(e.lhs, occurring);
        term_vars(e.rhs, occurring);
    }
    for (auto& [v, r] : mems) occurring.insert(v);
    for (auto& a : c.arith)
        for (const Expr* x : {&a.lhs, &a.rhs})
            visit_expr(*x, [&](const ExprNode& n) {
                if (n.kind == ExprNode::Len) occurring.insert(n.name);
            });

    std::vector<std::string> order;
    for (auto& v : p.str_vars)
        if (occurring.count(v)) order.push_back(v);
    for (auto& v : occurring)
        if (v[0] == '#') order.push_back(v);
    for (auto& v : order)
        if (v[0] != '#') f.orig_vars.push_back(v);

    std::vector<ArithAtom> nonneg;
    for (auto& s : order) {
        std::string u = f.fresh_str(), n = f.fresh_int();
        f.lam.push_back(SubtermConstraint::alias(s, u));
        f.len_of[s] = n;
        f.len_of[u] = n;
        nonneg.push_back(mk_le(ex::k(0), ex::v(n)));
        for (auto& e : es) e = substitute(e, Atom::bare(s), {Atom::str(u, n)});
    }
    f.es = std::move(es);
    for (auto& [v, r] : mems) f.ups.push_back({v, r});
    for (auto& a : c.arith) f.I.push_back({a.kind, detail::lens_to_vars(a.lhs, f.len_of), detail::lens_to_vars(a.rhs, f.len_of)});
    f.I.insert(f.I.end(), nonneg.begin(), nonneg.end());
    return f;
}

inline NormalizedFormula init_1sea(const Problem& p) {
    auto dnf = to_dnf(p.formula());
    if (dnf.size() != 1) throw UnsupportedConstruct("init_1sea expects a single conjunct");
    return init_1sea(p, dnf[0]);
}

enum class Rule {
    ConstSucc,
    ConstFail,
    SmallBase,
    SmallStep,
    BigIdentify,
    BigLeft,   // the left head variable is the longer one
    BigRight,  // the right head variable is the longer one
    BigSame,
    BigEmpty,   // one head variable is empty
    EmptySide,  // one side empty: force every STR on the other side to eps
    EmptyFail,  // one side empty, the other a non-empty word
    Drop,       // both sides empty
};

inline std::string to_string(Rule r) {
    switch (r) {
        case Rule::ConstSucc: return "const-succ";
        case Rule::ConstFail: return "const-fail";
        case Rule::SmallBase: return "small-base";
        case Rule::SmallStep: return "small-step";
        case Rule::BigIdentify: return "big-identify";
        case Rule::BigLeft: return "big-left";
        case Rule::BigRight: return "big-right";
        case Rule::BigSame: return "big-same";
        case Rule::BigEmpty: return "big-empty";
        case Rule::EmptySide: return "empty-side";
        case Rule::EmptyFail: return "empty-fail";
        case Rule::Drop: return "drop";
    }
    return "?";
}

struct Unfolded {
    Rule rule;                           // the rule that fired on the parent
    std::vector<NormalizedFormula> kids;  // empty: the parent is refuted
    std::vector<Rule> kid_rules;          // per child (differs only for SMALL/BIG)
};

namespace detail {

inline void consume_heads(NormalizedFormula& f) {
    Equation& e = f.es[0];
    e.lhs.erase(e.lhs.begin());
    e.rhs.erase(e.rhs.begin());
}

inline NormalizedFormula to_eps(NormalizedFormula f, const Atom& s) {
    f = substitute(f, s, {});
    f.I.push_back(mk_eq(ex::v(s.len), ex::k(0)));
    f.lam.push_back(SubtermConstraint::eps(s.var));
    return f;
}

// STR(u,n) = c.STR(u,n1): the old whole is renamed u1 in Lambda.
inline NormalizedFormula small_step(NormalizedFormula f, const Atom& s, char c) {
    std::string u1 = f.fresh_str(), n1 = f.fresh_int();
    rename_in_lambda(f.lam, s.var, u1);
    f.lam.push_back(SubtermConstraint::prefix(u1, c, s.var));
    f.len_of[u1] = s.len;
    f.len_of[s.var] = n1;
    f = substitute(f, s, {Atom::chr(c), Atom::str(s.var, n1)});
    f.I.push_back(mk_eq(ex::v(n1), ex::sub(ex::v(s.len), ex::k(1))));
    f.I.push_back(mk_lt(ex::k(0), ex::v(s.len)));
    f.I.push_back(mk_le(ex::k(0), ex::v(n1)));
    consume_heads(f);
    return f;
}

// `longer` = `shorter`.rest: the old whole is renamed in Lambda and the
// surviving name denotes the remainder.
inline NormalizedFormula big_split(NormalizedFormula f, const Atom& longer, const Atom& shorter) {
    std::string u3 = f.fresh_str(), n3 = f.fresh_int();
    rename_in_lambda(f.lam, longer.var, u3);
    f.lam.push_back(SubtermConstraint::split(u3, shorter.var, longer.var));
    f.len_of[u3] = longer.len;
    f.len_of[longer.var] = n3;
    f = substitute(f, longer, {shorter, Atom::str(longer.var, n3)});
    f.I.push_back(mk_eq(ex::v(n3), ex::sub(ex::v(longer.len), ex::v(shorter.len))));
    f.I.push_back(mk_le(ex::k(0), ex::v(n3)));
    f.I.push_back(mk_le(ex::k(1), ex::v(shorter.len)));
    consume_heads(f);
    return f;
}

}  // namespace detail

inline Unfolded unfold_rules(const NormalizedFormula& f) {
    if (f.es.empty()) throw InternalError("unfold on a formula without equations");
    const Equation& e = f.es[0];
    for (const Term* t : {&e.lhs, &e.rhs})
        if (!t->empty() && t->front().kind == Atom::Var)
            throw InternalError("bare variable " + t->front().var + " heads an equation");

    if (e.lhs.empty() && e.rhs.empty()) {
        NormalizedFormula g = f;
        g.es.erase(g.es.begin());
        return {Rule::Drop, {g}, {Rule::Drop}};
    }
    if (e.lhs.empty() || e.rhs.empty()) {
        const Term& other = e.lhs.empty() ? e.rhs : e.lhs;
        std::vector<Atom> strs;
        for (const Atom& a : other)
            if (a.kind == Atom::Str && std::find(strs.begin(), strs.end(), a) == strs.end()) strs.push_back(a);
        if (strs.empty()) return {Rule::EmptyFail, {}, {}};
        NormalizedFormula g = f;
        for (const Atom& a : strs) g = detail::to_eps(g, a);
        return {Rule::EmptySide, {g}, {Rule::EmptySide}};
    }

    const Atom &l = e.lhs.front(), &r = e.rhs.front();
    if (l.kind == Atom::Const && r.kind == Atom::Const) {
        if (l.ch != r.ch) return {Rule::ConstFail, {}, {}};
        NormalizedFormula g = f;
        detail::consume_heads(g);
        return {Rule::ConstSucc, {g}, {Rule::ConstSucc}};
    }
    if (l.kind == Atom::Const || r.kind == Atom::Const) {
        const Atom& s = l.kind == Atom::Str ? l : r;
        char c = l.kind == Atom::Const ? l.ch : r.ch;
        return {Rule::SmallStep, {detail::to_eps(f, s), detail::small_step(f, s, c)}, {Rule::SmallBase, Rule::SmallStep}};
    }
    if (l.var == r.var) {
        NormalizedFormula g = f;
        if (l.len != r.len) g.I.push_back(mk_eq(ex::v(l.len), ex::v(r.len)));
        detail::consume_heads(g);
        return {Rule::BigSame, {g}, {Rule::BigSame}};
    }
    NormalizedFormula same = substitute(f, r, {l});
    same.I.push_back(mk_eq(ex::v(l.len), ex::v(r.len)));
    same.lam.push_back(SubtermConstraint::alias(r.var, l.var));
    detail::consume_heads(same);
    return {Rule::BigIdentify,
            {same, detail::big_split(f, l, r), detail::big_split(f, r, l), detail::to_eps(f, l), detail::to_eps(f, r)},
            {Rule::BigIdentify, Rule::BigLeft, Rule::BigRight, Rule::BigEmpty, Rule::BigEmpty}};
}

inline std::vector<NormalizedFormula> unfold(const NormalizedFormula& f) { return unfold_rules(f).kids; }

}  // namespace sea
