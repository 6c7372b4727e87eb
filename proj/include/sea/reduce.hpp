#pragma once

// Encoding a system of word equations as one equation with the same
// unknowns, by pairing equations around two distinct separator characters.

#include <set>
#include <string>
#include <vector>

#include "sea/ast.hpp"
#include "sea/problem.hpp"

namespace sea {

struct EqualSeparators : Error {
    using Error::Error;
};
struct AlphabetTooSmall : Error {
    using Error::Error;
};

struct EquationSystem {
    std::vector<Equation> es;
    std::string sigma;
};

// X1=Y1 and X2=Y2 become X1.c1.X2.X1.c2.X2 = Y1.c1.Y2.Y1.c2.Y2.
inline Equation pair_encode(const Equation& e1, const Equation& e2, char c1, char c2) {
    if (c1 == c2) throw EqualSeparators(std::string("separators must differ, both are '") + c1 + "'");
    auto side = [&](const Term& x1, const Term& x2) {
        Term t;
        for (char c : {c1, c2}) {
            t.insert(t.end(), x1.begin(), x1.end());
            t.push_back(Atom::chr(c));
            t.insert(t.end(), x2.begin(), x2.end());
        }
        return t;
    };
    return {side(e1.lhs, e2.lhs), side(e1.rhs, e2.rhs)};
}

// Left fold with the two smallest characters of the alphabet.
inline Equation reduce_system(const EquationSystem& sys) {
    std::set<char> cs(sys.sigma.begin(), sys.sigma.end());
    if (cs.size() < 2) throw AlphabetTooSmall("the reduction needs two distinct characters, the alphabet is \"" + sys.sigma + "\"");
    if (sys.es.empty()) return {};
    char c1 = *cs.begin(), c2 = *std::next(cs.begin());
    Equation acc = sys.es[0];
    for (std::size_t i = 1; i < sys.es.size(); ++i) acc = pair_encode(acc, sys.es[i], c1, c2);
    return acc;
}

inline std::set<std::string> string_vars(const std::vector<Equation>& es) {
    std::set<std::string> out;
    for (auto& e : es)
        for (const Term* t : {&e.lhs, &e.rhs})
            for (const Atom& a : *t)
                if (a.kind != Atom::Const) out.insert(a.var);
    return out;
}

// Replaces the top-level word equations of a problem by their encoding;
// everything else is kept in place.
inline Problem reduce_problem(const Problem& p) {
    EquationSystem sys{{}, alphabet(p)};
    std::vector<Formula> rest;
    std::vector<Formula> todo(p.assertions.rbegin(), p.assertions.rend());
    while (!todo.empty()) {
        Formula f = todo.back();
        todo.pop_back();
        if (f->kind == FNode::And)
            todo.insert(todo.end(), f->kids.rbegin(), f->kids.rend());
        else if (f->kind == FNode::WordEq)
            sys.es.push_back({f->lhs, f->rhs});
        else
            rest.push_back(f);
    }
    if (sys.es.size() < 2) return p;
    Equation e = reduce_system(sys);
    Problem q = p;
    q.assertions = {fm::eq(e.lhs, e.rhs)};
    q.assertions.insert(q.assertions.end(), rest.begin(), rest.end());
    return q;
}

}  // namespace sea
