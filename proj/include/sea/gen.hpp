#pragma once

// Seeded random instance generators shared by the tests and the CLI.

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "sea/ast.hpp"
#include "sea/classify.hpp"
#include "sea/problem.hpp"
#include "sea/unfold.hpp"

namespace sea::gen {

using Rng = std::mt19937_64;

inline int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

inline Regex random_regex(Rng& rng, const std::string& sigma, int depth) {
    int pick = uniform(rng, 0, depth > 0 ? 9 : 3);
    auto ch = [&] { return sigma[uniform(rng, 0, (int)sigma.size() - 1)]; };
    switch (pick) {
        case 0: return uniform(rng, 0, 5) == 0 ? re::empty() : re::eps();
        case 1:
        case 2: return re::lit(ch());
        case 3: {
            std::string w;
            for (int n = uniform(rng, 2, 3); n > 0; --n) w += ch();
            return re::word(w);
        }
        case 4:
        case 5: return re::cat(random_regex(rng, sigma, depth - 1), random_regex(rng, sigma, depth - 1));
        case 6: return re::alt(random_regex(rng, sigma, depth - 1), random_regex(rng, sigma, depth - 1));
        case 7: return re::inter(random_regex(rng, sigma, depth - 1), random_regex(rng, sigma, depth - 1));
        case 8: return re::comp(random_regex(rng, sigma, depth - 1));
        default: return re::star(random_regex(rng, sigma, depth - 1));
    }
}

// Star-shaped languages typical of string benchmarks: (w)*, (w)*v, v(w)*.
inline Regex random_membership(Rng& rng, const std::string& sigma) {
    auto word = [&](int lo, int hi) {
        std::string w;
        for (int n = uniform(rng, lo, hi); n > 0; --n) w += sigma[uniform(rng, 0, (int)sigma.size() - 1)];
        return w;
    };
    Regex body = re::star(re::word(word(1, 2)));
    switch (uniform(rng, 0, 3)) {
        case 0: return body;
        case 1: return re::cat(body, re::word(word(1, 1)));
        case 2: return re::cat(re::word(word(1, 1)), body);
        default: return random_regex(rng, sigma, 2);
    }
}

// Splits a multiset of atoms into two non-empty sides in random order.
inline Equation random_sides(Rng& rng, Term atoms) {
    std::shuffle(atoms.begin(), atoms.end(), rng);
    int cut = uniform(rng, 1, (int)atoms.size() - 1);
    return {Term(atoms.begin(), atoms.begin() + cut), Term(atoms.begin() + cut, atoms.end())};
}

inline Atom random_char(Rng& rng, const std::string& sigma) {
    return Atom::chr(sigma[uniform(rng, 0, (int)sigma.size() - 1)]);
}

inline FragmentTag tag_of(const Problem& p) {
    auto dnf = to_dnf(p.formula());
    return classify_fragment(init_1sea(p, dnf.at(0))).tag;
}

// Octagonal or modular constraint on the length of a variable.
inline Formula random_length_atom(Rng& rng, const std::string& v, bool mod_only) {
    if (mod_only || uniform(rng, 0, 1) == 0) {
        i64 p = uniform(rng, 2, 3);
        return fm::arith(mk_eq(ex::mod(ex::len(v), ex::k(p)), ex::k(uniform(rng, 0, (int)p - 1))));
    }
    i64 k = uniform(rng, 0, 5);
    return fm::arith(uniform(rng, 0, 1) ? mk_le(ex::len(v), ex::k(k)) : mk_le(ex::k(k), ex::len(v)));
}

// One word equation over x, y and {a,b} of size <= 8, optionally with a
// membership and one mod constraint, kept only if classified 1SEA.
inline Problem one_sea_formula(Rng& rng) {
    for (;;) {
        Problem p;
        p.extra_chars = "ab";
        int nvars = uniform(rng, 1, 2);
        for (int i = 0; i < nvars; ++i) p.str_vars.push_back(i ? "y" : "x");
        int size = uniform(rng, 3, 8);
        Term atoms;
        for (auto& v : p.str_vars) atoms.push_back(Atom::bare(v));
        while ((int)atoms.size() < size)
            atoms.push_back(uniform(rng, 0, 2) == 0 ? Atom::bare(p.str_vars[uniform(rng, 0, nvars - 1)]) : random_char(rng, "ab"));
        Equation e = random_sides(rng, atoms);
        p.assertions.push_back(fm::eq(e.lhs, e.rhs));
        if (uniform(rng, 0, 1)) p.assertions.push_back(fm::in({Atom::bare(p.str_vars[uniform(rng, 0, nvars - 1)])}, random_membership(rng, "ab")));
        if (uniform(rng, 0, 1)) p.assertions.push_back(random_length_atom(rng, p.str_vars[uniform(rng, 0, nvars - 1)], true));
        if (tag_of(p) == FragmentTag::OneSEA) return p;
    }
}

// A single equation of size <= max_size in which exactly one variable
// occurs twice, with octagonal or mod arithmetic; kept only if 1SEA.
inline Problem one_sea_single(Rng& rng, int max_size = 8) {
    for (;;) {
        Problem p;
        p.extra_chars = "ab";
        p.str_vars = {"x"};
        int size = uniform(rng, 3, max_size);
        Term atoms{Atom::bare("x"), Atom::bare("x")};
        int others = uniform(rng, 0, std::min(2, size - 2));
        for (int i = 0; i < others; ++i) {
            std::string v = i ? "z" : "y";
            p.str_vars.push_back(v);
            atoms.push_back(Atom::bare(v));
        }
        while ((int)atoms.size() < size) atoms.push_back(random_char(rng, "ab"));
        Equation e = random_sides(rng, atoms);
        p.assertions.push_back(fm::eq(e.lhs, e.rhs));
        for (int n = uniform(rng, 0, 2); n > 0; --n)
            p.assertions.push_back(random_length_atom(rng, p.str_vars[uniform(rng, 0, (int)p.str_vars.size() - 1)], false));
        if (tag_of(p) == FragmentTag::OneSEA) return p;
    }
}

// Up to three linear equations over up to four variables with acyclic
// dependency graphs; kept only if 0SEA. Largest equation size <= 8.
inline Problem zero_sea_system(Rng& rng) {
    for (;;) {
        Problem p;
        p.extra_chars = "ab";
        int nvars = uniform(rng, 1, 4);
        for (int i = 0; i < nvars; ++i) p.str_vars.push_back(std::string(1, "xyzw"[i]));
        int m = uniform(rng, 1, 3);
        for (int i = 0; i < m; ++i) {
            int size = uniform(rng, 2, 8);
            std::vector<std::string> pool = p.str_vars;
            std::shuffle(pool.begin(), pool.end(), rng);
            Term atoms;
            int vars = uniform(rng, 1, std::min<int>(nvars, size));
            for (int k = 0; k < vars; ++k) atoms.push_back(Atom::bare(pool[k]));
            while ((int)atoms.size() < size) atoms.push_back(random_char(rng, "ab"));
            Equation e = random_sides(rng, atoms);
            p.assertions.push_back(fm::eq(e.lhs, e.rhs));
        }
        if (uniform(rng, 0, 2) == 0) p.assertions.push_back(random_length_atom(rng, p.str_vars[0], false));
        if (tag_of(p) == FragmentTag::ZeroSEA) return p;
    }
}

// Two or three equations over {a,b} and up to three variables.
inline std::vector<Equation> equation_system(Rng& rng) {
    std::vector<std::string> vars{"x", "y", "z"};
    int nvars = uniform(rng, 1, 3);
    std::vector<Equation> es;
    for (int m = uniform(rng, 2, 3); m > 0; --m) {
        Term atoms;
        for (int n = uniform(rng, 2, 5); n > 0; --n)
            atoms.push_back(uniform(rng, 0, 1) ? Atom::bare(vars[uniform(rng, 0, nvars - 1)]) : random_char(rng, "ab"));
        es.push_back(random_sides(rng, atoms));
    }
    return es;
}

// A small conjunct for the unfolding-equivalence check: one or two short
// equations, an optional membership and an optional length atom.
inline Problem small_formula(Rng& rng) {
    Problem p;
    p.extra_chars = "ab";
    int nvars = uniform(rng, 1, 2);
    for (int i = 0; i < nvars; ++i) p.str_vars.push_back(i ? "y" : "x");
    for (int m = uniform(rng, 1, 2); m > 0; --m) {
        Term atoms;
        for (int n = uniform(rng, 2, 5); n > 0; --n)
            atoms.push_back(uniform(rng, 0, 1) ? Atom::bare(p.str_vars[uniform(rng, 0, nvars - 1)]) : random_char(rng, "ab"));
        Equation e = random_sides(rng, atoms);
        p.assertions.push_back(fm::eq(e.lhs, e.rhs));
    }
    if (uniform(rng, 0, 2) == 0) p.assertions.push_back(fm::in({Atom::bare("x")}, random_membership(rng, "ab")));
    if (uniform(rng, 0, 2) == 0) p.assertions.push_back(random_length_atom(rng, p.str_vars.back(), false));
    return p;
}

}  // namespace sea::gen
