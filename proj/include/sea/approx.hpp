#pragma once

// Over-approximation (length abstraction), Lambda expansion and the exact
// check of base leaves, whose equations are ground.

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sea/arith.hpp"
#include "sea/ast.hpp"
#include "sea/oracle.hpp"
#include "sea/problem.hpp"
#include "sea/regex.hpp"

namespace sea {

// Memberships never change during unfolding, so they are compiled once per
// conjunct: one DFA per variable (the intersection of its regexes).
struct MembershipInfo {
    std::string sigma;
    std::vector<std::string> vars;
    std::map<std::string, Dfa> dfa;
    std::vector<Disjunction> lengths;  // |v| in the length set of dfa[v]
};

inline MembershipInfo compile_memberships(const NormalizedFormula& f) {
    MembershipInfo m;
    m.sigma = f.sigma;
    for (auto& u : f.ups) {
        Dfa d = compile(u.re, f.sigma);
        auto it = m.dfa.find(u.var);
        if (it == m.dfa.end()) {
            m.vars.push_back(u.var);
            m.dfa.emplace(u.var, d);
        } else {
            it->second = minimize(intersect(it->second, d));
        }
    }
    for (auto& v : m.vars) {
        auto it = f.len_of.find(v);
        if (it == f.len_of.end()) throw InternalError("membership variable " + v + " has no length variable");
        m.lengths.push_back(length_constraint(length_set(m.dfa.at(v)), ex::v(it->second)));
    }
    return m;
}

enum class OaMode { Full, LengthsOnly };

struct OverApprox {
    std::vector<ArithAtom> atoms;
    std::vector<Disjunction> disj;
};

// Each equation contributes |lhs| = |rhs|; the full mode adds the length
// sets of the membership languages.
inline OverApprox over_approx(const NormalizedFormula& f, OaMode mode, const MembershipInfo& mem) {
    OverApprox o;
    o.atoms = f.I;
    for (auto& e : f.es) o.atoms.push_back(mk_eq(length_expr(e.lhs), length_expr(e.rhs)));
    if (mode == OaMode::Full) o.disj = mem.lengths;
    return o;
}

inline bool over_approx_unsat(const NormalizedFormula& f, OaMode mode, const MembershipInfo& mem) {
    OverApprox o = over_approx(f, mode, mem);
    return !arith_sat(o.atoms, o.disj).sat;
}

// Resolves Lambda to words over characters and undefined ("free") variables.
class Expander {
public:
    explicit Expander(const std::vector<SubtermConstraint>& lam) {
        for (auto& c : lam)
            if (!def_.count(c.a)) def_[c.a] = c;
    }
    bool defined(const std::string& v) const { return def_.count(v) > 0; }
    const SubtermConstraint* def(const std::string& v) const {
        auto it = def_.find(v);
        return it == def_.end() ? nullptr : &it->second;
    }
    // Const atoms and bare free variables.
    const Term& of(const std::string& v) { return of(v, 0); }

private:
    const Term& of(const std::string& v, int depth) {
        auto m = memo_.find(v);
        if (m != memo_.end()) return m->second;
        if (depth > 100000) throw InternalError("cyclic subterm constraints at " + v);
        Term t;
        auto it = def_.find(v);
        if (it == def_.end()) {
            t = {Atom::bare(v)};
        } else {
            const SubtermConstraint& c = it->second;
            switch (c.kind) {
                case SubtermConstraint::EpsBind: break;
                case SubtermConstraint::Alias: t = of(c.b, depth + 1); break;
                case SubtermConstraint::CharPrefix:
                    t = {Atom::chr(c.ch)};
                    t = cat(t, of(c.b, depth + 1));
                    break;
                case SubtermConstraint::Split: t = cat(of(c.b, depth + 1), of(c.c, depth + 1)); break;
            }
        }
        return memo_[v] = std::move(t);
    }

    std::map<std::string, SubtermConstraint> def_;
    std::map<std::string, Term> memo_;
};

inline std::set<std::string> all_string_vars(const NormalizedFormula& f) {
    std::set<std::string> all = free_string_vars(f);
    for (auto& v : f.orig_vars) all.insert(v);
    for (auto& [s, n] : f.len_of) all.insert(s);
    return all;
}

// Resolves Lambda under fixed words for the free variables; free variables
// without a word get sigma[0]^|v| (their length taken from `ints`), or the
// least word of that length in the membership language when the variable
// carries a membership by itself.
inline Model extract_model(const NormalizedFormula& f, const std::map<std::string, i64>& ints,
                           const MembershipInfo* mem = nullptr, std::map<std::string, std::string> free_words = {}) {
    Expander x(f.lam);
    auto length_of = [&](const std::string& v) -> i64 {
        auto it = f.len_of.find(v);
        if (it == f.len_of.end()) return 0;
        auto jt = ints.find(it->second);
        return jt == ints.end() ? 0 : jt->second;
    };
    Model m;
    for (auto& v : all_string_vars(f)) {
        std::string w;
        for (const Atom& a : x.of(v)) {
            if (a.kind == Atom::Const) {
                w += a.ch;
                continue;
            }
            auto it = free_words.find(a.var);
            if (it == free_words.end()) {
                i64 L = length_of(a.var);
                std::string fill;
                if (mem && mem->dfa.count(a.var)) {
                    if (auto found = witness_with_length(mem->dfa.at(a.var), [&](i64 n) { return n == L; }, L)) fill = *found;
                }
                if (fill.empty() && L > 0) fill = std::string(L, f.sigma.empty() ? 'a' : f.sigma[0]);
                it = free_words.emplace(a.var, fill).first;
            }
            w += it->second;
        }
        m.words[v] = w;
    }
    m.ints = ints;
    return m;
}

// ---------------------------------------------------------------- base leaves

namespace detail {

// Transformation monoid of a tuple of DFAs: an element maps every state of
// every component to the state reached after reading one word.
struct Monoid {
    std::vector<std::vector<int>> elems;
    std::vector<std::vector<int>> succ;  // succ[elem][symbol]
    int identity = 0;
};

inline std::optional<Monoid> transformation_monoid(const std::vector<const Dfa*>& comps, const std::string& sigma,
                                                   std::size_t cap) {
    std::vector<int> offset;
    std::vector<int> id;
    for (const Dfa* d : comps) {
        offset.push_back((int)id.size());
        for (int q = 0; q < d->size(); ++q) id.push_back(q);
    }
    Monoid m;
    std::map<std::vector<int>, int> index;
    index[id] = 0;
    m.elems.push_back(id);
    for (std::size_t i = 0; i < m.elems.size(); ++i) {
        m.succ.emplace_back();
        for (std::size_t c = 0; c < sigma.size(); ++c) {
            std::vector<int> next = m.elems[i];
            for (std::size_t k = 0; k < comps.size(); ++k)
                for (int q = 0; q < comps[k]->size(); ++q) next[offset[k] + q] = comps[k]->delta[m.elems[i][offset[k] + q]][c];
            auto [it, fresh] = index.emplace(next, (int)m.elems.size());
            if (fresh) {
                if (m.elems.size() >= cap) return std::nullopt;
                m.elems.push_back(next);
            }
            m.succ[i].push_back(it->second);
        }
    }
    return m;
}

// Least word of length L whose transformation is `target`.
inline std::optional<std::string> word_for(const Monoid& m, const std::string& sigma, int target, i64 L,
                                           std::size_t cell_cap) {
    const std::size_t n = m.elems.size();
    if ((std::size_t)(L + 1) * n > cell_cap) return std::nullopt;
    std::vector<std::vector<char>> back{std::vector<char>(n, 0)};  // back[k]: reaches target in k steps
    back[0][target] = 1;
    for (i64 k = 1; k <= L; ++k) {
        std::vector<char> b(n, 0);
        for (std::size_t p = 0; p < n; ++p)
            for (int q : m.succ[p])
                if (back.back()[q]) {
                    b[p] = 1;
                    break;
                }
        back.push_back(std::move(b));
    }
    if (!back[L][m.identity]) return std::nullopt;
    std::string w;
    int cur = m.identity;
    for (i64 k = L; k > 0; --k)
        for (std::size_t c = 0; c < sigma.size(); ++c)
            if (back[k - 1][m.succ[cur][c]]) {
                w += sigma[c];
                cur = m.succ[cur][c];
                break;
            }
    return w;
}

}  // namespace detail

struct UaResult {
    enum Kind { NotBase, Unsat, Sat, Inconclusive } kind = NotBase;
    Model model;      // for Sat: words of `str_vars`, values of `int_vars`
    std::string why;  // for Unsat / Inconclusive
};

struct UaLimits {
    std::size_t monoid_cap = 4096;
    std::size_t combination_cap = 20000;
    std::size_t cell_cap = 20000000;
};

// What a Sat model has to cover and what it is checked against.
struct ModelSpec {
    Formula original;
    std::vector<std::string> str_vars, int_vars;
};

// Exact decision for a base leaf: every equation is ground, so the leaf is
// Lambda, memberships and arithmetic. Memberships reach the free variables
// through their expansions; a word acts on the membership automata by a
// transformation, and each transformation has a semilinear set of word
// lengths, so a choice of one transformation per free variable reduces the
// rest to Presburger arithmetic.
inline UaResult under_approx_check(const NormalizedFormula& f, const MembershipInfo& mem, const ModelSpec& spec,
                                   UaLimits lim = {}) {
    for (auto& e : f.es)
        if (!is_ground(e.lhs) || !is_ground(e.rhs)) return {UaResult::NotBase, {}, ""};
    for (auto& e : f.es)
        if (ground_word(e.lhs) != ground_word(e.rhs))
            return {UaResult::Unsat, {}, "ground equation " + to_string(e) + " fails"};

    Expander x(f.lam);
    std::set<std::string> all = all_string_vars(f);
    std::set<std::string> taken = int_vars(f.I);
    for (auto& [s, n] : f.len_of) taken.insert(n);
    std::map<std::string, std::string> lenvar;
    for (auto& v : all) {
        auto it = f.len_of.find(v);
        if (it != f.len_of.end()) {
            lenvar[v] = it->second;
        } else {
            std::string n = "@" + v;
            while (taken.count(n)) n = "@" + n;
            taken.insert(n);
            lenvar[v] = n;
        }
    }
    std::vector<std::string> frees;
    for (auto& v : all)
        if (!x.defined(v)) frees.push_back(v);

    auto len_sum = [&](const Term& t) {
        Expr e = ex::k(0);
        i64 chars = 0;
        for (const Atom& a : t) {
            if (a.kind == Atom::Const)
                ++chars;
            else
                e = ex::add(e, ex::v(lenvar.at(a.var)));
        }
        return ex::add(e, ex::k(chars));
    };
    std::vector<ArithAtom> base = f.I;
    for (auto& v : all)
        if (x.defined(v)) base.push_back(mk_eq(ex::v(lenvar.at(v)), len_sum(x.of(v))));
    for (auto& v : frees) {
        base.push_back(mk_le(ex::k(0), ex::v(lenvar.at(v))));
        if (f.sigma.empty()) base.push_back(mk_eq(ex::v(lenvar.at(v)), ex::k(0)));
    }

    // Memberships whose expansion mentions free variables, and ground ones.
    std::vector<std::string> mvars;
    std::set<std::string> relevant_set;
    for (auto& v : mem.vars) {
        const Term& t = x.of(v);
        if (is_ground(t)) {
            if (!accepts(mem.dfa.at(v), ground_word(t)))
                return {UaResult::Unsat, {}, "membership of " + v + " fails on " + ground_word(t)};
            continue;
        }
        mvars.push_back(v);
        term_vars(t, relevant_set);
    }
    std::vector<std::string> relevant(relevant_set.begin(), relevant_set.end());

    auto finish = [&](const ArithResult& r, const std::map<std::string, std::string>& fixed) -> UaResult {
        std::map<std::string, i64> ints = r.model;
        for (auto& v : frees)
            if (!ints.count(lenvar.at(v))) ints[lenvar.at(v)] = 0;
        std::map<std::string, std::string> free_words = fixed;
        for (auto& v : frees)
            if (!free_words.count(v)) free_words[v] = std::string(ints.at(lenvar.at(v)), f.sigma.empty() ? 'a' : f.sigma[0]);
        Model full = extract_model(f, ints, nullptr, free_words);
        Model out;
        for (auto& v : spec.str_vars) {
            auto it = full.words.find(v);
            out.words[v] = it == full.words.end() ? "" : it->second;
        }
        for (auto& v : spec.int_vars) {
            auto it = ints.find(v);
            out.ints[v] = it == ints.end() ? 0 : it->second;
        }
        if (spec.original && !eval_formula(spec.original, out))
            throw InternalError("extracted model does not satisfy the input formula");
        return {UaResult::Sat, out, ""};
    };

    if (relevant.empty()) {
        ArithResult r = arith_sat(base);
        if (!r.sat) return {UaResult::Unsat, {}, "arithmetic is unsatisfiable"};
        return finish(r, {});
    }

    std::vector<const Dfa*> comps;
    for (auto& v : mvars) comps.push_back(&mem.dfa.at(v));
    auto monoid = detail::transformation_monoid(comps, f.sigma, lim.monoid_cap);
    if (!monoid) return {UaResult::Inconclusive, {}, "transformation monoid exceeds its cap"};
    const detail::Monoid& M = *monoid;
    std::vector<int> offset;
    {
        int o = 0;
        for (const Dfa* d : comps) {
            offset.push_back(o);
            o += d->size();
        }
    }

    std::map<int, Disjunction> lengths_cache;
    auto lengths_of = [&](int tau, const std::string& v) {
        auto it = lengths_cache.find(tau);
        if (it == lengths_cache.end()) {
            std::vector<bool> acc(M.elems.size(), false);
            acc[tau] = true;
            std::vector<std::vector<int>> succ(M.elems.size());
            for (std::size_t i = 0; i < M.elems.size(); ++i) {
                std::set<int> s(M.succ[i].begin(), M.succ[i].end());
                succ[i].assign(s.begin(), s.end());
            }
            it = lengths_cache.emplace(tau, length_constraint(walk_lengths(succ, M.identity, acc), ex::v("#"))).first;
        }
        Disjunction d = it->second;
        for (auto& conj : d)
            for (auto& a : conj) a = subst_atom(a, {{"#", ex::v(lenvar.at(v))}}, {});
        return d;
    };

    // A membership is checked as soon as its last free variable is chosen.
    std::map<std::string, int> pos;
    for (std::size_t i = 0; i < relevant.size(); ++i) pos[relevant[i]] = (int)i;
    std::vector<std::vector<int>> check_at(relevant.size());
    for (std::size_t k = 0; k < mvars.size(); ++k) {
        int last = 0;
        for (const Atom& a : x.of(mvars[k]))
            if (a.kind != Atom::Const) last = std::max(last, pos.at(a.var));
        check_at[last].push_back((int)k);
    }
    std::vector<int> choice(relevant.size(), -1);
    auto holds = [&](int k) {
        const Dfa& d = *comps[k];
        int q = d.start;
        for (const Atom& a : x.of(mvars[k]))
            q = a.kind == Atom::Const ? d.delta[q][d.sym(a.ch)] : M.elems[choice[pos.at(a.var)]][offset[k] + q];
        return (bool)d.accept[q];
    };

    std::size_t visited = 0;
    bool capped = false;
    std::optional<UaResult> found;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (found || capped) return;
        if (++visited > lim.combination_cap) {
            capped = true;
            return;
        }
        if (i == relevant.size()) {
            std::vector<Disjunction> extra;
            for (std::size_t j = 0; j < relevant.size(); ++j) extra.push_back(lengths_of(choice[j], relevant[j]));
            ArithResult r = arith_sat(base, extra);
            if (!r.sat) return;
            std::map<std::string, std::string> fixed;
            for (std::size_t j = 0; j < relevant.size(); ++j) {
                i64 L = r.model.count(lenvar.at(relevant[j])) ? r.model.at(lenvar.at(relevant[j])) : 0;
                auto w = detail::word_for(M, f.sigma, choice[j], L, lim.cell_cap);
                if (!w) {
                    capped = true;
                    return;
                }
                fixed[relevant[j]] = *w;
            }
            found = finish(r, fixed);
            return;
        }
        for (int tau = 0; tau < (int)M.elems.size() && !found && !capped; ++tau) {
            choice[i] = tau;
            bool ok = true;
            for (int k : check_at[i]) ok = ok && holds(k);
            if (ok) rec(i + 1);
        }
        choice[i] = -1;
    };
    rec(0);
    if (found) return *found;
    if (capped) return {UaResult::Inconclusive, {}, "search over transformations exceeds its cap"};
    return {UaResult::Unsat, {}, "no choice of words meets memberships and arithmetic"};
}

}  // namespace sea
