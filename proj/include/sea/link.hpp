#pragma once

// Back-linking an open leaf to an ancestor that it instantiates.
//
// A link L -> A is accepted when every model of L yields a model of A that
// is strictly smaller in the total length of the equations. That measure
// never grows along unfolding, so any infinite trace through links would
// descend forever; linked leaves can therefore be treated as closed.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "sea/approx.hpp"
#include "sea/arith.hpp"
#include "sea/ast.hpp"
#include "sea/regex.hpp"

namespace sea {

struct BackLink {
    int target = -1;
    // Integer renaming applied to the leaf, as (new, old) pairs: leaf
    // integers that clash with the ancestor's names are primed first.
    std::vector<std::pair<std::string, std::string>> theta;
    std::map<std::string, std::string> vars;  // leaf string variable -> ancestor variable
    std::map<char, char> chars;              // character permutation, identity entries omitted
};

inline std::string theta_text(const std::vector<std::pair<std::string, std::string>>& theta) {
    std::string s = "[";
    for (std::size_t i = 0; i < theta.size(); ++i) s += (i ? ", " : "") + theta[i].first + "/" + theta[i].second;
    return s + "]";
}

struct Alignment {
    std::map<std::string, std::string> vars, ints;
    std::map<char, char> chars;
};

namespace detail {

template <class K, class V>
bool bind(std::map<K, V>& m, std::map<V, K>& inv, const K& k, const V& v) {
    auto it = m.find(k);
    if (it != m.end()) return it->second == v;
    auto jt = inv.find(v);
    if (jt != inv.end()) return false;
    m[k] = v;
    inv[v] = k;
    return true;
}

inline std::map<char, char> complete_permutation(const std::map<char, char>& partial, const std::string& sigma) {
    std::map<char, char> full = partial;
    std::set<char> used;
    for (auto& [a, b] : partial) used.insert(b);
    std::vector<char> from, to;
    for (char c : sigma)
        if (!full.count(c)) {
            if (!used.count(c)) {
                full[c] = c;
                used.insert(c);
            } else {
                from.push_back(c);
            }
        }
    for (char c : sigma)
        if (!used.count(c)) to.push_back(c);
    for (std::size_t i = 0; i < from.size() && i < to.size(); ++i) full[from[i]] = to[i];
    return full;
}

inline std::set<std::string> live_vars(const NormalizedFormula& f) {
    std::set<std::string> out;
    for (auto& e : f.es) {
        term_vars(e.lhs, out);
        term_vars(e.rhs, out);
    }
    return out;
}

inline std::set<std::string> all_ints(const NormalizedFormula& f) {
    std::set<std::string> out = int_vars(f.I);
    for (auto& [s, n] : f.len_of) out.insert(n);
    for (auto& e : f.es)
        for (const Term* t : {&e.lhs, &e.rhs})
            for (const Atom& a : *t)
                if (a.kind == Atom::Str) out.insert(a.len);
    return out;
}

inline Expr measure(const NormalizedFormula& f) {
    Expr m = ex::k(0);
    for (auto& e : f.es) m = ex::add(m, ex::add(length_expr(e.lhs), length_expr(e.rhs)));
    return m;
}

}  // namespace detail

// Positional alignment of the leaf's equations onto the ancestor's: the
// string-variable bijection, the character map and the integer map are all
// forced by the atoms, so there is at most one candidate.
inline std::optional<Alignment> align(const NormalizedFormula& leaf, const NormalizedFormula& anc) {
    if (leaf.es.size() != anc.es.size()) return std::nullopt;
    Alignment al;
    std::map<std::string, std::string> vinv, iinv;
    std::map<char, char> cinv;
    for (std::size_t i = 0; i < leaf.es.size(); ++i) {
        for (auto [lt, at] : {std::pair{&leaf.es[i].lhs, &anc.es[i].lhs}, std::pair{&leaf.es[i].rhs, &anc.es[i].rhs}}) {
            if (lt->size() != at->size()) return std::nullopt;
            for (std::size_t j = 0; j < lt->size(); ++j) {
                const Atom &x = (*lt)[j], &y = (*at)[j];
                if (x.kind != y.kind) return std::nullopt;
                bool ok = true;
                if (x.kind == Atom::Const) ok = detail::bind(al.chars, cinv, x.ch, y.ch);
                if (x.kind == Atom::Var) ok = detail::bind(al.vars, vinv, x.var, y.var);
                if (x.kind == Atom::Str)
                    ok = detail::bind(al.vars, vinv, x.var, y.var) && detail::bind(al.ints, iinv, x.len, y.len);
                if (!ok) return std::nullopt;
            }
        }
    }
    al.chars = detail::complete_permutation(al.chars, leaf.sigma);
    return al;
}

// For every membership variable s: whenever the leaf's expansion of s is
// accepted, so is the ancestor's expansion under the transported words.
// Both expansions must mention the same variables in the same order; the
// check runs the two automata side by side over pairs of states, letting
// each variable read an arbitrary word (permuted on the ancestor side for
// variables of the equations).
inline bool memberships_transport(const NormalizedFormula& anc, const Alignment& al, const MembershipInfo& mem,
                                  Expander& xl, Expander& xa) {
    if (mem.vars.empty()) return true;
    std::map<std::string, std::string> back;
    for (auto& [l, a] : al.vars) back[a] = l;
    std::set<std::string> anc_live = detail::live_vars(anc);
    for (auto& s : mem.vars) {
        const Dfa& d = mem.dfa.at(s);
        const Term& el = xl.of(s);
        Term ea = xa.of(s);
        for (Atom& a : ea)
            if (a.kind != Atom::Const && anc_live.count(a.var)) a.var = back.at(a.var);
        std::vector<std::size_t> vl, va;
        for (std::size_t i = 0; i < el.size(); ++i)
            if (el[i].kind != Atom::Const) vl.push_back(i);
        for (std::size_t i = 0; i < ea.size(); ++i)
            if (ea[i].kind != Atom::Const) va.push_back(i);
        if (vl.size() != va.size()) return false;
        for (std::size_t k = 0; k < vl.size(); ++k)
            if (el[vl[k]].var != ea[va[k]].var) return false;

        std::set<std::pair<int, int>> pairs{{d.start, d.start}};
        auto read = [&](const Term& t, std::size_t from, std::size_t to, bool left) {
            std::set<std::pair<int, int>> out;
            for (auto [p, q] : pairs) {
                int& r = left ? p : q;
                for (std::size_t i = from; i < to; ++i) r = d.delta[r][d.sym(t[i].ch)];
                out.insert({p, q});
            }
            pairs = std::move(out);
        };
        std::size_t il = 0, ia = 0;
        for (std::size_t k = 0; k <= vl.size(); ++k) {
            std::size_t el_end = k < vl.size() ? vl[k] : el.size(), ea_end = k < va.size() ? va[k] : ea.size();
            read(el, il, el_end, true);
            read(ea, ia, ea_end, false);
            if (k == vl.size()) break;
            bool permuted = al.vars.count(el[vl[k]].var) > 0;
            std::vector<std::pair<int, int>> work(pairs.begin(), pairs.end());
            while (!work.empty()) {
                auto [p, q] = work.back();
                work.pop_back();
                for (std::size_t c = 0; c < d.sigma.size(); ++c) {
                    char cq = permuted ? al.chars.at(d.sigma[c]) : d.sigma[c];
                    std::pair<int, int> nx{d.delta[p][c], d.delta[q][d.sym(cq)]};
                    if (pairs.insert(nx).second) work.push_back(nx);
                }
            }
            il = vl[k] + 1;
            ia = va[k] + 1;
        }
        for (auto [p, q] : pairs)
            if (d.accept[p] && !d.accept[q]) return false;
    }
    return true;
}

namespace detail {

inline int progress_count(const NormalizedFormula& f) {
    int n = 0;
    for (auto& c : f.lam) n += c.kind == SubtermConstraint::CharPrefix || c.kind == SubtermConstraint::Split;
    return n;
}

inline Expr len_sum(const Term& t, const std::function<Expr(const std::string&)>& len) {
    Expr e = ex::k(0);
    i64 chars = 0;
    for (const Atom& a : t) {
        if (a.kind == Atom::Const)
            ++chars;
        else
            e = ex::add(e, len(a.var));
    }
    return ex::add(e, ex::k(chars));
}

}  // namespace detail

// Tries one ancestor. On success the link carries the integer renaming.
// The expanders belong to the leaf and the ancestor and may be reused.
inline std::optional<BackLink> try_link(const NormalizedFormula& leaf, const NormalizedFormula& anc,
                                        const MembershipInfo& mem, Expander& xl, Expander& xa) {
    if (detail::progress_count(leaf) <= detail::progress_count(anc)) return std::nullopt;
    auto al = align(leaf, anc);
    if (!al) return std::nullopt;
    if (leaf.ups.size() != anc.ups.size()) return std::nullopt;
    for (std::size_t i = 0; i < leaf.ups.size(); ++i)
        if (leaf.ups[i].var != anc.ups[i].var || !same(map_chars(leaf.ups[i].re, al->chars), anc.ups[i].re))
            return std::nullopt;
    if (!memberships_transport(anc, *al, mem, xl, xa)) return std::nullopt;

    // Leaf integers move into the ancestor's namespace.
    std::set<std::string> leaf_ints = detail::all_ints(leaf), anc_ints = detail::all_ints(anc);
    std::set<std::string> image;
    for (auto& [l, a] : al->ints) image.insert(a);
    std::set<std::string> used = leaf_ints;
    used.insert(anc_ints.begin(), anc_ints.end());
    std::map<std::string, std::string> hyp_name;
    BackLink link;
    for (auto& x : image)
        if (!al->ints.count(x)) {
            std::string p = x + "'";
            while (used.count(p)) p += "'";
            used.insert(p);
            hyp_name[x] = p;
            if (leaf_ints.count(x)) link.theta.push_back({p, x});
        }
    for (auto& [l, a] : al->ints) {
        hyp_name[l] = a;
        if (l != a) link.theta.push_back({a, l});
    }
    auto hname = [&](const std::string& x) {
        auto it = hyp_name.find(x);
        return it == hyp_name.end() ? x : it->second;
    };
    std::map<std::string, Expr> to_hyp;
    for (auto& x : used) to_hyp[x] = ex::v(hname(x));

    std::vector<ArithAtom> hyp;
    for (auto& a : leaf.I) hyp.push_back(subst_atom(a, to_hyp, {}));
    auto leaf_len = [&](const std::string& v) -> Expr {
        auto it = leaf.len_of.find(v);
        if (it == leaf.len_of.end()) return nullptr;
        return ex::v(hname(it->second));
    };
    for (auto& [v, n] : leaf.len_of) {
        if (!xl.defined(v)) continue;
        bool ok = true;
        for (const Atom& a : xl.of(v))
            if (a.kind != Atom::Const && !leaf.len_of.count(a.var)) ok = false;
        if (ok) hyp.push_back(mk_eq(ex::v(hname(n)), detail::len_sum(xl.of(v), leaf_len)));
    }
    for (auto& e : leaf.es)
        hyp.push_back(subst_atom(mk_eq(length_expr(e.lhs), length_expr(e.rhs)), to_hyp, {}));

    // Ancestor integers: equation lengths keep their names (they now carry
    // the transported values), lengths of Lambda-defined variables become
    // sums over the expansion, everything else is the leaf's own value.
    std::map<std::string, std::string> live_len;
    for (auto& e : anc.es)
        for (const Term* t : {&e.lhs, &e.rhs})
            for (const Atom& a : *t)
                if (a.kind == Atom::Str) live_len[a.var] = a.len;
    bool resolvable = true;
    auto anc_len = [&](const std::string& v) -> Expr {
        auto it = live_len.find(v);
        if (it != live_len.end()) return ex::v(it->second);
        auto jt = anc.len_of.find(v);
        if (jt == anc.len_of.end()) {
            resolvable = false;
            return ex::k(0);
        }
        return ex::v(hname(jt->second));
    };
    std::map<std::string, Expr> witness;
    std::vector<std::pair<std::string, Expr>> bindings;
    for (auto& [v, n] : anc.len_of) {
        if (!xa.defined(v)) continue;
        Expr w = detail::len_sum(xa.of(v), anc_len);
        bindings.push_back({n, w});
        if (!image.count(n) && !witness.count(n)) witness[n] = w;
    }
    if (!resolvable) return std::nullopt;
    std::map<std::string, Expr> to_anc;
    for (auto& x : anc_ints) {
        if (image.count(x))
            to_anc[x] = ex::v(x);
        else if (witness.count(x))
            to_anc[x] = witness.at(x);
        else
            to_anc[x] = ex::v(hname(x));
    }
    for (auto& x : int_vars(anc.I))
        if (!to_anc.count(x)) to_anc[x] = ex::v(hname(x));

    std::vector<ArithAtom> concl;
    for (auto& a : anc.I) concl.push_back(subst_atom(a, to_anc, {}));
    for (auto& [n, w] : bindings) concl.push_back(mk_eq(to_anc.at(n), w));
    std::map<std::string, Expr> old_vals;
    for (auto& x : anc_ints) old_vals[x] = ex::v(hname(x));
    Expr mu = detail::measure(anc);
    concl.push_back(mk_le(ex::add(mu, ex::k(1)), subst_expr(mu, old_vals, {})));
    if (!arith_implies(hyp, concl)) return std::nullopt;

    for (auto& [l, a] : al->vars)
        if (l != a) link.vars[l] = a;
    for (auto& [c, d] : al->chars)
        if (c != d) link.chars[c] = d;
    return link;
}

inline std::optional<BackLink> try_link(const NormalizedFormula& leaf, const NormalizedFormula& anc,
                                        const MembershipInfo& mem) {
    Expander xl(leaf.lam), xa(anc.lam);
    return try_link(leaf, anc, mem, xl, xa);
}

// A candidate target; the expander, when given, caches the ancestor's
// expansions across calls.
struct Ancestor {
    int id = 0;
    const NormalizedFormula* f = nullptr;
    Expander* x = nullptr;
};

// Ancestors are given nearest first.
inline std::optional<BackLink> link_back(const NormalizedFormula& leaf, const std::vector<Ancestor>& ancestors,
                                         const MembershipInfo& mem) {
    Expander xl(leaf.lam);
    for (auto& a : ancestors) {
        std::optional<Expander> own;
        Expander* xa = a.x;
        if (!xa) xa = &own.emplace(a.f->lam);
        if (auto l = try_link(leaf, *a.f, mem, xl, *xa)) {
            l->target = a.id;
            return l;
        }
    }
    return std::nullopt;
}

}  // namespace sea
