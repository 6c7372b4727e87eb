#pragma once

// Fragment classification: linearity, per-variable dependency graphs,
// simple-cycle counting and syntactic periodicity of length arithmetic.

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "sea/arith.hpp"
#include "sea/ast.hpp"

namespace sea {

inline std::map<std::string, int> occurrences(const Equation& e) {
    std::map<std::string, int> n;
    for (const Term* t : {&e.lhs, &e.rhs})
        for (const Atom& a : *t)
            if (a.is_var()) ++n[a.var];
    return n;
}

inline bool is_linear(const std::vector<Equation>& es) {
    for (auto& e : es)
        for (auto& [v, k] : occurrences(e))
            if (k > 1) return false;
    return true;
}

inline bool is_linear(const NormalizedFormula& f) { return is_linear(f.es); }

struct DepGraph {
    std::string root;
    std::vector<std::string> vertices;  // insertion order
    std::set<std::string> leaves;
    std::map<std::pair<std::string, std::string>, int> edges;  // multiplicity

    void add_vertex(const std::string& v) {
        if (std::find(vertices.begin(), vertices.end(), v) == vertices.end()) vertices.push_back(v);
    }
    bool is_leaf(const std::string& v) const { return leaves.count(v) > 0; }
    void mark_leaf(const std::string& v) {
        leaves.insert(v);
        for (auto it = edges.begin(); it != edges.end();)
            it = it->first.first == v ? edges.erase(it) : std::next(it);
    }
    int out_degree(const std::string& v) const {
        int n = 0;
        for (auto& [e, k] : edges)
            if (e.first == v) n += k;
        return n;
    }
};

inline std::set<std::string> term_vars(const Term& t) {
    std::set<std::string> out;
    term_vars(t, out);
    return out;
}

// Worklist construction over a working copy of Es: the first remaining
// equation mentioning s_i is consumed; a ground opposite side turns the
// variables of s_i's side into leaves, otherwise s_i gets an edge to every
// variable of the opposite side. When no equation is left for s_i it
// becomes a leaf only if it has no outgoing edges yet, so a variable whose
// own equation produced a self-loop keeps it.
inline DepGraph build_dep_graph(const std::string& s, std::vector<Equation> es) {
    DepGraph g;
    g.root = s;
    g.add_vertex(s);
    std::deque<std::string> wl{s};
    while (!wl.empty()) {
        std::string si = wl.front();
        wl.pop_front();
        if (g.is_leaf(si)) continue;
        auto it = std::find_if(es.begin(), es.end(), [&](const Equation& e) {
            return term_vars(e.lhs).count(si) || term_vars(e.rhs).count(si);
        });
        if (it == es.end()) {
            if (g.out_degree(si) == 0) g.mark_leaf(si);
            continue;
        }
        bool left = term_vars(it->lhs).count(si) > 0;
        std::set<std::string> fv_i = term_vars(left ? it->lhs : it->rhs), fv_d = term_vars(left ? it->rhs : it->lhs);
        es.erase(it);
        if (fv_d.empty()) {
            for (auto& sj : fv_i) {
                g.add_vertex(sj);
                g.mark_leaf(sj);
            }
            continue;
        }
        for (auto& sj : fv_d) {
            g.add_vertex(sj);
            ++g.edges[{si, sj}];
            if (!g.is_leaf(sj) && std::find(wl.begin(), wl.end(), sj) == wl.end()) wl.push_back(sj);
        }
    }
    return g;
}

// Simple cycles, each weighted by the product of its edge multiplicities.
// Every cycle is enumerated once from its smallest vertex index.
inline std::vector<std::vector<std::string>> simple_cycles(const DepGraph& g, long* weighted = nullptr) {
    const auto& vs = g.vertices;
    std::map<std::string, int> idx;
    for (std::size_t i = 0; i < vs.size(); ++i) idx[vs[i]] = (int)i;
    std::vector<std::vector<std::pair<int, int>>> succ(vs.size());
    for (auto& [e, k] : g.edges) succ[idx[e.first]].push_back({idx[e.second], k});
    std::vector<std::vector<std::string>> out;
    long total = 0;
    std::vector<int> path;
    std::vector<bool> on(vs.size(), false);
    std::function<void(int, int, long)> dfs = [&](int start, int v, long mult) {
        for (auto [w, k] : succ[v]) {
            if (w == start) {
                std::vector<std::string> cyc;
                for (int p : path) cyc.push_back(vs[p]);
                out.push_back(cyc);
                total += mult * k;
            } else if (w > start && !on[w]) {
                on[w] = true;
                path.push_back(w);
                dfs(start, w, mult * k);
                path.pop_back();
                on[w] = false;
            }
        }
    };
    for (int s = 0; s < (int)vs.size(); ++s) {
        path = {s};
        on[s] = true;
        dfs(s, s, 1);
        on[s] = false;
    }
    if (weighted) *weighted = total;
    return out;
}

inline long cycle_count(const DepGraph& g) {
    long n = 0;
    simple_cycles(g, &n);
    return n;
}

namespace detail {

inline bool has_kind(const Expr& e, ExprNode::Kind k) {
    bool found = false;
    visit_expr(e, [&](const ExprNode& n) { found = found || n.kind == k; });
    return found;
}

inline bool unit(i64 k) { return k == 1 || k == -1; }

}  // namespace detail

// Octagonal atoms (+-x +-y <= k), x = k, x mod p = r with constant p > 0,
// and affine equalities x = k1*y + k2 with a unit coefficient on one side.
inline bool is_periodic_atom(const ArithAtom& a) {
    for (auto k : {ExprNode::Max, ExprNode::Min, ExprNode::Len})
        if (detail::has_kind(a.lhs, k) || detail::has_kind(a.rhs, k)) return false;
    if (detail::has_kind(a.lhs, ExprNode::Mod) || detail::has_kind(a.rhs, ExprNode::Mod)) {
        if (a.kind != ArithAtom::Eq) return false;
        for (auto [m, r] : {std::pair{a.lhs, a.rhs}, std::pair{a.rhs, a.lhs}}) {
            if (m->kind == ExprNode::Mod && m->a->kind == ExprNode::Var && m->b->kind == ExprNode::Const && m->b->k > 0 &&
                r->kind == ExprNode::Const)
                return true;
        }
        return false;
    }
    auto sys = lower({a});
    if (sys.size() != 1) return false;
    const auto& rows = a.kind == ArithAtom::Eq ? sys[0].eqs : sys[0].geqs;
    if (rows.size() != 1) return rows.empty();
    const Lin& row = rows[0];
    std::vector<i64> cs;
    for (auto& [v, k] : row.coef)
        if (k != 0) cs.push_back(k);
    if (cs.size() > 2) return false;
    if (a.kind == ArithAtom::Leq) return std::all_of(cs.begin(), cs.end(), detail::unit);
    if (cs.size() <= 1) return cs.empty() || detail::unit(cs[0]);
    return detail::unit(cs[0]) || detail::unit(cs[1]);
}

inline bool is_periodic_arith(const std::vector<ArithAtom>& I) {
    return std::all_of(I.begin(), I.end(), is_periodic_atom);
}

enum class FragmentTag { ZeroSEA, OneSEA, General };

struct Fragment {
    FragmentTag tag = FragmentTag::General;
    std::string witness;  // why the formula is not in the smaller fragment
};

inline std::string to_string(FragmentTag t) {
    switch (t) {
        case FragmentTag::ZeroSEA: return "0SEA";
        case FragmentTag::OneSEA: return "1SEA";
        case FragmentTag::General: return "general";
    }
    return "?";
}

inline std::string cycle_text(const std::vector<std::string>& c) {
    std::string s;
    for (auto& v : c) s += v + " -> ";
    return s + c[0];
}

// The zero-cycle fragment puts no condition on the arithmetic part; the
// one-cycle fragment additionally needs periodic arithmetic.
inline Fragment classify_fragment(const std::vector<Equation>& es, const std::vector<ArithAtom>& I) {
    std::string nonlinear, cyclic, multi, arith;
    for (std::size_t i = 0; i < es.size() && nonlinear.empty(); ++i)
        for (auto& [v, k] : occurrences(es[i]))
            if (k > 1) {
                nonlinear = "equation " + std::to_string(i + 1) + " is not linear: " + v + " occurs " + std::to_string(k) + " times";
                break;
            }
    std::set<std::string> vars;
    for (auto& e : es) {
        term_vars(e.lhs, vars);
        term_vars(e.rhs, vars);
    }
    for (auto& v : vars) {
        DepGraph g = build_dep_graph(v, es);
        long n = 0;
        auto cycles = simple_cycles(g, &n);
        if (n >= 1 && cyclic.empty()) cyclic = "dependency graph of " + v + " has a cycle " + cycle_text(cycles[0]);
        if (n > 1 && multi.empty()) multi = "dependency graph of " + v + " has " + std::to_string(n) + " cycles";
    }
    for (auto& a : I)
        if (!is_periodic_atom(a)) {
            arith = "arithmetic atom " + to_string(a) + " is not periodic";
            break;
        }
    if (nonlinear.empty() && cyclic.empty()) return {FragmentTag::ZeroSEA, ""};
    std::string why0 = !nonlinear.empty() ? nonlinear : cyclic;
    if (multi.empty() && arith.empty()) return {FragmentTag::OneSEA, why0};
    return {FragmentTag::General, !multi.empty() ? multi : arith};
}

inline Fragment classify_fragment(const NormalizedFormula& f) { return classify_fragment(f.es, f.I); }

}  // namespace sea
