#pragma once

// Reference semantics and bounded brute force. Nothing here uses the DFA
// construction or the arithmetic solver, so it can check both.

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sea/arith.hpp"
#include "sea/ast.hpp"
#include "sea/problem.hpp"

namespace sea {

struct UnassignedVariable : Error {
    using Error::Error;
};

// Span table: m[i][j] iff w[i..j) in L(r).
inline std::vector<std::vector<bool>> regex_spans(const Regex& r, const std::string& w) {
    const int n = (int)w.size();
    std::vector<std::vector<bool>> m(n + 1, std::vector<bool>(n + 1, false));
    switch (r->kind) {
        case RegexNode::Empty: break;
        case RegexNode::Eps:
            for (int i = 0; i <= n; ++i) m[i][i] = true;
            break;
        case RegexNode::Lit:
            for (int i = 0; i < n; ++i) m[i][i + 1] = w[i] == r->ch;
            break;
        case RegexNode::Word: {
            int k = (int)r->word.size();
            for (int i = 0; i + k <= n; ++i) m[i][i + k] = w.compare(i, k, r->word) == 0;
            break;
        }
        case RegexNode::Union:
        case RegexNode::Inter: {
            auto a = regex_spans(r->a, w), b = regex_spans(r->b, w);
            for (int i = 0; i <= n; ++i)
                for (int j = i; j <= n; ++j)
                    m[i][j] = r->kind == RegexNode::Union ? (a[i][j] || b[i][j]) : (a[i][j] && b[i][j]);
            break;
        }
        case RegexNode::Comp: {
            auto a = regex_spans(r->a, w);
            for (int i = 0; i <= n; ++i)
                for (int j = i; j <= n; ++j) m[i][j] = !a[i][j];
            break;
        }
        case RegexNode::Cat: {
            auto a = regex_spans(r->a, w), b = regex_spans(r->b, w);
            for (int i = 0; i <= n; ++i)
                for (int j = i; j <= n; ++j)
                    for (int k = i; k <= j && !m[i][j]; ++k) m[i][j] = a[i][k] && b[k][j];
            break;
        }
        case RegexNode::Star: {
            auto a = regex_spans(r->a, w);
            for (int len = 0; len <= n; ++len)
                for (int i = 0; i + len <= n; ++i) {
                    int j = i + len;
                    if (len == 0) {
                        m[i][j] = true;
                        continue;
                    }
                    for (int k = i + 1; k <= j && !m[i][j]; ++k) m[i][j] = a[i][k] && m[k][j];
                }
            break;
        }
    }
    return m;
}

inline bool regex_match(const Regex& r, const std::string& w) { return regex_spans(r, w)[0][w.size()]; }

// Brzozowski derivatives with similarity normalization; used to enumerate
// the lengths of L(r) without building automata.
namespace deriv {

inline std::string key(const Regex& r) {
    switch (r->kind) {
        case RegexNode::Empty: return "0";
        case RegexNode::Eps: return "1";
        case RegexNode::Lit: return std::string("'") + r->ch;
        case RegexNode::Word: return "\"" + r->word + "\"";
        case RegexNode::Cat: return "C(" + key(r->a) + "," + key(r->b) + ")";
        case RegexNode::Union: return "U(" + key(r->a) + "," + key(r->b) + ")";
        case RegexNode::Inter: return "I(" + key(r->a) + "," + key(r->b) + ")";
        case RegexNode::Comp: return "N(" + key(r->a) + ")";
        case RegexNode::Star: return "S(" + key(r->a) + ")";
    }
    return "?";
}

inline Regex cat(Regex a, Regex b) {
    if (a->kind == RegexNode::Empty || b->kind == RegexNode::Empty) return re::empty();
    if (a->kind == RegexNode::Eps) return b;
    if (b->kind == RegexNode::Eps) return a;
    return re::cat(a, b);
}

// Flatten, sort and dedupe the operands of an associative-commutative-idempotent node.
inline Regex aci(RegexNode::Kind k, const Regex& a, const Regex& b) {
    std::map<std::string, Regex> ops;
    std::function<void(const Regex&)> add = [&](const Regex& r) {
        if (r->kind == k)
            add(r->a), add(r->b);
        else
            ops.emplace(key(r), r);
    };
    add(a);
    add(b);
    if (k == RegexNode::Union) {
        ops.erase("0");
        if (ops.empty()) return re::empty();
    } else if (ops.count("0")) {
        return re::empty();
    }
    Regex out;
    for (auto& [s, r] : ops) out = out ? re::mk({k, 0, {}, out, r}) : r;
    return out;
}

inline bool nullable(const Regex& r) {
    switch (r->kind) {
        case RegexNode::Empty: return false;
        case RegexNode::Eps: return true;
        case RegexNode::Lit: return false;
        case RegexNode::Word: return r->word.empty();
        case RegexNode::Cat: return nullable(r->a) && nullable(r->b);
        case RegexNode::Union: return nullable(r->a) || nullable(r->b);
        case RegexNode::Inter: return nullable(r->a) && nullable(r->b);
        case RegexNode::Comp: return !nullable(r->a);
        case RegexNode::Star: return true;
    }
    return false;
}

inline Regex d(const Regex& r, char c) {
    switch (r->kind) {
        case RegexNode::Empty:
        case RegexNode::Eps: return re::empty();
        case RegexNode::Lit: return r->ch == c ? re::eps() : re::empty();
        case RegexNode::Word:
            if (r->word.empty() || r->word[0] != c) return re::empty();
            return r->word.size() == 1 ? re::eps() : re::word(r->word.substr(1));
        case RegexNode::Cat: {
            Regex left = cat(d(r->a, c), r->b);
            return nullable(r->a) ? aci(RegexNode::Union, left, d(r->b, c)) : left;
        }
        case RegexNode::Union: return aci(RegexNode::Union, d(r->a, c), d(r->b, c));
        case RegexNode::Inter: return aci(RegexNode::Inter, d(r->a, c), d(r->b, c));
        case RegexNode::Comp: {
            Regex x = d(r->a, c);
            if (x->kind == RegexNode::Comp) return x->a;
            return re::comp(x);
        }
        case RegexNode::Star: return cat(d(r->a, c), r);
    }
    return re::empty();
}

}  // namespace deriv

// has[L] iff L(r) contains a word of length L, for L <= maxlen.
inline std::vector<bool> regex_lengths_upto(const Regex& r, const std::string& sigma, int maxlen) {
    std::vector<bool> has;
    std::map<std::string, Regex> layer{{deriv::key(r), r}};
    for (int L = 0; L <= maxlen; ++L) {
        bool hit = false;
        for (auto& [k, x] : layer) hit = hit || deriv::nullable(x);
        has.push_back(hit);
        std::map<std::string, Regex> next;
        for (auto& [k, x] : layer)
            for (char c : sigma) {
                Regex y = deriv::d(x, c);
                next.emplace(deriv::key(y), y);
            }
        layer = std::move(next);
    }
    return has;
}

// ---------------------------------------------------------------- evaluation

inline std::string eval_term(const Term& t, const Model& m) {
    std::string w;
    for (const Atom& a : t) {
        if (a.kind == Atom::Const) {
            w += a.ch;
            continue;
        }
        auto it = m.words.find(a.var);
        if (it == m.words.end()) throw UnassignedVariable("unassigned string variable " + a.var);
        if (a.kind == Atom::Str) {
            auto n = m.ints.find(a.len);
            if (n == m.ints.end()) throw UnassignedVariable("unassigned integer variable " + a.len);
        }
        w += it->second;
    }
    return w;
}

inline bool eval_arith(const ArithAtom& a, const Model& m) {
    for (auto& v : int_vars(std::vector<ArithAtom>{a}))
        if (!m.ints.count(v)) throw UnassignedVariable("unassigned integer variable " + v);
    return eval(a, m.ints, [&](const std::string& s) -> i64 {
        auto it = m.words.find(s);
        if (it == m.words.end()) throw UnassignedVariable("unassigned string variable " + s);
        return (i64)it->second.size();
    });
}

inline bool eval_formula(const Formula& f, const Model& m) {
    switch (f->kind) {
        case FNode::True: return true;
        case FNode::False: return false;
        case FNode::WordEq: return eval_term(f->lhs, m) == eval_term(f->rhs, m);
        case FNode::InRe: return regex_match(f->re, eval_term(f->lhs, m));
        case FNode::Arith: return eval_arith(f->atom, m);
        case FNode::Not: return !eval_formula(f->kids[0], m);
        case FNode::And:
            for (auto& k : f->kids)
                if (!eval_formula(k, m)) return false;
            return true;
        case FNode::Or:
            for (auto& k : f->kids)
                if (eval_formula(k, m)) return true;
            return false;
    }
    return false;
}

inline bool eval_formula(const Problem& p, const Model& m) { return eval_formula(p.formula(), m); }

// ---------------------------------------------------------------- brute force

struct Bound {
    int max_len = 0;
    i64 max_abs_int = 0;
};

namespace detail {

inline void formula_vars(const Formula& f, std::set<std::string>& strs, std::set<std::string>& ints) {
    for (const Term* t : {&f->lhs, &f->rhs}) term_vars(*t, strs);
    if (f->kind == FNode::Arith) {
        for (const Expr* e : {&f->atom.lhs, &f->atom.rhs})
            visit_expr(*e, [&](const ExprNode& n) {
                if (n.kind == ExprNode::Var) ints.insert(n.name);
                if (n.kind == ExprNode::Len) strs.insert(n.name);
            });
    }
    for (auto& k : f->kids) formula_vars(k, strs, ints);
}

inline void top_conjuncts(const Formula& f, std::vector<Formula>& out) {
    if (f->kind == FNode::And)
        for (auto& k : f->kids) top_conjuncts(k, out);
    else
        out.push_back(f);
}

inline bool length_only(const Expr& e) {
    bool ok = true;
    visit_expr(e, [&](const ExprNode& n) { ok = ok && n.kind != ExprNode::Var; });
    return ok;
}

inline std::vector<std::vector<std::string>> words_by_length(const std::string& sigma, int max_len) {
    std::vector<std::vector<std::string>> out{{""}};
    for (int L = 1; L <= max_len; ++L) {
        std::vector<std::string> next;
        for (auto& w : out.back())
            for (char c : sigma) next.push_back(w + c);
        out.push_back(std::move(next));
    }
    return out;
}

}  // namespace detail

// Every assignment of `vars` with words of length <= bound over sigma that
// satisfies all equations, as word tuples in the order of `vars`.
inline std::set<std::vector<std::string>> equation_solutions(const std::vector<Equation>& es,
                                                             const std::vector<std::string>& vars,
                                                             const std::string& sigma, int bound) {
    std::vector<std::string> pool;
    for (auto& layer : detail::words_by_length(sigma, bound)) pool.insert(pool.end(), layer.begin(), layer.end());
    std::set<std::vector<std::string>> out;
    std::vector<std::size_t> pick(vars.size(), 0);
    Model m;
    for (;;) {
        for (std::size_t i = 0; i < vars.size(); ++i) m.words[vars[i]] = pool[pick[i]];
        bool ok = std::all_of(es.begin(), es.end(),
                              [&](const Equation& e) { return eval_term(e.lhs, m) == eval_term(e.rhs, m); });
        if (ok) {
            std::vector<std::string> tuple;
            for (auto& v : vars) tuple.push_back(m.words[v]);
            out.insert(std::move(tuple));
        }
        std::size_t i = 0;
        while (i < pick.size() && ++pick[i] == pool.size()) pick[i++] = 0;
        if (i == pick.size()) break;
    }
    return out;
}

// First model in the order: total string length, then length vector, then
// words lexicographically (first variable most significant), then integers
// from -b to b. Integer variables pinned by a top-level `x = <lengths>`
// are computed instead of enumerated.
inline std::optional<Model> brute_force_solve(const Problem& p, Bound b) {
    Formula f = p.formula();
    std::set<std::string> strs, ints;
    detail::formula_vars(f, strs, ints);
    std::vector<Formula> tops;
    detail::top_conjuncts(f, tops);

    std::map<std::string, Expr> derived;
    std::vector<Formula> length_checks;
    for (auto& t : tops) {
        if (t->kind == FNode::WordEq) {
            length_checks.push_back(t);
            continue;
        }
        if (t->kind != FNode::Arith) continue;
        const ArithAtom& a = t->atom;
        if (detail::length_only(a.lhs) && detail::length_only(a.rhs)) {
            length_checks.push_back(t);
            continue;
        }
        if (a.kind != ArithAtom::Eq) continue;
        for (auto [x, e] : {std::pair{a.lhs, a.rhs}, std::pair{a.rhs, a.lhs}}) {
            if (x->kind == ExprNode::Var && detail::length_only(e) && !derived.count(x->name)) {
                derived[x->name] = e;
                break;
            }
        }
    }
    std::vector<std::string> svars(strs.begin(), strs.end());
    std::vector<std::string> ivars;
    for (auto& v : ints)
        if (!derived.count(v)) ivars.push_back(v);

    const std::string sigma = alphabet(p);
    auto words = detail::words_by_length(sigma, b.max_len);
    Model m;
    for (auto& v : p.str_vars) m.words[v] = "";
    for (auto& v : p.int_vars) m.ints[v] = 0;

    auto len_of = [&](const std::string& s) -> i64 { return (i64)m.words.at(s).size(); };
    auto length_ok = [&](const std::vector<int>& lens) {
        for (std::size_t i = 0; i < svars.size(); ++i) m.words[svars[i]] = std::string(lens[i], '?');
        for (auto& t : length_checks) {
            if (t->kind == FNode::WordEq) {
                if (eval_term(t->lhs, m).size() != eval_term(t->rhs, m).size()) return false;
            } else if (!eval(t->atom, {}, len_of)) {
                return false;
            }
        }
        return true;
    };

    std::optional<Model> found;
    std::function<bool(std::size_t)> ints_rec = [&](std::size_t i) -> bool {
        if (i == ivars.size()) {
            for (auto& [x, e] : derived) m.ints[x] = eval(e, {}, len_of);
            if (eval_formula(f, m)) {
                found = m;
                return true;
            }
            return false;
        }
        for (i64 v = -b.max_abs_int; v <= b.max_abs_int; ++v) {
            m.ints[ivars[i]] = v;
            if (ints_rec(i + 1)) return true;
        }
        return false;
    };
    std::vector<int> lens(svars.size(), 0);
    std::function<bool(std::size_t)> words_rec = [&](std::size_t i) -> bool {
        if (i == svars.size()) return ints_rec(0);
        for (auto& w : words[lens[i]]) {
            m.words[svars[i]] = w;
            if (words_rec(i + 1)) return true;
        }
        return false;
    };
    std::function<bool(std::size_t, int)> lens_rec = [&](std::size_t i, int left) -> bool {
        if (i + 1 >= svars.size()) {
            if (svars.empty()) return left == 0 && ints_rec(0);
            if (left > b.max_len) return false;
            lens[i] = left;
            return length_ok(lens) && words_rec(0);
        }
        for (int L = 0; L <= std::min(left, b.max_len); ++L) {
            lens[i] = L;
            if (lens_rec(i + 1, left - L)) return true;
        }
        return false;
    };
    int total_max = b.max_len * (int)std::max<std::size_t>(svars.size(), 1);
    for (int total = 0; total <= (svars.empty() ? 0 : total_max); ++total)
        if (lens_rec(0, total)) return found;
    return std::nullopt;
}

// ---------------------------------------------------------------- normalized formulas

// Enumerates every model of a normalized formula whose original string
// variables have words of length <= bound. Integers bound to lengths are
// computed; other integer variables range over [-bound, bound]. The
// callback receives the model restricted to original variables and
// non-length integers.
inline void enumerate_normalized(const NormalizedFormula& f, int bound, const std::function<void(const Model&)>& cb) {
    std::map<std::string, const SubtermConstraint*> def;
    for (auto& c : f.lam)
        if (!def.count(c.a)) def[c.a] = &c;
    std::set<std::string> all = free_string_vars(f);
    for (auto& v : f.orig_vars) all.insert(v);
    for (auto& [s, n] : f.len_of) all.insert(s);
    std::vector<std::string> frees;
    for (auto& v : all)
        if (!def.count(v)) frees.push_back(v);

    std::set<std::string> len_ints;
    for (auto& [s, n] : f.len_of) len_ints.insert(n);
    for (auto& e : f.es)
        for (const Term* t : {&e.lhs, &e.rhs})
            for (const Atom& a : *t)
                if (a.kind == Atom::Str) len_ints.insert(a.len);
    std::vector<std::string> user_ints;
    for (auto& v : int_vars(f.I))
        if (!len_ints.count(v)) user_ints.push_back(v);

    const std::string sigma = f.sigma;
    auto words = detail::words_by_length(sigma, bound);
    std::map<std::string, std::string> w;

    std::function<std::string(const std::string&, int)> value = [&](const std::string& v, int depth) -> std::string {
        if (depth > 10000) throw InternalError("cyclic subterm constraints");
        auto it = def.find(v);
        if (it == def.end()) return w.at(v);
        const SubtermConstraint& c = *it->second;
        switch (c.kind) {
            case SubtermConstraint::EpsBind: return "";
            case SubtermConstraint::Alias: return value(c.b, depth + 1);
            case SubtermConstraint::CharPrefix: return std::string(1, c.ch) + value(c.b, depth + 1);
            case SubtermConstraint::Split: return value(c.b, depth + 1) + value(c.c, depth + 1);
        }
        return "";
    };

    Model m;
    auto check = [&]() {
        m.words.clear();
        m.ints.clear();
        for (auto& v : all) m.words[v] = value(v, 0);
        for (auto& v : f.orig_vars)
            if ((int)m.words[v].size() > bound) return;
        for (auto& [s, n] : f.len_of) {
            i64 L = (i64)m.words[s].size();
            auto it = m.ints.find(n);
            if (it != m.ints.end() && it->second != L) return;
            m.ints[n] = L;
        }
        for (auto& e : f.es)
            for (const Term* t : {&e.lhs, &e.rhs})
                for (const Atom& a : *t) {
                    if (a.kind != Atom::Str) continue;
                    i64 L = (i64)m.words[a.var].size();
                    auto it = m.ints.find(a.len);
                    if (it != m.ints.end() && it->second != L) return;
                    m.ints[a.len] = L;
                }
        for (auto& c : f.lam) {
            const std::string& a = m.words[c.a];
            bool ok = true;
            switch (c.kind) {
                case SubtermConstraint::EpsBind: ok = a.empty(); break;
                case SubtermConstraint::Alias: ok = a == m.words[c.b]; break;
                case SubtermConstraint::CharPrefix: ok = a == std::string(1, c.ch) + m.words[c.b]; break;
                case SubtermConstraint::Split: ok = a == m.words[c.b] + m.words[c.c]; break;
            }
            if (!ok) return;
        }
        for (auto& e : f.es)
            if (eval_term(e.lhs, m) != eval_term(e.rhs, m)) return;
        for (auto& mem : f.ups)
            if (!regex_match(mem.re, m.words[mem.var])) return;
        std::function<void(std::size_t)> ints_rec = [&](std::size_t i) {
            if (i == user_ints.size()) {
                for (auto& a : f.I)
                    if (!eval(a, m.ints)) return;
                Model out;
                for (auto& v : f.orig_vars) out.words[v] = m.words[v];
                for (auto& v : user_ints) out.ints[v] = m.ints[v];
                cb(out);
                return;
            }
            for (i64 v = -bound; v <= bound; ++v) {
                m.ints[user_ints[i]] = v;
                ints_rec(i + 1);
            }
        };
        ints_rec(0);
    };
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == frees.size()) {
            check();
            return;
        }
        for (int L = 0; L <= bound; ++L)
            for (auto& x : words[L]) {
                w[frees[i]] = x;
                rec(i + 1);
            }
    };
    rec(0);
}

}  // namespace sea
