#pragma once

// Quantifier-free linear integer arithmetic with mod-by-constant, max and
// min. Decision procedure: case-split lowering to pure linear systems, then
// the Omega test (exact equality elimination, real/dark shadows, splinters).

#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "sea/ast.hpp"

namespace sea {

struct NonConstantDivisor : Error {
    using Error::Error;
};
struct ArithOverflow : Error {
    ArithOverflow() : Error("integer overflow in exact arithmetic") {}
};

namespace num {
inline i64 add(i64 a, i64 b) {
    i64 r;
    if (__builtin_add_overflow(a, b, &r)) throw ArithOverflow();
    return r;
}
inline i64 sub(i64 a, i64 b) {
    i64 r;
    if (__builtin_sub_overflow(a, b, &r)) throw ArithOverflow();
    return r;
}
inline i64 mul(i64 a, i64 b) {
    i64 r;
    if (__builtin_mul_overflow(a, b, &r)) throw ArithOverflow();
    return r;
}
inline i64 floor_div(i64 a, i64 b) {
    i64 q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
    return q;
}
inline i64 ceil_div(i64 a, i64 b) { return -floor_div(-a, b); }
// Euclidean remainder, 0 <= r < p for p > 0.
inline i64 emod(i64 a, i64 p) {
    i64 r = a % p;
    return r < 0 ? r + p : r;
}
}  // namespace num

// Exact evaluation. `len` resolves |s| for Len nodes (may be empty if none occur).
inline i64 eval(const Expr& e, const std::map<std::string, i64>& ints,
                const std::function<i64(const std::string&)>& len = {}) {
    switch (e->kind) {
        case ExprNode::Const: return e->k;
        case ExprNode::Var: {
            auto it = ints.find(e->name);
            if (it == ints.end()) throw Error("unassigned integer variable " + e->name);
            return it->second;
        }
        case ExprNode::Len:
            if (!len) throw Error("unresolved length of " + e->name);
            return len(e->name);
        case ExprNode::Scale: return num::mul(e->k, eval(e->a, ints, len));
        case ExprNode::Neg: return num::sub(0, eval(e->a, ints, len));
        case ExprNode::Add: return num::add(eval(e->a, ints, len), eval(e->b, ints, len));
        case ExprNode::Max: return std::max(eval(e->a, ints, len), eval(e->b, ints, len));
        case ExprNode::Min: return std::min(eval(e->a, ints, len), eval(e->b, ints, len));
        case ExprNode::Mod: {
            i64 p = eval(e->b, ints, len);
            if (p <= 0) throw NonConstantDivisor("mod by non-positive value");
            return num::emod(eval(e->a, ints, len), p);
        }
    }
    throw InternalError("bad expression");
}

inline bool eval(const ArithAtom& a, const std::map<std::string, i64>& ints,
                 const std::function<i64(const std::string&)>& len = {}) {
    i64 l = eval(a.lhs, ints, len), r = eval(a.rhs, ints, len);
    return a.kind == ArithAtom::Eq ? l == r : l <= r;
}

// ---------------------------------------------------------------- lowering

struct Lin {
    std::map<std::string, i64> coef;
    i64 c = 0;

    Lin& operator+=(const Lin& o) {
        for (auto& [v, k] : o.coef) {
            i64 s = num::add(coef[v], k);
            if (s == 0)
                coef.erase(v);
            else
                coef[v] = s;
        }
        c = num::add(c, o.c);
        return *this;
    }
    Lin scaled(i64 f) const {
        Lin r;
        if (f == 0) return r;
        for (auto& [v, k] : coef) r.coef[v] = num::mul(k, f);
        r.c = num::mul(c, f);
        return r;
    }
    static Lin constant(i64 k) { return Lin{{}, k}; }
    static Lin var(const std::string& v) { return Lin{{{v, 1}}, 0}; }
};

inline Lin operator-(Lin a, const Lin& b) {
    a += b.scaled(-1);
    return a;
}

// eqs: sum = 0, geqs: sum >= 0
struct LinearSystem {
    std::vector<Lin> eqs, geqs;
};

inline LinearSystem operator+(LinearSystem a, const LinearSystem& b) {
    a.eqs.insert(a.eqs.end(), b.eqs.begin(), b.eqs.end());
    a.geqs.insert(a.geqs.end(), b.geqs.begin(), b.geqs.end());
    return a;
}

namespace detail {

struct Alt {
    Lin value;
    LinearSystem side;
};

inline std::vector<Alt> linearize(const Expr& e, int& fresh) {
    auto combine = [](const std::vector<Alt>& xs, const std::vector<Alt>& ys, auto f) {
        std::vector<Alt> out;
        for (auto& x : xs)
            for (auto& y : ys) out.push_back({f(x.value, y.value), x.side + y.side});
        return out;
    };
    switch (e->kind) {
        case ExprNode::Const: return {{Lin::constant(e->k), {}}};
        case ExprNode::Var: return {{Lin::var(e->name), {}}};
        case ExprNode::Len: throw InternalError("length term |" + e->name + "| reached the arithmetic solver");
        case ExprNode::Scale:
        case ExprNode::Neg: {
            i64 f = e->kind == ExprNode::Neg ? -1 : e->k;
            auto xs = linearize(e->a, fresh);
            for (auto& x : xs) x.value = x.value.scaled(f);
            return xs;
        }
        case ExprNode::Add:
            return combine(linearize(e->a, fresh), linearize(e->b, fresh), [](Lin a, const Lin& b) {
                a += b;
                return a;
            });
        case ExprNode::Max:
        case ExprNode::Min: {
            bool is_max = e->kind == ExprNode::Max;
            std::string m = (is_max ? "#max" : "#min") + std::to_string(++fresh);
            std::vector<Alt> out;
            for (auto& x : linearize(e->a, fresh))
                for (auto& y : linearize(e->b, fresh)) {
                    LinearSystem base = x.side + y.side;
                    // case m = x: x >= y for max, x <= y for min
                    LinearSystem s1 = base, s2 = base;
                    s1.eqs.push_back(Lin::var(m) - x.value);
                    s1.geqs.push_back(is_max ? x.value - y.value : y.value - x.value);
                    s2.eqs.push_back(Lin::var(m) - y.value);
                    s2.geqs.push_back(is_max ? y.value - x.value : x.value - y.value);
                    out.push_back({Lin::var(m), s1});
                    out.push_back({Lin::var(m), s2});
                }
            return out;
        }
        case ExprNode::Mod: {
            std::vector<Alt> out;
            for (auto& d : linearize(e->b, fresh)) {
                if (!d.value.coef.empty()) throw NonConstantDivisor("mod divisor " + to_string(e->b) + " is not a constant");
                if (d.value.c <= 0) throw NonConstantDivisor("mod divisor must be positive");
            }
            i64 p = linearize(e->b, fresh)[0].value.c;
            int id = ++fresh;
            std::string q = "#q" + std::to_string(id), r = "#r" + std::to_string(id);
            for (auto& x : linearize(e->a, fresh)) {
                LinearSystem s = x.side;
                // x = p*q + r, 0 <= r <= p-1
                Lin def = x.value - Lin::var(q).scaled(p);
                def += Lin::var(r).scaled(-1);
                s.eqs.push_back(def);
                s.geqs.push_back(Lin::var(r));
                s.geqs.push_back(Lin::constant(p - 1) - Lin::var(r));
                out.push_back({Lin::var(r), s});
            }
            return out;
        }
    }
    throw InternalError("bad expression");
}

}  // namespace detail

// Eliminate max/min/mod; the result is a disjunction of pure linear systems.
inline std::vector<LinearSystem> lower(const std::vector<ArithAtom>& atoms, int& fresh) {
    std::vector<LinearSystem> acc{LinearSystem{}};
    for (const ArithAtom& a : atoms) {
        std::vector<LinearSystem> next;
        auto ls = detail::linearize(a.lhs, fresh);
        auto rs = detail::linearize(a.rhs, fresh);
        std::vector<LinearSystem> cases;
        for (auto& l : ls)
            for (auto& r : rs) {
                LinearSystem s = l.side + r.side;
                if (a.kind == ArithAtom::Eq)
                    s.eqs.push_back(l.value - r.value);
                else
                    s.geqs.push_back(r.value - l.value);
                cases.push_back(std::move(s));
            }
        if (cases.size() == 1) {
            for (auto& x : acc) {
                x.eqs.insert(x.eqs.end(), cases[0].eqs.begin(), cases[0].eqs.end());
                x.geqs.insert(x.geqs.end(), cases[0].geqs.begin(), cases[0].geqs.end());
            }
            continue;
        }
        for (auto& x : acc)
            for (auto& c : cases) next.push_back(x + c);
        acc = std::move(next);
    }
    return acc;
}

inline std::vector<LinearSystem> lower(const std::vector<ArithAtom>& atoms) {
    int fresh = 0;
    return lower(atoms, fresh);
}

// ---------------------------------------------------------------- Omega test

namespace omega {

struct Row {
    std::vector<i64> a;
    i64 c = 0;
};

struct Problem {
    int n = 0;
    std::vector<Row> eqs, geqs;  // a.x + c = 0 / a.x + c >= 0
};

using Sol = std::optional<std::vector<i64>>;

inline i64 row_gcd(const Row& r) {
    i64 g = 0;
    for (i64 x : r.a) g = std::gcd(g, x < 0 ? -x : x);
    return g;
}

inline i64 dot(const Row& r, const std::vector<i64>& m, int skip) {
    i64 s = r.c;
    for (int i = 0; i < (int)r.a.size(); ++i)
        if (i != skip && r.a[i]) s = num::add(s, num::mul(r.a[i], m[i]));
    return s;
}

// gcd-normalize, drop trivial rows, merge parallel inequalities.
inline bool normalize(Problem& p) {
    std::vector<Row> eqs;
    for (Row& r : p.eqs) {
        i64 g = row_gcd(r);
        if (g == 0) {
            if (r.c != 0) return false;
            continue;
        }
        if (r.c % g != 0) return false;
        for (i64& x : r.a) x /= g;
        r.c /= g;
        auto first = std::find_if(r.a.begin(), r.a.end(), [](i64 x) { return x != 0; });
        if (*first < 0) {
            for (i64& x : r.a) x = -x;
            r.c = -r.c;
        }
        eqs.push_back(std::move(r));
    }
    std::map<std::vector<i64>, i64> tight;
    for (Row& r : p.geqs) {
        i64 g = row_gcd(r);
        if (g == 0) {
            if (r.c < 0) return false;
            continue;
        }
        for (i64& x : r.a) x /= g;
        r.c = num::floor_div(r.c, g);
        auto it = tight.find(r.a);
        if (it == tight.end())
            tight.emplace(r.a, r.c);
        else
            it->second = std::min(it->second, r.c);
    }
    std::vector<Row> geqs;
    std::set<std::vector<i64>> done;
    for (auto& [a, c] : tight) {
        if (done.count(a)) continue;
        std::vector<i64> na(a.size());
        for (std::size_t i = 0; i < a.size(); ++i) na[i] = -a[i];
        auto it = tight.find(na);
        if (it != tight.end()) {
            // a.x >= -c and a.x <= c2
            i64 lo = -c, hi = it->second;
            if (lo > hi) return false;
            done.insert(na);
            if (lo == hi) {
                Row e{a, c};
                auto first = std::find_if(e.a.begin(), e.a.end(), [](i64 x) { return x != 0; });
                if (*first < 0) {
                    for (i64& x : e.a) x = -x;
                    e.c = -e.c;
                }
                eqs.push_back(e);
                continue;
            }
            geqs.push_back(Row{na, it->second});
        }
        geqs.push_back(Row{a, c});
    }
    p.eqs = std::move(eqs);
    p.geqs = std::move(geqs);
    return true;
}

// x_k := s.x + s0 in every row
inline void substitute(Problem& p, int k, const Row& s) {
    auto apply = [&](Row& r) {
        i64 f = r.a[k];
        if (!f) return;
        r.a[k] = 0;
        for (int i = 0; i < p.n; ++i)
            if (s.a[i]) r.a[i] = num::add(r.a[i], num::mul(f, s.a[i]));
        r.c = num::add(r.c, num::mul(f, s.c));
    };
    for (Row& r : p.eqs) apply(r);
    for (Row& r : p.geqs) apply(r);
}

inline i64 mod_hat(i64 a, i64 m) { return num::sub(a, num::mul(m, num::floor_div(num::add(num::mul(2, a), m), num::mul(2, m)))); }

inline Sol solve(Problem p);

inline Sol eliminate_equality(Problem p) {
    Row e = p.eqs.back();
    p.eqs.pop_back();
    int k = -1;
    for (int i = 0; i < p.n; ++i)
        if (e.a[i] == 1 || e.a[i] == -1) {
            k = i;
            break;
        }
    if (k >= 0) {
        Row s{std::vector<i64>(p.n, 0), num::mul(-e.a[k], e.c)};
        for (int i = 0; i < p.n; ++i)
            if (i != k) s.a[i] = num::mul(-e.a[k], e.a[i]);
        substitute(p, k, s);
        Sol m = solve(std::move(p));
        if (!m) return m;
        (*m)[k] = dot(s, *m, -1);
        return m;
    }
    // No unit coefficient: introduce sigma with m*sigma = sum of mod-hat terms.
    for (int i = 0; i < p.n; ++i)
        if (e.a[i] != 0 && (k < 0 || std::abs(e.a[i]) < std::abs(e.a[k]))) k = i;
    i64 m = std::abs(e.a[k]) + 1, sign = e.a[k] > 0 ? 1 : -1;
    int sigma = p.n++;
    for (Row& r : p.eqs) r.a.push_back(0);
    for (Row& r : p.geqs) r.a.push_back(0);
    e.a.push_back(0);
    Row s{std::vector<i64>(p.n, 0), num::mul(sign, mod_hat(e.c, m))};
    for (int i = 0; i < p.n - 1; ++i)
        if (i != k) s.a[i] = num::mul(sign, mod_hat(e.a[i], m));
    s.a[sigma] = num::mul(-sign, m);
    p.eqs.push_back(e);
    substitute(p, k, s);
    Sol sol = solve(std::move(p));
    if (!sol) return sol;
    (*sol)[k] = dot(s, *sol, -1);
    return sol;
}

inline Sol solve(Problem p) {
    if (!normalize(p)) return std::nullopt;
    if (!p.eqs.empty()) return eliminate_equality(std::move(p));
    if (p.geqs.empty()) return std::vector<i64>(p.n, 0);

    std::vector<int> lowers(p.n, 0), uppers(p.n, 0);
    std::vector<bool> unit_low(p.n, true), unit_up(p.n, true);
    for (const Row& r : p.geqs)
        for (int i = 0; i < p.n; ++i) {
            if (r.a[i] > 0) {
                ++lowers[i];
                if (r.a[i] != 1) unit_low[i] = false;
            } else if (r.a[i] < 0) {
                ++uppers[i];
                if (r.a[i] != -1) unit_up[i] = false;
            }
        }

    auto pick_value = [&](int x, const std::vector<Row>& rows, std::vector<i64>& m) {
        bool has_lo = false, has_hi = false;
        i64 lo = 0, hi = 0;
        for (const Row& r : rows) {
            if (!r.a[x]) continue;
            i64 rest = dot(r, m, x);
            if (r.a[x] > 0) {
                i64 b = num::ceil_div(-rest, r.a[x]);
                lo = has_lo ? std::max(lo, b) : b;
                has_lo = true;
            } else {
                i64 b = num::floor_div(rest, -r.a[x]);
                hi = has_hi ? std::min(hi, b) : b;
                has_hi = true;
            }
        }
        if (has_lo && has_hi && lo > hi) throw InternalError("omega: empty bound interval during back-substitution");
        m[x] = has_lo ? lo : (has_hi ? hi : 0);
    };

    // A variable bounded on one side only can always be satisfied last.
    for (int x = 0; x < p.n; ++x) {
        if ((lowers[x] > 0) != (uppers[x] > 0)) {
            std::vector<Row> mine;
            Problem q{p.n, {}, {}};
            for (Row& r : p.geqs) (r.a[x] ? mine : q.geqs).push_back(r);
            Sol m = solve(std::move(q));
            if (!m) return m;
            pick_value(x, mine, *m);
            return m;
        }
    }

    int best = -1;
    bool best_exact = false;
    long best_cost = 0;
    for (int x = 0; x < p.n; ++x) {
        if (!lowers[x]) continue;
        bool exact = unit_low[x] || unit_up[x];
        long cost = (long)lowers[x] * uppers[x];
        if (best < 0 || (exact && !best_exact) || (exact == best_exact && cost < best_cost)) {
            best = x;
            best_exact = exact;
            best_cost = cost;
        }
    }
    int x = best;
    std::vector<Row> lo, up, rest;
    for (Row& r : p.geqs) {
        if (r.a[x] > 0)
            lo.push_back(r);
        else if (r.a[x] < 0)
            up.push_back(r);
        else
            rest.push_back(r);
    }
    auto shadow = [&](bool dark) {
        Problem q{p.n, {}, rest};
        for (const Row& l : lo)
            for (const Row& u : up) {
                i64 a = l.a[x], b = -u.a[x];
                Row r{std::vector<i64>(p.n, 0), 0};
                for (int i = 0; i < p.n; ++i)
                    if (i != x) r.a[i] = num::add(num::mul(b, l.a[i]), num::mul(a, u.a[i]));
                r.c = num::add(num::mul(b, l.c), num::mul(a, u.c));
                if (dark) r.c = num::sub(r.c, num::mul(a - 1, b - 1));
                q.geqs.push_back(std::move(r));
            }
        return q;
    };
    std::vector<Row> bounds = lo;
    bounds.insert(bounds.end(), up.begin(), up.end());

    if (best_exact) {
        Sol m = solve(shadow(false));
        if (m) pick_value(x, bounds, *m);
        return m;
    }
    if (Sol m = solve(shadow(true))) {
        pick_value(x, bounds, *m);
        return m;
    }
    if (!solve(shadow(false))) return std::nullopt;
    i64 bmax = 0;
    for (const Row& u : up) bmax = std::max(bmax, -u.a[x]);
    for (const Row& l : lo) {
        i64 a = l.a[x];
        i64 jmax = num::floor_div(num::sub(num::sub(num::mul(a, bmax), a), bmax), bmax);
        for (i64 j = 0; j <= jmax; ++j) {
            Problem q = p;
            Row e = l;
            e.c = num::sub(e.c, j);
            q.eqs.push_back(e);
            if (Sol m = solve(std::move(q))) return m;
        }
    }
    return std::nullopt;
}

}  // namespace omega

// ---------------------------------------------------------------- public API

struct ArithResult {
    bool sat = false;
    std::map<std::string, i64> model;  // fresh helper variables (#...) omitted
    explicit operator bool() const { return sat; }
};

namespace detail {

// v := d in l, sparse.
inline void substitute_lin(Lin& l, const std::string& v, const Lin& d) {
    auto it = l.coef.find(v);
    if (it == l.coef.end()) return;
    i64 f = it->second;
    l.coef.erase(it);
    l += d.scaled(f);
}

inline std::optional<std::map<std::string, i64>> solve_system(const LinearSystem& in) {
    // Equalities with a unit coefficient are eliminated on the sparse form
    // first: length bookkeeping produces long chains of them, and the dense
    // core would renormalize every row once per chain link.
    std::vector<Lin> rows = in.eqs;
    const std::size_t neq = rows.size();
    rows.insert(rows.end(), in.geqs.begin(), in.geqs.end());
    std::map<std::string, std::vector<std::size_t>> occ;  // may hold stale entries
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (auto& [v, k] : rows[r].coef) occ[v].push_back(r);
    std::vector<bool> gone(rows.size(), false);
    std::vector<std::pair<std::string, Lin>> defs;
    for (std::size_t i = 0; i < neq; ++i) {
        Lin e = rows[i];
        auto unit = std::find_if(e.coef.begin(), e.coef.end(), [](auto& kv) { return kv.second == 1 || kv.second == -1; });
        if (unit == e.coef.end()) continue;
        std::string v = unit->first;
        i64 f = unit->second;
        e.coef.erase(unit);
        Lin d = e.scaled(-f);
        gone[i] = true;
        std::vector<std::size_t> touched = std::move(occ[v]);
        occ.erase(v);
        for (std::size_t r : touched) {
            if (gone[r] || !rows[r].coef.count(v)) continue;
            substitute_lin(rows[r], v, d);
            for (auto& [w, k] : d.coef) occ[w].push_back(r);
        }
        defs.emplace_back(v, std::move(d));
    }
    std::vector<Lin> rest, geqs;
    for (std::size_t r = 0; r < rows.size(); ++r)
        if (!gone[r]) (r < neq ? rest : geqs).push_back(std::move(rows[r]));
    LinearSystem s{{}, std::move(geqs)};
    std::map<std::string, int> idx;
    auto collect = [&](const Lin& l) {
        for (auto& [v, k] : l.coef) idx.emplace(v, 0);
    };
    for (auto& l : rest) collect(l);
    for (auto& l : s.geqs) collect(l);
    int n = 0;
    for (auto& [v, i] : idx) i = n++;
    omega::Problem p{n, {}, {}};
    auto row = [&](const Lin& l) {
        omega::Row r{std::vector<i64>(n, 0), l.c};
        for (auto& [v, k] : l.coef) r.a[idx[v]] = k;
        return r;
    };
    for (auto& l : rest) p.eqs.push_back(row(l));
    for (auto& l : s.geqs) p.geqs.push_back(row(l));
    auto m = omega::solve(std::move(p));
    if (!m) return std::nullopt;
    std::map<std::string, i64> val;
    for (auto& [v, i] : idx) val[v] = (*m)[i];
    for (auto it = defs.rbegin(); it != defs.rend(); ++it) {
        i64 x = it->second.c;
        for (auto& [w, k] : it->second.coef) x = num::add(x, num::mul(k, val.emplace(w, 0).first->second));
        val[it->first] = x;
    }
    std::map<std::string, i64> out;
    for (auto& [v, x] : val)
        if (v[0] != '#') out[v] = x;
    return out;
}

// Conjunction of factors, each factor a disjunction of systems.
inline ArithResult solve_product(const std::vector<std::vector<LinearSystem>>& factors) {
    for (auto& f : factors)
        if (f.empty()) return {};
    std::vector<std::size_t> pick(factors.size(), 0);
    for (;;) {
        LinearSystem s;
        for (std::size_t i = 0; i < factors.size(); ++i) s = s + factors[i][pick[i]];
        if (auto m = solve_system(s)) return {true, *m};
        std::size_t i = 0;
        while (i < factors.size() && ++pick[i] == factors[i].size()) pick[i++] = 0;
        if (i == factors.size()) return {};
    }
}

}  // namespace detail

using Disjunction = std::vector<std::vector<ArithAtom>>;

inline ArithResult arith_sat(const std::vector<ArithAtom>& atoms, const std::vector<Disjunction>& extra = {}) {
    int fresh = 0;
    std::vector<std::vector<LinearSystem>> factors{lower(atoms, fresh)};
    for (const Disjunction& d : extra) {
        std::vector<LinearSystem> alts;
        for (const auto& conj : d)
            for (auto& s : lower(conj, fresh)) alts.push_back(std::move(s));
        factors.push_back(std::move(alts));
    }
    ArithResult r = detail::solve_product(factors);
    if (r.sat) {
        // Variables that occur only under a pruned case split still need a value.
        for (const auto& v : int_vars(atoms)) r.model.emplace(v, 0);
    }
    return r;
}

// Negation of one atom as a disjunction of atoms.
inline std::vector<ArithAtom> negate(const ArithAtom& a) {
    if (a.kind == ArithAtom::Leq) return {mk_lt(a.rhs, a.lhs)};
    return {mk_lt(a.lhs, a.rhs), mk_lt(a.rhs, a.lhs)};
}

inline bool arith_implies(const std::vector<ArithAtom>& hyp, const std::vector<ArithAtom>& concl) {
    int fresh = 0;
    auto base = lower(hyp, fresh);
    for (const ArithAtom& c : concl) {
        for (const ArithAtom& n : negate(c)) {
            auto neg = lower({n}, fresh);
            if (detail::solve_product({base, neg}).sat) return false;
        }
    }
    return true;
}

}  // namespace sea
