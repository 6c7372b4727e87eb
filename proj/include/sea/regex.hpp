#pragma once

#include <functional>
#include <map>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "sea/arith.hpp"
#include "sea/ast.hpp"

namespace sea {

struct LiteralOutsideAlphabet : Error {
    using Error::Error;
};

// Complete DFA over a sorted alphabet; states are renumbered canonically
// (BFS order from the start state) after minimization.
struct Dfa {
    std::string sigma;
    int start = 0;
    std::vector<std::vector<int>> delta;  // delta[state][symbol index]
    std::vector<bool> accept;

    int size() const { return (int)delta.size(); }
    int sym(char c) const {
        auto pos = sigma.find(c);
        return pos == std::string::npos ? -1 : (int)pos;
    }
    friend bool operator==(const Dfa&, const Dfa&) = default;
};

inline std::string normalize_alphabet(std::string s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return s;
}

inline bool accepts(const Dfa& d, const std::string& w) {
    int q = d.start;
    for (char c : w) {
        int i = d.sym(c);
        if (i < 0) return false;
        q = d.delta[q][i];
    }
    return d.accept[q];
}

inline int run(const Dfa& d, int q, const std::string& w) {
    for (char c : w) q = d.delta[q][d.sym(c)];
    return q;
}

// Moore partition refinement, then canonical renumbering.
inline Dfa minimize(const Dfa& d) {
    int k = (int)d.sigma.size();
    std::vector<int> order, seen(d.size(), -1);
    std::queue<int> bfs;
    bfs.push(d.start);
    seen[d.start] = 0;
    while (!bfs.empty()) {
        int q = bfs.front();
        bfs.pop();
        order.push_back(q);
        for (int c = 0; c < k; ++c)
            if (seen[d.delta[q][c]] < 0) {
                seen[d.delta[q][c]] = 0;
                bfs.push(d.delta[q][c]);
            }
    }
    std::vector<int> cls(d.size(), 0);
    for (int q : order) cls[q] = d.accept[q] ? 1 : 0;
    for (;;) {
        std::map<std::vector<int>, int> sig;
        std::vector<int> next(d.size(), 0);
        for (int q : order) {
            std::vector<int> s{cls[q]};
            for (int c = 0; c < k; ++c) s.push_back(cls[d.delta[q][c]]);
            auto it = sig.emplace(s, (int)sig.size()).first;
            next[q] = it->second;
        }
        std::set<int> before, after;
        for (int q : order) {
            before.insert(cls[q]);
            after.insert(next[q]);
        }
        cls = next;
        if (after.size() == before.size()) break;
    }
    // canonical numbering by BFS over classes
    std::map<int, int> id;
    std::vector<int> rep;
    std::queue<int> work;
    id[cls[d.start]] = 0;
    rep.push_back(d.start);
    work.push(d.start);
    while (!work.empty()) {
        int q = work.front();
        work.pop();
        for (int c = 0; c < k; ++c) {
            int t = d.delta[q][c];
            if (!id.count(cls[t])) {
                id[cls[t]] = (int)rep.size();
                rep.push_back(t);
                work.push(t);
            }
        }
    }
    Dfa out;
    out.sigma = d.sigma;
    out.start = 0;
    out.delta.assign(rep.size(), std::vector<int>(k, 0));
    out.accept.assign(rep.size(), false);
    for (std::size_t i = 0; i < rep.size(); ++i) {
        out.accept[i] = d.accept[rep[i]];
        for (int c = 0; c < k; ++c) out.delta[i][c] = id[cls[d.delta[rep[i]][c]]];
    }
    return out;
}

namespace detail {

// Generic subset-style construction: states are keys discovered by BFS.
template <class Key, class Step, class Acc>
Dfa explore(const std::string& sigma, Key start, Step step, Acc acc) {
    std::map<Key, int> id;
    std::vector<Key> keys;
    Dfa d;
    d.sigma = sigma;
    id[start] = 0;
    keys.push_back(start);
    for (std::size_t i = 0; i < keys.size(); ++i) {
        Key cur = keys[i];
        std::vector<int> row;
        for (std::size_t c = 0; c < sigma.size(); ++c) {
            Key nx = step(cur, (int)c);
            auto it = id.find(nx);
            if (it == id.end()) {
                it = id.emplace(nx, (int)keys.size()).first;
                keys.push_back(nx);
            }
            row.push_back(it->second);
        }
        d.delta.push_back(row);
        d.accept.push_back(acc(cur));
    }
    return minimize(d);
}

}  // namespace detail

inline Dfa product(const Dfa& a, const Dfa& b, bool conj) {
    using K = std::pair<int, int>;
    return detail::explore(
        a.sigma, K{a.start, b.start}, [&](K k, int c) { return K{a.delta[k.first][c], b.delta[k.second][c]}; },
        [&](K k) { return conj ? (a.accept[k.first] && b.accept[k.second]) : (a.accept[k.first] || b.accept[k.second]); });
}

inline Dfa intersect(const Dfa& a, const Dfa& b) { return product(a, b, true); }

inline Dfa complement(Dfa d) {
    for (std::size_t i = 0; i < d.accept.size(); ++i) d.accept[i] = !d.accept[i];
    return minimize(d);
}

inline Dfa compile(const Regex& r, const std::string& sigma_in) {
    const std::string sigma = normalize_alphabet(sigma_in);
    const int k = (int)sigma.size();
    auto chain = [&](const std::string& w) {
        // states 0..|w| along the word, |w|+1 is the sink
        Dfa d;
        d.sigma = sigma;
        int n = (int)w.size();
        d.delta.assign(n + 2, std::vector<int>(k, n + 1));
        d.accept.assign(n + 2, false);
        d.accept[n] = true;
        for (int i = 0; i < n; ++i) {
            auto pos = sigma.find(w[i]);
            if (pos == std::string::npos) throw LiteralOutsideAlphabet(std::string("literal '") + w[i] + "' is outside the alphabet");
            d.delta[i][pos] = i + 1;
        }
        return minimize(d);
    };
    switch (r->kind) {
        case RegexNode::Empty: {
            Dfa d;
            d.sigma = sigma;
            d.delta.assign(1, std::vector<int>(k, 0));
            d.accept.assign(1, false);
            return d;
        }
        case RegexNode::Eps: return chain("");
        case RegexNode::Lit: return chain(std::string(1, r->ch));
        case RegexNode::Word: return chain(r->word);
        case RegexNode::Union: return product(compile(r->a, sigma), compile(r->b, sigma), false);
        case RegexNode::Inter: return product(compile(r->a, sigma), compile(r->b, sigma), true);
        case RegexNode::Comp: return complement(compile(r->a, sigma));
        case RegexNode::Cat: {
            Dfa a = compile(r->a, sigma), b = compile(r->b, sigma);
            using K = std::pair<int, std::vector<int>>;
            auto close = [&](int qa, std::set<int> s) {
                if (a.accept[qa]) s.insert(b.start);
                return K{qa, std::vector<int>(s.begin(), s.end())};
            };
            return detail::explore(
                sigma, close(a.start, {}),
                [&](const K& key, int c) {
                    std::set<int> s;
                    for (int q : key.second) s.insert(b.delta[q][c]);
                    return close(a.delta[key.first][c], s);
                },
                [&](const K& key) {
                    for (int q : key.second)
                        if (b.accept[q]) return true;
                    return false;
                });
        }
        case RegexNode::Star: {
            Dfa a = compile(r->a, sigma);
            // key {-1} is the fresh accepting start state
            using K = std::vector<int>;
            return detail::explore(
                sigma, K{-1},
                [&](const K& key, int c) {
                    std::set<int> s;
                    for (int q : key) s.insert(a.delta[q < 0 ? a.start : q][c]);
                    bool fin = false;
                    for (int q : s) fin = fin || a.accept[q];
                    if (fin) s.insert(a.start);
                    return K(s.begin(), s.end());
                },
                [&](const K& key) {
                    if (key == K{-1}) return true;
                    for (int q : key)
                        if (a.accept[q]) return true;
                    return false;
                });
        }
    }
    throw InternalError("bad regex");
}

// ---------------------------------------------------------------- length sets

// {n | n in finite} union {offset + k*period | k >= 0} for each progression.
struct SemilinearLengthSet {
    std::vector<i64> finite;
    std::vector<std::pair<i64, i64>> progressions;  // (offset, period)

    bool contains(i64 n) const {
        if (n < 0) return false;
        if (std::find(finite.begin(), finite.end(), n) != finite.end()) return true;
        for (auto [m, p] : progressions)
            if (n >= m && (n - m) % p == 0) return true;
        return false;
    }
    bool empty() const { return finite.empty() && progressions.empty(); }
    friend bool operator==(const SemilinearLengthSet&, const SemilinearLengthSet&) = default;
};

inline std::string to_string(const SemilinearLengthSet& s) {
    std::string out = "{";
    bool first = true;
    for (i64 f : s.finite) {
        out += (first ? "" : ", ") + std::to_string(f);
        first = false;
    }
    for (auto [m, p] : s.progressions) {
        out += (first ? "" : ", ") + std::to_string(m) + "+" + std::to_string(p) + "k";
        first = false;
    }
    return out + "}";
}

// Lengths of walks from `start` that end in an accepting node of a finite
// graph. The reachable-set sequence is ultimately periodic; the result is
// put in normal form (minimal period, minimal threshold, offset-minimal
// progressions disjoint from the finite part).
inline SemilinearLengthSet walk_lengths(const std::vector<std::vector<int>>& succ, int start,
                                        const std::vector<bool>& accept) {
    const int n = (int)succ.size();
    std::map<std::vector<bool>, int> seen;
    std::vector<bool> chi;
    std::vector<bool> cur(n, false);
    cur[start] = true;
    int first = 0, period = 1;
    for (int step = 0;; ++step) {
        auto it = seen.find(cur);
        if (it != seen.end()) {
            first = it->second;
            period = step - it->second;
            break;
        }
        seen.emplace(cur, step);
        bool hit = false;
        for (int q = 0; q < n; ++q) hit = hit || (cur[q] && accept[q]);
        chi.push_back(hit);
        std::vector<bool> nx(n, false);
        for (int q = 0; q < n; ++q)
            if (cur[q])
                for (int t : succ[q]) nx[t] = true;
        cur = std::move(nx);
    }
    auto at = [&](i64 L) -> bool {
        if (L < (i64)chi.size()) return chi[L];
        return chi[first + (L - first) % period];
    };
    i64 P = period;
    for (i64 d = 1; d <= period; ++d) {
        if (period % d) continue;
        bool ok = true;
        for (i64 L = first; L < first + period && ok; ++L) ok = at(L) == at(L + d);
        if (ok) {
            P = d;
            break;
        }
    }
    i64 M = first;
    while (M > 0 && at(M - 1) == at(M - 1 + P)) --M;
    SemilinearLengthSet s;
    for (i64 L = 0; L < M; ++L)
        if (at(L)) s.finite.push_back(L);
    for (i64 r = M; r < M + P; ++r)
        if (at(r)) s.progressions.push_back({r, P});
    for (auto& [r, p] : s.progressions) {
        for (;;) {
            auto it = std::find(s.finite.begin(), s.finite.end(), r - p);
            if (r - p < 0 || it == s.finite.end()) break;
            s.finite.erase(it);
            r -= p;
        }
    }
    std::sort(s.progressions.begin(), s.progressions.end());
    return s;
}

inline SemilinearLengthSet length_set(const Dfa& d) {
    std::vector<std::vector<int>> succ(d.size());
    for (int q = 0; q < d.size(); ++q) {
        std::set<int> s(d.delta[q].begin(), d.delta[q].end());
        succ[q].assign(s.begin(), s.end());
    }
    return walk_lengths(succ, d.start, d.accept);
}

// n in S as a disjunction of conjunctions of atoms (empty disjunction = false).
inline Disjunction length_constraint(const SemilinearLengthSet& s, const Expr& n) {
    Disjunction out;
    for (i64 f : s.finite) out.push_back({mk_eq(n, ex::k(f))});
    for (auto [m, p] : s.progressions) {
        std::vector<ArithAtom> c{mk_le(ex::k(m), n)};
        if (p > 1) c.push_back(mk_eq(ex::mod(n, ex::k(p)), ex::k(m % p)));
        out.push_back(c);
    }
    return out;
}

// Shortest (then lexicographically least) accepted word whose length passes
// `allowed`, searching lengths 0..cap.
inline std::optional<std::string> witness_with_length(const Dfa& d, const std::function<bool(i64)>& allowed, i64 cap) {
    std::map<int, std::string> layer{{d.start, ""}};
    for (i64 L = 0; L <= cap; ++L) {
        if (allowed(L)) {
            std::optional<std::string> best;
            for (auto& [q, w] : layer)
                if (d.accept[q] && (!best || w < *best)) best = w;
            if (best) return best;
        }
        std::vector<std::pair<std::string, int>> byword;
        for (auto& [q, w] : layer) byword.push_back({w, q});
        std::sort(byword.begin(), byword.end());
        std::map<int, std::string> next;
        for (auto& [w, q] : byword)
            for (std::size_t c = 0; c < d.sigma.size(); ++c) next.emplace(d.delta[q][c], w + d.sigma[c]);
        layer = std::move(next);
    }
    return std::nullopt;
}

}  // namespace sea
