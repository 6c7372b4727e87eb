// End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
// exits non-zero if any criterion fails.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "sea/engine.hpp"
#include "sea/frontend.hpp"
#include "sea/gen.hpp"
#include "sea/oracle.hpp"
#include "sea/reduce.hpp"

using namespace sea;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

Problem load(const std::string& name) {
    std::ifstream in(std::string(SEA_EXAMPLES_DIR) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_problem(ss.str());
}

// Collects the failures of one criterion; the first few are reported.
struct Check {
    int id;
    std::string title;
    std::vector<std::string> fails;
    std::string summary;

    void expect(bool ok, const std::string& what) {
        if (!ok) fails.push_back(what);
    }
    bool report() const {
        std::cout << (fails.empty() ? "PASS" : "FAIL") << " " << id << " " << title;
        if (!summary.empty()) std::cout << " (" << summary << ")";
        std::cout << "\n";
        for (std::size_t i = 0; i < fails.size() && i < 5; ++i) std::cout << "    " << fails[i] << "\n";
        if (fails.size() > 5) std::cout << "    ... " << fails.size() - 5 << " more\n";
        return fails.empty();
    }
};

struct Found {};

bool sat_upto(const NormalizedFormula& f, int bound) {
    try {
        enumerate_normalized(f, bound, [](const Model&) { throw Found{}; });
    } catch (const Found&) {
        return true;
    }
    return false;
}

std::size_t max_equation_size(const Problem& p) {
    std::size_t n = 0;
    for (const Conjunct& c : to_dnf(p.formula()))
        for (auto& e : c.eqs) n = std::max(n, equation_size(e));
    return n;
}

std::size_t equation_count(const Problem& p) {
    std::size_t m = 0;
    for (const Conjunct& c : to_dnf(p.formula())) m = std::max(m, c.eqs.size());
    return m;
}

long factorial(long n) { return n <= 1 ? 1 : n * factorial(n - 1); }

std::vector<std::string> sorted_vars(const std::vector<Equation>& es) {
    auto s = string_vars(es);
    return {s.begin(), s.end()};
}

// Size discipline of one fired rule on the first equation.
void check_sizes(Check& c, const NormalizedFormula& f, const std::string& where) {
    Unfolded u = unfold_rules(f);
    std::size_t before = equation_size(f.es[0]);
    if (u.rule == Rule::ConstSucc) {
        std::size_t after = equation_size(u.kids[0].es[0]);
        c.expect(after + 2 == before, where + ": const-succ " + std::to_string(before) + " -> " + std::to_string(after));
    }
    if (u.rule == Rule::SmallStep) {
        const Equation& e = f.es[0];
        const Atom& s = e.lhs.front().kind == Atom::Str ? e.lhs.front() : e.rhs.front();
        if (occurrences(e).at(s.var) == 1) {
            std::size_t after = equation_size(u.kids[1].es[0]);
            c.expect(after + 1 == before, where + ": small-step " + std::to_string(before) + " -> " + std::to_string(after));
        }
    }
}

bool criterion1() {
    Check c{1, "worked example: unsat, five-node tree with a back-link to the root"};
    auto t0 = Clock::now();
    Problem p = load("worked_example.sea");
    SolveResult full = solve(p);
    SolveOptions o;
    o.oa = OaMode::LengthsOnly;
    SolveResult r = solve(p, o);
    double secs = seconds_since(t0);
    c.expect(full.answer.verdict == Verdict::Unsat, "full abstraction: not unsat");
    c.expect(r.answer.verdict == Verdict::Unsat, "lengths-only: not unsat");
    c.expect(secs < 1.0, "took " + std::to_string(secs) + " s");
    if (r.branches.size() != 1) {
        c.expect(false, "expected one branch");
        return c.report();
    }
    const UnfoldingTree& t = r.branches[0].tree;
    c.expect(t.nodes.size() == 5 && t.edge_count() == 4 && t.back_edge_count() == 1, "tree shape differs");
    if (t.nodes.size() == 5) {
        c.expect(t.nodes[0].kids == std::vector<int>{1, 2}, "root children");
        c.expect(t.nodes[2].kids == std::vector<int>{3, 4}, "second child's children");
        c.expect(t.nodes[1].status == NodeStatus::Unsat && t.nodes[3].status == NodeStatus::Unsat, "closed leaves");
        const TreeNode& leaf = t.nodes[4];
        c.expect(leaf.status == NodeStatus::Linked && leaf.link && leaf.link->target == 0, "back-link to the root");
        if (leaf.link) {
            c.expect(theta_text(leaf.link->theta) == "[n'/n, n/n2]", "renaming " + theta_text(leaf.link->theta));
            std::map<std::string, Expr> rename;
            for (auto& [to, from] : leaf.link->theta) rename[from] = ex::v(to);
            std::vector<ArithAtom> hyp;
            for (auto& a : leaf.f.I) hyp.push_back(subst_atom(a, rename, {}));
            c.expect(arith_implies(hyp, t.nodes[0].f.I), "renamed leaf arithmetic does not imply the root's");
        }
    }
    c.summary = std::to_string(secs).substr(0, 5) + " s";
    return c.report();
}

bool criterion2() {
    Check c{2, "length abstraction of u = v.u.a.u.t is unsat"};
    Problem p = load("length_abstraction.sea");
    NormalizedFormula f = init_1sea(p);
    MembershipInfo mem = compile_memberships(f);
    OverApprox o = over_approx(f, OaMode::Full, mem);
    auto n = [&](const std::string& s) { return ex::v(f.len_of.at(s)); };
    ArithAtom expected = mk_eq(n("u"), ex::add(ex::add(ex::add(ex::add(n("v"), n("u")), ex::k(1)), n("u")), n("t")));
    std::vector<std::string> got;
    for (auto& a : o.atoms) got.push_back(to_string(a));
    auto has = [&](const ArithAtom& a) { return std::find(got.begin(), got.end(), to_string(a)) != got.end(); };
    c.expect(has(expected), "missing " + to_string(expected));
    for (auto v : {"u", "v", "t"}) c.expect(has(mk_le(ex::k(0), n(v))), std::string("missing non-negativity of |") + v + "|");
    c.expect(o.atoms.size() == 4, std::to_string(o.atoms.size()) + " atoms");
    c.expect(!arith_sat(o.atoms, o.disj).sat, "abstraction is satisfiable");
    c.summary = to_string(expected);
    return c.report();
}

// Criteria 3 and 4 share one corpus.
std::pair<bool, bool> criteria3and4() {
    Check sat{3, "oracle agreement on sat verdicts, 200 1SEA formulas"};
    Check uns{4, "oracle agreement on unsat verdicts, bound 8"};
    gen::Rng rng(3);
    int nsat = 0, nunsat = 0, nunknown = 0;
    double solve_secs = 0;
    for (int i = 0; i < 200; ++i) {
        Problem p = gen::one_sea_formula(rng);
        auto t0 = Clock::now();
        SolveResult r = solve(p);
        solve_secs += seconds_since(t0);
        std::string text = "instance " + std::to_string(i) + ": " + print_problem(p);
        switch (r.answer.verdict) {
            case Verdict::Sat:
                ++nsat;
                sat.expect(eval_formula(p, r.answer.model), text + " model fails");
                break;
            case Verdict::Unsat:
                ++nunsat;
                uns.expect(!brute_force_solve(p, {8, 8}), text + " has a model");
                break;
            case Verdict::Unknown: ++nunknown; break;
        }
    }
    sat.expect(solve_secs < 60, "solving took " + std::to_string(solve_secs) + " s");
    sat.summary = std::to_string(nsat) + " sat, " + std::to_string(nunknown) + " unknown, " +
                  std::to_string(solve_secs).substr(0, 5) + " s";
    uns.summary = std::to_string(nunsat) + " unsat";
    bool a = sat.report(), b = uns.report();
    return {a, b};
}

bool criterion5() {
    Check c{5, "0SEA termination within 4*2^M*N nodes per path, 100 systems"};
    gen::Rng rng(5);
    int worst = 0;
    for (int i = 0; i < 100; ++i) {
        Problem p = gen::zero_sea_system(rng);
        long m = (long)equation_count(p), n = (long)max_equation_size(p);
        long bound = 4 * (1L << m) * std::max(n, 1L);
        std::string text = "instance " + std::to_string(i) + ": " + print_problem(p);
        try {
            SolveResult r = solve(p);
            c.expect(r.answer.verdict != Verdict::Unknown, text + " unknown");
            for (auto& b : r.branches) {
                int len = b.tree.longest_path();
                worst = std::max(worst, len);
                c.expect(len <= bound, text + " path " + std::to_string(len) + " > " + std::to_string(bound));
            }
        } catch (const std::exception& e) {
            c.expect(false, text + " " + e.what());
        }
    }
    c.summary = "longest path " + std::to_string(worst);
    return c.report();
}

bool criterion6() {
    Check c{6, "1SEA single equations decided within budget 10000, 100 instances"};
    gen::Rng rng(6);
    int checked = 0;
    for (int i = 0; i < 100; ++i) {
        Problem p = gen::one_sea_single(rng);
        SolveOptions o;
        o.budget = 10000;
        SolveResult r = solve(p, o);
        std::string text = "instance " + std::to_string(i) + ": " + print_problem(p);
        c.expect(r.answer.verdict != Verdict::Unknown, text + " unknown");
        long n = (long)max_equation_size(p);
        if (n <= 6) {
            ++checked;
            for (auto& b : r.branches)
                c.expect(b.tree.longest_path() <= n * n * factorial(n), text + " path " + std::to_string(b.tree.longest_path()));
        }
    }
    c.summary = std::to_string(checked) + " path bounds checked";
    return c.report();
}

bool criterion7() {
    Check c{7, "regex length sets match enumeration up to 20, 200 regexes"};
    gen::Rng rng(7);
    const std::string alphabets[] = {"a", "ab", "abc"};
    for (int i = 0; i < 200; ++i) {
        std::string sigma = alphabets[gen::uniform(rng, 0, 2)];
        Regex r = gen::random_regex(rng, sigma, gen::uniform(rng, 0, 4));
        SemilinearLengthSet s = length_set(compile(r, sigma));
        std::vector<bool> has = regex_lengths_upto(r, sigma, 20);
        // Literal enumeration for the short lengths.
        auto words = detail::words_by_length(sigma, 8);
        for (int L = 0; L <= 8; ++L) {
            bool any = std::any_of(words[L].begin(), words[L].end(), [&](const std::string& w) { return regex_match(r, w); });
            c.expect(any == has[L], "regex " + to_string(r) + " enumeration disagrees at " + std::to_string(L));
        }
        for (int L = 0; L <= 20; ++L)
            c.expect(s.contains(L) == has[L], "regex " + to_string(r) + " over " + sigma + " length " + std::to_string(L) + " in " + to_string(s));
    }
    return c.report();
}

bool criterion8() {
    Check c{8, "system to single equation keeps solutions at bound 3, 100 systems"};
    gen::Rng rng(8);
    std::size_t total = 0;
    for (int i = 0; i < 100; ++i) {
        std::vector<Equation> es = gen::equation_system(rng);
        Equation one = reduce_system({es, "ab"});
        std::vector<std::string> vars = sorted_vars(es);
        std::string text = "system " + std::to_string(i) + ": " + to_string(one);
        c.expect(sorted_vars({one}) == vars, text + " changes the unknowns");
        auto a = equation_solutions(es, vars, "ab", 3), b = equation_solutions({one}, vars, "ab", 3);
        c.expect(a == b, text + " " + std::to_string(a.size()) + " vs " + std::to_string(b.size()) + " solutions");
        total += a.size();
    }
    c.summary = std::to_string(total) + " solutions compared";
    return c.report();
}

bool criterion9() {
    Check c{9, "unfolding preserves models at bound 6 and equation sizes shrink, 100 formulas"};
    gen::Rng rng(9);
    int rules = 0;
    for (int i = 0; i < 100; ++i) {
        Problem p = gen::small_formula(rng);
        std::string text = "formula " + std::to_string(i) + ": " + print_problem(p);
        for (const Conjunct& cj : to_dnf(p.formula())) {
            if (cj.trivially_false) continue;
            NormalizedFormula root = init_1sea(p, cj);
            if (root.es.empty()) continue;
            std::function<void(const NormalizedFormula&, int)> visit = [&](const NormalizedFormula& f, int depth) {
                Unfolded u = unfold_rules(f);
                ++rules;
                check_sizes(c, f, text + " at depth " + std::to_string(depth));
                bool parent = sat_upto(f, 6), kids = false;
                for (auto& k : u.kids) kids = kids || sat_upto(k, 6);
                c.expect(parent == kids, text + " " + to_string(u.rule) + " at depth " + std::to_string(depth));
                if (depth < 2)
                    for (auto& k : u.kids)
                        if (!k.es.empty()) visit(k, depth + 1);
            };
            visit(root, 0);
            SolveOptions o;
            o.budget = 2000;
            ConjunctResult r = solve_conjunct(p, cj, o);
            for (auto& n : r.tree.nodes)
                if (!n.kids.empty()) {
                    ++rules;
                    check_sizes(c, n.f, text + " node " + std::to_string(n.id));
                }
        }
    }
    c.summary = std::to_string(rules) + " fired rules checked";
    return c.report();
}

}  // namespace

int main() {
    bool ok = true;
    ok = criterion1() && ok;
    ok = criterion2() && ok;
    auto [a, b] = criteria3and4();
    ok = a && b && ok;
    ok = criterion5() && ok;
    ok = criterion6() && ok;
    ok = criterion7() && ok;
    ok = criterion8() && ok;
    ok = criterion9() && ok;
    return ok ? 0 : 1;
}
