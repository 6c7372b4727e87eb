#pragma once

// The unfolding tree and the solving loop: every new node is checked
// exactly (base leaves), then by length abstraction, then for a back-link;
// open leaves are unfolded depth first.

#include <algorithm>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sea/approx.hpp"
#include "sea/classify.hpp"
#include "sea/link.hpp"
#include "sea/problem.hpp"
#include "sea/unfold.hpp"

namespace sea {

enum class NodeStatus { Open, Unsat, Linked, Sat, Stuck };

inline std::string to_string(NodeStatus s) {
    switch (s) {
        case NodeStatus::Open: return "open";
        case NodeStatus::Unsat: return "unsat";
        case NodeStatus::Linked: return "linked";
        case NodeStatus::Sat: return "sat";
        case NodeStatus::Stuck: return "stuck";
    }
    return "?";
}

struct TreeNode {
    int id = 0, parent = -1, depth = 0;
    NormalizedFormula f;
    std::optional<Rule> rule;  // rule that produced this node from its parent
    std::vector<int> kids;
    NodeStatus status = NodeStatus::Open;
    std::string reason;  // why the node was closed or left stuck
    std::optional<BackLink> link;
};

struct UnfoldingTree {
    std::vector<TreeNode> nodes;

    std::size_t edge_count() const {
        std::size_t n = 0;
        for (auto& t : nodes) n += t.kids.size();
        return n;
    }
    std::size_t back_edge_count() const {
        return std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& t) { return t.link.has_value(); });
    }
    // Number of nodes on the longest root-to-leaf path.
    int longest_path() const {
        int d = 0;
        for (auto& t : nodes) d = std::max(d, t.depth + 1);
        return d;
    }
};

struct SolveOptions {
    long budget = 10000;  // unfoldings per conjunct; ignored in the zero-cycle fragment
    OaMode oa = OaMode::Full;
    UaLimits ua;
    // An open node whose size (equations plus the expansions of membership
    // variables) grows past growth_cap times the root's is left stuck.
    // Growing nodes are never isomorphic to an ancestor again, and every
    // check on them costs time linear in their size.
    long growth_cap = 8;
};

struct ConjunctResult {
    Verdict verdict = Verdict::Unknown;
    Model model;
    UnfoldingTree tree;
    Fragment fragment;
    long unfoldings = 0;
    std::string reason;  // for unknown: budget, or the stuck leaf's reason
};

struct SolveResult {
    Answer answer;
    std::vector<ConjunctResult> branches;
};

// Path-length bound of the zero-cycle fragment: 4 * 2^M * N nodes, with M
// equations and N the size of the largest one.
inline long zero_cycle_path_bound(const NormalizedFormula& f) {
    std::size_t n = 0;
    for (auto& e : f.es) n = std::max(n, equation_size(e));
    std::size_t m = std::min<std::size_t>(f.es.size(), 40);
    return 4L * (1L << m) * (long)std::max<std::size_t>(n, 1);
}

inline long node_size(const NormalizedFormula& f, const MembershipInfo& mem) {
    long n = 0;
    for (auto& e : f.es) n += (long)equation_size(e);
    Expander x(f.lam);
    for (auto& v : mem.vars) n += (long)x.of(v).size();
    return n;
}

class Solver {
public:
    Solver(const Problem& p, const Conjunct& c, SolveOptions opts) : opts_(opts) {
        root_ = init_1sea(p, c);
        mem_ = compile_memberships(root_);
        size_cap_ = opts.growth_cap * (node_size(root_, mem_) + 1);
        spec_ = {to_formula(c), p.str_vars, p.int_vars};
        out_.fragment = classify_fragment(root_);
    }

    ConjunctResult run() {
        UnfoldingTree& t = out_.tree;
        t.nodes.push_back(TreeNode{0, -1, 0, root_, std::nullopt, {}, NodeStatus::Open, "", std::nullopt});
        if (process(0)) return out_;
        const bool zero = out_.fragment.tag == FragmentTag::ZeroSEA;
        const long bound = zero_cycle_path_bound(root_);
        for (;;) {
            if (open_.empty()) break;
            int pick = open_.begin()->second;
            if (!zero && out_.unfoldings >= opts_.budget) {
                out_.verdict = Verdict::Unknown;
                out_.reason = "budget of " + std::to_string(opts_.budget) + " unfoldings exhausted";
                return out_;
            }
            ++out_.unfoldings;
            open_.erase(open_.begin());
            Unfolded u = unfold_rules(t.nodes[pick].f);
            if (u.kids.empty()) {
                t.nodes[pick].status = NodeStatus::Unsat;
                t.nodes[pick].reason = to_string(u.rule);
                continue;
            }
            for (std::size_t i = 0; i < u.kids.size(); ++i) {
                int id = (int)t.nodes.size();
                int depth = t.nodes[pick].depth + 1;
                if (zero && depth + 1 > bound)
                    throw InternalError("zero-cycle path bound " + std::to_string(bound) + " exceeded");
                t.nodes.push_back(TreeNode{id, pick, depth, std::move(u.kids[i]), u.kid_rules[i], {}, NodeStatus::Open, "",
                                           std::nullopt});
                t.nodes[pick].kids.push_back(id);
                if (process(id)) return out_;
            }
        }
        auto stuck = std::find_if(t.nodes.begin(), t.nodes.end(), [](const TreeNode& n) { return n.status == NodeStatus::Stuck; });
        if (stuck != t.nodes.end()) {
            out_.verdict = Verdict::Unknown;
            out_.reason = stuck->reason;
        } else {
            out_.verdict = Verdict::Unsat;
        }
        return out_;
    }

private:
    // Returns true when the node settles the conjunct as satisfiable.
    bool process(int id) {
        TreeNode& n = out_.tree.nodes[id];
        UaResult ua = under_approx_check(n.f, mem_, spec_, opts_.ua);
        switch (ua.kind) {
            case UaResult::Sat:
                n.status = NodeStatus::Sat;
                out_.verdict = Verdict::Sat;
                out_.model = ua.model;
                return true;
            case UaResult::Unsat:
                n.status = NodeStatus::Unsat;
                n.reason = "exact: " + ua.why;
                return false;
            case UaResult::Inconclusive:
                n.status = NodeStatus::Stuck;
                n.reason = ua.why;
                return false;
            case UaResult::NotBase: break;
        }
        if (over_approx_unsat(n.f, opts_.oa, mem_)) {
            n.status = NodeStatus::Unsat;
            n.reason = "length abstraction";
            return false;
        }
        std::vector<Ancestor> anc;
        for (int a = n.parent; a >= 0; a = out_.tree.nodes[a].parent) anc.push_back({a, &out_.tree.nodes[a].f});
        if (auto l = link_back(n.f, anc, mem_)) {
            n.status = NodeStatus::Linked;
            n.link = *l;
            return false;
        }
        if (long size = node_size(n.f, mem_); size > size_cap_) {
            n.status = NodeStatus::Stuck;
            n.reason = "node size " + std::to_string(size) + " exceeds " + std::to_string(size_cap_);
            return false;
        }
        open_.insert({-n.depth, id});
        return false;
    }

    SolveOptions opts_;
    NormalizedFormula root_;
    MembershipInfo mem_;
    ModelSpec spec_;
    ConjunctResult out_;
    long size_cap_ = 0;
    std::set<std::pair<int, int>> open_;  // (-depth, id): deepest first, then lowest id
};

inline ConjunctResult solve_conjunct(const Problem& p, const Conjunct& c, SolveOptions opts = {}) {
    return Solver(p, c, opts).run();
}

// Disjuncts are solved in turn: the first satisfiable one answers sat, all
// unsatisfiable answers unsat, anything else is unknown.
inline SolveResult solve(const Problem& p, SolveOptions opts = {}) {
    SolveResult r;
    bool unknown = false;
    for (const Conjunct& c : to_dnf(p.formula())) {
        if (c.trivially_false) continue;
        r.branches.push_back(solve_conjunct(p, c, opts));
        const ConjunctResult& b = r.branches.back();
        if (b.verdict == Verdict::Sat) {
            r.answer = {Verdict::Sat, b.model};
            return r;
        }
        unknown = unknown || b.verdict == Verdict::Unknown;
    }
    r.answer = {unknown ? Verdict::Unknown : Verdict::Unsat, {}};
    return r;
}

// ---------------------------------------------------------------- DOT export

namespace detail {

inline std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

inline std::string node_label(const TreeNode& n) {
    std::string s = std::to_string(n.id) + ": ";
    if (n.f.es.empty())
        s += "no equations";
    for (std::size_t i = 0; i < n.f.es.size(); ++i) s += (i ? " & " : "") + to_string(n.f.es[i]);
    s += "\\n" + (n.status == NodeStatus::Open && !n.kids.empty() ? std::string("unfolded") : to_string(n.status));
    if (!n.reason.empty()) s += " (" + dot_escape(n.reason) + ")";
    return s;
}

}  // namespace detail

// Tree edges are solid and labelled with the rule; back-links are dashed
// and labelled with the integer renaming.
inline std::string export_tree(const UnfoldingTree& t) {
    std::ostringstream o;
    o << "digraph unfolding {\n  node [shape=box, fontname=monospace];\n";
    for (auto& n : t.nodes) {
        o << "  n" << n.id << " [label=\"" << detail::node_label(n) << "\"";
        if (n.status == NodeStatus::Unsat) o << ", style=filled, fillcolor=lightgrey";
        if (n.status == NodeStatus::Sat) o << ", style=filled, fillcolor=palegreen";
        o << "];\n";
    }
    for (auto& n : t.nodes)
        for (int k : n.kids)
            o << "  n" << n.id << " -> n" << k << " [label=\"" << to_string(*t.nodes[k].rule) << "\"];\n";
    for (auto& n : t.nodes)
        if (n.link)
            o << "  n" << n.id << " -> n" << n.link->target << " [style=dashed, constraint=false, label=\""
              << detail::dot_escape(theta_text(n.link->theta)) << "\"];\n";
    o << "}\n";
    return o.str();
}

}  // namespace sea
