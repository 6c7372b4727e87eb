#pragma once

// The command-line driver without argument parsing: reads a problem, runs
// the requested stages and reports on two streams. Verdicts go to `out`,
// diagnostics to `err`.

#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>

#include "sea/engine.hpp"
#include "sea/frontend.hpp"
#include "sea/gen.hpp"
#include "sea/oracle.hpp"
#include "sea/reduce.hpp"

namespace sea {

struct RunConfig {
    std::string input;  // path, or "-" for stdin
    long budget = 10000;
    bool model = false;
    bool fragment = false;
    std::string dot;  // write the unfolding trees here when non-empty
    OaMode oa = OaMode::Full;
    bool reduce_to_single = false;
    std::optional<int> oracle_bound;
    std::string generate;  // one | single | zero: print a random instance instead of solving
    unsigned long seed = 1;
};

enum ExitCode { ExitSat = 0, ExitUnsat = 1, ExitUnknown = 2, ExitError = 3 };

inline int exit_code(Verdict v) {
    switch (v) {
        case Verdict::Sat: return ExitSat;
        case Verdict::Unsat: return ExitUnsat;
        case Verdict::Unknown: return ExitUnknown;
    }
    return ExitError;
}

namespace detail {

inline Problem generated(const std::string& kind, unsigned long seed) {
    gen::Rng rng(seed);
    if (kind == "one") return gen::one_sea_formula(rng);
    if (kind == "single") return gen::one_sea_single(rng);
    if (kind == "zero") return gen::zero_sea_system(rng);
    throw Error("unknown generator " + kind + ", expected one, single or zero");
}

inline std::string read_input(const std::string& path) {
    std::stringstream ss;
    if (path == "-") {
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw Error("cannot read " + path);
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace detail

inline int run(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
    try {
        if (!cfg.generate.empty()) {
            out << print_problem(detail::generated(cfg.generate, cfg.seed));
            return ExitSat;
        }
        if (cfg.budget < 0) throw Error("budget must be non-negative");
        Problem p = parse_problem(detail::read_input(cfg.input));
        if (cfg.reduce_to_single) p = reduce_problem(p);
        if (cfg.fragment) {
            for (const Conjunct& c : to_dnf(p.formula())) {
                if (c.trivially_false) continue;
                Fragment f = classify_fragment(init_1sea(p, c));
                out << "fragment " << to_string(f.tag);
                if (!f.witness.empty()) out << " (" << f.witness << ")";
                out << "\n";
            }
        }
        SolveOptions opts;
        opts.budget = cfg.budget;
        opts.oa = cfg.oa;
        SolveResult r = solve(p, opts);
        if (!cfg.dot.empty()) {
            std::ofstream dot(cfg.dot);
            if (!dot) throw Error("cannot write " + cfg.dot);
            for (auto& b : r.branches) dot << export_tree(b.tree);
        }
        for (auto& b : r.branches)
            if (b.verdict == Verdict::Unknown) err << "unknown: " << b.reason << "\n";
        out << render_answer(r.answer, p, cfg.model);
        if (cfg.oracle_bound) {
            int b = *cfg.oracle_bound;
            bool agree = true;
            if (r.answer.verdict == Verdict::Sat) {
                agree = eval_formula(p, r.answer.model);
                out << "oracle: model " << (agree ? "checks" : "fails") << "\n";
            } else if (auto m = brute_force_solve(p, {b, b}); r.answer.verdict == Verdict::Unsat) {
                agree = !m;
                out << "oracle: " << (agree ? "no model" : "found a model") << " within bound " << b << "\n";
            } else {
                out << "oracle: " << (m ? "a model" : "no model") << " within bound " << b << "\n";
            }
            if (!agree) {
                err << "oracle disagrees with the solver\n";
                return ExitError;
            }
        }
        return exit_code(r.answer.verdict);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return ExitError;
    }
}

}  // namespace sea
