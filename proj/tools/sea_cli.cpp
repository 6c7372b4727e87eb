#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "sea/cli.hpp"

int main(int argc, char** argv) {
    sea::RunConfig cfg;
    CLI::App app{"Solver for word equations with regular membership and length constraints"};
    app.add_option("input", cfg.input, "Problem file, or - for stdin");
    app.add_option("--budget", cfg.budget, "Unfoldings per disjunct before answering unknown")->check(CLI::NonNegativeNumber);
    app.add_flag("--model", cfg.model, "Print a model after sat");
    app.add_flag("--fragment", cfg.fragment, "Print the fragment of every disjunct before solving");
    app.add_option("--dot", cfg.dot, "Write the unfolding trees in DOT format");
    std::map<std::string, sea::OaMode> modes{{"full", sea::OaMode::Full}, {"lengths-only", sea::OaMode::LengthsOnly}};
    app.add_option("--oa", cfg.oa, "Over-approximation: full or lengths-only")->transform(CLI::CheckedTransformer(modes));
    app.add_flag("--reduce-to-single", cfg.reduce_to_single, "Encode the top-level equations as one equation first");
    app.add_option("--oracle-check", cfg.oracle_bound, "Cross-check the verdict by brute force up to this word length")
        ->check(CLI::NonNegativeNumber);
    app.add_option("--generate", cfg.generate, "Print a random instance instead of solving")
        ->check(CLI::IsMember({"one", "single", "zero"}));
    app.add_option("--seed", cfg.seed, "Seed for --generate");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : sea::ExitError;
    }
    if (cfg.input.empty() && cfg.generate.empty()) {
        std::cerr << "error: no input file\n";
        return sea::ExitError;
    }
    return sea::run(cfg, std::cout, std::cerr);
}
