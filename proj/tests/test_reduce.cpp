#include <gtest/gtest.h>

#include "sea/frontend.hpp"
#include "sea/gen.hpp"
#include "sea/oracle.hpp"
#include "sea/reduce.hpp"

using namespace sea;

namespace {

Atom v(const char* x) { return Atom::bare(x); }

std::vector<std::string> sorted_vars(const std::vector<Equation>& es) {
    auto s = string_vars(es);
    return {s.begin(), s.end()};
}

}  // namespace

TEST(PairEncode, Construction) {
    Equation e = pair_encode({{v("s")}, {v("t")}}, {{v("u")}, {v("v")}}, 'a', 'b');
    EXPECT_EQ(to_string(e), "s.a.u.s.b.u = t.a.v.t.b.v");
    EXPECT_EQ(to_string(pair_encode({}, {}, 'a', 'b')), "a.b = a.b");
    EXPECT_THROW(pair_encode({}, {}, 'a', 'a'), EqualSeparators);
}

TEST(PairEncode, SizeGrowthLaw) {
    Equation e1{word("ab"), {v("x"), Atom::chr('a')}}, e2{{v("y")}, {v("x"), v("y"), Atom::chr('b')}};
    EXPECT_EQ(equation_size(pair_encode(e1, e2, 'a', 'b')), 2 * (equation_size(e1) + equation_size(e2)) + 4);
}

TEST(PairEncode, SolutionSetMatchesConjunction) {
    std::vector<Equation> sys{{{v("s")}, {v("t")}}, {{v("u")}, {v("v")}}};
    Equation e = pair_encode(sys[0], sys[1], 'a', 'b');
    auto vars = sorted_vars(sys);
    EXPECT_EQ(equation_solutions({e}, vars, "ab", 3), equation_solutions(sys, vars, "ab", 3));
}

TEST(ReduceSystem, FoldAndErrors) {
    Equation e1{{v("x")}, word("ab")}, e2{{v("y"), Atom::chr('a')}, {v("x")}}, e3{{v("x")}, {v("y"), v("y")}};
    EXPECT_EQ(to_string(reduce_system({{e1}, "ab"})), to_string(e1));
    EXPECT_EQ(to_string(reduce_system({{e1, e2}, "ba"})), to_string(pair_encode(e1, e2, 'a', 'b')));
    EXPECT_EQ(to_string(reduce_system({{e1, e2, e3}, "abc"})),
              to_string(pair_encode(pair_encode(e1, e2, 'a', 'b'), e3, 'a', 'b')));
    EXPECT_THROW(reduce_system({{e1, e2}, "a"}), AlphabetTooSmall);
    EXPECT_THROW(reduce_system({{e1, e2}, "aa"}), AlphabetTooSmall);
}

TEST(ReduceSystem, RandomSystemsKeepSolutionsAndUnknowns) {
    gen::Rng rng(11);
    for (int i = 0; i < 30; ++i) {
        std::vector<Equation> sys = gen::equation_system(rng);
        Equation e = reduce_system({sys, "ab"});
        EXPECT_EQ(string_vars({e}), string_vars(sys));
        auto vars = sorted_vars(sys);
        EXPECT_EQ(equation_solutions({e}, vars, "ab", 2), equation_solutions(sys, vars, "ab", 2)) << i;
    }
}

TEST(ReduceProblem, ReplacesTopLevelEquations) {
    Problem p = parse_problem(
        "(declare-str x y)(assert (= x \"ab\"))(assert (and (= (str.++ y \"b\") x) (<= (str.len y) 3)))");
    Problem q = reduce_problem(p);
    ASSERT_EQ(q.assertions.size(), 2u);
    EXPECT_EQ(q.assertions[0]->kind, FNode::WordEq);
    EXPECT_EQ(q.assertions[1]->kind, FNode::Arith);
    auto a = brute_force_solve(p, {3, 0}), b = brute_force_solve(q, {3, 0});
    ASSERT_TRUE(a && b);
    EXPECT_EQ(a->words, b->words);
    EXPECT_EQ(a->words.at("y"), "a");
    Problem single = parse_problem("(declare-str x)(assert (= x \"ab\"))");
    EXPECT_TRUE(same(reduce_problem(single), single));
}
