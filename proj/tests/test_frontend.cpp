#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "sea/frontend.hpp"

using namespace sea;

namespace {

std::string slurp(const std::string& name) {
    std::ifstream in(std::string(SEA_EXAMPLES_DIR) + "/" + name);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

template <class E>
E parse_error(const std::string& text) {
    try {
        parse_problem(text);
    } catch (const E& e) {
        return e;
    }
    ADD_FAILURE() << "no error for: " << text;
    return E("", 0, 0);
}

}  // namespace

TEST(Parse, WorkedExampleShape) {
    Problem p = parse_problem(slurp("worked_example.sea"));
    ASSERT_EQ(p.assertions.size(), 3u);
    auto dnf = to_dnf(p.formula());
    ASSERT_EQ(dnf.size(), 1u);
    EXPECT_EQ(dnf[0].eqs.size(), 1u);
    EXPECT_EQ(dnf[0].mems.size(), 1u);
    ASSERT_EQ(dnf[0].arith.size(), 1u);
    EXPECT_EQ(dnf[0].arith[0].lhs->kind, ExprNode::Mod);
    EXPECT_EQ(to_string(dnf[0].eqs[0]), "a.b.s = s.b.a");
    EXPECT_EQ(alphabet(p), "ab");
}

TEST(Parse, EmptyIsTrue) {
    Problem p = parse_problem("; nothing\n");
    EXPECT_TRUE(p.assertions.empty());
    auto dnf = to_dnf(p.formula());
    ASSERT_EQ(dnf.size(), 1u);
    EXPECT_TRUE(dnf[0].eqs.empty() && dnf[0].mems.empty() && dnf[0].arith.empty());
}

TEST(Parse, StringDisequalityRejected) {
    auto e = parse_error<UnsupportedConstruct>(slurp("disequality.sea"));
    EXPECT_EQ(e.line, 2);
    EXPECT_EQ(e.col, 9);
    parse_error<UnsupportedConstruct>("(declare-str s)(assert (not (= s \"a\")))");
}

TEST(Parse, IntegerDisequalityAllowed) {
    Problem p = parse_problem("(declare-int x)(assert (distinct x 3))");
    auto dnf = to_dnf(p.formula());
    EXPECT_EQ(dnf.size(), 2u);  // x <= 2 or 4 <= x
}

TEST(Parse, ErrorsCarryPositions) {
    auto a = parse_error<SyntaxError>("(declare-str s)\n(assert (= s \"a\")");
    EXPECT_EQ(a.line, 2);
    EXPECT_EQ(a.col, 1);
    auto b = parse_error<UnknownIdentifier>("(declare-str s)\n(assert (= s  t))");
    EXPECT_EQ(b.line, 2);
    EXPECT_EQ(b.col, 15);
    auto c = parse_error<SyntaxError>("(assert (frob 1))");
    EXPECT_EQ(c.col, 9);
    auto d = parse_error<UnsupportedConstruct>("(declare-str s)\n(assert (str.in_re \"a\" (str.to_re s)))");
    EXPECT_EQ(d.line, 2);
    auto e = parse_error<SyntaxError>("(declare-str s s)");
    EXPECT_EQ(e.col, 16);
    auto f = parse_error<SyntaxError>("(assert (= \"a\" \"b\")))");
    EXPECT_EQ(f.col, 21);
}

TEST(Parse, NegationPushedToAtoms) {
    Problem p = parse_problem("(declare-int x y)(assert (not (and (<= x 1) (< y 2))))");
    auto dnf = to_dnf(p.formula());
    ASSERT_EQ(dnf.size(), 2u);
    EXPECT_EQ(to_string(dnf[0].arith[0]), "(1+1)<=x");
    EXPECT_EQ(to_string(dnf[1].arith[0]), "(2+1)<=(y+1)");
    EXPECT_THROW(parse_problem("(declare-str s)(assert (not (str.in_re s re.all)))"), UnsupportedConstruct);
}

TEST(Parse, LengthOfConcatenation) {
    Problem p = parse_problem("(declare-str s t)(assert (<= (str.len (str.++ s \"ab\" t)) 4))");
    EXPECT_EQ(to_string(p.assertions[0]->atom), "(((|s|+1)+1)+|t|)<=4");
}

TEST(Parse, SugarAndLiterals) {
    Problem p = parse_problem(
        "(declare-alphabet \"c\")(declare-const s String)(declare-fun n () Int)"
        "(assert (str.in_re s (re.+ (re.range \"a\" \"b\"))))(assert (> n (* 2 (str.len s))))"
        "(assert (= s \"q\"\"\"))");
    EXPECT_EQ(p.str_vars, std::vector<std::string>{"s"});
    EXPECT_EQ(p.int_vars, std::vector<std::string>{"n"});
    EXPECT_EQ(alphabet(p), "\"abcq");
    EXPECT_EQ(p.assertions[2]->rhs, word("q\""));
}

TEST(RoundTrip, ExampleFiles) {
    for (auto name : {"worked_example.sea", "worked_example_plain.sea", "length_abstraction.sea", "ground.sea",
                      "commute.sea", "disjunction.sea"}) {
        Problem p = parse_problem(slurp(name));
        std::string text = print_problem(p);
        Problem q = parse_problem(text);
        EXPECT_TRUE(same(p, q)) << name << "\n" << text;
        EXPECT_EQ(print_problem(q), text);
    }
}

TEST(RoundTrip, HandBuiltAst) {
    Problem p;
    p.str_vars = {"x", "y"};
    p.int_vars = {"k"};
    p.extra_chars = "z";
    Term t{Atom::bare("x"), Atom::chr('a'), Atom::chr('b'), Atom::bare("y")};
    p.assertions = {
        fm::eq(t, {}),
        fm::in({Atom::bare("y")}, re::inter(re::comp(re::empty()), re::star(re::alt(re::word("ab"), re::eps())))),
        fm::disj({fm::arith(mk_le(ex::scale(-3, ex::v("k")), ex::max(ex::len("x"), ex::neg(ex::k(2))))),
                  fm::neg(fm::arith(mk_eq(ex::min(ex::v("k"), ex::mod(ex::len("y"), ex::k(5))), ex::neg(ex::k(1)))))}),
        fm::conj({fm::top(), fm::bottom()})};
    Problem q = parse_problem(print_problem(p));
    EXPECT_TRUE(same(p, q)) << print_problem(p);
}

TEST(RenderAnswer, Examples) {
    Problem p = parse_problem(slurp("worked_example_plain.sea"));
    EXPECT_EQ(render_answer({Verdict::Unsat, {}}, p, true), "unsat\n");
    EXPECT_EQ(render_answer({Verdict::Unknown, {}}, p, true), "unknown\n");
    Answer a{Verdict::Sat, {{{"s", "a"}}, {}}};
    EXPECT_EQ(render_answer(a, p, true), "sat\n(define s \"a\")\n");
    EXPECT_EQ(render_answer(a, p, false), "sat\n");
    Problem q = parse_problem("(declare-int n)");
    EXPECT_EQ(render_answer({Verdict::Sat, {{}, {{"n", -4}}}}, q, true), "sat\n(define n (- 4))\n");
}
