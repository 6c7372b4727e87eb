#include <gtest/gtest.h>

#include <random>

#include "sea/arith.hpp"

using namespace sea;

namespace {

Expr v(const char* n) { return ex::v(n); }
Expr k(i64 x) { return ex::k(x); }

// Brute force over [-lim, lim]^vars using only the evaluator.
bool enum_sat(const std::vector<ArithAtom>& atoms, int lim) {
    auto vars = int_vars(atoms);
    std::vector<std::string> names(vars.begin(), vars.end());
    std::map<std::string, i64> m;
    for (auto& n : names) m[n] = -lim;
    for (;;) {
        bool ok = true;
        for (auto& a : atoms)
            if (!eval(a, m)) {
                ok = false;
                break;
            }
        if (ok) return true;
        std::size_t i = 0;
        while (i < names.size() && m[names[i]] == lim) m[names[i++]] = -lim;
        if (i == names.size()) return false;
        ++m[names[i]];
    }
}

Expr random_expr(std::mt19937& rng, const std::vector<std::string>& vars, int depth) {
    std::uniform_int_distribution<int> pick(0, depth > 0 ? 7 : 1);
    std::uniform_int_distribution<int> small(-3, 3);
    switch (pick(rng)) {
        case 0: return ex::k(small(rng));
        case 1: return ex::v(vars[rng() % vars.size()]);
        case 2: return ex::scale(small(rng), random_expr(rng, vars, depth - 1));
        case 3: return ex::neg(random_expr(rng, vars, depth - 1));
        case 4: return ex::mod(random_expr(rng, vars, depth - 1), ex::k(2 + rng() % 3));
        case 5: return ex::max(random_expr(rng, vars, depth - 1), random_expr(rng, vars, depth - 1));
        case 6: return ex::min(random_expr(rng, vars, depth - 1), random_expr(rng, vars, depth - 1));
        default: return ex::add(random_expr(rng, vars, depth - 1), random_expr(rng, vars, depth - 1));
    }
}

std::vector<ArithAtom> random_system(std::mt19937& rng) {
    std::vector<std::string> vars{"x", "y", "z"};
    vars.resize(1 + rng() % 3);
    std::vector<ArithAtom> atoms;
    for (auto& n : vars) {
        atoms.push_back(mk_le(ex::k(-8), ex::v(n)));
        atoms.push_back(mk_le(ex::v(n), ex::k(8)));
    }
    int extra = 1 + rng() % 3;
    for (int i = 0; i < extra; ++i) {
        Expr l = random_expr(rng, vars, 2), r = random_expr(rng, vars, 1);
        atoms.push_back(rng() % 2 ? mk_eq(l, r) : mk_le(l, r));
    }
    return atoms;
}

}  // namespace

TEST(Lower, ModByConstantGivesOneSystem) {
    auto sys = lower({mk_eq(ex::mod(v("n"), k(2)), k(0))});
    ASSERT_EQ(sys.size(), 1u);
    EXPECT_EQ(sys[0].eqs.size(), 2u);   // n = 2q + r, r = 0
    EXPECT_EQ(sys[0].geqs.size(), 2u);  // 0 <= r <= 1
}

TEST(Lower, EmptyInputIsOneEmptySystem) {
    auto sys = lower({});
    ASSERT_EQ(sys.size(), 1u);
    EXPECT_TRUE(sys[0].eqs.empty());
    EXPECT_TRUE(sys[0].geqs.empty());
}

TEST(Lower, MaxSplitsInTwo) { EXPECT_EQ(lower({mk_le(ex::max(v("x"), v("y")), k(3))}).size(), 2u); }

TEST(Lower, VariableDivisorRejected) {
    EXPECT_THROW(lower({mk_eq(ex::mod(v("x"), v("y")), k(0))}), NonConstantDivisor);
    EXPECT_THROW(arith_sat({mk_eq(ex::mod(v("x"), v("y")), k(0))}), NonConstantDivisor);
}

TEST(ArithSat, ParityCoreIsUnsat) {
    std::vector<ArithAtom> a{mk_eq(ex::mod(v("n"), k(2)), k(0)), mk_eq(v("n1"), ex::sub(v("n"), k(1))),
                             mk_eq(v("n1"), k(0)), mk_lt(k(0), v("n"))};
    EXPECT_FALSE(arith_sat(a));
}

TEST(ArithSat, SingleEquality) {
    auto r = arith_sat({mk_eq(v("n"), k(0))});
    ASSERT_TRUE(r);
    EXPECT_EQ(r.model.at("n"), 0);
}

TEST(ArithSat, LengthAbstractionIsUnsat) {
    // nu = nv + nu + 1 + nu + nt with everything non-negative
    Expr rhs = ex::add(ex::add(ex::add(ex::add(v("nv"), v("nu")), k(1)), v("nu")), v("nt"));
    std::vector<ArithAtom> a{mk_eq(v("nu"), rhs), mk_le(k(0), v("nu")), mk_le(k(0), v("nv")), mk_le(k(0), v("nt"))};
    EXPECT_FALSE(arith_sat(a));
}

TEST(ArithSat, NonUnitEqualities) {
    // 3x + 5y = 1 has integer solutions; 6x + 9y = 1 has none.
    auto r = arith_sat({mk_eq(ex::add(ex::scale(3, v("x")), ex::scale(5, v("y"))), k(1))});
    ASSERT_TRUE(r);
    EXPECT_EQ(3 * r.model["x"] + 5 * r.model["y"], 1);
    EXPECT_FALSE(arith_sat({mk_eq(ex::add(ex::scale(6, v("x")), ex::scale(9, v("y"))), k(1))}));
}

TEST(ArithSat, DarkShadowGap) {
    // 2 <= 3x <= 2y - 1... classic: 1 <= 3x - 2y <= 1 and bounds; integer gap case
    std::vector<ArithAtom> a{mk_le(k(1), ex::scale(3, v("x"))), mk_le(ex::scale(3, v("x")), k(2))};
    EXPECT_FALSE(arith_sat(a));
    std::vector<ArithAtom> b{mk_le(k(27), ex::add(ex::scale(11, v("x")), ex::scale(13, v("y")))),
                             mk_le(ex::add(ex::scale(11, v("x")), ex::scale(13, v("y"))), k(45)),
                             mk_le(k(-10), ex::sub(ex::scale(7, v("x")), ex::scale(9, v("y")))),
                             mk_le(ex::sub(ex::scale(7, v("x")), ex::scale(9, v("y"))), k(4))};
    EXPECT_FALSE(arith_sat(b));  // Pugh's example without integer points
}

TEST(ArithImplies, WorkedExampleStep) {
    std::vector<ArithAtom> hyp{mk_eq(ex::mod(v("n'"), k(2)), k(0)), mk_lt(k(0), v("n'")),
                               mk_eq(v("n1"), ex::sub(v("n'"), k(1))), mk_lt(k(0), v("n1")),
                               mk_eq(v("n"), ex::sub(v("n1"), k(1)))};
    EXPECT_TRUE(arith_implies(hyp, {mk_eq(ex::mod(v("n"), k(2)), k(0))}));
}

TEST(ArithImplies, TrivialAndCounterModel) {
    EXPECT_TRUE(arith_implies({mk_le(v("x"), k(3))}, {mk_le(k(0), k(0))}));
    EXPECT_FALSE(arith_implies({mk_eq(v("x"), k(1))}, {mk_eq(v("x"), k(2))}));
}

TEST(ArithProperty, AgreesWithEnumerationAndModelsCheck) {
    std::mt19937 rng(7);
    int sat = 0;
    for (int i = 0; i < 500; ++i) {
        auto atoms = random_system(rng);
        auto r = arith_sat(atoms);
        ASSERT_EQ(bool(r), enum_sat(atoms, 8)) << i;
        if (r) {
            ++sat;
            for (auto& a : atoms) ASSERT_TRUE(eval(a, r.model)) << to_string(a);
        }
    }
    EXPECT_GT(sat, 50);
    EXPECT_LT(sat, 490);
}

TEST(ArithProperty, ImplicationReflexiveAndMonotone) {
    std::mt19937 rng(11);
    for (int i = 0; i < 100; ++i) {
        auto phi = random_system(rng);
        ASSERT_TRUE(arith_implies(phi, phi));
        auto psi = random_system(rng);
        if (arith_implies(phi, psi)) {
            auto stronger = phi;
            stronger.push_back(mk_le(ex::v("x"), ex::k(int(rng() % 5))));
            ASSERT_TRUE(arith_implies(stronger, psi));
        }
    }
}
