#include "doctest.h"

#include "pltl/diamond.hpp"
#include "pltl/errors.hpp"
#include "pltl/oracle.hpp"
#include "pltl/reach.hpp"
#include "support/checks.hpp"
#include "support/random_models.hpp"

using namespace pltl;

namespace {

MarkovChain example1() {
    return parse_chain("states 2\ninit 0\nlabel 1 a\ntrans 0 0 1/2\ntrans 0 1 1/2\ntrans 1 1 1\n");
}

FormulaPtr f(const char* text) { return parse_formula(text); }

LassoWord lasso(const char* stem, const char* loop) { return {parse_letters(stem), parse_letters(loop)}; }

// Parameter-free random formula (constants only).
FormulaPtr random_closed(testing::Rng& rng, std::size_t depth = 3) {
    testing::FormulaShape shape;
    shape.params.clear();
    shape.max_depth = depth;
    shape.max_const = 3;
    return testing::random_diamond_formula(rng, shape);
}

} // namespace

// ── Prefix semantics ──

TEST_CASE("eval_prefix") {
    CHECK(eval_prefix(parse_letters("{a}"), f("F[<=3] a")) == Verdict3::True);
    CHECK(eval_prefix(parse_letters("{}{}{}{}"), f("F[<=3] a")) == Verdict3::False);
    CHECK(eval_prefix(parse_letters("{}{}{}"), f("F[<=3] a")) == Verdict3::Unknown);
    CHECK(eval_prefix(parse_letters("{}"), f("G a")) == Verdict3::False);
    CHECK(eval_prefix(parse_letters("{a}"), f("G a")) == Verdict3::Unknown);
    CHECK(eval_prefix(parse_letters("{a}{b}"), f("a U b")) == Verdict3::True);
    CHECK(eval_prefix(parse_letters("{}"), f("!a")) == Verdict3::True);
    CHECK(eval_prefix({}, f("a")) == Verdict3::Unknown);
    CHECK_THROWS_AS(eval_prefix(parse_letters("{a}"), f("F[<=x] a")), FragmentError);
}

// ── Lasso semantics ──

TEST_CASE("eval_lasso") {
    CHECK(eval_lasso(lasso("", "{a}"), f("G F[<=0] a")));
    CHECK_FALSE(eval_lasso(lasso("{}", "{a}"), f("F[<=0] a")));
    CHECK(eval_lasso(lasso("{}", "{a}{}"), f("G F[<=1] a")));
    CHECK_FALSE(eval_lasso(lasso("{}", "{a}{}{}"), f("G F[<=1] a")));
    CHECK(eval_lasso(lasso("{}{}", "{b}"), f("!a U b")));
    CHECK(eval_lasso(lasso("", "{a}{}"), f("G (!a | X !a)")));
}

TEST_CASE("eval_lasso: until, release and bounded always on the loop") {
    CHECK(eval_lasso(lasso("{a}", "{a}{b}"), f("G (a | b)")));
    CHECK_FALSE(eval_lasso(lasso("{a}", "{a}"), f("a U b")));
    CHECK(eval_lasso(lasso("{a}", "{a}"), f("b R a")));
    CHECK(eval_lasso(lasso("{a}{a}{a}", "{}"), f("G[<=2] a")));
    CHECK_FALSE(eval_lasso(lasso("{a}{a}", "{}"), f("G[<=2] a")));
    CHECK(eval_lasso(lasso("", "{}{}{}{}{}{a}"), f("G F[<=5] a")));
    CHECK_FALSE(eval_lasso(lasso("", "{}{}{}{}{}{a}"), f("G F[<=4] a")));
}

// ── Sampling ──

TEST_CASE("sample_lower_bound") {
    auto m = example1();
    auto r = sample_lower_bound(m, f("F[<=x] a"), Valuation::parse("x=5"), 1000, 6, 7);
    CHECK(r.samples == 1000);
    CHECK(r.certified_true + r.certified_false + r.unknown == r.samples);
    // Exact probability 31/32; five standard deviations below it is still above 0.9.
    CHECK(r.fraction() > 0.9);
    CHECK(r.rng == "mt19937_64");
    CHECK(r.seed == 7);

    auto un = sample_lower_bound(m, f("a & !a"), {}, 300, 4, 1);
    CHECK(un.certified_true == 0);

    auto loop = parse_chain("states 1\ninit 0\nlabel 0 a\ntrans 0 0 1\n");
    auto g = sample_lower_bound(loop, f("G a"), {}, 200, 10, 3);
    CHECK(g.certified_true == 0);
    CHECK(g.unknown == 200);
}

TEST_CASE("sample_lower_bound: identical seed, identical result") {
    auto m = example1();
    auto a = sample_lower_bound(m, f("F[<=x] a"), Valuation::parse("x=2"), 500, 3, 99);
    auto b = sample_lower_bound(m, f("F[<=x] a"), Valuation::parse("x=2"), 500, 3, 99);
    CHECK(a.certified_true == b.certified_true);
    CHECK(a.certified_false == b.certified_false);
    CHECK(a.unknown == b.unknown);
    // 3/4 exact; a different seed may differ but stays in range.
    CHECK(a.fraction() > 0.6);
    CHECK(a.fraction() < 0.9);
}

// ── Brute force ──

TEST_CASE("brute_force_min_set") {
    auto m = example1();
    CHECK(brute_force_min_set(m, f("F[<=x] a"), 5).points() == std::vector<Point>{{1}});
    CHECK(brute_force_min_set(m, f("F[<=x] a"), 5) == min_set_diamond(m, f("F[<=x] a"), 5));
    CHECK_THROWS_AS(brute_force_min_set(m, f("F[<=x] a & F[<=y] a & F[<=z] a"), 1000, 1000), ResourceLimit);
}

TEST_CASE("brute_force_min_set: single variable matches the shortest path") {
    testing::Rng rng(71);
    testing::ChainShape cs;
    cs.props = {"a"};
    for (int i = 0; i < 40; ++i) {
        auto m = testing::random_chain(rng, cs);
        auto s = brute_force_min_set(m, f("F[<=x] a"), 8);
        auto pos = min_val_pos(m, "a");
        if (pos && *pos <= 8) {
            CHECK(s.points() == std::vector<Point>{{*pos}});
        } else {
            CHECK(s.empty());
        }
    }
}

// ── DIMACS and 3-SAT fixtures ──

TEST_CASE("DIMACS parsing") {
    auto c = parse_dimacs("c comment\np cnf 3 2\n1 -2 0\n2 3\n0\n");
    CHECK(c.vars == 3);
    REQUIRE(c.clauses.size() == 2);
    CHECK(c.clauses[0] == std::vector<int>{1, -2});
    CHECK(c.clauses[1] == std::vector<int>{2, 3});
    CHECK(parse_dimacs(format_dimacs(c)).clauses == c.clauses);
    CHECK_THROWS_AS(parse_dimacs("1 2 0\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 5 0\n"), ParseError);
    CHECK_THROWS_AS(parse_dimacs("p cnf 2 1\n1 x 0\n"), ParseError);
}

TEST_CASE("sat_brute_force") {
    CHECK(sat_brute_force(parse_dimacs("p cnf 1 1\n1 0\n")));
    CHECK_FALSE(sat_brute_force(parse_dimacs("p cnf 1 2\n1 0\n-1 0\n")));
    CHECK_FALSE(sat_brute_force(parse_dimacs("p cnf 2 4\n1 2 0\n1 -2 0\n-1 2 0\n-1 -2 0\n")));
}

TEST_CASE("gen_3sat_fixture: single positive unit clause") {
    auto fx = gen_3sat_fixture(parse_dimacs("p cnf 1 1\n1 0\n"));
    CHECK(fx.chain.size() == 4);
    CHECK(variables(fx.formula) == std::vector<std::string>{"y1"});
    CHECK(check_pos(fx.chain, fx.formula, Valuation::parse("y1=1")));
    CHECK_FALSE(check_pos(fx.chain, fx.formula, Valuation::parse("y1=0")));
    CHECK(min_set_diamond(fx.chain, fx.formula).points() == std::vector<Point>{{1}});
}

TEST_CASE("gen_3sat_fixture: contradictory unit clauses") {
    auto fx = gen_3sat_fixture(parse_dimacs("p cnf 1 2\n1 0\n-1 0\n"));
    CHECK(emptiness_pos_diamond(fx.chain, fx.formula));
}

TEST_CASE("gen_3sat_fixture: malformed input") {
    CHECK_THROWS_AS(gen_3sat_fixture(Cnf{2, {}}), UsageError);
    CHECK_THROWS_AS(gen_3sat_fixture(Cnf{2, {{1, 2, -1, 2}}}), UsageError);
    CHECK_THROWS_AS(gen_3sat_fixture(Cnf{2, {{3}}}), UsageError);
    auto empty_clause = gen_3sat_fixture(Cnf{1, {{1}, {}}});
    CHECK(emptiness_pos_diamond(empty_clause.chain, empty_clause.formula));
}

// ── Properties ──

TEST_CASE("property: prefix verdicts are sound for every lasso extension") {
    testing::Rng rng(72);
    std::size_t decided = 0;
    for (int i = 0; i < 1500; ++i) {
        auto psi = random_closed(rng);
        auto w = testing::random_lasso(rng, {"a", "b"}, 5, 3);
        const auto v = eval_prefix(w.stem, psi);
        if (v == Verdict3::Unknown) continue;
        ++decided;
        INFO(to_string(psi), " on ", to_string(w.stem), " (", to_string(w.loop), ")^w");
        CHECK(eval_lasso(w, psi) == (v == Verdict3::True));
    }
    CHECK(decided > 300);
}

TEST_CASE("property: prefix verdicts only sharpen as the prefix grows") {
    testing::Rng rng(73);
    for (int i = 0; i < 500; ++i) {
        auto psi = random_closed(rng);
        std::vector<Letter> u;
        Verdict3 last = Verdict3::Unknown;
        for (int k = 0; k < 8; ++k) {
            u.push_back(testing::random_letter(rng, {"a", "b"}));
            const auto v = eval_prefix(u, psi);
            if (last != Verdict3::Unknown) CHECK(v == last);
            last = v;
        }
    }
}

TEST_CASE("property: prefix certification is monotone in the valuation") {
    testing::Rng rng(74);
    testing::FormulaShape shape;
    shape.allow_until = false;
    shape.allow_global = false;
    for (int i = 0; i < 400; ++i) {
        auto phi = testing::random_diamond_formula(rng, shape);
        std::vector<Letter> u;
        for (int k = 0; k < 6; ++k) u.push_back(testing::random_letter(rng, {"a", "b"}));
        Valuation v, w;
        for (const auto& x : variables(phi)) {
            const auto lo = testing::uniform(rng, 0, 3);
            v.set(x, lo);
            w.set(x, lo + testing::uniform(rng, 0, 3));
        }
        if (eval_prefix(u, substitute(phi, v)) == Verdict3::True) CHECK(eval_prefix(u, substitute(phi, w)) == Verdict3::True);
    }
}

TEST_CASE("property: sampled certificates never contradict the exact checker") {
    testing::Rng rng(75);
    testing::FormulaShape shape;
    shape.max_depth = 2;
    testing::ChainShape cs;
    cs.max_states = 4;
    for (int i = 0; i < 60; ++i) {
        auto m = testing::random_chain(rng, cs);
        auto phi = testing::random_diamond_formula(rng, shape);
        Valuation v;
        for (const auto& x : variables(phi)) v.set(x, testing::uniform(rng, 0, 3));
        auto r = sample_lower_bound(m, phi, v, 50, 8, i);
        if (r.certified_true > 0) CHECK(check_pos(m, phi, v));
        if (r.certified_false == r.samples) CHECK_FALSE(check_as1(m, phi, v));
    }
}
