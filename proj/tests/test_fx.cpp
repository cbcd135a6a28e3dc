#include "doctest.h"

#include "pltl/errors.hpp"
#include "pltl/fx.hpp"
#include "pltl/oracle.hpp"
#include "support/checks.hpp"
#include "support/random_models.hpp"

#include <algorithm>

using namespace pltl;

namespace {

MarkovChain example1() {
    return parse_chain("states 2\ninit 0\nlabel 1 a\ntrans 0 0 1/2\ntrans 0 1 1/2\ntrans 1 1 1\n");
}

MarkovChain line_chain() {
    return parse_chain("states 3\ninit 0\nlabel 2 a\ntrans 0 1 1\ntrans 1 2 1\ntrans 2 2 1\n");
}

bool same(const FormulaPtr& a, const char* b) { return equal(a, to_nnf(parse_formula(b))); }

// Random pLTL(F,X) formula in NNF.
FormulaPtr random_fx(testing::Rng& rng, std::size_t depth, bool params, bool disjunction, bool constants) {
    auto literal = [&] {
        const char* p = testing::coin(rng) ? "a" : "b";
        return testing::coin(rng, 0.75) ? make_atom(p) : make_neg_atom(p);
    };
    if (depth == 0 || testing::coin(rng, 0.3)) return literal();
    auto sub = [&] { return random_fx(rng, depth - 1, params, disjunction, constants); };
    switch (testing::uniform(rng, 0, 5)) {
    case 0: return make_binary(Op::And, sub(), sub());
    case 1: return disjunction ? make_binary(Op::Or, sub(), sub()) : make_binary(Op::And, sub(), sub());
    case 2: return make_unary(Op::Next, sub());
    case 3: return make_unary(Op::Eventually, sub());
    case 4:
        if (params) return make_bounded(Op::BoundedEventually, Bound::param(testing::coin(rng) ? "x" : "y"), sub());
        return make_unary(Op::Eventually, sub());
    default:
        if (constants)
            return make_bounded(testing::coin(rng) ? Op::BoundedEventually : Op::BoundedAlways,
                                Bound::constant(testing::uniform(rng, 0, 2)), sub());
        return make_unary(Op::Next, sub());
    }
}

std::vector<std::string> labels_of(const Letter& l) { return {l.begin(), l.end()}; }

// Runs the automaton over stem . loop^k for k large enough that the state at
// loop boundaries has stabilised (partial order: at most size() changes).
bool dba_accepts(const Dba& a, const LassoWord& w) {
    std::uint32_t q = a.initial;
    auto step = [&](const Letter& l) { q = a.delta[q][a.letter_of(labels_of(l))]; };
    for (const auto& l : w.stem) step(l);
    for (std::size_t k = 0; k <= a.size() + 1; ++k)
        for (const auto& l : w.loop) step(l);
    return q == a.final_state;
}

std::vector<Letter> path_letters(const MarkovChain& m, const std::vector<StateId>& path) {
    std::vector<Letter> out;
    for (auto s : path) out.emplace_back(m.labels(s).begin(), m.labels(s).end());
    return out;
}

} // namespace

// ── DNF ──

TEST_CASE("dnf_split") {
    auto a = dnf_split(to_nnf(parse_formula("F[<=x] (a | b)")));
    REQUIRE(a.size() == 2);
    CHECK(same(a[0], "F[<=x] a"));
    CHECK(same(a[1], "F[<=x] b"));
    auto b = dnf_split(to_nnf(parse_formula("a & b")));
    REQUIRE(b.size() == 1);
    CHECK(same(b[0], "a & b"));
    auto c = dnf_split(to_nnf(parse_formula("(a | b) & c")));
    REQUIRE(c.size() == 2);
    CHECK(same(c[0], "a & c"));
    CHECK(same(c[1], "b & c"));
}

// ── Automata ──

TEST_CASE("build_dba: atom") {
    auto d = build_dba(parse_formula("a"));
    CHECK(d.live_size() == 2);
    CHECK(d.diameter() == 1);
    CHECK(d.partially_ordered());
    CHECK(d.delta[d.initial][d.letter_of({"a"})] == d.final_state);
    CHECK(d.delta[d.initial][d.letter_of({})] != d.final_state);
}

TEST_CASE("build_dba: eventually") {
    auto d = build_dba(parse_formula("F a"));
    CHECK(d.live_size() == 2);
    CHECK(d.diameter() == 1);
    CHECK(d.delta[d.initial][d.letter_of({})] == d.initial);
    CHECK(d.delta[d.initial][d.letter_of({"a"})] == d.final_state);
}

TEST_CASE("build_dba: next adds a fresh initial state") {
    auto d = build_dba(parse_formula("X a"));
    CHECK(d.diameter() == 2);
    CHECK(d.live_size() == 3);
    auto c = build_dba(parse_formula("F a & X b"));
    CHECK(c.diameter() <= size(parse_formula("F a & X b")));
    CHECK(c.partially_ordered());
}

TEST_CASE("build_dba: uncovered shapes are rejected") {
    CHECK_THROWS_AS(build_dba(parse_formula("F (a & X b)")), FragmentError);
    CHECK_THROWS_AS(build_dba(parse_formula("a | b")), FragmentError);
    CHECK_THROWS_AS(build_dba(parse_formula("F[<=x] a")), FragmentError);
    CHECK_NOTHROW(build_dba(parse_formula("F (a & F b & !c)")));
    CHECK_NOTHROW(build_dba(parse_formula("F (X a & X b)")));
}

// ── Emptiness ──

TEST_CASE("fx_bound") {
    CHECK(fx_bound(example1(), parse_formula("F[<=x] a")) == 4);
    auto fig1 = load_chain("tests/data/fig1.dtmc");
    CHECK(fx_bound(fig1, parse_formula("F[<=x1] r & F[<=x2] b & F[<=x3] g")) == 33 * 8);
}

TEST_CASE("emptiness_pos_fx: nonempty with a certified witness at v-bar") {
    auto m = example1();
    auto f = parse_formula("F[<=x] a");
    FxWitness w;
    CHECK_FALSE(emptiness_pos_fx(m, f, &w));
    CHECK(w.valuation.at("x") == 4);
    CHECK(eval_prefix(path_letters(m, w.path), substitute(f, w.valuation)) == Verdict3::True);
}

TEST_CASE("emptiness_pos_fx: contradictions and unsatisfiable fixtures") {
    CHECK(emptiness_pos_fx(example1(), parse_formula("a & !a")));
    CHECK(emptiness_pos_fx(example1(), parse_formula("F[<=x] (a & !a)")));
    auto fx = gen_3sat_fixture(parse_dimacs("p cnf 1 2\n1 0\n-1 0\n"));
    CHECK(emptiness_pos_fx(fx.chain, fx.formula));
    auto sat = gen_3sat_fixture(parse_dimacs("p cnf 2 2\n1 2 0\n-1 0\n"));
    CHECK_FALSE(emptiness_pos_fx(sat.chain, sat.formula));
}

TEST_CASE("emptiness_pos_fx: uncovered disjuncts fall back to the diamond engine") {
    auto m = parse_chain("states 3\ninit 0\nlabel 0 a\nlabel 1 a\nlabel 2 b\ntrans 0 1 1\ntrans 1 2 1\ntrans 2 2 1\n");
    FxStats st;
    FxWitness w;
    CHECK_FALSE(emptiness_pos_fx(m, parse_formula("F[<=x] (a & X b)"), &w, &st));
    CHECK(st.fallback_disjuncts == 1);
    CHECK(eval_prefix(path_letters(m, w.path), substitute(parse_formula("F[<=x] (a & X b)"), w.valuation)) ==
          Verdict3::True);
    CHECK(emptiness_pos_fx(m, parse_formula("F[<=x] (b & X a)")));
}

TEST_CASE("emptiness_as1_fx") {
    CHECK_FALSE(emptiness_as1_fx(line_chain(), parse_formula("F[<=x] a")));
    CHECK(emptiness_as1_fx(example1(), parse_formula("F[<=x] a")));
    CHECK_FALSE(emptiness_as1_fx(parse_chain("states 1\ninit 0\nlabel 0 a\ntrans 0 0 1\n"), parse_formula("a")));
}

// ── Minimal sets ──

TEST_CASE("min_set_fx") {
    auto s = min_set_fx(example1(), parse_formula("F[<=x] a"));
    CHECK(s.points() == std::vector<Point>{{1}});
    CHECK(min_set_fx(example1(), parse_formula("F[<=x] c")).empty());
    auto z = min_set_fx(example1(), parse_formula("F a"));
    CHECK(z.size() == 1);
    CHECK(z.dim() == 0);
}

TEST_CASE("min_set_fx: three-parameter chain") {
    auto m = load_chain("tests/data/fig1.dtmc");
    auto f = parse_formula("F[<=x1] r & F[<=x2] b & F[<=x3] g");
    auto s = min_set_fx(m, f);
    std::vector<Point> expect;
    for (std::uint64_t i = 0; i <= 3; ++i)
        for (std::uint64_t j = 0; j <= 3; ++j) expect.push_back({2 + i, 10 - i + j, 20 - i - j});
    std::sort(expect.begin(), expect.end());
    CHECK(s.points() == expect);
    CHECK(testing::minset_invariants_hold(s, fx_bound(m, f)));
}

// ── Properties ──

TEST_CASE("property: automata accept exactly the satisfying lassos") {
    testing::Rng rng(61);
    std::size_t built = 0, rejected = 0;
    for (int i = 0; i < 800; ++i) {
        auto f = random_fx(rng, 3, false, false, false);
        Dba d;
        try {
            d = build_dba(f);
        } catch (const FragmentError&) {
            ++rejected;
            continue;
        }
        ++built;
        CHECK(d.partially_ordered());
        CHECK(d.diameter() <= size(f));
        for (int k = 0; k < 8; ++k) {
            auto w = testing::random_lasso(rng, {"a", "b"});
            INFO(to_string(f), " on ", to_string(w.stem), " (", to_string(w.loop), ")^w");
            CHECK(dba_accepts(d, w) == eval_lasso(w, f));
        }
    }
    CHECK(built > 300);
}

TEST_CASE("property: DNF disjuncts are disjunction-free, no larger, and equivalent") {
    testing::Rng rng(62);
    for (int i = 0; i < 400; ++i) {
        auto f = random_fx(rng, 3, false, true, false);
        auto ds = dnf_split(f);
        for (const auto& d : ds) {
            for (const auto& g : closure(d)) CHECK(g->op != Op::Or);
            CHECK(size(d) <= size(f));
        }
        for (int k = 0; k < 6; ++k) {
            auto w = testing::random_lasso(rng, {"a", "b"});
            bool any = false;
            for (const auto& d : ds) any = any || eval_lasso(w, d);
            CHECK(any == eval_lasso(w, f));
        }
    }
}

TEST_CASE("property: emptiness at v-bar matches existence in the doubled box, witnesses certify") {
    testing::Rng rng(63);
    testing::ChainShape cs;
    cs.max_states = 5;
    std::size_t nonempty = 0;
    for (int i = 0; i < 150; ++i) {
        auto m = testing::random_chain(rng, cs);
        auto f = random_fx(rng, 3, true, true, true);
        if (size(f) > 6) continue;
        const auto vars = variables(f);
        if (vars.empty() || vars.size() > 2) continue;
        const std::uint64_t bound = fx_bound(m, f);
        FxWitness w;
        const bool empty = emptiness_pos_fx(m, f, &w);
        // Monotone in the valuation, so existence in the box is decided by its top corner.
        DiamondChecker c(m, f);
        const bool exists = c.check_pos(Point(vars.size(), 2 * bound));
        INFO(to_string(f), "\n", format_chain(m));
        CHECK(empty == !exists);
        if (!empty) {
            ++nonempty;
            for (const auto& x : vars) CHECK(w.valuation.at(x) == bound);
            CHECK(c.check_pos(w.valuation));
            CHECK(w.path.size() <= bound + 1);
            CHECK(eval_prefix(path_letters(m, w.path), substitute(f, w.valuation)) == Verdict3::True);
        }
        CHECK(emptiness_as1_fx(m, f) == !c.check_as1(Point(vars.size(), 2 * bound)));
    }
    CHECK(nonempty > 20);
}
