#include "pltl/cli.hpp"

#include "pltl/buchi.hpp"
#include "pltl/diamond.hpp"
#include "pltl/errors.hpp"
#include "pltl/formula.hpp"
#include "pltl/fx.hpp"
#include "pltl/markov.hpp"
#include "pltl/oracle.hpp"
#include "pltl/reach.hpp"
#include "pltl/valuation.hpp"
#include "pltl/word.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <deque>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

namespace pltl::cli {

namespace {

// ── Options ──

struct Options {
    std::string chain;
    std::string formula;
    std::string formula_file;
    std::string threshold = ">0";
    std::string valuation;
    bool valuation_given = false;
    bool witness = false;
    std::string emit_automaton;
    std::uint64_t seed = 0;
    std::size_t max_nodes = kDefaultMaxProductNodes;
    std::string format = "text";

    // oracle
    std::uint64_t samples = 1000;
    std::size_t horizon = 20;
    std::string stem;
    std::string loop;
    std::string cnf;
    std::vector<unsigned> random_cnf;  // n, k
    std::string out_chain;
    bool check_fixture = false;
};

enum class Kind { Pos, As1, Geq };

struct Threshold {
    Kind kind = Kind::Pos;
    Rational p;
    std::string text;
};

Threshold parse_threshold(std::string s) {
    s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }), s.end());
    Threshold t;
    t.text = s;
    if (s == ">0") return t;
    if (s == "=1" || s == "==1") {
        t.kind = Kind::As1;
        t.text = "=1";
        return t;
    }
    if (s.rfind(">=", 0) == 0) {
        try {
            t.p = parse_rational(s.substr(2));
        } catch (const std::invalid_argument&) {
            throw UsageError("threshold probability '" + s.substr(2) + "' is not a number");
        }
        if (t.p <= 0 || t.p > 1) throw UsageError("threshold probability must lie in (0,1]");
        if (t.p == 1) {
            t.kind = Kind::As1;
            t.text = "=1";
        } else {
            t.kind = Kind::Geq;
            t.text = ">=" + to_string(t.p);
        }
        return t;
    }
    throw UsageError("threshold must be \">0\", \"=1\" or \">=p\", got '" + s + "'");
}

// ── Report ──

class Report {
public:
    void add(const std::string& key, const std::string& value) {
        lines_.emplace_back(key, value);
        json_[key] = value;
    }
    void add(const std::string& key, const char* value) { add(key, std::string(value)); }
    void add(const std::string& key, bool value) {
        lines_.emplace_back(key, value ? "true" : "false");
        json_[key] = value;
    }
    void add(const std::string& key, std::uint64_t value) {
        lines_.emplace_back(key, std::to_string(value));
        json_[key] = value;
    }
    void add_list(const std::string& key, const std::vector<std::string>& values) {
        for (const auto& v : values) lines_.emplace_back(key, v);
        json_[key] = values;
    }

    void print(std::ostream& out, bool machine) const {
        for (const auto& [k, v] : lines_) out << k << ": " << v << '\n';
        if (machine) out << "BEGIN-RESULT\n" << json_.dump(2) << "\nEND-RESULT\n";
    }

private:
    std::vector<std::pair<std::string, std::string>> lines_;
    nlohmann::ordered_json json_;
};

std::string valuation_text(const Valuation& v) { return v.size() ? v.to_string() : "-"; }

std::string path_text(const std::vector<StateId>& path) {
    std::string s;
    for (StateId x : path) s += (s.empty() ? "" : " ") + std::to_string(x);
    return s;
}

std::vector<Letter> letters_of(const MarkovChain& m, const std::vector<StateId>& path) {
    std::vector<Letter> out;
    for (StateId s : path) out.emplace_back(m.labels(s).begin(), m.labels(s).end());
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// ── Query ──

struct Query {
    MarkovChain m;
    FormulaPtr phi;
    FormulaPtr nnf;
    FragmentClass cls = FragmentClass::FullPLTL;
    Threshold th;
    std::vector<std::string> vars;
};

FormulaPtr load_formula(const Options& o) {
    if (o.formula.empty() == o.formula_file.empty()) throw UsageError("give exactly one of --formula and --formula-file");
    std::string text = o.formula.empty() ? read_file(o.formula_file) : o.formula;
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.pop_back();
    return parse_formula(text);
}

Query load_query(const Options& o) {
    if (o.chain.empty()) throw UsageError("--chain is required");
    Query q;
    q.m = load_chain(o.chain);
    q.phi = load_formula(o);
    q.nnf = to_nnf(q.phi);
    q.cls = classify(q.nnf);
    q.th = parse_threshold(o.threshold);
    q.vars = variables(q.nnf);
    if (q.cls == FragmentClass::FullPLTL)
        throw FragmentError("formula is outside pLTL-diamond: " + to_string(q.phi));
    if (q.th.kind == Kind::Geq && q.cls != FragmentClass::Reach)
        throw FragmentError("threshold " + q.th.text + " is supported only for F[<=x] a (class Reach); class " +
                            to_string(q.cls) + " supports \">0\" and \"=1\"");
    return q;
}

Valuation user_valuation(const Options& o, const Query& q) {
    Valuation v = Valuation::parse(o.valuation);
    for (const auto& x : q.vars)
        if (!v.contains(x)) throw UsageError("valuation does not assign variable '" + x + "'");
    for (const auto& [x, _] : v.values())
        if (std::find(q.vars.begin(), q.vars.end(), x) == q.vars.end())
            throw UsageError("valuation assigns '" + x + "', which does not occur in the formula");
    return v;
}

Valuation uniform(const std::vector<std::string>& vars, std::uint64_t n) {
    Valuation v;
    for (const auto& x : vars) v.set(x, n);
    return v;
}

void add_header(Report& r, const std::string& command, const Query& q) {
    r.add("command", command);
    r.add("formula", to_string(q.phi));
    r.add("fragment", to_string(q.cls));
    r.add("threshold", q.th.text);
    r.add("states", static_cast<std::uint64_t>(q.m.size()));
}

void add_diamond_stats(Report& r, const DiamondStats& s) {
    r.add("stat.g-states", static_cast<std::uint64_t>(s.g_states));
    r.add("stat.b-states", static_cast<std::uint64_t>(s.b_states));
    r.add("stat.product-nodes", static_cast<std::uint64_t>(s.product_nodes));
    r.add("stat.product-edges", static_cast<std::uint64_t>(s.product_edges));
}

// Shortest path from the initial state into `target`.
std::vector<StateId> shortest_path(const MarkovChain& m, const StateSet& target) {
    constexpr std::size_t kNone = SIZE_MAX;
    std::vector<std::size_t> parent(m.size(), kNone);
    std::deque<StateId> queue{m.initial()};
    parent[m.initial()] = m.initial();
    while (!queue.empty()) {
        const StateId s = queue.front();
        queue.pop_front();
        if (target[s]) {
            std::vector<StateId> path;
            for (StateId x = s;; x = static_cast<StateId>(parent[x])) {
                path.push_back(x);
                if (parent[x] == x) break;
            }
            std::reverse(path.begin(), path.end());
            return path;
        }
        for (const auto& t : m.row(s))
            if (parent[t.to] == kNone) {
                parent[t.to] = s;
                queue.push_back(t.to);
            }
    }
    return {};
}

void emit_prefix_witness(Report& r, const Query& q, const Valuation& v, const std::vector<StateId>& path) {
    r.add("witness-valuation", valuation_text(v));
    r.add("witness-path", path_text(path));
    r.add("witness-confirmed", eval_prefix(letters_of(q.m, path), substitute(q.nnf, v)) == Verdict3::True);
}

void emit_lasso_witness(Report& r, const Query& q, const Valuation& v, const StateLasso& l) {
    r.add("witness-valuation", valuation_text(v));
    r.add("witness-stem", path_text(l.stem));
    r.add("witness-loop", path_text(l.loop));
    const LassoWord w{letters_of(q.m, l.stem), letters_of(q.m, l.loop)};
    r.add("witness-confirmed", !l.loop.empty() && eval_lasso(w, substitute(q.nnf, v)));
}

void lasso_witness(Report& r, const Query& q, const Options& o, const Valuation& v) {
    DiamondChecker c(q.m, q.nnf, o.max_nodes);
    StateLasso lasso;
    DiamondStats st;
    if (!c.check_pos(v, &st, &lasso)) throw std::logic_error("witness valuation rejected by the product check");
    emit_lasso_witness(r, q, v, lasso);
}

void maybe_emit_automaton(Report& r, const Query& q, const Options& o) {
    if (o.emit_automaton.empty()) return;
    const Valuation v = o.valuation_given ? user_valuation(o, q) : uniform(q.vars, 0);
    std::ofstream out(o.emit_automaton);
    if (!out) throw UsageError("cannot write '" + o.emit_automaton + "'");
    out << emit_automata(q.nnf, v);
    r.add("automaton-file", o.emit_automaton);
    r.add("automaton-valuation", valuation_text(v));
}

std::string reach_atom(const Query& q) { return q.nnf->lhs->name; }
std::string buchi_atom(const Query& q) { return q.nnf->lhs->lhs->name; }

// ── check ──

void cmd_check(const Options& o, Report& r) {
    const Query q = load_query(o);
    add_header(r, "check", q);
    auto verdict = [&](bool nonempty) { r.add("verdict", nonempty ? "nonempty" : "empty"); };
    auto minimum = [&](const MinValue& mv) {
        verdict(mv.has_value());
        if (mv) r.add("minimum", valuation_text(uniform(q.vars, *mv)));
        return mv;
    };

    switch (q.cls) {
    case FragmentClass::Reach: {
        const std::string a = reach_atom(q);
        if (q.th.kind == Kind::Geq) {
            GeqStats st;
            const MinValue mv = minimum(min_val_geq(q.m, a, q.th.p, &st));
            r.add("stat.reach-steps", st.steps);
            r.add("stat.boundary", st.boundary);
            if (mv && o.witness) r.add("witness-probability", to_string(bounded_reach_prob(q.m, label_set(q.m, a), *mv)));
            break;
        }
        const MinValue mv = minimum(q.th.kind == Kind::Pos ? min_val_pos(q.m, a) : min_val_as1(q.m, a));
        if (mv && o.witness && q.th.kind == Kind::Pos)
            emit_prefix_witness(r, q, uniform(q.vars, *mv), shortest_path(q.m, label_set(q.m, a)));
        break;
    }
    case FragmentClass::Buchi: {
        const std::string a = buchi_atom(q);
        const MinValue mv = minimum(q.th.kind == Kind::Pos ? min_val_pos_buchi(q.m, a) : min_val_as1_buchi(q.m, a));
        if (mv && o.witness && q.th.kind == Kind::Pos) lasso_witness(r, q, o, uniform(q.vars, *mv));
        break;
    }
    case FragmentClass::GeneralizedBuchi: {
        if (q.th.kind == Kind::Pos) {
            const bool empty = emptiness_pos_genbuchi(q.m, q.nnf);
            verdict(!empty);
            if (!empty && o.witness) {
                const std::uint64_t n = q.m.size() * std::max<std::size_t>(q.vars.size(), 1);
                lasso_witness(r, q, o, uniform(q.vars, n));
            }
        } else {
            const auto ms = min_set_as1_genbuchi(q.m, q.nnf);
            verdict(ms.has_value());
            if (ms) r.add("minimum", valuation_text(to_valuation(ms->points().front(), ms->variables())));
        }
        break;
    }
    case FragmentClass::FX: {
        const std::uint64_t n = fx_bound(q.m, q.nnf);
        r.add("vbar", n);
        if (q.th.kind == Kind::Pos) {
            FxWitness w;
            FxStats st;
            const bool empty = emptiness_pos_fx(q.m, q.nnf, &w, &st, o.max_nodes);
            verdict(!empty);
            r.add("stat.disjuncts", static_cast<std::uint64_t>(st.disjuncts));
            r.add("stat.dba-states", static_cast<std::uint64_t>(st.dba_states));
            r.add("stat.fallback-disjuncts", static_cast<std::uint64_t>(st.fallback_disjuncts));
            if (!empty && o.witness) emit_prefix_witness(r, q, w.valuation, w.path);
        } else {
            DiamondStats st;
            const bool empty = emptiness_as1_fx(q.m, q.nnf, &st, o.max_nodes);
            verdict(!empty);
            add_diamond_stats(r, st);
            if (!empty && o.witness) r.add("witness-valuation", valuation_text(uniform(q.vars, n)));
        }
        break;
    }
    case FragmentClass::Diamond: {
        DiamondChecker c(q.m, q.nnf, o.max_nodes);
        r.add("vbar", c.vbar());
        const Valuation vbar = uniform(q.vars, c.vbar());
        DiamondStats st;
        StateLasso lasso;
        const bool ok = q.th.kind == Kind::Pos ? c.check_pos(vbar, &st, o.witness ? &lasso : nullptr)
                                               : c.check_as1(vbar, &st);
        verdict(ok);
        add_diamond_stats(r, st);
        if (ok && o.witness) {
            if (q.th.kind == Kind::Pos)
                emit_lasso_witness(r, q, vbar, lasso);
            else
                r.add("witness-valuation", valuation_text(vbar));
        }
        break;
    }
    case FragmentClass::FullPLTL: break;
    }
    maybe_emit_automaton(r, q, o);
}

// ── minset ──

MinimalSet single(const std::vector<std::string>& vars, const MinValue& mv) {
    MinimalSet s(vars);
    if (mv) s.insert_minimal(Point(vars.size(), *mv));
    return s;
}

void cmd_minset(const Options& o, Report& r) {
    const Query q = load_query(o);
    add_header(r, "minset", q);
    MinimalSet set(q.vars);
    BisectionStats bs;
    std::optional<std::uint64_t> box;  // N of the searched hypercube, when bisection ran

    switch (q.cls) {
    case FragmentClass::Reach: {
        const std::string a = reach_atom(q);
        if (q.th.kind == Kind::Geq) {
            GeqStats st;
            set = single(q.vars, min_val_geq(q.m, a, q.th.p, &st));
            r.add("stat.reach-steps", st.steps);
        } else {
            set = single(q.vars, q.th.kind == Kind::Pos ? min_val_pos(q.m, a) : min_val_as1(q.m, a));
        }
        break;
    }
    case FragmentClass::Buchi: {
        const std::string a = buchi_atom(q);
        set = single(q.vars, q.th.kind == Kind::Pos ? min_val_pos_buchi(q.m, a) : min_val_as1_buchi(q.m, a));
        break;
    }
    case FragmentClass::GeneralizedBuchi: {
        if (q.th.kind == Kind::Pos) {
            if (auto s = min_set_pos_genbuchi(q.m, q.nnf, &bs, o.max_nodes)) {
                set = *s;
                box = q.m.size() * q.vars.size();
            }
        } else if (auto s = min_set_as1_genbuchi(q.m, q.nnf)) {
            set = *s;
        }
        break;
    }
    case FragmentClass::FX: {
        const std::uint64_t n = fx_bound(q.m, q.nnf);
        box = n;
        if (q.th.kind == Kind::Pos) {
            set = min_set_fx(q.m, q.nnf, &bs, o.max_nodes);
        } else {
            DiamondChecker c(q.m, q.nnf, o.max_nodes);
            if (c.check_as1(uniform(q.vars, n)))
                set = bisection_min_set([&](const Point& p) { return c.check_as1(p); },
                                        Hypercube::uniform(q.vars.size(), n), q.vars, &bs);
        }
        break;
    }
    case FragmentClass::Diamond: {
        DiamondChecker c(q.m, q.nnf, o.max_nodes);
        const std::uint64_t n = c.vbar();
        box = n;
        auto oracle = [&](const Point& p) { return q.th.kind == Kind::Pos ? c.check_pos(p) : c.check_as1(p); };
        if (oracle(Point(q.vars.size(), n)))
            set = bisection_min_set(oracle, Hypercube::uniform(q.vars.size(), n), q.vars, &bs);
        break;
    }
    case FragmentClass::FullPLTL: break;
    }

    r.add("verdict", set.empty() ? "empty" : "nonempty");
    r.add("size", static_cast<std::uint64_t>(set.size()));
    if (box) {
        r.add("hypercube", "{0.." + std::to_string(*box) + "}^" + std::to_string(q.vars.size()));
        if (q.vars.size() >= 2) {
            std::ostringstream b;
            b << std::setprecision(6) << antichain_bound(*box, q.vars.size());
            r.add("antichain-bound", b.str());
        }
        r.add("stat.oracle-calls", bs.oracle_calls);
    }
    std::vector<std::string> lines;
    for (const auto& p : set.points()) lines.push_back(valuation_text(to_valuation(p, set.variables())));
    r.add_list("valuation", lines);
    maybe_emit_automaton(r, q, o);
}

// ── member / prob ──

void cmd_member(const Options& o, Report& r) {
    if (!o.valuation_given) throw UsageError("member requires --valuation");
    const Query q = load_query(o);
    const Valuation v = user_valuation(o, q);
    add_header(r, "member", q);
    r.add("valuation", valuation_text(v));
    bool in = false;
    switch (q.cls) {
    case FragmentClass::Reach: {
        const std::string a = reach_atom(q);
        const std::uint64_t n = v.at(q.vars.front());
        if (q.th.kind == Kind::Geq) {
            in = bounded_reach_prob(q.m, label_set(q.m, a), n) >= q.th.p;
        } else {
            const MinValue mv = q.th.kind == Kind::Pos ? min_val_pos(q.m, a) : min_val_as1(q.m, a);
            in = mv && *mv <= n;
        }
        break;
    }
    case FragmentClass::Buchi: {
        const std::string a = buchi_atom(q);
        const MinValue mv = q.th.kind == Kind::Pos ? min_val_pos_buchi(q.m, a) : min_val_as1_buchi(q.m, a);
        in = mv && *mv <= v.at(q.vars.front());
        break;
    }
    default: {
        DiamondChecker c(q.m, q.nnf, o.max_nodes);
        DiamondStats st;
        in = q.th.kind == Kind::Pos ? c.check_pos(v, &st) : c.check_as1(v, &st);
        add_diamond_stats(r, st);
        break;
    }
    }
    r.add("member", in);
    maybe_emit_automaton(r, q, o);
}

void cmd_prob(const Options& o, Report& r) {
    if (!o.valuation_given) throw UsageError("prob requires --valuation");
    Options oo = o;
    oo.threshold = ">0";
    const Query q = load_query(oo);
    if (q.cls != FragmentClass::Reach)
        throw FragmentError("exact probabilities are computed for F[<=x] a (class Reach) only; got class " +
                            to_string(q.cls));
    const Valuation v = user_valuation(o, q);
    r.add("command", "prob");
    r.add("formula", to_string(q.phi));
    r.add("fragment", to_string(q.cls));
    r.add("valuation", valuation_text(v));
    const Rational p = bounded_reach_prob(q.m, label_set(q.m, reach_atom(q)), v.at(q.vars.front()));
    r.add("probability", to_string(p));
    std::ostringstream d;
    d << std::setprecision(12) << p.convert_to<double>();
    r.add("probability-approx", d.str());
}

// ── oracle ──

void cmd_sample(const Options& o, Report& r) {
    if (o.chain.empty()) throw UsageError("--chain is required");
    const MarkovChain m = load_chain(o.chain);
    const FormulaPtr phi = load_formula(o);
    const auto vars = variables(phi);
    const Valuation v = o.valuation_given ? Valuation::parse(o.valuation) : Valuation{};
    for (const auto& x : vars)
        if (!v.contains(x)) throw UsageError("valuation does not assign variable '" + x + "'");
    const SampleResult s = sample_lower_bound(m, to_nnf(phi), v, o.samples, o.horizon, o.seed);
    r.add("command", "oracle sample");
    r.add("formula", to_string(phi));
    r.add("valuation", valuation_text(v));
    r.add("rng", s.rng);
    r.add("seed", s.seed);
    r.add("horizon", static_cast<std::uint64_t>(o.horizon));
    r.add("samples", s.samples);
    r.add("certified-true", s.certified_true);
    r.add("certified-false", s.certified_false);
    r.add("unknown", s.unknown);
    std::ostringstream f;
    f << std::fixed << std::setprecision(6) << s.fraction();
    r.add("fraction", f.str());
}

void cmd_lasso_eval(const Options& o, Report& r) {
    const FormulaPtr phi = load_formula(o);
    const FormulaPtr nnf = to_nnf(phi);
    const Valuation v = o.valuation_given ? Valuation::parse(o.valuation) : Valuation{};
    const LassoWord w{parse_letters(o.stem), parse_letters(o.loop)};
    if (w.loop.empty()) throw UsageError("--loop must contain at least one letter");
    r.add("command", "oracle lasso-eval");
    r.add("formula", to_string(phi));
    r.add("valuation", valuation_text(v));
    r.add("word", to_string(w.stem) + "(" + to_string(w.loop) + ")^w");
    r.add("eval-lasso", eval_lasso(w, substitute(nnf, v)));
    if (classify(nnf) != FragmentClass::FullPLTL) r.add("automaton", accepts_lasso(nnf, v, w));
}

Cnf random_cnf(unsigned n, unsigned k, std::uint64_t seed) {
    if (n == 0) throw UsageError("random CNF needs at least one variable");
    std::mt19937_64 rng(seed);
    Cnf c;
    c.vars = n;
    for (unsigned i = 0; i < k; ++i) {
        std::vector<int> clause;
        const unsigned len = std::uniform_int_distribution<unsigned>(1, 3)(rng);
        for (unsigned j = 0; j < len; ++j) {
            const int v = static_cast<int>(std::uniform_int_distribution<unsigned>(1, n)(rng));
            clause.push_back(std::bernoulli_distribution(0.5)(rng) ? v : -v);
        }
        c.clauses.push_back(clause);
    }
    return c;
}

void cmd_gen3sat(const Options& o, Report& r) {
    Cnf cnf;
    if (!o.cnf.empty() == !o.random_cnf.empty()) throw UsageError("give exactly one of --cnf and --random");
    if (!o.cnf.empty()) {
        cnf = parse_dimacs(read_file(o.cnf));
    } else {
        if (o.random_cnf.size() != 2) throw UsageError("--random expects two numbers: variables clauses");
        cnf = random_cnf(o.random_cnf[0], o.random_cnf[1], o.seed);
    }
    const SatFixture fx = gen_3sat_fixture(cnf);
    r.add("command", "oracle gen3sat");
    r.add("cnf", format_dimacs(cnf).substr(0, format_dimacs(cnf).find('\n')));
    std::vector<std::string> clauses;
    for (const auto& c : cnf.clauses) {
        std::string s;
        for (int l : c) s += (s.empty() ? "" : " ") + std::to_string(l);
        clauses.push_back(s);
    }
    r.add_list("clause", clauses);
    r.add("formula", to_string(fx.formula));
    r.add("states", static_cast<std::uint64_t>(fx.chain.size()));
    r.add("sat-brute-force", sat_brute_force(cnf));
    if (!o.out_chain.empty()) {
        std::ofstream out(o.out_chain);
        if (!out) throw UsageError("cannot write '" + o.out_chain + "'");
        out << format_chain(fx.chain);
        r.add("chain-file", o.out_chain);
    }
    if (o.check_fixture) r.add("fixture-verdict", emptiness_pos_fx(fx.chain, fx.formula) ? "empty" : "nonempty");
}

void add_query_options(CLI::App* sub, Options& o) {
    sub->add_option("--chain", o.chain, "Markov chain file");
    sub->add_option("--formula", o.formula, "formula text");
    sub->add_option("--formula-file", o.formula_file, "file holding the formula");
    sub->add_option("--threshold", o.threshold, "\">0\", \"=1\" or \">=p\"")->capture_default_str();
    sub->add_option("--valuation", o.valuation, "e.g. \"x=3,y=5\"");
    sub->add_option("--emit-automaton", o.emit_automaton, "write G, U and B(v) to this file");
    sub->add_option("--max-product-nodes", o.max_nodes, "cap on product nodes")->capture_default_str();
    sub->add_option("--format", o.format, "text or machine")
        ->check(CLI::IsMember({"text", "machine"}))
        ->capture_default_str();
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Parametric LTL model checking of discrete-time Markov chains", "pltlcheck"};
    app.require_subcommand(1);
    Options o;

    auto* check = app.add_subcommand("check", "decide emptiness of the valuation set");
    add_query_options(check, o);
    check->add_flag("--witness", o.witness, "print a witness for nonempty verdicts");
    auto* minset = app.add_subcommand("minset", "compute the minimal valuations");
    add_query_options(minset, o);
    auto* member = app.add_subcommand("member", "test one valuation");
    add_query_options(member, o);
    auto* prob = app.add_subcommand("prob", "exact probability of F[<=x] a under a valuation");
    add_query_options(prob, o);

    auto* oracle = app.add_subcommand("oracle", "independent validation tools");
    oracle->require_subcommand(1);
    auto* sample = oracle->add_subcommand("sample", "Monte-Carlo lower bound from certified prefixes");
    sample->add_option("--chain", o.chain, "Markov chain file");
    sample->add_option("--formula", o.formula, "formula text");
    sample->add_option("--formula-file", o.formula_file, "file holding the formula");
    sample->add_option("--valuation", o.valuation, "e.g. \"x=3\"");
    sample->add_option("--samples", o.samples, "number of paths")->capture_default_str();
    sample->add_option("--horizon", o.horizon, "path length")->capture_default_str()->check(CLI::PositiveNumber);
    sample->add_option("--seed", o.seed, "64-bit seed")->capture_default_str();
    sample->add_option("--format", o.format, "text or machine")->check(CLI::IsMember({"text", "machine"}));
    auto* lasso = oracle->add_subcommand("lasso-eval", "evaluate a formula on stem.loop^w");
    lasso->add_option("--formula", o.formula, "formula text");
    lasso->add_option("--formula-file", o.formula_file, "file holding the formula");
    lasso->add_option("--valuation", o.valuation, "e.g. \"x=3\"");
    lasso->add_option("--stem", o.stem, "letters, e.g. \"{a}{}\"");
    lasso->add_option("--loop", o.loop, "letters, e.g. \"{b}\"")->required();
    lasso->add_option("--format", o.format, "text or machine")->check(CLI::IsMember({"text", "machine"}));
    auto* gen = oracle->add_subcommand("gen3sat", "chain and formula from a 3-CNF");
    gen->add_option("--cnf", o.cnf, "DIMACS file");
    gen->add_option("--random", o.random_cnf, "random CNF: variables clauses")->expected(2);
    gen->add_option("--seed", o.seed, "seed for --random")->capture_default_str();
    gen->add_option("--out-chain", o.out_chain, "write the chain here");
    gen->add_flag("--check", o.check_fixture, "decide V>0 of the fixture");
    gen->add_option("--format", o.format, "text or machine")->check(CLI::IsMember({"text", "machine"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kExitDecided;
        }
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    for (auto* sub : {check, minset, member, prob, sample, lasso})
        if (sub->parsed() && sub->count("--valuation")) o.valuation_given = true;

    Report r;
    try {
        if (check->parsed())
            cmd_check(o, r);
        else if (minset->parsed())
            cmd_minset(o, r);
        else if (member->parsed())
            cmd_member(o, r);
        else if (prob->parsed())
            cmd_prob(o, r);
        else if (sample->parsed())
            cmd_sample(o, r);
        else if (lasso->parsed())
            cmd_lasso_eval(o, r);
        else if (gen->parsed())
            cmd_gen3sat(o, r);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const ParseError& e) {
        err << "parse error at " << e.position() << ": " << e.what() << '\n';
        return kExitInput;
    } catch (const ModelError& e) {
        err << "model error: " << e.what() << '\n';
        return kExitInput;
    } catch (const FragmentError& e) {
        err << "unsupported: " << e.what() << '\n';
        return kExitFragment;
    } catch (const ResourceLimit& e) {
        err << "resource limit: " << e.what() << '\n';
        return kExitResource;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kExitInternal;
    }
    r.print(out, o.format == "machine");
    return kExitDecided;
}

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

} // namespace pltl::cli
