#include "pltl/oracle.hpp"

#include "pltl/diamond.hpp"
#include "pltl/errors.hpp"

#include <algorithm>
#include <random>
#include <sstream>

namespace pltl {

std::string to_string(Verdict3 v) {
    switch (v) {
    case Verdict3::True: return "true";
    case Verdict3::False: return "false";
    case Verdict3::Unknown: return "unknown";
    }
    return "?";
}

namespace {

using V3 = Verdict3;

V3 k_and(V3 a, V3 b) {
    if (a == V3::False || b == V3::False) return V3::False;
    if (a == V3::True && b == V3::True) return V3::True;
    return V3::Unknown;
}

V3 k_or(V3 a, V3 b) {
    if (a == V3::True || b == V3::True) return V3::True;
    if (a == V3::False && b == V3::False) return V3::False;
    return V3::Unknown;
}

V3 k_not(V3 a) { return a == V3::True ? V3::False : a == V3::False ? V3::True : V3::Unknown; }

void require_closed(const FormulaPtr& f) {
    if (f->bound.is_param()) throw FragmentError("oracle evaluators need a variable-free formula: " + to_string(f));
}

// ── Prefix semantics ──

// Verdict at positions 0..L; index L stands for "beyond the prefix".
std::vector<V3> prefix_values(const std::vector<Letter>& u, const FormulaPtr& f) {
    require_closed(f);
    const std::size_t L = u.size();
    std::vector<V3> out(L + 1, V3::Unknown);
    switch (f->op) {
    case Op::Atom:
    case Op::NegAtom:
        for (std::size_t i = 0; i < L; ++i) {
            const bool has = u[i].count(f->name) != 0;
            out[i] = (has == (f->op == Op::Atom)) ? V3::True : V3::False;
        }
        return out;
    case Op::Not: {
        auto a = prefix_values(u, f->lhs);
        for (std::size_t i = 0; i < L; ++i) out[i] = k_not(a[i]);
        return out;
    }
    case Op::And:
    case Op::Or: {
        auto a = prefix_values(u, f->lhs), b = prefix_values(u, f->rhs);
        for (std::size_t i = 0; i <= L; ++i) out[i] = f->op == Op::And ? k_and(a[i], b[i]) : k_or(a[i], b[i]);
        return out;
    }
    case Op::Next: {
        auto a = prefix_values(u, f->lhs);
        for (std::size_t i = 0; i < L; ++i) out[i] = a[i + 1];
        return out;
    }
    case Op::Eventually:
    case Op::Always: {
        auto a = prefix_values(u, f->lhs);
        for (std::size_t i = L; i-- > 0;)
            out[i] = f->op == Op::Eventually ? k_or(a[i], out[i + 1]) : k_and(a[i], out[i + 1]);
        return out;
    }
    case Op::Until:
    case Op::Release: {
        auto a = prefix_values(u, f->lhs), b = prefix_values(u, f->rhs);
        for (std::size_t i = L; i-- > 0;)
            out[i] = f->op == Op::Until ? k_or(b[i], k_and(a[i], out[i + 1])) : k_and(b[i], k_or(a[i], out[i + 1]));
        return out;
    }
    case Op::BoundedEventually:
    case Op::BoundedAlways: {
        auto a = prefix_values(u, f->lhs);
        const bool ev = f->op == Op::BoundedEventually;
        const std::uint64_t c = f->bound.value;
        for (std::size_t i = 0; i < L; ++i) {
            V3 acc = ev ? V3::False : V3::True;
            const std::uint64_t last = i + c;  // window i..i+c
            const std::size_t end = static_cast<std::size_t>(std::min<std::uint64_t>(last, L - 1));
            for (std::size_t j = i; j <= end; ++j) acc = ev ? k_or(acc, a[j]) : k_and(acc, a[j]);
            if (last >= L) acc = ev ? k_or(acc, V3::Unknown) : k_and(acc, V3::Unknown);
            out[i] = acc;
        }
        return out;
    }
    }
    return out;
}

// ── Lasso semantics ──

struct Lasso {
    std::vector<const Letter*> pos;
    std::size_t loop_start;
    std::size_t succ(std::size_t i) const { return i + 1 == pos.size() ? loop_start : i + 1; }
};

std::vector<bool> lasso_values(const Lasso& w, const FormulaPtr& f) {
    require_closed(f);
    const std::size_t n = w.pos.size();
    std::vector<bool> out(n, false);
    switch (f->op) {
    case Op::Atom:
    case Op::NegAtom:
        for (std::size_t i = 0; i < n; ++i) out[i] = (w.pos[i]->count(f->name) != 0) == (f->op == Op::Atom);
        return out;
    case Op::Not: {
        auto a = lasso_values(w, f->lhs);
        for (std::size_t i = 0; i < n; ++i) out[i] = !a[i];
        return out;
    }
    case Op::And:
    case Op::Or: {
        auto a = lasso_values(w, f->lhs), b = lasso_values(w, f->rhs);
        for (std::size_t i = 0; i < n; ++i) out[i] = f->op == Op::And ? (a[i] && b[i]) : (a[i] || b[i]);
        return out;
    }
    case Op::Next: {
        auto a = lasso_values(w, f->lhs);
        for (std::size_t i = 0; i < n; ++i) out[i] = a[w.succ(i)];
        return out;
    }
    case Op::Eventually:
    case Op::Always:
    case Op::Until:
    case Op::Release: {
        // F, U: least fixpoint; G, R: greatest. n rounds reach the fixpoint.
        std::vector<bool> a, b;
        if (f->op == Op::Eventually || f->op == Op::Always) {
            b = lasso_values(w, f->lhs);
        } else {
            a = lasso_values(w, f->lhs);
            b = lasso_values(w, f->rhs);
        }
        const bool least = f->op == Op::Eventually || f->op == Op::Until;
        std::fill(out.begin(), out.end(), !least);
        for (bool changed = true; changed;) {
            changed = false;
            for (std::size_t i = n; i-- > 0;) {
                const bool nx = out[w.succ(i)];
                bool v = false;
                switch (f->op) {
                case Op::Eventually: v = b[i] || nx; break;
                case Op::Always: v = b[i] && nx; break;
                case Op::Until: v = b[i] || (a[i] && nx); break;
                default: v = b[i] && (a[i] || nx); break;
                }
                if (v != out[i]) {
                    out[i] = v;
                    changed = true;
                }
            }
        }
        return out;
    }
    case Op::BoundedEventually:
    case Op::BoundedAlways: {
        auto a = lasso_values(w, f->lhs);
        const bool ev = f->op == Op::BoundedEventually;
        // After n steps every position reachable from i has been visited.
        const std::uint64_t steps = std::min<std::uint64_t>(f->bound.value, n);
        for (std::size_t i = 0; i < n; ++i) {
            bool acc = !ev;
            std::size_t j = i;
            for (std::uint64_t k = 0; k <= steps; ++k, j = w.succ(j)) {
                if (ev ? a[j] : !a[j]) {
                    acc = ev;
                    break;
                }
            }
            out[i] = acc;
        }
        return out;
    }
    }
    return out;
}

} // namespace

Verdict3 eval_prefix(const std::vector<Letter>& u, const FormulaPtr& psi) { return prefix_values(u, psi)[0]; }

bool eval_lasso(const LassoWord& w, const FormulaPtr& psi) {
    if (w.loop.empty()) throw UsageError("lasso word needs a nonempty loop");
    Lasso l;
    for (const auto& x : w.stem) l.pos.push_back(&x);
    for (const auto& x : w.loop) l.pos.push_back(&x);
    l.loop_start = w.stem.size();
    return lasso_values(l, psi)[0];
}

// ── Sampling ──

SampleResult sample_lower_bound(const MarkovChain& m, const FormulaPtr& phi, const Valuation& v,
                                std::uint64_t samples, std::size_t horizon, std::uint64_t seed) {
    if (horizon == 0) throw UsageError("sampling horizon must be at least 1");
    const FormulaPtr psi = substitute(phi, v);
    std::vector<std::discrete_distribution<std::size_t>> rows;
    std::vector<Letter> letters(m.size());
    for (StateId s = 0; s < m.size(); ++s) {
        std::vector<double> w;
        for (const auto& t : m.row(s)) w.push_back(t.p.convert_to<double>());
        rows.emplace_back(w.begin(), w.end());
        letters[s] = Letter(m.labels(s).begin(), m.labels(s).end());
    }
    std::mt19937_64 rng(seed);
    SampleResult res;
    res.seed = seed;
    std::vector<Letter> path;
    for (std::uint64_t k = 0; k < samples; ++k) {
        path.clear();
        StateId s = m.initial();
        for (std::size_t i = 0; i < horizon; ++i) {
            path.push_back(letters[s]);
            if (i + 1 < horizon) s = m.row(s)[rows[s](rng)].to;
        }
        switch (eval_prefix(path, psi)) {
        case V3::True: ++res.certified_true; break;
        case V3::False: ++res.certified_false; break;
        case V3::Unknown: ++res.unknown; break;
        }
        ++res.samples;
    }
    return res;
}

MinimalSet brute_force_min_set(const MarkovChain& m, const FormulaPtr& phi, std::uint64_t n,
                               std::uint64_t max_points) {
    DiamondChecker checker(m, phi);
    const auto box = Hypercube::uniform(checker.variables().size(), n);
    if (box.volume() > max_points)
        throw ResourceLimit("brute-force scan of " + std::to_string(box.volume()) + " points exceeds the cap of " +
                            std::to_string(max_points));
    return scan_min_set([&](const Point& p) { return checker.check_pos(p); }, box, checker.variables());
}

// ── 3-SAT ──

Cnf parse_dimacs(std::string_view text) {
    Cnf cnf;
    bool header = false;
    std::size_t declared = 0;
    std::vector<int> cur;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::istringstream ls(line);
        std::string tok;
        if (!(ls >> tok) || tok == "c" || tok[0] == 'c') continue;
        if (tok == "p") {
            std::string fmt;
            long long n = -1, k = -1;
            if (header || !(ls >> fmt >> n >> k) || fmt != "cnf" || n < 0 || k < 0)
                throw ParseError("malformed 'p cnf n k' header", lineno);
            cnf.vars = static_cast<unsigned>(n);
            declared = static_cast<std::size_t>(k);
            header = true;
            continue;
        }
        if (!header) throw ParseError("clause before 'p cnf' header", lineno);
        ls.clear();
        ls.str(line);
        long long lit;
        while (ls >> lit) {
            if (lit == 0) {
                cnf.clauses.push_back(cur);
                cur.clear();
                continue;
            }
            if (static_cast<unsigned long long>(lit < 0 ? -lit : lit) > cnf.vars)
                throw ParseError("literal " + std::to_string(lit) + " out of range", lineno);
            cur.push_back(static_cast<int>(lit));
        }
        if (!ls.eof()) throw ParseError("expected integer literal", lineno);
    }
    if (!header) throw ParseError("missing 'p cnf' header", lineno);
    if (!cur.empty()) throw ParseError("last clause is not terminated by 0", lineno);
    if (cnf.clauses.size() != declared)
        throw ParseError("header declares " + std::to_string(declared) + " clauses, found " +
                             std::to_string(cnf.clauses.size()),
                         lineno);
    return cnf;
}

std::string format_dimacs(const Cnf& cnf) {
    std::string s = "p cnf " + std::to_string(cnf.vars) + " " + std::to_string(cnf.clauses.size()) + "\n";
    for (const auto& c : cnf.clauses) {
        for (int l : c) s += std::to_string(l) + " ";
        s += "0\n";
    }
    return s;
}

bool sat_brute_force(const Cnf& cnf) {
    if (cnf.vars >= 63) throw ResourceLimit("brute-force SAT limited to 62 variables");
    for (std::uint64_t a = 0; a < (std::uint64_t{1} << cnf.vars); ++a) {
        bool all = true;
        for (const auto& c : cnf.clauses) {
            bool sat = false;
            for (int l : c) {
                const bool val = (a >> (std::abs(l) - 1)) & 1;
                if (val == (l > 0)) {
                    sat = true;
                    break;
                }
            }
            if (!sat) {
                all = false;
                break;
            }
        }
        if (all) return true;
    }
    return false;
}

SatFixture gen_3sat_fixture(const Cnf& cnf) {
    if (cnf.clauses.empty()) throw UsageError("CNF has no clauses");
    for (const auto& c : cnf.clauses) {
        if (c.size() > 3) throw UsageError("clause with more than 3 literals");
        for (int l : c)
            if (l == 0 || static_cast<unsigned>(std::abs(l)) > cnf.vars) throw UsageError("literal out of range");
    }
    const unsigned n = cnf.vars;
    // s_i = i, t_i = n + i, ~t_i = 2n + i  (i >= 1)
    MarkovChain m(3 * n + 1);
    const Rational half(1, 2);
    for (unsigned i = 1; i <= n; ++i) {
        m.set_transition(i - 1, n + i, half);
        m.set_transition(i - 1, 2 * n + i, half);
        m.set_transition(n + i, i, 1);
        m.set_transition(2 * n + i, i, 1);
    }
    m.set_transition(n, n, 1);
    m.set_initial(0);

    FormulaPtr phi;
    for (std::size_t k = 0; k < cnf.clauses.size(); ++k) {
        const std::string c = "c" + std::to_string(k + 1);
        for (int l : cnf.clauses[k]) {
            const unsigned v = static_cast<unsigned>(std::abs(l));
            m.add_label(l > 0 ? n + v : 2 * n + v, c);
        }
        auto conj = make_bounded(Op::BoundedEventually, Bound::param("y" + std::to_string(k + 1)), make_atom(c));
        phi = phi ? make_binary(Op::And, phi, conj) : conj;
    }
    m.validate();
    return {std::move(m), phi};
}

} // namespace pltl
