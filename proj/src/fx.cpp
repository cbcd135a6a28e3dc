#include "pltl/fx.hpp"

#include "pltl/errors.hpp"
#include "pltl/oracle.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace pltl {

namespace {

constexpr std::size_t kMaxDisjuncts = 100000;
constexpr std::size_t kMaxDbaAtoms = 16;

struct Prepared {
    FormulaPtr nnf;
    FormulaPtr unfolded;
};

Prepared prepare(const FormulaPtr& phi) {
    Prepared p;
    p.nnf = to_nnf(phi);
    const FragmentClass c = classify(p.nnf);
    if (c != FragmentClass::Reach && c != FragmentClass::FX)
        throw FragmentError("formula is not in pLTL(F,X) (class " + to_string(c) + "): " + to_string(phi));
    p.unfolded = rewrite_constant_bounds(p.nnf);
    return p;
}

Valuation uniform_valuation(const FormulaPtr& phi, std::uint64_t n) {
    Valuation v;
    for (const auto& x : variables(phi)) v.set(x, n);
    return v;
}

// ── Automaton assembly ──

struct Auto {
    std::vector<std::vector<std::uint32_t>> delta;
    std::uint32_t init = 0;
    std::uint32_t fin = 0;
};

Auto true_auto(std::uint32_t letters) {
    Auto a;
    a.delta.assign(1, std::vector<std::uint32_t>(letters, 0));
    return a;
}

bool satisfies(std::uint32_t letter, const std::vector<FormulaPtr>& lits, const std::vector<std::string>& atoms) {
    for (const auto& l : lits) {
        const auto idx = std::lower_bound(atoms.begin(), atoms.end(), l->name) - atoms.begin();
        const bool has = (letter >> idx) & 1;
        if (has != (l->op == Op::Atom)) return false;
    }
    return true;
}

void flatten_and(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
    if (f->op == Op::And) {
        flatten_and(f->lhs, out);
        flatten_and(f->rhs, out);
    } else {
        out.push_back(f);
    }
}

FormulaPtr conj(const std::vector<FormulaPtr>& fs) {
    FormulaPtr acc = fs.front();
    for (std::size_t i = 1; i < fs.size(); ++i) acc = make_binary(Op::And, acc, fs[i]);
    return acc;
}

class Builder {
public:
    explicit Builder(std::vector<std::string> atoms) : atoms_(std::move(atoms)), letters_(1u << atoms_.size()) {}

    Auto build(const FormulaPtr& f) {
        switch (f->op) {
        case Op::Atom:
        case Op::NegAtom: return guarded({f}, true_auto(letters_), false);
        case Op::And: return product(build(f->lhs), build(f->rhs));
        case Op::Next: {
            Auto a = build(f->lhs);
            const auto q = static_cast<std::uint32_t>(a.delta.size());
            a.delta.emplace_back(letters_, a.init);
            a.init = q;
            return a;
        }
        case Op::Eventually: return eventually(f);
        default: throw FragmentError("no deterministic automaton for shape: " + to_string(f));
        }
    }

private:
    // Fresh initial state: letters satisfying `lits` continue as `a` would
    // from its initial state on the same letter; others stay (loop) or die.
    Auto guarded(const std::vector<FormulaPtr>& lits, Auto a, bool loop) {
        const auto q = static_cast<std::uint32_t>(a.delta.size());
        std::uint32_t sink = 0;
        if (!loop) {
            sink = q + 1;
        }
        std::vector<std::uint32_t> row(letters_);
        for (std::uint32_t l = 0; l < letters_; ++l)
            row[l] = satisfies(l, lits, atoms_) ? a.delta[a.init][l] : (loop ? q : sink);
        a.delta.push_back(std::move(row));
        if (!loop) a.delta.emplace_back(letters_, sink);
        a.init = q;
        return a;
    }

    Auto eventually(const FormulaPtr& f) {
        std::vector<FormulaPtr> parts, lits, evs, nexts;
        flatten_and(f->lhs, parts);
        for (const auto& p : parts) {
            if (p->is_literal())
                lits.push_back(p);
            else if (p->op == Op::Eventually)
                evs.push_back(p);
            else if (p->op == Op::Next)
                nexts.push_back(p->lhs);
            else
                throw FragmentError("no deterministic automaton for shape: " + to_string(f));
        }
        if (!nexts.empty()) {
            if (!lits.empty() || !evs.empty())
                throw FragmentError("no deterministic automaton for shape: " + to_string(f));
            // F(X a & X b) = X F(a & b)
            return build(make_unary(Op::Next, make_unary(Op::Eventually, conj(nexts))));
        }
        // Every conjunct F psi that holds somewhere already holds at any
        // earlier position, so committing at the first literal match is exact.
        if (lits.empty()) return build(conj(evs));
        return guarded(lits, evs.empty() ? true_auto(letters_) : build(conj(evs)), true);
    }

    Auto product(const Auto& a, const Auto& b) {
        Auto out;
        std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint32_t> ids;
        std::deque<std::pair<std::uint32_t, std::uint32_t>> queue;
        auto id = [&](std::uint32_t x, std::uint32_t y) {
            auto [it, fresh] = ids.emplace(std::make_pair(x, y), static_cast<std::uint32_t>(out.delta.size()));
            if (fresh) {
                out.delta.emplace_back(letters_, 0);
                queue.emplace_back(x, y);
            }
            return it->second;
        };
        out.init = id(a.init, b.init);
        out.fin = id(a.fin, b.fin);
        while (!queue.empty()) {
            auto [x, y] = queue.front();
            queue.pop_front();
            const std::uint32_t q = ids.at({x, y});
            for (std::uint32_t l = 0; l < letters_; ++l) out.delta[q][l] = id(a.delta[x][l], b.delta[y][l]);
        }
        return out;
    }

    std::vector<std::string> atoms_;
    std::uint32_t letters_;
};

// Renumbers in BFS order from the initial state; states that cannot reach
// the final one collapse into a single sink.
Dba finalize(const Auto& a, std::vector<std::string> atoms) {
    const std::size_t n = a.delta.size();
    const std::uint32_t letters = std::uint32_t{1} << atoms.size();
    std::vector<std::vector<std::uint32_t>> pred(n);
    for (std::uint32_t q = 0; q < n; ++q)
        for (std::uint32_t t : a.delta[q]) pred[t].push_back(q);
    std::vector<bool> live(n, false);
    std::vector<std::uint32_t> stack{a.fin};
    live[a.fin] = true;
    while (!stack.empty()) {
        const auto q = stack.back();
        stack.pop_back();
        for (auto p : pred[q])
            if (!live[p]) {
                live[p] = true;
                stack.push_back(p);
            }
    }

    Dba d;
    d.atoms = std::move(atoms);
    constexpr std::uint32_t kNone = UINT32_MAX;
    std::vector<std::uint32_t> num(n, kNone);
    std::uint32_t sink = kNone;
    std::vector<std::uint32_t> order;
    auto visit = [&](std::uint32_t q) -> std::uint32_t {
        if (!live[q]) {
            if (sink == kNone) {
                sink = static_cast<std::uint32_t>(d.delta.size());
                d.delta.emplace_back(letters, sink);
            }
            return sink;
        }
        if (num[q] == kNone) {
            num[q] = static_cast<std::uint32_t>(d.delta.size());
            d.delta.emplace_back(letters, 0);
            order.push_back(q);
        }
        return num[q];
    };
    d.initial = visit(a.init);
    for (std::size_t i = 0; i < order.size(); ++i) {
        const auto q = order[i];
        for (std::uint32_t l = 0; l < letters; ++l) {
            const auto t = visit(a.delta[q][l]);
            d.delta[num[q]][l] = t;
        }
    }
    if (sink != kNone) d.sink = sink;
    if (num[a.fin] == kNone) {
        // Empty language: keep an unreachable absorbing final state.
        d.final_state = static_cast<std::uint32_t>(d.delta.size());
        d.delta.emplace_back(letters, d.final_state);
    } else {
        d.final_state = num[a.fin];
    }
    return d;
}

// Vertex sequence of a path in M whose letters drive `dba` to its final state,
// found by BFS in the product; empty if none.
std::vector<StateId> product_path(const MarkovChain& m, const Dba& dba) {
    std::vector<std::uint32_t> letter(m.size());
    for (StateId s = 0; s < m.size(); ++s) letter[s] = dba.letter_of(m.labels(s));
    const std::size_t k = dba.size();
    auto key = [&](StateId s, std::uint32_t q) { return static_cast<std::size_t>(s) * k + q; };
    constexpr std::size_t kNone = SIZE_MAX;
    std::vector<std::size_t> parent(m.size() * k, kNone);
    std::deque<std::size_t> queue;
    const StateId s0 = m.initial();
    const std::size_t start = key(s0, dba.delta[dba.initial][letter[s0]]);
    parent[start] = start;
    queue.push_back(start);
    while (!queue.empty()) {
        const std::size_t cur = queue.front();
        queue.pop_front();
        const StateId s = static_cast<StateId>(cur / k);
        const auto q = static_cast<std::uint32_t>(cur % k);
        if (q == dba.final_state) {
            std::vector<StateId> path;
            for (std::size_t x = cur;; x = parent[x]) {
                path.push_back(static_cast<StateId>(x / k));
                if (parent[x] == x) break;
            }
            std::reverse(path.begin(), path.end());
            return path;
        }
        for (const auto& t : m.row(s)) {
            const std::size_t nx = key(t.to, dba.delta[q][letter[t.to]]);
            if (parent[nx] == kNone) {
                parent[nx] = cur;
                queue.push_back(nx);
            }
        }
    }
    return {};
}

std::vector<Letter> letters_of(const MarkovChain& m, const std::vector<StateId>& path) {
    std::vector<Letter> out;
    for (StateId s : path) out.emplace_back(m.labels(s).begin(), m.labels(s).end());
    return out;
}

// Shortest prefix of `path` certified true, or empty when none is.
std::vector<StateId> certified_prefix(const MarkovChain& m, std::vector<StateId> path, const FormulaPtr& closed) {
    const auto letters = letters_of(m, path);
    auto ok = [&](std::size_t len) {
        return eval_prefix({letters.begin(), letters.begin() + static_cast<std::ptrdiff_t>(len)}, closed) ==
               Verdict3::True;
    };
    if (!ok(path.size())) return {};
    std::size_t lo = 0, hi = path.size();  // ok(hi), verdicts only sharpen as the prefix grows
    while (lo + 1 < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (ok(mid))
            hi = mid;
        else
            lo = mid;
    }
    if (ok(lo)) hi = lo;
    path.resize(hi);
    return path;
}

} // namespace

// ── DNF ──

std::vector<FormulaPtr> dnf_split(const FormulaPtr& phi) {
    if ((phi->op == Op::BoundedEventually || phi->op == Op::BoundedAlways) && !phi->bound.is_param())
        return dnf_split(rewrite_constant_bounds(phi));
    std::vector<FormulaPtr> out;
    switch (phi->op) {
    case Op::Atom:
    case Op::NegAtom: out.push_back(phi); break;
    case Op::Or: {
        out = dnf_split(phi->lhs);
        for (auto& d : dnf_split(phi->rhs)) out.push_back(std::move(d));
        break;
    }
    case Op::And: {
        const auto l = dnf_split(phi->lhs), r = dnf_split(phi->rhs);
        if (l.size() * r.size() > kMaxDisjuncts) throw ResourceLimit("DNF exceeds " + std::to_string(kMaxDisjuncts) + " disjuncts");
        for (const auto& a : l)
            for (const auto& b : r) out.push_back(make_binary(Op::And, a, b, phi->pos));
        break;
    }
    case Op::Next:
    case Op::Eventually:
        for (auto& d : dnf_split(phi->lhs)) out.push_back(make_unary(phi->op, d, phi->pos));
        break;
    case Op::BoundedEventually:
        for (auto& d : dnf_split(phi->lhs)) out.push_back(make_bounded(phi->op, phi->bound, d, phi->pos));
        break;
    default: throw FragmentError("dnf_split expects a pLTL(F,X) formula in NNF: " + to_string(phi));
    }
    // Drop syntactic duplicates, keeping first occurrences.
    std::set<std::string> seen;
    std::vector<FormulaPtr> uniq;
    for (auto& d : out)
        if (seen.insert(to_string(d)).second) uniq.push_back(std::move(d));
    return uniq;
}

// ── Dba ──

std::uint32_t Dba::letter_of(const std::vector<std::string>& labels) const {
    std::uint32_t l = 0;
    for (std::size_t i = 0; i < atoms.size(); ++i)
        if (std::find(labels.begin(), labels.end(), atoms[i]) != labels.end()) l |= std::uint32_t{1} << i;
    return l;
}

bool Dba::partially_ordered() const {
    const std::size_t n = size();
    std::vector<std::size_t> indeg(n, 0);
    std::vector<std::set<std::uint32_t>> succ(n);
    for (std::uint32_t q = 0; q < n; ++q)
        for (auto t : delta[q])
            if (t != q) succ[q].insert(t);
    for (const auto& s : succ)
        for (auto t : s) ++indeg[t];
    std::vector<std::uint32_t> ready;
    for (std::uint32_t q = 0; q < n; ++q)
        if (indeg[q] == 0) ready.push_back(q);
    std::size_t seen = 0;
    while (!ready.empty()) {
        const auto q = ready.back();
        ready.pop_back();
        ++seen;
        for (auto t : succ[q])
            if (--indeg[t] == 0) ready.push_back(t);
    }
    return seen == n;
}

std::size_t Dba::diameter() const {
    if (!partially_ordered()) throw std::logic_error("diameter of a cyclic automaton");
    const std::size_t n = size();
    constexpr std::size_t kNone = SIZE_MAX;
    // Longest path to the final state, by memoised DFS over the DAG.
    std::vector<std::size_t> memo(n, kNone - 1);  // kNone - 1: not computed
    std::function<std::size_t(std::uint32_t)> longest = [&](std::uint32_t q) -> std::size_t {
        if (q == final_state) return 0;
        if (memo[q] != kNone - 1) return memo[q];
        std::size_t best = kNone;
        for (auto t : std::set<std::uint32_t>(delta[q].begin(), delta[q].end())) {
            if (t == q) continue;
            const std::size_t l = longest(t);
            if (l != kNone && (best == kNone || l + 1 > best)) best = l + 1;
        }
        return memo[q] = best;
    };
    const std::size_t d = longest(initial);
    return d == kNone ? 0 : d;
}

Dba build_dba(const FormulaPtr& formula) {
    if (!variables(formula).empty()) throw FragmentError("build_dba expects a parameter-free formula");
    const FormulaPtr phi_bar = to_nnf(formula);
    auto at = atoms(phi_bar);
    if (at.size() > kMaxDbaAtoms)
        throw ResourceLimit("automaton alphabet over " + std::to_string(at.size()) + " atoms exceeds " +
                            std::to_string(kMaxDbaAtoms));
    Builder b(at);
    const Auto a = b.build(phi_bar);
    Dba d = finalize(a, std::move(at));
    if (!d.partially_ordered()) throw std::logic_error("automaton for " + to_string(phi_bar) + " is not partially ordered");
    if (d.diameter() > size(phi_bar))
        throw std::logic_error("automaton for " + to_string(phi_bar) + " exceeds the diameter bound");
    return d;
}

// ── Emptiness and minimal sets ──

std::uint64_t fx_bound(const MarkovChain& m, const FormulaPtr& phi) {
    const Prepared p = prepare(phi);
    std::size_t sz = size(p.nnf);
    for (const auto& d : dnf_split(p.unfolded)) sz = std::max(sz, size(d));
    return static_cast<std::uint64_t>(m.size()) * sz;
}

bool emptiness_pos_fx(const MarkovChain& m, const FormulaPtr& phi, FxWitness* witness, FxStats* stats,
                      std::size_t max_nodes) {
    const Prepared p = prepare(phi);
    const auto disjuncts = dnf_split(p.unfolded);
    std::size_t sz = size(p.nnf);
    for (const auto& d : disjuncts) sz = std::max(sz, size(d));
    const std::uint64_t n = static_cast<std::uint64_t>(m.size()) * sz;
    const Valuation vbar = uniform_valuation(p.nnf, n);
    const FormulaPtr closed = substitute(p.nnf, vbar);
    if (stats) stats->disjuncts = disjuncts.size();

    for (std::size_t i = 0; i < disjuncts.size(); ++i) {
        std::vector<StateId> path;
        try {
            const Dba dba = build_dba(strip_params(disjuncts[i]));
            if (stats) stats->dba_states += dba.size();
            path = product_path(m, dba);
            if (path.empty()) continue;
        } catch (const FragmentError&) {
            // Shape outside the automaton construction: decide the disjunct at
            // v-bar with the general engine and unroll its lasso.
            if (stats) ++stats->fallback_disjuncts;
            DiamondChecker checker(m, disjuncts[i], max_nodes);
            StateLasso lasso;
            if (!checker.check_pos(uniform_valuation(disjuncts[i], n), nullptr, &lasso)) continue;
            path = lasso.stem;
            const std::size_t want = path.size() + (sz + 1) * (n + 1);
            while (path.size() < want) path.insert(path.end(), lasso.loop.begin(), lasso.loop.end());
        }
        std::vector<StateId> cert = certified_prefix(m, path, closed);
        if (cert.empty())
            throw std::logic_error("witness path for disjunct " + to_string(disjuncts[i]) + " is not certified at v-bar");
        if (witness) *witness = {vbar, std::move(cert), i};
        return false;
    }
    return true;
}

bool emptiness_as1_fx(const MarkovChain& m, const FormulaPtr& phi, DiamondStats* stats, std::size_t max_nodes) {
    const Prepared p = prepare(phi);
    DiamondChecker checker(m, p.nnf, max_nodes);
    return !checker.check_as1(uniform_valuation(p.nnf, fx_bound(m, phi)), stats);
}

MinimalSet min_set_fx(const MarkovChain& m, const FormulaPtr& phi, BisectionStats* stats, std::size_t max_nodes) {
    const Prepared p = prepare(phi);
    DiamondChecker checker(m, p.nnf, max_nodes);
    const auto& vars = checker.variables();
    MinimalSet out(vars);
    if (emptiness_pos_fx(m, phi, nullptr, nullptr, max_nodes)) return out;
    if (vars.empty()) {
        if (checker.check_pos(Point{})) out.insert_minimal(Point{});
        return out;
    }
    const std::uint64_t n = fx_bound(m, phi);
    return bisection_min_set([&](const Point& v) { return checker.check_pos(v); }, Hypercube::uniform(vars.size(), n),
                             vars, stats);
}

} // namespace pltl
