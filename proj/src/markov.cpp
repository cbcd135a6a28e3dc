#include "pltl/markov.hpp"

#include "pltl/errors.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace pltl {

// ── MarkovChain ─────────────────────────────────────────────────────────────

void MarkovChain::set_initial(StateId s) {
    if (s >= size()) throw ModelError("initial state " + std::to_string(s) + " out of range");
    init_ = s;
}

void MarkovChain::set_transition(StateId from, StateId to, const Rational& p) {
    if (from >= size() || to >= size())
        throw ModelError("transition " + std::to_string(from) + " -> " + std::to_string(to) + " out of range");
    auto& row = rows_[from];
    auto it = std::lower_bound(row.begin(), row.end(), to, [](const Transition& t, StateId x) { return t.to < x; });
    if (it != row.end() && it->to == to) {
        if (p == 0)
            row.erase(it);
        else
            it->p = p;
    } else if (p != 0) {
        row.insert(it, Transition{to, p});
    }
}

void MarkovChain::add_label(StateId s, const std::string& name) {
    auto& ls = labels_.at(s);
    auto it = std::lower_bound(ls.begin(), ls.end(), name);
    if (it == ls.end() || *it != name) ls.insert(it, name);
}

Rational MarkovChain::prob(StateId from, StateId to) const {
    const auto& row = rows_.at(from);
    auto it = std::lower_bound(row.begin(), row.end(), to, [](const Transition& t, StateId x) { return t.to < x; });
    return it != row.end() && it->to == to ? it->p : Rational(0);
}

bool MarkovChain::has_label(StateId s, const std::string& name) const {
    const auto& ls = labels_.at(s);
    return std::binary_search(ls.begin(), ls.end(), name);
}

std::vector<std::string> MarkovChain::propositions() const {
    std::set<std::string> all;
    for (const auto& ls : labels_) all.insert(ls.begin(), ls.end());
    return {all.begin(), all.end()};
}

void MarkovChain::validate() const {
    if (rows_.empty()) throw ModelError("chain has no states");
    for (std::size_t s = 0; s < rows_.size(); ++s) {
        Rational sum = 0;
        for (const auto& t : rows_[s]) {
            if (t.p < 0 || t.p > 1)
                throw ModelError("probability " + to_string(t.p) + " of " + std::to_string(s) + " -> " +
                                 std::to_string(t.to) + " outside [0,1]");
            sum += t.p;
        }
        if (sum != 1) throw ModelError("row " + std::to_string(s) + " sums to " + to_string(sum) + ", expected 1");
    }
}

Digraph MarkovChain::support() const {
    Digraph g;
    g.offset.reserve(size() + 1);
    for (const auto& row : rows_) {
        for (const auto& t : row) g.target.push_back(t.to);
        g.offset.push_back(g.target.size());
    }
    return g;
}

// ── Text format ─────────────────────────────────────────────────────────────

namespace {

StateId parse_state(const std::string& tok, std::size_t m, std::size_t line) {
    if (tok.empty() || !std::all_of(tok.begin(), tok.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
        throw ParseError("line " + std::to_string(line) + ": expected state id, got '" + tok + "'", line);
    if (tok.size() > 9 || std::stoul(tok) >= m)
        throw ModelError("line " + std::to_string(line) + ": unknown state id " + tok);
    return static_cast<StateId>(std::stoul(tok));
}

} // namespace

MarkovChain parse_chain(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = 0;
    MarkovChain m;
    bool have_states = false, have_init = false;
    std::set<std::pair<StateId, StateId>> seen;

    while (std::getline(in, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        auto err = [&](const std::string& msg) { return ParseError("line " + std::to_string(line_no) + ": " + msg, line_no); };
        const auto& kw = tok[0];
        if (kw == "states") {
            if (have_states) throw err("duplicate 'states' line");
            if (tok.size() != 2) throw err("expected 'states <m>'");
            if (tok[1].size() > 7 || !std::all_of(tok[1].begin(), tok[1].end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
                throw err("invalid state count '" + tok[1] + "'");
            auto n = std::stoul(tok[1]);
            if (n == 0) throw ModelError("line " + std::to_string(line_no) + ": chain needs at least one state");
            m = MarkovChain(n);
            have_states = true;
            continue;
        }
        if (!have_states) throw err("'" + kw + "' before 'states'");
        if (kw == "init") {
            if (tok.size() != 2) throw err("expected 'init <id>'");
            if (have_init) throw err("duplicate 'init' line");
            m.set_initial(parse_state(tok[1], m.size(), line_no));
            have_init = true;
        } else if (kw == "label") {
            if (tok.size() < 3) throw err("expected 'label <id> <name>...'");
            auto s = parse_state(tok[1], m.size(), line_no);
            for (std::size_t i = 2; i < tok.size(); ++i) {
                const auto& name = tok[i];
                bool ok = std::islower(static_cast<unsigned char>(name[0])) &&
                          std::all_of(name.begin(), name.end(), [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
                if (!ok) throw err("invalid proposition name '" + name + "'");
                m.add_label(s, name);
            }
        } else if (kw == "trans") {
            if (tok.size() != 4) throw err("expected 'trans <from> <to> <p>'");
            auto from = parse_state(tok[1], m.size(), line_no);
            auto to = parse_state(tok[2], m.size(), line_no);
            if (!seen.emplace(from, to).second)
                throw ModelError("line " + std::to_string(line_no) + ": duplicate transition " + tok[1] + " -> " + tok[2]);
            Rational p;
            try {
                p = parse_rational(tok[3]);
            } catch (const std::invalid_argument&) {
                throw err("invalid probability '" + tok[3] + "'");
            }
            if (p < 0 || p > 1) throw ModelError("line " + std::to_string(line_no) + ": probability " + tok[3] + " outside [0,1]");
            m.set_transition(from, to, p);
        } else {
            throw err("unknown directive '" + kw + "'");
        }
    }
    if (!have_states) throw ParseError("missing 'states' line", line_no);
    if (!have_init) throw ModelError("no initial state");
    m.validate();
    return m;
}

MarkovChain load_chain(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot read chain file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_chain(buf.str());
}

std::string format_chain(const MarkovChain& m) {
    std::ostringstream out;
    out << "states " << m.size() << "\ninit " << m.initial() << '\n';
    for (StateId s = 0; s < m.size(); ++s) {
        if (m.labels(s).empty()) continue;
        out << "label " << s;
        for (const auto& l : m.labels(s)) out << ' ' << l;
        out << '\n';
    }
    for (StateId s = 0; s < m.size(); ++s)
        for (const auto& t : m.row(s)) out << "trans " << s << ' ' << t.to << ' ' << to_string(t.p) << '\n';
    return out.str();
}

StateSet label_set(const MarkovChain& m, const std::string& prop) {
    StateSet t(m.size(), false);
    for (StateId s = 0; s < m.size(); ++s) t[s] = m.has_label(s, prop);
    return t;
}

// ── Graph analyses ──────────────────────────────────────────────────────────

SccDecomposition scc_decompose(const MarkovChain& m) {
    auto g = m.support();
    auto scc = tarjan_scc(g);
    SccDecomposition d;
    d.components.resize(scc.count);
    d.comp_of.resize(m.size());
    for (StateId s = 0; s < m.size(); ++s) {
        d.comp_of[s] = scc.comp[s];
        d.components[scc.comp[s]].push_back(s);
    }
    d.bottom.assign(scc.count, true);
    d.trivial.assign(scc.count, false);
    d.successors.resize(scc.count);
    for (StateId s = 0; s < m.size(); ++s)
        for (auto t : g.successors(s))
            if (scc.comp[t] != scc.comp[s]) {
                d.bottom[scc.comp[s]] = false;
                d.successors[scc.comp[s]].push_back(scc.comp[t]);
            }
    for (std::size_t c = 0; c < scc.count; ++c) {
        auto& succ = d.successors[c];
        std::sort(succ.begin(), succ.end());
        succ.erase(std::unique(succ.begin(), succ.end()), succ.end());
        if (d.components[c].size() == 1) {
            auto s = d.components[c][0];
            d.trivial[c] = m.prob(s, s) == 0;
        }
    }
    return d;
}

StateSet reachable_states(const MarkovChain& m) { return reachable(m.support(), {m.initial()}); }

StateSet can_reach(const MarkovChain& m, const StateSet& target) {
    std::vector<NodeId> src;
    for (StateId s = 0; s < m.size(); ++s)
        if (target[s]) src.push_back(s);
    return reachable(reverse(m.support()), src);
}

ReachIterator::ReachIterator(const MarkovChain& m, const StateSet& target)
    : m_(&m), target_(target), x_(m.size()), init_(m.initial()) {
    if (target.size() != m.size()) throw UsageError("target set size mismatch");
    for (StateId s = 0; s < m.size(); ++s) x_[s] = target[s] ? 1 : 0;
}

void ReachIterator::advance() {
    std::vector<Rational> next(x_.size());
    for (StateId s = 0; s < x_.size(); ++s) {
        if (target_[s]) {
            next[s] = 1;
            continue;
        }
        Rational acc = 0;
        for (const auto& t : m_->row(s))
            if (x_[t.to] != 0) acc += t.p * x_[t.to];
        next[s] = std::move(acc);
    }
    x_ = std::move(next);
    ++n_;
}

std::vector<Rational> bounded_reach_series(const MarkovChain& m, const StateSet& target, std::size_t steps) {
    ReachIterator it(m, target);
    std::vector<Rational> out{it.value()};
    while (it.step() < steps) {
        it.advance();
        out.push_back(it.value());
    }
    return out;
}

Rational bounded_reach_prob(const MarkovChain& m, const StateSet& target, std::size_t n) {
    ReachIterator it(m, target);
    while (it.step() < n) it.advance();
    return it.value();
}

Rational unbounded_reach_prob(const MarkovChain& m, const StateSet& target) {
    if (target[m.initial()]) return 1;
    auto fwd = reachable_states(m);
    auto back = can_reach(m, target);
    // Unknowns: reachable transient states that can still reach the target.
    std::vector<std::size_t> idx(m.size(), kUnreachable);
    std::vector<StateId> vars;
    for (StateId s = 0; s < m.size(); ++s)
        if (fwd[s] && back[s] && !target[s]) {
            idx[s] = vars.size();
            vars.push_back(s);
        }
    if (idx[m.initial()] == kUnreachable) return 0;
    const std::size_t n = vars.size();
    // Augmented system (I - Q) x = r.
    Matrix a(n, std::vector<Rational>(n + 1));
    for (std::size_t i = 0; i < n; ++i) {
        a[i][i] = 1;
        for (const auto& t : m.row(vars[i])) {
            if (target[t.to])
                a[i][n] += t.p;
            else if (idx[t.to] != kUnreachable)
                a[i][idx[t.to]] -= t.p;
        }
    }
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) throw ModelError("singular reachability system");
        std::swap(a[piv], a[col]);
        const Rational inv = 1 / a[col][col];
        for (std::size_t k = col; k <= n; ++k) a[col][k] *= inv;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            const Rational f = a[r][col];
            for (std::size_t k = col; k <= n; ++k)
                if (a[col][k] != 0) a[r][k] -= f * a[col][k];
        }
    }
    return a[idx[m.initial()]][n];
}

std::vector<std::vector<std::size_t>> all_pairs_distance(const MarkovChain& m) {
    const std::size_t n = m.size();
    std::vector<std::vector<std::size_t>> d(n, std::vector<std::size_t>(n, kUnreachable));
    for (StateId s = 0; s < n; ++s) {
        d[s][s] = 0;
        for (const auto& t : m.row(s))
            if (t.to != s) d[s][t.to] = 1;
    }
    // Floyd-Warshall.
    for (std::size_t k = 0; k < n; ++k)
        for (std::size_t i = 0; i < n; ++i) {
            if (d[i][k] == kUnreachable) continue;
            for (std::size_t j = 0; j < n; ++j)
                if (d[k][j] != kUnreachable && d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
        }
    return d;
}

Rational ergodicity_coefficient(const Matrix& q) {
    if (q.empty()) throw ModelError("empty matrix");
    for (std::size_t i = 0; i < q.size(); ++i)
        if (std::all_of(q[i].begin(), q[i].end(), [](const Rational& x) { return x == 0; }))
            throw ModelError("row " + std::to_string(i) + " of Q is zero");
    Rational best;
    bool first = true;
    for (std::size_t i = 0; i < q.size(); ++i)
        for (std::size_t j = i; j < q.size(); ++j) {
            Rational s = 0;
            for (std::size_t k = 0; k < q[i].size(); ++k) s += q[i][k] < q[j][k] ? q[i][k] : q[j][k];
            if (first || s < best) {
                best = s;
                first = false;
            }
        }
    return 1 - best;
}

} // namespace pltl
