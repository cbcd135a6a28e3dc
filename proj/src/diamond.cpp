#include "pltl/diamond.hpp"

#include "pltl/errors.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

namespace pltl {

namespace {

constexpr std::uint64_t bit(std::size_t i) { return std::uint64_t{1} << i; }
constexpr std::uint64_t kVbarCap = std::uint64_t{1} << 30;

bool has_children(Op op) {
    switch (op) {
    case Op::And:
    case Op::Or:
    case Op::Until:
    case Op::Release:
    case Op::Always:
    case Op::Eventually:
    case Op::BoundedEventually: return true;
    default: return false;
    }
}

bool is_temporal(Op op) {
    switch (op) {
    case Op::Next:
    case Op::Until:
    case Op::Release:
    case Op::Always:
    case Op::Eventually:
    case Op::BoundedEventually: return true;
    default: return false;
    }
}

} // namespace

// ── G ───────────────────────────────────────────────────────────────────────

struct GAutomaton::Element {
    Op op;
    int lhs = -1;
    int rhs = -1;
    int atom = -1;
    int param = -1;
    int accb = -1;
};

GAutomaton::GAutomaton(const FormulaPtr& phi) : phi_(phi) {
    if (!is_nnf(phi)) throw FragmentError("formula must be in negation normal form");
    cl_ = pltl::closure(phi);
    if (cl_.size() > 64) throw ResourceLimit("formula has " + std::to_string(cl_.size()) + " distinct subformulas (max 64)");
    atoms_ = pltl::atoms(phi);
    if (atoms_.size() > 32) throw ResourceLimit("formula has more than 32 atoms");

    std::unordered_map<std::string, int> index;
    for (std::size_t i = 0; i < cl_.size(); ++i) index.emplace(to_string(cl_[i]), static_cast<int>(i));
    std::set<std::string> seen_vars;
    for (std::size_t i = 0; i < cl_.size(); ++i) {
        const auto& f = cl_[i];
        Element e{f->op};
        if (f->lhs) e.lhs = index.at(to_string(f->lhs));
        if (f->rhs) e.rhs = index.at(to_string(f->rhs));
        switch (f->op) {
        case Op::Atom:
        case Op::NegAtom:
            e.atom = static_cast<int>(std::lower_bound(atoms_.begin(), atoms_.end(), f->name) - atoms_.begin());
            break;
        case Op::BoundedEventually:
            if (!f->bound.is_param()) throw FragmentError("constant bounds must be unfolded before building G");
            if (!seen_vars.insert(f->bound.var).second)
                throw FragmentError("variable '" + f->bound.var + "' bounds two different subformulas; rename apart first");
            e.param = static_cast<int>(params_.size());
            params_.push_back(f->bound.var);
            param_el_.push_back(i);
            break;
        case Op::BoundedAlways: throw FragmentError("constant bounds must be unfolded before building G");
        case Op::Not: throw FragmentError("formula must be in negation normal form");
        case Op::Until:
        case Op::Release:
        case Op::Always:
        case Op::Eventually:
            e.accb = static_cast<int>(accb_.size());
            accb_.push_back(i);
            break;
        default: break;
        }
        if (is_temporal(f->op)) temporal_mask_ |= bit(i);
        el_.push_back(e);
    }
    if (params_.size() > 32) throw ResourceLimit("formula has more than 32 parameters");
}

LetterMask GAutomaton::letter_of(const std::vector<std::string>& labels) const {
    LetterMask l = 0;
    for (const auto& a : labels) {
        auto it = std::lower_bound(atoms_.begin(), atoms_.end(), a);
        if (it != atoms_.end() && *it == a) l |= LetterMask{1} << (it - atoms_.begin());
    }
    return l;
}

LetterMask GAutomaton::letter_of(const Letter& l) const { return letter_of(std::vector<std::string>(l.begin(), l.end())); }

bool GAutomaton::in_acc_b(GStateId q, std::size_t i) const {
    const auto& s = states_[q];
    const auto e = accb_[i];
    if (!(s.active & bit(e))) return true;
    const auto& el = el_[e];
    const bool self = s.value & bit(e);
    switch (el.op) {
    case Op::Until: return !(self && !(s.value & bit(el.rhs)));
    case Op::Release: return !((s.value & bit(el.rhs)) && !self);
    case Op::Always: return !((s.value & bit(el.lhs)) && !self);
    case Op::Eventually: return !(self && !(s.value & bit(el.lhs)));
    default: return true;
    }
}

bool GAutomaton::in_acc_p(GStateId q, std::size_t j) const {
    const auto& s = states_[q];
    const auto e = param_el_[j];
    if (!(s.active & bit(e))) return true;
    return !((s.value & bit(e)) && !(s.value & bit(el_[e].lhs)));
}

bool GAutomaton::claims_false(GStateId q, std::size_t j) const {
    const auto& s = states_[q];
    const auto e = param_el_[j];
    return (s.active & bit(e)) && !(s.value & bit(e));
}

GStateId GAutomaton::intern(const GState& s) {
    auto key = std::make_tuple(s.active, s.value, s.forbid);
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    auto id = static_cast<GStateId>(states_.size());
    states_.push_back(s);
    next_.push_back(next_requirements(s));
    ids_.emplace(key, id);
    return id;
}

// What the next position must track, and with which values.
GAutomaton::NextReq GAutomaton::next_requirements(const GState& s) const {
    NextReq r;
    auto require = [&](int e, bool v) {
        r.active |= bit(e);
        (v ? r.must1 : r.must0) |= bit(e);
    };
    for (std::size_t i = 0; i < el_.size(); ++i) {
        if (!(s.active & bit(i))) continue;
        const auto& e = el_[i];
        const bool self = s.value & bit(i);
        const bool l = e.lhs >= 0 && (s.value & bit(e.lhs));
        const bool rr = e.rhs >= 0 && (s.value & bit(e.rhs));
        const int me = static_cast<int>(i);
        switch (e.op) {
        case Op::Next: require(e.lhs, self); break;
        case Op::Until:
            if (!rr && l) require(me, self);
            break;
        case Op::Release:
            if (rr && !l) require(me, self);
            break;
        case Op::Always:
            if (l) require(me, self);
            break;
        case Op::Eventually:
            if (!l) require(me, self);
            break;
        case Op::BoundedEventually:
            if (self && !l) require(me, true);
            break;
        default: break;
        }
    }
    r.conflict = (r.must1 & r.must0) != 0;
    return r;
}

std::vector<GStateId> GAutomaton::expand(std::uint64_t req_active, std::uint64_t must1, std::uint64_t must0,
                                         std::uint32_t keep_forbid, LetterMask letter) {
    std::vector<GStateId> out;
    if (must1 & must0) return out;
    std::uint64_t active = req_active;
    for (std::size_t j = 0; j < params_.size(); ++j)
        if (keep_forbid & (1u << j)) active |= bit(el_[param_el_[j]].lhs);
    for (std::size_t i = el_.size(); i-- > 0;)
        if ((active & bit(i)) && has_children(el_[i].op)) {
            active |= bit(el_[i].lhs);
            if (el_[i].rhs >= 0) active |= bit(el_[i].rhs);
        }

    // Literal values are dictated by the letter.
    std::uint64_t lit_value = 0;
    for (std::size_t i = 0; i < el_.size(); ++i) {
        if (!(active & bit(i))) continue;
        const auto& e = el_[i];
        if (e.op == Op::Atom && (letter >> e.atom & 1u)) lit_value |= bit(i);
        if (e.op == Op::NegAtom && !(letter >> e.atom & 1u)) lit_value |= bit(i);
    }

    const std::uint64_t forced_temporal = active & temporal_mask_ & (must1 | must0);
    const std::uint64_t free = active & temporal_mask_ & ~forced_temporal;
    std::vector<std::size_t> free_bits;
    for (std::size_t i = 0; i < el_.size(); ++i)
        if (free & bit(i)) free_bits.push_back(i);
    if (free_bits.size() > 24) throw ResourceLimit("too many unconstrained temporal subformulas in one state");

    const std::uint64_t combos = std::uint64_t{1} << free_bits.size();
    for (std::uint64_t c = 0; c < combos; ++c) {
        std::uint64_t val = lit_value | (must1 & forced_temporal);
        for (std::size_t k = 0; k < free_bits.size(); ++k)
            if (c >> k & 1u) val |= bit(free_bits[k]);
        bool ok = true;
        for (std::size_t i = 0; i < el_.size() && ok; ++i) {
            if (!(active & bit(i))) continue;
            const auto& e = el_[i];
            const bool self = val & bit(i);
            const bool l = e.lhs >= 0 && (val & bit(e.lhs));
            const bool r = e.rhs >= 0 && (val & bit(e.rhs));
            switch (e.op) {
            case Op::And:
                if (l && r) val |= bit(i);
                break;
            case Op::Or:
                if (l || r) val |= bit(i);
                break;
            case Op::Until: ok = (!r || self) && (!self || l || r); break;
            case Op::Release: ok = (!self || r) && (!(l && r) || self); break;
            case Op::Always: ok = !self || l; break;
            case Op::Eventually:
            case Op::BoundedEventually: ok = !l || self; break;
            default: break;
            }
        }
        if (!ok) continue;
        if ((val & must0 & active) || (must1 & active & ~val)) continue;
        std::uint32_t forbid = keep_forbid;
        for (std::size_t j = 0; j < params_.size(); ++j) {
            const auto e = param_el_[j];
            if ((active & bit(e)) && !(val & bit(e))) forbid |= 1u << j;
        }
        for (std::size_t j = 0; j < params_.size() && ok; ++j)
            if ((forbid >> j & 1u) && (val & bit(el_[param_el_[j]].lhs))) ok = false;
        if (!ok) continue;
        out.push_back(intern(GState{active, val, forbid}));
    }
    return out;
}

const std::vector<GStateId>& GAutomaton::initial(LetterMask letter) {
    auto it = initial_cache_.find(letter);
    if (it != initial_cache_.end()) return it->second;
    const auto root = bit(cl_.size() - 1);
    auto states = expand(root, root, 0, 0, letter);
    return initial_cache_.emplace(letter, std::move(states)).first->second;
}

const std::vector<GStateId>& GAutomaton::successors(GStateId q, LetterMask letter, std::uint32_t keep_forbid) {
    auto key = std::make_tuple(q, letter, keep_forbid);
    auto it = succ_cache_.find(key);
    if (it != succ_cache_.end()) return it->second;
    const NextReq r = next_[q];
    std::vector<GStateId> states;
    if (!r.conflict) states = expand(r.active, r.must1, r.must0, keep_forbid & states_[q].forbid, letter);
    return succ_cache_.emplace(key, std::move(states)).first->second;
}

std::string GAutomaton::describe(GStateId q) const {
    const auto& s = states_[q];
    std::string out = "{";
    bool first = true;
    for (std::size_t i = 0; i < el_.size(); ++i) {
        if (!(s.active & bit(i))) continue;
        if (!first) out += ", ";
        first = false;
        if (!(s.value & bit(i))) out += "~";
        out += to_string(cl_[i]);
    }
    out += "}";
    if (s.forbid) {
        out += " forbid{";
        first = true;
        for (std::size_t j = 0; j < params_.size(); ++j)
            if (s.forbid >> j & 1u) {
                if (!first) out += ",";
                first = false;
                out += params_[j];
            }
        out += "}";
    }
    return out;
}

std::shared_ptr<GAutomaton> build_g(const FormulaPtr& phi) { return std::make_shared<GAutomaton>(phi); }

// ── U ───────────────────────────────────────────────────────────────────────

std::uint32_t UAutomaton::next_index(GStateId q, std::uint32_t i) const {
    if (g_->acc_b_count() == 0) return 0;
    return g_->in_acc_b(q, i) ? (i + 1) % index_count() : i;
}

bool UAutomaton::accepting(GStateId q, std::uint32_t i) const {
    if (g_->acc_b_count() == 0) return true;
    return i == 0 && g_->in_acc_b(q, 0);
}

UAutomaton degeneralize(std::shared_ptr<GAutomaton> g) { return UAutomaton(std::move(g)); }

// ── B(v) ────────────────────────────────────────────────────────────────────

InstancedNba::InstancedNba(UAutomaton u, std::vector<std::uint64_t> v) : u_(std::move(u)), v_(std::move(v)) {
    d_ = u_.g().params().size();
    if (v_.size() != d_) throw UsageError("valuation dimension does not match the formula");
    for (auto x : v_)
        if (x >= kVbarCap) throw ResourceLimit("parameter value " + std::to_string(x) + " exceeds the supported range");
}

BStateId InstancedNba::intern(GStateId q, std::uint32_t idx, const std::vector<std::uint32_t>& counters) {
    std::string key;
    key.reserve(4 * (2 + counters.size()));
    auto put = [&](std::uint32_t x) { key.append(reinterpret_cast<const char*>(&x), sizeof x); };
    put(q);
    put(idx);
    for (auto c : counters) put(c);
    auto it = ids_.find(key);
    if (it != ids_.end()) return it->second;
    auto id = static_cast<BStateId>(gq_.size());
    gq_.push_back(q);
    idx_.push_back(idx);
    counters_.insert(counters_.end(), counters.begin(), counters.end());
    ids_.emplace(std::move(key), id);
    return id;
}

const std::vector<BStateId>& InstancedNba::initial(LetterMask letter) {
    auto it = initial_cache_.find(letter);
    if (it != initial_cache_.end()) return it->second;
    auto& g = u_.g();
    std::vector<BStateId> out;
    std::vector<std::uint32_t> c(2 * d_);
    for (auto q : g.initial(letter)) {
        bool ok = true;
        for (std::size_t j = 0; j < d_ && ok; ++j) {
            c[j] = g.in_acc_p(q, j) ? 0 : 1;
            if (c[j] > v_[j]) ok = false;
            c[d_ + j] = g.claims_false(q, j) ? static_cast<std::uint32_t>(v_[j] + 1) : 0;
        }
        if (ok) out.push_back(intern(q, 0, c));
    }
    return initial_cache_.emplace(letter, std::move(out)).first->second;
}

const std::vector<BStateId>& InstancedNba::successors(BStateId b, LetterMask letter) {
    const std::uint64_t key = (std::uint64_t{b} << 32) | letter;
    auto it = succ_cache_.find(key);
    if (it != succ_cache_.end()) return it->second;
    auto& g = u_.g();
    const GStateId q = gq_[b];
    const std::uint32_t idx = idx_[b];
    const std::vector<std::uint32_t> cur(counters_.begin() + static_cast<std::ptrdiff_t>(2 * d_ * b),
                                         counters_.begin() + static_cast<std::ptrdiff_t>(2 * d_ * (b + 1)));
    std::uint32_t keep = 0;
    for (std::size_t j = 0; j < d_; ++j)
        if (cur[d_ + j] >= 2) keep |= 1u << j;
    const std::uint32_t next_idx = u_.next_index(q, idx);
    std::vector<BStateId> out;
    std::vector<std::uint32_t> c(2 * d_);
    // Copy: interning below may grow G's caches.
    const std::vector<GStateId> succ = g.successors(q, letter, keep);
    for (auto q2 : succ) {
        bool ok = true;
        for (std::size_t j = 0; j < d_ && ok; ++j) {
            std::uint64_t n = g.in_acc_p(q2, j) ? 0 : std::uint64_t{cur[j]} + 1;
            if (n > v_[j]) ok = false;
            c[j] = static_cast<std::uint32_t>(n);
            c[d_ + j] = g.claims_false(q2, j) ? static_cast<std::uint32_t>(v_[j] + 1)
                                               : (cur[d_ + j] > 0 ? cur[d_ + j] - 1 : 0);
        }
        if (ok) out.push_back(intern(q2, next_idx, c));
    }
    return succ_cache_.emplace(key, std::move(out)).first->second;
}

bool InstancedNba::accepting(BStateId b) const { return u_.accepting(gq_[b], idx_[b]); }

std::string InstancedNba::describe(BStateId b) const {
    std::string out = u_.g().describe(gq_[b]) + " i=" + std::to_string(idx_[b]);
    for (std::size_t j = 0; j < d_; ++j)
        out += " " + u_.g().params()[j] + ":n=" + std::to_string(counters_[2 * d_ * b + j]) +
               ",f=" + std::to_string(counters_[2 * d_ * b + d_ + j]);
    return out;
}

InstancedNba instantiate(const UAutomaton& u, const std::vector<std::uint64_t>& v) { return InstancedNba(u, v); }

// ── Product ─────────────────────────────────────────────────────────────────

ProductGraph product(const MarkovChain& m, InstancedNba& b, std::size_t max_nodes) {
    auto& g = b.u().g();
    std::vector<LetterMask> letter(m.size());
    for (StateId s = 0; s < m.size(); ++s) letter[s] = g.letter_of(m.labels(s));

    ProductGraph pg;
    std::unordered_map<std::uint64_t, NodeId> ids;
    auto node = [&](StateId s, BStateId q) -> NodeId {
        const std::uint64_t key = (std::uint64_t{s} << 32) | q;
        auto it = ids.find(key);
        if (it != ids.end()) return it->second;
        if (pg.mstate.size() >= max_nodes)
            throw ResourceLimit("product exceeds " + std::to_string(max_nodes) + " nodes");
        auto id = static_cast<NodeId>(pg.mstate.size());
        pg.mstate.push_back(s);
        pg.bstate.push_back(q);
        pg.accepting.push_back(b.accepting(q));
        ids.emplace(key, id);
        return id;
    };
    for (auto q : b.initial(letter[m.initial()])) pg.initial.push_back(node(m.initial(), q));

    // Nodes are numbered in discovery order and expanded in the same order,
    // so the adjacency can be written directly in compressed form.
    for (std::size_t v = 0; v < pg.mstate.size(); ++v) {
        const StateId s = pg.mstate[v];
        const BStateId q = pg.bstate[v];
        for (const auto& t : m.row(s)) {
            const std::vector<BStateId> succ = b.successors(q, letter[t.to]);
            for (auto q2 : succ) pg.edges.target.push_back(node(t.to, q2));
        }
        pg.edges.offset.push_back(pg.edges.target.size());
    }
    return pg;
}

namespace {

// Fiber-subset search: from (s, X), follow every M-successor t and keep the
// component nodes over t reachable from X. Reaching an empty set means some
// finite path of M kills every run that stays in the component.
bool component_complete(const ProductGraph& pg, const MarkovChain& m, const SccResult& scc, NodeId comp,
                        const std::vector<NodeId>& nodes) {
    std::map<StateId, std::vector<NodeId>> fiber;
    for (auto v : nodes) fiber[pg.mstate[v]].push_back(v);
    std::set<std::pair<StateId, std::vector<NodeId>>> seen;
    std::deque<std::pair<StateId, std::vector<NodeId>>> todo;
    for (auto& [s, xs] : fiber) {
        std::sort(xs.begin(), xs.end());
        if (seen.emplace(s, xs).second) todo.emplace_back(s, xs);
    }
    while (!todo.empty()) {
        auto [s, xs] = std::move(todo.front());
        todo.pop_front();
        for (const auto& t : m.row(s)) {
            std::vector<NodeId> img;
            for (auto u : xs)
                for (auto w : pg.edges.successors(u))
                    if (scc.comp[w] == comp && pg.mstate[w] == t.to) img.push_back(w);
            if (img.empty()) return false;
            std::sort(img.begin(), img.end());
            img.erase(std::unique(img.begin(), img.end()), img.end());
            if (seen.emplace(t.to, img).second) todo.emplace_back(t.to, std::move(img));
        }
    }
    return true;
}

} // namespace

SccAnalysis complete_accepting_scc(const ProductGraph& pg, const MarkovChain& m) {
    SccAnalysis a;
    a.scc = tarjan_scc(pg.edges);
    a.accepting.assign(a.scc.count, false);
    a.complete.assign(a.scc.count, false);
    std::vector<std::vector<NodeId>> members(a.scc.count);
    for (NodeId v = 0; v < pg.size(); ++v) {
        members[a.scc.comp[v]].push_back(v);
        if (pg.accepting[v]) a.accepting[a.scc.comp[v]] = true;
    }
    std::vector<NodeId> good;
    for (NodeId c = 0; c < a.scc.count; ++c) {
        if (!a.accepting[c]) continue;
        a.complete[c] = component_complete(pg, m, a.scc, c, members[c]);
        if (a.complete[c]) good.insert(good.end(), members[c].begin(), members[c].end());
    }
    a.live = reachable(reverse(pg.edges), good);
    return a;
}

// ── Checker ─────────────────────────────────────────────────────────────────

namespace {

std::uint64_t compute_vbar(std::size_t m, std::size_t size) {
    std::uint64_t v = static_cast<std::uint64_t>(m) * size;
    for (std::size_t i = 0; i < size && v < kVbarCap; ++i) v *= 2;
    return std::min(v, kVbarCap - 1);
}

std::optional<StateLasso> extract_lasso(const ProductGraph& pg, const SccAnalysis& a) {
    NodeId target = 0;
    bool found = false;
    for (NodeId v = 0; v < pg.size() && !found; ++v)
        if (pg.accepting[v] && a.complete[a.scc.comp[v]]) {
            target = v;
            found = true;
        }
    if (!found) return std::nullopt;
    constexpr NodeId kNone = std::numeric_limits<NodeId>::max();
    // Stem: BFS from the initial nodes.
    std::vector<NodeId> parent(pg.size(), kNone);
    std::vector<bool> seen(pg.size(), false);
    std::deque<NodeId> q;
    for (auto v : pg.initial)
        if (!seen[v]) {
            seen[v] = true;
            q.push_back(v);
        }
    while (!q.empty() && !seen[target]) {
        auto v = q.front();
        q.pop_front();
        for (auto w : pg.edges.successors(v))
            if (!seen[w]) {
                seen[w] = true;
                parent[w] = v;
                q.push_back(w);
            }
    }
    std::vector<NodeId> stem;
    for (auto v = parent[target]; v != kNone; v = parent[v]) stem.push_back(v);
    std::reverse(stem.begin(), stem.end());
    // Loop: BFS inside the component back to the target.
    const auto comp = a.scc.comp[target];
    std::fill(parent.begin(), parent.end(), kNone);
    std::fill(seen.begin(), seen.end(), false);
    q.clear();
    NodeId last = kNone;
    for (auto w : pg.edges.successors(target)) {
        if (a.scc.comp[w] != comp || seen[w]) continue;
        seen[w] = true;
        q.push_back(w);
    }
    if (seen[target]) last = target;
    while (!q.empty() && last == kNone) {
        auto v = q.front();
        q.pop_front();
        for (auto w : pg.edges.successors(v)) {
            if (w == target) {
                last = v;
                break;
            }
            if (a.scc.comp[w] == comp && !seen[w]) {
                seen[w] = true;
                parent[w] = v;
                q.push_back(w);
            }
        }
    }
    StateLasso out;
    for (auto v : stem) out.stem.push_back(pg.mstate[v]);
    std::vector<NodeId> cyc;
    if (last != target)
        for (auto v = last; v != kNone; v = parent[v]) cyc.push_back(v);
    std::reverse(cyc.begin(), cyc.end());
    out.loop.push_back(pg.mstate[target]);
    for (auto v : cyc) out.loop.push_back(pg.mstate[v]);
    return out;
}

void fill_stats(DiamondStats* st, const GAutomaton& g, const InstancedNba& b, const ProductGraph& pg,
                const SccAnalysis& a) {
    if (!st) return;
    st->g_states = g.state_count();
    st->b_states = b.state_count();
    st->product_nodes = pg.size();
    st->product_edges = pg.edges.edge_count();
    st->components = a.scc.count;
}

} // namespace

DiamondChecker::DiamondChecker(const MarkovChain& m, const FormulaPtr& phi, std::size_t max_nodes)
    : m_(&m), max_nodes_(max_nodes) {
    phi_ = to_nnf(phi);
    if (classify(phi_) == FragmentClass::FullPLTL) throw FragmentError("formula is outside pLTL with upper-bounded eventualities");
    renamed_ = rename_apart(phi_);
    user_vars_ = pltl::variables(phi_);
    g_ = build_g(rewrite_constant_bounds(renamed_.formula));
    vbar_ = compute_vbar(m.size(), size(phi_));
}

std::vector<std::uint64_t> DiamondChecker::internal_valuation(const Valuation& user) const {
    std::vector<std::uint64_t> v;
    for (const auto& p : g_->params()) v.push_back(user.at(renamed_.origin.at(p)));
    return v;
}

bool DiamondChecker::check_pos(const Valuation& v, DiamondStats* stats, StateLasso* witness) {
    InstancedNba b(degeneralize(g_), internal_valuation(v));
    auto pg = product(*m_, b, max_nodes_);
    auto a = complete_accepting_scc(pg, *m_);
    fill_stats(stats, *g_, b, pg, a);
    const bool ok = std::any_of(pg.initial.begin(), pg.initial.end(), [&](NodeId n) { return a.live[n]; });
    if (ok && witness) *witness = *extract_lasso(pg, a);
    return ok;
}

bool DiamondChecker::check_as1(const Valuation& v, DiamondStats* stats) {
    InstancedNba b(degeneralize(g_), internal_valuation(v));
    auto pg = product(*m_, b, max_nodes_);
    auto a = complete_accepting_scc(pg, *m_);
    fill_stats(stats, *g_, b, pg, a);
    // Track the set of live automaton states consistent with the path so far.
    // The product is unambiguous, so Pr = 1 iff this set never becomes empty.
    std::vector<NodeId> x0;
    for (auto n : pg.initial)
        if (a.live[n]) x0.push_back(n);
    if (x0.empty()) return false;
    std::sort(x0.begin(), x0.end());
    std::set<std::pair<StateId, std::vector<NodeId>>> seen{{m_->initial(), x0}};
    std::deque<std::pair<StateId, std::vector<NodeId>>> todo{{m_->initial(), x0}};
    while (!todo.empty()) {
        auto [s, xs] = std::move(todo.front());
        todo.pop_front();
        for (const auto& t : m_->row(s)) {
            std::vector<NodeId> img;
            for (auto u : xs)
                for (auto w : pg.edges.successors(u))
                    if (a.live[w] && pg.mstate[w] == t.to) img.push_back(w);
            if (img.empty()) return false;
            std::sort(img.begin(), img.end());
            img.erase(std::unique(img.begin(), img.end()), img.end());
            if (seen.emplace(t.to, img).second) todo.emplace_back(t.to, std::move(img));
        }
    }
    return true;
}

bool check_pos(const MarkovChain& m, const FormulaPtr& phi, const Valuation& v) {
    return DiamondChecker(m, phi).check_pos(v);
}

bool check_as1(const MarkovChain& m, const FormulaPtr& phi, const Valuation& v) {
    return DiamondChecker(m, phi).check_as1(v);
}

namespace {

Valuation uniform(const std::vector<std::string>& vars, std::uint64_t n) {
    Valuation v;
    for (const auto& x : vars) v.set(x, n);
    return v;
}

} // namespace

bool emptiness_pos_diamond(const MarkovChain& m, const FormulaPtr& phi, DiamondStats* stats, std::size_t max_nodes) {
    DiamondChecker c(m, phi, max_nodes);
    return !c.check_pos(uniform(c.variables(), c.vbar()), stats);
}

bool emptiness_as1_diamond(const MarkovChain& m, const FormulaPtr& phi, DiamondStats* stats, std::size_t max_nodes) {
    DiamondChecker c(m, phi, max_nodes);
    return !c.check_as1(uniform(c.variables(), c.vbar()), stats);
}

MinimalSet min_set_diamond(const MarkovChain& m, const FormulaPtr& phi, std::optional<std::uint64_t> n,
                           BisectionStats* stats, std::size_t max_nodes) {
    DiamondChecker c(m, phi, max_nodes);
    const auto& vars = c.variables();
    return bisection_min_set([&](const Point& p) { return c.check_pos(p); }, Hypercube::uniform(vars.size(), n.value_or(c.vbar())),
                             vars, stats);
}

bool accepts_lasso(const FormulaPtr& phi, const Valuation& v, const LassoWord& w) {
    if (w.loop.empty()) throw UsageError("lasso loop must be nonempty");
    const std::size_t len = w.stem.size() + w.loop.size();
    MarkovChain chain(len);
    for (std::size_t i = 0; i < len; ++i) {
        const auto& l = i < w.stem.size() ? w.stem[i] : w.loop[i - w.stem.size()];
        for (const auto& a : l) chain.add_label(static_cast<StateId>(i), a);
        const std::size_t next = i + 1 < len ? i + 1 : w.stem.size();
        chain.set_transition(static_cast<StateId>(i), static_cast<StateId>(next), 1);
    }
    chain.set_initial(0);
    DiamondChecker c(chain, phi);
    InstancedNba b(degeneralize(c.g()), c.internal_valuation(v));
    auto pg = product(chain, b);
    auto scc = tarjan_scc(pg.edges);
    std::vector<bool> cyclic(scc.count, false);
    for (NodeId u = 0; u < pg.size(); ++u)
        for (auto x : pg.edges.successors(u))
            if (scc.comp[x] == scc.comp[u]) cyclic[scc.comp[u]] = true;
    for (NodeId u = 0; u < pg.size(); ++u)
        if (pg.accepting[u] && cyclic[scc.comp[u]]) return true;
    return false;
}

// ── Emission ────────────────────────────────────────────────────────────────

std::string emit_automata(const FormulaPtr& phi, const Valuation& v, std::size_t max_states) {
    auto nnf = to_nnf(phi);
    auto renamed = rename_apart(nnf);
    auto g = build_g(rewrite_constant_bounds(renamed.formula));
    const std::size_t na = g->atoms().size();
    if (na > 16) throw ResourceLimit("too many atoms to enumerate letters");
    const LetterMask letters = LetterMask{1} << na;
    auto letter_str = [&](LetterMask l) {
        Letter s;
        for (std::size_t i = 0; i < na; ++i)
            if (l >> i & 1u) s.insert(g->atoms()[i]);
        return to_string(s);
    };
    std::ostringstream out;

    // G: all letters, every choice of retained forbid flags.
    std::vector<std::tuple<GStateId, LetterMask, GStateId>> g_edges;
    std::set<GStateId> g_init;
    std::deque<GStateId> todo;
    std::set<GStateId> seen;
    for (LetterMask l = 0; l < letters; ++l)
        for (auto q : g->initial(l)) {
            g_init.insert(q);
            if (seen.insert(q).second) todo.push_back(q);
        }
    while (!todo.empty()) {
        auto q = todo.front();
        todo.pop_front();
        if (seen.size() > max_states) throw ResourceLimit("automaton exceeds " + std::to_string(max_states) + " states");
        const auto forbid = g->state(q).forbid;
        std::set<std::pair<LetterMask, GStateId>> edges;
        for (LetterMask l = 0; l < letters; ++l)
            for (std::uint32_t keep = forbid;; keep = (keep - 1) & forbid) {
                for (auto q2 : g->successors(q, l, keep)) edges.emplace(l, q2);
                if (keep == 0) break;
            }
        for (auto [l, q2] : edges) {
            g_edges.emplace_back(q, l, q2);
            if (seen.insert(q2).second) todo.push_back(q2);
        }
    }
    out << "# G\nstates " << seen.size() << "\n";
    for (auto q : seen) out << "state " << q << " " << g->describe(q) << "\n";
    out << "initial";
    for (auto q : g_init) out << ' ' << q;
    out << "\n";
    for (std::size_t i = 0; i < g->acc_b_count(); ++i) {
        out << "acc_b " << i << ":";
        for (auto q : seen)
            if (g->in_acc_b(q, i)) out << ' ' << q;
        out << "\n";
    }
    for (std::size_t j = 0; j < g->acc_p_count(); ++j) {
        out << "acc_p " << g->params()[j] << ":";
        for (auto q : seen)
            if (g->in_acc_p(q, j)) out << ' ' << q;
        out << "\n";
    }
    // The letter on an edge is the one read at the target position.
    for (auto [q, l, q2] : g_edges) out << q << ' ' << letter_str(l) << ' ' << q2 << "\n";

    // U: index component.
    auto u = degeneralize(g);
    out << "# U\nindices " << u.index_count() << "\n";
    for (auto [q, l, q2] : g_edges)
        for (std::uint32_t i = 0; i < u.index_count(); ++i)
            out << "(" << q << "," << i << ") " << letter_str(l) << " (" << q2 << "," << u.next_index(q, i) << ")\n";

    // B(v).
    std::vector<std::uint64_t> vv;
    for (const auto& p : g->params()) vv.push_back(v.at(renamed.origin.at(p)));
    InstancedNba b(u, vv);
    std::set<BStateId> bseen;
    std::deque<BStateId> btodo;
    std::vector<std::tuple<BStateId, LetterMask, BStateId>> b_edges;
    std::set<BStateId> b_init;
    for (LetterMask l = 0; l < letters; ++l)
        for (auto q : b.initial(l)) {
            b_init.insert(q);
            if (bseen.insert(q).second) btodo.push_back(q);
        }
    while (!btodo.empty()) {
        auto q = btodo.front();
        btodo.pop_front();
        if (bseen.size() > max_states) throw ResourceLimit("automaton exceeds " + std::to_string(max_states) + " states");
        for (LetterMask l = 0; l < letters; ++l) {
            const std::vector<BStateId> succ = b.successors(q, l);
            for (auto q2 : succ) {
                b_edges.emplace_back(q, l, q2);
                if (bseen.insert(q2).second) btodo.push_back(q2);
            }
        }
    }
    out << "# B " << v.to_string() << "\nstates " << bseen.size() << "\n";
    for (auto q : bseen) out << "state " << q << " " << b.describe(q) << (b.accepting(q) ? " [acc]" : "") << "\n";
    out << "initial";
    for (auto q : b_init) out << ' ' << q;
    out << "\n";
    for (auto [q, l, q2] : b_edges) out << q << ' ' << letter_str(l) << ' ' << q2 << "\n";
    return out.str();
}

} // namespace pltl
