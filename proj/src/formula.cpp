#include "pltl/formula.hpp"

#include "pltl/errors.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <limits>
#include <set>
#include <unordered_map>

namespace pltl {

FormulaPtr make_atom(std::string name, std::size_t pos) {
    return std::make_shared<const Formula>(Formula{Op::Atom, std::move(name), {}, nullptr, nullptr, pos});
}

FormulaPtr make_neg_atom(std::string name, std::size_t pos) {
    return std::make_shared<const Formula>(Formula{Op::NegAtom, std::move(name), {}, nullptr, nullptr, pos});
}

FormulaPtr make_unary(Op op, FormulaPtr child, std::size_t pos) {
    return std::make_shared<const Formula>(Formula{op, {}, {}, std::move(child), nullptr, pos});
}

FormulaPtr make_binary(Op op, FormulaPtr lhs, FormulaPtr rhs, std::size_t pos) {
    return std::make_shared<const Formula>(Formula{op, {}, {}, std::move(lhs), std::move(rhs), pos});
}

FormulaPtr make_bounded(Op op, Bound bound, FormulaPtr child, std::size_t pos) {
    return std::make_shared<const Formula>(Formula{op, {}, std::move(bound), std::move(child), nullptr, pos});
}

// ── Parser ──────────────────────────────────────────────────────────────────

namespace {

// Largest constant bound accepted; unfolding is linear in the constant.
constexpr std::uint64_t kMaxConstant = std::numeric_limits<std::uint32_t>::max();

class Parser {
public:
    explicit Parser(std::string_view text) : s_(text) {}

    FormulaPtr parse() {
        skip();
        if (i_ == s_.size()) fail("empty formula");
        auto f = parse_or();
        skip();
        if (i_ != s_.size()) fail("unexpected '" + std::string(1, s_[i_]) + "'");
        return f;
    }

private:
    [[noreturn]] void fail(const std::string& msg) const { fail_at(msg, i_); }
    [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const {
        throw ParseError(msg + " at offset " + std::to_string(at), at);
    }

    void skip() {
        while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    }

    bool peek(char c) {
        skip();
        return i_ < s_.size() && s_[i_] == c;
    }

    void expect(char c) {
        if (!peek(c)) {
            if (i_ == s_.size()) fail(std::string("expected '") + c + "' but input ended");
            fail(std::string("expected '") + c + "'");
        }
        ++i_;
    }

    FormulaPtr parse_or() {
        auto lhs = parse_and();
        while (peek('|')) {
            auto at = i_++;
            lhs = make_binary(Op::Or, lhs, parse_and(), at);
        }
        return lhs;
    }

    FormulaPtr parse_and() {
        auto lhs = parse_until();
        while (peek('&')) {
            auto at = i_++;
            lhs = make_binary(Op::And, lhs, parse_until(), at);
        }
        return lhs;
    }

    FormulaPtr parse_until() {
        auto lhs = parse_unary();
        skip();
        if (i_ < s_.size() && (s_[i_] == 'U' || s_[i_] == 'R')) {
            Op op = s_[i_] == 'U' ? Op::Until : Op::Release;
            auto at = i_++;
            return make_binary(op, lhs, parse_until(), at);
        }
        return lhs;
    }

    std::uint64_t parse_nat() {
        auto start = i_;
        std::uint64_t v = 0;
        while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
            v = v * 10 + static_cast<std::uint64_t>(s_[i_] - '0');
            if (v > kMaxConstant) fail_at("constant bound overflows (max " + std::to_string(kMaxConstant) + ")", start);
            ++i_;
        }
        return v;
    }

    std::string parse_ident() {
        auto start = i_;
        if (i_ >= s_.size() || !std::islower(static_cast<unsigned char>(s_[i_]))) fail("expected identifier");
        ++i_;
        while (i_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[i_])) || s_[i_] == '_')) ++i_;
        return std::string(s_.substr(start, i_ - start));
    }

    // After "F" or "G": "[<=" bound "]".
    Bound parse_bound(bool allow_param) {
        expect('[');
        skip();
        auto cmp = i_;
        if (s_.substr(i_, 2) != "<=") {
            if (i_ < s_.size() && (s_[i_] == '<' || s_[i_] == '>' || s_[i_] == '='))
                fail_at("only upper bounds '<=' are supported", cmp);
            fail("expected '<='");
        }
        i_ += 2;
        skip();
        Bound b;
        if (i_ < s_.size() && s_[i_] == '-') fail("negative constant bound");
        if (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_]))) {
            b = Bound::constant(parse_nat());
        } else if (i_ < s_.size() && std::islower(static_cast<unsigned char>(s_[i_]))) {
            auto at = i_;
            auto name = parse_ident();
            if (!allow_param) fail_at("parameterised G[<=" + name + "] is outside the supported fragment", at);
            b = Bound::param(name);
        } else {
            fail("expected a variable or a natural number");
        }
        expect(']');
        return b;
    }

    FormulaPtr parse_unary() {
        skip();
        if (i_ == s_.size()) fail("unexpected end of formula");
        auto at = i_;
        char c = s_[i_];
        if (c == '!') {
            ++i_;
            return make_unary(Op::Not, parse_unary(), at);
        }
        if (c == '(') {
            ++i_;
            auto f = parse_or();
            expect(')');
            return f;
        }
        if (std::islower(static_cast<unsigned char>(c))) return make_atom(parse_ident(), at);
        if (std::isupper(static_cast<unsigned char>(c))) {
            ++i_;
            switch (c) {
            case 'X': return make_unary(Op::Next, parse_unary(), at);
            case 'F':
                if (peek('[')) {
                    auto b = parse_bound(true);
                    return make_bounded(Op::BoundedEventually, b, parse_unary(), at);
                }
                return make_unary(Op::Eventually, parse_unary(), at);
            case 'G':
                if (peek('[')) {
                    auto b = parse_bound(false);
                    return make_bounded(Op::BoundedAlways, b, parse_unary(), at);
                }
                return make_unary(Op::Always, parse_unary(), at);
            case 'U':
            case 'R': fail_at(std::string("binary operator '") + c + "' is missing its left operand", at);
            default: fail_at(std::string("unknown operator '") + c + "'", at);
            }
        }
        fail_at(std::string("unexpected '") + c + "'", at);
    }

    std::string_view s_;
    std::size_t i_ = 0;
};

std::string bound_str(const Bound& b) { return b.is_param() ? b.var : std::to_string(b.value); }

void print(const FormulaPtr& f, std::string& out) {
    switch (f->op) {
    case Op::Atom: out += f->name; return;
    case Op::NegAtom: out += '!' + f->name; return;
    case Op::Not: out += '!'; print(f->lhs, out); return;
    case Op::Next: out += "X "; print(f->lhs, out); return;
    case Op::Always: out += "G "; print(f->lhs, out); return;
    case Op::Eventually: out += "F "; print(f->lhs, out); return;
    case Op::BoundedEventually:
        out += "F[<=" + bound_str(f->bound) + "] ";
        print(f->lhs, out);
        return;
    case Op::BoundedAlways:
        out += "G[<=" + bound_str(f->bound) + "] ";
        print(f->lhs, out);
        return;
    case Op::And:
    case Op::Or:
    case Op::Until:
    case Op::Release: {
        const char* sym = f->op == Op::And ? " & " : f->op == Op::Or ? " | " : f->op == Op::Until ? " U " : " R ";
        out += '(';
        print(f->lhs, out);
        out += sym;
        print(f->rhs, out);
        out += ')';
        return;
    }
    }
}

} // namespace

FormulaPtr parse_formula(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const FormulaPtr& f) {
    std::string out;
    print(f, out);
    return out;
}

bool equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (a == b) return true;
    if (!a || !b) return false;
    if (a->op != b->op || a->name != b->name || a->bound != b->bound) return false;
    return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
}

// ── Normalisation ───────────────────────────────────────────────────────────

bool is_nnf(const FormulaPtr& f) {
    if (!f) return true;
    if (f->op == Op::Not) return false;
    return is_nnf(f->lhs) && is_nnf(f->rhs);
}

namespace {

FormulaPtr nnf(const FormulaPtr& f, bool neg) {
    const auto p = f->pos;
    switch (f->op) {
    case Op::Atom: return neg ? make_neg_atom(f->name, p) : f;
    case Op::NegAtom: return neg ? make_atom(f->name, p) : f;
    case Op::Not: return nnf(f->lhs, !neg);
    case Op::And: return make_binary(neg ? Op::Or : Op::And, nnf(f->lhs, neg), nnf(f->rhs, neg), p);
    case Op::Or: return make_binary(neg ? Op::And : Op::Or, nnf(f->lhs, neg), nnf(f->rhs, neg), p);
    case Op::Next: return make_unary(Op::Next, nnf(f->lhs, neg), p);
    case Op::Until: return make_binary(neg ? Op::Release : Op::Until, nnf(f->lhs, neg), nnf(f->rhs, neg), p);
    case Op::Release: return make_binary(neg ? Op::Until : Op::Release, nnf(f->lhs, neg), nnf(f->rhs, neg), p);
    case Op::Always: return make_unary(neg ? Op::Eventually : Op::Always, nnf(f->lhs, neg), p);
    case Op::Eventually: return make_unary(neg ? Op::Always : Op::Eventually, nnf(f->lhs, neg), p);
    case Op::BoundedEventually:
        if (neg && f->bound.is_param())
            throw FragmentError("negated parameterised eventuality '" + to_string(f) + "' (offset " +
                                std::to_string(p) + ") is not expressible with upper-bounded eventualities");
        return make_bounded(neg ? Op::BoundedAlways : Op::BoundedEventually, f->bound, nnf(f->lhs, neg), p);
    case Op::BoundedAlways:
        if (f->bound.is_param())
            throw FragmentError("parameterised bounded always '" + to_string(f) + "' is outside the supported fragment");
        return make_bounded(neg ? Op::BoundedEventually : Op::BoundedAlways, f->bound, nnf(f->lhs, neg), p);
    }
    return f;
}

template <class Fn>
FormulaPtr map_children(const FormulaPtr& f, Fn&& fn) {
    if (f->is_literal()) return f;
    auto l = f->lhs ? fn(f->lhs) : nullptr;
    auto r = f->rhs ? fn(f->rhs) : nullptr;
    if (l == f->lhs && r == f->rhs) return f;
    return std::make_shared<const Formula>(Formula{f->op, f->name, f->bound, l, r, f->pos});
}

} // namespace

FormulaPtr to_nnf(const FormulaPtr& f) { return nnf(f, false); }

FormulaPtr rewrite_constant_bounds(const FormulaPtr& f) {
    auto g = map_children(f, [](const FormulaPtr& c) { return rewrite_constant_bounds(c); });
    if ((g->op != Op::BoundedEventually && g->op != Op::BoundedAlways) || g->bound.is_param()) return g;
    const Op join = g->op == Op::BoundedEventually ? Op::Or : Op::And;
    FormulaPtr acc = g->lhs;
    for (std::uint64_t k = 0; k < g->bound.value; ++k)
        acc = make_binary(join, g->lhs, make_unary(Op::Next, acc, g->pos), g->pos);
    return acc;
}

FormulaPtr substitute(const FormulaPtr& f, const Valuation& v) {
    auto g = map_children(f, [&](const FormulaPtr& c) { return substitute(c, v); });
    if (!g->bound.is_param()) return g;
    if (!v.contains(g->bound.var)) throw UsageError("valuation does not assign variable '" + g->bound.var + "'");
    return make_bounded(g->op, Bound::constant(v.at(g->bound.var)), g->lhs, g->pos);
}

FormulaPtr strip_params(const FormulaPtr& f) {
    auto g = map_children(f, [](const FormulaPtr& c) { return strip_params(c); });
    if (g->op == Op::BoundedEventually && g->bound.is_param()) return make_unary(Op::Eventually, g->lhs, g->pos);
    return g;
}

// ── Queries ─────────────────────────────────────────────────────────────────

std::size_t size(const FormulaPtr& f) {
    if (!f) return 0;
    return 1 + size(f->lhs) + size(f->rhs);
}

namespace {

void collect(const FormulaPtr& f, std::set<std::string>& vars, std::set<std::string>& aps) {
    if (!f) return;
    if (f->is_literal()) aps.insert(f->name);
    if (f->bound.is_param()) vars.insert(f->bound.var);
    collect(f->lhs, vars, aps);
    collect(f->rhs, vars, aps);
}

} // namespace

std::vector<std::string> variables(const FormulaPtr& f) {
    std::set<std::string> vars, aps;
    collect(f, vars, aps);
    return {vars.begin(), vars.end()};
}

std::vector<std::string> atoms(const FormulaPtr& f) {
    std::set<std::string> vars, aps;
    collect(f, vars, aps);
    return {aps.begin(), aps.end()};
}

std::vector<FormulaPtr> closure(const FormulaPtr& f) {
    std::vector<FormulaPtr> out;
    std::unordered_map<std::string, std::size_t> seen;
    std::function<void(const FormulaPtr&)> walk = [&](const FormulaPtr& g) {
        if (!g) return;
        walk(g->lhs);
        walk(g->rhs);
        if (seen.emplace(to_string(g), out.size()).second) out.push_back(g);
    };
    walk(f);
    return out;
}

std::string to_string(FragmentClass c) {
    switch (c) {
    case FragmentClass::Reach: return "Reach";
    case FragmentClass::Buchi: return "Buchi";
    case FragmentClass::GeneralizedBuchi: return "GeneralizedBuchi";
    case FragmentClass::FX: return "FX";
    case FragmentClass::Diamond: return "Diamond";
    case FragmentClass::FullPLTL: return "FullPLTL";
    }
    return "?";
}

namespace {

bool is_reach(const FormulaPtr& f) {
    return f->op == Op::BoundedEventually && f->bound.is_param() && f->lhs->op == Op::Atom;
}

bool is_buchi(const FormulaPtr& f) { return f->op == Op::Always && is_reach(f->lhs); }

bool is_buchi_conj(const FormulaPtr& f) {
    if (f->op == Op::And) return is_buchi_conj(f->lhs) && is_buchi_conj(f->rhs);
    return is_buchi(f);
}

bool is_fx(const FormulaPtr& f) {
    switch (f->op) {
    case Op::Atom:
    case Op::NegAtom: return true;
    case Op::And:
    case Op::Or: return is_fx(f->lhs) && is_fx(f->rhs);
    case Op::Next:
    case Op::Eventually:
    case Op::BoundedEventually:
    case Op::BoundedAlways: return is_fx(f->lhs);
    default: return false;
    }
}

bool is_diamond(const FormulaPtr& f) {
    if (!f) return true;
    if (f->op == Op::Not) return false;
    if (f->op == Op::BoundedAlways && f->bound.is_param()) return false;
    return is_diamond(f->lhs) && is_diamond(f->rhs);
}

} // namespace

FragmentClass classify(const FormulaPtr& f) {
    if (!is_diamond(f)) return FragmentClass::FullPLTL;
    if (is_reach(f)) return FragmentClass::Reach;
    if (is_buchi(f)) return FragmentClass::Buchi;
    if (f->op == Op::And && is_buchi_conj(f)) return FragmentClass::GeneralizedBuchi;
    if (is_fx(f)) return FragmentClass::FX;
    return FragmentClass::Diamond;
}

// ── Renaming ────────────────────────────────────────────────────────────────

Valuation RenamedFormula::expand(const Valuation& user) const {
    Valuation out;
    for (const auto& [renamed, orig] : origin) out.set(renamed, user.at(orig));
    return out;
}

RenamedFormula rename_apart(const FormulaPtr& f) {
    std::map<std::string, std::size_t> count;
    std::function<void(const FormulaPtr&)> tally = [&](const FormulaPtr& g) {
        if (!g) return;
        if (g->bound.is_param()) ++count[g->bound.var];
        tally(g->lhs);
        tally(g->rhs);
    };
    tally(f);

    RenamedFormula out;
    std::map<std::string, std::size_t> next;
    // Pre-order so numbering follows the textual left-to-right order.
    std::function<FormulaPtr(const FormulaPtr&)> walk = [&](const FormulaPtr& g) -> FormulaPtr {
        if (g->is_literal()) return g;
        Bound b = g->bound;
        if (b.is_param()) {
            if (count[b.var] > 1) {
                auto renamed = b.var + "#" + std::to_string(++next[b.var]);
                out.origin[renamed] = b.var;
                b.var = renamed;
            } else {
                out.origin[b.var] = b.var;
            }
        }
        auto l = g->lhs ? walk(g->lhs) : nullptr;
        auto r = g->rhs ? walk(g->rhs) : nullptr;
        return std::make_shared<const Formula>(Formula{g->op, g->name, b, l, r, g->pos});
    };
    out.formula = walk(f);
    return out;
}

} // namespace pltl
