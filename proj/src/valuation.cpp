#include "pltl/valuation.hpp"

#include "pltl/errors.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <map>
#include <sstream>

namespace pltl {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

} // namespace

// ── Valuation ───────────────────────────────────────────────────────────────

Valuation Valuation::parse(std::string_view text) {
    Valuation v;
    text = trim(text);
    if (text.empty()) return v;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto comma = text.find(',', start);
        auto item = trim(text.substr(start, comma == std::string_view::npos ? text.npos : comma - start));
        auto eq = item.find('=');
        if (eq == std::string_view::npos)
            throw UsageError("valuation entry '" + std::string(item) + "' lacks '='");
        auto name = trim(item.substr(0, eq));
        auto num = trim(item.substr(eq + 1));
        if (name.empty() || num.empty() ||
            !std::all_of(num.begin(), num.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
            throw UsageError("malformed valuation entry '" + std::string(item) + "'");
        if (num.size() > 18) throw UsageError("valuation value too large in '" + std::string(item) + "'");
        std::string key(name);
        if (v.contains(key)) throw UsageError("variable '" + key + "' assigned twice");
        v.set(key, std::stoull(std::string(num)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return v;
}

std::uint64_t Valuation::at(const std::string& name) const {
    auto it = values_.find(name);
    if (it == values_.end()) throw UsageError("valuation does not assign '" + name + "'");
    return it->second;
}

std::vector<std::string> Valuation::names() const {
    std::vector<std::string> out;
    out.reserve(values_.size());
    for (const auto& [k, _] : values_) out.push_back(k);
    return out;
}

std::string Valuation::to_string() const {
    std::string out;
    for (const auto& [k, x] : values_) {
        if (!out.empty()) out += ',';
        out += k + '=' + std::to_string(x);
    }
    return out;
}

bool leq(const Valuation& v, const Valuation& w) {
    if (v.size() != w.size()) throw UsageError("valuations over different variables");
    auto it = w.values().begin();
    for (const auto& [k, x] : v.values()) {
        if (it->first != k) throw UsageError("valuations over different variables");
        if (x > it->second) return false;
        ++it;
    }
    return true;
}

bool leq(const Point& u, const Point& v) {
    if (u.size() != v.size()) throw UsageError("dimension mismatch");
    for (std::size_t i = 0; i < u.size(); ++i)
        if (u[i] > v[i]) return false;
    return true;
}

Point to_point(const Valuation& v, const std::vector<std::string>& names) {
    Point p;
    p.reserve(names.size());
    for (const auto& n : names) p.push_back(v.at(n));
    return p;
}

Valuation to_valuation(const Point& p, const std::vector<std::string>& names) {
    if (p.size() != names.size()) throw UsageError("dimension mismatch");
    Valuation v;
    for (std::size_t i = 0; i < p.size(); ++i) v.set(names[i], p[i]);
    return v;
}

std::uint64_t Hypercube::volume() const {
    std::uint64_t vol = 1;
    for (auto n : upper) {
        if (n == std::numeric_limits<std::uint64_t>::max() ||
            vol > std::numeric_limits<std::uint64_t>::max() / (n + 1))
            return std::numeric_limits<std::uint64_t>::max();
        vol *= n + 1;
    }
    return vol;
}

// ── MinimalSet ──────────────────────────────────────────────────────────────

void MinimalSet::check_dim(const Point& v) const {
    if (v.size() != vars_.size())
        throw UsageError("dimension mismatch: expected " + std::to_string(vars_.size()) + ", got " +
                         std::to_string(v.size()));
}

bool MinimalSet::insert_minimal(const Point& v) {
    check_dim(v);
    for (const auto& u : points_)
        if (leq(u, v)) return false;
    std::erase_if(points_, [&](const Point& u) { return leq(v, u); });
    points_.insert(std::lower_bound(points_.begin(), points_.end(), v), v);
    return true;
}

// Points in [lo,hi) agree on coordinates < k. Those with coordinate k <= v[k]
// form a prefix; each distinct value there opens a sub-range for coordinate k+1.
bool MinimalSet::member_rec(const Point& v, std::size_t lo, std::size_t hi, std::size_t k) const {
    if (lo >= hi) return false;
    if (k == v.size()) return true;
    auto first = points_.begin() + static_cast<std::ptrdiff_t>(lo);
    auto last = points_.begin() + static_cast<std::ptrdiff_t>(hi);
    auto end = std::upper_bound(first, last, v[k], [k](std::uint64_t x, const Point& p) { return x < p[k]; });
    // Larger coordinate-k values come last; try them first since their
    // remaining coordinates tend to be smaller in an antichain.
    auto group_end = end;
    while (group_end != first) {
        auto val = (*(group_end - 1))[k];
        auto group_begin = std::lower_bound(first, group_end, val, [k](const Point& p, std::uint64_t x) { return p[k] < x; });
        if (member_rec(v, static_cast<std::size_t>(group_begin - points_.begin()),
                       static_cast<std::size_t>(group_end - points_.begin()), k + 1))
            return true;
        group_end = group_begin;
    }
    return false;
}

bool MinimalSet::member(const Point& v) const {
    check_dim(v);
    return member_rec(v, 0, points_.size(), 0);
}

bool MinimalSet::member(const Valuation& v) const { return member(to_point(v, vars_)); }

bool MinimalSet::is_antichain() const {
    for (std::size_t i = 0; i < points_.size(); ++i)
        for (std::size_t j = 0; j < points_.size(); ++j)
            if (i != j && leq(points_[i], points_[j])) return false;
    return std::is_sorted(points_.begin(), points_.end());
}

std::string MinimalSet::to_string() const {
    std::string out;
    for (const auto& p : points_) {
        out += to_valuation(p, vars_).to_string();
        out += '\n';
    }
    return out;
}

MinimalSet insert_minimal(MinimalSet s, const Point& v) {
    s.insert_minimal(v);
    return s;
}

bool member(const MinimalSet& s, const Point& v) { return s.member(v); }

// ── Bisection ───────────────────────────────────────────────────────────────

namespace {

constexpr std::uint64_t kBruteForceVolume = 64;

class Bisector {
public:
    Bisector(const MonotoneOracle& oracle, MinimalSet& out, BisectionStats& stats)
        : oracle_(oracle), out_(out), stats_(stats) {}

    bool eval(const Point& p) {
        auto it = memo_.find(p);
        if (it != memo_.end()) return it->second;
        ++stats_.oracle_calls;
        bool r = oracle_(p);
        memo_.emplace(p, r);
        return r;
    }

    bool dominated(const Point& p) const {
        for (const auto& u : out_.points())
            if (leq(u, p)) return true;
        return false;
    }

    // Maximal points of the box not above any known minimal point.
    std::vector<Point> free_corners(const Point& lo, const Point& hi) const {
        std::vector<Point> corners{hi};
        for (const auto& u : out_.points()) {
            if (!leq(u, hi)) continue;
            Point c = u;
            for (std::size_t i = 0; i < c.size(); ++i) c[i] = std::max(c[i], lo[i]);
            std::vector<Point> next;
            for (const auto& q : corners) {
                if (!leq(c, q)) {
                    next.push_back(q);
                    continue;
                }
                for (std::size_t i = 0; i < c.size(); ++i) {
                    if (c[i] == lo[i]) continue;
                    Point r = q;
                    r[i] = c[i] - 1;
                    next.push_back(r);
                }
            }
            std::sort(next.begin(), next.end());
            next.erase(std::unique(next.begin(), next.end()), next.end());
            corners.clear();
            for (std::size_t i = 0; i < next.size(); ++i) {
                bool covered = false;
                for (std::size_t j = 0; j < next.size() && !covered; ++j)
                    covered = i != j && leq(next[i], next[j]);
                if (!covered) corners.push_back(next[i]);
            }
        }
        return corners;
    }

    void scan(const Point& lo, const Point& hi) {
        Point p = lo;
        while (true) {
            if (!dominated(p) && eval(p)) out_.insert_minimal(p);
            std::size_t k = p.size();
            while (k > 0) {
                --k;
                if (p[k] < hi[k]) {
                    ++p[k];
                    break;
                }
                p[k] = lo[k];
                if (k == 0) return;
            }
            if (p.empty()) return;
        }
    }

    void solve(const Point& lo, const Point& hi) {
        ++stats_.boxes;
        const std::size_t d = lo.size();
        if (dominated(lo)) return;
        if (d >= 2) {
            bool any = false;
            for (const auto& c : free_corners(lo, hi))
                if (eval(c)) {
                    any = true;
                    break;
                }
            if (!any) return;
            if (eval(lo)) {
                out_.insert_minimal(lo);
                return;
            }
        }
        std::uint64_t vol = 1;
        bool unit = true;
        for (std::size_t i = 0; i < d; ++i) {
            if (lo[i] != hi[i]) unit = false;
            std::uint64_t w = hi[i] - lo[i] + 1;
            vol = vol > kBruteForceVolume ? vol : vol * std::min<std::uint64_t>(w, kBruteForceVolume + 1);
        }
        if (unit) {
            if (eval(lo)) out_.insert_minimal(lo);
            return;
        }
        if (d >= 2 && vol < kBruteForceVolume) {
            scan(lo, hi);
            return;
        }
        Point mid(d);
        std::vector<std::size_t> split;
        for (std::size_t i = 0; i < d; ++i) {
            mid[i] = lo[i] + (hi[i] - lo[i]) / 2;
            if (lo[i] != hi[i]) split.push_back(i);
        }
        const bool pass = eval(mid);
        const std::size_t k = split.size();
        const std::uint64_t patterns = std::uint64_t{1} << k;
        for (std::uint64_t pat = 0; pat < patterns; ++pat) {
            if (pass && pat == patterns - 1) continue;  // strictly above the midpoint
            if (!pass && pat == 0) continue;            // at or below the midpoint
            Point sub_lo = lo, sub_hi = hi;
            for (std::size_t j = 0; j < k; ++j) {
                std::size_t i = split[j];
                bool high = (pat >> (k - 1 - j)) & 1u;
                if (high)
                    sub_lo[i] = mid[i] + 1;
                else
                    sub_hi[i] = mid[i];
            }
            for (std::size_t i = 0; i < d; ++i)
                if (lo[i] == hi[i]) sub_hi[i] = sub_lo[i] = lo[i];
            solve(sub_lo, sub_hi);
        }
    }

private:
    const MonotoneOracle& oracle_;
    MinimalSet& out_;
    BisectionStats& stats_;
    std::map<Point, bool> memo_;
};

std::vector<std::string> default_names(std::vector<std::string> vars, std::size_t d) {
    if (vars.empty())
        for (std::size_t i = 0; i < d; ++i) vars.push_back("x" + std::to_string(i + 1));
    if (vars.size() != d) throw UsageError("variable list does not match hypercube dimension");
    return vars;
}

} // namespace

MinimalSet bisection_min_set(const MonotoneOracle& oracle, const Hypercube& box, std::vector<std::string> vars,
                             BisectionStats* stats) {
    MinimalSet out(default_names(std::move(vars), box.dim()));
    BisectionStats local;
    BisectionStats& st = stats ? *stats : local;
    Bisector b(oracle, out, st);
    b.solve(Point(box.dim(), 0), box.upper);
    return out;
}

MinimalSet scan_min_set(const MonotoneOracle& oracle, const Hypercube& box, std::vector<std::string> vars,
                        BisectionStats* stats) {
    MinimalSet out(default_names(std::move(vars), box.dim()));
    BisectionStats local;
    BisectionStats& st = stats ? *stats : local;
    Bisector b(oracle, out, st);
    if (box.dim() == 0) {
        if (b.eval({})) out.insert_minimal({});
        return out;
    }
    b.scan(Point(box.dim(), 0), box.upper);
    return out;
}

long double antichain_bound(std::uint64_t n, std::size_t d) {
    if (d == 0) return 1.0L;
    long double base = static_cast<long double>(n) * static_cast<long double>(d);
    long double r = 1.0L;
    for (std::size_t i = 0; i + 1 < d; ++i) r *= base;
    return r;
}

} // namespace pltl
