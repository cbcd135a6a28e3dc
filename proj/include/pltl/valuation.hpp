#ifndef PLTL_VALUATION_HPP
#define PLTL_VALUATION_HPP

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace pltl {

// Assignment of naturals to parameter names. Names are kept sorted, which
// fixes the coordinate order used by Point and MinimalSet.
class Valuation {
public:
    Valuation() = default;
    explicit Valuation(std::map<std::string, std::uint64_t> values) : values_(std::move(values)) {}

    // "x=3,y=5"; whitespace around tokens is ignored, the empty string is the
    // empty valuation.
    static Valuation parse(std::string_view text);

    bool contains(const std::string& name) const { return values_.count(name) != 0; }
    std::uint64_t at(const std::string& name) const;
    void set(const std::string& name, std::uint64_t value) { values_[name] = value; }

    const std::map<std::string, std::uint64_t>& values() const { return values_; }
    std::vector<std::string> names() const;
    std::size_t size() const { return values_.size(); }

    std::string to_string() const;

    bool operator==(const Valuation& o) const { return values_ == o.values_; }

private:
    std::map<std::string, std::uint64_t> values_;
};

// Componentwise order; throws UsageError when the variable sets differ.
bool leq(const Valuation& v, const Valuation& w);

using Point = std::vector<std::uint64_t>;

bool leq(const Point& u, const Point& v);

Point to_point(const Valuation& v, const std::vector<std::string>& names);
Valuation to_valuation(const Point& p, const std::vector<std::string>& names);

// Box {0..upper[0]} x ... x {0..upper[d-1]}.
struct Hypercube {
    Point upper;

    static Hypercube uniform(std::size_t dim, std::uint64_t n) { return {Point(dim, n)}; }
    std::size_t dim() const { return upper.size(); }
    // Number of points, saturating at UINT64_MAX.
    std::uint64_t volume() const;
};

// Antichain of minimal valuations, kept in lexicographic order. Represents the
// upward closure of its elements.
class MinimalSet {
public:
    MinimalSet() = default;
    explicit MinimalSet(std::vector<std::string> vars) : vars_(std::move(vars)) {}

    const std::vector<std::string>& variables() const { return vars_; }
    std::size_t dim() const { return vars_.size(); }
    const std::vector<Point>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }

    // Returns false when v is already dominated by a stored element.
    bool insert_minimal(const Point& v);
    // True iff some stored u satisfies u <= v. Recursive binary search over
    // the lexicographic order.
    bool member(const Point& v) const;
    bool member(const Valuation& v) const;

    bool is_antichain() const;
    std::string to_string() const;  // one valuation per line

    bool operator==(const MinimalSet& o) const { return vars_ == o.vars_ && points_ == o.points_; }

private:
    void check_dim(const Point& v) const;
    bool member_rec(const Point& v, std::size_t lo, std::size_t hi, std::size_t k) const;

    std::vector<std::string> vars_;
    std::vector<Point> points_;
};

MinimalSet insert_minimal(MinimalSet s, const Point& v);
bool member(const MinimalSet& s, const Point& v);

using MonotoneOracle = std::function<bool(const Point&)>;

struct BisectionStats {
    std::uint64_t oracle_calls = 0;
    std::uint64_t boxes = 0;
};

// Minimal points of {v in H | oracle(v)} for a monotone oracle. Midpoint
// bisection: a passing midpoint discards the box strictly above it, a failing
// one the box at or below it; the remaining sub-boxes are visited in
// lexicographic sign-pattern order. Results are memoised, so every point is
// queried at most once.
MinimalSet bisection_min_set(const MonotoneOracle& oracle, const Hypercube& box,
                             std::vector<std::string> vars = {}, BisectionStats* stats = nullptr);

// Exhaustive scan of H in lexicographic order, keeping minimal satisfying points.
MinimalSet scan_min_set(const MonotoneOracle& oracle, const Hypercube& box,
                        std::vector<std::string> vars = {}, BisectionStats* stats = nullptr);

// (N*d)^(d-1), saturating.
long double antichain_bound(std::uint64_t n, std::size_t d);

} // namespace pltl

#endif
