#include "pltl/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace pltl {

namespace {

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

BigInt parse_natural(std::string_view s) {
    BigInt v = 0;
    for (char c : s) v = v * 10 + (c - '0');
    return v;
}

} // namespace

Rational parse_rational(std::string_view text) {
    bool negative = false;
    if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    Rational result;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        auto num = text.substr(0, slash), den = text.substr(slash + 1);
        if (!all_digits(num) || !all_digits(den))
            throw std::invalid_argument("malformed fraction '" + std::string(text) + "'");
        BigInt d = parse_natural(den);
        if (d == 0) throw std::invalid_argument("zero denominator");
        result = Rational(parse_natural(num), d);
    } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
        auto whole = text.substr(0, dot), frac = text.substr(dot + 1);
        if ((whole.empty() && frac.empty()) || (!whole.empty() && !all_digits(whole)) ||
            (!frac.empty() && !all_digits(frac)))
            throw std::invalid_argument("malformed decimal '" + std::string(text) + "'");
        BigInt scale = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
        BigInt num = (whole.empty() ? BigInt(0) : parse_natural(whole)) * scale +
                     (frac.empty() ? BigInt(0) : parse_natural(frac));
        result = Rational(num, scale);
    } else {
        if (!all_digits(text))
            throw std::invalid_argument("malformed number '" + std::string(text) + "'");
        result = Rational(parse_natural(text));
    }
    return negative ? Rational(-result) : result;
}

std::string to_string(const Rational& q) {
    if (denominator(q) == 1) return numerator(q).str();
    return numerator(q).str() + "/" + denominator(q).str();
}

Rational pow(const Rational& base, unsigned exponent) {
    Rational result = 1, b = base;
    while (exponent) {
        if (exponent & 1u) result *= b;
        b *= b;
        exponent >>= 1;
    }
    return result;
}

} // namespace pltl
