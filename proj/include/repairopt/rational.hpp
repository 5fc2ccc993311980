#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "repairopt/error.hpp"

namespace repairopt {

using Integer = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

/// A link cost; std::nullopt means "no direct link" (infinite cost).
using LinkCost = std::optional<Rational>;

inline Integer numerator_of(const Rational& r) { return boost::multiprecision::numerator(r); }
inline Integer denominator_of(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integral(const Rational& r) { return denominator_of(r) == 1; }

inline Integer gcd_of(Integer a, Integer b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        Integer t = a % b;
        a = b;
        b = t;
    }
    return a;
}

inline Integer lcm_of(const Integer& a, const Integer& b) {
    if (a == 0 || b == 0) return 0;
    return (a / gcd_of(a, b)) * b;
}

/// Exact "p/q" or "p" rendering, the canonical string form used in every report.
inline std::string to_string(const Rational& r) {
    if (is_integral(r)) return numerator_of(r).str();
    return numerator_of(r).str() + "/" + denominator_of(r).str();
}

inline std::string to_string(const LinkCost& c) { return c ? to_string(*c) : std::string("inf"); }

namespace detail {
inline Integer parse_integer(std::string_view s, std::string_view whole) {
    std::size_t i = 0;
    bool negative = false;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) {
        negative = s[i] == '-';
        ++i;
    }
    if (i == s.size()) throw ParseError("malformed rational '" + std::string(whole) + "'");
    Integer v = 0;
    for (; i < s.size(); ++i) {
        if (s[i] < '0' || s[i] > '9') throw ParseError("malformed rational '" + std::string(whole) + "'");
        v = v * 10 + (s[i] - '0');
    }
    return negative ? Integer(-v) : v;
}
}  // namespace detail

/// Parses "p/q", "p", or a finite decimal such as "2.5".
inline Rational parse_rational(std::string_view text) {
    std::string_view s = text;
    while (!s.empty() && s.front() == ' ') s.remove_prefix(1);
    while (!s.empty() && s.back() == ' ') s.remove_suffix(1);
    if (s.empty()) throw ParseError("empty rational");
    if (auto slash = s.find('/'); slash != std::string_view::npos) {
        Integer num = detail::parse_integer(s.substr(0, slash), text);
        Integer den = detail::parse_integer(s.substr(slash + 1), text);
        if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
        return Rational(num, den);
    }
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        std::string digits(s.substr(0, dot));
        std::string_view frac = s.substr(dot + 1);
        digits += frac;
        Integer den = 1;
        for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
        return Rational(detail::parse_integer(digits, text), den);
    }
    return Rational(detail::parse_integer(s, text));
}

/// Parses a link cost; "inf" (any case) maps to no link.
inline LinkCost parse_link_cost(std::string_view text) {
    std::string lowered;
    for (char ch : text) {
        if (ch != ' ') lowered.push_back(static_cast<char>(ch >= 'A' && ch <= 'Z' ? ch - 'A' + 'a' : ch));
    }
    if (lowered == "inf" || lowered == "infinity" || lowered == "+inf") return std::nullopt;
    return parse_rational(text);
}

inline Rational sum_of(const std::vector<Rational>& values) {
    Rational s = 0;
    for (const auto& v : values) s += v;
    return s;
}

}  // namespace repairopt
