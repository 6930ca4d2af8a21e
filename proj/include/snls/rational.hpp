#pragma once

#include <cstdint>
#include <string>

namespace snls {

// Exact rational arithmetic for exponent bookkeeping. Values are kept
// normalized (positive denominator, reduced by gcd); denominator 0 with
// numerator 1 encodes +infinity. Overflow throws rather than wrapping.
struct Rational {
    std::int64_t num = 0;
    std::int64_t den = 1;

    Rational() = default;
    Rational(std::int64_t n, std::int64_t d);

    static Rational infinity();
    static Rational integer(std::int64_t n) { return Rational(n, 1); }

    bool infinite() const { return den == 0; }
    double as_double() const;

    // 1/x; the reciprocal of infinity is 0.
    Rational reciprocal() const;

    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    bool operator==(const Rational& o) const { return num == o.num && den == o.den; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const;
    bool operator<=(const Rational& o) const { return *this < o || *this == o; }
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator>=(const Rational& o) const { return o <= *this; }

    std::string str() const; // "14/3", "5", or "inf"
};

// Accepts "14/3", "-2", "inf" (and "Inf"/"INF"); rejects everything else.
Rational parse_rational(const std::string& text);

} // namespace snls
