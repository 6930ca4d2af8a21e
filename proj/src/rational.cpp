#include "snls/rational.hpp"

#include <limits>
#include <numeric>
#include <stdexcept>

namespace snls {

namespace {

std::int64_t checked(__int128 v, const char* what)
{
    if (v > INT64_MAX || v < INT64_MIN)
        throw std::overflow_error(std::string("rational overflow in ") + what);
    return static_cast<std::int64_t>(v);
}

} // namespace

Rational::Rational(std::int64_t n, std::int64_t d)
{
    if (d == 0)
        throw std::invalid_argument("rational with zero denominator");
    if (d < 0) {
        n = -n;
        d = -d;
    }
    const std::int64_t g = std::gcd(n < 0 ? -n : n, d);
    num = g ? n / g : n;
    den = g ? d / g : d;
}

Rational Rational::infinity()
{
    Rational r;
    r.num = 1;
    r.den = 0;
    return r;
}

double Rational::as_double() const
{
    if (infinite())
        return std::numeric_limits<double>::infinity();
    return static_cast<double>(num) / static_cast<double>(den);
}

Rational Rational::reciprocal() const
{
    if (infinite())
        return Rational(0, 1);
    if (num == 0)
        return infinity();
    return Rational(den, num);
}

Rational Rational::operator+(const Rational& o) const
{
    if (infinite() || o.infinite())
        return infinity();
    const __int128 n = static_cast<__int128>(num) * o.den + static_cast<__int128>(o.num) * den;
    const __int128 d = static_cast<__int128>(den) * o.den;
    return Rational(checked(n, "add"), checked(d, "add"));
}

Rational Rational::operator-(const Rational& o) const
{
    if (o.infinite())
        throw std::invalid_argument("cannot subtract infinity");
    if (infinite())
        return infinity();
    const __int128 n = static_cast<__int128>(num) * o.den - static_cast<__int128>(o.num) * den;
    const __int128 d = static_cast<__int128>(den) * o.den;
    return Rational(checked(n, "subtract"), checked(d, "subtract"));
}

Rational Rational::operator*(const Rational& o) const
{
    if (infinite() || o.infinite()) {
        if (num == 0 || o.num == 0)
            throw std::invalid_argument("cannot multiply zero by infinity");
        return infinity();
    }
    const __int128 n = static_cast<__int128>(num) * o.num;
    const __int128 d = static_cast<__int128>(den) * o.den;
    return Rational(checked(n, "multiply"), checked(d, "multiply"));
}

bool Rational::operator<(const Rational& o) const
{
    if (infinite())
        return false;
    if (o.infinite())
        return true;
    return static_cast<__int128>(num) * o.den < static_cast<__int128>(o.num) * den;
}

std::string Rational::str() const
{
    if (infinite())
        return "inf";
    if (den == 1)
        return std::to_string(num);
    return std::to_string(num) + "/" + std::to_string(den);
}

Rational parse_rational(const std::string& text)
{
    if (text == "inf" || text == "Inf" || text == "INF")
        return Rational::infinity();
    const auto slash = text.find('/');
    try {
        std::size_t used = 0;
        if (slash == std::string::npos) {
            const std::int64_t n = std::stoll(text, &used);
            if (used != text.size())
                throw std::invalid_argument(text);
            return Rational::integer(n);
        }
        const std::int64_t n = std::stoll(text.substr(0, slash), &used);
        if (used != slash)
            throw std::invalid_argument(text);
        const std::string den_text = text.substr(slash + 1);
        const std::int64_t d = std::stoll(den_text, &used);
        if (used != den_text.size())
            throw std::invalid_argument(text);
        return Rational(n, d);
    } catch (const std::overflow_error&) {
        throw;
    } catch (const std::exception&) {
        throw std::invalid_argument("not a rational: '" + text + "'");
    }
}

} // namespace snls
