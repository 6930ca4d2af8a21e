#include "snls/strichartz.hpp"

#include <stdexcept>

namespace snls {

bool is_admissible(const Rational& q, const Rational& p, int d)
{
    if (d < 1 || d > 3)
        throw std::invalid_argument("dimension must be 1, 2, or 3");
    const Rational two = Rational::integer(2);
    if (q < two || p < two)
        return false;
    if (d == 2 && q == two && p.infinite())
        return false;
    const Rational dim = Rational::integer(d);
    const Rational lhs = two * q.reciprocal() + dim * p.reciprocal();
    return lhs == dim * Rational(1, 2);
}

bool is_admissible(const StrichartzPair& pair, int d)
{
    return is_admissible(pair.q, pair.p, d);
}

Rational paired_space_exponent(const Rational& q, int d)
{
    if (d < 1 || d > 3)
        throw std::invalid_argument("dimension must be 1, 2, or 3");
    if (q < Rational::integer(2))
        throw std::invalid_argument("time exponent must be at least 2");
    const Rational dim = Rational::integer(d);
    // d/p = d/2 - 2/q  =>  p = d / (d/2 - 2/q)
    const Rational rhs = dim * Rational(1, 2) - Rational::integer(2) * q.reciprocal();
    if (rhs == Rational(0, 1)) {
        if (d == 2)
            throw std::invalid_argument("the pair (2, inf) is forbidden in dimension 2");
        return Rational::infinity();
    }
    const Rational p = dim * rhs.reciprocal();
    if (!is_admissible(q, p, d))
        throw std::invalid_argument("no admissible space exponent pairs with q = " + q.str());
    return p;
}

StrichartzPair default_pair(int d)
{
    const Rational q(14, 3);
    return StrichartzPair(q, paired_space_exponent(q, d));
}

} // namespace snls
