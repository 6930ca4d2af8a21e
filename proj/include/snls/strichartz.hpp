#pragma once

#include "snls/rational.hpp"

namespace snls {

// Exponent pair (q, p) for space-time norms L_t^q L_x^p.
struct StrichartzPair {
    Rational q;
    Rational p;

    StrichartzPair(Rational time_exp, Rational space_exp) : q(time_exp), p(space_exp) {}
};

// True iff 2/q + d/p = d/2 exactly with q, p >= 2, excluding the forbidden
// endpoint (q, p, d) = (2, inf, 2).
bool is_admissible(const Rational& q, const Rational& p, int d);
bool is_admissible(const StrichartzPair& pair, int d);

// The (q, p) pair the studies default to: (14/3, 14/5) in d = 3 and the
// admissible pairs with the same time exponent in d = 1, 2.
StrichartzPair default_pair(int d);

// The space exponent that pairs with time exponent q in dimension d
// (solves d/p = d/2 - 2/q); throws when no admissible p exists.
Rational paired_space_exponent(const Rational& q, int d);

} // namespace snls
