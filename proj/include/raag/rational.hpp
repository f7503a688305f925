#pragma once

#include <boost/multiprecision/gmp.hpp>

namespace raag {

// Exact arbitrary-precision arithmetic; mpq keeps fractions reduced with a
// positive denominator, which is exactly the invariant the verdict path needs.
using Rational = boost::multiprecision::mpq_rational;
using Integer = boost::multiprecision::mpz_int;

}  // namespace raag
