#pragma once

// Exact rational arithmetic for quantities whose value must be certified
// (gaps, ball radii, perturbation bounds) and exact comparisons of doubles
// against rationals with integer numerator and denominator.

#include <cstdint>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace ulln {

using Exact = boost::multiprecision::cpp_rational;

/// The rational value of a finite double (every finite double is dyadic).
Exact to_exact(double x);

/// sign(x - num/den) in {-1, 0, 1}, exact. Requires den > 0 and finite x.
int compare_ratio(double x, std::uint64_t num, std::uint64_t den);

/// "p/q" (or "p" when q = 1).
std::string to_string(const Exact& q);

}  // namespace ulln
