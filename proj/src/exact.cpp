#include "ulln/exact.hpp"

#include <cmath>
#include <sstream>

#include "ulln/errors.hpp"

namespace ulln {

namespace {

using boost::multiprecision::cpp_int;

// x = mantissa * 2^exponent with an integer mantissa.
void decompose(double x, cpp_int& mantissa, int& exponent) {
    int e = 0;
    const double f = std::frexp(x, &e);
    mantissa = cpp_int(static_cast<std::int64_t>(std::ldexp(f, 53)));
    exponent = e - 53;
}

}  // namespace

Exact to_exact(double x) {
    if (!std::isfinite(x)) {
        throw DomainError("to_exact: non-finite value");
    }
    if (x == 0.0) {
        return Exact(0);
    }
    cpp_int m;
    int e = 0;
    decompose(x, m, e);
    if (e >= 0) {
        return Exact(m << e);
    }
    return Exact(m, cpp_int(1) << -e);
}

int compare_ratio(double x, std::uint64_t num, std::uint64_t den) {
    if (!std::isfinite(x) || den == 0) {
        throw DomainError("compare_ratio: requires finite x and den > 0");
    }
    const double r = static_cast<double>(num) / static_cast<double>(den);
    const double diff = x - r;
    // Each operation above is off by at most one rounding; a margin of a few
    // ulps of the operands makes the sign of `diff` trustworthy.
    if (std::abs(diff) > 1e-13 * (std::abs(x) + std::abs(r))) {
        return diff > 0 ? 1 : -1;
    }
    if (x == 0.0) {
        return num == 0 ? 0 : -1;
    }
    cpp_int m;
    int e = 0;
    decompose(x, m, e);
    cpp_int lhs = m * den;
    cpp_int rhs = num;
    if (e >= 0) {
        lhs <<= e;
    } else {
        rhs <<= -e;
    }
    return lhs < rhs ? -1 : (lhs > rhs ? 1 : 0);
}

std::string to_string(const Exact& q) {
    std::ostringstream os;
    os << numerator(q);
    if (denominator(q) != 1) {
        os << '/' << denominator(q);
    }
    return os.str();
}

}  // namespace ulln
