#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <map>
#include <string>

namespace oriflag {

using Rational = boost::multiprecision::cpp_rational;

/// A finite sum  sum_s c_s * pi^s  with rational coefficients and integer powers.
///
/// Every volume and closed-form expectation handled by the library has this shape,
/// so equality between two PiExpr values is exact (no floating tolerance).
class PiExpr {
public:
    PiExpr() = default;
    PiExpr(Rational coefficient, int pi_power = 0);  // NOLINT(google-explicit-constructor)

    static PiExpr pi_power(int power) { return PiExpr(Rational(1), power); }

    PiExpr& operator+=(const PiExpr& other);
    PiExpr& operator*=(const PiExpr& other);
    friend PiExpr operator+(PiExpr a, const PiExpr& b) { return a += b; }
    friend PiExpr operator*(PiExpr a, const PiExpr& b) { return a *= b; }

    // Integer power of a single monomial; throws std::domain_error for sums.
    PiExpr pow(int exponent) const;

    bool is_zero() const { return terms_.empty(); }
    bool is_monomial() const { return terms_.size() == 1; }
    double value() const;

    // ASCII rendering, e.g. "8*pi^2", "2/pi + pi/2", "1 + pi/4", "64/945*pi^5".
    std::string to_string() const;

    // Power of pi -> nonzero coefficient, ascending by power.
    const std::map<int, Rational>& terms() const { return terms_; }

    friend bool operator==(const PiExpr& a, const PiExpr& b) { return a.terms_ == b.terms_; }

private:
    std::map<int, Rational> terms_;
};

}  // namespace oriflag
