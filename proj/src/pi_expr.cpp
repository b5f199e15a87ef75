#include "oriflag/pi_expr.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace oriflag {

PiExpr::PiExpr(Rational coefficient, int pi_power) {
    if (coefficient != 0) terms_.emplace(pi_power, std::move(coefficient));
}

PiExpr& PiExpr::operator+=(const PiExpr& other) {
    for (const auto& [power, c] : other.terms_) {
        auto& slot = terms_[power];
        slot += c;
        if (slot == 0) terms_.erase(power);
    }
    return *this;
}

PiExpr& PiExpr::operator*=(const PiExpr& other) {
    std::map<int, Rational> product;
    for (const auto& [pa, ca] : terms_) {
        for (const auto& [pb, cb] : other.terms_) {
            auto& slot = product[pa + pb];
            slot += ca * cb;
        }
    }
    std::erase_if(product, [](const auto& kv) { return kv.second == 0; });
    terms_ = std::move(product);
    return *this;
}

PiExpr PiExpr::pow(int exponent) const {
    if (terms_.size() != 1) {
        if (terms_.empty() && exponent > 0) return {};
        throw std::domain_error("PiExpr::pow: only monomials can be raised to a power");
    }
    const auto& [power, c] = *terms_.begin();
    Rational base = exponent >= 0 ? c : Rational(1) / c;
    Rational out(1);
    for (int i = 0; i < std::abs(exponent); ++i) out *= base;
    return PiExpr(out, power * exponent);
}

double PiExpr::value() const {
    long double sum = 0.0L;
    for (const auto& [power, c] : terms_) {
        sum += c.convert_to<long double>() * std::pow(std::numbers::pi_v<long double>, power);
    }
    return static_cast<double>(sum);
}

namespace {

std::string pi_factor(int power) {
    const int a = std::abs(power);
    return a == 1 ? "pi" : "pi^" + std::to_string(a);
}

// Renders |c| * pi^power; the sign is handled by the caller.
std::string render_monomial(const Rational& magnitude, int power) {
    const auto num = boost::multiprecision::numerator(magnitude);
    const auto den = boost::multiprecision::denominator(magnitude);
    std::ostringstream os;
    if (power == 0) {
        os << num;
        if (den != 1) os << '/' << den;
    } else if (power > 0) {
        if (num != 1) os << num << '*';
        os << pi_factor(power);
        if (den != 1) os << '/' << den;
    } else {
        os << num << '/';
        if (den != 1)
            os << '(' << den << '*' << pi_factor(power) << ')';
        else
            os << pi_factor(power);
    }
    return os.str();
}

}  // namespace

std::string PiExpr::to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& [power, c] : terms_) {
        const bool negative = c < 0;
        if (first) {
            if (negative) out += "-";
        } else {
            out += negative ? " - " : " + ";
        }
        out += render_monomial(negative ? Rational(-c) : c, power);
        first = false;
    }
    return out;
}

}  // namespace oriflag
