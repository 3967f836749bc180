#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "wavecrit/errors.hpp"

namespace wavecrit {

using BigInt = boost::multiprecision::cpp_int;

/// Exact rational number in lowest terms with a positive denominator.
///
/// Backed by arbitrary-precision integers, so exponent formulas in d stay exact
/// for any dimension the claim database is asked about.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}  // NOLINT(google-explicit-constructor)
    Rational(BigInt n, BigInt d) : num_(std::move(n)), den_(std::move(d)) { normalize(); }
    Rational(long long n, long long d) : Rational(BigInt(n), BigInt(d)) {}

    const BigInt& num() const { return num_; }
    const BigInt& den() const { return den_; }

    bool is_zero() const { return num_ == 0; }
    bool is_integer() const { return den_ == 1; }
    int sign() const { return num_ < 0 ? -1 : (num_ > 0 ? 1 : 0); }

    Rational reciprocal() const {
        if (num_ == 0) throw DomainError("reciprocal of zero");
        return Rational(den_, num_);
    }

    double to_double() const {
        return static_cast<double>(boost::multiprecision::cpp_rational(num_, den_));
    }

    std::string str() const {
        if (den_ == 1) return num_.str();
        return num_.str() + "/" + den_.str();
    }

    /// Parses "a", "a/b", or a finite decimal such as "-3.25" (read exactly as -13/4).
    static Rational parse(std::string_view text) {
        auto trim = [](std::string_view s) {
            while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
            while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
            return s;
        };
        text = trim(text);
        if (text.empty()) throw DomainError("empty rational literal");
        auto parse_int = [](std::string_view s) -> BigInt {
            if (s.empty()) throw DomainError("malformed rational literal");
            std::size_t i = (s.front() == '-' || s.front() == '+') ? 1 : 0;
            if (i == s.size()) throw DomainError("malformed rational literal");
            for (std::size_t j = i; j < s.size(); ++j)
                if (s[j] < '0' || s[j] > '9') throw DomainError("malformed rational literal: " + std::string(s));
            BigInt v(std::string(s.substr(i)));
            return s.front() == '-' ? BigInt(-v) : v;
        };
        if (auto slash = text.find('/'); slash != std::string_view::npos) {
            BigInt d = parse_int(trim(text.substr(slash + 1)));
            if (d == 0) throw DomainError("zero denominator in rational literal");
            return Rational(parse_int(trim(text.substr(0, slash))), d);
        }
        if (auto dot = text.find('.'); dot != std::string_view::npos) {
            std::string_view whole = text.substr(0, dot);
            std::string_view frac = text.substr(dot + 1);
            bool negative = !whole.empty() && whole.front() == '-';
            if (!whole.empty() && (whole.front() == '-' || whole.front() == '+')) whole.remove_prefix(1);
            std::string digits = std::string(whole.empty() ? "0" : whole) + std::string(frac);
            BigInt scale = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
            BigInt n = parse_int(digits);
            return Rational(negative ? BigInt(-n) : n, scale);
        }
        return Rational(parse_int(text), BigInt(1));
    }

    Rational operator-() const { return Rational(BigInt(-num_), den_); }

    friend Rational operator+(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        return Rational(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        if (b.num_ == 0) throw DomainError("division by zero");
        return Rational(a.num_ * b.den_, a.den_ * b.num_);
    }
    Rational& operator+=(const Rational& o) { return *this = *this + o; }
    Rational& operator-=(const Rational& o) { return *this = *this - o; }
    Rational& operator*=(const Rational& o) { return *this = *this * o; }
    Rational& operator/=(const Rational& o) { return *this = *this / o; }

    friend bool operator==(const Rational& a, const Rational& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        BigInt lhs = a.num_ * b.den_;
        BigInt rhs = b.num_ * a.den_;
        if (lhs < rhs) return std::strong_ordering::less;
        if (lhs > rhs) return std::strong_ordering::greater;
        return std::strong_ordering::equal;
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

private:
    void normalize() {
        if (den_ == 0) throw DomainError("rational with zero denominator");
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        BigInt g = boost::multiprecision::gcd(num_ < 0 ? BigInt(-num_) : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
    }

    BigInt num_;
    BigInt den_;
};

inline Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

inline Rational min(const Rational& a, const Rational& b) { return b < a ? b : a; }
inline Rational max(const Rational& a, const Rational& b) { return a < b ? b : a; }

/// Lebesgue exponent in [1, infinity]; infinity is explicit so that 1/q = 0 exactly.
class Exponent {
public:
    Exponent(Rational value) : value_(std::move(value)) {}  // NOLINT(google-explicit-constructor)
    Exponent(long long value) : value_(Rational(value)) {}  // NOLINT(google-explicit-constructor)
    static Exponent infinity() { return Exponent(); }

    bool is_infinite() const { return !value_.has_value(); }
    const Rational& value() const {
        if (!value_) throw DomainError("infinite exponent has no finite value");
        return *value_;
    }
    Rational reciprocal() const { return value_ ? value_->reciprocal() : Rational(0); }

    std::string str() const { return value_ ? value_->str() : std::string("inf"); }

    static Exponent parse(std::string_view text) {
        if (text == "inf" || text == "infinity" || text == "oo") return infinity();
        return Exponent(Rational::parse(text));
    }

    friend bool operator==(const Exponent& a, const Exponent& b) { return a.value_ == b.value_; }

private:
    Exponent() = default;
    std::optional<Rational> value_;
};

}  // namespace wavecrit
