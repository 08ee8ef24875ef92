#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <string>

#include "forestrips/errors.hpp"

namespace frips {

using Rational = mpq_class;

std::string rational_to_string(const Rational& r);

/// The quadratic field Q(sqrt(d)) all scalars of one computation live in.
/// d = 0 means plain rationals. d must be square-free.
struct FieldContext {
    std::int64_t d = 0;

    FieldContext() = default;
    explicit FieldContext(std::int64_t d_);

    bool operator==(const FieldContext&) const = default;
};

/// Exact element p + q*sqrt(d) of a real quadratic field.
///
/// Canonical form: p and q fully reduced rationals; q == 0 whenever d is 0 or 1
/// (sqrt(0) = 0 and sqrt(1) = 1 fold into the rational part). Comparisons agree
/// with the real embedding that takes sqrt(d) > 0 and never touch floating point.
class Scalar {
public:
    Scalar() : d_(0) {}
    Scalar(const Rational& p, const Rational& q, FieldContext ctx);

    static Scalar integer(long n, FieldContext ctx) { return Scalar(Rational(n), 0, ctx); }
    static Scalar ratio(long num, long den, FieldContext ctx);
    static Scalar rational(const Rational& r, FieldContext ctx) { return Scalar(r, 0, ctx); }
    /// q * sqrt(d) in the given field.
    static Scalar root_multiple(const Rational& q, FieldContext ctx);
    static Scalar zero(FieldContext ctx) { return Scalar(0, 0, ctx); }
    static Scalar one(FieldContext ctx) { return Scalar(1, 0, ctx); }

    const Rational& rational_part() const { return p_; }
    const Rational& root_part() const { return q_; }
    FieldContext field() const { return FieldContext(d_); }
    bool is_rational() const { return q_ == 0; }

    /// Sign of the real value: -1, 0, +1. Exact case analysis on p, q and p^2 - q^2 d.
    int sign() const;
    bool is_zero() const { return p_ == 0 && q_ == 0; }

    Scalar operator-() const;
    Scalar operator+(const Scalar& o) const;
    Scalar operator-(const Scalar& o) const;
    Scalar operator*(const Scalar& o) const;
    Scalar operator/(const Scalar& o) const;
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }
    Scalar& operator-=(const Scalar& o) { return *this = *this - o; }
    Scalar& operator*=(const Scalar& o) { return *this = *this * o; }
    Scalar& operator/=(const Scalar& o) { return *this = *this / o; }

    bool operator==(const Scalar& o) const;
    bool operator!=(const Scalar& o) const { return !(*this == o); }
    bool operator<(const Scalar& o) const { return compare(*this, o) < 0; }
    bool operator<=(const Scalar& o) const { return compare(*this, o) <= 0; }
    bool operator>(const Scalar& o) const { return compare(*this, o) > 0; }
    bool operator>=(const Scalar& o) const { return compare(*this, o) >= 0; }

    /// Sign of a - b under the real embedding.
    static int compare(const Scalar& a, const Scalar& b);

    Scalar abs() const { return sign() < 0 ? -*this : *this; }
    Scalar half() const;

    /// Canonical text form, e.g. "5/6", "1/2+1/3*sqrt(5)", "-sqrt(2)".
    std::string str() const;

private:
    void canonicalize();
    void check_same_field(const Scalar& o) const;

    Rational p_, q_;
    std::int64_t d_;
};

Scalar min(const Scalar& a, const Scalar& b);
Scalar max(const Scalar& a, const Scalar& b);

/// Parses an exact scalar expression: integers, + - * /, parentheses and
/// sqrt(d) where d is the context's field parameter. Accepts the canonical
/// rendering of Scalar::str() as well as forms like "(-1+sqrt(5))/2".
/// The Unicode minus sign is treated as '-'.
Scalar parse_scalar(const std::string& text, FieldContext ctx);

} // namespace frips
