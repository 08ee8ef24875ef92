#include "forestrips/scalar.hpp"

#include <cctype>
#include <utility>

namespace frips {

std::string rational_to_string(const Rational& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

namespace {

bool is_square_free(std::int64_t d) {
    for (std::int64_t p = 2; p * p <= d; ++p) {
        if (d % (p * p) == 0) return false;
    }
    return true;
}

} // namespace

FieldContext::FieldContext(std::int64_t d_) : d(d_) {
    if (d < 0) throw ValidationError("field parameter d must be non-negative");
    if (d > (std::int64_t(1) << 31))
        throw ValidationError("field parameter d too large");
    if (d > 1 && !is_square_free(d))
        throw ValidationError("field parameter d must be square-free, got " + std::to_string(d));
}

Scalar::Scalar(const Rational& p, const Rational& q, FieldContext ctx) : p_(p), q_(q), d_(ctx.d) {
    p_.canonicalize();
    q_.canonicalize();
    canonicalize();
}

Scalar Scalar::ratio(long num, long den, FieldContext ctx) {
    if (den == 0) throw ArithmeticError("zero denominator");
    return Scalar(Rational(num, den), 0, ctx);
}

Scalar Scalar::root_multiple(const Rational& q, FieldContext ctx) {
    return Scalar(0, q, ctx);
}

void Scalar::canonicalize() {
    if (d_ == 0) {
        q_ = 0;
    } else if (d_ == 1) {
        p_ += q_;
        q_ = 0;
    }
}

void Scalar::check_same_field(const Scalar& o) const {
    if (d_ != o.d_)
        throw FieldMismatchError("mixed field contexts: sqrt(" + std::to_string(d_) +
                                 ") vs sqrt(" + std::to_string(o.d_) + ")");
}

int Scalar::sign() const {
    int sp = sgn(p_);
    int sq = sgn(q_);
    if (sq == 0) return sp;
    if (sp == 0) return sq;
    if (sp == sq) return sp;
    // Opposite signs: decide |p| vs |q|*sqrt(d) by squaring.
    Rational lhs = p_ * p_;
    Rational rhs = q_ * q_ * Rational(static_cast<long>(d_));
    int c = cmp(lhs, rhs);
    if (c == 0) return 0; // impossible for square-free d > 1, but harmless
    return c > 0 ? sp : sq;
}

Scalar Scalar::operator-() const {
    Scalar r(*this);
    r.p_ = -r.p_;
    r.q_ = -r.q_;
    return r;
}

Scalar Scalar::operator+(const Scalar& o) const {
    check_same_field(o);
    Scalar r(*this);
    r.p_ += o.p_;
    r.q_ += o.q_;
    return r;
}

Scalar Scalar::operator-(const Scalar& o) const {
    check_same_field(o);
    Scalar r(*this);
    r.p_ -= o.p_;
    r.q_ -= o.q_;
    return r;
}

Scalar Scalar::operator*(const Scalar& o) const {
    check_same_field(o);
    Scalar r(*this);
    Rational p = p_ * o.p_ + q_ * o.q_ * Rational(static_cast<long>(d_));
    Rational q = p_ * o.q_ + q_ * o.p_;
    r.p_ = p;
    r.q_ = q;
    return r;
}

Scalar Scalar::operator/(const Scalar& o) const {
    check_same_field(o);
    if (o.is_zero()) throw ArithmeticError("division by zero");
    // 1/(p+q*sqrt(d)) = (p-q*sqrt(d)) / (p^2 - q^2 d)
    Rational norm = o.p_ * o.p_ - o.q_ * o.q_ * Rational(static_cast<long>(d_));
    if (norm == 0) throw ArithmeticError("division by zero"); // only reachable if d not square-free
    Scalar conj(*this);
    conj.p_ = o.p_ / norm;
    conj.q_ = -o.q_ / norm;
    return *this * conj;
}

bool Scalar::operator==(const Scalar& o) const {
    check_same_field(o);
    return p_ == o.p_ && q_ == o.q_;
}

int Scalar::compare(const Scalar& a, const Scalar& b) {
    return (a - b).sign();
}

Scalar Scalar::half() const {
    Scalar r(*this);
    r.p_ /= 2;
    r.q_ /= 2;
    return r;
}

std::string Scalar::str() const {
    if (q_ == 0) return rational_to_string(p_);
    std::string out;
    bool have_p = (p_ != 0);
    if (have_p) out += rational_to_string(p_);
    Rational aq = ::abs(q_);
    if (sgn(q_) < 0)
        out += "-";
    else if (have_p)
        out += "+";
    if (aq != 1) out += rational_to_string(aq) + "*";
    out += "sqrt(" + std::to_string(d_) + ")";
    return out;
}

Scalar min(const Scalar& a, const Scalar& b) { return a <= b ? a : b; }
Scalar max(const Scalar& a, const Scalar& b) { return a >= b ? a : b; }

namespace {

// Recursive-descent parser over +, -, *, /, integers, sqrt(k), parentheses.
class ScalarParser {
public:
    ScalarParser(const std::string& text, FieldContext ctx) : ctx_(ctx) {
        // Normalize the Unicode minus sign (U+2212) to '-'.
        for (std::size_t i = 0; i < text.size();) {
            if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
                static_cast<unsigned char>(text[i + 1]) == 0x88 &&
                static_cast<unsigned char>(text[i + 2]) == 0x92) {
                s_ += '-';
                i += 3;
            } else {
                s_ += text[i];
                ++i;
            }
        }
    }

    Scalar parse() {
        Scalar v = expr();
        skip_ws();
        if (pos_ != s_.size()) throw ParseError("unexpected trailing input", rest());
        return v;
    }

private:
    Scalar expr() {
        Scalar v = term();
        for (;;) {
            skip_ws();
            if (peek() == '+') {
                ++pos_;
                v += term();
            } else if (peek() == '-') {
                ++pos_;
                v -= term();
            } else {
                return v;
            }
        }
    }

    Scalar term() {
        Scalar v = factor();
        for (;;) {
            skip_ws();
            if (peek() == '*') {
                ++pos_;
                v *= factor();
            } else if (peek() == '/') {
                ++pos_;
                v /= factor();
            } else {
                return v;
            }
        }
    }

    Scalar factor() {
        skip_ws();
        if (peek() == '-') {
            ++pos_;
            return -factor();
        }
        if (peek() == '+') {
            ++pos_;
            return factor();
        }
        return primary();
    }

    Scalar primary() {
        skip_ws();
        char c = peek();
        if (c == '(') {
            ++pos_;
            Scalar v = expr();
            expect(')');
            return v;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) return Scalar::rational(integer(), ctx_);
        if (s_.compare(pos_, 4, "sqrt") == 0) {
            pos_ += 4;
            skip_ws();
            expect('(');
            Rational k = integer();
            expect(')');
            if (k != Rational(static_cast<long>(ctx_.d)))
                throw ParseError("sqrt(" + rational_to_string(k) + ") is not an element of Q(sqrt(" +
                                 std::to_string(ctx_.d) + "))");
            return Scalar::root_multiple(1, ctx_);
        }
        throw ParseError("expected number, sqrt(...) or parenthesis", rest());
    }

    Rational integer() {
        skip_ws();
        std::size_t start = pos_;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
        if (start == pos_) throw ParseError("expected integer", rest());
        return Rational(mpz_class(s_.substr(start, pos_ - start)));
    }

    void expect(char c) {
        skip_ws();
        if (peek() != c) throw ParseError(std::string("expected '") + c + "'", rest());
        ++pos_;
    }

    char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
    void skip_ws() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    }
    std::string rest() const { return "\"" + s_.substr(pos_) + "\""; }

    std::string s_;
    std::size_t pos_ = 0;
    FieldContext ctx_;
};

} // namespace

Scalar parse_scalar(const std::string& text, FieldContext ctx) {
    return ScalarParser(text, ctx).parse();
}

} // namespace frips
