#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "forestrips/scalar.hpp"

using namespace frips;

namespace {

Scalar random_scalar(std::mt19937_64& rng, FieldContext ctx) {
    std::uniform_int_distribution<long> num(-6, 6), den(1, 5), coin(0, 1);
    Rational p(num(rng), den(rng));
    Rational q = coin(rng) ? Rational(num(rng), den(rng)) : Rational(0);
    return Scalar(p, q, ctx);
}

} // namespace

TEST_CASE("rational arithmetic") {
    FieldContext q0(0);
    CHECK(Scalar::ratio(1, 2, q0) + Scalar::ratio(1, 3, q0) == Scalar::ratio(5, 6, q0));
    CHECK((Scalar::ratio(1, 2, q0) * Scalar::integer(4, q0)).str() == "2");
    CHECK_THROWS_AS(Scalar::one(q0) / Scalar::zero(q0), ArithmeticError);
}

TEST_CASE("golden ratio multiplication in Q(sqrt 5)") {
    FieldContext f(5);
    // (1+sqrt5)/2 * (-1+sqrt5)/2 = 1
    Scalar phi(Rational(1, 2), Rational(1, 2), f);
    Scalar inv(Rational(-1, 2), Rational(1, 2), f);
    CHECK(phi * inv == Scalar::one(f));
    CHECK((phi / phi) == Scalar::one(f));
    CHECK((Scalar::one(f) / phi) == inv);
}

TEST_CASE("exact comparison against rationals") {
    FieldContext f(2);
    Scalar root2 = Scalar::root_multiple(1, f);
    CHECK(Scalar::compare(root2, Scalar::ratio(3, 2, f)) < 0);
    CHECK(Scalar::compare(root2, Scalar::ratio(7, 5, f)) > 0);
    CHECK(root2.sign() == 1);
    CHECK((-root2).sign() == -1);
    CHECK((root2 - root2).sign() == 0);
    // 3 - 2*sqrt(2) > 0, 2*sqrt(2) - 3 < 0
    CHECK(Scalar(3, -2, f).sign() == 1);
    CHECK(Scalar(-3, 2, f).sign() == -1);
}

TEST_CASE("field context rules") {
    CHECK_THROWS_AS(FieldContext(12), ValidationError);
    CHECK_THROWS_AS(FieldContext(-1), ValidationError);
    FieldContext f2(2), f3(3);
    CHECK_THROWS_AS(Scalar::one(f2) + Scalar::one(f3), FieldMismatchError);
    // d in {0,1} folds the root part away
    CHECK(Scalar(Rational(1), Rational(5), FieldContext(1)) == Scalar::integer(6, FieldContext(1)));
    CHECK(Scalar(Rational(1), Rational(5), FieldContext(0)) == Scalar::one(FieldContext(0)));
}

TEST_CASE("field axioms on random triples") {
    FieldContext f(3);
    std::mt19937_64 rng(7);
    for (int i = 0; i < 300; ++i) {
        Scalar a = random_scalar(rng, f), b = random_scalar(rng, f), c = random_scalar(rng, f);
        CHECK((a + b) + c == a + (b + c));
        CHECK((a * b) * c == a * (b * c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK(a + (-a) == Scalar::zero(f));
        if (!a.is_zero()) CHECK(a / a == Scalar::one(f));
    }
}

TEST_CASE("total order compatible with field structure") {
    FieldContext f(5);
    std::mt19937_64 rng(11);
    for (int i = 0; i < 300; ++i) {
        Scalar a = random_scalar(rng, f), b = random_scalar(rng, f), c = random_scalar(rng, f);
        int ab = Scalar::compare(a, b);
        CHECK(Scalar::compare(b, a) == -ab);
        CHECK(Scalar::compare(a + c, b + c) == ab);
        if (c.sign() > 0) CHECK(Scalar::compare(a * c, b * c) == ab);
        // transitivity spot check
        if (ab <= 0 && Scalar::compare(b, c) <= 0) CHECK(Scalar::compare(a, c) <= 0);
    }
}

TEST_CASE("render/parse round trip") {
    FieldContext f(5);
    std::mt19937_64 rng(13);
    for (int i = 0; i < 200; ++i) {
        Scalar x = random_scalar(rng, f);
        CHECK(parse_scalar(x.str(), f) == x);
    }
    CHECK(parse_scalar("(-1+sqrt(5))/2", f) == Scalar(Rational(-1, 2), Rational(1, 2), f));
    // Unicode minus as produced by typesetting tools
    CHECK(parse_scalar("(\xE2\x88\x92"
                       "1+sqrt(5))/2",
                       f) == Scalar(Rational(-1, 2), Rational(1, 2), f));
    CHECK(parse_scalar(" 3 - 2*sqrt(5) ", f) == Scalar(3, -2, f));
    CHECK(parse_scalar("sqrt(5)/2", f) == Scalar(0, Rational(1, 2), f));
    CHECK_THROWS_AS(parse_scalar("sqrt(3)", f), ParseError);
    CHECK_THROWS_AS(parse_scalar("1+", f), ParseError);
    CHECK_THROWS_AS(parse_scalar("1/0", f), ArithmeticError);
}
