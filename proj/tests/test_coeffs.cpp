#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "ptau/config.hpp"
#include "ptau/ring.hpp"

using namespace ptau;

TEST_CASE("mod p^r basics") {
    Ring R(3, 4, 1);
    CHECK(R.pr == 81);
    Zq a(R, 5), b(R, -7);
    CHECK((a + b).c[0] == R.norm(-2));
    CHECK((a * b).c[0] == R.norm(-35));
    CHECK((a.inv() * a).c[0] == 1);
    CHECK_THROWS_AS(Zq(R, 3).inv(), domain_error);
}

TEST_CASE("padic_binomial exact values") {
    Ring R(3, 4, 1);
    CHECK(padic_binomial(5, 2, R).c[0] == 10);
    CHECK(padic_binomial(2, 3, R).is_zero());
    // binom(9,3) = 84 = 3 mod 81
    CHECK(padic_binomial(9, 3, R).c[0] == 3);
    // negative upper index: binom(-1,n) = (-1)^n
    CHECK(padic_binomial(-1, 3, R).c[0] == R.norm(-1));
}

TEST_CASE("Vandermonde identity mod p^r") {
    Ring R(3, 4, 1);
    std::int64_t cases[][3] = {{5, 7, 4}, {-3, 9, 5}, {12, -2, 6}};
    for (auto& cs : cases) {
        std::int64_t z1 = cs[0], z2 = cs[1], n = cs[2];
        Zq lhs = padic_binomial(z1 + z2, n, R);
        Zq rhs(R, 0);
        for (std::int64_t k = 0; k <= n; ++k)
            rhs = rhs + padic_binomial(z1, k, R) * padic_binomial(z2, n - k, R);
        CHECK(lhs == rhs);
    }
}

TEST_CASE("Galois ring GR(p^r, 2): Frobenius and trace") {
    Ring R(3, 4, 2);
    Zq x(R);
    x.c = {0, 1};  // the generator
    Zq fx = x.frob();
    // Frobenius is an automorphism of order f fixing the prime subring
    CHECK(fx.frob() == x);
    Zq seven(R, 7);
    CHECK(seven.frob() == seven);
    CHECK(trace_to_base(seven) == seven + seven);
    // trace is Frobenius-invariant and lands in the prime subring
    Zq t = trace_to_base(x);
    CHECK(t == trace_to_base(fx));
    CHECK(t.c[1] == 0);
    // conjugate-enumeration oracle
    CHECK(t == x + fx);
    // multiplicativity of Frobenius
    Zq y(R);
    y.c = {2, 5};
    CHECK((x * y).frob() == fx * y.frob());
}

TEST_CASE("PFloat arithmetic") {
    Ring R(3, 4, 1);
    PFloat a = PFloat::from_int(R, 9);   // 3^2
    PFloat b = PFloat::from_int(R, 2);
    SUBCASE("mul adds valuations") {
        PFloat c = a * b;
        CHECK(c.val() == 2);
        CHECK(c.mant_.c[0] == 2);
    }
    SUBCASE("total cancellation leaves a precision zero") {
        PFloat one = PFloat::from_int(R, 1);
        PFloat z = one + (-one);
        CHECK(z.is_zero());
        CHECK(z.val() == 4);  // known to O(p^r)
    }
    SUBCASE("inverse: extended-Euclid oracle") {
        // (p^2 * 2)^{-1} = p^{-2} * 2^{-1}, 2^{-1} = 41 mod 81
        PFloat c = (a * b).inv();
        CHECK(c.val() == -2);
        CHECK(c.mant_.c[0] == 41);
    }
    SUBCASE("precision loss on partial cancellation") {
        // 1 + (3 - 1) keeps only digits above the cancellation
        PFloat x = PFloat::from_int(R, 1) + PFloat::from_int(R, 2);  // = 3: val 1
        CHECK(x.val() == 1);
        CHECK(x.prec() == 3);  // one digit absorbed
    }
    SUBCASE("division by precision zero raises") {
        PFloat z = PFloat::zero(R, 5);
        CHECK_THROWS_AS(z.inv(), precision_error);
    }
}

TEST_CASE("PFloat add associativity at tracked precision") {
    Ring R(3, 5, 1);
    PFloat xs[3] = {PFloat::from_int(R, 7), PFloat::from_int(R, -12), PFloat::from_int(R, 45)};
    PFloat l = (xs[0] + xs[1]) + xs[2];
    PFloat r = xs[0] + (xs[1] + xs[2]);
    PFloat d = l - r;
    CHECK(d.is_zero());
}

TEST_CASE("PrimeConfig validation") {
    CHECK_NOTHROW(PrimeConfig(3, 4, 1, 1, {-3, 1}, 2));
    // chi = 1 mod p rejected
    CHECK_THROWS_AS(PrimeConfig(3, 4, 1, 1, {-3, 1}, 4), domain_error);
    // non-Eisenstein rejected
    CHECK_THROWS_AS(PrimeConfig(3, 4, 1, 1, {-9, 1}, 2), domain_error);
    CHECK_THROWS_AS(PrimeConfig(3, 4, 1, 2, {-3, 1, 1}, 2), domain_error);
    // e = 2 Eisenstein accepted
    CHECK_NOTHROW(PrimeConfig(3, 4, 1, 2, {-3, -3, 1}, 2));
    // p = 5: chi must generate (Z/25)^*; 2 works (order 20)
    CHECK_NOTHROW(PrimeConfig(5, 3, 1, 1, {-5, 1}, 2));
    CHECK_THROWS_AS(PrimeConfig(5, 3, 1, 1, {-5, 1}, 7), domain_error);  // 7^4=2401=1 mod 25
}

TEST_CASE("trace is the identity for f = 1 and linear over the prime ring") {
    Ring R1(3, 4, 1);
    Zq seven(R1, 7);
    CHECK(trace_to_base(seven) == seven);
    Ring R(3, 4, 2);
    Zq x(R);
    x.c = {1, 2};
    Zq y(R);
    y.c = {5, 3};
    Zq a(R, 4);
    CHECK(trace_to_base(a * x + y) == a * trace_to_base(x) + trace_to_base(y));
}

TEST_CASE("pfloat product across valuations (p = 5)") {
    Ring R(5, 3, 1);
    // (p * 3) * (p^{-1} * 2) = 6 with valuation 0
    PFloat a = PFloat::make(R, 1, Zq(R, 3), R.r);
    PFloat b = PFloat::make(R, -1, Zq(R, 2), R.r);
    PFloat c = a * b;
    CHECK(c.val() == 0);
    CHECK(c.mant_.c[0] == 6);
}

TEST_CASE("residue degree 3: Frobenius has order f") {
    Ring R(3, 2, 3);
    Zq x(R);
    x.c = {0, 1, 0};
    Zq fx = x.frob();
    CHECK_FALSE(fx == x);
    CHECK_FALSE(fx.frob() == x);
    CHECK(fx.frob().frob() == x);
    Zq t = trace_to_base(x);
    CHECK(t.c[1] == 0);
    CHECK(t.c[2] == 0);
}
