#include "doctest.h"
#include "oracles.hpp"

#include "stirval/digits.hpp"
#include "stirval/errors.hpp"
#include "stirval/modring.hpp"
#include "stirval/valuation.hpp"

using namespace stirval;

TEST_CASE("to_digits is big-endian")
{
    auto seven = to_digits(7, 2);
    CHECK(seven.digits() == std::vector<std::uint32_t>{1, 1, 1});
    CHECK(seven.digit_sum() == 3);
    CHECK(digit_sum(7, 2) == 3);
    CHECK(to_digits(4, 3).digits() == std::vector<std::uint32_t>{1, 1});
    CHECK(from_digits(DigitString(3, {1, 2, 0})) == 15);
    CHECK(DigitString(3, {1, 2, 0}).to_string() == "<1,2,0>_3");
    CHECK(DigitString(59, {1, 58}).compact() == "1.58");
}

TEST_CASE("digit strings reject malformed input")
{
    CHECK_THROWS_AS(to_digits(0, 2), DomainError);
    CHECK_THROWS_AS(to_digits(5, 1), DomainError);
    CHECK_THROWS_AS(DigitString(3, {0, 1}), DomainError);
    CHECK_THROWS_AS(DigitString(3, {1, 3}), DomainError);
    CHECK_THROWS_AS(DigitString(3, {}), DomainError);
    std::vector<std::uint32_t> long_string(70, 1);
    CHECK_THROWS_AS(DigitString(2, long_string).value(), SizeError);
}

TEST_CASE("digit round trip")
{
    for (std::uint64_t p : {2, 3, 5, 7, 59})
        for (std::uint64_t n = 1; n <= 100000; ++n) {
            auto d = to_digits(n, p);
            REQUIRE(from_digits(d) == n);
            REQUIRE(d[0] != 0);
        }
}

TEST_CASE("prefix operations")
{
    DigitString d(3, {1, 2, 0, 2});
    CHECK(d.prefix(2) == DigitString(3, {1, 2}));
    CHECK(d.starts_with(DigitString(3, {1, 2})));
    CHECK_FALSE(d.starts_with(DigitString(3, {1, 1})));
    CHECK_FALSE(d.starts_with(DigitString(5, {1, 2})));
    CHECK(d.prefix(2).extended(0) == d.prefix(3));
    CHECK(prefix_value(d, 0) == 0);
    CHECK(prefix_value(d, 3) == 15);
}

TEST_CASE("valuations")
{
    CHECK(vp(25, 12, 5) == Valuation::finite(2));
    CHECK(vp(11, 6, 2) == Valuation::finite(-1));
    CHECK(vp(0, 7, 3) == Valuation::infinite());
    CHECK_FALSE(vp(mpq_class(0), 3).is_finite());
    CHECK_THROWS_AS(vp(1, 0, 3), DomainError);
    CHECK(vp(mpz_class(96), 2).value() == 5);
    CHECK(vp(std::uint64_t{96}, 3) == 1);
    CHECK(free_part(24, 2) == 3);
    CHECK(Valuation::infinite().to_string() == "inf");
    CHECK_THROWS(Valuation::infinite().value());
}

TEST_CASE("free part decomposition")
{
    for (std::uint64_t p : {2, 3, 5})
        for (std::uint64_t m = 1; m <= 5000; ++m) {
            auto f = free_part(m, p);
            REQUIRE(f % p != 0);
            std::uint64_t back = f;
            for (unsigned i = 0; i < vp(m, p); ++i)
                back *= p;
            REQUIRE(back == m);
        }
}

TEST_CASE("Legendre formula against the floor-sum oracle")
{
    CHECK(vp_factorial(10, 2) == 8);
    CHECK(vp_factorial(9, 3) == 4);
    CHECK(vp_factorial(6, 7) == 0);
    CHECK(vp_factorial(0, 5) == 0);
    for (std::uint64_t p : {2, 3, 5, 7})
        for (std::uint64_t n = 0; n <= 10000; ++n)
            REQUIRE(vp_factorial(n, p) == oracle::factorial_floor_sum(n, p));
}

TEST_CASE("primality")
{
    CHECK(is_prime(2));
    CHECK(is_prime(59));
    CHECK_FALSE(is_prime(1));
    CHECK_FALSE(is_prime(91));
    CHECK_THROWS_AS(require_prime(4), DomainError);
}

TEST_CASE("cp closed form matches filtering")
{
    CHECK(cp(3, 3) == 4);
    CHECK(cp(5, 2) == 9);
    CHECK(cp(5, 5) == 6);
    for (std::uint64_t p : {2, 3, 5, 7}) {
        auto expected = oracle::coprimes(p, 10000);
        for (std::uint64_t i = 1; i <= 10000; ++i)
            REQUIRE(cp(i, p) == expected[i - 1]);
    }
}

TEST_CASE("prime power ring")
{
    PrimePowerRing ring(3, 4);
    CHECK(ring.modulus() == 81);
    CHECK(ring.unit_count() == 54);
    CHECK(ring.mul(ring.inverse(8), 8) == 1);
    CHECK(ring.valuation(18) == 2);
    CHECK(ring.valuation(0) == 4);
    CHECK(ring.prime_power(2) == 9);
    CHECK(ring.prime_power(4) == 0);
    CHECK_THROWS_AS(ring.inverse(6), DomainError);
    CHECK(PrimePowerRing::max_exponent(2) == 62);
    CHECK_NOTHROW(PrimePowerRing(3, PrimePowerRing::max_exponent(3)));
    CHECK_THROWS_AS(PrimePowerRing(3, PrimePowerRing::max_exponent(3) + 1), PrecisionError);

    PrimePowerRing big(3, 39);
    for (std::uint64_t a : std::vector<std::uint64_t>{2, 5, 1234567891, big.modulus() - 1})
        CHECK(big.mul(a, big.inverse(a)) == 1);
}

TEST_CASE("coprime elementary sums fold whole periods correctly")
{
    // Compare the periodic fold against direct expansion over more than one period.
    for (std::uint64_t p : {2, 3, 5}) {
        PrimePowerRing ring(p, 3);
        for (std::uint64_t count : std::vector<std::uint64_t>{1, 7, ring.unit_count(), ring.unit_count() * 3 + 5}) {
            mpz_class m;
            mpz_ui_pow_ui(m.get_mpz_t(), p, 3);
            std::vector<mpq_class> e(4, 0);
            e[0] = 1;
            for (auto j : oracle::coprimes(p, count))
                for (int deg = 3; deg >= 1; --deg)
                    e[deg] += e[deg - 1] * mpq_class(1, j);
            auto got = coprime_elementary(ring, count, 3);
            for (int deg = 0; deg <= 3; ++deg) {
                e[deg].canonicalize();
                CHECK(got[deg] == oracle::residue(e[deg], p, 3));
            }
            CHECK(coprime_reciprocal_run(ring, 1, count) == got[1]);
        }
    }
}
