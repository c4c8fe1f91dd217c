#include "doctest.h"
#include "oracles.hpp"

#include "stirval/errors.hpp"
#include "stirval/harmonic.hpp"

#include <random>

using namespace stirval;

TEST_CASE("exact H values")
{
    CHECK(exact_H(1, 1) == 1);
    CHECK(exact_H(3, 2) == 1);
    CHECK(exact_H(4, 2) == Rational(35, 24));
    CHECK(exact_H(5, 2) == Rational(15, 8));
    CHECK(exact_H(4, 1) == Rational(25, 12));
    CHECK(exact_H(6, 0) == 1);
    CHECK_THROWS_AS(exact_H(3, 4), DomainError);
    CHECK_THROWS_AS(exact_H(0, 0), DomainError);
    CHECK_THROWS_AS(exact_H(5000, 2), SizeError);
    CHECK_NOTHROW(exact_H(5000, 1, ExactLimits{5000}));
}

TEST_CASE("exact H agrees with subset enumeration")
{
    for (std::uint64_t n = 1; n <= 12; ++n)
        for (std::uint64_t k = 0; k <= n; ++k) {
            auto h = exact_H(n, k);
            REQUIRE(h == oracle::harmonic(n, k));
            REQUIRE(h > 0);
            REQUIRE(h.get_den() > 0);
            REQUIRE(gcd(mpz_class(h.get_num()), mpz_class(h.get_den())) == 1);
        }
}

TEST_CASE("Stirling numbers")
{
    CHECK(stirling(4, 2) == 11);
    CHECK(stirling(5, 5) == 1);
    CHECK(stirling(8, 3) == 13132);
    CHECK(stirling(5, 0) == 0);
    CHECK_THROWS_AS(stirling(3, 4), DomainError);
    for (std::size_t n = 1; n <= 7; ++n)
        for (std::size_t k = 1; k <= n; ++k)
            REQUIRE(stirling(n, k) == oracle::stirling_by_cycles(n, k));
}

TEST_CASE("H(n, k) n! = s(n+1, k+1)")
{
    for (std::uint64_t n = 1; n <= 12; ++n) {
        mpz_class fact;
        mpz_fac_ui(fact.get_mpz_t(), n);
        for (std::uint64_t k = 1; k <= n; ++k)
            REQUIRE(exact_H(n, k) * fact == Rational(stirling(n + 1, k + 1)));
    }
}

TEST_CASE("Stirling residues")
{
    CHECK(stirling_mod(6, 3, 2, 5) == 1);
    CHECK(stirling_mod(4, 2, 3, 2) == 2);
    CHECK(stirling_mod(5, 5, 7, 3) == 1);
    CHECK(stirling_mod(1, 1, 5, 3) == 1);
    for (std::uint64_t n = 1; n <= 40; ++n)
        for (std::uint64_t k = 1; k <= n; k += 3) {
            mpz_class m;
            mpz_ui_pow_ui(m.get_mpz_t(), 3, 20);
            mpz_class expected = stirling(n, k) % m;
            REQUIRE(stirling_mod(n, k, 3, 20) == expected);
        }
    CHECK_THROWS_AS(stirling_mod(10, 2, 3, 100, EscalationPolicy{8, 2, 64}), PrecisionError);
}

TEST_CASE("vp_H examples")
{
    CHECK(vp_H(7, 2, 2) == Valuation::finite(-2));
    CHECK(vp_H(3, 2, 2) == Valuation::finite(0));
    CHECK(vp_H(5, 2, 2) == Valuation::finite(-3));
    CHECK(vp_H(4, 1, 5) == Valuation::finite(2));
    CHECK_THROWS_AS(vp_H(3, 4, 2), DomainError);
    CHECK_THROWS_AS(vp_H(3, 0, 2), DomainError);
    CHECK_THROWS_AS(vp_H(10, 2, 9), DomainError);
}

TEST_CASE("vp_H agrees with valuations of exact rationals")
{
    for (std::uint64_t p : {2, 3, 5, 7})
        for (std::uint64_t k = 1; k <= 6; ++k) {
            HarmonicRow row(static_cast<unsigned>(k));
            std::vector<std::uint64_t> ns;
            std::vector<std::int64_t> expected;
            for (std::uint64_t n = 1; n <= 64; ++n) {
                row.advance();
                if (n < k)
                    continue;
                ns.push_back(n);
                expected.push_back(oracle::vp_rat(row.at(static_cast<unsigned>(k)), p));
            }
            REQUIRE(vp_H_sweep(ns, k, p) == expected);
            for (std::size_t i = 0; i < ns.size(); i += 7)
                REQUIRE(vp_H(ns[i], k, p).value() == expected[i]);
        }
}

TEST_CASE("escalation is sound: a larger starting guard never changes the answer")
{
    std::mt19937_64 rng(20240917);
    const std::uint64_t primes[] = {2, 3, 5, 7, 11, 13};
    for (int trial = 0; trial < 200; ++trial) {
        auto p = primes[rng() % 6];
        auto n = 1 + rng() % 600;
        auto k = 1 + rng() % std::min<std::uint64_t>(n, 6);
        EscalationPolicy tight{1, 2, std::uint64_t{1} << 26};
        EscalationPolicy loose{16, 3, std::uint64_t{1} << 26};
        auto a = vp_H(n, k, p, tight);
        REQUIRE(a.is_finite());
        REQUIRE(a == vp_H(n, k, p, loose));
    }
}

TEST_CASE("precision failure is reported, never a wrong answer")
{
    EscalationPolicy starved{8, 2, 32};
    CHECK_THROWS_AS(vp_H(200, 2, 2, starved), PrecisionError);
}

TEST_CASE("starting guard")
{
    EscalationPolicy policy;
    CHECK(starting_guard(7, 2, 2, policy) == 3 * 3 + 8);
}
