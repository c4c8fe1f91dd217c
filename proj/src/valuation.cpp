#include "stirval/valuation.hpp"

#include "stirval/digits.hpp"
#include "stirval/errors.hpp"

#include <stdexcept>

namespace stirval {

std::int64_t Valuation::value() const
{
    if (!v_)
        throw std::logic_error("valuation is infinite");
    return *v_;
}

std::string Valuation::to_string() const
{
    return v_ ? std::to_string(*v_) : std::string("inf");
}

unsigned vp(std::uint64_t m, std::uint64_t p)
{
    if (m == 0)
        throw DomainError("vp of 0 as an integer; use the rational overload");
    if (p < 2)
        throw DomainError("base must be at least 2");
    unsigned e = 0;
    while (m % p == 0) {
        m /= p;
        ++e;
    }
    return e;
}

Valuation vp(const mpz_class& m, std::uint64_t p)
{
    if (p < 2)
        throw DomainError("base must be at least 2");
    if (m == 0)
        return Valuation::infinite();
    if (p == 2)
        return Valuation::finite(static_cast<std::int64_t>(mpz_scan1(m.get_mpz_t(), 0)));
    mpz_class pz(static_cast<unsigned long>(p));
    mpz_class rest;
    auto e = mpz_remove(rest.get_mpz_t(), m.get_mpz_t(), pz.get_mpz_t());
    return Valuation::finite(static_cast<std::int64_t>(e));
}

Valuation vp(const mpq_class& q, std::uint64_t p)
{
    if (q == 0)
        return Valuation::infinite();
    auto num = vp(mpz_class(q.get_num()), p).value();
    auto den = vp(mpz_class(q.get_den()), p).value();
    return Valuation::finite(num - den);
}

Valuation vp(std::int64_t num, std::int64_t den, std::uint64_t p)
{
    if (den == 0)
        throw DomainError("zero denominator");
    mpq_class q(mpz_class(static_cast<long>(num)), mpz_class(static_cast<long>(den)));
    q.canonicalize();
    return vp(q, p);
}

std::uint64_t free_part(std::uint64_t m, std::uint64_t p)
{
    if (m == 0)
        throw DomainError("free_part requires m >= 1");
    if (p < 2)
        throw DomainError("base must be at least 2");
    while (m % p == 0)
        m /= p;
    return m;
}

std::uint64_t vp_factorial(std::uint64_t n, std::uint64_t p)
{
    if (p < 2)
        throw DomainError("base must be at least 2");
    return (n - digit_sum(n, p)) / (p - 1);
}

} // namespace stirval
