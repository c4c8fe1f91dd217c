#include "stirval/modring.hpp"

#include "stirval/errors.hpp"

#include <limits>
#include <string>

namespace stirval {

namespace {

constexpr std::uint64_t kModulusLimit = std::uint64_t{1} << 63;

// Streams c_p(first), c_p(first+1), ... reduced modulo the ring.
class CoprimeStream {
public:
    CoprimeStream(const PrimePowerRing& ring, std::uint64_t first)
        : p_(ring.prime()), m_(ring.modulus()), value_(cp(first, ring.prime()) % ring.modulus())
    {
        residue_ = cp(first, p_) % p_;
    }

    std::uint64_t current() const { return value_; }

    void advance()
    {
        auto step = residue_ == p_ - 1 ? 2 : 1;
        residue_ = (residue_ + step) % p_;
        value_ += step;
        if (value_ >= m_)
            value_ -= m_;
    }

private:
    std::uint64_t p_;
    std::uint64_t m_;
    std::uint64_t value_;
    std::uint64_t residue_;
};

// prod (c + X) over `count` consecutive coprime integers starting at c_p(first).
TruncatedPoly linear_product(const PrimePowerRing& ring, std::uint64_t first, std::uint64_t count,
                             unsigned degree)
{
    TruncatedPoly a(degree + 1, 0);
    a[0] = ring.reduce(1);
    CoprimeStream stream(ring, first);
    for (std::uint64_t i = 0; i < count; ++i, stream.advance()) {
        auto c = stream.current();
        for (unsigned m = degree; m >= 1; --m)
            a[m] = ring.add(ring.mul(a[m], c), a[m - 1]);
        a[0] = ring.mul(a[0], c);
    }
    return a;
}

} // namespace

PrimePowerRing::PrimePowerRing(std::uint64_t p, unsigned exponent) : p_(p), e_(exponent), m_(1)
{
    if (p < 2)
        throw DomainError("base must be at least 2");
    for (unsigned i = 0; i < exponent; ++i) {
        if (m_ >= kModulusLimit / p)
            throw PrecisionError(std::to_string(p) + "^" + std::to_string(exponent)
                                 + " exceeds the 63-bit modulus limit");
        m_ *= p;
    }
}

unsigned PrimePowerRing::max_exponent(std::uint64_t p)
{
    unsigned e = 0;
    for (std::uint64_t m = 1; m < kModulusLimit / p; m *= p)
        ++e;
    return e;
}

std::uint64_t PrimePowerRing::unit_count() const
{
    return e_ == 0 ? 1 : m_ / p_ * (p_ - 1);
}

std::uint64_t PrimePowerRing::pow(std::uint64_t a, std::uint64_t n) const
{
    std::uint64_t r = reduce(1);
    a = reduce(a);
    while (n) {
        if (n & 1)
            r = mul(r, a);
        a = mul(a, a);
        n >>= 1;
    }
    return r;
}

std::uint64_t PrimePowerRing::inverse(std::uint64_t a) const
{
    if (a % p_ == 0)
        throw DomainError("inverse of a multiple of " + std::to_string(p_));
    if (m_ == 1)
        return 0;
    __int128 r0 = m_, r1 = a % m_;
    __int128 s0 = 0, s1 = 1;
    while (r1 != 0) {
        auto q = r0 / r1;
        auto r2 = r0 - q * r1;
        r0 = r1;
        r1 = r2;
        auto s2 = s0 - q * s1;
        s0 = s1;
        s1 = s2;
    }
    auto inv = s0 % static_cast<__int128>(m_);
    if (inv < 0)
        inv += m_;
    return static_cast<std::uint64_t>(inv);
}

std::uint64_t PrimePowerRing::prime_power(unsigned i) const
{
    if (i >= e_)
        return 0;
    std::uint64_t r = 1;
    for (unsigned j = 0; j < i; ++j)
        r *= p_;
    return r;
}

unsigned PrimePowerRing::valuation(std::uint64_t residue) const
{
    residue = reduce(residue);
    if (residue == 0)
        return e_;
    unsigned v = 0;
    while (residue % p_ == 0) {
        residue /= p_;
        ++v;
    }
    return v;
}

TruncatedPoly poly_mul(const PrimePowerRing& ring, const TruncatedPoly& a, const TruncatedPoly& b)
{
    TruncatedPoly c(a.size(), 0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0)
            continue;
        for (std::size_t j = 0; i + j < c.size() && j < b.size(); ++j)
            c[i + j] = ring.add(c[i + j], ring.mul(a[i], b[j]));
    }
    return c;
}

TruncatedPoly poly_pow(const PrimePowerRing& ring, TruncatedPoly base, std::uint64_t n)
{
    TruncatedPoly r(base.size(), 0);
    r[0] = ring.reduce(1);
    while (n) {
        if (n & 1)
            r = poly_mul(ring, r, base);
        n >>= 1;
        if (n)
            base = poly_mul(ring, base, base);
    }
    return r;
}

std::uint64_t cp(std::uint64_t i, std::uint64_t p)
{
    if (i == 0)
        throw DomainError("c_p index must be >= 1");
    if (p < 2)
        throw DomainError("base must be at least 2");
    return i + (i - 1) / (p - 1);
}

TruncatedPoly coprime_elementary(const PrimePowerRing& ring, std::uint64_t count, unsigned degree)
{
    TruncatedPoly a;
    auto period = ring.unit_count();
    if (count <= period) {
        a = linear_product(ring, 1, count, degree);
    } else {
        auto whole = poly_pow(ring, linear_product(ring, 1, period, degree), count / period);
        a = poly_mul(ring, whole, linear_product(ring, 1, count % period, degree));
    }
    auto scale = ring.inverse(a[0] == 0 ? 1 : a[0]);
    for (auto& c : a)
        c = ring.mul(c, scale);
    return a;
}

std::uint64_t coprime_product(const PrimePowerRing& ring, std::uint64_t count)
{
    auto period = ring.unit_count();
    if (count <= period)
        return linear_product(ring, 1, count, 0)[0];
    auto whole = ring.pow(linear_product(ring, 1, period, 0)[0], count / period);
    return ring.mul(whole, linear_product(ring, 1, count % period, 0)[0]);
}

std::uint64_t coprime_reciprocal_run(const PrimePowerRing& ring, std::uint64_t first, std::uint64_t count)
{
    if (ring.modulus() == 1)
        return 0;
    auto period = ring.unit_count();
    std::uint64_t whole = 0;
    if (count > period) {
        // Every period visits each unit once, so its reciprocal sum is the unit sum.
        CoprimeStream s(ring, 1);
        for (std::uint64_t i = 0; i < period; ++i, s.advance())
            whole = ring.add(whole, s.current());
        whole = ring.mul(whole, ring.reduce(count / period));
        first += count / period * period;
        count %= period;
    }
    std::uint64_t sum = whole;
    CoprimeStream s(ring, first);
    for (std::uint64_t i = 0; i < count; ++i, s.advance())
        sum = ring.add(sum, ring.inverse(s.current()));
    return sum;
}

} // namespace stirval
