#pragma once

#include <cstdint>
#include <vector>

namespace stirval {

/// Residues modulo p^e with p^e < 2^63. Products go through 128-bit integers.
class PrimePowerRing {
public:
    /// Throws PrecisionError if p^exponent does not fit, DomainError if p < 2.
    PrimePowerRing(std::uint64_t p, unsigned exponent);

    /// Largest e with p^e < 2^63.
    static unsigned max_exponent(std::uint64_t p);

    std::uint64_t prime() const { return p_; }
    unsigned exponent() const { return e_; }
    std::uint64_t modulus() const { return m_; }
    /// Number of units, p^{e-1}(p-1); 1 when e = 0.
    std::uint64_t unit_count() const;

    std::uint64_t reduce(std::uint64_t x) const { return x % m_; }
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const
    {
        auto s = a + b;
        return s >= m_ ? s - m_ : s;
    }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + (m_ - b); }
    std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : m_ - a; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const
    {
        return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m_);
    }
    std::uint64_t pow(std::uint64_t a, std::uint64_t n) const;
    /// Inverse of a unit; throws DomainError when p divides a.
    std::uint64_t inverse(std::uint64_t a) const;
    /// p^i mod p^e (0 once i >= e).
    std::uint64_t prime_power(unsigned i) const;

    /// nu_p of a residue, capped at exponent() (a zero residue reads as exponent()).
    unsigned valuation(std::uint64_t residue) const;

private:
    std::uint64_t p_;
    unsigned e_;
    std::uint64_t m_;
};

/// Polynomial coefficients c_0..c_d truncated at a fixed degree.
using TruncatedPoly = std::vector<std::uint64_t>;

TruncatedPoly poly_mul(const PrimePowerRing& ring, const TruncatedPoly& a, const TruncatedPoly& b);
TruncatedPoly poly_pow(const PrimePowerRing& ring, TruncatedPoly base, std::uint64_t n);

/// c_p(i): the i-th positive integer not divisible by p (i >= 1).
std::uint64_t cp(std::uint64_t i, std::uint64_t p);

/// Elementary symmetric sums e_0..e_degree of {1/c_p(1), ..., 1/c_p(count)}
/// modulo p^e, i.e. the truncation of prod (1 + X / c_p(i)).
///
/// Costs O(min(count, unit_count()) * degree): c_p(i) mod p^e is periodic in i
/// with period unit_count(), so whole periods are folded by exponentiation.
TruncatedPoly coprime_elementary(const PrimePowerRing& ring, std::uint64_t count, unsigned degree);

/// prod_{i=1}^{count} c_p(i) mod p^e.
std::uint64_t coprime_product(const PrimePowerRing& ring, std::uint64_t count);

/// sum_{i=first}^{first+count-1} 1/c_p(i) mod p^e, computed by streaming.
std::uint64_t coprime_reciprocal_run(const PrimePowerRing& ring, std::uint64_t first, std::uint64_t count);

} // namespace stirval
