#include "stirval/structure.hpp"

#include "stirval/errors.hpp"
#include "stirval/modring.hpp"
#include "stirval/valuation.hpp"

namespace stirval {

std::uint64_t bp_count(const DigitString& d, std::size_t length)
{
    if (length == 0 || length > d.size())
        throw DomainError("block prefix length out of range");
    return prefix_value(d, length) - prefix_value(d, length - 1);
}

CoprimeBlock bp_block(const DigitString& d)
{
    return CoprimeBlock(d.base(), bp_count(d, d.size()));
}

std::vector<std::uint64_t> a_p_set(std::uint64_t n, std::size_t v, std::uint64_t p)
{
    auto d = to_digits(n, p);
    auto s = d.last_index();
    if (v > s)
        throw DomainError("a_p_set requires v <= s");
    std::uint64_t scale = 1;
    for (std::size_t i = 0; i < s - v; ++i)
        scale *= p;
    std::vector<std::uint64_t> out;
    for (auto j : CoprimeBlock(p, bp_count(d, v + 1)))
        out.push_back(j * scale);
    return out;
}

std::vector<std::uint64_t> a_p_set_direct(std::uint64_t n, std::size_t v, std::uint64_t p)
{
    auto s = to_digits(n, p).last_index();
    if (v > s)
        throw DomainError("a_p_set requires v <= s");
    std::vector<std::uint64_t> out;
    for (std::uint64_t m = 1; m <= n; ++m)
        if (vp(m, p) == s - v)
            out.push_back(m);
    return out;
}

StructureConstants constants(std::uint64_t k, std::uint64_t p)
{
    if (k < 2)
        throw DomainError("digit-tree constants need k >= 2");
    require_prime(p);
    StructureConstants c;
    c.p = p;
    c.k = k;
    c.root_digits = to_digits(k - 1, p);
    c.t = c.root_digits.last_index();
    c.U = c.t + 1;
    for (std::size_t v = 0; v <= c.t; ++v) {
        c.root_blocks.push_back(bp_count(c.root_digits, v + 1));
        c.U += c.root_blocks.back() * v;
    }
    c.W = c.U - c.t - 1;
    return c;
}

std::int64_t v_p_max(std::uint64_t k, std::uint64_t p, std::uint64_t s)
{
    auto c = constants(k, p);
    if (s < c.t + 1)
        throw DomainError("v_p_max requires s >= t + 1");
    return static_cast<std::int64_t>(k * s) - static_cast<std::int64_t>(c.U);
}

std::uint64_t pi_p_mod(std::uint64_t k, std::uint64_t p, unsigned M)
{
    auto c = constants(k, p);
    PrimePowerRing ring(p, M);
    std::uint64_t prod = ring.reduce(1);
    for (auto count : c.root_blocks)
        prod = ring.mul(prod, coprime_product(ring, count));
    return ring.inverse(prod == 0 ? 1 : prod);
}

} // namespace stirval
