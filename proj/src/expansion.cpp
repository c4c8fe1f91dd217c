#include "stirval/expansion.hpp"

#include "stirval/errors.hpp"

#include <algorithm>
#include <string>

namespace stirval {

ExpansionContext::ExpansionContext(std::uint64_t k, std::uint64_t p) : c_(stirval::constants(k, p)) {}

std::size_t ExpansionContext::depth_of(const DigitString& prefix) const
{
    if (!prefix.starts_with(c_.root_digits))
        throw DomainError(prefix.to_string() + " does not start with the digits of k - 1 = "
                          + c_.root_digits.to_string());
    return prefix.size() - (c_.t + 1);
}

std::uint64_t ExpansionContext::pi_mod(const PrimePowerRing& ring) const
{
    if (ring.modulus() == 1)
        return 0;
    std::uint64_t prod = 1;
    for (auto count : c_.root_blocks)
        prod = ring.mul(prod, coprime_product(ring, count));
    return ring.inverse(prod);
}

// Elementary-symmetric DP over the first `groups` blocks of `prefix`.
// State (chosen, index sum); the answer is the (k, U + groups - t - 1) entry.
std::uint64_t ExpansionContext::h_prime_ring(const DigitString& prefix, std::size_t groups,
                                             const PrimePowerRing& ring) const
{
    if (ring.modulus() == 1)
        return 0;
    const auto k = static_cast<std::size_t>(c_.k);
    const auto target = static_cast<std::size_t>(c_.U + groups - c_.t - 1);
    const std::size_t width = target + 1;
    std::vector<std::uint64_t> dp((k + 1) * width, 0);
    dp[0] = 1;
    for (std::size_t w = 0; w < groups; ++w) {
        auto e = coprime_elementary(ring, bp_count(prefix, w + 1), static_cast<unsigned>(k));
        auto next = dp;
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t y = 0; y < width; ++y) {
                auto from = dp[c * width + y];
                if (from == 0)
                    continue;
                for (std::size_t m = 1; c + m <= k && y + w * m < width; ++m) {
                    auto& to = next[(c + m) * width + y + w * m];
                    to = ring.add(to, ring.mul(from, e[m]));
                }
            }
        }
        dp = std::move(next);
    }
    return dp[k * width + target];
}

std::uint64_t ExpansionContext::h_prime_mod(const DigitString& prefix, unsigned M) const
{
    depth_of(prefix);
    PrimePowerRing ring(c_.p, M);
    return h_prime_ring(prefix, prefix.size(), ring);
}

std::uint64_t ExpansionContext::h_p_mod(const DigitString& prefix, unsigned M) const
{
    if (depth_of(prefix) == 0)
        throw DomainError("H_p needs a prefix longer than the digits of k - 1");
    PrimePowerRing ring(c_.p, M);
    auto head = h_prime_ring(prefix, prefix.size() - 1, ring);
    auto last = coprime_elementary(ring, bp_count(prefix, prefix.size()), 1)[1];
    return ring.add(head, ring.mul(pi_mod(ring), last));
}

std::vector<std::uint64_t> ExpansionContext::child_h_p_mod(const DigitString& parent, unsigned M) const
{
    depth_of(parent);
    PrimePowerRing ring(c_.p, M);
    auto head = h_prime_ring(parent, parent.size(), ring);
    auto pi = pi_mod(ring);
    // The last block of child b is c_p(1..(p-1)<parent> + b).
    const auto base = (c_.p - 1) * parent.value();
    auto recip = coprime_elementary(ring, base, 1)[1];
    std::vector<std::uint64_t> out;
    out.reserve(c_.p);
    for (std::uint64_t b = 0; b < c_.p; ++b) {
        if (b > 0)
            recip = ring.add(recip, ring.inverse(cp(base + b, c_.p) % ring.modulus()));
        out.push_back(ring.add(head, ring.mul(pi, recip)));
    }
    return out;
}

std::uint64_t ExpansionContext::sigma_mod(const DigitString& prefix, unsigned M) const
{
    auto depth = depth_of(prefix);
    if (depth == 0)
        throw DomainError("Sigma_p needs a prefix longer than the digits of k - 1");
    PrimePowerRing ring(c_.p, M);
    std::uint64_t sum = 0;
    for (std::size_t v = 0; v < depth && v < M; ++v) {
        auto term = h_p_mod(prefix.prefix(c_.t + v + 2), static_cast<unsigned>(M - v));
        sum = ring.add(sum, ring.mul(term, ring.prime_power(static_cast<unsigned>(v))));
    }
    return sum;
}

ExpansionVerdict ExpansionContext::vp_H(std::uint64_t n) const
{
    auto d = to_digits(n, c_.p);
    auto depth = depth_of(d);
    if (depth == 0)
        throw DomainError("expansion needs n with more digits than k - 1");
    const auto s = static_cast<std::int64_t>(d.last_index());
    const auto shift = static_cast<std::int64_t>(c_.U) - static_cast<std::int64_t>(c_.k) * s;
    const auto precision = static_cast<unsigned>(depth);
    if (precision > PrimePowerRing::max_exponent(c_.p))
        throw PrecisionError("expansion of " + d.to_string() + " needs " + std::to_string(precision)
                             + " base-" + std::to_string(c_.p) + " digits of precision");
    PrimePowerRing ring(c_.p, precision);
    std::uint64_t sum = 0;
    for (unsigned v = 0; v < precision; ++v) {
        auto term = h_p_mod(d.prefix(c_.t + v + 2), precision - v);
        sum = ring.add(sum, ring.mul(term, ring.prime_power(v)));
        // The partial sum is divisible by p^v here; once it is not divisible by
        // p^{v+1}, later terms (multiples of p^{v+1}) cannot change its valuation.
        if (auto nu = ring.valuation(sum); nu <= v)
            return {ExpansionVerdict::Kind::exact, static_cast<std::int64_t>(nu) + shift};
    }
    return {ExpansionVerdict::Kind::lower_bound, static_cast<std::int64_t>(precision) + shift};
}

std::uint64_t h_prime_mod(const DigitString& prefix, std::uint64_t k, unsigned M)
{
    return ExpansionContext(k, prefix.base()).h_prime_mod(prefix, M);
}

std::uint64_t h_p_mod(const DigitString& prefix, std::uint64_t k, unsigned M)
{
    return ExpansionContext(k, prefix.base()).h_p_mod(prefix, M);
}

std::uint64_t sigma_mod(const DigitString& prefix, std::uint64_t k, unsigned M)
{
    return ExpansionContext(k, prefix.base()).sigma_mod(prefix, M);
}

ExpansionVerdict vp_H_expansion(std::uint64_t n, std::uint64_t k, std::uint64_t p)
{
    return ExpansionContext(k, p).vp_H(n);
}

} // namespace stirval
