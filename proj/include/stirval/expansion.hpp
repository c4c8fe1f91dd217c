#pragma once

#include "stirval/digits.hpp"
#include "stirval/modring.hpp"
#include "stirval/structure.hpp"

#include <cstdint>
#include <vector>

namespace stirval {

/// Outcome of reading nu_p(H(n, k)) off the digit expansion.
struct ExpansionVerdict {
    enum class Kind { exact, lower_bound };
    Kind kind = Kind::exact;
    /// The valuation when exact; otherwise s - t - ks + U_p(k), a lower bound.
    std::int64_t value = 0;

    bool is_exact() const { return kind == Kind::exact; }
    friend bool operator==(const ExpansionVerdict&, const ExpansionVerdict&) = default;
};

/// Digit-local quantities for a fixed (p, k): H'_p, H_p, Sigma_p and the
/// truncated p-adic expansion of H(n, k).
///
/// Prefixes must start with the digits e_0..e_t of k - 1. All residues are
/// p-adic integers (every denominator is a c_p value), so they are exact
/// modulo p^M.
class ExpansionContext {
public:
    ExpansionContext(std::uint64_t k, std::uint64_t p);

    const StructureConstants& constants() const { return c_; }

    /// H'_p(a_0..a_{t+v}): k-subsets of items (w, j), j in the block of
    /// a_0..a_w, with index sum U + v, weighted by prod 1/j.
    std::uint64_t h_prime_mod(const DigitString& prefix, unsigned M) const;
    /// H_p(a_0..a_{t+v+1}) = H'_p(a_0..a_{t+v}) + Pi_p(k) * sum_{j in last block} 1/j.
    std::uint64_t h_p_mod(const DigitString& prefix, unsigned M) const;
    /// H_p(parent, b) for b = 0..p-1, sharing H'_p(parent) and the reciprocal prefix sum.
    std::vector<std::uint64_t> child_h_p_mod(const DigitString& parent, unsigned M) const;
    /// Sigma_p(a_0..a_{t+u+1}) = sum_{v=0..u} H_p(a_0..a_{t+v+1}) p^v.
    std::uint64_t sigma_mod(const DigitString& prefix, unsigned M) const;
    /// Pi_p(k) mod p^M.
    std::uint64_t pi_mod(const PrimePowerRing& ring) const;

    /// nu_p(H(n, k)) from the expansion; a lower bound when every term up to
    /// the error term vanishes. n must start with the digits of k - 1 and have
    /// at least t + 2 digits.
    ExpansionVerdict vp_H(std::uint64_t n) const;

private:
    /// Prefix length minus t + 1; throws DomainError on root mismatch.
    std::size_t depth_of(const DigitString& prefix) const;
    std::uint64_t h_prime_ring(const DigitString& prefix, std::size_t groups, const PrimePowerRing& ring) const;

    StructureConstants c_;
};

std::uint64_t h_prime_mod(const DigitString& prefix, std::uint64_t k, unsigned M);
std::uint64_t h_p_mod(const DigitString& prefix, std::uint64_t k, unsigned M);
std::uint64_t sigma_mod(const DigitString& prefix, std::uint64_t k, unsigned M);
ExpansionVerdict vp_H_expansion(std::uint64_t n, std::uint64_t k, std::uint64_t p);

} // namespace stirval
