#pragma once

#include "stirval/valuation.hpp"

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <vector>

namespace stirval {

/// Reduced rational with positive denominator (GMP keeps mpq_class canonical).
using Rational = mpq_class;

/// Soft size cap for exact big-number paths.
struct ExactLimits {
    std::uint64_t max_n = 4096;
};

/// H(n, k) = sum over i_1 < ... < i_k <= n of 1/(i_1 ... i_k), exactly.
Rational exact_H(std::uint64_t n, std::uint64_t k, const ExactLimits& limits = {});

/// H(n, 0..k) advanced one n at a time by H(n,j) = H(n-1,j) + H(n-1,j-1)/n.
class HarmonicRow {
public:
    explicit HarmonicRow(unsigned k);
    void advance();
    std::uint64_t n() const { return n_; }
    /// H(n(), j); zero when j > n().
    const Rational& at(unsigned j) const { return row_.at(j); }

private:
    std::uint64_t n_ = 0;
    std::vector<Rational> row_;
};

/// Unsigned Stirling number of the first kind s(n, k); s(n, 0) = 0 for n >= 1.
mpz_class stirling(std::uint64_t n, std::uint64_t k, const ExactLimits& limits = {});

struct EscalationPolicy {
    std::uint64_t initial_guard = 8;
    std::uint64_t growth_factor = 2;
    std::uint64_t max_modulus_bits = std::uint64_t{1} << 26;
};

/// s(n, k) mod p^M by one row sweep of multiply-by-scalar and add.
/// Throws PrecisionError when M * log2(p) exceeds policy.max_modulus_bits.
mpz_class stirling_mod(std::uint64_t n, std::uint64_t k, std::uint64_t p, std::uint64_t M,
                       const EscalationPolicy& policy = {});

/// Starting guard (k+1)(floor(log_p n)+1) + initial_guard.
std::uint64_t starting_guard(std::uint64_t n, std::uint64_t k, std::uint64_t p, const EscalationPolicy& policy);

/// nu_p(H(n, k)) = nu_p(s(n+1, k+1)) - nu_p(n!), reading s(n+1, k+1) modulo
/// p^{nu_p(n!) + guard} and growing the guard while the residue is zero.
Valuation vp_H(std::uint64_t n, std::uint64_t k, std::uint64_t p, const EscalationPolicy& policy = {});

/// vp_H for many n at once (same k, p): one sweep up to max(ns), result i for ns[i].
std::vector<std::int64_t> vp_H_sweep(std::span<const std::uint64_t> ns, std::uint64_t k, std::uint64_t p,
                                     const EscalationPolicy& policy = {});

} // namespace stirval
