#pragma once

#include "stirval/report.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace stirval {

struct StructuralParams {
    std::vector<std::uint64_t> primes{2, 3, 5, 7};
    /// Range for the A_p, V_p and J_p identities.
    std::uint64_t n_max = 64;
    std::uint64_t k_max = 6;
    std::uint64_t lemma1_n_max = 12;
    std::uint64_t legendre_n_max = 10000;
};

CheckReport check_structural_identities(const StructuralParams& params = {});
CheckReport check_lengyel_identity(std::uint64_t m_max);
CheckReport check_integral_scan(std::uint64_t n_max);

struct CorollaryParams {
    std::size_t terms = 20;
    std::size_t samples = 500;
    std::uint64_t n_max = std::uint64_t{1} << 14;
    /// Samples up to here are also checked against exact rationals.
    std::uint64_t exact_max = std::uint64_t{1} << 12;
};

CheckReport check_corollary_2adic(const CorollaryParams& params, std::uint64_t seed);
struct EngineParams {
    std::vector<std::uint64_t> primes{2, 3, 5, 7};
    /// Exhaustive range compared against exact rationals.
    std::uint64_t n_max = 64;
    std::uint64_t k_max = 6;
    /// Seeded triples inside the expansion domain with n <= sample_n_max.
    std::size_t samples = 500;
    std::uint64_t sample_n_max = 2048;
};

/// Stirling engine against exact rationals, then expansion against Stirling.
CheckReport check_engines(const EngineParams& params, std::uint64_t seed);
CheckReport check_ubound(std::uint64_t p, std::uint64_t k, std::uint64_t x);
/// Lemma 4 on one window [x, x + y] and residue r.
CheckReport check_harm_count(std::uint64_t p, std::uint64_t x, std::uint64_t y, std::uint64_t r);
/// Lemma 4 on `cases` seeded windows with x <= x_max.
CheckReport check_harm_count_suite(std::uint64_t p, std::size_t cases, std::uint64_t x_max, std::uint64_t seed);
/// Lemma 5 over q_samples x a_samples seeded pairs.
CheckReport check_cpicong(std::uint64_t p, std::size_t q_samples, std::size_t a_samples, std::uint64_t seed);
CheckReport check_p59_exponent(std::uint64_t prime_bound);
CheckReport monitor_lower_bound(std::uint64_t p, std::uint64_t k, std::uint64_t n_max);

/// Names accepted by run_check, in a fixed order.
const std::vector<std::string>& check_names();

/// Runs a check by name. `params` is a JSON object of that check's parameters;
/// missing keys take defaults. Randomized checks require a seed.
CheckReport run_check(const std::string& name, const nlohmann::json& params, std::optional<std::uint64_t> seed);

} // namespace stirval
