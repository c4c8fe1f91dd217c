#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>

namespace stirval {

/// nu_p of a rational: a finite integer, or infinity for zero only.
class Valuation {
public:
    static Valuation finite(std::int64_t v) { return Valuation(v); }
    static Valuation infinite() { return Valuation(); }

    bool is_finite() const { return v_.has_value(); }
    /// Throws std::logic_error when infinite.
    std::int64_t value() const;
    std::string to_string() const;

    friend bool operator==(const Valuation&, const Valuation&) = default;

private:
    Valuation() = default;
    explicit Valuation(std::int64_t v) : v_(v) {}
    std::optional<std::int64_t> v_;
};

/// nu_p(m) for m >= 1.
unsigned vp(std::uint64_t m, std::uint64_t p);
Valuation vp(const mpz_class& m, std::uint64_t p);
Valuation vp(const mpq_class& q, std::uint64_t p);
/// nu_p(num/den); den != 0.
Valuation vp(std::int64_t num, std::int64_t den, std::uint64_t p);

/// m / p^{nu_p(m)} for m >= 1.
std::uint64_t free_part(std::uint64_t m, std::uint64_t p);

/// nu_p(n!) by Legendre's formula (n - s_p(n)) / (p - 1).
std::uint64_t vp_factorial(std::uint64_t n, std::uint64_t p);

} // namespace stirval
