#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace stirval {

/// Base-p representation <a_0, ..., a_v>_p, most significant digit first.
///
/// Invariants: p >= 2, length >= 1, a_0 != 0, every digit < p.
class DigitString {
public:
    DigitString(std::uint64_t p, std::vector<std::uint32_t> digits);

    std::uint64_t base() const { return p_; }
    const std::vector<std::uint32_t>& digits() const { return digits_; }
    std::size_t size() const { return digits_.size(); }
    std::uint32_t operator[](std::size_t i) const { return digits_[i]; }
    /// Index of the last digit (v in <a_0, ..., a_v>).
    std::size_t last_index() const { return digits_.size() - 1; }

    /// Numeric value; throws SizeError if it does not fit in 64 bits.
    std::uint64_t value() const;
    std::uint64_t digit_sum() const;

    /// First `length` digits; length must be in [1, size()].
    DigitString prefix(std::size_t length) const;
    DigitString extended(std::uint32_t digit) const;
    bool starts_with(const DigitString& other) const;

    /// "<1,2,0>_3"
    std::string to_string() const;
    /// Digits concatenated ("120"); dot-separated when p > 10.
    std::string compact() const;

    friend bool operator==(const DigitString&, const DigitString&) = default;

private:
    std::uint64_t p_;
    std::vector<std::uint32_t> digits_;
};

DigitString to_digits(std::uint64_t n, std::uint64_t p);
std::uint64_t from_digits(const DigitString& d);
/// s_p(n), the base-p digit sum.
std::uint64_t digit_sum(std::uint64_t n, std::uint64_t p);

bool is_prime(std::uint64_t p);
/// Throws DomainError unless p is prime.
void require_prime(std::uint64_t p);

/// Value of the length-`length` prefix of d; 0 for length 0.
std::uint64_t prefix_value(const DigitString& d, std::size_t length);

} // namespace stirval
