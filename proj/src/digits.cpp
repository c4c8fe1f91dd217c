#include "stirval/digits.hpp"

#include "stirval/errors.hpp"

#include <algorithm>
#include <limits>

namespace stirval {

DigitString::DigitString(std::uint64_t p, std::vector<std::uint32_t> digits)
    : p_(p), digits_(std::move(digits))
{
    if (p_ < 2)
        throw DomainError("base must be at least 2");
    if (p_ > std::numeric_limits<std::uint32_t>::max())
        throw DomainError("base too large");
    if (digits_.empty())
        throw DomainError("digit string must be nonempty");
    if (digits_.front() == 0)
        throw DomainError("leading digit must be nonzero");
    for (auto d : digits_)
        if (d >= p_)
            throw DomainError("digit " + std::to_string(d) + " out of range for base " + std::to_string(p_));
}

std::uint64_t DigitString::value() const
{
    return prefix_value(*this, digits_.size());
}

std::uint64_t DigitString::digit_sum() const
{
    std::uint64_t s = 0;
    for (auto d : digits_)
        s += d;
    return s;
}

DigitString DigitString::prefix(std::size_t length) const
{
    if (length == 0 || length > digits_.size())
        throw DomainError("prefix length out of range");
    return DigitString(p_, std::vector<std::uint32_t>(digits_.begin(), digits_.begin() + length));
}

DigitString DigitString::extended(std::uint32_t digit) const
{
    auto next = digits_;
    next.push_back(digit);
    return DigitString(p_, std::move(next));
}

bool DigitString::starts_with(const DigitString& other) const
{
    return other.p_ == p_ && other.digits_.size() <= digits_.size()
        && std::equal(other.digits_.begin(), other.digits_.end(), digits_.begin());
}

std::string DigitString::to_string() const
{
    std::string out = "<";
    for (std::size_t i = 0; i < digits_.size(); ++i) {
        if (i)
            out += ',';
        out += std::to_string(digits_[i]);
    }
    out += ">_" + std::to_string(p_);
    return out;
}

std::string DigitString::compact() const
{
    std::string out;
    for (std::size_t i = 0; i < digits_.size(); ++i) {
        if (i && p_ > 10)
            out += '.';
        out += std::to_string(digits_[i]);
    }
    return out;
}

DigitString to_digits(std::uint64_t n, std::uint64_t p)
{
    if (n == 0)
        throw DomainError("to_digits requires n >= 1");
    if (p < 2)
        throw DomainError("base must be at least 2");
    std::vector<std::uint32_t> ds;
    while (n) {
        ds.push_back(static_cast<std::uint32_t>(n % p));
        n /= p;
    }
    std::reverse(ds.begin(), ds.end());
    return DigitString(p, std::move(ds));
}

std::uint64_t from_digits(const DigitString& d)
{
    return d.value();
}

std::uint64_t digit_sum(std::uint64_t n, std::uint64_t p)
{
    if (p < 2)
        throw DomainError("base must be at least 2");
    std::uint64_t s = 0;
    for (; n; n /= p)
        s += n % p;
    return s;
}

bool is_prime(std::uint64_t p)
{
    if (p < 2)
        return false;
    for (std::uint64_t d = 2; d * d <= p; ++d)
        if (p % d == 0)
            return false;
    return true;
}

void require_prime(std::uint64_t p)
{
    if (!is_prime(p))
        throw DomainError(std::to_string(p) + " is not prime");
}

std::uint64_t prefix_value(const DigitString& d, std::size_t length)
{
    constexpr auto max = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < length; ++i) {
        if (v > (max - d[i]) / d.base())
            throw SizeError("digit string " + d.to_string() + " exceeds 64-bit range");
        v = v * d.base() + d[i];
    }
    return v;
}

} // namespace stirval
