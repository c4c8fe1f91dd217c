#pragma once

#include "stirval/digits.hpp"

#include <cstdint>
#include <iterator>
#include <vector>

namespace stirval {

/// The block {c_p(1), ..., c_p(B_p(a_0..a_v))} attached to a digit prefix.
/// Members are produced on demand; only the count is stored.
class CoprimeBlock {
public:
    class iterator {
    public:
        using iterator_category = std::forward_iterator_tag;
        using value_type = std::uint64_t;
        using difference_type = std::ptrdiff_t;
        using pointer = const std::uint64_t*;
        using reference = std::uint64_t;

        iterator() = default;
        iterator(std::uint64_t p, std::uint64_t index) : p_(p), index_(index) {}
        std::uint64_t operator*() const { return index_ + (index_ - 1) / (p_ - 1); }
        iterator& operator++()
        {
            ++index_;
            return *this;
        }
        iterator operator++(int)
        {
            auto old = *this;
            ++index_;
            return old;
        }
        friend bool operator==(const iterator& a, const iterator& b) { return a.index_ == b.index_; }

    private:
        std::uint64_t p_ = 2;
        std::uint64_t index_ = 1;
    };

    CoprimeBlock(std::uint64_t p, std::uint64_t count) : p_(p), count_(count) {}

    std::uint64_t base() const { return p_; }
    std::uint64_t count() const { return count_; }
    iterator begin() const { return {p_, 1}; }
    iterator end() const { return {p_, count_ + 1}; }

private:
    std::uint64_t p_;
    std::uint64_t count_;
};

/// B_p(a_0..a_v) = <a_0..a_v>_p - <a_0..a_{v-1}>_p, with its member block.
CoprimeBlock bp_block(const DigitString& d);
/// B_p of the length-`length` prefix of d (length >= 1).
std::uint64_t bp_count(const DigitString& d, std::size_t length);

/// A_p(n, v) = {m in [1, n] : nu_p(m) = s - v}, from the block formula j * p^{s-v}.
std::vector<std::uint64_t> a_p_set(std::uint64_t n, std::size_t v, std::uint64_t p);
/// The same set by filtering 1..n directly.
std::vector<std::uint64_t> a_p_set_direct(std::uint64_t n, std::size_t v, std::uint64_t p);

/// Per-(p, k) constants of the digit tree rooted at k - 1.
struct StructureConstants {
    std::uint64_t p = 0;
    std::uint64_t k = 0;
    /// Index of the last digit of k - 1.
    std::size_t t = 0;
    DigitString root_digits{2, {1}};
    /// B_p(e_0..e_v) for v = 0..t.
    std::vector<std::uint64_t> root_blocks;
    std::uint64_t U = 0;
    std::uint64_t W = 0;
};

StructureConstants constants(std::uint64_t k, std::uint64_t p);

/// V_p(n, k) = k*s - U_p(k) for n with s+1 digits starting with the digits of k-1.
std::int64_t v_p_max(std::uint64_t k, std::uint64_t p, std::uint64_t s);

/// Inverse modulo p^M of prod_{v=0..t} prod_{i=1..B_p(e_0..e_v)} c_p(i).
std::uint64_t pi_p_mod(std::uint64_t k, std::uint64_t p, unsigned M);

} // namespace stirval
