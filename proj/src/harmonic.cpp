#include "stirval/harmonic.hpp"

#include "stirval/digits.hpp"
#include "stirval/errors.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <string>

namespace stirval {

namespace {

void check_exact_cap(std::uint64_t n, const ExactLimits& limits)
{
    if (n > limits.max_n)
        throw SizeError("n = " + std::to_string(n) + " exceeds the exact-arithmetic cap "
                        + std::to_string(limits.max_n));
}

unsigned floor_log(std::uint64_t n, std::uint64_t p)
{
    unsigned e = 0;
    for (; n >= p; n /= p)
        ++e;
    return e;
}

double bits_per_digit(std::uint64_t p)
{
    return std::log2(static_cast<double>(p));
}

void check_modulus_budget(std::uint64_t p, std::uint64_t M, const EscalationPolicy& policy)
{
    if (static_cast<double>(M) * bits_per_digit(p) > static_cast<double>(policy.max_modulus_bits))
        throw PrecisionError("modulus " + std::to_string(p) + "^" + std::to_string(M) + " exceeds "
                             + std::to_string(policy.max_modulus_bits) + " bits");
}

class ModReducer {
public:
    ModReducer(std::uint64_t p, std::uint64_t M) : p_(p), M_(M)
    {
        if (p != 2)
            mpz_ui_pow_ui(modulus_.get_mpz_t(), p, M);
    }

    void operator()(mpz_class& x) const
    {
        if (p_ == 2)
            mpz_tdiv_r_2exp(x.get_mpz_t(), x.get_mpz_t(), M_);
        else
            mpz_tdiv_r(x.get_mpz_t(), x.get_mpz_t(), modulus_.get_mpz_t());
    }

private:
    std::uint64_t p_;
    std::uint64_t M_;
    mpz_class modulus_;
};

// Coefficients of prod_{i=1}^{n} (X + i) truncated at X^degree, mod p^M, for
// every n in `targets` (sorted ascending); coefficient of X^m is s(n+1, m+1).
std::vector<mpz_class> sweep_coefficient(std::span<const std::uint64_t> targets, unsigned degree,
                                         std::uint64_t p, std::uint64_t M)
{
    ModReducer reduce(p, M);
    std::vector<mpz_class> row(degree + 1, 0);
    row[0] = 1;
    std::vector<mpz_class> out;
    out.reserve(targets.size());
    std::size_t next = 0;
    while (next < targets.size() && targets[next] == 0) {
        out.push_back(row[degree]);
        reduce(out.back());
        ++next;
    }
    // Values are reduced lazily; each step grows them by at most bit_width(i) + 1 bits.
    std::uint64_t growth = 0;
    for (std::uint64_t i = 1; next < targets.size(); ++i) {
        for (unsigned m = degree; m >= 1; --m) {
            mpz_mul_ui(row[m].get_mpz_t(), row[m].get_mpz_t(), i);
            mpz_add(row[m].get_mpz_t(), row[m].get_mpz_t(), row[m - 1].get_mpz_t());
        }
        mpz_mul_ui(row[0].get_mpz_t(), row[0].get_mpz_t(), i);
        growth += std::bit_width(i) + 1;
        if (growth > 1024) {
            for (auto& c : row)
                reduce(c);
            growth = 0;
        }
        while (next < targets.size() && targets[next] == i) {
            out.push_back(row[degree]);
            reduce(out.back());
            ++next;
        }
    }
    return out;
}

} // namespace

Rational exact_H(std::uint64_t n, std::uint64_t k, const ExactLimits& limits)
{
    if (n == 0)
        throw DomainError("exact_H requires n >= 1");
    if (k > n)
        throw DomainError("exact_H requires k <= n");
    check_exact_cap(n, limits);
    HarmonicRow row(static_cast<unsigned>(k));
    while (row.n() < n)
        row.advance();
    return row.at(static_cast<unsigned>(k));
}

HarmonicRow::HarmonicRow(unsigned k) : row_(k + 1, Rational(0))
{
    row_[0] = 1;
}

void HarmonicRow::advance()
{
    ++n_;
    Rational inv(1, n_);
    for (std::size_t j = row_.size() - 1; j >= 1; --j)
        row_[j] += row_[j - 1] * inv;
}

mpz_class stirling(std::uint64_t n, std::uint64_t k, const ExactLimits& limits)
{
    if (k > n)
        throw DomainError("stirling requires k <= n");
    check_exact_cap(n, limits);
    if (k == 0)
        return n == 0 ? 1 : 0;
    // row[m] = s(i, m) as i grows; s(i+1, m) = s(i, m-1) + i s(i, m).
    std::vector<mpz_class> row(k + 1, 0);
    row[0] = 1;
    for (std::uint64_t i = 0; i < n; ++i) {
        for (std::size_t m = k; m >= 1; --m)
            row[m] = row[m - 1] + row[m] * i;
        row[0] = 0;
    }
    return row[k];
}

mpz_class stirling_mod(std::uint64_t n, std::uint64_t k, std::uint64_t p, std::uint64_t M,
                       const EscalationPolicy& policy)
{
    if (n == 0 || k == 0 || k > n)
        throw DomainError("stirling_mod requires 1 <= k <= n");
    if (p < 2)
        throw DomainError("base must be at least 2");
    check_modulus_budget(p, M, policy);
    // s(n, k) is the X^{k-1} coefficient of prod_{i=1}^{n-1} (X + i).
    const std::uint64_t target = n - 1;
    return sweep_coefficient(std::span(&target, 1), static_cast<unsigned>(k - 1), p, M).front();
}

std::uint64_t starting_guard(std::uint64_t n, std::uint64_t k, std::uint64_t p, const EscalationPolicy& policy)
{
    return (k + 1) * (floor_log(n, p) + 1) + policy.initial_guard;
}

Valuation vp_H(std::uint64_t n, std::uint64_t k, std::uint64_t p, const EscalationPolicy& policy)
{
    const std::uint64_t ns[] = {n};
    return Valuation::finite(vp_H_sweep(ns, k, p, policy).front());
}

std::vector<std::int64_t> vp_H_sweep(std::span<const std::uint64_t> ns, std::uint64_t k, std::uint64_t p,
                                     const EscalationPolicy& policy)
{
    require_prime(p);
    if (k == 0)
        throw DomainError("vp_H requires k >= 1");
    if (policy.growth_factor < 2 || policy.initial_guard == 0)
        throw DomainError("escalation policy needs initial_guard >= 1 and growth_factor >= 2");
    for (auto n : ns)
        if (n < k)
            throw DomainError("vp_H requires n >= k");

    std::map<std::uint64_t, std::int64_t> solved;
    std::vector<std::uint64_t> pending(ns.begin(), ns.end());
    std::sort(pending.begin(), pending.end());
    pending.erase(std::unique(pending.begin(), pending.end()), pending.end());

    for (std::uint64_t scale = 1; !pending.empty(); scale *= policy.growth_factor) {
        std::uint64_t M = 0;
        for (auto n : pending)
            M = std::max(M, vp_factorial(n, p) + starting_guard(n, k, p, policy) * scale);
        check_modulus_budget(p, M, policy);
        auto residues = sweep_coefficient(pending, static_cast<unsigned>(k), p, M);
        std::vector<std::uint64_t> unresolved;
        for (std::size_t i = 0; i < pending.size(); ++i) {
            if (residues[i] == 0) {
                unresolved.push_back(pending[i]);
                continue;
            }
            auto v = vp(residues[i], p).value();
            solved[pending[i]] = v - static_cast<std::int64_t>(vp_factorial(pending[i], p));
        }
        pending = std::move(unresolved);
    }

    std::vector<std::int64_t> out;
    out.reserve(ns.size());
    for (auto n : ns)
        out.push_back(solved.at(n));
    return out;
}

} // namespace stirval
