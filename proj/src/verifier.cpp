#include "stirval/verifier.hpp"

#include "stirval/digits.hpp"
#include "stirval/errors.hpp"
#include "stirval/expansion.hpp"
#include "stirval/harmonic.hpp"
#include "stirval/modring.hpp"
#include "stirval/structure.hpp"
#include "stirval/tree.hpp"
#include "stirval/valuation.hpp"

#include <gmpxx.h>
#include <mpfr.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>

namespace stirval {

using nlohmann::json;

namespace {

mpz_class power(std::uint64_t base, std::uint64_t e)
{
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), base, e);
    return r;
}

std::uint64_t draw(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi)
{
    return lo + rng() % (hi - lo + 1);
}

/// Digits of n start with the digits of k - 1 and extend them by at least one digit.
bool in_domain(std::uint64_t n, const StructureConstants& c)
{
    auto d = to_digits(n, c.p);
    return d.size() >= c.t + 2 && d.starts_with(c.root_digits);
}

/// Every k-subset of [1, n] bucketed by nu_p(product) and weighted by the inverse
/// of the product's free part, modulo p^M, for all n up to n_max in one pass.
class JTable {
public:
    JTable(std::uint64_t p, std::uint64_t k, unsigned M, std::uint64_t n_max)
        : p_(p), k_(k), ring_(p, M)
    {
        std::uint64_t top = 0;
        for (std::uint64_t q = p; q <= n_max; q *= p)
            ++top;
        width_ = static_cast<std::size_t>(k * top + 1);
        sum_.assign((k + 1) * width_, 0);
        seen_.assign((k + 1) * width_, false);
        sum_[0] = 1;
        seen_[0] = true;
    }

    /// Adds m = n + 1.
    void advance()
    {
        ++n_;
        const auto e = vp(n_, p_);
        const auto inv = ring_.inverse(free_part(n_, p_) % ring_.modulus());
        for (std::uint64_t c = k_; c >= 1; --c)
            for (std::size_t x = width_; x-- > 0;) {
                if (!seen(c - 1, x) || x + e >= width_)
                    continue;
                at(c, x + e) = ring_.add(at(c, x + e), ring_.mul(at(c - 1, x), inv));
                seen_[c * width_ + x + e] = true;
            }
    }

    /// V_p(n, k): the largest valuation carried by some k-subset.
    std::size_t max_valuation() const
    {
        for (std::size_t x = width_; x-- > 0;)
            if (seen(k_, x))
                return x;
        return 0;
    }

    /// J_p(n, k, v) = bucket V - v.
    std::uint64_t j(std::size_t v) const { return sum_[k_ * width_ + max_valuation() - v]; }

private:
    bool seen(std::uint64_t c, std::size_t x) const { return seen_[c * width_ + x]; }
    std::uint64_t& at(std::uint64_t c, std::size_t x) { return sum_[c * width_ + x]; }

    std::uint64_t p_, k_;
    PrimePowerRing ring_;
    std::size_t width_ = 0;
    std::uint64_t n_ = 0;
    std::vector<std::uint64_t> sum_;
    std::vector<bool> seen_;
};

/// (count - 1) < 1.5 y^{2/3}, exactly.
bool below_harm_bound(std::uint64_t count, std::uint64_t y)
{
    if (count == 0)
        return true;
    mpz_class c = count - 1;
    return 8 * c * c * c < 27 * mpz_class(y) * mpz_class(y);
}

/// Residues mod p of H_1..H_n (k = 1), with nu_p(H_v) < 0 marked as not p-integral.
struct HarmonicResidues {
    std::vector<bool> integral;
    std::vector<std::uint64_t> residue;
};

HarmonicResidues harmonic_residues(std::uint64_t p, std::uint64_t n)
{
    HarmonicResidues out{std::vector<bool>(n + 1, false), std::vector<std::uint64_t>(n + 1, 0)};
    mpq_class h = 0;
    for (std::uint64_t v = 1; v <= n; ++v) {
        h += mpq_class(1, v);
        mpz_class den = h.get_den();
        if (mpz_divisible_ui_p(den.get_mpz_t(), p))
            continue;
        mpz_class inv, mod = p;
        mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
        mpz_class r = h.get_num() * inv;
        mpz_mod(r.get_mpz_t(), r.get_mpz_t(), mod.get_mpz_t());
        out.integral[v] = true;
        out.residue[v] = r.get_ui();
    }
    return out;
}

std::uint64_t harm_window_count(const HarmonicResidues& h, std::uint64_t x, std::uint64_t y, std::uint64_t r)
{
    std::uint64_t count = 0;
    for (auto v = x; v <= x + y; ++v)
        count += h.integral[v] && h.residue[v] == r;
    return count;
}

void require_prime_param(std::uint64_t p)
{
    require_prime(p);
}

} // namespace

CheckReport check_structural_identities(const StructuralParams& params)
{
    CheckReport report;
    report.claim = "structural_identities";
    report.parameters = {{"primes", params.primes},         {"n_max", params.n_max},
                         {"k_max", params.k_max},           {"lemma1_n_max", params.lemma1_n_max},
                         {"legendre_n_max", params.legendre_n_max}};
    for (auto p : params.primes)
        require_prime_param(p);
    if (params.lemma1_n_max > 20)
        throw SizeError("Lemma 1 is checked by subset enumeration; keep n <= 20");

    // Lemma 1, with H(n, k) for every k at once from the 2^n subsets of [1, n].
    std::uint64_t lemma1 = 0;
    for (std::uint64_t n = 1; n <= params.lemma1_n_max && report.passed(); ++n) {
        std::vector<mpq_class> by_size(n + 1, 0);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            mpz_class prod = 1;
            for (std::uint64_t i = 0; i < n; ++i)
                if (mask >> i & 1)
                    prod *= static_cast<unsigned long>(i + 1);
            by_size[std::popcount(mask)] += mpq_class(1, prod);
        }
        mpz_class fact;
        mpz_fac_ui(fact.get_mpz_t(), n);
        for (std::uint64_t k = 0; k <= n; ++k) {
            by_size[k].canonicalize();
            ++lemma1;
            if (by_size[k] * fact != mpq_class(stirling(n + 1, k + 1)) || exact_H(n, k) != by_size[k]) {
                report.fail({{"identity", "lemma1"}, {"n", n}, {"k", k}, {"brute", by_size[k].get_str()},
                             {"exact_H", exact_H(n, k).get_str()}, {"stirling", stirling(n + 1, k + 1).get_str()}});
                break;
            }
        }
    }

    // Legendre against a running sum of nu_p(i).
    std::uint64_t legendre = 0;
    for (auto p : params.primes) {
        std::uint64_t running = 0;
        for (std::uint64_t n = 1; n <= params.legendre_n_max; ++n) {
            running += vp(n, p);
            ++legendre;
            if (vp_factorial(n, p) != running || (n - digit_sum(n, p)) / (p - 1) != running) {
                report.fail({{"identity", "legendre"}, {"p", p}, {"n", n}, {"brute", running}});
                break;
            }
        }
    }

    // Lemma 2: A_p(n, v) by block formula against filtering.
    std::uint64_t lemma2 = 0;
    for (auto p : params.primes)
        for (std::uint64_t n = 1; n <= params.n_max; ++n) {
            const auto s = to_digits(n, p).last_index();
            for (std::size_t v = 0; v <= s; ++v) {
                ++lemma2;
                if (a_p_set(n, v, p) != a_p_set_direct(n, v, p))
                    report.fail({{"identity", "lemma2"}, {"p", p}, {"n", n}, {"v", v}});
            }
        }

    // B_p telescoping, C_p cardinality, V_p maximality and J_p = H_p.
    std::uint64_t blocks = 0, cset = 0, vmax = 0, jcount = 0;
    for (auto p : params.primes)
        for (std::uint64_t k = 2; k <= params.k_max; ++k) {
            const auto c = constants(k, p);
            std::uint64_t total = 0;
            for (auto b : c.root_blocks)
                total += b;
            ++blocks;
            if (total != k - 1)
                report.fail({{"identity", "Bp_k_minus_1"}, {"p", p}, {"k", k}, {"sum", total}});

            const unsigned M = std::min<unsigned>(6, PrimePowerRing::max_exponent(p));
            const ExpansionContext ctx(k, p);
            JTable table(p, k, M, params.n_max);
            for (std::uint64_t n = 1; n <= params.n_max; ++n) {
                table.advance();
                if (n < k || !in_domain(n, c))
                    continue;
                const auto d = to_digits(n, p);
                const auto s = d.last_index();

                std::set<std::uint64_t> members;
                for (std::size_t v = 0; v <= c.t; ++v)
                    for (auto m : a_p_set(n, v, p))
                        members.insert(m);
                ++cset;
                if (members.size() != k - 1)
                    report.fail({{"identity", "Cp"}, {"p", p}, {"k", k}, {"n", n}, {"size", members.size()}});

                std::vector<unsigned> nus;
                for (std::uint64_t m = 1; m <= n; ++m)
                    nus.push_back(vp(m, p));
                std::sort(nus.rbegin(), nus.rend());
                std::int64_t best = 0;
                for (std::uint64_t i = 0; i < k; ++i)
                    best += nus[i];
                ++vmax;
                if (best != v_p_max(k, p, s) || table.max_valuation() != static_cast<std::size_t>(best))
                    report.fail({{"identity", "Vp"}, {"p", p}, {"k", k}, {"n", n}, {"brute", best},
                                 {"formula", v_p_max(k, p, s)}});

                for (std::size_t v = 0; v + c.t + 1 <= s; ++v) {
                    ++jcount;
                    auto expected = table.j(v);
                    auto got = ctx.h_p_mod(d.prefix(c.t + v + 2), M);
                    if (expected != got) {
                        report.fail({{"identity", "Jp_equals_Hp"}, {"p", p}, {"k", k}, {"n", n}, {"v", v},
                                     {"brute", expected}, {"h_p", got}, {"modulus_exponent", M}});
                        break;
                    }
                }
            }
        }

    report.observed = {{"lemma1", lemma1}, {"legendre", legendre}, {"lemma2", lemma2}, {"Bp_k_minus_1", blocks},
                       {"Cp", cset},       {"Vp", vmax},           {"Jp_equals_Hp", jcount}};
    report.bound = "every case equal";
    return report;
}

CheckReport check_lengyel_identity(std::uint64_t m_max)
{
    if (m_max < 2 || m_max > 40)
        throw DomainError("lengyel needs 2 <= m_max <= 40");
    CheckReport report;
    report.claim = "lengyel_identity";
    report.parameters = {{"m_max", m_max}};
    report.bound = "nu_2(H(2^m - 1, 2)) = 4 - 2m";
    std::vector<std::uint64_t> ns;
    for (std::uint64_t m = 2; m <= m_max; ++m)
        ns.push_back((std::uint64_t{1} << m) - 1);
    auto nus = vp_H_sweep(ns, 2, 2);
    json rows = json::array();
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const auto m = static_cast<std::int64_t>(i + 2);
        auto ex = vp_H_expansion(ns[i], 2, 2);
        rows.push_back({{"m", m}, {"valuation", nus[i]}, {"expansion_exact", ex.is_exact()}});
        if (ex.is_exact() ? ex.value != nus[i] : nus[i] < ex.value)
            report.fail({{"n", ns[i]}, {"k", 2}, {"p", 2}, {"stirling", nus[i]}, {"expansion", ex.value},
                         {"expansion_exact", ex.is_exact()}});
        else if (nus[i] != 4 - 2 * m)
            report.fail({{"m", m}, {"n", ns[i]}, {"valuation", nus[i]}, {"expected", 4 - 2 * m}});
    }
    report.observed = {{"values", rows}};
    return report;
}

CheckReport check_integral_scan(std::uint64_t n_max)
{
    if (n_max < 1)
        throw DomainError("integral scan needs n_max >= 1");
    if (n_max > ExactLimits{}.max_n)
        throw SizeError("integral scan is limited to n <= " + std::to_string(ExactLimits{}.max_n));
    CheckReport report;
    report.claim = "integral_scan";
    report.parameters = {{"n_max", n_max}};
    const json expected = json::array({json::array({1, 1}), json::array({3, 2})});
    report.bound = expected;
    json found = json::array();
    HarmonicRow row(static_cast<unsigned>(n_max));
    for (std::uint64_t n = 1; n <= n_max; ++n) {
        row.advance();
        for (std::uint64_t k = 1; k <= n; ++k)
            if (row.at(static_cast<unsigned>(k)).get_den() == 1)
                found.push_back(json::array({n, k}));
    }
    json within = json::array();
    for (auto& pair : expected)
        if (pair[0].get<std::uint64_t>() <= n_max)
            within.push_back(pair);
    report.observed = {{"integral_pairs", found}};
    if (found != within)
        report.fail({{"found", found}, {"expected", within}});
    return report;
}

CheckReport check_corollary_2adic(const CorollaryParams& params, std::uint64_t seed)
{
    if (params.n_max < 2)
        throw DomainError("corollary needs n_max >= 2");
    if (to_digits(params.n_max, 2).last_index() > params.terms)
        throw DomainError("corollary needs terms >= floor(log2 n_max)");
    CheckReport report;
    report.claim = "corollary_2adic";
    report.seed = seed;
    report.parameters = {{"terms", params.terms},
                         {"samples", params.samples},
                         {"n_max", params.n_max},
                         {"exact_max", params.exact_max}};
    report.bound = "full match: nu >= 1 - s; first mismatch at r: nu = r - 2s";

    const auto f = f_sequence(params.terms);
    std::string bits;
    for (auto b : f)
        bits += static_cast<char>('0' + b);

    std::mt19937_64 rng(seed);
    std::vector<std::uint64_t> ns{4, 6, 7};
    for (std::size_t i = 0; i < params.samples; ++i)
        ns.push_back(draw(rng, 2, params.n_max));
    auto nus = vp_H_sweep(ns, 2, 2);

    // Exact rationals for the small samples, in one pass of H(n, 2).
    std::map<std::uint64_t, std::int64_t> exact;
    for (auto n : ns)
        if (n <= params.exact_max)
            exact[n] = 0;
    if (!exact.empty()) {
        HarmonicRow row(2);
        auto it = exact.begin();
        while (it != exact.end()) {
            row.advance();
            if (row.n() == it->first) {
                it->second = vp(row.at(2), 2).value();
                ++it;
            }
        }
    }

    std::uint64_t matched = 0, mismatched = 0, cross = 0;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const auto n = ns[i];
        const auto d = to_digits(n, 2);
        const auto s = static_cast<std::int64_t>(d.last_index());
        std::optional<std::int64_t> r;
        for (std::size_t j = 0; j < d.size() && !r; ++j)
            if (d[j] != static_cast<std::uint32_t>(f[j]))
                r = static_cast<std::int64_t>(j);
        if (auto e = exact.find(n); e != exact.end()) {
            ++cross;
            if (e->second != nus[i]) {
                report.fail({{"n", n}, {"k", 2}, {"p", 2}, {"stirling", nus[i]}, {"exact", e->second}});
                continue;
            }
        }
        if (r) {
            ++mismatched;
            if (nus[i] != *r - 2 * s)
                report.fail({{"n", n}, {"item", "ii"}, {"r", *r}, {"s", s}, {"valuation", nus[i]},
                             {"expected", *r - 2 * s}});
        } else {
            ++matched;
            if (nus[i] < 1 - s)
                report.fail({{"n", n}, {"item", "i"}, {"s", s}, {"valuation", nus[i]}, {"bound", 1 - s}});
        }
    }
    report.observed = {{"f", bits},
                       {"samples_checked", ns.size()},
                       {"full_match", matched},
                       {"first_mismatch", mismatched},
                       {"exact_cross_checks", cross}};
    return report;
}

CheckReport check_engines(const EngineParams& params, std::uint64_t seed)
{
    if (params.primes.empty() || params.k_max < 2 || params.n_max < 1)
        throw DomainError("engines needs primes, k_max >= 2 and n_max >= 1");
    if (params.n_max > ExactLimits{}.max_n)
        throw SizeError("engines compares exact rationals only for n <= " + std::to_string(ExactLimits{}.max_n));
    if (params.sample_n_max < 2)
        throw DomainError("engines needs sample_n_max >= 2");
    for (auto p : params.primes)
        require_prime(p);
    CheckReport report;
    report.claim = "cross_engine_equivalence";
    report.seed = seed;
    report.parameters = {{"primes", params.primes},         {"n_max", params.n_max},
                         {"k_max", params.k_max},           {"samples", params.samples},
                         {"sample_n_max", params.sample_n_max}};
    report.bound = "stirling = exact; expansion exact verdicts = stirling; lower bounds <= stirling";

    // (a) every k <= n <= n_max, k <= k_max.
    std::vector<std::vector<Rational>> exact{{}};
    HarmonicRow row(static_cast<unsigned>(params.k_max));
    for (std::uint64_t n = 1; n <= params.n_max; ++n) {
        row.advance();
        exact.emplace_back();
        for (unsigned j = 0; j <= params.k_max; ++j)
            exact.back().push_back(row.at(j));
    }
    std::uint64_t exhaustive = 0;
    for (auto p : params.primes) {
        for (std::uint64_t k = 1; k <= params.k_max && k <= params.n_max; ++k) {
            std::vector<std::uint64_t> ns;
            for (auto n = k; n <= params.n_max; ++n)
                ns.push_back(n);
            auto nus = vp_H_sweep(ns, k, p);
            for (std::size_t i = 0; i < ns.size(); ++i) {
                auto e = vp(exact[ns[i]][k], p).value();
                ++exhaustive;
                if (e != nus[i])
                    report.fail({{"n", ns[i]}, {"k", k}, {"p", p}, {"stirling", nus[i]}, {"exact", e}});
            }
        }
    }

    // (b) rejection-sample (n, k, p) whose digits extend the root of T_p(k).
    std::mt19937_64 rng(seed);
    std::map<std::pair<std::uint64_t, std::uint64_t>, std::vector<std::uint64_t>> drawn;
    std::size_t got = 0, attempts = 0;
    while (got < params.samples) {
        if (++attempts > 1000 * (params.samples + 1))
            throw DomainError("engines: too few prefix-valid triples below sample_n_max");
        auto p = params.primes[draw(rng, 0, params.primes.size() - 1)];
        auto k = draw(rng, 2, params.k_max);
        auto n = draw(rng, 1, params.sample_n_max);
        if (!in_domain(n, constants(k, p)))
            continue;
        drawn[{k, p}].push_back(n);
        ++got;
    }
    std::uint64_t exact_verdicts = 0, lower_bounds = 0;
    for (auto& [kp, ns] : drawn) {
        auto [k, p] = kp;
        auto nus = vp_H_sweep(ns, k, p);
        for (std::size_t i = 0; i < ns.size(); ++i) {
            auto ex = vp_H_expansion(ns[i], k, p);
            (ex.is_exact() ? exact_verdicts : lower_bounds)++;
            if (ex.is_exact() ? ex.value != nus[i] : nus[i] < ex.value)
                report.fail({{"n", ns[i]}, {"k", k}, {"p", p}, {"stirling", nus[i]}, {"expansion", ex.value},
                             {"expansion_exact", ex.is_exact()}});
        }
    }
    report.observed = {{"exhaustive_cases", exhaustive},
                       {"sampled_triples", got},
                       {"expansion_exact", exact_verdicts},
                       {"expansion_lower_bound", lower_bounds}};
    return report;
}

CheckReport check_ubound(std::uint64_t p, std::uint64_t k, std::uint64_t x)
{
    const auto c = constants(k, p);
    const auto start = (k - 1) * p;
    if (x < start)
        throw DomainError("ubound needs x >= (k - 1) p");
    CheckReport report;
    report.claim = "theorem3_ubound";
    report.parameters = {{"p", p}, {"k", k}, {"x", x}};
    report.bound = "exceptions <= 3 x^0.835";

    BuildOptions options;
    options.max_depth = to_digits(x, p).size() - c.t - 1;
    const auto tree = build_tree(p, k, options);
    std::vector<std::set<std::uint64_t>> nodes;
    for (auto& level : tree.levels) {
        nodes.emplace_back();
        for (auto& node : level)
            nodes.back().insert(node.digits.value());
    }

    std::vector<std::uint64_t> ns;
    for (auto n = start; n <= x; ++n)
        if (in_domain(n, c))
            ns.push_back(n);
    auto nus = vp_H_sweep(ns, k, p);

    std::uint64_t exceptions = 0, leaf_exits = 0;
    json exception_list = json::array();
    const mpz_class km1_pow = power(k - 1, k - 1);
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const auto n = ns[i];
        const auto d = to_digits(n, p);
        bool full_chain = true;
        for (std::size_t len = c.t + 2; len <= d.size(); ++len) {
            const auto u = len - c.t - 1;
            if (u >= nodes.size() || !nodes[u].contains(prefix_value(d, len))) {
                full_chain = false;
                break;
            }
        }
        // nu < -(k-1)(log_p n - log_p(k-1) - 1)  <=>  (k-1)^{k-1} p^{k-1-nu} > n^{k-1}.
        const auto e = static_cast<std::int64_t>(k) - 1 - nus[i];
        mpz_class lhs = km1_pow, rhs = power(n, k - 1);
        if (e >= 0)
            lhs *= power(p, static_cast<std::uint64_t>(e));
        else
            rhs *= power(p, static_cast<std::uint64_t>(-e));
        const bool strict = lhs > rhs;
        if (!full_chain)
            ++leaf_exits;
        if (!strict) {
            ++exceptions;
            if (exception_list.size() < 64)
                exception_list.push_back(n);
            if (!full_chain)
                report.fail({{"n", n}, {"k", k}, {"p", p}, {"valuation", nus[i]},
                             {"reason", "chain exits the tree but the inequality fails"}});
        }
    }
    // count <= 3 x^0.835  <=>  count^200 <= 3^200 x^167
    mpz_class count_pow = power(exceptions, 200);
    mpz_class limit = power(3, 200) * power(x, 167);
    if (count_pow > limit)
        report.fail({{"exceptions", exceptions}, {"reason", "more than 3 x^0.835 exceptions"}});
    report.observed = {{"candidates", ns.size()},
                       {"leaf_exits", leaf_exits},
                       {"exceptions", exceptions},
                       {"exception_sample", exception_list},
                       {"tree_nodes", tree.node_count()},
                       {"tree_status", to_string(tree.status)},
                       {"three_x_0835", 3.0 * std::pow(static_cast<double>(x), 0.835)}};
    return report;
}

CheckReport check_harm_count(std::uint64_t p, std::uint64_t x, std::uint64_t y, std::uint64_t r)
{
    require_prime_param(p);
    if (x < 1 || y < 1 || y >= p || r >= p)
        throw DomainError("harm_count needs x >= 1, 1 <= y < p and r < p");
    CheckReport report;
    report.claim = "lemma4_harm_count";
    report.parameters = {{"p", p}, {"x", x}, {"y", y}, {"r", r}};
    report.bound = "count < 1.5 y^(2/3) + 1";
    auto h = harmonic_residues(p, x + y);
    auto count = harm_window_count(h, x, y, r);
    report.observed = {{"count", count}};
    if (!below_harm_bound(count, y))
        report.fail({{"x", x}, {"y", y}, {"r", r}, {"count", count}});
    return report;
}

CheckReport check_harm_count_suite(std::uint64_t p, std::size_t cases, std::uint64_t x_max, std::uint64_t seed)
{
    require_prime_param(p);
    if (x_max < 1)
        throw DomainError("harm_count needs x_max >= 1");
    CheckReport report;
    report.claim = "lemma4_harm_count";
    report.seed = seed;
    report.parameters = {{"p", p}, {"cases", cases}, {"x_max", x_max}};
    report.bound = "count < 1.5 y^(2/3) + 1";
    auto h = harmonic_residues(p, x_max + p);
    std::mt19937_64 rng(seed);
    std::uint64_t largest = 0, hits = 0;
    // Few H_v are p-integral, so windows are placed around one of them and r is
    // taken from its residue; otherwise almost every count would be zero.
    std::vector<std::uint64_t> integral;
    for (std::uint64_t v = 1; v <= x_max; ++v)
        if (h.integral[v])
            integral.push_back(v);
    for (std::size_t i = 0; i < cases; ++i) {
        auto y = draw(rng, 1, p - 1);
        auto anchor = integral[draw(rng, 0, integral.size() - 1)];
        auto x = anchor - std::min(anchor - 1, draw(rng, 0, y));
        auto r = h.residue[anchor];
        auto count = harm_window_count(h, x, y, r);
        largest = std::max(largest, count);
        hits += count;
        if (!below_harm_bound(count, y))
            report.fail({{"x", x}, {"y", y}, {"r", r}, {"count", count}});
    }
    report.observed = {{"cases", cases}, {"max_count", largest}, {"total_hits", hits}};
    return report;
}

CheckReport check_cpicong(std::uint64_t p, std::size_t q_samples, std::size_t a_samples, std::uint64_t seed)
{
    require_prime_param(p);
    CheckReport report;
    report.claim = "lemma5_cpicong";
    report.seed = seed;
    report.parameters = {{"p", p}, {"q_samples", q_samples}, {"a_samples", a_samples}};
    report.bound = "count < p^0.835, count <= ceil(p/2), count <= 3((p-2)/2)^(2/3) + 2, no consecutive d";

    const PrimePowerRing ring(p, 1);
    std::mt19937_64 rng(seed);
    // q = num/den with p not dividing den, so nu_p(q) >= 0; only q mod p matters.
    std::vector<std::pair<std::uint64_t, std::uint64_t>> qs{{0, 1}};
    for (std::size_t i = 0; i < q_samples; ++i) {
        std::uint64_t den;
        do
            den = draw(rng, 1, 1000000);
        while (den % p == 0);
        qs.emplace_back(draw(rng, 0, 1000000), den);
    }
    std::vector<std::uint64_t> as{1};
    for (std::size_t i = 0; i < a_samples; ++i)
        as.push_back(draw(rng, 1, 1000000));

    const mpz_class p167 = power(p, 167);
    const mpz_class p2 = mpz_class(p - 2) * mpz_class(p - 2);
    std::uint64_t largest = 0, pairs = 0;
    for (auto [num, den] : qs) {
        const auto q = ring.mul(num % p, ring.inverse(den % p));
        for (auto a : as) {
            // c_p(a) from the closed form, then successive non-multiples of p.
            auto c = a + (a - 1) / (p - 1);
            std::uint64_t sum = 0, count = 0;
            bool previous = false, consecutive = false;
            for (std::uint64_t d = 0; d < p; ++d) {
                if (d > 0)
                    do
                        ++c;
                    while (c % p == 0);
                sum = ring.add(sum, ring.inverse(c % p));
                const bool hit = sum == q;
                count += hit;
                consecutive = consecutive || (hit && previous);
                previous = hit;
            }
            ++pairs;
            largest = std::max(largest, count);
            const bool below_exponent = power(count, 200) < p167;
            const bool below_half = count <= (p + 1) / 2;
            const bool below_lemma4 = count <= 2 || 4 * power(count - 2, 3) <= 27 * p2;
            if (!below_exponent || !below_half || !below_lemma4 || consecutive)
                report.fail({{"q", json::array({num, den})}, {"a", a}, {"count", count},
                             {"below_p_0835", below_exponent}, {"below_half", below_half},
                             {"below_lemma4", below_lemma4}, {"consecutive", consecutive}});
        }
    }
    report.observed = {{"pairs", pairs}, {"max_count", largest}};
    return report;
}

namespace {

/// g(p) = log_p min(3((p-2)/2)^{2/3} + 2, ceil(p/2)) at `bits` of precision.
void exponent_of(mpfr_t out, std::uint64_t p, mpfr_prec_t bits)
{
    mpfr_t a, b, lp;
    mpfr_inits2(bits, a, b, lp, static_cast<mpfr_ptr>(nullptr));
    mpfr_set_ui(a, p - 2, MPFR_RNDN);
    mpfr_div_ui(a, a, 2, MPFR_RNDN);
    mpfr_set_ui(b, 2, MPFR_RNDN);
    mpfr_div_ui(b, b, 3, MPFR_RNDN);
    mpfr_pow(a, a, b, MPFR_RNDN);
    mpfr_mul_ui(a, a, 3, MPFR_RNDN);
    mpfr_add_ui(a, a, 2, MPFR_RNDN);
    mpfr_set_ui(b, (p + 1) / 2, MPFR_RNDN);
    mpfr_min(a, a, b, MPFR_RNDN);
    mpfr_log(a, a, MPFR_RNDN);
    mpfr_set_ui(lp, p, MPFR_RNDN);
    mpfr_log(lp, lp, MPFR_RNDN);
    mpfr_div(out, a, lp, MPFR_RNDN);
    mpfr_clears(a, b, lp, static_cast<mpfr_ptr>(nullptr));
}

std::string decimal(const mpfr_t x)
{
    char buf[64];
    mpfr_snprintf(buf, sizeof buf, "%.15Rf", x);
    return buf;
}

} // namespace

CheckReport check_p59_exponent(std::uint64_t prime_bound)
{
    if (prime_bound < 59)
        throw DomainError("p59 needs prime_bound >= 59");
    CheckReport report;
    report.claim = "lemma5_p59_exponent";
    report.parameters = {{"prime_bound", prime_bound}};
    report.bound = "argmax = 59 and g(59) < 0.835";

    std::vector<std::uint64_t> primes;
    for (std::uint64_t p = 2; p <= prime_bound; ++p)
        if (is_prime(p))
            primes.push_back(p);

    // Escalate precision until the winner's lead and the 0.835 comparison both
    // clear a margin far above the working precision.
    for (mpfr_prec_t bits = 64;; bits *= 2) {
        mpfr_t best, second, g, g59, margin, threshold;
        mpfr_inits2(bits, best, second, g, g59, margin, threshold, static_cast<mpfr_ptr>(nullptr));
        mpfr_set_si(best, -1, MPFR_RNDN);
        mpfr_set_si(second, -1, MPFR_RNDN);
        std::uint64_t argmax = 0;
        for (auto p : primes) {
            exponent_of(g, p, bits);
            if (p == 59)
                mpfr_set(g59, g, MPFR_RNDN);
            if (mpfr_greater_p(g, best)) {
                mpfr_set(second, best, MPFR_RNDN);
                mpfr_set(best, g, MPFR_RNDN);
                argmax = p;
            } else if (mpfr_greater_p(g, second)) {
                mpfr_set(second, g, MPFR_RNDN);
            }
        }
        mpfr_set_ui(threshold, 167, MPFR_RNDN);
        mpfr_div_ui(threshold, threshold, 200, MPFR_RNDN);
        mpfr_sub(margin, threshold, g59, MPFR_RNDN);
        mpfr_t lead;
        mpfr_init2(lead, bits);
        mpfr_sub(lead, best, second, MPFR_RNDN);
        // Both gaps must exceed 2^{-bits/2} to be trusted at this precision.
        const long guard = -static_cast<long>(bits / 2);
        const bool decided = mpfr_cmp_ui_2exp(lead, 1, guard) > 0 && mpfr_cmp_ui_2exp(margin, 1, guard) > 0;
        const bool negative_margin = mpfr_sgn(margin) < 0 && mpfr_cmpabs(margin, lead) >= 0;
        if (decided || negative_margin || bits >= 4096) {
            report.observed = {{"argmax", argmax},
                               {"g_argmax", decimal(best)},
                               {"g_59", decimal(g59)},
                               {"lead_over_runner_up", decimal(lead)},
                               {"precision_bits", bits}};
            if (!decided && !negative_margin)
                report.fail({{"reason", "precision escalation exhausted"}});
            else if (argmax != 59 || mpfr_sgn(margin) <= 0)
                report.fail({{"argmax", argmax}, {"g_59", decimal(g59)}});
            mpfr_clears(best, second, g, g59, margin, threshold, lead, static_cast<mpfr_ptr>(nullptr));
            return report;
        }
        mpfr_clears(best, second, g, g59, margin, threshold, lead, static_cast<mpfr_ptr>(nullptr));
    }
}

CheckReport monitor_lower_bound(std::uint64_t p, std::uint64_t k, std::uint64_t n_max)
{
    require_prime_param(p);
    if (k < 1 || n_max < k)
        throw DomainError("monitor needs 1 <= k <= n_max");
    CheckReport report;
    report.claim = "lengyel_lower_bound_monitor";
    report.verdict = Verdict::info;
    report.parameters = {{"p", p}, {"k", k}, {"n_max", n_max}};
    std::vector<std::uint64_t> ns;
    for (auto n = k; n <= n_max; ++n)
        ns.push_back(n);
    auto nus = vp_H_sweep(ns, k, p);
    double best = std::numeric_limits<double>::infinity();
    std::uint64_t argmin = 0;
    bool monotone = true;
    double previous = best;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        const double value = static_cast<double>(nus[i])
                             + static_cast<double>(k) * std::log(static_cast<double>(ns[i])) / std::log(static_cast<double>(p));
        if (value < best) {
            best = value;
            argmin = ns[i];
        }
        monotone = monotone && best <= previous;
        previous = best;
    }
    report.observed = {{"min_nu_plus_k_log_p_n", best}, {"argmin", argmin}, {"prefix_minimum_non_increasing", monotone}};
    report.bound = "none stated (O_k(1))";
    return report;
}

const std::vector<std::string>& check_names()
{
    static const std::vector<std::string> names{"structural", "lengyel", "integral", "corollary", "engines",
                                                "ubound",     "harm_count", "cpicong",  "p59",      "monitor",   "ptree"};
    return names;
}

namespace {

class Params {
public:
    Params(const json& j, std::string check) : j_(j.is_null() ? json::object() : j), check_(std::move(check))
    {
        if (!j_.is_object())
            throw DomainError(check_ + ": parameters must be a JSON object");
    }

    std::uint64_t u64(const std::string& key, std::uint64_t fallback)
    {
        used_.insert(key);
        if (!j_.contains(key))
            return fallback;
        const auto& v = j_[key];
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0))
            throw DomainError(check_ + ": parameter '" + key + "' must be a nonnegative integer");
        return v.get<std::uint64_t>();
    }

    std::uint64_t required(const std::string& key)
    {
        if (!j_.contains(key))
            throw DomainError(check_ + ": missing parameter '" + key + "'");
        return u64(key, 0);
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    std::string str(const std::string& key, const std::string& fallback)
    {
        used_.insert(key);
        if (!j_.contains(key))
            return fallback;
        if (!j_[key].is_string())
            throw DomainError(check_ + ": parameter '" + key + "' must be a string");
        return j_[key].get<std::string>();
    }

    std::vector<std::uint64_t> list(const std::string& key, std::vector<std::uint64_t> fallback)
    {
        used_.insert(key);
        if (!j_.contains(key))
            return fallback;
        try {
            return j_[key].get<std::vector<std::uint64_t>>();
        } catch (const json::exception&) {
            throw DomainError(check_ + ": parameter '" + key + "' must be a list of integers");
        }
    }

    void finish() const
    {
        for (auto& [key, value] : j_.items())
            if (!used_.contains(key))
                throw DomainError(check_ + ": unknown parameter '" + key + "'");
    }

private:
    json j_;
    std::string check_;
    std::set<std::string> used_;
};

std::uint64_t need_seed(const std::string& name, std::optional<std::uint64_t> seed)
{
    if (!seed)
        throw DomainError(name + " is randomized and requires an explicit seed");
    return *seed;
}

} // namespace

CheckReport run_check(const std::string& name, const json& params, std::optional<std::uint64_t> seed)
{
    Params in(params, name);
    if (name == "structural") {
        StructuralParams sp;
        sp.primes = in.list("primes", sp.primes);
        sp.n_max = in.u64("n_max", sp.n_max);
        sp.k_max = in.u64("k_max", sp.k_max);
        sp.lemma1_n_max = in.u64("lemma1_n_max", sp.lemma1_n_max);
        sp.legendre_n_max = in.u64("legendre_n_max", sp.legendre_n_max);
        in.finish();
        return check_structural_identities(sp);
    }
    if (name == "lengyel") {
        auto m = in.u64("m_max", 12);
        in.finish();
        return check_lengyel_identity(m);
    }
    if (name == "integral") {
        auto n = in.u64("n_max", 40);
        in.finish();
        return check_integral_scan(n);
    }
    if (name == "corollary") {
        CorollaryParams cp;
        cp.terms = in.u64("terms", cp.terms);
        cp.samples = in.u64("samples", cp.samples);
        cp.n_max = in.u64("n_max", cp.n_max);
        cp.exact_max = in.u64("exact_max", cp.exact_max);
        in.finish();
        return check_corollary_2adic(cp, need_seed(name, seed));
    }
    if (name == "engines") {
        EngineParams ep;
        ep.primes = in.list("primes", ep.primes);
        ep.n_max = in.u64("n_max", ep.n_max);
        ep.k_max = in.u64("k_max", ep.k_max);
        ep.samples = in.u64("samples", ep.samples);
        ep.sample_n_max = in.u64("sample_n_max", ep.sample_n_max);
        in.finish();
        return check_engines(ep, need_seed(name, seed));
    }
    if (name == "ubound") {
        auto p = in.required("p");
        auto k = in.required("k");
        auto x = in.required("x");
        in.finish();
        return check_ubound(p, k, x);
    }
    if (name == "harm_count") {
        auto p = in.required("p");
        if (in.has("cases")) {
            auto cases = in.u64("cases", 100);
            auto x_max = in.u64("x_max", 2000);
            in.finish();
            return check_harm_count_suite(p, cases, x_max, need_seed(name, seed));
        }
        auto x = in.required("x");
        auto y = in.required("y");
        auto r = in.u64("r", 0);
        in.finish();
        return check_harm_count(p, x, y, r);
    }
    if (name == "cpicong") {
        auto p = in.required("p");
        auto qs = in.u64("q_samples", 20);
        auto as = in.u64("a_samples", 10);
        in.finish();
        return check_cpicong(p, qs, as, need_seed(name, seed));
    }
    if (name == "p59") {
        auto bound = in.u64("prime_bound", 1000);
        in.finish();
        return check_p59_exponent(bound);
    }
    if (name == "monitor") {
        auto p = in.required("p");
        auto k = in.required("k");
        auto n = in.required("n_max");
        in.finish();
        return monitor_lower_bound(p, k, n);
    }
    if (name == "ptree") {
        auto p = in.required("p");
        auto k = in.required("k");
        BuildOptions options;
        options.max_depth = in.u64("max_depth", options.max_depth);
        options.engine = parse_engine(in.str("engine", "both"));
        in.finish();
        auto report = validate_ptree(build_tree(p, k, options));
        report.parameters["engine"] = to_string(options.engine);
        return report;
    }
    std::string known;
    for (auto& n : check_names())
        known += (known.empty() ? "" : ", ") + n;
    throw DomainError("unknown check '" + name + "'; valid checks: " + known);
}

} // namespace stirval
