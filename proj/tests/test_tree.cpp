#include "doctest.h"

#include "stirval/errors.hpp"
#include "stirval/expansion.hpp"
#include "stirval/harmonic.hpp"
#include "stirval/tree.hpp"

#include <random>

using namespace stirval;

namespace {

BuildOptions with(Engine engine, std::size_t depth = 32, unsigned workers = 1)
{
    BuildOptions o;
    o.engine = engine;
    o.max_depth = depth;
    o.workers = workers;
    return o;
}

std::vector<std::vector<std::uint32_t>> flatten(const PTree& t)
{
    std::vector<std::vector<std::uint32_t>> out;
    for (auto& level : t.levels)
        for (auto& node : level)
            out.push_back(node.digits.digits());
    out.push_back({});
    for (auto& leaf : t.leaves) {
        out.push_back(leaf.digits.digits());
        out.back().push_back(static_cast<std::uint32_t>(leaf.valuation + 1000));
    }
    return out;
}

/// Index of the last digit of the deepest prefix of d that is a node, and whether
/// the next prefix is a leaf (the chain exits there).
struct Chain {
    std::size_t deepest_node;
    bool exits;
    std::size_t leaf_index;
};

Chain chain_of(const PTree& tree, const DigitString& d)
{
    const auto t = tree.constants.t;
    Chain c{t, false, 0};
    for (std::size_t u = 1; u < tree.levels.size() && t + u < d.size(); ++u) {
        auto prefix = d.prefix(t + u + 1);
        bool found = false;
        for (auto& node : tree.levels[u])
            found = found || node.digits == prefix;
        if (!found)
            break;
        c.deepest_node = t + u;
    }
    if (c.deepest_node + 1 < d.size()) {
        auto next = d.prefix(c.deepest_node + 2);
        for (auto& leaf : tree.leaves)
            if (leaf.digits == next) {
                c.exits = true;
                c.leaf_index = c.deepest_node + 1;
            }
    }
    return c;
}

} // namespace

TEST_CASE("cardinalities of the base-3 trees")
{
    const std::size_t expected[] = {8, 24, 16, 7, 23};
    for (std::uint64_t k = 2; k <= 6; ++k) {
        auto tree = build_tree(3, k, with(Engine::expansion));
        CHECK(tree.status == PTree::Status::complete);
        CHECK(tree.node_count() == expected[k - 2]);
        CHECK(validate_ptree(tree).passed());
    }
    for (std::uint64_t k : {2, 4, 5}) {
        auto tree = build_tree(3, k, with(Engine::both));
        CHECK(tree.node_count() == expected[k - 2]);
        for (auto& check : tree.checks)
            CHECK(check.mode == LevelCheck::Mode::full);
    }
}

TEST_CASE("T_2(2) is a chain following the f-sequence")
{
    auto tree = build_tree(2, 2, with(Engine::both, 20));
    CHECK(tree.status == PTree::Status::truncated);
    REQUIRE(tree.levels.size() == 21);
    auto f = f_sequence(20);
    for (std::size_t u = 0; u <= 20; ++u) {
        REQUIRE(tree.levels[u].size() == 1);
        CHECK(tree.levels[u][0].digits.digits().back() == static_cast<std::uint32_t>(f[u]));
    }
    CHECK(tree.levels[1][0].digits == DigitString(2, {1, 1}));
    CHECK(tree.levels[2][0].digits == DigitString(2, {1, 1, 0}));

    auto stats = child_stats(tree);
    CHECK(stats.counts.size() == 20);
    CHECK(stats.min_children == 1);
    CHECK(stats.max_children == 1);
}

TEST_CASE("f-sequence")
{
    CHECK(f_sequence(0) == std::vector<int>{1});
    CHECK(f_sequence(2) == std::vector<int>{1, 1, 0});
    auto f = f_sequence(20);
    CHECK(f.size() == 21);
    CHECK(f[0] == 1);
}

TEST_CASE("child statistics")
{
    auto t32 = build_tree(3, 2, with(Engine::expansion));
    auto stats = child_stats(t32);
    CHECK(stats.max_children <= 2);
    CHECK(stats.min_children == 0);
    CHECK(stats.counts.size() == 8);

    auto root_only = build_tree(3, 2, with(Engine::expansion, 0));
    CHECK(root_only.status == PTree::Status::truncated);
    CHECK(child_stats(root_only).counts.empty());
    CHECK_FALSE(child_stats(root_only).max_children.has_value());

    CHECK_THROWS_AS(child_stats(PTree{}), DomainError);
}

TEST_CASE("Sigma membership agrees with the valuation inequality")
{
    // Both constructions independently, then every explored string against sigma_mod.
    for (std::uint64_t p : {2, 3})
        for (std::uint64_t k = 2; k <= 7; ++k) {
            auto by_sigma = build_tree(p, k, with(Engine::expansion, 8));
            auto by_stirling = build_tree(p, k, with(Engine::stirling, 8));
            REQUIRE(flatten(by_sigma) == flatten(by_stirling));

            const auto& c = by_sigma.constants;
            std::vector<std::uint64_t> ns;
            std::vector<std::pair<DigitString, bool>> strings;
            for (std::size_t u = 1; u < by_sigma.levels.size(); ++u)
                for (auto& node : by_sigma.levels[u])
                    strings.emplace_back(node.digits, true);
            for (auto& leaf : by_sigma.leaves)
                strings.emplace_back(leaf.digits, false);
            for (auto& [d, member] : strings)
                ns.push_back(d.value());
            auto nus = vp_H_sweep(ns, k, p);
            for (std::size_t i = 0; i < strings.size(); ++i) {
                const auto& d = strings[i].first;
                const auto u = d.size() - c.t - 1;
                const auto s = static_cast<std::int64_t>(d.last_index());
                const bool by_valuation = nus[i] >= static_cast<std::int64_t>(c.W) - static_cast<std::int64_t>(k - 1) * s + 1;
                // A string at level u is a node iff p^u divides its Sigma.
                const bool by_sum = PrimePowerRing(p, static_cast<unsigned>(u)).valuation(
                                        sigma_mod(d, k, static_cast<unsigned>(u)))
                                    >= u;
                REQUIRE(by_valuation == strings[i].second);
                REQUIRE(by_sum == strings[i].second);
            }
        }
}

TEST_CASE("Theorem 1 on seeded random n")
{
    std::mt19937_64 rng(7177);
    struct Params {
        std::uint64_t p, k;
    };
    const Params params[] = {{2, 2}, {2, 3}, {3, 2}, {3, 3}, {3, 4}, {5, 2}, {2, 5}};
    struct Sample {
        std::uint64_t n;
        Chain chain;
    };
    std::vector<PTree> trees;
    std::vector<std::vector<Sample>> samples(std::size(params));
    for (auto [p, k] : params)
        trees.push_back(build_tree(p, k, with(Engine::expansion, 16)));

    std::size_t inside = 0, exiting = 0;
    for (int attempt = 0; attempt < 200000 && (inside < 200 || exiting < 200); ++attempt) {
        const auto choice = rng() % std::size(params);
        const auto& c = trees[choice].constants;
        auto n = 1 + rng() % 6000;
        auto d = to_digits(n, c.p);
        if (!d.starts_with(c.root_digits) || d.size() < c.t + 2)
            continue;
        auto chain = chain_of(trees[choice], d);
        auto& counter = chain.exits ? exiting : inside;
        if (counter >= 200)
            continue;
        ++counter;
        samples[choice].push_back({n, chain});
    }
    CHECK(inside == 200);
    CHECK(exiting == 200);

    for (std::size_t i = 0; i < std::size(params); ++i) {
        const auto& c = trees[i].constants;
        std::vector<std::uint64_t> ns;
        for (auto& sample : samples[i])
            ns.push_back(sample.n);
        auto nus = vp_H_sweep(ns, c.k, c.p);
        for (std::size_t j = 0; j < ns.size(); ++j) {
            const auto& chain = samples[i][j].chain;
            const auto s = static_cast<std::int64_t>(to_digits(ns[j], c.p).last_index());
            const auto base = static_cast<std::int64_t>(c.W) - static_cast<std::int64_t>(c.k) * s;
            if (chain.exits)
                REQUIRE(nus[j] == base + static_cast<std::int64_t>(chain.leaf_index));
            else
                REQUIRE(nus[j] >= base + static_cast<std::int64_t>(chain.deepest_node) + 1);
        }
    }
}

TEST_CASE("builds do not depend on the worker count")
{
    for (std::uint64_t k : {3, 6}) {
        auto one = build_tree(3, k, with(Engine::expansion, 32, 1));
        auto many = build_tree(3, k, with(Engine::expansion, 32, 5));
        CHECK(flatten(one) == flatten(many));
    }
    auto one = build_tree(5, 4, with(Engine::both, 6, 1));
    auto many = build_tree(5, 4, with(Engine::both, 6, 3));
    CHECK(flatten(one) == flatten(many));
}

TEST_CASE("validate_ptree reports the first violated axiom")
{
    auto tree = build_tree(3, 3, with(Engine::expansion));
    REQUIRE(validate_ptree(tree).passed());
    REQUIRE(tree.levels.size() > 3);

    auto orphaned = tree;
    // Drop a level-2 node that has children.
    for (std::size_t i = 0; i < orphaned.levels[2].size(); ++i) {
        bool has_child = false;
        for (auto& child : orphaned.levels[3])
            has_child = has_child || child.parent == i;
        if (has_child) {
            orphaned.levels[2].erase(orphaned.levels[2].begin() + static_cast<std::ptrdiff_t>(i));
            break;
        }
    }
    auto r3 = validate_ptree(orphaned);
    CHECK(r3.verdict == Verdict::fail);
    CHECK(r3.witness["axiom"] == "T3");

    auto mutated = tree;
    auto digits = mutated.levels[2][0].digits.digits();
    digits[0] = digits[0] == 1 ? 2 : 1;
    mutated.levels[2][0].digits = DigitString(3, digits);
    auto r2 = validate_ptree(mutated);
    CHECK(r2.verdict == Verdict::fail);
    CHECK(r2.witness["axiom"] == "T2");

    auto rootless = tree;
    rootless.levels[0][0].digits = DigitString(3, {1});
    CHECK(validate_ptree(rootless).witness["axiom"] == "T1");

    auto bad_leaf = tree;
    bad_leaf.leaves[0].valuation += 1;
    CHECK(validate_ptree(bad_leaf).witness["axiom"] == "leaf");
}

TEST_CASE("builder errors")
{
    CHECK_THROWS_AS(build_tree(3, 1), DomainError);
    CHECK_THROWS_AS(build_tree(4, 2), DomainError);
    BuildOptions tight = with(Engine::stirling);
    tight.stirling_cap = 100;
    CHECK_THROWS_AS(build_tree(3, 3, tight), SizeError);
    CHECK(parse_engine("both") == Engine::both);
    CHECK_THROWS_AS(parse_engine("fast"), DomainError);
}
