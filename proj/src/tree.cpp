#include "stirval/tree.hpp"

#include "stirval/errors.hpp"
#include "stirval/expansion.hpp"
#include "stirval/modring.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <set>
#include <thread>

namespace stirval {

namespace {

/// Runs fn(i) for i in [0, count) on up to `workers` threads; rethrows the first failure.
template <class F>
void parallel_for(std::size_t count, unsigned workers, F&& fn)
{
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(count)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i; (i = next.fetch_add(1)) < count;) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                    next = count;
                }
            }
        });
    for (auto& t : pool)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

struct Candidate {
    DigitString digits;
    std::size_t parent;
    std::uint64_t n;
};

struct Decision {
    bool member = false;
    /// Exact valuation for a leaf; unused for members.
    std::int64_t valuation = 0;
};

std::string describe(const DigitString& d, std::uint64_t k)
{
    return d.to_string() + " (n = " + std::to_string(d.value()) + ", k = " + std::to_string(k) + ")";
}

} // namespace

std::string to_string(Engine e)
{
    switch (e) {
    case Engine::stirling:
        return "stirling";
    case Engine::expansion:
        return "expansion";
    case Engine::both:
        return "both";
    }
    return "both";
}

Engine parse_engine(const std::string& name)
{
    if (name == "stirling")
        return Engine::stirling;
    if (name == "expansion")
        return Engine::expansion;
    if (name == "both")
        return Engine::both;
    throw DomainError("unknown engine '" + name + "'");
}

std::string to_string(LevelCheck::Mode m)
{
    switch (m) {
    case LevelCheck::Mode::none:
        return "none";
    case LevelCheck::Mode::full:
        return "full";
    case LevelCheck::Mode::spot:
        return "spot";
    }
    return "none";
}

std::string to_string(PTree::Status s)
{
    return s == PTree::Status::complete ? "complete" : "truncated";
}

std::size_t PTree::node_count() const
{
    std::size_t total = 0;
    for (auto& level : levels)
        total += level.size();
    return total;
}

PTree build_tree(std::uint64_t p, std::uint64_t k, const BuildOptions& options)
{
    const auto c = constants(k, p);
    const bool use_expansion = options.engine != Engine::stirling;
    const bool use_stirling = options.engine != Engine::expansion;

    PTree tree;
    tree.constants = c;
    tree.max_depth = options.max_depth;
    tree.engine = options.engine;
    tree.levels.push_back({TreeNode{c.root_digits, 0}});

    // Sigma_p of every node in the current level, modulo p^P. Level u + 1 needs p^{u+1}.
    const unsigned P = static_cast<unsigned>(
        std::clamp<std::size_t>(options.max_depth, 1, PrimePowerRing::max_exponent(p)));
    const PrimePowerRing ring(p, use_expansion ? P : 0);
    const ExpansionContext ctx(k, p);
    std::vector<std::uint64_t> sigma{0};

    for (std::size_t u = 0; u < options.max_depth; ++u) {
        const auto& level = tree.levels[u];
        const auto s = static_cast<std::int64_t>(c.t + u + 1);
        const auto threshold = static_cast<std::int64_t>(c.W) - static_cast<std::int64_t>(k - 1) * s + 1;

        std::vector<Candidate> cands;
        cands.reserve(level.size() * p);
        for (std::size_t i = 0; i < level.size(); ++i)
            for (std::uint32_t b = 0; b < p; ++b) {
                auto d = level[i].digits.extended(b);
                auto n = d.value();
                cands.push_back({std::move(d), i, n});
            }

        std::vector<Decision> expansion(cands.size());
        std::vector<std::uint64_t> child_sigma(cands.size());
        if (use_expansion) {
            if (u + 1 > P)
                throw PrecisionError("level " + std::to_string(u + 1) + " of the base-" + std::to_string(p)
                                     + " tree needs more than " + std::to_string(P) + " digits of precision");
            const auto scale = ring.prime_power(static_cast<unsigned>(u));
            parallel_for(level.size(), options.workers, [&](std::size_t i) {
                auto h = ctx.child_h_p_mod(level[i].digits, static_cast<unsigned>(P - u));
                for (std::uint32_t b = 0; b < p; ++b) {
                    const auto j = i * p + b;
                    child_sigma[j] = ring.add(sigma[i], ring.mul(h[b], scale));
                    auto nu = ring.valuation(child_sigma[j]);
                    expansion[j].member = nu >= u + 1;
                    expansion[j].valuation = static_cast<std::int64_t>(nu) + static_cast<std::int64_t>(c.U)
                                             - static_cast<std::int64_t>(k) * s;
                }
            });
        }

        // Stirling evaluation: all candidates, the smallest few, or none.
        LevelCheck check;
        check.candidates = cands.size();
        std::size_t checked = 0;
        const auto largest = cands.back().n;
        if (options.engine == Engine::stirling) {
            if (largest > options.stirling_cap)
                throw SizeError("level " + std::to_string(u + 1) + " reaches n = " + std::to_string(largest)
                                + ", beyond the Stirling cap " + std::to_string(options.stirling_cap));
            checked = cands.size();
        } else if (use_stirling) {
            if (largest <= options.stirling_cap) {
                checked = cands.size();
            } else if (u + 1 <= options.spot_levels) {
                checked = std::min(options.spot_count, cands.size());
                if (cands[checked - 1].n > options.spot_cap)
                    checked = 0;
            }
        }
        check.checked = checked;
        check.mode = checked == 0 ? LevelCheck::Mode::none
                     : checked == cands.size() ? LevelCheck::Mode::full
                                               : LevelCheck::Mode::spot;

        std::vector<Decision> stirling(checked);
        if (checked > 0) {
            std::vector<std::uint64_t> ns;
            ns.reserve(checked);
            for (std::size_t j = 0; j < checked; ++j)
                ns.push_back(cands[j].n);
            auto nus = vp_H_sweep(ns, k, p, options.policy);
            for (std::size_t j = 0; j < checked; ++j)
                stirling[j] = {nus[j] >= threshold, nus[j]};
        }

        if (options.engine == Engine::both)
            for (std::size_t j = 0; j < checked; ++j) {
                const auto& a = expansion[j];
                const auto& b = stirling[j];
                if (a.member != b.member || (!a.member && a.valuation != b.valuation))
                    throw DiscrepancyError(
                        "engines disagree on " + describe(cands[j].digits, k) + ": expansion "
                        + (a.member ? "member" : "leaf nu=" + std::to_string(a.valuation)) + ", stirling "
                        + (b.member ? "member" : "leaf nu=" + std::to_string(b.valuation)));
            }

        std::vector<TreeNode> next;
        std::vector<std::uint64_t> next_sigma;
        for (std::size_t j = 0; j < cands.size(); ++j) {
            const auto& d = use_expansion ? expansion[j] : stirling[j];
            if (d.member) {
                next.push_back({cands[j].digits, cands[j].parent});
                next_sigma.push_back(child_sigma[j]);
            } else {
                tree.leaves.push_back({cands[j].digits, u + 1, cands[j].parent, d.valuation});
            }
        }
        tree.checks.push_back(check);
        tree.expanded_levels = u + 1;
        if (next.empty()) {
            tree.status = PTree::Status::complete;
            return tree;
        }
        tree.levels.push_back(std::move(next));
        sigma = std::move(next_sigma);
    }
    tree.status = PTree::Status::truncated;
    return tree;
}

ChildStats child_stats(const PTree& tree)
{
    if (tree.levels.empty())
        throw DomainError("child statistics of an empty tree");
    ChildStats stats;
    for (std::size_t u = 0; u < tree.expanded_levels && u < tree.levels.size(); ++u) {
        std::vector<std::size_t> counts(tree.levels[u].size(), 0);
        if (u + 1 < tree.levels.size())
            for (auto& child : tree.levels[u + 1])
                ++counts[child.parent];
        for (auto n : counts) {
            stats.counts.push_back(n);
            stats.min_children = std::min(stats.min_children.value_or(n), n);
            stats.max_children = std::max(stats.max_children.value_or(n), n);
        }
    }
    return stats;
}

std::vector<int> f_sequence(std::size_t S)
{
    const ExpansionContext ctx(2, 2);
    std::vector<std::uint32_t> bits{1};
    for (std::size_t s = 1; s <= S; ++s) {
        auto trial = bits;
        trial.push_back(1);
        auto verdict = ctx.vp_H(DigitString(2, trial).value());
        const auto threshold = 1 - static_cast<std::int64_t>(s);
        if (!verdict.is_exact() && verdict.value < threshold)
            throw PrecisionError("f_" + std::to_string(s) + " is undecided by the expansion");
        bits.push_back(verdict.value >= threshold ? 1 : 0);
    }
    return {bits.begin(), bits.end()};
}

CheckReport validate_ptree(const PTree& tree)
{
    CheckReport report;
    report.claim = "ptree_axioms";
    const auto& c = tree.constants;
    report.parameters = {{"p", c.p}, {"k", c.k}, {"max_depth", tree.max_depth}};
    report.observed = {{"nodes", tree.node_count()}, {"leaves", tree.leaves.size()},
                       {"levels", tree.levels.size()}};

    auto violation = [&](const std::string& axiom, const DigitString* d, const std::string& detail) {
        nlohmann::json w{{"axiom", axiom}, {"detail", detail}};
        if (d)
            w["digits"] = d->digits();
        report.fail(std::move(w));
    };

    // T1: the root is present, and is the only string at level 0.
    if (tree.levels.empty() || tree.levels[0].size() != 1 || tree.levels[0][0].digits != c.root_digits) {
        violation("T1", tree.levels.empty() || tree.levels[0].empty() ? nullptr : &tree.levels[0][0].digits,
                  "level 0 must hold exactly the digits of k - 1");
        return report;
    }

    // T2: every node extends the root digits and sits at the level its length dictates.
    for (std::size_t u = 0; u < tree.levels.size() && report.passed(); ++u)
        for (auto& node : tree.levels[u])
            if (!node.digits.starts_with(c.root_digits) || node.digits.size() != c.t + 1 + u) {
                violation("T2", &node.digits, "node does not extend the root at level " + std::to_string(u));
                break;
            }
    if (!report.passed())
        return report;

    // T3: every non-root node's parent is a node.
    std::set<std::vector<std::uint32_t>> nodes;
    for (auto& level : tree.levels)
        for (auto& node : level)
            nodes.insert(node.digits.digits());
    for (std::size_t u = 1; u < tree.levels.size() && report.passed(); ++u)
        for (auto& node : tree.levels[u]) {
            auto parent = node.digits.prefix(node.digits.size() - 1);
            const auto& prev = tree.levels[u - 1];
            if (!nodes.contains(parent.digits()) || node.parent >= prev.size() || prev[node.parent].digits != parent) {
                violation("T3", &node.digits, "parent is not a node");
                break;
            }
        }
    if (!report.passed())
        return report;

    for (std::size_t u = 0; u < tree.levels.size(); ++u)
        for (std::size_t i = 1; i < tree.levels[u].size(); ++i)
            if (!(tree.levels[u][i - 1].digits.value() < tree.levels[u][i].digits.value())) {
                violation("order", &tree.levels[u][i].digits, "level not strictly increasing");
                return report;
            }

    // Leaves: parent is a node, the leaf is not, and its valuation is W + r - k r.
    std::set<std::vector<std::uint32_t>> leaves;
    for (auto& leaf : tree.leaves) {
        auto parent = leaf.digits.prefix(leaf.digits.size() - 1);
        if (!nodes.contains(parent.digits()) || nodes.contains(leaf.digits.digits())
            || leaf.digits.size() != c.t + 1 + leaf.level) {
            violation("leaf", &leaf.digits, "leaf must hang off a node without being one");
            return report;
        }
        const auto r = static_cast<std::int64_t>(leaf.digits.last_index());
        const auto expected = static_cast<std::int64_t>(c.W) + r - static_cast<std::int64_t>(c.k) * r;
        if (leaf.valuation != expected) {
            violation("leaf", &leaf.digits,
                      "valuation " + std::to_string(leaf.valuation) + " differs from " + std::to_string(expected));
            return report;
        }
        leaves.insert(leaf.digits.digits());
    }

    // Every expanded node has all p children accounted for as nodes or leaves.
    for (std::size_t u = 0; u < tree.expanded_levels && u < tree.levels.size(); ++u)
        for (auto& node : tree.levels[u])
            for (std::uint32_t b = 0; b < c.p; ++b) {
                auto child = node.digits.extended(b).digits();
                if (nodes.contains(child) == leaves.contains(child)) {
                    violation("leaf", &node.digits, "child " + std::to_string(b) + " is not classified exactly once");
                    return report;
                }
            }

    if (tree.status == PTree::Status::complete && tree.expanded_levels != tree.levels.size())
        violation("status", nullptr, "complete tree must have expanded its last level");
    return report;
}

} // namespace stirval
