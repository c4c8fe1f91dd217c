#pragma once

#include "stirval/digits.hpp"
#include "stirval/harmonic.hpp"
#include "stirval/report.hpp"
#include "stirval/structure.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace stirval {

enum class Engine { stirling, expansion, both };

std::string to_string(Engine e);
/// Parses "stirling", "expansion" or "both"; DomainError otherwise.
Engine parse_engine(const std::string& name);

struct BuildOptions {
    std::size_t max_depth = 32;
    Engine engine = Engine::both;
    unsigned workers = 1;
    /// Largest n a level may contain for a full Stirling sweep of all its candidates.
    std::uint64_t stirling_cap = 200000;
    /// Past the cap, `both` still sweeps the `spot_count` smallest candidates of
    /// every level up to `spot_levels`, as long as they stay below `spot_cap`.
    std::size_t spot_count = 6;
    std::size_t spot_levels = 10;
    std::uint64_t spot_cap = 2000000;
    EscalationPolicy policy{};
};

struct TreeNode {
    DigitString digits;
    /// Index of the parent in the previous level; 0 for the root.
    std::size_t parent = 0;
};

/// A rejected child. Its valuation is exact: W + r - k r with r its last digit index.
struct TreeLeaf {
    DigitString digits;
    std::size_t level = 0;
    std::size_t parent = 0;
    std::int64_t valuation = 0;
};

/// How a level's membership decisions were cross-checked.
struct LevelCheck {
    enum class Mode { none, full, spot };
    Mode mode = Mode::none;
    std::size_t candidates = 0;
    std::size_t checked = 0;
};

std::string to_string(LevelCheck::Mode m);

struct PTree {
    enum class Status { complete, truncated };

    StructureConstants constants;
    /// levels[u] holds the strings of length t + 1 + u, in increasing numeric order.
    std::vector<std::vector<TreeNode>> levels;
    std::vector<TreeLeaf> leaves;
    Status status = Status::truncated;
    /// Number of levels whose children were evaluated.
    std::size_t expanded_levels = 0;
    std::size_t max_depth = 0;
    Engine engine = Engine::both;
    /// checks[u] describes level u + 1.
    std::vector<LevelCheck> checks;

    std::size_t node_count() const;
};

std::string to_string(PTree::Status s);

PTree build_tree(std::uint64_t p, std::uint64_t k, const BuildOptions& options = {});

struct ChildStats {
    /// Child counts of the determined internal nodes, level by level.
    std::vector<std::size_t> counts;
    std::optional<std::size_t> min_children;
    std::optional<std::size_t> max_children;
};

ChildStats child_stats(const PTree& tree);

/// f_0..f_S of the 2-adic sequence for k = 2.
std::vector<int> f_sequence(std::size_t S);

/// Axioms T1 (root), T2 (prefix agreement), T3 (parent closure), ordering and leaf consistency.
CheckReport validate_ptree(const PTree& tree);

} // namespace stirval
