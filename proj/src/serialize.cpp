#include "stirval/serialize.hpp"

#include <sstream>

namespace stirval {

using nlohmann::json;

const char* version()
{
    return STIRVAL_VERSION;
}

json tree_document(const PTree& tree, const std::optional<std::string>& timestamp)
{
    const auto& c = tree.constants;
    json levels = json::array();
    for (auto& level : tree.levels) {
        json row = json::array();
        for (auto& node : level)
            row.push_back(node.digits.digits());
        levels.push_back(std::move(row));
    }
    json leaves = json::array();
    for (auto& leaf : tree.leaves)
        leaves.push_back({{"digits", leaf.digits.digits()}, {"level", leaf.level}, {"valuation", leaf.valuation}});

    json checks = json::array();
    for (std::size_t u = 0; u < tree.checks.size(); ++u)
        checks.push_back({{"level", u + 1},
                          {"mode", to_string(tree.checks[u].mode)},
                          {"candidates", tree.checks[u].candidates},
                          {"checked", tree.checks[u].checked}});

    auto stats = child_stats(tree);
    json child = {{"counts", stats.counts},
                  {"minChildren", stats.min_children ? json(*stats.min_children) : json(nullptr)},
                  {"maxChildren", stats.max_children ? json(*stats.max_children) : json(nullptr)}};
    // Girth only makes sense once every node's children are known.
    child["girth"] = tree.status == PTree::Status::complete && stats.min_children ? json(*stats.min_children)
                                                                                  : json(nullptr);

    return {{"p", c.p},
            {"k", c.k},
            {"root", c.root_digits.digits()},
            {"constants", {{"t", c.t}, {"U", c.U}, {"W", c.W}}},
            {"levels", levels},
            {"nodeCount", tree.node_count()},
            {"leaves", leaves},
            {"status", to_string(tree.status)},
            {"maxDepth", tree.max_depth},
            {"expandedLevels", tree.expanded_levels},
            {"childStats", child},
            {"engine", to_string(tree.engine)},
            {"levelChecks", checks},
            {"buildTimestamp", timestamp ? json(*timestamp) : json(nullptr)},
            {"toolVersion", version()}};
}

std::string tree_dot(const PTree& tree)
{
    const auto& c = tree.constants;
    std::ostringstream out;
    out << "digraph \"T_" << c.p << "(" << c.k << ")\" {\n";
    out << "  node [shape=ellipse];\n";
    for (auto& level : tree.levels)
        for (auto& node : level)
            out << "  \"" << node.digits.compact() << "\";\n";
    for (auto& leaf : tree.leaves)
        out << "  \"" << leaf.digits.compact() << "\" [shape=box, style=dashed];\n";
    for (std::size_t u = 1; u < tree.levels.size(); ++u)
        for (auto& node : tree.levels[u])
            out << "  \"" << tree.levels[u - 1][node.parent].digits.compact() << "\" -> \"" << node.digits.compact()
                << "\";\n";
    for (auto& leaf : tree.leaves)
        out << "  \"" << tree.levels[leaf.level - 1][leaf.parent].digits.compact() << "\" -> \""
            << leaf.digits.compact() << "\" [style=dashed];\n";
    out << "}\n";
    return out.str();
}

} // namespace stirval
