#include "doctest.h"

#include "stirval/serialize.hpp"

using namespace stirval;

namespace {

BuildOptions expansion_only(unsigned workers = 1)
{
    BuildOptions o;
    o.engine = Engine::expansion;
    o.workers = workers;
    return o;
}

} // namespace

TEST_CASE("tree document")
{
    auto doc = tree_document(build_tree(3, 2, expansion_only()));
    CHECK(doc["status"] == "complete");
    CHECK(doc["nodeCount"] == 8);
    CHECK(doc["root"] == std::vector<int>{1});
    CHECK(doc["levels"][0] == nlohmann::json::array({std::vector<int>{1}}));
    CHECK(doc["buildTimestamp"].is_null());
    CHECK(doc["childStats"]["maxChildren"].get<int>() <= 2);
    CHECK(doc["childStats"]["girth"] == 0);
    CHECK(doc["toolVersion"] == version());

    // Levels are sorted numerically.
    for (auto& level : doc["levels"]) {
        std::uint64_t previous = 0;
        for (auto& digits : level) {
            auto value = DigitString(3, digits.get<std::vector<std::uint32_t>>()).value();
            CHECK(value > previous);
            previous = value;
        }
    }
    CHECK(tree_document(build_tree(3, 2, expansion_only()), "2024-01-01T00:00:00Z")["buildTimestamp"]
          == "2024-01-01T00:00:00Z");
}

TEST_CASE("serialization is byte-stable across worker counts")
{
    auto a = build_tree(3, 6, expansion_only(1));
    auto b = build_tree(3, 6, expansion_only(4));
    CHECK(tree_document(a).dump() == tree_document(b).dump());
    CHECK(tree_dot(a) == tree_dot(b));
}

TEST_CASE("dot output")
{
    auto dot = tree_dot(build_tree(3, 5, expansion_only()));
    CHECK(dot.rfind("digraph \"T_3(5)\" {\n", 0) == 0);
    CHECK(dot.find("\"11\" -> \"110\";") != std::string::npos);
    CHECK(dot.find("[shape=box, style=dashed]") != std::string::npos);
    std::size_t nodes = 0;
    for (std::size_t pos = 0; (pos = dot.find("\";\n", pos)) != std::string::npos; ++pos)
        ++nodes;
    // One declaration per node plus one edge per non-root node end the same way.
    CHECK(nodes == 7 + 6);

    auto chain = tree_dot(build_tree(2, 2, [] {
        BuildOptions o;
        o.max_depth = 5;
        return o;
    }()));
    CHECK(chain.find("\"11011\"") != std::string::npos);
}
