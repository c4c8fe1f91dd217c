#include "doctest.h"

#include "cache.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>

using namespace stirval::cli;
namespace fs = std::filesystem;

namespace {

fs::path fresh(const char* name)
{
    auto p = fs::temp_directory_path() / name;
    fs::remove(p);
    return p;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p);
    return {std::istreambuf_iterator<char>(in), {}};
}

} // namespace

TEST_CASE("records round-trip and persist")
{
    auto path = fresh("stirval_cache_a.jsonl");
    {
        ValuationCache c(path);
        CHECK(c.size() == 0);
        c.insert({2, 7, 2, -2, "both", 20});
        c.insert({3, 100, 3, -10, "exact", std::nullopt});
        c.insert({2, 7, 2, -2, "stirling", std::nullopt}); // same value: no new line
    }
    ValuationCache again(path);
    CHECK(again.size() == 2);
    auto hit = again.find(2, 7, 2);
    REQUIRE(hit);
    CHECK(hit->valuation == -2);
    CHECK(hit->guard == 20);
    CHECK_FALSE(again.find(3, 100, 3)->guard);
    CHECK_FALSE(again.find(5, 1, 1));
    const auto text = slurp(path);
    CHECK(std::count(text.begin(), text.end(), '\n') == 2);
}

TEST_CASE("conflicting records are fatal")
{
    auto path = fresh("stirval_cache_b.jsonl");
    ValuationCache c(path);
    c.insert({2, 7, 2, -2, "both", std::nullopt});
    CHECK_THROWS_AS(c.insert({2, 7, 2, -3, "expansion", std::nullopt}), CacheIntegrityError);

    std::ofstream(path, std::ios::app) << CacheRecord{2, 7, 2, -5, "exact", std::nullopt}.to_line() << '\n';
    CHECK_THROWS_AS(ValuationCache{path}, CacheIntegrityError);
}

TEST_CASE("a torn final line is dropped, a torn middle line is not")
{
    auto path = fresh("stirval_cache_c.jsonl");
    const auto good = CacheRecord{2, 3, 2, -1, "both", std::nullopt}.to_line();
    std::ofstream(path) << good << "\n{\"p\":2,\"n\":";
    {
        ValuationCache c(path);
        CHECK(c.size() == 1);
        c.insert({2, 5, 2, 0, "both", std::nullopt});
    }
    CHECK(ValuationCache(path).size() == 2);

    std::ofstream(path) << "{\"p\":2,\"n\":\n" << good << '\n';
    CHECK_THROWS_AS(ValuationCache{path}, CacheIntegrityError);

    // A complete record lacking only its newline is kept.
    std::ofstream(path) << good;
    {
        ValuationCache c(path);
        c.insert({2, 5, 2, 0, "both", std::nullopt});
    }
    CHECK(ValuationCache(path).size() == 2);
}
