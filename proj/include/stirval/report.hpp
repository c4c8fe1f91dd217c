#pragma once

#include <nlohmann/json.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace stirval {

enum class Verdict { pass, fail, info };

std::string to_string(Verdict v);

/// Outcome of one check. `info` is reserved for monitors that have no stated bound.
struct CheckReport {
    std::string claim;
    nlohmann::json parameters = nlohmann::json::object();
    nlohmann::json observed = nlohmann::json::object();
    nlohmann::json bound = nullptr;
    Verdict verdict = Verdict::pass;
    std::optional<std::uint64_t> seed;
    /// First counterexample or violation; null on pass.
    nlohmann::json witness = nullptr;

    bool passed() const { return verdict != Verdict::fail; }
    /// Marks the report failed, keeping only the first witness.
    void fail(nlohmann::json why);
    nlohmann::json to_json() const;
};

} // namespace stirval
