#include "stirval/report.hpp"

namespace stirval {

std::string to_string(Verdict v)
{
    switch (v) {
    case Verdict::pass:
        return "pass";
    case Verdict::fail:
        return "fail";
    case Verdict::info:
        return "info";
    }
    return "fail";
}

void CheckReport::fail(nlohmann::json why)
{
    if (verdict != Verdict::fail)
        witness = std::move(why);
    verdict = Verdict::fail;
}

nlohmann::json CheckReport::to_json() const
{
    nlohmann::json j;
    j["claim"] = claim;
    j["parameters"] = parameters;
    j["observed"] = observed;
    j["bound"] = bound;
    j["verdict"] = to_string(verdict);
    j["seed"] = seed ? nlohmann::json(*seed) : nlohmann::json(nullptr);
    j["witness"] = witness;
    return j;
}

} // namespace stirval
