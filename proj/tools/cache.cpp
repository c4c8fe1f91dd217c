#include "cache.hpp"

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace stirval::cli {

std::string CacheRecord::to_line() const
{
    nlohmann::json j{{"p", p}, {"n", n}, {"k", k}, {"valuation", valuation}, {"engine", engine}};
    j["guard"] = guard ? nlohmann::json(*guard) : nlohmann::json(nullptr);
    return j.dump();
}

CacheRecord CacheRecord::from_line(const std::string& line)
{
    auto j = nlohmann::json::parse(line);
    CacheRecord r;
    r.p = j.at("p").get<std::uint64_t>();
    r.n = j.at("n").get<std::uint64_t>();
    r.k = j.at("k").get<std::uint64_t>();
    r.valuation = j.at("valuation").get<std::int64_t>();
    r.engine = j.at("engine").get<std::string>();
    if (j.contains("guard") && !j["guard"].is_null())
        r.guard = j["guard"].get<std::uint64_t>();
    return r;
}

ValuationCache::ValuationCache(std::filesystem::path path) : path_(std::move(path))
{
    std::ifstream in(path_, std::ios::binary);
    if (!in)
        return;
    std::stringstream buffer;
    buffer << in.rdbuf();
    const auto text = buffer.str();
    in.close();

    std::size_t start = 0, line_no = 0;
    while (start < text.size()) {
        const auto end = text.find('\n', start);
        const bool terminated = end != std::string::npos;
        const auto line = text.substr(start, terminated ? end - start : std::string::npos);
        ++line_no;
        if (!line.empty()) {
            try {
                remember(CacheRecord::from_line(line), line_no);
            } catch (const nlohmann::json::exception& e) {
                if (terminated)
                    throw CacheIntegrityError(path_.string() + ":" + std::to_string(line_no) + ": malformed record: "
                                              + e.what());
                std::filesystem::resize_file(path_, start);
                break;
            }
        }
        if (!terminated) {
            // A parsable record that lost its newline: restore it before appending.
            std::ofstream(path_, std::ios::app | std::ios::binary) << '\n';
            break;
        }
        start = end + 1;
    }
}

void ValuationCache::remember(const CacheRecord& record, std::size_t line)
{
    auto key = std::tuple{record.p, record.n, record.k};
    auto [it, inserted] = records_.emplace(key, record);
    if (!inserted && it->second.valuation != record.valuation)
        throw CacheIntegrityError(path_.string() + ":" + std::to_string(line) + ": conflicting valuations for p="
                                  + std::to_string(record.p) + " n=" + std::to_string(record.n)
                                  + " k=" + std::to_string(record.k) + " (" + std::to_string(it->second.valuation)
                                  + " from " + it->second.engine + " vs " + std::to_string(record.valuation) + " from "
                                  + record.engine + ")");
}

std::optional<CacheRecord> ValuationCache::find(std::uint64_t p, std::uint64_t n, std::uint64_t k) const
{
    auto it = records_.find({p, n, k});
    if (it == records_.end())
        return std::nullopt;
    return it->second;
}

void ValuationCache::insert(const CacheRecord& record)
{
    if (auto existing = find(record.p, record.n, record.k)) {
        remember(record, records_.size() + 1);
        return;
    }
    std::ofstream out(path_, std::ios::app | std::ios::binary);
    if (!out)
        throw CacheIntegrityError("cannot append to " + path_.string());
    out << record.to_line() << '\n';
    out.flush();
    if (!out)
        throw CacheIntegrityError("write to " + path_.string() + " failed");
    records_.emplace(std::tuple{record.p, record.n, record.k}, record);
}

} // namespace stirval::cli
