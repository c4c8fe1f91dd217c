#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>

namespace stirval::cli {

/// Two records for the same (p, n, k) disagree, or a complete line is malformed.
class CacheIntegrityError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct CacheRecord {
    std::uint64_t p = 0;
    std::uint64_t n = 0;
    std::uint64_t k = 0;
    std::int64_t valuation = 0;
    std::string engine;
    std::optional<std::uint64_t> guard;

    std::string to_line() const;
    static CacheRecord from_line(const std::string& line);
};

/// Append-only JSON-lines store of exact valuations keyed by (p, n, k).
///
/// One writer at a time: the file is read once when opened and only appended to
/// afterwards. A trailing line without a newline is the remnant of an interrupted
/// append; it is discarded (and cut from the file) when it does not parse.
class ValuationCache {
public:
    explicit ValuationCache(std::filesystem::path path);

    std::optional<CacheRecord> find(std::uint64_t p, std::uint64_t n, std::uint64_t k) const;
    /// Appends the record unless an identical valuation is already stored;
    /// throws CacheIntegrityError when a stored valuation differs.
    void insert(const CacheRecord& record);
    std::size_t size() const { return records_.size(); }

private:
    void remember(const CacheRecord& record, std::size_t line);

    std::filesystem::path path_;
    std::map<std::tuple<std::uint64_t, std::uint64_t, std::uint64_t>, CacheRecord> records_;
};

} // namespace stirval::cli
