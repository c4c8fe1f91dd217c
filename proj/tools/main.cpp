#include "cache.hpp"

#include "stirval/stirval.h"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cstdlib>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>

using nlohmann::json;

namespace {

enum Exit { exit_ok = 0, exit_failed = 1, exit_usage = 2 };

int exit_for(stirval_status s)
{
    switch (s) {
    case STIRVAL_OK:
        return exit_ok;
    case STIRVAL_ERR_ARGUMENT:
    case STIRVAL_ERR_UNKNOWN_CHECK:
        return exit_usage;
    default:
        return exit_failed;
    }
}

int report_error(stirval_status s)
{
    std::cerr << "stirval: " << stirval_last_error() << '\n';
    return exit_for(s);
}

struct Owned {
    char* s = nullptr;
    ~Owned() { stirval_string_free(s); }
    std::string str() const { return s ? s : ""; }
};

struct TreeDeleter {
    void operator()(stirval_tree* t) const { stirval_tree_free(t); }
};

// "--m-max" -> "m_max"
std::string key_of(std::string flag)
{
    flag.erase(0, flag.find_first_not_of('-'));
    for (auto& c : flag)
        if (c == '-')
            c = '_';
    return flag;
}

json value_of(const std::string& text)
{
    auto scalar = [](const std::string& t) -> json {
        if (!t.empty() && t.find_first_not_of("0123456789") == std::string::npos)
            return std::stoull(t);
        if (t == "true" || t == "false")
            return t == "true";
        return t;
    };
    if (text.find(',') == std::string::npos)
        return scalar(text);
    json list = json::array();
    std::size_t start = 0;
    while (true) {
        auto end = text.find(',', start);
        list.push_back(scalar(text.substr(start, end - start)));
        if (end == std::string::npos)
            return list;
        start = end + 1;
    }
}

// Turns leftover "--key value" and "--key=value" tokens into a params object.
json params_from(const std::vector<std::string>& extras)
{
    json params = json::object();
    for (std::size_t i = 0; i < extras.size(); ++i) {
        const auto& tok = extras[i];
        if (tok.rfind("--", 0) != 0)
            throw CLI::ValidationError("unexpected argument '" + tok + "'");
        if (auto eq = tok.find('='); eq != std::string::npos) {
            params[key_of(tok.substr(0, eq))] = value_of(tok.substr(eq + 1));
            continue;
        }
        if (i + 1 >= extras.size())
            throw CLI::ValidationError("missing value for '" + tok + "'");
        params[key_of(tok)] = value_of(extras[++i]);
    }
    return params;
}

std::optional<std::filesystem::path> cache_path(const std::string& flag)
{
    if (const char* env = std::getenv("PADIC_CACHE"); env && *env)
        return std::filesystem::path(env);
    if (!flag.empty())
        return std::filesystem::path(flag);
    return std::nullopt;
}

int run_val(std::uint64_t p, std::uint64_t n, std::uint64_t k, const std::string& method_name,
            const std::string& cache_flag)
{
    static const std::map<std::string, stirval_method> methods{{"exact", STIRVAL_METHOD_EXACT},
                                                              {"stirling", STIRVAL_METHOD_STIRLING},
                                                              {"expansion", STIRVAL_METHOD_EXPANSION},
                                                              {"both", STIRVAL_METHOD_BOTH}};
    const auto method = methods.at(method_name);
    json out{{"p", p}, {"n", n}, {"k", k}};

    std::optional<stirval::cli::ValuationCache> cache;
    if (auto path = cache_path(cache_flag))
        cache.emplace(*path);
    if (cache) {
        if (auto hit = cache->find(p, n, k)) {
            out["valuation"] = hit->valuation;
            out["method"] = method_name;
            out["cached"] = true;
            std::cout << out.dump() << '\n';
            return exit_ok;
        }
    }

    stirval_valuation v{};
    if (auto s = stirval_valuation_H(p, n, k, method, &v); s != STIRVAL_OK)
        return report_error(s);
    out["valuation"] = v.is_infinite ? json("inf") : json(v.value);
    out["method"] = method_name;
    if (v.is_lower_bound)
        out["lowerBound"] = true;

    if (cache && !v.is_infinite && !v.is_lower_bound) {
        stirval::cli::CacheRecord rec{p, n, k, v.value, method_name, std::nullopt};
        if (method == STIRVAL_METHOD_STIRLING || method == STIRVAL_METHOD_BOTH) {
            std::uint64_t guard = 0;
            if (stirval_starting_guard(p, n, k, &guard) == STIRVAL_OK)
                rec.guard = guard;
        }
        cache->insert(rec);
    }
    std::cout << out.dump() << '\n';
    return exit_ok;
}

int run_tree(std::uint64_t p, std::uint64_t k, std::size_t depth, const std::string& engine_name, unsigned workers,
             const std::string& format, const std::string& timestamp)
{
    static const std::map<std::string, stirval_engine> engines{
        {"stirling", STIRVAL_ENGINE_STIRLING}, {"expansion", STIRVAL_ENGINE_EXPANSION}, {"both", STIRVAL_ENGINE_BOTH}};
    stirval_build_options opts;
    stirval_build_options_init(&opts);
    opts.max_depth = depth;
    opts.engine = engines.at(engine_name);
    opts.workers = workers;

    stirval_tree* raw = nullptr;
    if (auto s = stirval_tree_build(p, k, &opts, &raw); s != STIRVAL_OK)
        return report_error(s);
    std::unique_ptr<stirval_tree, TreeDeleter> tree(raw);

    Owned text;
    auto s = format == "dot" ? stirval_tree_dot(tree.get(), &text.s)
                             : stirval_tree_json(tree.get(), timestamp.empty() ? nullptr : timestamp.c_str(), &text.s);
    if (s != STIRVAL_OK)
        return report_error(s);
    std::cout << text.str() << '\n';
    return exit_ok;
}

int run_verify(const std::string& name, const std::vector<std::string>& extras, std::optional<std::uint64_t> seed)
{
    const auto params = params_from(extras).dump();
    Owned report;
    int passed = 0;
    auto s = stirval_verify(name.c_str(), params.c_str(), seed ? &*seed : nullptr, &report.s, &passed);
    if (s != STIRVAL_OK)
        return report_error(s);
    std::cout << report.str() << '\n';
    return passed ? exit_ok : exit_failed;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Valuations of Stirling-harmonic numbers and their p-adic trees"};
    app.set_version_flag("--version", std::string(stirval_version()));
    app.require_subcommand(1);

    std::uint64_t p = 0, n = 0, k = 0;
    std::string method = "both", cache_flag;
    auto* val = app.add_subcommand("val", "nu_p(H(n, k))");
    val->add_option("--p", p, "prime")->required();
    val->add_option("--n", n)->required();
    val->add_option("--k", k)->required();
    val->add_option("--method", method)
        ->check(CLI::IsMember({"exact", "stirling", "expansion", "both"}))
        ->capture_default_str();
    val->add_option("--cache", cache_flag, "JSON-lines valuation cache (PADIC_CACHE overrides)");

    std::size_t depth = 32;
    std::string engine = "both", format = "json", timestamp;
    unsigned workers = 1;
    auto* tree = app.add_subcommand("tree", "build T_p(k)");
    tree->add_option("--p", p)->required();
    tree->add_option("--k", k)->required();
    tree->add_option("--max-depth", depth)->capture_default_str();
    tree->add_option("--engine", engine)->check(CLI::IsMember({"stirling", "expansion", "both"}))->capture_default_str();
    tree->add_option("--workers", workers)->check(CLI::PositiveNumber)->capture_default_str();
    tree->add_option("--format", format)->check(CLI::IsMember({"json", "dot"}))->capture_default_str();
    tree->add_option("--timestamp", timestamp, "recorded as buildTimestamp");

    std::size_t terms = 20;
    auto* fseq = app.add_subcommand("fseq", "bits f_0..f_S of the 2-adic sequence");
    fseq->add_option("--terms", terms)->capture_default_str();

    std::string check;
    std::optional<std::uint64_t> seed;
    auto* verify = app.add_subcommand("verify", "run a named check; other --key value pairs become parameters");
    verify->add_option("name", check)->required();
    verify->add_option("--seed", seed);
    verify->allow_extras();

    std::uint64_t max_n = 40;
    auto* scan = app.add_subcommand("scan", "list (n, k) with H(n, k) integral");
    scan->add_option("--max-n", max_n)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_ok : exit_usage;
    }

    try {
        if (*val)
            return run_val(p, n, k, method, cache_flag);
        if (*tree)
            return run_tree(p, k, depth, engine, workers, format, timestamp);
        if (*fseq) {
            Owned bits;
            if (auto s = stirval_fseq(terms, &bits.s); s != STIRVAL_OK)
                return report_error(s);
            std::cout << json{{"terms", terms}, {"bits", bits.str()}}.dump() << '\n';
            return exit_ok;
        }
        if (*verify)
            return run_verify(check, verify->remaining(), seed);
        if (*scan) {
            Owned pairs;
            if (auto s = stirval_scan(max_n, &pairs.s); s != STIRVAL_OK)
                return report_error(s);
            std::cout << json{{"maxN", max_n}, {"pairs", json::parse(pairs.str())}}.dump() << '\n';
            return exit_ok;
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "stirval: " << e.what() << '\n';
        return exit_usage;
    } catch (const stirval::cli::CacheIntegrityError& e) {
        std::cerr << "stirval: cache integrity: " << e.what() << '\n';
        return exit_failed;
    }
    return exit_usage;
}
