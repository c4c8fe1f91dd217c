#include "stirval/stirval.h"

#include "stirval/errors.hpp"
#include "stirval/expansion.hpp"
#include "stirval/harmonic.hpp"
#include "stirval/serialize.hpp"
#include "stirval/tree.hpp"
#include "stirval/verifier.hpp"

#include <algorithm>
#include <cstring>
#include <string>

struct stirval_tree {
    stirval::PTree tree;
};

namespace {

thread_local std::string last_error;

template <class F>
stirval_status guarded(F&& body)
{
    last_error.clear();
    try {
        body();
        return STIRVAL_OK;
    } catch (const stirval::DomainError& e) {
        last_error = e.what();
        return STIRVAL_ERR_ARGUMENT;
    } catch (const stirval::SizeError& e) {
        last_error = e.what();
        return STIRVAL_ERR_SIZE;
    } catch (const stirval::PrecisionError& e) {
        last_error = e.what();
        return STIRVAL_ERR_PRECISION;
    } catch (const stirval::DiscrepancyError& e) {
        last_error = e.what();
        return STIRVAL_ERR_DISCREPANCY;
    } catch (const nlohmann::json::exception& e) {
        last_error = std::string("invalid JSON: ") + e.what();
        return STIRVAL_ERR_ARGUMENT;
    } catch (const std::exception& e) {
        last_error = e.what();
        return STIRVAL_ERR_INTERNAL;
    } catch (...) {
        last_error = "unknown failure";
        return STIRVAL_ERR_INTERNAL;
    }
}

char* copy_out(const std::string& s)
{
    auto* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

template <class... T>
void require(T*... ptrs)
{
    if (((ptrs == nullptr) || ...))
        throw stirval::DomainError("null pointer argument");
}

stirval::Engine engine_of(stirval_engine e)
{
    switch (e) {
    case STIRVAL_ENGINE_STIRLING:
        return stirval::Engine::stirling;
    case STIRVAL_ENGINE_EXPANSION:
        return stirval::Engine::expansion;
    case STIRVAL_ENGINE_BOTH:
        return stirval::Engine::both;
    }
    throw stirval::DomainError("unknown engine");
}

bool expansion_applies(std::uint64_t n, std::uint64_t k, std::uint64_t p)
{
    if (k < 2 || n < 1)
        return false;
    auto c = stirval::constants(k, p);
    auto d = stirval::to_digits(n, p);
    return d.size() >= c.t + 2 && d.starts_with(c.root_digits);
}

} // namespace

extern "C" {

const char* stirval_version(void)
{
    return stirval::version();
}

const char* stirval_last_error(void)
{
    return last_error.c_str();
}

void stirval_string_free(char* s)
{
    delete[] s;
}

stirval_status stirval_valuation_H(uint64_t p, uint64_t n, uint64_t k, stirval_method method, stirval_valuation* out)
{
    return guarded([&] {
        require(out);
        stirval::require_prime(p);
        *out = {0, 0, 0};
        switch (method) {
        case STIRVAL_METHOD_EXACT: {
            auto v = stirval::vp(stirval::exact_H(n, k), p);
            out->is_infinite = !v.is_finite();
            out->value = v.is_finite() ? v.value() : 0;
            return;
        }
        case STIRVAL_METHOD_STIRLING:
            out->value = stirval::vp_H(n, k, p).value();
            return;
        case STIRVAL_METHOD_EXPANSION: {
            auto v = stirval::vp_H_expansion(n, k, p);
            out->value = v.value;
            out->is_lower_bound = !v.is_exact();
            return;
        }
        case STIRVAL_METHOD_BOTH: {
            const auto nu = stirval::vp_H(n, k, p).value();
            const auto where = "n = " + std::to_string(n) + ", k = " + std::to_string(k) + ", p = " + std::to_string(p);
            bool compared = false;
            if (expansion_applies(n, k, p)) {
                compared = true;
                auto v = stirval::vp_H_expansion(n, k, p);
                if (v.is_exact() ? v.value != nu : nu < v.value)
                    throw stirval::DiscrepancyError("engines disagree at " + where + ": stirling " + std::to_string(nu)
                                                    + ", expansion " + (v.is_exact() ? "" : ">= ")
                                                    + std::to_string(v.value));
            }
            if (n <= stirval::ExactLimits{}.max_n) {
                compared = true;
                auto e = stirval::vp(stirval::exact_H(n, k), p).value();
                if (e != nu)
                    throw stirval::DiscrepancyError("engines disagree at " + where + ": stirling " + std::to_string(nu)
                                                    + ", exact " + std::to_string(e));
            }
            if (!compared)
                throw stirval::DomainError("no second engine covers " + where);
            out->value = nu;
            return;
        }
        }
        throw stirval::DomainError("unknown method");
    });
}

stirval_status stirval_starting_guard(uint64_t p, uint64_t n, uint64_t k, uint64_t* out)
{
    return guarded([&] {
        require(out);
        stirval::require_prime(p);
        *out = stirval::starting_guard(n, k, p, stirval::EscalationPolicy{});
    });
}

void stirval_build_options_init(stirval_build_options* options)
{
    if (!options)
        return;
    options->max_depth = 32;
    options->engine = STIRVAL_ENGINE_BOTH;
    options->workers = 1;
}

stirval_status stirval_tree_build(uint64_t p, uint64_t k, const stirval_build_options* options, stirval_tree** out)
{
    return guarded([&] {
        require(out);
        *out = nullptr;
        stirval::BuildOptions o;
        if (options) {
            o.max_depth = options->max_depth;
            o.engine = engine_of(options->engine);
            o.workers = std::max(1u, options->workers);
        }
        *out = new stirval_tree{stirval::build_tree(p, k, o)};
    });
}

void stirval_tree_free(stirval_tree* tree)
{
    delete tree;
}

stirval_status stirval_tree_counts(const stirval_tree* tree, size_t* nodes, size_t* leaves, size_t* levels,
                                   int* complete)
{
    return guarded([&] {
        require(tree);
        if (nodes)
            *nodes = tree->tree.node_count();
        if (leaves)
            *leaves = tree->tree.leaves.size();
        if (levels)
            *levels = tree->tree.levels.size();
        if (complete)
            *complete = tree->tree.status == stirval::PTree::Status::complete;
    });
}

stirval_status stirval_tree_child_range(const stirval_tree* tree, int64_t* min_children, int64_t* max_children)
{
    return guarded([&] {
        require(tree, min_children, max_children);
        auto stats = stirval::child_stats(tree->tree);
        *min_children = stats.min_children ? static_cast<int64_t>(*stats.min_children) : -1;
        *max_children = stats.max_children ? static_cast<int64_t>(*stats.max_children) : -1;
    });
}

stirval_status stirval_tree_json(const stirval_tree* tree, const char* timestamp, char** out)
{
    return guarded([&] {
        require(tree, out);
        std::optional<std::string> stamp;
        if (timestamp)
            stamp = timestamp;
        *out = copy_out(stirval::tree_document(tree->tree, stamp).dump());
    });
}

stirval_status stirval_tree_dot(const stirval_tree* tree, char** out)
{
    return guarded([&] {
        require(tree, out);
        *out = copy_out(stirval::tree_dot(tree->tree));
    });
}

stirval_status stirval_fseq(size_t terms, char** out)
{
    return guarded([&] {
        require(out);
        std::string bits;
        for (auto b : stirval::f_sequence(terms))
            bits += static_cast<char>('0' + b);
        *out = copy_out(bits);
    });
}

stirval_status stirval_check_names(char** out)
{
    return guarded([&] {
        require(out);
        *out = copy_out(nlohmann::json(stirval::check_names()).dump());
    });
}

stirval_status stirval_verify(const char* name, const char* params_json, const uint64_t* seed, char** report_json,
                              int* passed)
{
    if (name) {
        const auto& names = stirval::check_names();
        if (std::find(names.begin(), names.end(), name) == names.end()) {
            std::string known;
            for (auto& n : names)
                known += (known.empty() ? "" : ", ") + n;
            last_error = "unknown check '" + std::string(name) + "'; valid checks: " + known;
            return STIRVAL_ERR_UNKNOWN_CHECK;
        }
    }
    return guarded([&] {
        require(name, report_json, passed);
        auto params = params_json ? nlohmann::json::parse(params_json) : nlohmann::json::object();
        std::optional<std::uint64_t> s;
        if (seed)
            s = *seed;
        auto report = stirval::run_check(name, params, s);
        *passed = report.passed();
        *report_json = copy_out(report.to_json().dump());
    });
}

stirval_status stirval_scan(uint64_t n_max, char** out)
{
    return guarded([&] {
        require(out);
        auto report = stirval::check_integral_scan(n_max);
        *out = copy_out(report.observed["integral_pairs"].dump());
    });
}

} // extern "C"
