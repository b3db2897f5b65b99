#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <optional>
#include <thread>
#include <vector>

#include "qpt/config.hpp"
#include "qpt/table.hpp"

namespace qpt::cli {

inline constexpr const char* kVersion = "1.0.0";

/// Evaluates fn(0..n-1) on up to `threads` workers. Results come back in
/// index order; if any call throws, the exception of the lowest failing
/// index is rethrown after all workers have stopped.
template <typename Fn>
auto parallel_map(std::size_t n, int threads, Fn&& fn) -> std::vector<decltype(fn(std::size_t{}))> {
    using R = decltype(fn(std::size_t{}));
    std::vector<std::optional<R>> slots(n);
    std::vector<std::exception_ptr> errors(n);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i = next++; i < n; i = next++) {
            try {
                slots[i].emplace(fn(i));
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    const std::size_t workers = std::min<std::size_t>(std::max(threads, 1), std::max<std::size_t>(n, 1));
    if (workers <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    std::vector<R> out;
    out.reserve(n);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

/// Thread count: explicit flag, else QPT_THREADS, else the config value.
int resolve_threads(std::optional<int> flag, const RunConfig& config);

struct RunOutput {
    io::ResultTable table;
    std::optional<io::ResultTable> summary;  // per-series or per-group digest
};

RunOutput run(const RunConfig& config);

/// Writes the table (and the summary next to it as <stem>.summary<ext>) to
/// every configured output path. Returns the paths written.
std::vector<std::string> write_outputs(const RunConfig& config, const RunOutput& output);

}  // namespace qpt::cli
