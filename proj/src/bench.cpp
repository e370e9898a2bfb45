#include "crowds/bench.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <mutex>
#include <ostream>
#include <random>
#include <thread>

#include "crowds/observer.hpp"

namespace crowds {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// deterministic per-(cell, rep) seed so reruns regenerate identical graphs
std::uint64_t derive_seed(std::uint64_t base, int n, double p, int rep) {
    std::uint64_t h = splitmix64(base);
    h = splitmix64(h ^ static_cast<std::uint64_t>(n));
    h = splitmix64(h ^ std::bit_cast<std::uint64_t>(p));
    h = splitmix64(h ^ static_cast<std::uint64_t>(rep));
    return h;
}

void append_value(std::string& out, double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    out.append(buf, ptr);
}

void append_value(std::string& out, long long v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    out.append(buf, ptr);
}

} // namespace

void BenchPlan::validate() const {
    if (node_counts.empty())
        throw ValidationError("benchmark plan needs at least one node count");
    for (int n : node_counts)
        if (n < 1) throw ValidationError("node counts must be at least 1");
    if (edge_probabilities.empty())
        throw ValidationError("benchmark plan needs at least one edge probability");
    for (double p : edge_probabilities)
        if (!(p >= 0.0 && p <= 1.0))
            throw ValidationError("edge probabilities must lie in [0, 1]");
    if (repetitions < 1) throw ValidationError("repetitions must be at least 1");
    if (workers < 1) throw ValidationError("workers must be at least 1");
    if (per_cell_budget_seconds &&
        (!std::isfinite(*per_cell_budget_seconds) || *per_cell_budget_seconds <= 0.0))
        throw ValidationError("per-cell budget must be a positive finite number of seconds");
}

TestimonialGraph random_digraph(int n, double p, std::uint64_t seed) {
    if (n < 1) throw ValidationError("n must be at least 1");
    if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("p must lie in [0, 1]");

    std::mt19937_64 rng(seed);
    GraphBuilder builder(true);
    for (int i = 0; i < n; ++i) builder.add_node(std::to_string(i));
    for (int u = 0; u < n; ++u) {
        for (int v = 0; v < n; ++v) {
            if (u == v) continue;
            // top 53 bits -> uniform double in [0, 1)
            const double x = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            if (x < p) builder.add_edge(std::to_string(u), std::to_string(v));
        }
    }
    return builder.build();
}

std::vector<BenchRow> run_scaling_benchmark(const BenchPlan& plan, std::ostream* log) {
    plan.validate();

    struct Cell {
        int n;
        double p;
    };
    std::vector<Cell> cells;
    for (int n : plan.node_counts)
        for (double p : plan.edge_probabilities) cells.push_back({n, p});

    std::vector<std::vector<BenchRow>> per_cell(cells.size());
    std::mutex log_mutex;

    auto run_cell = [&](std::size_t ci) {
        const auto [n, p] = cells[ci];
        for (int rep = 0; rep < plan.repetitions; ++rep) {
            const TestimonialGraph g =
                random_digraph(n, p, derive_seed(plan.seed, n, p, rep));
            const Crowd crowd(g);
            const auto t0 = std::chrono::steady_clock::now();
            const auto s = crowd.batch_s(plan.workers);
            const auto t1 = std::chrono::steady_clock::now();
            (void)s;
            const double seconds = std::chrono::duration<double>(t1 - t0).count();
            per_cell[ci].push_back({n, p, rep, plan.workers, seconds});
            if (log) {
                std::lock_guard lock(log_mutex);
                *log << "bench n=" << n << " p=" << p << " rep=" << rep << ": " << seconds
                     << "s\n";
            }
            if (plan.per_cell_budget_seconds && seconds > *plan.per_cell_budget_seconds) {
                if (log) {
                    std::lock_guard lock(log_mutex);
                    *log << "bench n=" << n << " p=" << p
                         << ": budget exceeded, skipping remaining reps\n";
                }
                break;
            }
        }
    };

    if (!plan.parallel_cells || cells.size() <= 1) {
        for (std::size_t ci = 0; ci < cells.size(); ++ci) run_cell(ci);
    } else {
        std::atomic<std::size_t> next{0};
        auto work = [&] {
            for (;;) {
                const std::size_t ci = next.fetch_add(1);
                if (ci >= cells.size()) break;
                run_cell(ci);
            }
        };
        const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
        const std::size_t count = std::min<std::size_t>(hw, cells.size());
        std::vector<std::thread> pool;
        pool.reserve(count);
        for (std::size_t i = 0; i < count; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    std::vector<BenchRow> rows;
    for (auto& cell_rows : per_cell)
        rows.insert(rows.end(), cell_rows.begin(), cell_rows.end());
    return rows;
}

std::string write_timing_csv(std::span<const BenchRow> rows) {
    std::string out = "n,p,rep,workers,seconds\n";
    for (const BenchRow& r : rows) {
        append_value(out, static_cast<long long>(r.n));
        out += ',';
        append_value(out, r.p);
        out += ',';
        append_value(out, static_cast<long long>(r.rep));
        out += ',';
        append_value(out, static_cast<long long>(r.workers));
        out += ',';
        append_value(out, r.seconds);
        out += '\n';
    }
    return out;
}

} // namespace crowds
