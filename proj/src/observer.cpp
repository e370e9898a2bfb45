#include "crowds/observer.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <ctime>
#include <thread>
#include <utility>

namespace crowds {

namespace detail {

FarGraph::FarGraph(int n)
    : n_(n), words_(static_cast<std::size_t>((n + 63) / 64)),
      bits_(words_ * static_cast<std::size_t>(n), 0) {}

void FarGraph::add_edge(int i, int j) {
    if (i == j) return;
    bits_[static_cast<std::size_t>(i) * words_ + static_cast<std::size_t>(j) / 64] |=
        std::uint64_t{1} << (j % 64);
    bits_[static_cast<std::size_t>(j) * words_ + static_cast<std::size_t>(i) / 64] |=
        std::uint64_t{1} << (i % 64);
}

bool FarGraph::adjacent(int i, int j) const {
    return (bits_[static_cast<std::size_t>(i) * words_ + static_cast<std::size_t>(j) / 64] >>
            (j % 64)) & 1u;
}

int FarGraph::degree(int i) const {
    int d = 0;
    for (std::uint64_t w : row(i)) d += std::popcount(w);
    return d;
}

std::span<const std::uint64_t> FarGraph::row(int i) const {
    return {bits_.data() + static_cast<std::size_t>(i) * words_, words_};
}

namespace {

// Complete depth-first expansion over bitset candidate sets: every clique
// with vertices in ascending order is visited, so a false result is exact.
struct CliqueSearch {
    int k;
    std::size_t words;
    const std::uint64_t* adj;

    bool expand(int have, std::uint64_t* cand) const {
        int left = 0;
        for (std::size_t w = 0; w < words; ++w) left += std::popcount(cand[w]);
        if (have + left < k) return false;
        if (have == k) return true;

        std::vector<std::uint64_t> next(words);
        for (std::size_t w = 0; w < words; ++w) {
            while (cand[w]) {
                const int b = std::countr_zero(cand[w]);
                cand[w] &= cand[w] - 1;
                const int v = static_cast<int>(w * 64) + b;
                if (have + 1 == k) return true;
                const std::uint64_t* nv = adj + static_cast<std::size_t>(v) * words;
                for (std::size_t x = 0; x < words; ++x) next[x] = cand[x] & nv[x];
                // vertices below w*64 were already cleared from cand
                for (std::size_t x = 0; x < w; ++x) next[x] = 0;
                if (expand(have + 1, next.data())) return true;
            }
        }
        return false;
    }
};

} // namespace

bool has_k_clique(const FarGraph& g, int k) {
    if (k <= 0) return true;
    const int n = g.size();
    if (k > n) return false;
    if (k == 1) return true;

    // peel to the (k-1)-core; no k-clique can involve a peeled vertex
    std::vector<int> deg(n);
    std::vector<char> alive(n, 1);
    std::vector<int> dead;
    for (int i = 0; i < n; ++i) {
        deg[i] = g.degree(i);
        if (deg[i] < k - 1) {
            alive[i] = 0;
            dead.push_back(i);
        }
    }
    int remaining = n - static_cast<int>(dead.size());
    while (!dead.empty()) {
        const int v = dead.back();
        dead.pop_back();
        for (int u = 0; u < n; ++u) {
            if (!alive[u] || !g.adjacent(v, u)) continue;
            if (--deg[u] == k - 2) {
                alive[u] = 0;
                dead.push_back(u);
                --remaining;
            }
        }
    }
    if (remaining < k) return false;
    if (k == 2) return true; // every survivor has an alive neighbor

    // cheap greedy pass; only a "yes" is trusted
    std::vector<int> order;
    order.reserve(remaining);
    for (int i = 0; i < n; ++i)
        if (alive[i]) order.push_back(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return deg[a] != deg[b] ? deg[a] > deg[b] : a < b;
    });
    std::vector<int> clique;
    for (int v : order) {
        bool ok = true;
        for (int u : clique)
            if (!g.adjacent(u, v)) {
                ok = false;
                break;
            }
        if (!ok) continue;
        clique.push_back(v);
        if (static_cast<int>(clique.size()) >= k) return true;
    }

    const std::size_t words = g.words();
    std::vector<std::uint64_t> alive_mask(words, 0);
    for (int i = 0; i < n; ++i)
        if (alive[i]) alive_mask[static_cast<std::size_t>(i) / 64] |= std::uint64_t{1} << (i % 64);
    std::vector<std::uint64_t> adj(static_cast<std::size_t>(n) * words, 0);
    for (int i = 0; i < n; ++i) {
        if (!alive[i]) continue;
        auto r = g.row(i);
        for (std::size_t w = 0; w < words; ++w)
            adj[static_cast<std::size_t>(i) * words + w] = r[w] & alive_mask[w];
    }
    const CliqueSearch search{k, words, adj.data()};
    return search.expand(0, alive_mask.data());
}

} // namespace detail

namespace {

std::string now_utc() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    const std::size_t len = std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return std::string(buf, len);
}

// sep is a cnt x cnt matrix of pairwise separations saturated at >= m.
bool mk_holds(std::size_t cnt, const std::vector<std::uint8_t>& sep, int m, int k) {
    if (static_cast<int>(cnt) < k) return false;
    if (k == 1) return true;
    if (m == 1) return true; // distinct sources are always >= 1 apart
    detail::FarGraph far(static_cast<int>(cnt));
    for (std::size_t i = 0; i < cnt; ++i)
        for (std::size_t j = i + 1; j < cnt; ++j)
            if (sep[i * cnt + j] >= m)
                far.add_edge(static_cast<int>(i), static_cast<int>(j));
    return detail::has_k_clique(far, k);
}

// Runs per_slot(slot, worker_local_cache) for slot in [0, total) across the
// given number of threads. Slot assignment is dynamic but slots index a
// preallocated output array, so results are placement-deterministic.
template <typename PerSlot>
void run_slots(std::size_t total, int workers, PerSlot&& per_slot) {
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
        DistanceCache local(0);
        for (;;) {
            const std::size_t slot = next.fetch_add(1);
            if (slot >= total) break;
            try {
                per_slot(slot, local);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(total);
                break;
            }
            // rows are keyed by the excluded node, so nothing carries over
            local.clear();
        }
    };
    if (workers <= 1 || total <= 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        const int count = static_cast<int>(std::min<std::size_t>(workers, total));
        pool.reserve(count);
        for (int i = 0; i < count; ++i) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
}

} // namespace

struct Crowd::Separations {
    std::vector<NodeIndex> sources; // ascending
    std::vector<std::uint8_t> sep;  // |sources|^2, saturated at cap
    int cap = 0;
};

Crowd::Crowd(TestimonialGraph graph, ObserverParams params)
    : graph_(std::make_shared<const TestimonialGraph>(std::move(graph))), params_(params) {
    params_.validate();
    if (!params_.direction)
        params_.direction =
            graph_->directed() ? Direction::predecessors : Direction::neighbors;
}

Crowd::Separations Crowd::separations_for(NodeIndex n, DistanceCache& cache, int cap) const {
    Separations s;
    auto src = graph_->sources_of(n, *params_.direction);
    s.sources.assign(src.begin(), src.end());
    s.cap = cap;
    const std::size_t cnt = s.sources.size();
    s.sep.assign(cnt * cnt, 0);
    if (cnt < 2) return s;

    const Traversal t = traversal_for(*graph_);
    std::vector<std::shared_ptr<const std::vector<std::uint8_t>>> rows(cnt);
    for (std::size_t i = 0; i < cnt; ++i)
        rows[i] = cache.row(*graph_, n, s.sources[i], t, cap - 1);
    for (std::size_t i = 0; i < cnt; ++i) {
        for (std::size_t j = i + 1; j < cnt; ++j) {
            const std::uint8_t ij = (*rows[i])[s.sources[j]];
            const std::uint8_t ji = (*rows[j])[s.sources[i]];
            const int dij = ij == kUnreached ? cap : ij;
            const int dji = ji == kUnreached ? cap : ji;
            const std::uint8_t d = static_cast<std::uint8_t>(std::min({dij, dji, cap}));
            s.sep[i * cnt + j] = d;
            s.sep[j * cnt + i] = d;
        }
    }
    return s;
}

bool Crowd::is_mk_index(NodeIndex n, int m, int k, DistanceCache& cache) const {
    const std::size_t cnt = graph_->sources_of(n, *params_.direction).size();
    if (static_cast<int>(cnt) < k) return false;
    if (k == 1 || m == 1) return true;
    const Separations s = separations_for(n, cache, m);
    return mk_holds(cnt, s.sep, m, k);
}

int Crowd::s_from_separations(const Separations& sep) const {
    const std::size_t cnt = sep.sources.size();
    if (cnt < 2) return 0;
    int best = 0;
    for (int m = params_.m_max; m >= 1; --m) {
        if (m * params_.k_max <= best) break;
        const int k_hi = std::min<int>(params_.k_max, static_cast<int>(cnt));
        for (int k = k_hi; k >= 2; --k) {
            if (m * k <= best) break;
            if (mk_holds(cnt, sep.sep, m, k)) {
                best = m * k; // largest k for this m: smaller k only lowers m*k
                break;
            }
        }
    }
    return best;
}

int Crowd::h_from_separations(const Separations& sep, int max_h) const {
    const int cnt = static_cast<int>(sep.sources.size());
    for (int h = std::min(max_h, cnt); h >= 1; --h)
        if (mk_holds(sep.sources.size(), sep.sep, h, h)) return h;
    return 0;
}

int Crowd::d_index(NodeIndex n) const {
    const std::size_t vocab = graph_->attribute_vocabulary().size();
    if (vocab == 0) return 0;
    std::vector<char> seen(vocab, 0);
    int count = 0;
    for (NodeIndex s : graph_->sources_of(n, *params_.direction))
        for (std::uint32_t a : graph_->attribute_ids(s))
            if (!seen[a]) {
                seen[a] = 1;
                ++count;
            }
    return count;
}

NodeProfile Crowd::profile_index(NodeIndex n, DistanceCache& cache) const {
    NodeProfile p;
    p.node = graph_->id_of(n);
    const Separations sep = separations_for(n, cache, params_.m_max);
    p.S = s_from_separations(sep);
    p.D = d_index(n);
    p.pi = p.S * p.D;
    p.h = h_from_separations(sep, std::min(params_.m_max, params_.k_max));
    return p;
}

bool Crowd::is_mk_observer(std::string_view n, int m, int k) const {
    if (m < 1) throw ValidationError("m must be at least 1");
    if (k < 1) throw ValidationError("k must be at least 1");
    if (m > 200) throw ValidationError("m above 200 is not supported");
    const NodeIndex i = graph_->require(n);
    std::lock_guard lock(cache_mutex_);
    return is_mk_index(i, m, k, cache_);
}

int Crowd::s_value(std::string_view n) const {
    const NodeIndex i = graph_->require(n);
    std::lock_guard lock(cache_mutex_);
    return s_from_separations(separations_for(i, cache_, params_.m_max));
}

int Crowd::d_value(std::string_view n) const { return d_index(graph_->require(n)); }

int Crowd::pi_value(std::string_view n) const {
    return s_value(n) * d_value(n);
}

int Crowd::h_measure(std::string_view n) const {
    return h_measure(n, std::min(params_.m_max, params_.k_max));
}

int Crowd::h_measure(std::string_view n, int max_h) const {
    if (max_h < 1) throw ValidationError("max_h must be at least 1");
    if (max_h > 200) throw ValidationError("max_h above 200 is not supported");
    const NodeIndex i = graph_->require(n);
    std::lock_guard lock(cache_mutex_);
    return h_from_separations(separations_for(i, cache_, max_h), max_h);
}

NodeProfile Crowd::profile(std::string_view n) const {
    const NodeIndex i = graph_->require(n);
    std::lock_guard lock(cache_mutex_);
    return profile_index(i, cache_);
}

ProfileTable Crowd::profile_all(int workers, const ProgressFn& progress) const {
    return profile_all(graph_->node_ids(), workers, progress);
}

ProfileTable Crowd::profile_all(std::span<const NodeId> subset, int workers,
                                const ProgressFn& progress) const {
    if (workers < 1) throw ValidationError("workers must be at least 1");
    std::vector<NodeIndex> idx;
    idx.reserve(subset.size());
    for (const NodeId& id : subset) idx.push_back(graph_->require(id));
    std::sort(idx.begin(), idx.end());
    idx.erase(std::unique(idx.begin(), idx.end()), idx.end());

    ProfileTable table;
    table.params = params_;
    table.timestamp = now_utc();
    table.rows.resize(idx.size());

    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;
    run_slots(idx.size(), workers, [&](std::size_t slot, DistanceCache& cache) {
        table.rows[slot] = profile_index(idx[slot], cache);
        if (progress) {
            const std::size_t d = done.fetch_add(1) + 1;
            std::lock_guard lock(progress_mutex);
            progress(d, idx.size());
        }
    });
    return table;
}

std::vector<int> Crowd::batch_s(int workers) const {
    if (workers < 1) throw ValidationError("workers must be at least 1");
    std::vector<int> out(graph_->node_count(), 0);
    run_slots(out.size(), workers, [&](std::size_t slot, DistanceCache& cache) {
        const auto n = static_cast<NodeIndex>(slot);
        out[slot] = s_from_separations(separations_for(n, cache, params_.m_max));
    });
    return out;
}

std::size_t Crowd::cache_size() const {
    std::lock_guard lock(cache_mutex_);
    return cache_.size();
}

} // namespace crowds
