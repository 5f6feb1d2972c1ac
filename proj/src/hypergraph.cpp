#include "wfr/hypergraph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "wfr/parallel.hpp"

namespace wfr {

namespace {

    Hypergraph normalized(const Hypergraph& h)
    {
        Hypergraph out;
        out.vertices = h.vertices;
        std::set<std::vector<int>> seen;
        for (auto e : h.edges) {
            std::sort(e.begin(), e.end());
            e.erase(std::unique(e.begin(), e.end()), e.end());
            for (int v : e)
                if (v < 0 || v >= h.vertices)
                    throw std::invalid_argument("hyperedge vertex out of range");
            if (seen.insert(e).second)
                out.edges.push_back(std::move(e));
        }
        return out;
    }

    class Solver {
    public:
        Solver(const Hypergraph& h, int k) : h_(h), k_(k)
        {
            incident_.resize(h.vertices);
            for (std::size_t e = 0; e < h.edges.size(); ++e)
                for (int v : h.edges[e])
                    incident_[v].push_back(static_cast<int>(e));
            assigned_.assign(h.edges.size(), 0);
            mono_.assign(h.edges.size(), -1);
            color_.assign(h.vertices, -1);
            forbid_.assign(std::size_t(h.vertices) * k, 0);
        }

        bool assign(int v, int c)
        {
            color_[v] = c;
            bool ok = true;
            for (int e : incident_[v]) {
                trail_.push_back({Op::Edge, e, mono_[e]});
                ++assigned_[e];
                if (mono_[e] == -1)
                    mono_[e] = c;
                else if (mono_[e] != c)
                    mono_[e] = -2;
                if (mono_[e] < 0)
                    continue;
                int size = static_cast<int>(h_.edges[e].size());
                if (assigned_[e] == size) {
                    ok = false;
                }
                else if (assigned_[e] == size - 1) {
                    for (int u : h_.edges[e])
                        if (color_[u] < 0) {
                            ++forbid_[std::size_t(u) * k_ + mono_[e]];
                            trail_.push_back({Op::Forbid, u, mono_[e]});
                            if (blocked(u))
                                ok = false;
                            break;
                        }
                }
            }
            return ok;
        }

        std::size_t mark() const { return trail_.size(); }

        void undo(int v, std::size_t mark)
        {
            while (trail_.size() > mark) {
                auto op = trail_.back();
                trail_.pop_back();
                if (op.kind == Op::Edge) {
                    --assigned_[op.a];
                    mono_[op.a] = op.b;
                }
                else {
                    --forbid_[std::size_t(op.a) * k_ + op.b];
                }
            }
            color_[v] = -1;
        }

        bool forbidden(int v, int c) const { return forbid_[std::size_t(v) * k_ + c] > 0; }

        // Depth-first search from vertex i; returns Found / None / Exhausted.
        ColoringStatus search(int i, int max_used, std::uint64_t& nodes, std::uint64_t limit)
        {
            if (i == h_.vertices)
                return ColoringStatus::Found;
            int top = std::min(k_ - 1, max_used + 1);
            for (int c = 0; c <= top; ++c) {
                if (forbidden(i, c))
                    continue;
                if (++nodes > limit)
                    return ColoringStatus::Exhausted;
                auto m = mark();
                if (assign(i, c)) {
                    auto r = search(i + 1, std::max(max_used, c), nodes, limit);
                    if (r != ColoringStatus::None)
                        return r;
                }
                undo(i, m);
            }
            return ColoringStatus::None;
        }

        const std::vector<int>& coloring() const { return color_; }

    private:
        bool blocked(int u) const
        {
            for (int c = 0; c < k_; ++c)
                if (!forbidden(u, c))
                    return false;
            return true;
        }

        enum class Op { Edge, Forbid };
        struct TrailEntry {
            Op kind;
            int a;
            int b;
        };

        const Hypergraph& h_;
        int k_;
        std::vector<std::vector<int>> incident_;
        std::vector<int> assigned_;
        std::vector<int> mono_;
        std::vector<int> color_;
        std::vector<int> forbid_;
        std::vector<TrailEntry> trail_;
    };

    // Prefixes of the first d vertices under colour-symmetry breaking, in
    // depth-first order.
    void prefixes(int d, int k, std::vector<int>& cur, int max_used, std::vector<std::vector<int>>& out)
    {
        if (static_cast<int>(cur.size()) == d) {
            out.push_back(cur);
            return;
        }
        for (int c = 0; c <= std::min(k - 1, max_used + 1); ++c) {
            cur.push_back(c);
            prefixes(d, k, cur, std::max(max_used, c), out);
            cur.pop_back();
        }
    }

    constexpr std::size_t kMaxShards = 64;

} // namespace

bool is_good_coloring(const Hypergraph& h, int k, const std::vector<int>& coloring)
{
    if (static_cast<int>(coloring.size()) != h.vertices)
        return false;
    for (int c : coloring)
        if (c < 0 || c >= k)
            return false;
    for (auto& e : h.edges) {
        bool mono = true;
        for (std::size_t i = 1; i < e.size(); ++i)
            if (coloring[e[i]] != coloring[e[0]])
                mono = false;
        if (mono)
            return false;
    }
    return true;
}

ColoringResult find_good_coloring(const Hypergraph& raw, int k, std::uint64_t node_limit, unsigned threads)
{
    if (k < 0)
        throw std::invalid_argument("negative colour count");
    Hypergraph h = normalized(raw);
    ColoringResult result;
    for (auto& e : h.edges)
        if (e.size() <= 1)
            return result;  // always monochromatic
    if (h.vertices == 0) {
        if (h.edges.empty())
            result.status = ColoringStatus::Found;
        return result;
    }
    if (k == 0)
        return result;

    int d = 0;
    for (std::size_t count = 1; d < h.vertices && count * k <= kMaxShards; ++d)
        count *= k;
    std::vector<std::vector<int>> shards;
    std::vector<int> cur;
    prefixes(d, k, cur, -1, shards);

    struct ShardOutcome {
        ColoringStatus status = ColoringStatus::None;
        std::vector<int> coloring;
        std::uint64_t nodes = 0;
        bool ran = false;
    };
    std::vector<ShardOutcome> outcomes(shards.size());
    std::atomic<std::size_t> first_found{shards.size()};

    auto run_shard = [&](std::size_t s) {
        if (s > first_found.load())
            return;
        Solver solver(h, k);
        auto& out = outcomes[s];
        out.ran = true;
        int max_used = -1;
        for (int v = 0; v < d; ++v) {
            int c = shards[s][v];
            ++out.nodes;
            if (solver.forbidden(v, c) || !solver.assign(v, c))
                return;
            max_used = std::max(max_used, c);
        }
        out.status = solver.search(d, max_used, out.nodes, node_limit);
        if (out.status == ColoringStatus::Found) {
            out.coloring = solver.coloring();
            std::size_t prev = first_found.load();
            while (s < prev && !first_found.compare_exchange_weak(prev, s)) {
            }
        }
    };

    if (threads <= 1) {
        std::uint64_t total = 0;
        for (std::size_t s = 0; s < shards.size(); ++s) {
            run_shard(s);
            total += outcomes[s].nodes;
            if (outcomes[s].status == ColoringStatus::Found) {
                result.status = ColoringStatus::Found;
                result.coloring = outcomes[s].coloring;
                result.nodes = total;
                return result;
            }
            if (outcomes[s].status == ColoringStatus::Exhausted || total > node_limit) {
                result.status = ColoringStatus::Exhausted;
                result.nodes = total;
                return result;
            }
        }
        result.nodes = total;
        return result;
    }

    parallel_for(shards.size(), threads, run_shard);
    std::uint64_t total = 0;
    for (std::size_t s = 0; s < shards.size(); ++s) {
        total += outcomes[s].nodes;
        if (outcomes[s].status == ColoringStatus::Found) {
            result.status = ColoringStatus::Found;
            result.coloring = outcomes[s].coloring;
            result.nodes = total;
            return result;
        }
        if (outcomes[s].status == ColoringStatus::Exhausted || total > node_limit) {
            result.status = ColoringStatus::Exhausted;
            result.nodes = total;
            return result;
        }
    }
    result.nodes = total;
    return result;
}

ColoringResult brute_force_good_coloring(const Hypergraph& h, int k)
{
    ColoringResult result;
    if (k <= 0) {
        if (h.vertices == 0 && h.edges.empty())
            result.status = ColoringStatus::Found;
        return result;
    }
    double bits = h.vertices * std::log2(double(k));
    if (bits > 24.0)
        throw std::invalid_argument("brute-force colouring space too large");
    std::vector<int> c(h.vertices, 0);
    for (;;) {
        ++result.nodes;
        if (is_good_coloring(h, k, c)) {
            result.status = ColoringStatus::Found;
            result.coloring = c;
            return result;
        }
        int i = h.vertices - 1;
        while (i >= 0 && c[i] == k - 1)
            c[i--] = 0;
        if (i < 0)
            return result;
        ++c[i];
    }
}

} // namespace wfr
