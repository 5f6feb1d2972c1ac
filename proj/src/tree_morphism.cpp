#include "wfr/tree_morphism.hpp"

#include <algorithm>
#include <set>

namespace wfr {

std::vector<std::string> morphism_violations(const LexTree& S, const LexTree& T, const std::vector<int>& f,
                                             MorphismFlags flags)
{
    std::vector<std::string> out;
    if (static_cast<int>(f.size()) != S.size()) {
        out.push_back("map has " + std::to_string(f.size()) + " entries for " + std::to_string(S.size()) + " nodes");
        return out;
    }
    for (int v = 0; v < S.size(); ++v)
        if (f[v] < 0 || f[v] >= T.size()) {
            out.push_back("node " + std::to_string(v) + " mapped out of range");
            return out;
        }
    if (S.M() != T.M())
        out.push_back("source and target have different M");
    std::set<int> image(f.begin(), f.end());
    if (static_cast<int>(image.size()) != S.size())
        out.push_back("map is not injective");

    for (int s = 0; s < S.size(); ++s) {
        const int t = f[s];
        if (flags.labels && S.decided(s) && T.label(t) != S.label(s))
            out.push_back("node " + std::to_string(s) + ": decided degree " + std::to_string(S.label(s))
                          + " not preserved");
        if (S.terminal(s))
            continue;
        auto& kids = S.children(s);
        if (T.terminal(t) || T.children(t).size() != kids.size()) {
            out.push_back("node " + std::to_string(s) + ": splitting degree not preserved");
            continue;
        }
        std::set<int> branches;
        for (std::size_t i = 0; i < kids.size(); ++i) {
            int b = T.branch_of(t, f[kids[i]]);
            if (b < 0) {
                out.push_back("node " + std::to_string(kids[i]) + " not mapped above the image of its parent");
                continue;
            }
            if (!branches.insert(b).second)
                out.push_back("node " + std::to_string(s) + ": two successors mapped into one branch (meets not preserved)");
            if (flags.lex && b != static_cast<int>(i))
                out.push_back("node " + std::to_string(kids[i]) + ": lexicographic order not preserved");
        }
    }
    if (flags.levels) {
        for (int x = 0; x < S.size(); ++x)
            for (int y = x + 1; y < S.size(); ++y) {
                int ds = S.depth(x) - S.depth(y), dt = T.depth(f[x]) - T.depth(f[y]);
                if ((ds == 0) != (dt == 0) || (ds < 0) != (dt < 0)) {
                    out.push_back("nodes " + std::to_string(x) + ", " + std::to_string(y) + ": levels not preserved");
                    return out;
                }
            }
    }
    return out;
}

namespace {
    struct EmbeddingSearch {
        const LexTree& S;
        const LexTree& T;
        MorphismFlags flags;
        const std::vector<int>* partial;
        std::size_t limit;
        std::vector<int> order;      // S nodes, breadth first
        std::vector<int> f;
        std::vector<int> level_of;   // T depth chosen for each S depth, -1 if open
        std::vector<std::vector<bool>> used_branch;
        std::vector<std::vector<int>> out;

        EmbeddingSearch(const LexTree& s, const LexTree& t, MorphismFlags fl, const std::vector<int>* p, std::size_t lim)
            : S(s), T(t), flags(fl), partial(p), limit(lim)
        {
            for (int d = 0, h = S.height(); d < h; ++d)
                for (int v : S.level(d))
                    order.push_back(v);
            f.assign(S.size(), -1);
            level_of.assign(S.height(), -1);
            used_branch.assign(T.size(), {});
        }

        bool node_ok(int s, int t) const
        {
            if (partial && (*partial)[s] >= 0 && (*partial)[s] != t)
                return false;
            if (!S.terminal(s) && (T.terminal(t) || T.children(t).size() != S.children(s).size()))
                return false;
            if (flags.labels && S.decided(s) && T.label(t) != S.label(s))
                return false;
            if (flags.levels && level_of[S.depth(s)] >= 0 && T.depth(t) != level_of[S.depth(s)])
                return false;
            return true;
        }

        void place(std::size_t i)
        {
            if (out.size() >= limit)
                return;
            if (i == order.size()) {
                out.push_back(f);
                return;
            }
            const int s = order[i];
            const int p = S.parent(s);
            const int d = S.depth(s);
            const bool opens_level = flags.levels && level_of[d] < 0;
            auto visit = [&](int t) {
                if (!node_ok(s, t))
                    return;
                f[s] = t;
                if (opens_level)
                    level_of[d] = T.depth(t);
                place(i + 1);
                if (opens_level)
                    level_of[d] = -1;
                f[s] = -1;
            };
            auto visit_subtree = [&](int c) {
                for (int t = c; t < T.subtree_end(c); ++t)
                    visit(t);
            };
            if (p < 0) {
                for (int t = 0; t < T.size(); ++t)
                    visit(t);
                return;
            }
            const int fp = f[p];
            const int idx = S.child_index(s);
            auto& branches = T.children(fp);
            if (flags.lex) {
                visit_subtree(branches[idx]);
                return;
            }
            auto& used = used_branch[fp];
            if (used.empty())
                used.assign(branches.size(), false);
            for (std::size_t b = 0; b < branches.size(); ++b) {
                if (used[b])
                    continue;
                used[b] = true;
                visit_subtree(branches[b]);
                used[b] = false;
            }
        }
    };
} // namespace

std::vector<std::vector<int>> enumerate_embeddings(const LexTree& S, const LexTree& T, MorphismFlags flags,
                                                   const std::vector<int>* partial, std::size_t limit)
{
    if (S.M() != T.M())
        return {};
    if (partial && static_cast<int>(partial->size()) != S.size())
        throw InputError("enumerate_embeddings: partial map has the wrong length");
    if (S.empty())
        return {std::vector<int>{}};
    if (S.size() > T.size())
        return {};
    EmbeddingSearch search(S, T, flags, partial, limit);
    search.place(0);
    std::sort(search.out.begin(), search.out.end());
    return std::move(search.out);
}

bool has_embedding(const LexTree& S, const LexTree& T, MorphismFlags flags)
{
    return !enumerate_embeddings(S, T, flags, nullptr, 1).empty();
}

std::vector<int> compose_maps(const std::vector<int>& g, const std::vector<int>& f)
{
    std::vector<int> h(f.size());
    for (std::size_t i = 0; i < f.size(); ++i)
        h[i] = g.at(f[i]);
    return h;
}

} // namespace wfr
