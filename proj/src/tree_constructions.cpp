#include "wfr/tree_constructions.hpp"

#include <algorithm>
#include <numeric>

#include "wfr/category_ops.hpp"
#include "wfr/tree_category.hpp"
#include "wfr/tree_morphism.hpp"

namespace wfr {

json Domination::to_json() const
{
    return {{"tree", tree.to_json()},
            {"canonical", tree.canonical()},
            {"inclusion", inclusion},
            {"embedding", embedding},
            {"added", added}};
}

Domination level_dominate(const LexTree& S, const LexTree& T, const std::vector<int>& f, TreeKind kind)
{
    auto v = morphism_violations(S, T, f, MorphismFlags{false, true, true});
    if (!v.empty())
        throw InputError("level_dominate: not a leveless inclusion: " + v.front());
    FreshPolicy policy{S.M(), kind};
    std::vector<int> ids(T.size());
    std::iota(ids.begin(), ids.end(), 0);
    IdTree X(T, ids);
    IdSource fresh{T.size()};
    int added = 0;
    for (int d = 0, h = S.height(); d < h; ++d) {
        auto nodes = S.level(d);
        int target = 0;
        for (int s : nodes)
            target = std::max(target, X.depth(f[s]));
        for (int s : nodes) {
            for (int gap = target - X.depth(f[s]); gap > 0; --gap) {
                int c = fresh();
                X.insert_above(f[s], c);
                for (int j = 1; j < policy.min_degree(); ++j)
                    X.add_child(c, fresh(), policy.leaf_label());
                added += policy.min_degree();
            }
        }
    }
    Domination out;
    std::unordered_map<int, int> to;
    out.tree = X.to_tree(S.M(), &to);
    out.embedding.resize(T.size());
    for (int t = 0; t < T.size(); ++t)
        out.embedding[t] = to.at(t);
    out.inclusion = compose_maps(out.embedding, f);
    out.added = added;
    return out;
}

VTree build_V(int s, int y)
{
    if (s < 1 || y < 0)
        throw InputError("build_V: need |S| >= 1 and |Y| >= 0");
    VColoring all;
    std::vector<int> colour(s);
    std::iota(colour.begin(), colour.end(), 0);
    std::vector<std::vector<int>> frontier{{}};
    for (int len = 0; len + 1 < y; ++len) {
        std::vector<std::vector<int>> next;
        for (auto& t : frontier) {
            all[t] = colour;
            for (int v = 0; v < s; ++v) {
                auto u = t;
                u.push_back(v);
                next.push_back(std::move(u));
            }
        }
        frontier = std::move(next);
    }
    return prune_V(s, y, all, {s});
}

VTree prune_V(int s, int y, const VColoring& phi, const std::vector<int>& M)
{
    if (s < 1 || y < 0)
        throw InputError("prune_V: need |S| >= 1 and |Y| >= 0");
    VTree out;
    if (y == 0) {
        out.tree = LexTree(M);
        return out;
    }
    std::vector<std::vector<int>> children;
    std::vector<std::vector<int>> seq;
    std::vector<int> stack{0};
    children.emplace_back();
    seq.push_back({});
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (static_cast<int>(seq[v].size()) + 1 >= y)
            continue;
        auto it = phi.find(seq[v]);
        if (it == phi.end())
            throw InputError("prune_V: no colour for a node of length " + std::to_string(seq[v].size()));
        std::vector<int> c = it->second;
        std::sort(c.begin(), c.end());
        c.erase(std::unique(c.begin(), c.end()), c.end());
        if (c.empty() || c.front() != 0)
            throw InputError("prune_V: a colour does not contain 0");
        if (c.back() >= s)
            throw InputError("prune_V: colour outside S");
        if (!std::binary_search(M.begin(), M.end(), static_cast<int>(c.size())))
            throw InputError("prune_V: colour size " + std::to_string(c.size()) + " not in M");
        for (int val : c) {
            int id = static_cast<int>(seq.size());
            auto u = seq[v];
            u.push_back(val);
            seq.push_back(std::move(u));
            children.emplace_back();
            children[v].push_back(id);
            stack.push_back(id);
        }
    }
    std::vector<int> labels(seq.size(), 0);
    std::vector<int> renum;
    out.tree = LexTree::build(M, children, labels, 0, &renum);
    out.node.resize(seq.size());
    for (std::size_t i = 0; i < seq.size(); ++i)
        out.node[renum[i]] = seq[i];
    return out;
}

VColoring vcoloring_from_json(const json& j)
{
    VColoring phi;
    if (!j.is_array())
        throw InputError("colouring must be an array of {node, colour} entries");
    for (auto& e : j)
        phi[e.at("node").get<std::vector<int>>()] = e.at("colour").get<std::vector<int>>();
    return phi;
}

json MillikenResult::to_json() const
{
    return {{"N", N ? json(*N) : json(nullptr)}, {"exhausted", exhausted}, {"rejected", rejected}, {"nodes", nodes}};
}

MillikenResult milliken_witness_search(int m, int a, int b, int k, int N_max, std::uint64_t node_limit,
                                       unsigned threads)
{
    if (m < 1 || a < 1 || b < a || k < 1 || N_max < 1)
        throw InputError("milliken search: need m, a, k >= 1 and b >= a");
    TreeCategory cat({m}, TreeVariant{TreeKind::Tw, true});
    ObjectId A = cat.object(LexTree::balanced({m}, m, a));
    ObjectId B = cat.object(LexTree::balanced({m}, m, b));
    BadColoringQuery q;
    q.alpha = cat.identity(A);
    q.b = B;
    q.family = cat.hom(A, B);
    q.colors = k;
    SearchBudget budget;
    budget.max_coloring_nodes = node_limit;
    budget.threads = threads;

    MillikenResult out;
    for (int N = b; N <= N_max; ++N) {
        ObjectId v = cat.object(LexTree::balanced({m}, m, N));
        auto r = find_bad_coloring(cat, q, v, budget);
        out.nodes += r.nodes;
        if (r.status == ColoringStatus::None) {
            out.N = N;
            return out;
        }
        if (r.status == ColoringStatus::Exhausted) {
            out.exhausted = true;
            return out;
        }
        json verts = json::array();
        for (auto& e : r.vertices)
            verts.push_back(e.data);
        out.rejected.push_back({{"N", N}, {"vertices", verts}, {"coloring", r.coloring}});
    }
    return out;
}

} // namespace wfr
