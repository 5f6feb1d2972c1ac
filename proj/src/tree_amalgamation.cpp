#include "wfr/tree_amalgamation.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "wfr/tree_morphism.hpp"

namespace wfr {

namespace {

    using IdSet = std::set<int>;

    struct Context {
        FreshPolicy policy;
        IdSource fresh;
        bool free = true;
        std::vector<AmalgamationStep> trace;

        void step(std::string rule, std::string detail) { trace.push_back({std::move(rule), std::move(detail)}); }
    };

    std::string list(const std::vector<int>& v)
    {
        std::string s;
        for (std::size_t i = 0; i < v.size(); ++i)
            s += (i ? "," : "") + std::to_string(v[i]);
        return "{" + s + "}";
    }

    void add_subtree(IdTree& T, int parent, const IdTree& X, int x)
    {
        T.add_child(parent, x, X.node(x).label);
        for (int c : X.children(x))
            add_subtree(T, x, X, c);
    }

    IdTree copy_under_new_root(int root, const IdTree& a, const IdTree& b, int extra, Context& ctx)
    {
        IdTree T;
        T.add_root(root, 0);
        add_subtree(T, root, a, a.root());
        add_subtree(T, root, b, b.root());
        for (int i = 0; i < extra; ++i)
            T.add_child(root, ctx.fresh(), ctx.policy.leaf_label());
        return T;
    }

    // Depth of s counted in base nodes only.
    int base_depth(const IdTree& X, const IdSet& base, int s)
    {
        int d = 0;
        for (int p = X.parent(s); p >= 0; p = X.parent(p))
            if (base.count(p))
                ++d;
        return d;
    }

    int base_parent(const IdTree& X, const IdSet& base, int s)
    {
        for (int p = X.parent(s); p >= 0; p = X.parent(p))
            if (base.count(p))
                return p;
        return -1;
    }

    bool is_identity(const IdTree& X, const IdSet& base) { return X.size() == static_cast<int>(base.size()); }

    bool is_terminal_ext(const IdTree& X, const IdSet& base)
    {
        if (base.empty())
            return true;
        if (!base.count(X.root()))
            return false;
        for (int s : base)
            if (X.parent(s) >= 0 && !base.count(X.parent(s)))
                return false;
        return true;
    }

    IdSet middle_ids(const IdTree& X, const IdSet& base)
    {
        IdSet lower;
        for (int s : base)
            for (int u = s; u >= 0 && !lower.count(u); u = X.parent(u))
                lower.insert(u);
        IdSet middle = lower;
        for (int u : lower)
            if (!base.count(u))
                for (int c : X.children(u))
                    middle.insert(c);
        return middle;
    }

    bool is_nonterminal_ext(const IdTree& X, const IdSet& base)
    {
        return static_cast<int>(middle_ids(X, base).size()) == X.size();
    }

    IdTree decompose_ids(const IdTree& X, const IdSet& base, const Context& ctx)
    {
        IdSet middle = middle_ids(X, base);
        IdTree D = X.induced(middle);
        if (ctx.policy.kind == TreeKind::Tw)
            for (int u : middle)
                if (D.terminal(u) && !X.terminal(u))
                    D.set_label(u, 0);
        return D;
    }

    // A pointed column of height h for fresh surgery: h path nodes of the
    // least degree with the continuation first.
    LexTree fresh_column(int h, const Context& ctx, int& point)
    {
        const int m = ctx.policy.min_degree();
        std::vector<std::vector<int>> ch;
        std::vector<int> labels;
        int prev = -1;
        for (int i = 0; i <= h; ++i) {
            int id = static_cast<int>(ch.size());
            ch.emplace_back();
            labels.push_back(0);
            if (prev >= 0) {
                ch[prev].push_back(id);
                for (int j = 1; j < m; ++j) {
                    ch[prev].push_back(static_cast<int>(ch.size()));
                    ch.emplace_back();
                    labels.push_back(ctx.policy.leaf_label());
                }
            }
            prev = id;
        }
        std::vector<int> renum;
        LexTree c = LexTree::build(ctx.policy.M, ch, labels, 0, &renum);
        point = renum[prev];
        return c;
    }

    // The column of Y between s and its nearest base ancestor, with the ids
    // it has in Y.
    LexTree copied_column(const IdTree& Y, const IdSet& base, int s, const Context& ctx, std::vector<int>& ids,
                          int& point)
    {
        std::vector<int> path;
        for (int u = Y.parent(s); u >= 0 && !base.count(u); u = Y.parent(u))
            path.push_back(u);
        std::reverse(path.begin(), path.end());
        IdSet on_path(path.begin(), path.end());
        std::vector<std::vector<int>> ch;
        std::vector<int> labels, local_ids;
        std::map<int, int> index;
        auto add = [&](int u) {
            int i = static_cast<int>(ch.size());
            index[u] = i;
            ch.emplace_back();
            local_ids.push_back(u);
            labels.push_back(on_path.count(u) || u == s ? 0 : Y.node(u).label);
            return i;
        };
        add(path.front());
        for (int u : path)
            for (int c : Y.children(u)) {
                int i = add(c);
                ch[index.at(u)].push_back(i);
            }
        std::vector<int> renum;
        LexTree col = LexTree::build(ctx.policy.M, ch, labels, 0, &renum);
        ids.assign(col.size(), -1);
        for (std::size_t i = 0; i < local_ids.size(); ++i)
            ids[renum[i]] = local_ids[i];
        point = renum[index.at(s)];
        return col;
    }

    // X with the surgery data of the non-terminal extension base in Y: every
    // node of X on the level of a surgered base level gets Y's column when
    // it is in the base and a fresh column otherwise.
    IdTree graft(IdTree X, const IdTree& Y, const IdSet& base, Context& ctx, bool& used_fresh)
    {
        used_fresh = false;
        std::map<int, std::pair<int, std::vector<int>>> levels;  // base depth -> (height, nodes)
        for (int s : base) {
            int bp = base_parent(Y, base, s);
            int h = Y.depth(s) - (bp < 0 ? 0 : Y.depth(bp) + 1);
            auto& entry = levels[base_depth(Y, base, s)];
            entry.first = h;
            entry.second.push_back(s);
        }
        for (auto it = levels.rbegin(); it != levels.rend(); ++it) {
            const int h = it->second.first;
            if (h == 0)
                continue;
            const int L = X.depth(it->second.second.front());
            for (int x : X.level(L)) {
                int point = 0;
                std::vector<int> ids;
                LexTree col;
                if (base.count(x)) {
                    col = copied_column(Y, base, x, ctx, ids, point);
                }
                else {
                    col = fresh_column(h, ctx, point);
                    ids.resize(col.size());
                    for (auto& id : ids)
                        id = ctx.fresh();
                    used_fresh = true;
                }
                X.splice_column(x, col, point, ids);
            }
        }
        return X;
    }

    // Union of two terminal extensions of base. Terminal nodes of the base
    // planted on both sides get the paired bushes of case (i) on the level
    // above them; every other node of that level gets a bush of the least
    // degree.
    IdTree terminal_union(const IdTree& X1, const IdTree& X2, const IdSet& base, Context& ctx,
                          std::vector<int>* shared_out = nullptr)
    {
        IdTree T = X1;
        std::vector<int> shared;
        for (int v : X2.preorder()) {
            if (base.count(v))
                continue;
            int p = X2.parent(v);
            if (base.count(p) && !X1.terminal(p) && X2.children(p).front() == v)
                shared.push_back(p);
            T.add_child(p, v, X2.node(v).label);
        }
        for (int s : base)
            if (T.terminal(s))
                T.set_label(s, std::max(X1.node(s).label, X2.node(s).label));
        if (shared_out)
            *shared_out = shared;
        if (shared.empty())
            return T;

        const int m2 = ctx.policy.pairing_degree();
        if (m2 == 0)
            throw std::logic_error("paired bushes need a degree >= 2");
        std::map<int, std::vector<int>> by_level;  // level above the planting -> planting nodes
        for (int s : shared)
            by_level[T.depth(s) + 1].push_back(s);
        for (auto it = by_level.rbegin(); it != by_level.rend(); ++it) {
            const int alpha = it->first;
            IdSet paired;
            std::vector<std::pair<int, std::pair<std::vector<int>, std::vector<int>>>> plans;
            for (int s : it->second) {
                const auto& k1 = X1.children(s);
                std::vector<int> k2 = X2.children(s);
                if (k1.size() != k2.size())
                    throw std::logic_error("planted bushes of different degrees at node " + std::to_string(s));
                paired.insert(k1.begin(), k1.end());
                paired.insert(k2.begin(), k2.end());
                plans.push_back({s, {k1, k2}});
            }
            for (int x : T.level(alpha)) {
                if (paired.count(x))
                    continue;
                int c = ctx.fresh();
                T.insert_above(x, c);
                for (int j = 1; j < ctx.policy.min_degree(); ++j)
                    T.add_child(c, ctx.fresh(), ctx.policy.leaf_label());
            }
            for (auto& [s, kids] : plans) {
                const auto& [k1, k2] = kids;
                std::vector<int> cs;
                T.set_children(s, {});
                for (std::size_t j = 0; j < k1.size(); ++j) {
                    int c = ctx.fresh();
                    T.add_child(s, c, 0);
                    T.set_children(c, {k1[j], k2[j]});
                    for (int e = 2; e < m2; ++e)
                        T.add_child(c, ctx.fresh(), ctx.policy.leaf_label());
                    cs.push_back(c);
                }
            }
        }
        return T;
    }

    std::vector<int> chain_of(const IdTree& X)
    {
        std::vector<int> out;
        for (int u = X.root(); u >= 0;) {
            out.push_back(u);
            auto& k = X.children(u);
            u = k.empty() ? -1 : k.front();
        }
        return out;
    }

    IdTree linear_merge(const IdTree& X1, const IdTree& X2, const IdSet& base, Context& ctx)
    {
        auto c1 = chain_of(X1), c2 = chain_of(X2);
        std::vector<int> merged;
        std::size_t i = 0, j = 0;
        bool both = false;
        auto gap = [&](std::vector<int>& c, std::size_t& k) {
            int n = 0;
            while (k < c.size() && !base.count(c[k])) {
                merged.push_back(c[k++]);
                ++n;
            }
            return n;
        };
        for (;;) {
            int a = gap(c1, i), b = gap(c2, j);
            if (a > 0 && b > 0)
                both = true;
            if (i == c1.size() && j == c2.size())
                break;
            merged.push_back(c1[i]);
            ++i;
            ++j;
        }
        IdTree T;
        for (std::size_t k = 0; k < merged.size(); ++k) {
            if (k == 0)
                T.add_root(merged[k], 0);
            else
                T.add_child(merged[k - 1], merged[k], 0);
        }
        if (!merged.empty()) {
            int top = merged.back();
            int l = 0;
            if (X1.contains(top))
                l = std::max(l, X1.node(top).label);
            if (X2.contains(top))
                l = std::max(l, X2.node(top).label);
            T.set_label(top, l);
        }
        if (both)
            ctx.free = false;
        ctx.step("linear", both ? "new points on both sides of a gap" : "new points in disjoint gaps");
        return T;
    }

    IdTree amalgamate_ids(const IdTree& X1, const IdTree& X2, const IdSet& base, Context& ctx)
    {
        if (ctx.policy.M == std::vector<int>{1})
            return linear_merge(X1, X2, base, ctx);
        if (X1.empty() || is_identity(X1, base)) {
            ctx.step("identity", "first extension is trivial");
            return X2;
        }
        if (X2.empty() || is_identity(X2, base)) {
            ctx.step("identity", "second extension is trivial");
            return X1;
        }
        if (base.empty()) {
            ctx.free = false;
            ctx.step("empty-base", "new root below both trees");
            return copy_under_new_root(ctx.fresh(), X1, X2, ctx.policy.pairing_degree() - 2, ctx);
        }
        const bool t1 = is_terminal_ext(X1, base), t2 = is_terminal_ext(X2, base);
        const bool n1 = !t1 && is_nonterminal_ext(X1, base), n2 = !t2 && is_nonterminal_ext(X2, base);
        if (t1 && t2) {
            std::vector<int> shared;
            IdTree T = terminal_union(X1, X2, base, ctx, &shared);
            std::string rule = "iii";
            if (shared.size() == 1) {
                int s = shared.front();
                auto only_at = [&](const IdTree& X) {
                    for (int b : base)
                        if (b != s && X.children(b).size() > 0 && !std::all_of(X.children(b).begin(), X.children(b).end(), [&](int c) { return base.count(c) > 0; }))
                            return false;
                    return true;
                };
                if (only_at(X1) && only_at(X2)) {
                    auto bush = [&](const IdTree& X) {
                        for (int c : X.children(s))
                            if (!X.terminal(c))
                                return false;
                        return true;
                    };
                    rule = bush(X1) && bush(X2) ? "i" : "ii";
                }
            }
            if (!shared.empty())
                ctx.free = false;
            ctx.step(rule, "terminal extensions; plantings shared at " + list(shared));
            return T;
        }
        if ((t1 && n2) || (n1 && t2)) {
            bool fresh = false;
            IdTree T = t1 ? graft(X1, X2, base, ctx, fresh) : graft(X2, X1, base, ctx, fresh);
            if (fresh)
                ctx.free = false;
            ctx.step("iv", std::string(t1 ? "first" : "second") + " extension terminal, the other non-terminal"
                               + (fresh ? "; new columns added" : ""));
            return T;
        }
        if (n1 && n2) {
            // Surgered base levels on each side.
            auto surgered = [&](const IdTree& X) {
                std::set<int> out;
                for (int s : base) {
                    int bp = base_parent(X, base, s);
                    if (X.depth(s) - (bp < 0 ? 0 : X.depth(bp) + 1) > 0)
                        out.insert(base_depth(X, base, s));
                }
                return out;
            };
            auto a1 = surgered(X1), a2 = surgered(X2);
            std::vector<int> common;
            std::set_intersection(a1.begin(), a1.end(), a2.begin(), a2.end(), std::back_inserter(common));
            bool fresh = false;
            IdTree T = graft(X1, X2, base, ctx, fresh);
            if (!common.empty())
                ctx.free = false;
            ctx.step(a1.size() == 1 && a1 == a2 ? "v" : "vi",
                     "non-terminal extensions; common surgery levels " + list(common));
            return T;
        }
        // General position: decompose both sides and amalgamate step by step.
        ctx.step("vii", "canonical decompositions of both extensions");
        IdTree S1 = decompose_ids(X1, base, ctx);
        IdTree S2 = decompose_ids(X2, base, ctx);
        const IdSet s1_ids = S1.ids(), s2_ids = S2.ids();
        bool fresh = false;
        IdTree Sp = graft(S1, S2, base, ctx, fresh);
        ctx.step(fresh ? "vi" : "v", "amalgamate the non-terminal parts");
        if (fresh)
            ctx.free = false;
        IdTree Spp = decompose_ids(Sp, s2_ids, ctx);
        const IdSet spp_ids = Spp.ids();
        IdTree T1p = graft(X1, Sp, s1_ids, ctx, fresh);
        ctx.step("iv", "first terminal part over the amalgamated base");
        if (fresh)
            ctx.free = false;
        IdTree T2pp = graft(X2, Spp, s2_ids, ctx, fresh);
        ctx.step("iv", "second terminal part over the middle tree");
        if (fresh)
            ctx.free = false;
        std::vector<int> shared;
        IdTree T = terminal_union(T1p, T2pp, spp_ids, ctx, &shared);
        if (!shared.empty())
            ctx.free = false;
        ctx.step("iii", "terminal union; plantings shared at " + list(shared));
        return T;
    }

} // namespace

json TreeAmalgam::to_json() const
{
    json j;
    j["ok"] = ok;
    if (!ok) {
        j["incompatible"] = incompatible;
        return j;
    }
    j["tree"] = tree.to_json();
    j["canonical"] = tree.canonical();
    j["left"] = left;
    j["right"] = right;
    j["free"] = free;
    json t = json::array();
    for (auto& s : trace)
        t.push_back({{"case", s.rule}, {"detail", s.detail}});
    j["trace"] = t;
    return j;
}

TreeAmalgam amalgamate(const LexTree& S, const LexTree& T1, const std::vector<int>& f1, const LexTree& T2,
                       const std::vector<int>& f2, TreeKind kind)
{
    if (S.M() != T1.M() || S.M() != T2.M())
        throw InputError("amalgamate: trees with different M");
    for (auto* pr : {&f1, &f2}) {
        const LexTree& T = pr == &f1 ? T1 : T2;
        auto v = morphism_violations(S, T, *pr, MorphismFlags{true, true, true});
        if (!v.empty())
            throw InputError(std::string("amalgamate: ") + (pr == &f1 ? "first" : "second") + " leg: " + v.front());
    }
    TreeAmalgam out;
    out.incompatible = nodes_of_incompatibility(S, T1, f1, T2, f2);
    if (!out.incompatible.empty())
        return out;

    // Shared id space: S nodes keep their index, other nodes of T1 and T2
    // get disjoint ranges.
    const int n = S.size();
    std::vector<int> ids1(T1.size(), -1), ids2(T2.size(), -1);
    for (int s = 0; s < n; ++s) {
        ids1[f1[s]] = s;
        ids2[f2[s]] = s;
    }
    int next = n;
    for (auto& id : ids1)
        if (id < 0)
            id = next++;
    for (auto& id : ids2)
        if (id < 0)
            id = next++;
    IdTree X1(T1, ids1), X2(T2, ids2);
    IdSet base;
    for (int s = 0; s < n; ++s)
        base.insert(s);

    Context ctx{FreshPolicy{S.M(), kind}, IdSource{next}, true, {}};
    IdTree T = amalgamate_ids(X1, X2, base, ctx);

    // Terminal labels: the decided degrees of both inputs.
    std::map<int, int> label;
    for (int v = 0; v < T1.size(); ++v)
        if (T1.terminal(v))
            label[ids1[v]] = std::max(label[ids1[v]], T1.label(v));
    for (int v = 0; v < T2.size(); ++v)
        if (T2.terminal(v))
            label[ids2[v]] = std::max(label[ids2[v]], T2.label(v));
    for (auto& [id, l] : label)
        if (T.contains(id) && T.terminal(id))
            T.set_label(id, l);

    std::unordered_map<int, int> to;
    out.tree = T.to_tree(S.M(), &to);
    out.left.resize(T1.size());
    out.right.resize(T2.size());
    for (int v = 0; v < T1.size(); ++v)
        out.left[v] = to.at(ids1[v]);
    for (int v = 0; v < T2.size(); ++v)
        out.right[v] = to.at(ids2[v]);
    out.ok = true;
    out.free = ctx.free;
    out.trace = std::move(ctx.trace);
    return out;
}

std::vector<std::string> amalgam_violations(const LexTree& S, const LexTree& T1, const std::vector<int>& f1,
                                            const LexTree& T2, const std::vector<int>& f2, const TreeAmalgam& a,
                                            TreeKind kind)
{
    std::vector<std::string> out;
    if (!a.ok) {
        out.push_back("no amalgam");
        return out;
    }
    for (auto& v : validate(a.tree, kind))
        out.push_back("result node " + std::to_string(v.node) + ": " + v.rule);
    for (auto& v : morphism_violations(T1, a.tree, a.left, MorphismFlags{true, true, true}))
        out.push_back("left leg: " + v);
    for (auto& v : morphism_violations(T2, a.tree, a.right, MorphismFlags{true, true, true}))
        out.push_back("right leg: " + v);
    if (!out.empty())
        return out;
    std::set<int> base;
    for (int s = 0; s < S.size(); ++s) {
        if (a.left[f1[s]] != a.right[f2[s]])
            out.push_back("legs disagree on node " + std::to_string(s));
        base.insert(a.left[f1[s]]);
    }
    std::set<int> l(a.left.begin(), a.left.end()), common;
    for (int r : a.right)
        if (l.count(r))
            common.insert(r);
    if (common != base)
        out.push_back("images overlap outside S");
    return out;
}

bool is_amalgamable_tree_arrow(const LexTree& S, const LexTree& T, const std::vector<int>& f,
                               const TreeVariant& variant)
{
    auto v = morphism_violations(S, T, f, MorphismFlags::for_variant(variant));
    if (!v.empty())
        throw InputError("not a " + variant.name() + " arrow: " + v.front());
    if (S.M().size() <= 1 || variant.kind == TreeKind::Ta)
        return true;
    for (int s = 0; s < S.size(); ++s) {
        if (!S.terminal(s))
            continue;
        if (variant.kind == TreeKind::Tw ? T.terminal(f[s]) : !T.decided(f[s]))
            return false;
    }
    return true;
}

} // namespace wfr
