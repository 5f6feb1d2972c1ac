#include "wfr/tree_category.hpp"

#include <algorithm>
#include <numeric>

#include "wfr/tree_amalgamation.hpp"
#include "wfr/tree_constructions.hpp"
#include "wfr/tree_extension.hpp"

namespace wfr {

TreeCategory::TreeCategory(std::vector<int> M, TreeVariant variant) : M_(LexTree(std::move(M)).M()), variant_(variant)
{
    if (M_.empty())
        throw InputError("tree category needs a nonempty M");
}

std::string TreeCategory::name() const
{
    std::string m;
    for (std::size_t i = 0; i < M_.size(); ++i)
        m += (i ? "," : "") + std::to_string(M_[i]);
    return variant_.name() + "{" + m + "}";
}

ObjectId TreeCategory::object(const LexTree& t) const
{
    if (t.M() != M_)
        throw InputError("tree has a different M than the category " + name());
    auto v = validate(t, variant_.kind);
    if (!v.empty())
        throw InputError("node " + std::to_string(v.front().node) + ": " + v.front().rule);
    return store_.intern(t, t.canonical());
}

const LexTree& TreeCategory::value(ObjectId id) const { return *store_.get(id); }

Arrow TreeCategory::arrow(const LexTree& dom, const LexTree& cod, std::vector<int> map) const
{
    Arrow f{object(dom), object(cod), std::move(map)};
    auto v = morphism_violations(dom, cod, f.data, flags());
    if (!v.empty())
        throw InputError("not a " + variant_.name() + " arrow: " + v.front());
    return f;
}

std::vector<ObjectId> TreeCategory::objects(int max_grade) const
{
    std::vector<ObjectId> out;
    for (int n = 0; n <= max_grade; ++n) {
        std::vector<ObjectId> level;
        {
            std::lock_guard lock(cache_mutex_);
            auto it = by_size_.find(n);
            if (it != by_size_.end())
                level = it->second;
        }
        if (level.empty()) {
            for (auto& t : enumerate_trees(M_, variant_.kind, n))
                level.push_back(store_.intern(t, t.canonical()));
            std::lock_guard lock(cache_mutex_);
            by_size_[n] = level;
        }
        out.insert(out.end(), level.begin(), level.end());
    }
    sort_canonically(*this, out);
    return out;
}

ObjectId TreeCategory::object_from_json(const json& j) const
{
    auto v = validate_json(j, variant_.kind);
    if (!v.empty())
        throw InputError("node " + std::to_string(v.front().node) + ": " + v.front().rule);
    return object(LexTree::from_json(j));
}

std::vector<Arrow> TreeCategory::hom(ObjectId a, ObjectId b) const
{
    const std::uint64_t key = (std::uint64_t(a) << 32) | b;
    {
        std::lock_guard lock(cache_mutex_);
        auto it = hom_cache_.find(key);
        if (it != hom_cache_.end())
            return it->second;
    }
    std::vector<Arrow> out;
    for (auto& f : enumerate_embeddings(value(a), value(b), flags()))
        out.push_back({a, b, std::move(f)});
    std::lock_guard lock(cache_mutex_);
    hom_cache_.emplace(key, out);
    return out;
}

bool TreeCategory::has_arrow(ObjectId a, ObjectId b) const
{
    {
        std::lock_guard lock(cache_mutex_);
        auto it = hom_cache_.find((std::uint64_t(a) << 32) | b);
        if (it != hom_cache_.end())
            return !it->second.empty();
        auto e = arrow_exists_.find((std::uint64_t(a) << 32) | b);
        if (e != arrow_exists_.end())
            return e->second;
    }
    bool r = has_embedding(value(a), value(b), flags());
    std::lock_guard lock(cache_mutex_);
    arrow_exists_[(std::uint64_t(a) << 32) | b] = r;
    return r;
}

Arrow TreeCategory::compose(const Arrow& g, const Arrow& f) const
{
    if (f.cod != g.dom)
        throw InputError("compose: arrows are not composable");
    return {f.dom, g.cod, compose_maps(g.data, f.data)};
}

Arrow TreeCategory::identity(ObjectId a) const
{
    Arrow f{a, a, std::vector<int>(value(a).size())};
    std::iota(f.data.begin(), f.data.end(), 0);
    return f;
}

bool TreeCategory::is_arrow(const Arrow& f) const
{
    if (!store_.contains(f.dom) || !store_.contains(f.cod))
        return false;
    return is_tree_morphism(value(f.dom), value(f.cod), f.data, flags());
}

std::optional<Cocone> TreeCategory::propose_cocone(const Arrow& f, const Arrow& g) const
{
    if (f.dom != g.dom)
        return std::nullopt;
    std::pair<Arrow, Arrow> key{f, g};
    {
        std::lock_guard lock(cache_mutex_);
        auto it = cocones_.find(key);
        if (it != cocones_.end())
            return it->second;
    }
    auto w = amalgamate_span(f, g);
    std::lock_guard lock(cache_mutex_);
    if (cocones_.size() >= cocone_cache_limit)
        cocones_.clear();
    cocones_.emplace(std::move(key), w);
    return w;
}

std::optional<Cocone> TreeCategory::amalgamate_span(const Arrow& f, const Arrow& g) const
{
    const LexTree& S = value(f.dom);
    LexTree T1 = value(f.cod), T2 = value(g.cod);
    std::vector<int> f1 = f.data, f2 = g.data, e1(T1.size()), e2(T2.size());
    std::iota(e1.begin(), e1.end(), 0);
    std::iota(e2.begin(), e2.end(), 0);
    if (!variant_.leveled) {
        auto d1 = level_dominate(S, T1, f1, variant_.kind);
        auto d2 = level_dominate(S, T2, f2, variant_.kind);
        T1 = d1.tree;
        f1 = d1.inclusion;
        e1 = d1.embedding;
        T2 = d2.tree;
        f2 = d2.inclusion;
        e2 = d2.embedding;
    }
    auto a = amalgamate(S, T1, f1, T2, f2, variant_.kind);
    if (!a.ok || !validate(a.tree, variant_.kind).empty())
        return std::nullopt;
    Cocone w;
    w.apex = store_.intern(a.tree, a.tree.canonical());
    w.left = {f.cod, w.apex, compose_maps(a.left, e1)};
    w.right = {g.cod, w.apex, compose_maps(a.right, e2)};
    return w;
}

std::optional<json> TreeCategory::obstruction(const Arrow& f, const Arrow& g) const
{
    if (f.dom != g.dom)
        return std::nullopt;
    auto bad = nodes_of_incompatibility(value(f.dom), value(f.cod), f.data, value(g.cod), g.data);
    if (bad.empty())
        return std::nullopt;
    return json{{"incompatible", bad}};
}

bool TreeCategory::check_obstruction(const Arrow& f, const Arrow& g, const json& certificate) const
{
    // Both legs of any cocone preserve the splitting degree of non-terminal
    // nodes and decided degrees, so an apex would need two degrees at once.
    try {
        auto bad = certificate.at("incompatible").get<std::vector<int>>();
        if (bad.empty() || f.dom != g.dom)
            return false;
        const LexTree& S = value(f.dom);
        const LexTree& T1 = value(f.cod);
        const LexTree& T2 = value(g.cod);
        for (int s : bad) {
            if (s < 0 || s >= S.size())
                return false;
            int a = T1.label(f.data[s]), b = T2.label(g.data[s]);
            if (a == 0 || b == 0 || a == b)
                return false;
        }
        return true;
    }
    catch (const json::exception&) {
        return false;
    }
}

std::vector<ObjectId> TreeCategory::cofinal_objects(int max_grade) const
{
    // Every tree of size n can be grown by planting bushes of the least
    // degree, so the fully grown trees of the top sizes dominate.
    std::vector<ObjectId> out;
    const int lowest = std::max(0, max_grade - M_.front() + 1);
    for (auto x : objects(max_grade)) {
        const LexTree& t = value(x);
        if (t.size() < lowest)
            continue;
        if (variant_.kind == TreeKind::Tc && M_.size() > 1 && !t.fully_decided())
            continue;
        out.push_back(x);
    }
    return out;
}

std::optional<ObjectId> TreeCategory::initial_object() const { return object(LexTree(M_)); }

std::vector<Arrow> TreeCategory::extensions(ObjectId x, int depth) const
{
    std::vector<Arrow> out;
    std::vector<std::pair<LexTree, std::vector<int>>> frontier{{value(x), identity(x).data}};
    const int cap = value(x).size() + std::max(depth, 1) * (M_.back() + 1);
    for (int round = 0; round < depth; ++round) {
        std::vector<std::pair<LexTree, std::vector<int>>> next;
        for (auto& [t, inc] : frontier)
            for (auto& e : one_step_extensions(t, variant_.kind, cap)) {
                auto total = compose_maps(e.inclusion, inc);
                out.push_back({x, object(e.tree), total});
                next.push_back({std::move(e.tree), std::move(total)});
            }
        frontier = std::move(next);
    }
    return out;
}

std::vector<Arrow> TreeCategory::arrows_extending(ObjectId a, ObjectId b, const std::vector<int>& partial,
                                                  std::size_t limit) const
{
    std::vector<Arrow> out;
    for (auto& f : enumerate_embeddings(value(a), value(b), flags(), &partial, limit))
        out.push_back({a, b, std::move(f)});
    return out;
}

} // namespace wfr
