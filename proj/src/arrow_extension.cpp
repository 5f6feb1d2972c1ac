#include "wfr/arrow_extension.hpp"

#include <algorithm>

namespace wfr {

namespace {
    std::string data_key(const std::vector<int>& d)
    {
        std::string s;
        for (int x : d)
            s += std::to_string(x) + ",";
        return s;
    }
} // namespace

ArrowExtensionCategory::ArrowExtensionCategory(const Category& base, int base_max_grade)
    : base_(base), base_max_grade_(base_max_grade)
{
}

ObjectId ArrowExtensionCategory::object_of(const Arrow& alpha) const
{
    if (!base_.is_arrow(alpha))
        throw InputError("arrow extension: not a base arrow");
    std::string key = base_.object_key(alpha.dom) + " -> " + base_.object_key(alpha.cod) + " : " + data_key(alpha.data);
    return store_.intern(alpha, key);
}

Arrow ArrowExtensionCategory::base_arrow_of(ObjectId x) const { return *store_.get(x); }

Arrow ArrowExtensionCategory::to_base(const Arrow& f) const
{
    return {base_arrow_of(f.dom).dom, base_arrow_of(f.cod).dom, f.data};
}

std::vector<ObjectId> ArrowExtensionCategory::objects(int max_grade) const
{
    std::vector<ObjectId> out;
    auto objs = base_.objects(base_max_grade_);
    for (auto a : objs)
        for (auto a2 : objs) {
            if (base_.grade(a) + base_.grade(a2) > max_grade)
                continue;
            for (auto& alpha : base_.hom(a, a2))
                out.push_back(object_of(alpha));
        }
    sort_canonically(*this, out);
    return out;
}

int ArrowExtensionCategory::grade(ObjectId x) const
{
    auto alpha = base_arrow_of(x);
    return base_.grade(alpha.dom) + base_.grade(alpha.cod);
}

json ArrowExtensionCategory::object_json(ObjectId x) const { return base_.arrow_json(base_arrow_of(x)); }

ObjectId ArrowExtensionCategory::object_from_json(const json& j) const
{
    ObjectId a = base_.object_from_json(j.at("dom"));
    ObjectId b = base_.object_from_json(j.at("cod"));
    return object_of(Arrow{a, b, j.at("map").get<std::vector<int>>()});
}

std::vector<Arrow> ArrowExtensionCategory::hom(ObjectId x, ObjectId y) const
{
    auto alpha = base_arrow_of(x), beta = base_arrow_of(y);
    std::vector<Arrow> out;
    for (auto& h : base_.hom(alpha.cod, beta.dom))
        out.push_back({x, y, base_.compose(h, alpha).data});
    if (x == y)
        out.push_back({x, y, base_.identity(alpha.dom).data});
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool ArrowExtensionCategory::has_arrow(ObjectId x, ObjectId y) const
{
    if (x == y)
        return true;
    return base_.has_arrow(base_arrow_of(x).cod, base_arrow_of(y).dom);
}

Arrow ArrowExtensionCategory::compose(const Arrow& g, const Arrow& f) const
{
    if (f.cod != g.dom)
        throw InputError("composing arrows that do not match");
    return {f.dom, g.cod, base_.compose(to_base(g), to_base(f)).data};
}

Arrow ArrowExtensionCategory::identity(ObjectId x) const { return {x, x, base_.identity(base_arrow_of(x).dom).data}; }

bool ArrowExtensionCategory::is_arrow(const Arrow& f) const
{
    if (!store_.contains(f.dom) || !store_.contains(f.cod))
        return false;
    auto h = hom(f.dom, f.cod);
    return std::binary_search(h.begin(), h.end(), f);
}

std::optional<int> ArrowExtensionCategory::finite_max_grade() const
{
    auto g = base_.finite_max_grade();
    if (g && base_max_grade_ >= *g)
        return 2 * *g;
    return std::nullopt;
}

std::pair<Arrow, Arrow> ArrowExtensionCategory::base_span(const Arrow& f, const Arrow& g) const
{
    return {base_.compose(base_arrow_of(f.cod), to_base(f)), base_.compose(base_arrow_of(g.cod), to_base(g))};
}

std::optional<Cocone> ArrowExtensionCategory::propose_cocone(const Arrow& f, const Arrow& g) const
{
    // A base cocone (w, h, k) of (beta o f, gamma o g) gives the cocone
    // (w, id_w) with legs h o beta and k o gamma.
    auto [bf, bg] = base_span(f, g);
    auto w = base_.propose_cocone(bf, bg);
    if (!w)
        return std::nullopt;
    ObjectId apex = object_of(base_.identity(w->apex));
    Arrow left{f.cod, apex, base_.compose(w->left, base_arrow_of(f.cod)).data};
    Arrow right{g.cod, apex, base_.compose(w->right, base_arrow_of(g.cod)).data};
    return Cocone{apex, left, right};
}

std::optional<json> ArrowExtensionCategory::obstruction(const Arrow& f, const Arrow& g) const
{
    // Any cocone h o beta, k o gamma is a base cocone of (beta o f, gamma o g).
    auto [bf, bg] = base_span(f, g);
    return base_.obstruction(bf, bg);
}

bool ArrowExtensionCategory::check_obstruction(const Arrow& f, const Arrow& g, const json& certificate) const
{
    auto [bf, bg] = base_span(f, g);
    return base_.check_obstruction(bf, bg, certificate);
}

std::vector<ObjectId> ArrowExtensionCategory::cofinal_objects(int max_grade) const
{
    std::vector<ObjectId> out;
    for (auto z : base_.cofinal_objects(base_max_grade_))
        if (2 * base_.grade(z) <= max_grade)
            out.push_back(object_of(base_.identity(z)));
    sort_canonically(*this, out);
    return out;
}

std::optional<ObjectId> ArrowExtensionCategory::initial_object() const
{
    auto i = base_.initial_object();
    if (!i)
        return std::nullopt;
    return object_of(base_.identity(*i));
}

} // namespace wfr
