#include "wfr/category.hpp"

#include <algorithm>

namespace wfr {

std::size_t ArrowHash::operator()(const Arrow& a) const noexcept
{
    std::size_t h = std::hash<std::uint64_t>{}((std::uint64_t(a.dom) << 32) | a.cod);
    for (int x : a.data)
        h ^= std::hash<int>{}(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

json Category::arrow_json(const Arrow& f) const
{
    return {{"dom", object_json(f.dom)}, {"cod", object_json(f.cod)}, {"map", f.data}};
}

ObjectId Category::object_from_json(const json& j) const
{
    for (int g = 0; g <= 16; ++g)
        for (auto x : objects(g))
            if (object_json(x) == j)
                return x;
    throw InputError("object not found in " + name());
}

std::optional<Cocone> Category::propose_cocone(const Arrow&, const Arrow&) const { return std::nullopt; }

std::optional<json> Category::obstruction(const Arrow&, const Arrow&) const { return std::nullopt; }

bool Category::check_obstruction(const Arrow&, const Arrow&, const json&) const { return false; }

std::vector<ObjectId> Category::cofinal_objects(int) const { return {}; }

std::vector<Arrow> Category::extensions(ObjectId, int) const { return {}; }

std::vector<Arrow> Category::arrows_extending(ObjectId a, ObjectId b, const std::vector<int>& partial,
                                              std::size_t limit) const
{
    std::vector<Arrow> out;
    for (auto& f : hom(a, b)) {
        bool ok = f.data.size() == partial.size();
        for (std::size_t i = 0; ok && i < partial.size(); ++i)
            if (partial[i] >= 0 && f.data[i] != partial[i])
                ok = false;
        if (ok) {
            out.push_back(f);
            if (out.size() >= limit)
                break;
        }
    }
    return out;
}

std::optional<Verdict> Category::ramsey_closed_form(const Arrow&) const { return std::nullopt; }

void sort_canonically(const Category& c, std::vector<ObjectId>& objs)
{
    std::vector<std::pair<std::pair<int, std::string>, ObjectId>> keyed;
    keyed.reserve(objs.size());
    for (auto x : objs)
        keyed.push_back({{c.grade(x), c.object_key(x)}, x});
    std::sort(keyed.begin(), keyed.end());
    keyed.erase(std::unique(keyed.begin(), keyed.end(), [](auto& p, auto& q) { return p.second == q.second; }),
                keyed.end());
    objs.clear();
    for (auto& [k, x] : keyed)
        objs.push_back(x);
}

bool canonical_less(const Category& c, const Arrow& x, const Arrow& y)
{
    if (x.cod != y.cod) {
        int gx = c.grade(x.cod), gy = c.grade(y.cod);
        if (gx != gy)
            return gx < gy;
        return c.object_key(x.cod) < c.object_key(y.cod);
    }
    return x.data < y.data;
}

} // namespace wfr
