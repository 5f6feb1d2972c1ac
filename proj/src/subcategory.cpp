#include "wfr/subcategory.hpp"

#include <algorithm>

namespace wfr {

FullSubcategory::FullSubcategory(const Category& parent, std::string name, Membership member, Retraction retract)
    : parent_(parent), name_(std::move(name)), member_(std::move(member)), retract_(std::move(retract))
{
}

std::optional<Arrow> FullSubcategory::retract(ObjectId x) const
{
    if (contains(x))
        return parent_.identity(x);
    if (!retract_)
        return std::nullopt;
    auto r = retract_(parent_, x);
    if (r && r->dom == x && contains(r->cod) && parent_.is_arrow(*r))
        return r;
    return std::nullopt;
}

std::vector<ObjectId> FullSubcategory::objects(int max_grade) const
{
    std::vector<ObjectId> out;
    for (auto x : parent_.objects(max_grade))
        if (contains(x))
            out.push_back(x);
    return out;
}

std::vector<Arrow> FullSubcategory::hom(ObjectId a, ObjectId b) const
{
    if (!contains(a) || !contains(b))
        return {};
    return parent_.hom(a, b);
}

bool FullSubcategory::has_arrow(ObjectId a, ObjectId b) const
{
    return contains(a) && contains(b) && parent_.has_arrow(a, b);
}

bool FullSubcategory::is_arrow(const Arrow& f) const
{
    return contains(f.dom) && contains(f.cod) && parent_.is_arrow(f);
}

std::optional<Cocone> FullSubcategory::propose_cocone(const Arrow& f, const Arrow& g) const
{
    auto w = parent_.propose_cocone(f, g);
    if (!w)
        return std::nullopt;
    if (contains(w->apex))
        return w;
    auto r = retract(w->apex);
    if (!r)
        return std::nullopt;
    return Cocone{r->cod, parent_.compose(*r, w->left), parent_.compose(*r, w->right)};
}

std::optional<json> FullSubcategory::obstruction(const Arrow& f, const Arrow& g) const
{
    return parent_.obstruction(f, g);
}

bool FullSubcategory::check_obstruction(const Arrow& f, const Arrow& g, const json& certificate) const
{
    return parent_.check_obstruction(f, g, certificate);
}

std::optional<ObjectId> FullSubcategory::initial_object() const
{
    auto i = parent_.initial_object();
    if (i && contains(*i))
        return i;
    return std::nullopt;
}

std::vector<Arrow> FullSubcategory::extensions(ObjectId x, int depth) const
{
    std::vector<Arrow> out;
    for (auto& e : parent_.extensions(x, depth))
        if (contains(e.cod))
            out.push_back(std::move(e));
    return out;
}

std::vector<Arrow> FullSubcategory::arrows_extending(ObjectId a, ObjectId b, const std::vector<int>& partial,
                                                     std::size_t limit) const
{
    if (!contains(a) || !contains(b))
        return {};
    return parent_.arrows_extending(a, b, partial, limit);
}

// ---------------------------------------------------------------------------

TableCategory::TableCategory(std::vector<std::string> objects, std::vector<Generator> arrows,
                             std::map<std::pair<int, int>, int> compositions)
    : objects_(std::move(objects))
{
    const int n = static_cast<int>(objects_.size());
    for (int i = 0; i < n; ++i)
        arrows_.push_back({i, i, "id_" + objects_[i]});
    for (auto& a : arrows) {
        if (a.dom < 0 || a.dom >= n || a.cod < 0 || a.cod >= n)
            throw InputError("table category arrow with unknown endpoint");
        arrows_.push_back(a);
    }
    for (auto& [pair, r] : compositions) {
        int g = pair.first + n, f = pair.second + n, c = r + n;
        const int m = static_cast<int>(arrows_.size());
        if (g >= m || f >= m || c >= m || arrows_[f].cod != arrows_[g].dom || arrows_[c].dom != arrows_[f].dom
            || arrows_[c].cod != arrows_[g].cod)
            throw InputError("table category composition is ill-typed");
        compositions_[{g, f}] = c;
    }
    for (int g = n; g < static_cast<int>(arrows_.size()); ++g)
        for (int f = n; f < static_cast<int>(arrows_.size()); ++f)
            if (arrows_[f].cod == arrows_[g].dom && !compositions_.count({g, f}))
                throw InputError("table category composition missing for " + arrows_[g].label + " o "
                                 + arrows_[f].label);
}

std::vector<ObjectId> TableCategory::objects(int max_grade) const
{
    std::vector<ObjectId> out;
    if (max_grade >= 1)
        for (ObjectId i = 0; i < objects_.size(); ++i)
            out.push_back(i);
    return out;
}

std::string TableCategory::object_key(ObjectId x) const
{
    if (x >= objects_.size())
        throw InputError("unknown object handle");
    return objects_[x];
}

std::vector<Arrow> TableCategory::hom(ObjectId a, ObjectId b) const
{
    std::vector<Arrow> out;
    for (int i = 0; i < static_cast<int>(arrows_.size()); ++i)
        if (arrows_[i].dom == static_cast<int>(a) && arrows_[i].cod == static_cast<int>(b))
            out.push_back({a, b, {i}});
    return out;
}

Arrow TableCategory::compose(const Arrow& g, const Arrow& f) const
{
    if (f.cod != g.dom)
        throw InputError("composing arrows that do not match");
    const int n = static_cast<int>(objects_.size());
    int gi = g.data.at(0), fi = f.data.at(0);
    if (gi < n)
        return f;
    if (fi < n)
        return g;
    return {f.dom, g.cod, {compositions_.at({gi, fi})}};
}

Arrow TableCategory::identity(ObjectId a) const { return {a, a, {static_cast<int>(a)}}; }

bool TableCategory::is_arrow(const Arrow& f) const
{
    if (f.data.size() != 1 || f.data[0] < 0 || f.data[0] >= static_cast<int>(arrows_.size()))
        return false;
    auto& g = arrows_[f.data[0]];
    return g.dom == static_cast<int>(f.dom) && g.cod == static_cast<int>(f.cod);
}

json TableCategory::arrow_json(const Arrow& f) const { return arrows_.at(f.data.at(0)).label; }

} // namespace wfr
