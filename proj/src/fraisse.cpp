#include "wfr/fraisse.hpp"

#include <algorithm>

#include "wfr/category_ops.hpp"
#include "wfr/rng.hpp"

namespace wfr {

SequencePrefix::SequencePrefix(const Category& c, ObjectId first) : c_(&c), objects_{first} {}

Arrow SequencePrefix::connecting(int i, int j) const
{
    if (i < 0 || j >= length() || i > j)
        throw InputError("connecting arrow u_" + std::to_string(i) + "^" + std::to_string(j) + " out of range");
    Arrow a = c_->identity(objects_[i]);
    for (int k = i; k < j; ++k)
        a = c_->compose(links_[k], a);
    return a;
}

void SequencePrefix::append(const Arrow& link)
{
    if (link.dom != objects_.back())
        throw InputError("link does not start at the last object");
    if (!c_->is_arrow(link))
        throw InputError("link is not an arrow of " + c_->name());
    links_.push_back(link);
    objects_.push_back(link.cod);
}

std::optional<std::array<int, 3>> SequencePrefix::functoriality_failure() const
{
    const int n = length();
    for (int k = 0; k < n; ++k) {
        if (!(connecting(k, k) == c_->identity(objects_[k])))
            return std::array<int, 3>{k, k, k};
        for (int l = k; l < n; ++l)
            for (int m = l; m < n; ++m)
                if (!(connecting(k, m) == c_->compose(connecting(l, m), connecting(k, l))))
                    return std::array<int, 3>{k, l, m};
    }
    return std::nullopt;
}

json SequencePrefix::to_json() const
{
    json objs = json::array(), links = json::array();
    for (auto x : objects_)
        objs.push_back(c_->object_json(x));
    for (auto& a : links_)
        links.push_back(a.data);
    return {{"category", c_->name()}, {"objects", objs}, {"links", links}, {"metadata", metadata}};
}

SequencePrefix SequencePrefix::from_json(const Category& c, const json& j)
{
    try {
        auto& objs = j.at("objects");
        auto& links = j.at("links");
        if (!objs.is_array() || objs.empty())
            throw InputError("prefix needs at least one object");
        if (links.size() + 1 != objs.size())
            throw InputError("prefix needs one link per consecutive pair of objects");
        SequencePrefix seq(c, c.object_from_json(objs[0]));
        for (std::size_t i = 0; i < links.size(); ++i)
            seq.append({seq.object(static_cast<int>(i)), c.object_from_json(objs[i + 1]),
                        links[i].get<std::vector<int>>()});
        if (j.contains("metadata"))
            seq.metadata = j["metadata"];
        return seq;
    }
    catch (const json::exception& e) {
        throw InputError(std::string("malformed prefix: ") + e.what());
    }
}

namespace {
    // An arrow g: cod(p) -> cod(q) with g o p = q, for categories whose
    // arrow data is the element map.
    std::optional<Arrow> factor(const Category& c, const Arrow& p, const Arrow& q)
    {
        std::vector<int> partial(c.grade(p.cod), -1);
        for (std::size_t i = 0; i < p.data.size(); ++i)
            partial[p.data[i]] = q.data[i];
        for (auto& g : c.arrows_extending(p.cod, q.cod, partial, 1))
            if (c.compose(g, p) == q)
                return g;
        return std::nullopt;
    }

    std::vector<Arrow> small_legs(const Category& c, ObjectId x, int max_size)
    {
        std::vector<Arrow> legs;
        for (auto t : c.objects(max_size))
            for (auto& f : c.hom(x, t))
                legs.push_back(std::move(f));
        return legs;
    }
} // namespace

Verdict verify_W0(const SequencePrefix& seq, int bound)
{
    const Category& c = seq.category();
    int checked = 0;
    for (auto x : c.objects(bound)) {
        ++checked;
        bool hit = false;
        for (int n = seq.length() - 1; n >= 0 && !hit; --n)
            hit = c.has_arrow(x, seq.object(n));
        if (!hit)
            return Verdict::no({{"object", c.object_json(x)}, {"bound", bound}});
    }
    return Verdict::yes({{"bound", bound}, {"objects_checked", checked}});
}

Verdict verify_W1_step(const SequencePrefix& seq, int n, const SearchBudget& budget)
{
    const Category& c = seq.category();
    if (n < 0 || n >= seq.length())
        throw InputError("W1 step index out of range");
    json tried = json::array();
    for (int m = n; m < seq.length(); ++m) {
        Arrow unm = seq.connecting(n, m);
        Verdict am = is_amalgamable_arrow(c, unm, budget);
        if (!am.is_yes()) {
            tried.push_back({{"m", m}, {"amalgamable", to_string(am.outcome)}});
            continue;
        }
        int absorbed = 0;
        json unabsorbed = nullptr;
        for (auto& f : small_legs(c, seq.object(m), budget.max_size)) {
            Arrow p = c.compose(f, unm);
            bool ok = false;
            for (int l = m; l < seq.length() && !ok; ++l)
                ok = factor(c, p, seq.connecting(n, l)).has_value();
            if (!ok) {
                unabsorbed = c.arrow_json(f);
                break;
            }
            ++absorbed;
        }
        if (unabsorbed.is_null())
            return Verdict::yes({{"n", n}, {"m", m}, {"legs_absorbed", absorbed}, {"leg_bound", budget.max_size}});
        tried.push_back({{"m", m}, {"amalgamable", "yes"}, {"unabsorbed", unabsorbed}});
    }
    return Verdict::unknown({{"n", n}, {"reason", "no witness m inside the prefix"}, {"tried", tried}});
}

SequencePrefix build_weak_fraisse_prefix(const Category& c, int length, const SearchBudget& budget,
                                         std::uint64_t seed)
{
    budget.validate();
    if (length < 1)
        throw InputError("prefix length must be positive");
    auto init = c.initial_object();
    auto all = c.objects(budget.max_size);
    if (all.empty())
        throw InputError(c.name() + " has no objects of grade <= " + std::to_string(budget.max_size));
    SequencePrefix seq(c, init ? *init : all.front());
    Rng rng(seed);
    auto shuffle = [&](auto& v) {
        if (seed == 0)
            return;
        for (std::size_t i = v.size(); i > 1; --i)
            std::swap(v[i - 1], v[rng.below(i)]);
    };
    std::vector<ObjectId> targets = all;
    shuffle(targets);

    std::uint64_t work = 0;
    int skipped = 0, absorbed_for_free = 0;
    for (int step = 1; step < length; ++step) {
        const ObjectId start = seq.object(seq.length() - 1);
        Arrow link = c.identity(start);
        auto legs = small_legs(c, start, budget.max_size);
        shuffle(legs);
        int already = 0;
        for (auto& f : legs) {
            if (factor(c, f, link)) {
                ++already;
                continue;
            }
            auto w = find_cocone(c, link, f, budget, work);
            if (!w) {
                ++skipped;
                continue;
            }
            link = c.compose(w->left, link);
        }
        absorbed_for_free += already;
        for (auto x : targets) {
            if (c.has_arrow(x, link.cod))
                continue;
            std::optional<Arrow> into;
            if (init) {
                auto a = c.hom(*init, link.cod), b = c.hom(*init, x);
                if (!a.empty() && !b.empty())
                    if (auto w = find_cocone(c, a.front(), b.front(), budget, work))
                        into = w->left;
            }
            if (!into)
                for (auto z : c.objects(budget.witness_size))
                    if (c.has_arrow(x, z))
                        if (auto h = c.hom(link.cod, z); !h.empty()) {
                            into = h.front();
                            break;
                        }
            if (into)
                link = c.compose(*into, link);
            else
                ++skipped;
        }
        auto ext = c.extensions(link.cod, 1);
        std::sort(ext.begin(), ext.end(), [&](const Arrow& a, const Arrow& b) { return canonical_less(c, a, b); });
        for (auto& e : ext)
            if (c.grade(e.cod) > c.grade(link.cod)) {
                link = c.compose(e, link);
                break;
            }
        seq.append(link);
    }
    seq.metadata = {{"length", length},
                    {"task_bound", budget.max_size},
                    {"seed", seed},
                    {"skipped_tasks", skipped},
                    {"tasks_already_absorbed", absorbed_for_free}};
    return seq;
}

json ZigZag::to_json(const Category& c) const
{
    json fs = json::array(), gs = json::array();
    for (auto& a : f)
        fs.push_back(c.arrow_json(a));
    for (auto& a : g)
        gs.push_back(c.arrow_json(a));
    return {{"k", k}, {"l", l}, {"f", fs}, {"g", gs}};
}

ZigZag back_and_forth(const SequencePrefix& u, const SequencePrefix& v, int steps, const SearchBudget& budget)
{
    (void)budget;
    const Category& c = u.category();
    if (&v.category() != &c)
        throw InputError("back_and_forth: prefixes live in different categories");
    ZigZag z;
    z.k.push_back(0);
    for (int l = 0; l < v.length() && z.f.empty(); ++l) {
        auto h = c.hom(u.object(0), v.object(l));
        if (!h.empty()) {
            z.l.push_back(l);
            z.f.push_back(h.front());
        }
    }
    if (z.f.empty())
        throw BudgetExhausted("back_and_forth: u_0 maps into no object of the second prefix");
    for (int n = 0; n < steps; ++n) {
        const int kn = z.k.back(), ln = z.l.back();
        std::optional<Arrow> g;
        int k1 = kn + 1;
        for (; k1 < u.length() && !g; ++k1)
            g = factor(c, z.f.back(), u.connecting(kn, k1));
        if (!g)
            throw BudgetExhausted("back_and_forth: no g_" + std::to_string(n) + " inside the first prefix");
        z.k.push_back(k1 - 1);
        z.g.push_back(*g);
        std::optional<Arrow> f;
        int l1 = ln + 1;
        for (; l1 < v.length() && !f; ++l1)
            f = factor(c, *g, v.connecting(ln, l1));
        if (!f)
            throw BudgetExhausted("back_and_forth: no f_" + std::to_string(n + 1) + " inside the second prefix");
        z.l.push_back(l1 - 1);
        z.f.push_back(*f);
    }
    return z;
}

std::string check_zigzag(const SequencePrefix& u, const SequencePrefix& v, const ZigZag& z)
{
    const Category& c = u.category();
    for (std::size_t n = 0; n < z.g.size(); ++n) {
        if (!(c.compose(z.g[n], z.f[n]) == u.connecting(z.k[n], z.k[n + 1])))
            return "g_" + std::to_string(n) + " o f_" + std::to_string(n) + " != u_k^k'";
        if (n + 1 < z.f.size() && !(c.compose(z.f[n + 1], z.g[n]) == v.connecting(z.l[n], z.l[n + 1])))
            return "f_" + std::to_string(n + 1) + " o g_" + std::to_string(n) + " != v_l^l'";
    }
    return {};
}

json ColoredChain::to_json() const { return {{"color", color}, {"round", round}}; }

ColoredChain generic_coloring_prefix(int colors, int rounds)
{
    if (colors < 1 || rounds < 0)
        throw InputError("need at least one colour and a nonnegative round count");
    ColoredChain c{{0}, {0}};
    for (int r = 1; r <= rounds; ++r) {
        ColoredChain next;
        auto fill = [&] {
            for (int k = 0; k < colors; ++k) {
                next.color.push_back(k);
                next.round.push_back(r);
            }
        };
        fill();
        for (std::size_t i = 0; i < c.color.size(); ++i) {
            next.color.push_back(c.color[i]);
            next.round.push_back(c.round[i]);
            fill();
        }
        c = std::move(next);
    }
    return c;
}

bool gaps_hold_all_colors(const ColoredChain& c, int colors, int r)
{
    std::vector<bool> seen(colors, false);
    auto close_gap = [&] {
        bool all = std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
        std::fill(seen.begin(), seen.end(), false);
        return all;
    };
    for (std::size_t i = 0; i < c.color.size(); ++i) {
        if (c.round[i] > r)
            continue;
        if (c.round[i] < r) {
            if (!close_gap())
                return false;
        }
        else {
            seen[c.color[i]] = true;
        }
    }
    return close_gap();
}

} // namespace wfr
