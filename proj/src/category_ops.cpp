#include "wfr/category_ops.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "wfr/subcategory.hpp"

namespace wfr {

namespace {

    bool exhaustive_for(const Category& c, const SearchBudget& budget)
    {
        auto g = c.finite_max_grade();
        return g && c.locally_finite() && budget.max_size >= *g && budget.witness_size >= *g;
    }

    enum class SpanStatus { Cocone, Obstructed, NotFound, Exhausted };

    struct SpanOutcome {
        SpanStatus status = SpanStatus::NotFound;
        Cocone cocone;
        json certificate;
    };

    SpanOutcome examine_span(const Category& c, const Arrow& f, const Arrow& g, const SearchBudget& budget,
                             std::uint64_t& work)
    {
        SpanOutcome out;
        if (f == g) {
            out.status = SpanStatus::Cocone;
            out.cocone = {f.cod, c.identity(f.cod), c.identity(f.cod)};
            return out;
        }
        if (auto hint = c.propose_cocone(f, g); hint && check_cocone(c, f, g, *hint)) {
            out.status = SpanStatus::Cocone;
            out.cocone = *hint;
            return out;
        }
        if (auto cert = c.obstruction(f, g); cert && c.check_obstruction(f, g, *cert)) {
            out.status = SpanStatus::Obstructed;
            out.certificate = *cert;
            return out;
        }
        bool exhausted = false;
        for (auto w : c.objects(budget.witness_size)) {
            if (++work > budget.max_candidates) {
                exhausted = true;
                break;
            }
            std::unordered_map<Arrow, Arrow, ArrowHash> right;
            for (auto& k : c.hom(g.cod, w))
                right.emplace(c.compose(k, g), k);
            if (right.empty())
                continue;
            for (auto& h : c.hom(f.cod, w)) {
                auto it = right.find(c.compose(h, f));
                if (it != right.end()) {
                    out.status = SpanStatus::Cocone;
                    out.cocone = {w, h, it->second};
                    return out;
                }
            }
        }
        out.status = exhausted ? SpanStatus::Exhausted : SpanStatus::NotFound;
        return out;
    }

    json cocone_json(const Category& c, const Arrow& f, const Arrow& g, const Cocone& w)
    {
        return {{"f", c.arrow_json(f)},
                {"g", c.arrow_json(g)},
                {"apex", c.object_json(w.apex)},
                {"left", w.left.data},
                {"right", w.right.data}};
    }

    struct Leg {
        Arrow f;  // out of cod(alpha)
        Arrow p;  // f o alpha
    };

} // namespace

bool check_cocone(const Category& c, const Arrow& f, const Arrow& g, const Cocone& w)
{
    if (f.dom != g.dom || w.left.dom != f.cod || w.right.dom != g.cod || w.left.cod != w.apex
        || w.right.cod != w.apex)
        return false;
    if (!c.is_arrow(w.left) || !c.is_arrow(w.right))
        return false;
    return c.compose(w.left, f) == c.compose(w.right, g);
}

std::optional<Cocone> find_cocone(const Category& c, const Arrow& f, const Arrow& g, const SearchBudget& budget,
                                  std::uint64_t& work)
{
    auto r = examine_span(c, f, g, budget, work);
    if (r.status == SpanStatus::Cocone)
        return r.cocone;
    return std::nullopt;
}

std::vector<Arrow> legs_out_of(const Category& c, ObjectId x, const SearchBudget& budget)
{
    std::vector<Arrow> legs;
    for (auto t : c.objects(budget.max_size))
        for (auto& f : c.hom(x, t))
            legs.push_back(std::move(f));
    if (budget.extension_depth > 0)
        for (auto& f : c.extensions(x, budget.extension_depth))
            legs.push_back(std::move(f));
    std::sort(legs.begin(), legs.end(), [&](const Arrow& a, const Arrow& b) { return canonical_less(c, a, b); });
    legs.erase(std::unique(legs.begin(), legs.end()), legs.end());
    return legs;
}

Verdict is_amalgamable_arrow(const Category& c, const Arrow& alpha, const SearchBudget& budget)
{
    budget.validate();
    if (!c.is_arrow(alpha))
        throw InputError("is_amalgamable_arrow: not an arrow of " + c.name());
    Deadline deadline(budget);
    const bool exhaustive = exhaustive_for(c, budget);

    std::vector<Leg> legs;
    {
        std::unordered_set<Arrow, ArrowHash> seen;
        for (auto& f : legs_out_of(c, alpha.cod, budget)) {
            Arrow p = c.compose(f, alpha);
            if (seen.insert(p).second)
                legs.push_back({f, std::move(p)});
        }
    }
    const std::size_t all_legs = legs.size();

    // A leg p may be replaced by h o p for any h out of cod(p): a cocone for
    // (h o p, q) gives one for (p, q). Keep only legs into the backend's
    // cofinal objects, plus any leg whose codomain maps into none of them.
    auto cofinal = c.cofinal_objects(budget.max_size);
    if (!cofinal.empty()) {
        std::set<ObjectId> z(cofinal.begin(), cofinal.end());
        std::map<ObjectId, bool> dominated;
        std::vector<Leg> kept;
        for (auto& leg : legs) {
            ObjectId x = leg.p.cod;
            if (z.count(x)) {
                kept.push_back(leg);
                continue;
            }
            auto it = dominated.find(x);
            if (it == dominated.end()) {
                bool d = false;
                for (auto t : cofinal)
                    if (c.has_arrow(x, t)) {
                        d = true;
                        break;
                    }
                it = dominated.emplace(x, d).first;
            }
            if (!it->second)
                kept.push_back(leg);
        }
        legs = std::move(kept);
    }

    std::uint64_t work = 0, pairs = 0;
    json cocones = json::array();
    std::optional<json> first_unknown;
    for (std::size_t i = 0; i < legs.size(); ++i) {
        for (std::size_t j = i + 1; j < legs.size(); ++j) {
            ++pairs;
            if (++work > budget.max_candidates || deadline.expired()) {
                return Verdict::unknown({{"reason", "budget exhausted"},
                                         {"pairs_checked", pairs - 1},
                                         {"legs", legs.size()},
                                         {"first_unresolved", first_unknown ? *first_unknown : json(nullptr)}});
            }
            auto r = examine_span(c, legs[i].p, legs[j].p, budget, work);
            switch (r.status) {
            case SpanStatus::Cocone:
                if (budget.record_witnesses)
                    cocones.push_back(cocone_json(c, legs[i].p, legs[j].p, r.cocone));
                break;
            case SpanStatus::Obstructed:
                return Verdict::no({{"f", c.arrow_json(legs[i].f)},
                                    {"g", c.arrow_json(legs[j].f)},
                                    {"obstruction", r.certificate}});
            case SpanStatus::NotFound:
                if (exhaustive)
                    return Verdict::no({{"f", c.arrow_json(legs[i].f)},
                                        {"g", c.arrow_json(legs[j].f)},
                                        {"obstruction", "no cocone in the finite category"}});
                [[fallthrough]];
            case SpanStatus::Exhausted:
                if (!first_unknown)
                    first_unknown = json{{"f", c.arrow_json(legs[i].f)}, {"g", c.arrow_json(legs[j].f)}};
                break;
            }
        }
    }
    if (first_unknown)
        return Verdict::unknown({{"reason", "no cocone found within budget"},
                                 {"pair", *first_unknown},
                                 {"legs", legs.size()},
                                 {"pairs_checked", pairs}});
    json w = {{"legs", all_legs}, {"legs_after_reduction", legs.size()}, {"pairs", pairs}, {"exhaustive", exhaustive}};
    if (budget.record_witnesses)
        w["cocones"] = std::move(cocones);
    return Verdict::yes(std::move(w));
}

Verdict is_amalgamable_object(const Category& c, ObjectId z, const SearchBudget& budget)
{
    return is_amalgamable_arrow(c, c.identity(z), budget);
}

bool check_amalgamation_witness(const Category& c, const Arrow& alpha, const json& witness)
{
    if (!witness.contains("cocones"))
        return false;
    try {
        for (auto& entry : witness.at("cocones")) {
            Arrow f{alpha.dom, c.object_from_json(entry.at("f").at("cod")), entry.at("f").at("map").get<std::vector<int>>()};
            Arrow g{alpha.dom, c.object_from_json(entry.at("g").at("cod")), entry.at("g").at("map").get<std::vector<int>>()};
            ObjectId apex = c.object_from_json(entry.at("apex"));
            Cocone w{apex, {f.cod, apex, entry.at("left").get<std::vector<int>>()},
                     {g.cod, apex, entry.at("right").get<std::vector<int>>()}};
            if (!c.is_arrow(f) || !c.is_arrow(g) || !check_cocone(c, f, g, w))
                return false;
        }
    }
    catch (const std::exception&) {
        return false;
    }
    return true;
}

Verdict is_directed(const Category& c, const SearchBudget& budget)
{
    budget.validate();
    auto objs = c.objects(budget.max_size);
    const bool exhaustive = exhaustive_for(c, budget);
    auto init = c.initial_object();
    std::uint64_t work = 0;
    std::optional<json> unresolved;
    for (std::size_t i = 0; i < objs.size(); ++i) {
        for (std::size_t j = i + 1; j < objs.size(); ++j) {
            ObjectId x = objs[i], y = objs[j];
            if (c.has_arrow(x, y) || c.has_arrow(y, x))
                continue;
            bool found = false;
            if (init) {
                auto fx = c.hom(*init, x), fy = c.hom(*init, y);
                if (!fx.empty() && !fy.empty())
                    if (auto w = c.propose_cocone(fx.front(), fy.front()); w && check_cocone(c, fx.front(), fy.front(), *w))
                        found = true;
            }
            for (auto z : found ? std::vector<ObjectId>{} : c.objects(budget.witness_size)) {
                if (++work > budget.max_candidates)
                    break;
                if (c.has_arrow(x, z) && c.has_arrow(y, z)) {
                    found = true;
                    break;
                }
            }
            if (found)
                continue;
            json pair = {c.object_json(x), c.object_json(y)};
            if (exhaustive && work <= budget.max_candidates)
                return Verdict::no({{"pair", pair}, {"reason", "no common target in the finite category"}});
            if (!unresolved)
                unresolved = pair;
        }
    }
    if (unresolved)
        return Verdict::unknown({{"reason", "no common target within budget"}, {"pair", *unresolved}});
    return Verdict::yes({{"objects", objs.size()}, {"exhaustive", exhaustive}});
}

// ---------------------------------------------------------------------------

std::vector<Arrow> arrows_through(const Category& c, const Arrow& alpha, ObjectId v)
{
    std::vector<Arrow> out;
    for (auto& h : c.hom(alpha.cod, v))
        out.push_back(c.compose(h, alpha));
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Hypergraph ramsey_hypergraph(const Category& c, const BadColoringQuery& q, ObjectId v, std::vector<Arrow>* vertices)
{
    auto verts = arrows_through(c, q.alpha, v);
    std::unordered_map<Arrow, int, ArrowHash> index;
    for (std::size_t i = 0; i < verts.size(); ++i)
        index.emplace(verts[i], static_cast<int>(i));
    Hypergraph h;
    h.vertices = static_cast<int>(verts.size());
    for (auto& e : c.hom(q.b, v)) {
        std::vector<int> edge;
        for (auto& f : q.family) {
            auto it = index.find(c.compose(e, f));
            if (it == index.end())
                throw std::logic_error("e o f does not factor through alpha");
            edge.push_back(it->second);
        }
        h.edges.push_back(std::move(edge));
    }
    if (vertices)
        *vertices = std::move(verts);
    return h;
}

namespace {
    void validate_query(const Category& c, const BadColoringQuery& q)
    {
        if (!c.is_arrow(q.alpha))
            throw InputError("find_bad_coloring: alpha is not an arrow of " + c.name());
        if (q.colors < 0)
            throw InputError("find_bad_coloring: negative colour count");
        auto allowed = arrows_through(c, q.alpha, q.b);
        for (auto& f : q.family)
            if (!std::binary_search(allowed.begin(), allowed.end(), f))
                throw InputError("find_bad_coloring: F is not contained in C(alpha, b)");
    }
} // namespace

BadColoringResult find_bad_coloring(const Category& c, const BadColoringQuery& q, ObjectId v,
                                    const SearchBudget& budget)
{
    validate_query(c, q);
    BadColoringResult out;
    auto h = ramsey_hypergraph(c, q, v, &out.vertices);
    auto r = find_good_coloring(h, q.colors, budget.max_coloring_nodes, budget.threads);
    out.status = r.status;
    out.coloring = std::move(r.coloring);
    out.nodes = r.nodes;
    return out;
}

bool check_bad_coloring(const Category& c, const BadColoringQuery& q, ObjectId v, const std::vector<int>& coloring)
{
    validate_query(c, q);
    auto h = ramsey_hypergraph(c, q, v);
    return is_good_coloring(h, q.colors, coloring);
}

RamseyWitness ramsey_witness_search(const Category& c, const BadColoringQuery& q, const SearchBudget& budget)
{
    budget.validate();
    validate_query(c, q);
    RamseyWitness w;
    for (auto v : c.objects(budget.witness_size)) {
        auto r = find_bad_coloring(c, q, v, budget);
        if (r.status == ColoringStatus::None) {
            w.v = v;
            return w;
        }
        if (r.status == ColoringStatus::Exhausted) {
            w.exhausted_budget = true;
            return w;
        }
        w.rejected.emplace_back(v, std::move(r));
    }
    return w;
}

Verdict is_ramsey_arrow(const Category& c, const Arrow& alpha, const SearchBudget& budget)
{
    budget.validate();
    if (!c.is_arrow(alpha))
        throw InputError("is_ramsey_arrow: not an arrow of " + c.name());
    if (auto closed = c.ramsey_closed_form(alpha))
        return *closed;
    if (!c.locally_finite())
        return Verdict::unknown({{"reason", "hom-sets are infinite; an explicit F is required"}});

    const bool exhaustive = exhaustive_for(c, budget);
    int kmax = budget.max_colors;
    if (exhaustive) {
        // Bad colourings with k colours stay bad with more, so k up to the
        // largest |C(alpha, v)| decides every k.
        for (auto v : c.objects(budget.witness_size))
            kmax = std::max<int>(kmax, static_cast<int>(arrows_through(c, alpha, v).size()));
    }
    json table = json::array();
    for (auto b : c.objects(budget.max_size)) {
        BadColoringQuery q{alpha, b, arrows_through(c, alpha, b), 1};
        for (int k = 1; k <= kmax; ++k) {
            q.colors = k;
            auto w = ramsey_witness_search(c, q, budget);
            if (w.v) {
                table.push_back({{"b", c.object_json(b)}, {"colors", k}, {"v", c.object_json(*w.v)}});
                continue;
            }
            if (w.exhausted_budget)
                return Verdict::unknown(
                    {{"reason", "colouring search budget exhausted"}, {"b", c.object_json(b)}, {"colors", k}});
            if (!exhaustive)
                return Verdict::unknown(
                    {{"reason", "no witness v within budget"}, {"b", c.object_json(b)}, {"colors", k}});
            json bad = json::array();
            for (auto& [v, r] : w.rejected)
                bad.push_back({{"v", c.object_json(v)}, {"coloring", r.coloring}});
            return Verdict::no({{"b", c.object_json(b)}, {"colors", k}, {"bad_colorings", bad}});
        }
    }
    return Verdict::yes({{"witnesses", table}, {"exhaustive", exhaustive}});
}

// ---------------------------------------------------------------------------

Verdict verify_amalgamation_extension(const Category& sub, const Category& full, const SearchBudget& budget)
{
    budget.validate();
    auto* fs = dynamic_cast<const FullSubcategory*>(&sub);
    if (!fs || &fs->parent() != &full)
        throw InputError("verify_amalgamation_extension: subcategory relation not declared");

    auto objs = full.objects(budget.max_size);
    json report = json::object();

    // (1) cofinality
    for (auto x : objs) {
        bool ok = fs->retract(x).has_value();
        if (!ok)
            for (auto z : fs->objects(budget.witness_size))
                if (full.has_arrow(x, z)) {
                    ok = true;
                    break;
                }
        if (!ok)
            return Verdict::unknown({{"reason", "no arrow into the subcategory found"}, {"object", full.object_json(x)}});
    }

    // (2) objects outside the subcategory are amalgamable
    std::map<ObjectId, Verdict> amalgamable;
    auto object_verdict = [&](ObjectId z) -> const Verdict& {
        auto it = amalgamable.find(z);
        if (it == amalgamable.end()) {
            SearchBudget b = budget;
            b.record_witnesses = false;
            it = amalgamable.emplace(z, is_amalgamable_object(full, z, b)).first;
        }
        return it->second;
    };
    std::size_t outside = 0;
    for (auto x : objs) {
        if (fs->contains(x))
            continue;
        ++outside;
        auto& v = object_verdict(x);
        if (v.is_no())
            return Verdict::no({{"condition", "outside object not amalgamable"},
                                {"object", full.object_json(x)},
                                {"certificate", v.payload}});
        if (v.is_unknown())
            return Verdict::unknown({{"condition", "outside object amalgamability undecided"},
                                     {"object", full.object_json(x)}});
    }

    // (3) amalgamable subcategory arrows factor through amalgamable objects
    auto sub_objs = fs->objects(budget.max_size);
    std::size_t checked = 0;
    for (auto a : sub_objs) {
        for (auto a2 : sub_objs) {
            for (auto& alpha : fs->hom(a, a2)) {
                SearchBudget b = budget;
                b.record_witnesses = false;
                if (!is_amalgamable_arrow(*fs, alpha, b).is_yes())
                    continue;
                ++checked;
                bool factored = false;
                json via;
                for (auto z : objs) {
                    if (!full.has_arrow(a, z) || !full.has_arrow(z, a2))
                        continue;
                    if (!object_verdict(z).is_yes())
                        continue;
                    for (auto& gamma : full.hom(a, z)) {
                        for (auto& beta : full.hom(z, a2))
                            if (full.compose(beta, gamma) == alpha) {
                                factored = true;
                                via = full.object_json(z);
                                break;
                            }
                        if (factored)
                            break;
                    }
                    if (factored)
                        break;
                }
                if (!factored)
                    return Verdict::unknown({{"condition", "no factorization through an amalgamable object found"},
                                             {"arrow", fs->arrow_json(alpha)}});
            }
        }
    }
    report["objects"] = objs.size();
    report["outside_objects"] = outside;
    report["amalgamable_arrows_factored"] = checked;
    return Verdict::yes(report);
}

} // namespace wfr
