#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>
#include <map>
#include <memory>
#include <numeric>
#include <sstream>

#include <CLI11.hpp>

#include "wfr/category_ops.hpp"
#include "wfr/fraisse.hpp"
#include "wfr/monoid.hpp"
#include "wfr/orders.hpp"
#include "wfr/tree_amalgamation.hpp"
#include "wfr/tree_category.hpp"
#include "wfr/tree_constructions.hpp"
#include "wfr/tree_morphism.hpp"

using namespace wfr;

namespace {

constexpr const char* kSchema = "wfr-report/1";

enum class Status { Yes, No, Unknown, Ok };

const char* status_name(Status s)
{
    switch (s) {
    case Status::Yes:
        return "yes";
    case Status::No:
        return "no";
    case Status::Unknown:
        return "unknown";
    default:
        return "ok";
    }
}

int exit_code(Status s)
{
    switch (s) {
    case Status::No:
        return 1;
    case Status::Unknown:
        return 2;
    default:
        return 0;
    }
}

Status from_outcome(Outcome o)
{
    switch (o) {
    case Outcome::Yes:
        return Status::Yes;
    case Outcome::No:
        return Status::No;
    default:
        return Status::Unknown;
    }
}

struct Report {
    Status status = Status::Ok;
    std::string summary;
    json result = json::object();
    std::vector<std::string> trace;
};

struct Options {
    std::vector<std::string> argv;
    int budget_size = 4;
    int witness_size = 8;
    std::uint64_t budget_candidates = 2'000'000;
    int colors = 2;
    int threads = 1;
    int timeout_ms = 0;
    std::string variant = "tc";
    std::string M = "1,2";
    std::uint64_t seed = 0;
    bool json_out = false;
    bool trace = false;
    bool timing = false;

    SearchBudget budget() const
    {
        SearchBudget b;
        b.max_size = budget_size;
        b.witness_size = witness_size;
        b.max_candidates = budget_candidates;
        b.max_colors = colors;
        b.threads = static_cast<unsigned>(threads);
        if (timeout_ms > 0)
            b.wall_clock = std::chrono::milliseconds(timeout_ms);
        b.validate();
        return b;
    }
};

// ---------------------------------------------------------------------------
// Input helpers

json read_json(const std::string& path)
{
    std::string text;
    if (path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin), {});
    }
    else {
        std::ifstream in(path);
        if (!in)
            throw InputError("cannot open " + path);
        text.assign(std::istreambuf_iterator<char>(in), {});
    }
    try {
        return json::parse(text);
    }
    catch (const json::parse_error& e) {
        throw InputError("malformed JSON in " + (path == "-" ? std::string("stdin") : path) + " at byte "
                         + std::to_string(e.byte) + ": " + e.what());
    }
}

const json& field(const json& j, const char* key)
{
    if (!j.is_object() || !j.contains(key))
        throw InputError(std::string("input needs a \"") + key + "\" field");
    return j.at(key);
}

std::vector<int> parse_int_list(const std::string& s)
{
    std::vector<int> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ','))
        try {
            out.push_back(std::stoi(item));
        }
        catch (const std::exception&) {
            throw InputError("not an integer list: " + s);
        }
    return out;
}

struct ParsedTree {
    LexTree tree;
    std::vector<int> json_ids;  // tree node -> JSON id
};

ParsedTree read_tree(const json& j)
{
    ParsedTree t;
    t.tree = LexTree::from_json(j, &t.json_ids);
    return t;
}

// Node maps: an object {"<dom id>": <cod id>}, a list of [dom id, cod id]
// pairs, or a list of cod ids in the order of the domain's JSON node list.
std::vector<int> read_map(const json& j, const json& dom_json, const ParsedTree& dom, const ParsedTree& cod)
{
    std::map<int, int> cod_index, dom_index;
    for (int v = 0; v < cod.tree.size(); ++v)
        cod_index[cod.json_ids[v]] = v;
    for (int v = 0; v < dom.tree.size(); ++v)
        dom_index[dom.json_ids[v]] = v;
    std::map<int, int> pairs;
    try {
        if (j.is_object()) {
            for (auto& [k, v] : j.items())
                pairs[std::stoi(k)] = v.get<int>();
        }
        else if (j.is_array() && !j.empty() && j.front().is_array()) {
            for (auto& p : j)
                pairs[p.at(0).get<int>()] = p.at(1).get<int>();
        }
        else if (j.is_array()) {
            auto& nodes = dom_json.at("nodes");
            if (nodes.size() != j.size())
                throw InputError("node map has " + std::to_string(j.size()) + " entries for "
                                 + std::to_string(nodes.size()) + " nodes");
            for (std::size_t i = 0; i < j.size(); ++i)
                pairs[nodes[i].at("id").get<int>()] = j[i].get<int>();
        }
        else {
            throw InputError("node map must be an object or a list");
        }
    }
    catch (const json::exception& e) {
        throw InputError(std::string("malformed node map: ") + e.what());
    }
    catch (const std::invalid_argument&) {
        throw InputError("node map keys must be node ids");
    }
    std::vector<int> f(dom.tree.size(), -1);
    for (auto& [a, b] : pairs) {
        auto ia = dom_index.find(a);
        auto ib = cod_index.find(b);
        if (ia == dom_index.end())
            throw InputError("node map: unknown domain node " + std::to_string(a));
        if (ib == cod_index.end())
            throw InputError("node map: unknown codomain node " + std::to_string(b));
        f[ia->second] = ib->second;
    }
    for (int v = 0; v < dom.tree.size(); ++v)
        if (f[v] < 0)
            throw InputError("node map misses domain node " + std::to_string(dom.json_ids[v]));
    return f;
}

std::unique_ptr<Category> category_by_name(const std::string& name, const std::string& M)
{
    if (name == "FinLO" || name == "finlo")
        return std::make_unique<AloCategory>(AloCategory::Family::Linear);
    if (name == "FinaLO" || name == "finalo")
        return std::make_unique<AloCategory>(AloCategory::Family::All);
    if (name == "FintLO" || name == "fintlo")
        return std::make_unique<AloCategory>(AloCategory::Family::Ternary);
    auto brace = name.find('{');
    if (brace != std::string::npos) {
        if (name.back() != '}')
            throw InputError("unknown category " + name);
        return std::make_unique<TreeCategory>(parse_int_list(name.substr(brace + 1, name.size() - brace - 2)),
                                              TreeVariant::parse(name.substr(0, brace)));
    }
    try {
        return std::make_unique<TreeCategory>(parse_int_list(M), TreeVariant::parse(name));
    }
    catch (const std::exception&) {
        throw InputError("unknown category " + name + " (finlo, finalo, fintlo, or a tree variant)");
    }
}

// ---------------------------------------------------------------------------
// monoid

Report monoid_check(const Options& o, const std::string& path, const std::string& element)
{
    json in = read_json(path);
    Report r;
    if (in.is_object() && in.contains("generators")) {
        WordMonoid m = WordMonoid::from_json(in);
        r.result["monoid"] = m.to_json();
        if (!element.empty()) {
            auto a = m.parse(element);
            auto v = is_ramsey_element(m, a);
            r.result["element"] = m.show(a);
            r.result["LE"] = satisfies_LE(m, a);
            r.result["ramsey"] = v.to_json();
            if (v.is_no() && v.payload.contains("generator")) {
                int g = 0;
                for (std::size_t i = 0; i < m.generators().size(); ++i)
                    if (m.generators()[i] == v.payload["generator"])
                        g = static_cast<int>(i);
                r.result["certificate_checked_to_length"] = o.budget_size;
                if (!check_parity_certificate(m, a, g, o.budget_size))
                    throw std::logic_error("parity certificate failed its own check");
            }
            r.status = from_outcome(v.outcome);
            r.summary = "element " + m.show(a) + ": Ramsey " + to_string(v.outcome);
            return r;
        }
        auto v = has_weak_ramsey_property(m);
        r.result["weak_ramsey"] = v.to_json();
        r.status = from_outcome(v.outcome);
        r.summary = "weak Ramsey property: " + to_string(v.outcome);
        return r;
    }

    FiniteMonoid m = FiniteMonoid::from_json(in);
    r.result["monoid"] = m.to_json();
    r.result["canonical_form"] = canonical_form(m);
    r.result["flags"] = classify_monoid(m).to_json();
    auto lz = left_zeros(m);
    r.result["left_zeros"] = lz;
    r.result["right_zeros"] = right_zeros(m);
    json elements = json::array(), disagreements = json::array();
    std::vector<int> alphas;
    if (element.empty())
        for (int a = 0; a < m.order(); ++a)
            alphas.push_back(a);
    else
        alphas.push_back(std::stoi(element));
    Verdict single;
    for (int a : alphas) {
        auto le = satisfies_LE(m, a);
        auto v = is_ramsey_element(m, a);
        json e = {{"alpha", a}, {"LE", le.holds}, {"ramsey", v.to_json()}};
        if (le.failing_pair)
            e["LE_failing_pair"] = {le.failing_pair->first, le.failing_pair->second};
        if (le.holds != v.is_yes() || v.is_unknown())
            disagreements.push_back(a);
        elements.push_back(std::move(e));
        r.trace.push_back("alpha " + std::to_string(a) + ": LE " + (le.holds ? "holds" : "fails") + ", Ramsey "
                          + to_string(v.outcome));
        single = v;
    }
    r.result["elements"] = elements;
    r.result["LE_ramsey_disagreements"] = disagreements;
    if (!element.empty()) {
        r.status = from_outcome(single.outcome);
        r.summary = "element " + element + ": Ramsey " + to_string(single.outcome);
        return r;
    }
    bool ramsey = has_ramsey_property(m);
    r.result["ramsey"] = ramsey;
    r.status = ramsey ? Status::Yes : Status::No;
    r.summary = std::string("Ramsey: ") + (ramsey ? "yes" : "no") + ", left zeros " + json(lz).dump()
                + ", LE/Ramsey disagreements " + disagreements.dump();
    return r;
}

Report monoid_sweep(const Options& o, int max_order, int random_count)
{
    if (max_order < 1 || max_order > 4)
        throw InputError("--max-order must lie in 1..4");
    Report r;
    int monoids = 0, elements = 0;
    json exceptions = json::array(), disagreements = json::array(), cancellative = json::array();
    json per_order = json::object();
    auto examine = [&](const FiniteMonoid& m, bool with_elements) {
        ++monoids;
        bool ramsey = has_ramsey_property(m);
        bool zero = !left_zeros(m).empty();
        if (ramsey != zero)
            exceptions.push_back(m.to_json());
        if (with_elements)
            for (int a = 0; a < m.order(); ++a) {
                ++elements;
                auto v = is_ramsey_element(m, a);
                if (v.is_unknown() || v.is_yes() != satisfies_LE(m, a).holds)
                    disagreements.push_back({{"monoid", m.to_json()}, {"alpha", a}});
            }
        auto flags = classify_monoid(m);
        if (flags.left_cancellative && m.order() > 1 && has_weak_ramsey_property(m).is_yes())
            cancellative.push_back(m.to_json());
    };
    for (int n = 1; n <= max_order; ++n) {
        auto all = enumerate_monoids(n);
        per_order[std::to_string(n)] = all.size();
        for (auto& m : all)
            examine(m, n <= 3);
        r.trace.push_back("order " + std::to_string(n) + ": " + std::to_string(all.size()) + " monoids");
    }
    if (random_count > 0) {
        Rng rng(o.seed);
        for (int i = 0; i < random_count; ++i)
            examine(random_monoid(4, rng), false);
        r.trace.push_back(std::to_string(random_count) + " random order-4 tables, seed " + std::to_string(o.seed));
    }
    r.result = {{"claim", "Ramsey iff a left zero exists"},
                {"monoids", monoids},
                {"per_order", per_order},
                {"random_order4", random_count},
                {"seed", o.seed},
                {"exceptions", exceptions},
                {"elements_checked", elements},
                {"LE_ramsey_disagreements", disagreements},
                {"left_cancellative_weak_ramsey", cancellative}};
    r.status = exceptions.empty() ? Status::Yes : Status::No;
    r.summary = std::to_string(monoids) + " monoids, " + std::to_string(exceptions.size()) + " exceptions, "
                + std::to_string(disagreements.size()) + " LE/Ramsey disagreements over "
                + std::to_string(elements) + " elements";
    return r;
}

// ---------------------------------------------------------------------------
// order

json labeled_json(const LabeledOrder& x) { return {{"shape", x.shape.to_json()}, {"position", x.position}}; }

Report order_roundtrip(const std::string& path)
{
    json in = read_json(path);
    Report r;
    if (in.is_object() && in.contains("triples")) {
        auto t = TernaryStructure::from_json(in);
        if (auto bad = check_axioms(t)) {
            r.status = Status::No;
            r.result = {{"axiom", bad->axiom}, {"tuple", bad->tuple}};
            r.summary = "not a model: " + bad->axiom + " fails at " + json(bad->tuple).dump();
            return r;
        }
        auto x = from_ternary(t);
        auto back = to_ternary(x);
        r.result = {{"order", labeled_json(x)}, {"ternary", back.to_json()}, {"identity", back == t}};
        r.status = back == t ? Status::Yes : Status::No;
        r.summary = std::string("F(G(R)) ") + (back == t ? "=" : "!=") + " R";
        return r;
    }
    auto x = AlmostLinearOrder::from_json(in);
    auto t = to_ternary(x);
    auto g = from_ternary(t);
    auto expected = forget_top_two(x);
    bool same = true;
    for (int a = 0; a < x.size(); ++a)
        for (int b = 0; b < x.size(); ++b)
            same = same && g.less(a, b) == expected.less(a, b);
    auto violation = check_axioms(t);
    r.result = {{"order", x.to_json()},
                {"ternary", t.to_json()},
                {"axioms_hold", !violation.has_value()},
                {"back", labeled_json(g)},
                {"forget_top_two", labeled_json(expected)},
                {"agrees", same}};
    r.status = same && !violation ? Status::Yes : Status::No;
    r.summary = std::string("G(F(X)) ") + (same ? "equals" : "differs from") + " X with the top two forgotten";
    return r;
}

Report order_classify(const std::string& path)
{
    json in = read_json(path);
    Report r;
    if (in.is_object() && in.contains("less")) {
        std::vector<std::vector<bool>> less;
        try {
            for (auto& row : in.at("less")) {
                less.emplace_back();
                for (auto& x : row)
                    less.back().push_back(x.is_boolean() ? x.get<bool>() : x.get<int>() != 0);
            }
        }
        catch (const json::exception& e) {
            throw InputError(std::string("malformed relation matrix: ") + e.what());
        }
        auto x = classify_order(less);
        r.result = labeled_json(x);
        r.summary = "normal form " + x.shape.to_json().dump();
        return r;
    }
    auto dom = AlmostLinearOrder::from_json(field(in, "dom"));
    auto cod = AlmostLinearOrder::from_json(field(in, "cod"));
    std::vector<int> f;
    try {
        f = field(in, "map").get<std::vector<int>>();
    }
    catch (const json::exception& e) {
        throw InputError(std::string("malformed map: ") + e.what());
    }
    if (!is_alo_arrow(dom, cod, f))
        throw InputError("map is not a one-to-one homomorphism");
    auto c = classify_arrow(dom, cod, f);
    bool amalgamable = is_amalgamable_alo_arrow(dom, cod, f);
    r.result = {{"classification", c.to_json()}, {"amalgamable", amalgamable}};
    r.status = amalgamable ? Status::Yes : Status::No;
    r.summary = std::string(c.embedding ? "embedding" : "refinement followed by an embedding") + "; amalgamable: "
                + (amalgamable ? "yes" : "no");
    return r;
}

// ---------------------------------------------------------------------------
// tree

TreeVariant variant_of(const Options& o)
{
    try {
        return TreeVariant::parse(o.variant);
    }
    catch (const std::exception&) {
        throw InputError("unknown variant " + o.variant);
    }
}

void require_valid(const LexTree& t, TreeKind kind, const char* what)
{
    auto v = validate(t, kind);
    if (!v.empty())
        throw InputError(std::string(what) + ": node " + std::to_string(v.front().node) + ": " + v.front().rule);
}

Report tree_amalgamate(const Options& o, const std::string& path)
{
    json in = read_json(path);
    auto variant = variant_of(o);
    auto S = read_tree(field(in, "S"));
    auto T1 = read_tree(field(in, "T1"));
    auto T2 = read_tree(field(in, "T2"));
    for (auto* t : {&S, &T1, &T2})
        require_valid(t->tree, variant.kind, t == &S ? "S" : t == &T1 ? "T1" : "T2");
    auto f1 = read_map(field(in, "f1"), in["S"], S, T1);
    auto f2 = read_map(field(in, "f2"), in["S"], S, T2);
    auto flags = MorphismFlags::for_variant(variant);
    for (auto* pr : {&f1, &f2}) {
        auto v = morphism_violations(S.tree, pr == &f1 ? T1.tree : T2.tree, *pr, flags);
        if (!v.empty())
            throw InputError(std::string(pr == &f1 ? "f1" : "f2") + " is not a " + variant.name() + " arrow: "
                             + v.front());
    }

    Report r;
    LexTree A = T1.tree, B = T2.tree;
    std::vector<int> g1 = f1, g2 = f2, e1(A.size()), e2(B.size());
    std::iota(e1.begin(), e1.end(), 0);
    std::iota(e2.begin(), e2.end(), 0);
    if (!variant.leveled) {
        auto d1 = level_dominate(S.tree, A, g1, variant.kind);
        auto d2 = level_dominate(S.tree, B, g2, variant.kind);
        r.trace.push_back("level domination added " + std::to_string(d1.added) + " and "
                          + std::to_string(d2.added) + " nodes");
        A = d1.tree;
        g1 = d1.inclusion;
        e1 = d1.embedding;
        B = d2.tree;
        g2 = d2.inclusion;
        e2 = d2.embedding;
    }
    auto a = amalgamate(S.tree, A, g1, B, g2, variant.kind);
    for (auto& s : a.trace)
        r.trace.push_back("case " + s.rule + ": " + s.detail);
    if (!a.ok) {
        json nodes = json::array();
        for (int s : a.incompatible)
            nodes.push_back(S.json_ids[s]);
        r.status = Status::No;
        r.result = {{"incompatible", nodes}};
        r.summary = "incompatible at S nodes " + nodes.dump();
        return r;
    }
    auto bad = amalgam_violations(S.tree, A, g1, B, g2, a, variant.kind);
    if (!bad.empty())
        throw std::logic_error("amalgam failed its own check: " + bad.front());
    json trace = json::array();
    for (auto& s : a.trace)
        trace.push_back({{"case", s.rule}, {"detail", s.detail}});
    auto left = compose_maps(a.left, e1), right = compose_maps(a.right, e2);
    // Legs keyed by the input JSON ids.
    json lj = json::object(), rj = json::object();
    for (int v = 0; v < T1.tree.size(); ++v)
        lj[std::to_string(T1.json_ids[v])] = left[v];
    for (int v = 0; v < T2.tree.size(); ++v)
        rj[std::to_string(T2.json_ids[v])] = right[v];
    r.result = {{"tree", a.tree.to_json()},
                {"canonical", a.tree.canonical()},
                {"left", lj},
                {"right", rj},
                {"free", a.free},
                {"variant", variant.name()},
                {"trace", trace}};
    r.summary = "amalgam with " + std::to_string(a.tree.size()) + " nodes: " + a.tree.canonical();
    return r;
}

Report tree_decompose(const Options& o, const std::string& path)
{
    json in = read_json(path);
    auto kind = variant_of(o).kind;
    auto S = read_tree(field(in, "S"));
    auto T = read_tree(field(in, "T"));
    require_valid(S.tree, kind, "S");
    require_valid(T.tree, kind, "T");
    auto f = read_map(field(in, "f"), in["S"], S, T);
    auto v = morphism_violations(S.tree, T.tree, f, MorphismFlags{});
    if (!v.empty())
        throw InputError("f is not a level-preserving morphism: " + v.front());
    Report r;
    auto k = classify_extension(S.tree, T.tree, f);
    auto form = extension_form(S.tree, T.tree, f, kind);
    auto back = recompose(S.tree, form);
    bool round_trip = back.tree.canonical() == T.tree.canonical();
    r.trace.push_back("extension kind: " + extension_kind_name(k));
    for (auto& l : form.lower.levels)
        r.trace.push_back("surgery at base level " + std::to_string(l.level) + " on "
                          + std::to_string(l.columns.size()) + " nodes");
    for (auto& p : form.upper.plantings)
        r.trace.push_back("planting of " + std::to_string(p.planted.size()) + " nodes at middle node "
                          + std::to_string(p.node));
    r.result = {{"kind", extension_kind_name(k)},
                {"form", form.to_json()},
                {"middle", form.decomposition.middle.to_json()},
                {"recomposed", back.tree.canonical()},
                {"round_trip", round_trip}};
    r.status = round_trip ? Status::Ok : Status::No;
    r.summary = extension_kind_name(k) + " extension; recomposition " + (round_trip ? "matches" : "differs");
    return r;
}

Report tree_embeddings(const Options& o, const std::string& path, int limit)
{
    json in = read_json(path);
    auto variant = variant_of(o);
    auto S = read_tree(field(in, "S"));
    auto T = read_tree(field(in, "T"));
    auto maps = enumerate_embeddings(S.tree, T.tree, MorphismFlags::for_variant(variant), nullptr,
                                     limit > 0 ? static_cast<std::size_t>(limit) : std::numeric_limits<std::size_t>::max());
    json out = json::array();
    for (auto& f : maps) {
        json m = json::object();
        for (int v = 0; v < S.tree.size(); ++v)
            m[std::to_string(S.json_ids[v])] = T.json_ids[f[v]];
        out.push_back(std::move(m));
    }
    Report r;
    r.result = {{"count", maps.size()}, {"embeddings", out}, {"variant", variant.name()}, {"limit", limit}};
    r.status = maps.empty() ? Status::No : Status::Yes;
    r.summary = std::to_string(maps.size()) + " embeddings";
    return r;
}

Report tree_dominate(const Options& o, const std::string& path)
{
    json in = read_json(path);
    auto kind = variant_of(o).kind;
    auto S = read_tree(field(in, "S"));
    auto T = read_tree(field(in, "T"));
    auto f = read_map(field(in, "f"), in["S"], S, T);
    auto v = morphism_violations(S.tree, T.tree, f, MorphismFlags{false, true, true});
    if (!v.empty())
        throw InputError("f is not a leveless morphism: " + v.front());
    auto d = level_dominate(S.tree, T.tree, f, kind);
    Report r;
    r.result = d.to_json();
    r.result["canonical"] = d.tree.canonical();
    r.summary = "added " + std::to_string(d.added) + " nodes: " + d.tree.canonical();
    return r;
}

Report tree_buildv(const Options& o, int s, int y, const std::string& coloring)
{
    Report r;
    VTree v;
    if (coloring.empty()) {
        v = build_V(s, y);
    }
    else {
        v = prune_V(s, y, vcoloring_from_json(read_json(coloring)), parse_int_list(o.M));
    }
    r.result = {{"tree", v.tree.to_json()}, {"canonical", v.tree.canonical()}, {"sequences", v.node}};
    r.summary = std::to_string(v.tree.size()) + " nodes: " + v.tree.canonical();
    if (o.trace) {
        std::stringstream in(tree_diagram(v.tree));
        for (std::string line; std::getline(in, line);)
            r.trace.push_back(line);
    }
    return r;
}

// ---------------------------------------------------------------------------
// ramsey

struct RamseyProblem {
    std::unique_ptr<Category> cat;
    BadColoringQuery query;
    json echo;
};

RamseyProblem ramsey_problem(const Options& o, const std::string& backend, int a, int b, const std::string& input)
{
    RamseyProblem p;
    if (backend == "lo" || backend == "alo") {
        if (a < 0 || b < 0)
            throw InputError("--a and --b must be nonnegative");
        auto* c = new AloCategory(backend == "lo" ? AloCategory::Family::Linear : AloCategory::Family::All);
        p.cat.reset(c);
        auto A = c->object(AlmostLinearOrder::linear(a));
        auto B = c->object(AlmostLinearOrder::linear(b));
        p.query.alpha = c->identity(A);
        p.query.b = B;
        p.echo = {{"backend", backend}, {"a", a}, {"b", b}};
    }
    else if (backend == "tree") {
        if (input.empty())
            throw InputError("the tree backend reads {\"a\": tree, \"b\": tree} from --input");
        json in = read_json(input);
        auto A = LexTree::from_json(field(in, "a"));
        auto B = LexTree::from_json(field(in, "b"));
        auto* c = new TreeCategory(A.M(), variant_of(o));
        p.cat.reset(c);
        p.query.alpha = c->identity(c->object(A));
        p.query.b = c->object(B);
        p.echo = {{"backend", backend}, {"variant", variant_of(o).name()}, {"a", A.to_json()}, {"b", B.to_json()}};
    }
    else {
        throw InputError("unknown backend " + backend + " (lo, alo, tree)");
    }
    p.query.family = p.cat->hom(p.query.alpha.cod, p.query.b);
    p.query.colors = o.colors;
    p.echo["colors"] = o.colors;
    return p;
}

Report ramsey_search(const Options& o, const std::string& backend, int a, int b, const std::string& input)
{
    auto p = ramsey_problem(o, backend, a, b, input);
    auto budget = o.budget();
    auto w = ramsey_witness_search(*p.cat, p.query, budget);
    Report r;
    json rejected = json::array();
    for (auto& [v, bad] : w.rejected) {
        rejected.push_back({{"v", p.cat->object_json(v)}, {"grade", p.cat->grade(v)}, {"coloring", bad.coloring}});
        r.trace.push_back("grade " + std::to_string(p.cat->grade(v)) + ": bad colouring of "
                          + std::to_string(bad.vertices.size()) + " arrows");
    }
    r.result = {{"query", p.echo}, {"rejected", rejected}, {"exhausted_budget", w.exhausted_budget}};
    if (w.v) {
        int N = p.cat->grade(*w.v);
        r.result["witness"] = p.cat->object_json(*w.v);
        r.result["N"] = N;
        r.status = Status::Yes;
        r.summary = "witness N = " + std::to_string(N);
    }
    else {
        r.result["N"] = nullptr;
        r.status = Status::Unknown;
        r.summary = "no witness of grade <= " + std::to_string(budget.witness_size);
    }
    return r;
}

Report ramsey_verify(const Options& o, const std::string& path)
{
    json rep = read_json(path);
    const json& res = rep.contains("result") ? rep["result"] : rep;
    const json& q = field(res, "query");
    Options o2 = o;
    o2.colors = field(q, "colors").get<int>();
    std::string backend = field(q, "backend").get<std::string>();
    std::string tmp;
    RamseyProblem p;
    if (backend == "tree") {
        o2.variant = field(q, "variant").get<std::string>();
        auto* c = new TreeCategory(LexTree::from_json(q["a"]).M(), variant_of(o2));
        p.cat.reset(c);
        p.query.alpha = c->identity(c->object(LexTree::from_json(q["a"])));
        p.query.b = c->object(LexTree::from_json(q["b"]));
        p.query.family = c->hom(p.query.alpha.cod, p.query.b);
        p.query.colors = o2.colors;
    }
    else {
        p = ramsey_problem(o2, backend, field(q, "a").get<int>(), field(q, "b").get<int>(), "");
    }
    Report r;
    int checked = 0;
    for (auto& rj : field(res, "rejected")) {
        ObjectId v = p.cat->object_from_json(rj.at("v"));
        bool ok = check_bad_coloring(*p.cat, p.query, v, rj.at("coloring").get<std::vector<int>>());
        r.trace.push_back("rejected grade " + std::to_string(p.cat->grade(v)) + ": " + (ok ? "checked" : "FAILED"));
        if (!ok) {
            r.status = Status::No;
            r.result = {{"failed", rj}};
            r.summary = "a rejection certificate does not check";
            return r;
        }
        ++checked;
    }
    r.result["rejections_checked"] = checked;
    if (res.contains("witness") && !res["witness"].is_null()) {
        ObjectId v = p.cat->object_from_json(res["witness"]);
        auto bad = find_bad_coloring(*p.cat, p.query, v, o.budget());
        r.result["witness_search_nodes"] = bad.nodes;
        if (bad.status == ColoringStatus::Found) {
            r.status = Status::No;
            r.result["counterexample"] = bad.coloring;
            r.summary = "the witness admits a bad colouring";
            return r;
        }
        if (bad.status == ColoringStatus::Exhausted) {
            r.status = Status::Unknown;
            r.summary = "colouring search budget exhausted at the witness";
            return r;
        }
    }
    r.status = Status::Yes;
    r.summary = "report verified: " + std::to_string(checked) + " rejections and the witness";
    return r;
}

// ---------------------------------------------------------------------------
// milliken

Report milliken_search(const Options& o, int m, int a, int b, int n_max, std::uint64_t node_limit)
{
    auto res = milliken_witness_search(m, a, b, o.colors, n_max, node_limit, static_cast<unsigned>(o.threads));
    Report r;
    r.result = res.to_json();
    r.result.erase("nodes");
    r.result["query"] = {{"m", m}, {"a", a}, {"b", b}, {"colors", o.colors}, {"n_max", n_max}};
    if (res.N) {
        r.status = Status::Yes;
        r.summary = "N = " + std::to_string(*res.N);
    }
    else {
        r.status = Status::Unknown;
        r.summary = res.exhausted ? "node limit reached" : "no N <= " + std::to_string(n_max);
    }
    return r;
}

// ---------------------------------------------------------------------------
// fraisse

Report fraisse_build(const Options& o, const std::string& category, int length)
{
    auto c = category_by_name(category, o.M);
    auto budget = o.budget();
    auto seq = build_weak_fraisse_prefix(*c, length, budget, o.seed);
    Report r;
    r.result = {{"prefix", seq.to_json()}};
    std::string sizes;
    for (int i = 0; i < seq.length(); ++i)
        sizes += (i ? " " : "") + std::to_string(c->grade(seq.object(i)));
    r.summary = c->name() + " prefix, grades " + sizes;
    return r;
}

Report fraisse_verify(const Options& o, const std::string& path, int bound)
{
    json in = read_json(path);
    const json& pj = in.contains("result") ? in["result"]["prefix"] : in.contains("prefix") ? in["prefix"] : in;
    auto c = category_by_name(field(pj, "category").get<std::string>(), o.M);
    auto seq = SequencePrefix::from_json(*c, pj);
    Report r;
    if (auto bad = seq.functoriality_failure()) {
        r.status = Status::No;
        r.result = {{"functoriality_failure", *bad}};
        r.summary = "connecting arrows do not compose";
        return r;
    }
    auto w0 = verify_W0(seq, bound);
    json w1 = json::array();
    bool all = true;
    for (int n = 0; n < seq.length(); ++n) {
        auto v = verify_W1_step(seq, n, o.budget());
        all = all && v.is_yes();
        r.trace.push_back("W1 at n = " + std::to_string(n) + ": " + to_string(v.outcome));
        w1.push_back(v.to_json());
    }
    r.result = {{"W0", w0.to_json()}, {"W1", w1}, {"category", c->name()}, {"length", seq.length()}};
    r.status = w0.is_no() ? Status::No : !w0.is_yes() || !all ? Status::Unknown : Status::Yes;
    r.summary = "W0 " + to_string(w0.outcome) + ", W1 " + (all ? "yes at every n" : "not decided at every n");
    return r;
}

Report fraisse_zigzag(const Options& o, const std::string& path, int steps)
{
    json in = read_json(path);
    auto prefix = [](const json& j) -> const json& { return j.contains("result") ? j["result"]["prefix"] : j.contains("prefix") ? j["prefix"] : j; };
    const json& uj = prefix(field(in, "u"));
    const json& vj = prefix(field(in, "v"));
    if (field(uj, "category") != field(vj, "category"))
        throw InputError("the prefixes live in different categories");
    auto c = category_by_name(uj["category"].get<std::string>(), o.M);
    auto u = SequencePrefix::from_json(*c, uj);
    auto v = SequencePrefix::from_json(*c, vj);
    auto z = back_and_forth(u, v, steps, o.budget());
    auto err = check_zigzag(u, v, z);
    Report r;
    r.result = {{"zigzag", z.to_json(*c)}, {"identities_hold", err.empty()}};
    for (std::size_t n = 0; n < z.g.size(); ++n)
        r.trace.push_back("f_" + std::to_string(n) + ": u_" + std::to_string(z.k[n]) + " -> v_"
                          + std::to_string(z.l[n]) + ", g_" + std::to_string(n) + ": v_" + std::to_string(z.l[n])
                          + " -> u_" + std::to_string(z.k[n + 1]));
    if (!err.empty()) {
        r.status = Status::No;
        r.result["failure"] = err;
        r.summary = "zig-zag identity fails: " + err;
        return r;
    }
    r.status = Status::Yes;
    r.summary = "zig-zag of depth " + std::to_string(steps) + " closes";
    return r;
}

// ---------------------------------------------------------------------------

json command_echo(const Options& o)
{
    json j = json::array();
    for (std::size_t i = 1; i < o.argv.size(); ++i)
        j.push_back(o.argv[i]);
    return j;
}

int emit(const Options& o, const Report& r, double seconds)
{
    if (o.json_out) {
        json j = {{"schema", kSchema}, {"command", command_echo(o)}, {"status", status_name(r.status)}, {"result", r.result}};
        if (o.trace)
            j["trace"] = r.trace;
        if (o.timing)
            j["timing_s"] = seconds;
        std::cout << j.dump(2) << "\n";
    }
    else {
        std::cout << status_name(r.status) << ": " << r.summary << "\n";
        if (o.trace)
            for (auto& line : r.trace)
                std::cout << "  " << line << "\n";
        if (o.timing)
            std::printf("time: %.3fs\n", seconds);
    }
    return exit_code(r.status);
}

int emit_error(const Options& o, const std::string& kind, const std::string& message, int code)
{
    if (o.json_out) {
        json j = {{"schema", kSchema}, {"command", command_echo(o)}, {"status", kind}, {"error", message}};
        std::cout << j.dump(2) << "\n";
    }
    std::cerr << "wfr: " << message << "\n";
    return code;
}

} // namespace

int main(int argc, char** argv)
{
    Options o;
    o.argv.assign(argv, argv + argc);
    if (const char* env = std::getenv("WFR_BUDGET_SIZE"))
        try {
            o.budget_size = std::stoi(env);
        }
        catch (const std::exception&) {
            std::cerr << "wfr: WFR_BUDGET_SIZE is not an integer\n";
            return 3;
        }

    CLI::App app{"Finite weak Fraisse and weak Ramsey workbench"};
    app.require_subcommand(1);
    app.fallthrough();
    app.add_option("--budget-size", o.budget_size, "grade bound on enumerated objects (env WFR_BUDGET_SIZE)");
    app.add_option("--witness-size", o.witness_size, "grade bound on witness objects");
    app.add_option("--budget-candidates", o.budget_candidates, "cap on examined candidates");
    app.add_option("--colors", o.colors, "number of colours k");
    app.add_option("--threads", o.threads, "worker threads for parallel searches");
    app.add_option("--timeout-ms", o.timeout_ms, "wall-clock cap for searches, 0 for none");
    app.add_option("--variant", o.variant, "tw|tc|ta|leveless (or tw-leveless, ta-leveless)");
    app.add_option("--M", o.M, "splitting degrees, comma separated");
    app.add_option("--seed", o.seed, "seed for random suites and prefix schedules");
    app.add_flag("--json", o.json_out, "print the JSON report");
    app.add_flag("--trace", o.trace, "name the construction step taken at each stage");
    app.add_flag("--timing", o.timing, "report elapsed time");

    std::function<Report()> run;
    std::string input = "-", element, backend = "lo", coloring, category = "finlo";
    int max_order = 3, random_count = 0, limit = 0, s = 2, y = 3, a = 2, b = 3, m = 2, n_max = 6, length = 5,
        bound = 3, steps = 2;
    std::uint64_t node_limit = 2'000'000'000;

    auto sub = [&](CLI::App* parent, const std::string& name, const std::string& help) {
        auto* c = parent->add_subcommand(name, help);
        c->fallthrough();
        return c;
    };
    auto with_input = [&](CLI::App* c) { c->add_option("input", input, "JSON file, - for stdin"); };

    auto* monoid = sub(&app, "monoid", "finite and word monoids");
    monoid->require_subcommand(1);
    auto* mc = sub(monoid, "check", "Ramsey, LE and weak Ramsey status of a monoid");
    with_input(mc);
    mc->add_option("--element", element, "a single element (index, or a word for word monoids)");
    mc->callback([&] { run = [&] { return monoid_check(o, input, element); }; });
    auto* ms = sub(monoid, "sweep", "Ramsey iff left zero over all small monoids");
    ms->add_option("--max-order", max_order, "largest order enumerated (<= 4)");
    ms->add_option("--random", random_count, "additional random order-4 tables");
    ms->callback([&] { run = [&] { return monoid_sweep(o, max_order, random_count); }; });

    auto* order = sub(&app, "order", "almost linear orders and ternary structures");
    order->require_subcommand(1);
    auto* orr = sub(order, "roundtrip", "G(F(X)) for an order, F(G(R)) for a ternary structure");
    with_input(orr);
    orr->callback([&] { run = [&] { return order_roundtrip(input); }; });
    auto* oc = sub(order, "classify", "normal form of a relation matrix, or an arrow's classification");
    with_input(oc);
    oc->callback([&] { run = [&] { return order_classify(input); }; });

    auto* tree = sub(&app, "tree", "lexicographic trees");
    tree->require_subcommand(1);
    auto* ta = sub(tree, "amalgamate", "amalgamate {S, T1, f1, T2, f2}");
    with_input(ta);
    ta->callback([&] { run = [&] { return tree_amalgamate(o, input); }; });
    auto* td = sub(tree, "decompose", "canonical decomposition of {S, T, f}");
    with_input(td);
    td->callback([&] { run = [&] { return tree_decompose(o, input); }; });
    auto* te = sub(tree, "embeddings", "all morphisms S -> T of {S, T}");
    with_input(te);
    te->add_option("--limit", limit, "stop after this many, 0 for all");
    te->callback([&] { run = [&] { return tree_embeddings(o, input, limit); }; });
    auto* tdom = sub(tree, "dominate", "level domination of a leveless {S, T, f}");
    with_input(tdom);
    tdom->callback([&] { run = [&] { return tree_dominate(o, input); }; });
    auto* tv = sub(tree, "buildv", "V_{S,Y}, or its pruning by a colouring");
    tv->add_option("--s", s, "size of S")->required();
    tv->add_option("--y", y, "length of the chain Y")->required();
    tv->add_option("--coloring", coloring, "colouring file: [[sequence, colour], ...]");
    tv->callback([&] { run = [&] { return tree_buildv(o, s, y, coloring); }; });

    auto* ramsey = sub(&app, "ramsey", "Ramsey witness searches");
    ramsey->require_subcommand(1);
    auto* rs = sub(ramsey, "search", "least v with v -> (b)^a_k");
    rs->add_option("--backend", backend, "lo|alo|tree");
    rs->add_option("--a", a, "size of a (lo, alo)");
    rs->add_option("--b", b, "size of b (lo, alo)");
    rs->add_option("--input", coloring, "tree backend: {\"a\": tree, \"b\": tree}");
    rs->callback([&] { run = [&] { return ramsey_search(o, backend, a, b, coloring); }; });
    auto* rv = sub(ramsey, "verify", "re-check the certificates of a search report");
    with_input(rv);
    rv->callback([&] { run = [&] { return ramsey_verify(o, input); }; });

    auto* milliken = sub(&app, "milliken", "finite Milliken numbers");
    milliken->require_subcommand(1);
    auto* mk = sub(milliken, "search", "least N for the balanced m-ary tree");
    mk->add_option("--m", m, "splitting degree");
    mk->add_option("--a", a, "height of the coloured strong subtrees");
    mk->add_option("--b", b, "height of the sought strong subtree");
    mk->add_option("--n-max", n_max, "largest height tried");
    mk->add_option("--node-limit", node_limit, "colouring search node cap");
    mk->callback([&] { run = [&] { return milliken_search(o, m, a, b, n_max, node_limit); }; });

    auto* fraisse = sub(&app, "fraisse", "weak Fraisse sequence prefixes");
    fraisse->require_subcommand(1);
    auto* fb = sub(fraisse, "build", "build a prefix");
    fb->add_option("--category", category, "finlo|finalo|fintlo|tw|tc|ta|leveless (trees use --M)");
    fb->add_option("--length", length, "number of objects");
    fb->callback([&] { run = [&] { return fraisse_build(o, category, length); }; });
    auto* fv = sub(fraisse, "verify", "check W0 and W1 on a prefix");
    with_input(fv);
    fv->add_option("--bound", bound, "W0 grade bound");
    fv->callback([&] { run = [&] { return fraisse_verify(o, input, bound); }; });
    auto* fz = sub(fraisse, "zigzag", "back and forth between {u, v}");
    with_input(fz);
    fz->add_option("--steps", steps, "zig-zag depth");
    fz->callback([&] { run = [&] { return fraisse_zigzag(o, input, steps); }; });

    try {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    }
    catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    auto start = std::chrono::steady_clock::now();
    try {
        Report r = run();
        double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        return emit(o, r, secs);
    }
    catch (const BudgetExhausted& e) {
        return emit_error(o, "unknown", e.what(), 2);
    }
    catch (const InputError& e) {
        return emit_error(o, "error", e.what(), 3);
    }
    catch (const json::exception& e) {
        return emit_error(o, "error", std::string("malformed input: ") + e.what(), 3);
    }
    catch (const std::invalid_argument& e) {
        return emit_error(o, "error", std::string("malformed input: ") + e.what(), 3);
    }
}
