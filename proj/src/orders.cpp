#include "wfr/orders.hpp"

#include <algorithm>
#include <numeric>
#include <queue>

namespace wfr {

AlmostLinearOrder AlmostLinearOrder::linear(int n)
{
    if (n < 0)
        throw InputError("linear order of negative size");
    return {Kind::Linear, n};
}

AlmostLinearOrder AlmostLinearOrder::lb(int n)
{
    if (n < 0)
        throw InputError("LB order with negative chain");
    return {Kind::LB, n};
}

bool AlmostLinearOrder::less(int x, int y) const
{
    if (x == y)
        return false;
    if (kind_ == Kind::LB && x >= n_ && y >= n_)
        return false;
    return x < y;
}

std::string AlmostLinearOrder::key() const
{
    return (kind_ == Kind::Linear ? "L" : "LB") + std::to_string(n_);
}

json AlmostLinearOrder::to_json() const
{
    return {{"kind", kind_ == Kind::Linear ? "linear" : "lb"}, {"n", n_}};
}

AlmostLinearOrder AlmostLinearOrder::from_json(const json& j)
{
    try {
        auto kind = j.at("kind").get<std::string>();
        int n = j.at("n").get<int>();
        if (kind == "linear")
            return linear(n);
        if (kind == "lb")
            return lb(n);
        throw InputError("unknown order kind '" + kind + "'");
    }
    catch (const json::exception& e) {
        throw InputError(std::string("bad order JSON: ") + e.what());
    }
}

LabeledOrder classify_order(const std::vector<std::vector<bool>>& less)
{
    const int n = static_cast<int>(less.size());
    for (auto& row : less)
        if (static_cast<int>(row.size()) != n)
            throw InputError("relation matrix is not square");
    for (int x = 0; x < n; ++x) {
        if (less[x][x])
            throw InputError("relation is not irreflexive at " + std::to_string(x));
        for (int y = 0; y < n; ++y)
            for (int z = 0; z < n; ++z)
                if (less[x][y] && less[y][z] && !less[x][z])
                    throw InputError("relation is not transitive at (" + std::to_string(x) + "," + std::to_string(y)
                                     + "," + std::to_string(z) + ")");
    }
    std::vector<int> below(n, 0);
    std::vector<std::pair<int, int>> incomparable;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y) {
            if (less[y][x])
                ++below[x];
            if (x < y && !less[x][y] && !less[y][x])
                incomparable.push_back({x, y});
        }

    LabeledOrder out;
    out.position.assign(n, 0);
    if (incomparable.empty()) {
        out.shape = AlmostLinearOrder::linear(n);
        for (int x = 0; x < n; ++x)
            out.position[x] = below[x];
        return out;
    }
    if (incomparable.size() > 1 || n < 2)
        throw InputError("order is not almost linear");
    auto [a, b] = incomparable.front();
    out.shape = AlmostLinearOrder::lb(n - 2);
    for (int x = 0; x < n; ++x)
        out.position[x] = below[x];
    out.position[a] = n - 2;
    out.position[b] = n - 1;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (less[x][y] != out.less(x, y))
                throw InputError("order is not almost linear");
    return out;
}

// ---------------------------------------------------------------------------

json TernaryStructure::to_json() const
{
    json t = json::array();
    for (auto& r : triples)
        t.push_back({r[0], r[1], r[2]});
    return {{"size", size}, {"triples", t}};
}

TernaryStructure TernaryStructure::from_json(const json& j)
{
    TernaryStructure t;
    try {
        t.size = j.at("size").get<int>();
        for (auto& r : j.at("triples")) {
            auto v = r.get<std::vector<int>>();
            if (v.size() != 3)
                throw InputError("ternary tuple must have three entries");
            for (int x : v)
                if (x < 0 || x >= t.size)
                    throw InputError("ternary tuple entry out of range");
            t.triples.insert({v[0], v[1], v[2]});
        }
    }
    catch (const json::exception& e) {
        throw InputError(std::string("bad ternary structure JSON: ") + e.what());
    }
    if (t.size < 0)
        throw InputError("negative ternary structure size");
    return t;
}

std::optional<AxiomViolation> check_axioms(const TernaryStructure& t)
{
    auto has = [&](int x, int y, int z) { return t.triples.count({x, y, z}) > 0; };
    for (auto& r : t.triples)
        if (r[0] == r[1] || r[0] == r[2] || r[1] == r[2])
            return AxiomViolation{"antireflexivity", {r[0], r[1], r[2]}};
    for (auto& r : t.triples)
        if (!has(r[0], r[2], r[1]))
            return AxiomViolation{"symmetry", {r[0], r[1], r[2]}};
    for (auto& r : t.triples) {
        int x = r[0], y = r[1], w = r[2];
        for (auto it = t.triples.lower_bound({y, -1, -1}); it != t.triples.end() && (*it)[0] == y; ++it) {
            int z = (*it)[1], w2 = (*it)[2];
            if (!has(x, z, w2))
                return AxiomViolation{"transitivity", {x, y, w, z, w2}};
        }
    }
    for (int x = 0; x < t.size; ++x)
        for (int y = 0; y < t.size; ++y)
            for (int z = 0; z < t.size; ++z)
                if (x != y && y != z && x != z && !has(x, y, z) && !has(y, z, x) && !has(z, x, y))
                    return AxiomViolation{"linearity", {x, y, z}};
    return std::nullopt;
}

namespace {
    std::string describe(const AxiomViolation& v)
    {
        std::string s = "ternary structure violates " + v.axiom + " at (";
        for (std::size_t i = 0; i < v.tuple.size(); ++i)
            s += (i ? "," : "") + std::to_string(v.tuple[i]);
        return s + ")";
    }
} // namespace

AxiomError::AxiomError(AxiomViolation v) : InputError(describe(v)), v_(std::move(v)) {}

TernaryStructure to_ternary(const LabeledOrder& x)
{
    TernaryStructure t;
    t.size = static_cast<int>(x.position.size());
    for (int a = 0; a < t.size; ++a)
        for (int b = 0; b < t.size; ++b)
            for (int c = 0; c < t.size; ++c)
                if (b != c && x.less(a, b) && x.less(a, c))
                    t.triples.insert({a, b, c});
    return t;
}

TernaryStructure to_ternary(const AlmostLinearOrder& x)
{
    LabeledOrder l{x, std::vector<int>(x.size())};
    std::iota(l.position.begin(), l.position.end(), 0);
    return to_ternary(l);
}

LabeledOrder from_ternary(const TernaryStructure& t)
{
    if (auto v = check_axioms(t))
        throw AxiomError(*v);
    std::vector<std::vector<bool>> less(t.size, std::vector<bool>(t.size, false));
    for (auto& r : t.triples)
        less[r[0]][r[1]] = true;
    return classify_order(less);
}

LabeledOrder forget_top_two(const AlmostLinearOrder& x)
{
    LabeledOrder out{x, std::vector<int>(x.size())};
    std::iota(out.position.begin(), out.position.end(), 0);
    if (x.is_linear() && x.size() >= 2)
        out.shape = AlmostLinearOrder::lb(x.size() - 2);
    return out;
}

// ---------------------------------------------------------------------------

bool is_alo_arrow(const AlmostLinearOrder& dom, const AlmostLinearOrder& cod, const std::vector<int>& f)
{
    if (static_cast<int>(f.size()) != dom.size())
        return false;
    std::vector<bool> used(cod.size(), false);
    for (int v : f) {
        if (v < 0 || v >= cod.size() || used[v])
            return false;
        used[v] = true;
    }
    for (int x = 0; x < dom.size(); ++x)
        for (int y = 0; y < dom.size(); ++y)
            if (dom.less(x, y) && !cod.less(f[x], f[y]))
                return false;
    return true;
}

bool is_embedding(const AlmostLinearOrder& dom, const AlmostLinearOrder& cod, const std::vector<int>& f)
{
    if (!is_alo_arrow(dom, cod, f))
        return false;
    for (int x = 0; x < dom.size(); ++x)
        for (int y = 0; y < dom.size(); ++y)
            if (cod.less(f[x], f[y]) && !dom.less(x, y))
                return false;
    return true;
}

json ArrowClassification::to_json() const
{
    if (embedding)
        return {{"kind", "embedding"}};
    return {{"kind", "refinement_then_embedding"},
            {"first_max_below", first_max_below},
            {"refinement", refinement},
            {"embedding", then}};
}

ArrowClassification classify_arrow(const AlmostLinearOrder& dom, const AlmostLinearOrder& cod,
                                   const std::vector<int>& f)
{
    if (!is_alo_arrow(dom, cod, f))
        throw InputError("classify_arrow: not a one-to-one homomorphism");
    ArrowClassification out;
    if (dom.is_linear())
        return out;
    const int a = dom.chain(), b = dom.chain() + 1;
    if (!cod.comparable(f[a], f[b]))
        return out;
    out.embedding = false;
    out.first_max_below = cod.less(f[a], f[b]);
    auto r = refinements(dom);
    out.refinement = out.first_max_below ? r[0] : r[1];
    out.then.assign(dom.size(), 0);
    for (int x = 0; x < dom.size(); ++x)
        out.then[out.refinement[x]] = f[x];
    return out;
}

std::array<std::vector<int>, 2> refinements(const AlmostLinearOrder& x)
{
    if (x.is_linear())
        throw InputError("refinements: order is already linear");
    std::vector<int> id(x.size());
    std::iota(id.begin(), id.end(), 0);
    auto swapped = id;
    std::swap(swapped[x.chain()], swapped[x.chain() + 1]);
    return {id, swapped};
}

bool is_amalgamable_alo_arrow(const AlmostLinearOrder& dom, const AlmostLinearOrder& cod, const std::vector<int>& f)
{
    if (!is_alo_arrow(dom, cod, f))
        throw InputError("is_amalgamable_alo_arrow: not a one-to-one homomorphism");
    if (dom.is_linear() || cod.is_linear())
        return true;
    return !classify_arrow(dom, cod, f).embedding;
}

std::vector<std::vector<int>> alo_homomorphisms(const AlmostLinearOrder& dom, const AlmostLinearOrder& cod)
{
    std::vector<std::vector<int>> out;
    const int n = dom.size(), m = cod.size();
    if (n > m)
        return out;
    std::vector<int> f(n, -1);
    std::vector<bool> used(m, false);
    auto rec = [&](auto&& self, int i) -> void {
        if (i == n) {
            out.push_back(f);
            return;
        }
        for (int v = 0; v < m; ++v) {
            if (used[v])
                continue;
            bool ok = true;
            for (int x = 0; x < i && ok; ++x) {
                if (dom.less(x, i) && !cod.less(f[x], v))
                    ok = false;
                if (dom.less(i, x) && !cod.less(v, f[x]))
                    ok = false;
            }
            if (!ok)
                continue;
            used[v] = true;
            f[i] = v;
            self(self, i + 1);
            used[v] = false;
        }
        f[i] = -1;
    };
    rec(rec, 0);
    return out;
}

ChainAmalgam amalgamate_chains(int base, int n1, const std::vector<int>& f1, int n2, const std::vector<int>& f2)
{
    if (static_cast<int>(f1.size()) != base || static_cast<int>(f2.size()) != base)
        throw InputError("amalgamate_chains: leg size mismatch");
    AlmostLinearOrder a = AlmostLinearOrder::linear(base);
    if (!is_alo_arrow(a, AlmostLinearOrder::linear(n1), f1) || !is_alo_arrow(a, AlmostLinearOrder::linear(n2), f2))
        throw InputError("amalgamate_chains: legs are not increasing injections");
    ChainAmalgam out;
    out.size = n1 + n2 - base;
    out.left.assign(n1, -1);
    out.right.assign(n2, -1);
    int i = 0, j = 0, pos = 0;
    for (int k = 0; k <= base; ++k) {
        int stop1 = k < base ? f1[k] : n1, stop2 = k < base ? f2[k] : n2;
        while (i < stop1)
            out.left[i++] = pos++;
        while (j < stop2)
            out.right[j++] = pos++;
        if (k < base) {
            out.left[i++] = pos;
            out.right[j++] = pos++;
        }
    }
    return out;
}

// ---------------------------------------------------------------------------

AloCategory::AloCategory(Family family) : family_(family) {}

std::string AloCategory::name() const
{
    switch (family_) {
    case Family::Linear:
        return "FinLO";
    case Family::Ternary:
        return "FintLO";
    default:
        return "FinaLO";
    }
}

bool AloCategory::in_family(const AlmostLinearOrder& x) const
{
    switch (family_) {
    case Family::Linear:
        return x.is_linear();
    case Family::Ternary:
        return !x.is_linear() || x.size() <= 1;
    default:
        return true;
    }
}

ObjectId AloCategory::object(const AlmostLinearOrder& x) const
{
    if (!in_family(x))
        throw InputError(x.key() + " is not an object of " + name());
    return store_.intern(x, x.key());
}

const AlmostLinearOrder& AloCategory::value(ObjectId id) const
{
    // Values are immutable and never freed, so the reference stays valid.
    return *store_.get(id);
}

Arrow AloCategory::arrow(const AlmostLinearOrder& dom, const AlmostLinearOrder& cod, std::vector<int> map) const
{
    Arrow f{object(dom), object(cod), std::move(map)};
    if (!is_arrow(f))
        throw InputError("not a one-to-one homomorphism " + dom.key() + " -> " + cod.key());
    return f;
}

std::vector<ObjectId> AloCategory::objects(int max_grade) const
{
    std::vector<ObjectId> out;
    for (int n = 0; n <= max_grade; ++n) {
        if (in_family(AlmostLinearOrder::linear(n)))
            out.push_back(object(AlmostLinearOrder::linear(n)));
        if (n >= 2 && in_family(AlmostLinearOrder::lb(n - 2)))
            out.push_back(object(AlmostLinearOrder::lb(n - 2)));
    }
    sort_canonically(*this, out);
    return out;
}

ObjectId AloCategory::object_from_json(const json& j) const { return object(AlmostLinearOrder::from_json(j)); }

std::vector<Arrow> AloCategory::hom(ObjectId a, ObjectId b) const
{
    std::vector<Arrow> out;
    for (auto& f : alo_homomorphisms(value(a), value(b)))
        out.push_back({a, b, std::move(f)});
    return out;
}

Arrow AloCategory::compose(const Arrow& g, const Arrow& f) const
{
    if (f.cod != g.dom)
        throw InputError("compose: arrows are not composable");
    Arrow h{f.dom, g.cod, std::vector<int>(f.data.size())};
    for (std::size_t i = 0; i < f.data.size(); ++i)
        h.data[i] = g.data[f.data[i]];
    return h;
}

Arrow AloCategory::identity(ObjectId a) const
{
    Arrow f{a, a, std::vector<int>(value(a).size())};
    std::iota(f.data.begin(), f.data.end(), 0);
    return f;
}

bool AloCategory::is_arrow(const Arrow& f) const
{
    if (!store_.contains(f.dom) || !store_.contains(f.cod))
        return false;
    auto& d = value(f.dom);
    auto& c = value(f.cod);
    return in_family(d) && in_family(c) && is_alo_arrow(d, c, f.data);
}

namespace {
    // Strict order on dom(p) generated by pulling back both codomain orders.
    std::vector<std::vector<bool>> pulled_back_union(const AlmostLinearOrder& x, const std::vector<int>& p,
                                                     const AlmostLinearOrder& y, const std::vector<int>& q)
    {
        const int n = static_cast<int>(p.size());
        std::vector<std::vector<bool>> r(n, std::vector<bool>(n, false));
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                r[a][b] = x.less(p[a], p[b]) || y.less(q[a], q[b]);
        return r;
    }

    // A shortest directed cycle of r, as a vertex list, if any.
    std::optional<std::vector<int>> find_cycle(const std::vector<std::vector<bool>>& r)
    {
        const int n = static_cast<int>(r.size());
        std::optional<std::vector<int>> best;
        for (int s = 0; s < n; ++s) {
            std::vector<int> parent(n, -1), dist(n, -1);
            std::queue<int> todo;
            dist[s] = 0;
            todo.push(s);
            while (!todo.empty()) {
                int u = todo.front();
                todo.pop();
                for (int v = 0; v < n; ++v) {
                    if (!r[u][v])
                        continue;
                    if (v == s) {
                        std::vector<int> cyc;
                        for (int w = u; w != -1; w = parent[w])
                            cyc.push_back(w);
                        std::reverse(cyc.begin(), cyc.end());
                        if (!best || cyc.size() < best->size())
                            best = cyc;
                        todo = {};
                        break;
                    }
                    if (dist[v] < 0) {
                        dist[v] = dist[u] + 1;
                        parent[v] = u;
                        todo.push(v);
                    }
                }
            }
        }
        return best;
    }
} // namespace

std::optional<Cocone> AloCategory::propose_cocone(const Arrow& f, const Arrow& g) const
{
    if (f.dom != g.dom)
        return std::nullopt;
    auto& x = value(f.cod);
    auto& y = value(g.cod);
    if (find_cycle(pulled_back_union(x, f.data, y, g.data)))
        return std::nullopt;

    // Glue cod(g) onto cod(f) along the common image, take the transitive
    // closure of both orders and sort it, preferring lower indices.
    const int nx = x.size(), ny = y.size();
    std::vector<int> gy(ny, -1);
    for (std::size_t i = 0; i < f.data.size(); ++i)
        gy[g.data[i]] = f.data[i];
    int total = nx;
    for (int v = 0; v < ny; ++v)
        if (gy[v] < 0)
            gy[v] = total++;
    std::vector<std::vector<bool>> less(total, std::vector<bool>(total, false));
    for (int a = 0; a < nx; ++a)
        for (int b = 0; b < nx; ++b)
            less[a][b] = x.less(a, b);
    for (int a = 0; a < ny; ++a)
        for (int b = 0; b < ny; ++b)
            if (y.less(a, b))
                less[gy[a]][gy[b]] = true;
    for (int k = 0; k < total; ++k)
        for (int a = 0; a < total; ++a)
            if (less[a][k])
                for (int b = 0; b < total; ++b)
                    if (less[k][b])
                        less[a][b] = true;
    std::vector<int> rank(total, -1);
    for (int pos = 0; pos < total; ++pos) {
        int pick = -1;
        for (int v = 0; v < total && pick < 0; ++v) {
            if (rank[v] >= 0)
                continue;
            bool minimal = true;
            for (int u = 0; u < total && minimal; ++u)
                if (rank[u] < 0 && less[u][v])
                    minimal = false;
            if (minimal)
                pick = v;
        }
        if (pick < 0)
            return std::nullopt;
        rank[pick] = pos;
    }

    AlmostLinearOrder apex = AlmostLinearOrder::linear(total);
    if (!in_family(apex)) {
        // Only the ternary family excludes chains of length >= 2; a chain of
        // length n sits inside LB(n-1) as its chain plus one maximum.
        apex = AlmostLinearOrder::lb(total - 1);
    }
    Cocone w;
    w.apex = object(apex);
    w.left = {f.cod, w.apex, std::vector<int>(nx)};
    w.right = {g.cod, w.apex, std::vector<int>(ny)};
    for (int a = 0; a < nx; ++a)
        w.left.data[a] = rank[a];
    for (int b = 0; b < ny; ++b)
        w.right.data[b] = rank[gy[b]];
    return w;
}

std::optional<json> AloCategory::obstruction(const Arrow& f, const Arrow& g) const
{
    if (f.dom != g.dom)
        return std::nullopt;
    auto cyc = find_cycle(pulled_back_union(value(f.cod), f.data, value(g.cod), g.data));
    if (!cyc)
        return std::nullopt;
    return json{{"cycle", *cyc}};
}

bool AloCategory::check_obstruction(const Arrow& f, const Arrow& g, const json& certificate) const
{
    // Every cocone leg preserves strict order, so a cycle of the pulled-back
    // relations would become a cycle in the apex.
    try {
        auto cyc = certificate.at("cycle").get<std::vector<int>>();
        if (cyc.size() < 2 || f.dom != g.dom)
            return false;
        auto& x = value(f.cod);
        auto& y = value(g.cod);
        const int n = static_cast<int>(f.data.size());
        for (std::size_t i = 0; i < cyc.size(); ++i) {
            int a = cyc[i], b = cyc[(i + 1) % cyc.size()];
            if (a < 0 || a >= n || b < 0 || b >= n)
                return false;
            if (!x.less(f.data[a], f.data[b]) && !y.less(g.data[a], g.data[b]))
                return false;
        }
        return true;
    }
    catch (const json::exception&) {
        return false;
    }
}

std::vector<ObjectId> AloCategory::cofinal_objects(int max_grade) const
{
    if (max_grade < 0)
        return {};
    if (family_ == Family::Ternary && max_grade >= 2)
        return {object(AlmostLinearOrder::lb(max_grade - 2))};
    return {object(AlmostLinearOrder::linear(max_grade))};
}

std::optional<ObjectId> AloCategory::initial_object() const { return object(AlmostLinearOrder::linear(0)); }

std::vector<Arrow> AloCategory::extensions(ObjectId x, int depth) const
{
    std::vector<Arrow> out;
    const int n = value(x).size();
    for (auto y : objects(n + depth))
        if (grade(y) > n)
            for (auto& f : hom(x, y))
                out.push_back(std::move(f));
    return out;
}

} // namespace wfr
