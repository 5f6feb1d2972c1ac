#include "wfr/monoid.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "wfr/category_ops.hpp"

namespace wfr {

FiniteMonoid::FiniteMonoid(int order, int unit, std::vector<std::vector<int>> table)
    : n_(order), unit_(unit), table_(std::move(table))
{
    if (n_ < 1)
        throw InputError("monoid order must be positive");
    if (unit_ < 0 || unit_ >= n_)
        throw InputError("monoid unit out of range");
    if (static_cast<int>(table_.size()) != n_)
        throw InputError("monoid table must have `order` rows");
    for (auto& row : table_) {
        if (static_cast<int>(row.size()) != n_)
            throw InputError("monoid table must have `order` columns");
        for (int v : row)
            if (v < 0 || v >= n_)
                throw InputError("monoid table entry out of range");
    }
    for (int x = 0; x < n_; ++x)
        if (table_[unit_][x] != x || table_[x][unit_] != x)
            throw InputError("unit law fails at element " + std::to_string(x));
    for (int x = 0; x < n_; ++x)
        for (int y = 0; y < n_; ++y)
            for (int z = 0; z < n_; ++z)
                if (table_[table_[x][y]][z] != table_[x][table_[y][z]])
                    throw InputError("associativity fails at (" + std::to_string(x) + "," + std::to_string(y) + ","
                                     + std::to_string(z) + ")");
}

std::vector<int> FiniteMonoid::left_orbit(int alpha) const
{
    std::set<int> s;
    for (int x = 0; x < n_; ++x)
        s.insert(table_[x][alpha]);
    return {s.begin(), s.end()};
}

json FiniteMonoid::to_json() const { return {{"order", n_}, {"unit", unit_}, {"table", table_}}; }

FiniteMonoid FiniteMonoid::from_json(const json& j)
{
    try {
        return FiniteMonoid(j.at("order").get<int>(), j.at("unit").get<int>(),
                            j.at("table").get<std::vector<std::vector<int>>>());
    }
    catch (const json::exception& e) {
        throw InputError(std::string("malformed monoid: ") + e.what());
    }
}

std::vector<int> left_zeros(const FiniteMonoid& m)
{
    std::vector<int> out;
    for (int z = 0; z < m.order(); ++z) {
        bool ok = true;
        for (int x = 0; x < m.order() && ok; ++x)
            ok = m.mul(z, x) == z;
        if (ok)
            out.push_back(z);
    }
    return out;
}

std::vector<int> right_zeros(const FiniteMonoid& m)
{
    std::vector<int> out;
    for (int z = 0; z < m.order(); ++z) {
        bool ok = true;
        for (int x = 0; x < m.order() && ok; ++x)
            ok = m.mul(x, z) == z;
        if (ok)
            out.push_back(z);
    }
    return out;
}

LeftEqualizer satisfies_LE(const FiniteMonoid& m, int alpha)
{
    if (alpha < 0 || alpha >= m.order())
        throw InputError("element out of range");
    auto orbit = m.left_orbit(alpha);
    for (std::size_t i = 0; i < orbit.size(); ++i)
        for (std::size_t j = i + 1; j < orbit.size(); ++j) {
            bool found = false;
            for (int e = 0; e < m.order() && !found; ++e)
                found = m.mul(e, orbit[i]) == m.mul(e, orbit[j]);
            if (!found)
                return {false, std::pair{orbit[i], orbit[j]}};
        }
    return {true, std::nullopt};
}

bool has_ramsey_property(const FiniteMonoid& m)
{
    for (int x = 0; x < m.order(); ++x)
        for (int y = x + 1; y < m.order(); ++y) {
            bool found = false;
            for (int e = 0; e < m.order() && !found; ++e)
                found = m.mul(e, x) == m.mul(e, y);
            if (!found)
                return false;
        }
    return true;
}

RightActionGraph right_action_graph(const FiniteMonoid& m, int alpha)
{
    RightActionGraph g;
    g.vertices = m.left_orbit(alpha);
    std::set<int> in(g.vertices.begin(), g.vertices.end());
    for (int f = 0; f < m.order(); ++f) {
        bool ok = true;
        for (int x : g.vertices)
            if (!in.count(m.mul(x, f))) {
                ok = false;
                break;
            }
        if (ok)
            g.acting.push_back(f);
    }
    std::vector<int> parent(m.order());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x)
            x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int x : g.vertices)
        for (int f : g.acting)
            parent[find(x)] = find(m.mul(x, f));
    std::set<int> roots;
    for (int x : g.vertices)
        roots.insert(find(x));
    g.components = static_cast<int>(roots.size());
    return g;
}

Verdict is_ramsey_element(const FiniteMonoid& m, int alpha)
{
    if (alpha < 0 || alpha >= m.order())
        throw InputError("element out of range");
    MonoidCategory c(m);
    SearchBudget b;
    b.max_size = 1;
    b.witness_size = 1;
    b.max_colors = 1;
    auto v = is_ramsey_arrow(c, c.element(alpha), b);
    auto g = right_action_graph(m, alpha);
    v.payload["right_action_graph"] = {{"acting", g.acting}, {"vertices", g.vertices}, {"components", g.components}};
    return v;
}

Verdict has_weak_ramsey_property(const FiniteMonoid& m)
{
    for (int a = 0; a < m.order(); ++a) {
        auto v = is_ramsey_element(m, a);
        if (v.is_yes())
            return Verdict::yes({{"ramsey_element", a}, {"witness", v.payload}});
    }
    return Verdict::no({{"reason", "no element is a Ramsey arrow"}});
}

std::vector<std::pair<int, int>> absorption_relation(const FiniteMonoid& m)
{
    std::vector<std::pair<int, int>> out;
    for (int x = 0; x < m.order(); ++x)
        for (int y = 0; y < m.order(); ++y)
            if (m.mul(x, y) == x)
                out.push_back({x, y});
    return out;
}

json MonoidFlags::to_json() const
{
    json j = json::array();
    if (idempotent)
        j.push_back("idempotent");
    if (commutative)
        j.push_back("commutative");
    if (semilattice)
        j.push_back("semilattice");
    if (left_zero)
        j.push_back("left-zero");
    if (right_zero)
        j.push_back("right-zero");
    if (left_cancellative)
        j.push_back("left-cancellative");
    return j;
}

MonoidFlags classify_monoid(const FiniteMonoid& m)
{
    const int n = m.order();
    MonoidFlags f;
    f.idempotent = f.commutative = f.left_zero = f.right_zero = f.left_cancellative = true;
    for (int x = 0; x < n; ++x) {
        if (m.mul(x, x) != x)
            f.idempotent = false;
        for (int y = 0; y < n; ++y) {
            if (m.mul(x, y) != m.mul(y, x))
                f.commutative = false;
            if (x != m.unit() && m.mul(x, y) != x)
                f.left_zero = false;
            if (x != m.unit() && m.mul(y, x) != x)
                f.right_zero = false;
            for (int z = y + 1; z < n; ++z)
                if (m.mul(x, y) == m.mul(x, z))
                    f.left_cancellative = false;
        }
    }
    f.semilattice = f.idempotent && f.commutative;
    return f;
}

namespace {
    std::string table_string(const std::vector<std::vector<int>>& t)
    {
        std::string s;
        for (auto& row : t)
            for (int v : row)
                s += static_cast<char>('0' + v);
        return s;
    }
} // namespace

FiniteMonoid canonical_representative(const FiniteMonoid& m)
{
    const int n = m.order();
    // Move the unit to 0, then try every permutation of the rest.
    std::vector<int> others;
    for (int x = 0; x < n; ++x)
        if (x != m.unit())
            others.push_back(x);
    std::sort(others.begin(), others.end());
    std::optional<std::vector<std::vector<int>>> best;
    std::string best_key;
    do {
        std::vector<int> label(n);
        label[m.unit()] = 0;
        for (int i = 0; i < n - 1; ++i)
            label[others[i]] = i + 1;
        std::vector<std::vector<int>> t(n, std::vector<int>(n));
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                t[label[x]][label[y]] = label[m.mul(x, y)];
        auto key = table_string(t);
        if (!best || key < best_key) {
            best = t;
            best_key = key;
        }
    } while (std::next_permutation(others.begin(), others.end()));
    return FiniteMonoid(n, 0, *best);
}

std::string canonical_form(const FiniteMonoid& m) { return table_string(canonical_representative(m).table()); }

namespace {
    bool associative(const std::vector<std::vector<int>>& t)
    {
        const int n = static_cast<int>(t.size());
        for (int x = 1; x < n; ++x)
            for (int y = 1; y < n; ++y)
                for (int z = 1; z < n; ++z)
                    if (t[t[x][y]][z] != t[x][t[y][z]])
                        return false;
        return true;
    }

    std::vector<std::vector<int>> unit_table(int n)
    {
        std::vector<std::vector<int>> t(n, std::vector<int>(n, 0));
        for (int x = 0; x < n; ++x)
            t[0][x] = t[x][0] = x;
        return t;
    }
} // namespace

std::vector<FiniteMonoid> enumerate_monoids(int n)
{
    if (n < 1 || n > 4)
        throw InputError("enumerate_monoids supports orders 1..4");
    const int free = (n - 1) * (n - 1);
    std::set<std::string> seen;
    std::vector<std::pair<std::string, FiniteMonoid>> found;
    auto t = unit_table(n);
    std::vector<int> digits(free, 0);
    for (;;) {
        for (int i = 0; i < free; ++i)
            t[1 + i / (n - 1)][1 + i % (n - 1)] = digits[i];
        if (associative(t)) {
            FiniteMonoid m(n, 0, t);
            auto key = canonical_form(m);
            if (seen.insert(key).second)
                found.push_back({key, canonical_representative(m)});
        }
        int i = free - 1;
        while (i >= 0 && digits[i] == n - 1)
            digits[i--] = 0;
        if (i < 0)
            break;
        ++digits[i];
    }
    std::sort(found.begin(), found.end(), [](auto& a, auto& b) { return a.first < b.first; });
    std::vector<FiniteMonoid> out;
    for (auto& [k, m] : found)
        out.push_back(m);
    return out;
}

FiniteMonoid random_monoid(int n, Rng& rng, std::uint64_t max_tries)
{
    if (n < 1)
        throw InputError("monoid order must be positive");
    auto t = unit_table(n);
    for (std::uint64_t tries = 0; tries < max_tries; ++tries) {
        for (int x = 1; x < n; ++x)
            for (int y = 1; y < n; ++y)
                t[x][y] = static_cast<int>(rng.below(n));
        if (!associative(t))
            continue;
        std::vector<int> perm(n);
        std::iota(perm.begin(), perm.end(), 0);
        for (int i = n - 1; i > 0; --i)
            std::swap(perm[i], perm[rng.below(i + 1)]);
        std::vector<std::vector<int>> r(n, std::vector<int>(n));
        for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y)
                r[perm[x]][perm[y]] = perm[t[x][y]];
        return FiniteMonoid(n, perm[0], r);
    }
    throw BudgetExhausted("random_monoid: no associative table found");
}

// ---------------------------------------------------------------------------

WordMonoid::WordMonoid(std::vector<std::string> generators, bool right_zero)
    : gens_(std::move(generators)), right_zero_(right_zero)
{
    std::set<std::string> s(gens_.begin(), gens_.end());
    if (s.size() != gens_.size())
        throw InputError("duplicate generator names");
    if (s.count("0"))
        throw InputError("\"0\" is reserved for the right zero");
}

WordMonoid::Word WordMonoid::normalize(Word w) const
{
    for (int x : w) {
        if (x == kZero && !right_zero_)
            throw InputError("word uses the right zero, which this monoid lacks");
        if (x != kZero && (x < 0 || x >= static_cast<int>(gens_.size())))
            throw InputError("unknown generator index");
    }
    auto it = std::find(w.rbegin(), w.rend(), kZero);
    if (it != w.rend())
        w.erase(w.begin(), std::prev(it.base()));
    return w;
}

WordMonoid::Word WordMonoid::mul(const Word& x, const Word& y) const
{
    Word w = x;
    w.insert(w.end(), y.begin(), y.end());
    return normalize(std::move(w));
}

WordMonoid::Word WordMonoid::parse(const std::string& text) const
{
    Word w;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && text[i] == ' ')
            ++i;
        std::size_t j = i;
        while (j < text.size() && text[j] != ' ')
            ++j;
        if (j > i) {
            auto sym = text.substr(i, j - i);
            if (sym == "0")
                w.push_back(kZero);
            else {
                auto it = std::find(gens_.begin(), gens_.end(), sym);
                if (it == gens_.end())
                    throw InputError("unknown generator \"" + sym + "\"");
                w.push_back(static_cast<int>(it - gens_.begin()));
            }
        }
        i = j;
    }
    return normalize(std::move(w));
}

std::string WordMonoid::show(const Word& w) const
{
    if (w.empty())
        return "1";
    std::string s;
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (i)
            s += ' ';
        s += w[i] == kZero ? std::string("0") : gens_.at(w[i]);
    }
    return s;
}

std::vector<WordMonoid::Word> WordMonoid::elements(int max_length) const
{
    std::vector<int> symbols;
    if (right_zero_)
        symbols.push_back(kZero);
    for (int i = 0; i < static_cast<int>(gens_.size()); ++i)
        symbols.push_back(i);
    std::set<Word> seen;
    std::vector<Word> out;
    std::vector<Word> layer{{}};
    for (int len = 0; len <= max_length; ++len) {
        std::vector<Word> next;
        for (auto& w : layer) {
            auto n = normalize(w);
            if (static_cast<int>(n.size()) == len && seen.insert(n).second)
                out.push_back(n);
            if (len < max_length)
                for (int s : symbols) {
                    auto x = w;
                    x.push_back(s);
                    next.push_back(std::move(x));
                }
        }
        layer = std::move(next);
    }
    std::stable_sort(out.begin(), out.end(), [](const Word& a, const Word& b) {
        if (a.size() != b.size())
            return a.size() < b.size();
        return a < b;
    });
    return out;
}

json WordMonoid::to_json() const { return {{"generators", gens_}, {"right_zero", right_zero_}}; }

WordMonoid WordMonoid::from_json(const json& j)
{
    try {
        return WordMonoid(j.at("generators").get<std::vector<std::string>>(), j.value("right_zero", false));
    }
    catch (const json::exception& e) {
        throw InputError(std::string("malformed word monoid: ") + e.what());
    }
}

bool satisfies_LE(const WordMonoid& m, const WordMonoid::Word& alpha)
{
    auto a = m.normalize(alpha);
    if (m.generators().empty())
        return true;
    // Without a zero in alpha, e alpha and e x alpha have tails (after the
    // last zero) of different lengths for every e.
    return std::find(a.begin(), a.end(), WordMonoid::kZero) != a.end();
}

namespace {
    int parity_color(const WordMonoid::Word& w)
    {
        std::size_t tail = w.size();
        if (!w.empty() && w.front() == WordMonoid::kZero)
            tail -= 1;
        return static_cast<int>(tail % 2);
    }
} // namespace

bool check_parity_certificate(const WordMonoid& m, const WordMonoid::Word& alpha, int generator, int max_length)
{
    auto a = m.normalize(alpha);
    WordMonoid::Word xa = m.mul({generator}, a);
    for (auto& e : m.elements(max_length))
        if (parity_color(m.mul(e, a)) == parity_color(m.mul(e, xa)))
            return false;
    return true;
}

Verdict is_ramsey_element(const WordMonoid& m, const WordMonoid::Word& alpha)
{
    auto a = m.normalize(alpha);
    if (satisfies_LE(m, a)) {
        json w = {{"reason", "M alpha is left-equalizable"}};
        if (m.has_right_zero())
            w["equalizer"] = "0";
        return Verdict::yes(w);
    }
    // F = {alpha, x alpha}; the tail-length parity colours e alpha and e x alpha
    // differently for every e, in every v.
    WordMonoid::Word xa = m.mul({0}, a);
    return Verdict::no({{"family", {m.show(a), m.show(xa)}},
                        {"colors", 2},
                        {"coloring", "parity of the number of symbols after the last zero"},
                        {"generator", m.generators().front()},
                        {"alpha", m.show(a)}});
}

Verdict has_weak_ramsey_property(const WordMonoid& m)
{
    if (m.has_right_zero())
        return Verdict::yes({{"ramsey_element", "0"}});
    if (m.generators().empty())
        return Verdict::yes({{"ramsey_element", "1"}});
    return Verdict::no({{"reason", "every alpha admits the parity colouring on {alpha, x alpha}"},
                        {"coloring", "parity of word length"},
                        {"generator", m.generators().front()}});
}

// ---------------------------------------------------------------------------

std::vector<ObjectId> MonoidCategory::objects(int max_grade) const
{
    if (max_grade < 1)
        return {};
    return {0};
}

std::vector<Arrow> MonoidCategory::hom(ObjectId a, ObjectId b) const
{
    if (a != 0 || b != 0)
        return {};
    std::vector<Arrow> out;
    for (int x = 0; x < m_.order(); ++x)
        out.push_back(element(x));
    return out;
}

Arrow MonoidCategory::compose(const Arrow& g, const Arrow& f) const
{
    return element(m_.mul(g.data.at(0), f.data.at(0)));
}

bool MonoidCategory::is_arrow(const Arrow& f) const
{
    return f.dom == 0 && f.cod == 0 && f.data.size() == 1 && f.data[0] >= 0 && f.data[0] < m_.order();
}

json MonoidCategory::arrow_json(const Arrow& f) const { return f.data.at(0); }

std::vector<ObjectId> WordMonoidCategory::objects(int max_grade) const
{
    if (max_grade < 1)
        return {};
    return {0};
}

std::vector<Arrow> WordMonoidCategory::hom(ObjectId a, ObjectId b) const
{
    if (a != 0 || b != 0)
        return {};
    std::vector<Arrow> out;
    for (auto& w : m_.elements(max_length_))
        out.push_back({0, 0, w});
    return out;
}

Arrow WordMonoidCategory::compose(const Arrow& g, const Arrow& f) const { return {0, 0, m_.mul(g.data, f.data)}; }

bool WordMonoidCategory::is_arrow(const Arrow& f) const
{
    if (f.dom != 0 || f.cod != 0)
        return false;
    try {
        return m_.normalize(f.data) == f.data;
    }
    catch (const InputError&) {
        return false;
    }
}

std::optional<Verdict> WordMonoidCategory::ramsey_closed_form(const Arrow& alpha) const
{
    return is_ramsey_element(m_, alpha.data);
}

} // namespace wfr
