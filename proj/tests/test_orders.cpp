#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <set>

#include "wfr/category_ops.hpp"
#include "wfr/orders.hpp"

using namespace wfr;

namespace {

std::vector<AlmostLinearOrder> orders_up_to(int n)
{
    std::vector<AlmostLinearOrder> out;
    for (int k = 0; k <= n; ++k)
        out.push_back(AlmostLinearOrder::linear(k));
    for (int k = 0; k + 2 <= n; ++k)
        out.push_back(AlmostLinearOrder::lb(k));
    return out;
}

std::vector<std::vector<int>> injections(int n, int m)
{
    std::vector<std::vector<int>> out;
    if (n > m)
        return out;
    std::vector<int> f(n);
    std::vector<bool> used(m, false);
    auto rec = [&](auto&& self, int i) -> void {
        if (i == n) {
            out.push_back(f);
            return;
        }
        for (int v = 0; v < m; ++v)
            if (!used[v]) {
                used[v] = true;
                f[i] = v;
                self(self, i + 1);
                used[v] = false;
            }
    };
    rec(rec, 0);
    return out;
}

bool preserves_order(const AlmostLinearOrder& a, const AlmostLinearOrder& b, const std::vector<int>& f)
{
    for (int x = 0; x < a.size(); ++x)
        for (int y = 0; y < a.size(); ++y)
            if (a.less(x, y) && !b.less(f[x], f[y]))
                return false;
    return true;
}

bool reflects_order(const AlmostLinearOrder& a, const AlmostLinearOrder& b, const std::vector<int>& f)
{
    for (int x = 0; x < a.size(); ++x)
        for (int y = 0; y < a.size(); ++y)
            if (a.less(x, y) != b.less(f[x], f[y]))
                return false;
    return true;
}

LabeledOrder relabeled(const AlmostLinearOrder& x, const std::vector<int>& perm)
{
    LabeledOrder l;
    l.shape = x;
    l.position.assign(x.size(), 0);
    for (int i = 0; i < x.size(); ++i)
        l.position[perm[i]] = i;
    return l;
}

// Every antireflexive relation symmetric in the last two places on n points:
// one bit per (x, {y, z}) with x, y, z distinct.
std::vector<TernaryStructure> symmetric_relations(int n)
{
    std::vector<Triple> slots;
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            for (int z = y + 1; z < n; ++z)
                if (x != y && x != z)
                    slots.push_back({x, y, z});
    std::vector<TernaryStructure> out;
    for (std::uint32_t mask = 0; mask < (1u << slots.size()); ++mask) {
        TernaryStructure t;
        t.size = n;
        for (std::size_t i = 0; i < slots.size(); ++i)
            if (mask >> i & 1) {
                auto [x, y, z] = slots[i];
                t.triples.insert({x, y, z});
                t.triples.insert({x, z, y});
            }
        out.push_back(std::move(t));
    }
    return out;
}

bool same_relation(const LabeledOrder& a, const LabeledOrder& b, int n)
{
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (a.less(x, y) != b.less(x, y))
                return false;
    return true;
}

} // namespace

TEST_CASE("normal forms")
{
    auto c3 = AlmostLinearOrder::linear(3);
    CHECK(c3.size() == 3);
    CHECK(c3.less(0, 2));
    CHECK_FALSE(c3.less(2, 0));
    auto b1 = AlmostLinearOrder::lb(1);
    CHECK(b1.size() == 3);
    CHECK(b1.less(0, 1));
    CHECK(b1.less(0, 2));
    CHECK_FALSE(b1.comparable(1, 2));
    CHECK(AlmostLinearOrder::from_json(b1.to_json()) == b1);
    CHECK(AlmostLinearOrder::from_json(json::parse(R"({"kind":"linear","n":4})")) == AlmostLinearOrder::linear(4));
    CHECK_THROWS_AS(AlmostLinearOrder::from_json(json::parse(R"({"kind":"tree","n":4})")), InputError);
    CHECK_THROWS_AS(AlmostLinearOrder::linear(-1), InputError);
}

TEST_CASE("property: every three-element subset has a minimum")
{
    for (auto& x : orders_up_to(6))
        for (int a = 0; a < x.size(); ++a)
            for (int b = a + 1; b < x.size(); ++b)
                for (int c = b + 1; c < x.size(); ++c) {
                    int mins = 0;
                    for (int m : {a, b, c}) {
                        bool is_min = true;
                        for (int o : {a, b, c})
                            if (o != m && !x.less(m, o))
                                is_min = false;
                        mins += is_min;
                    }
                    CHECK(mins == 1);
                }
}

TEST_CASE("classifying relation matrices")
{
    // 1 < 0 < 2
    std::vector<std::vector<bool>> chain = {{false, false, true}, {true, false, true}, {false, false, false}};
    auto l = classify_order(chain);
    CHECK(l.shape == AlmostLinearOrder::linear(3));
    CHECK(l.less(1, 0));
    CHECK(l.less(0, 2));

    // 2 below the incomparable pair 0, 1
    std::vector<std::vector<bool>> vee = {{false, false, false}, {false, false, false}, {true, true, false}};
    l = classify_order(vee);
    CHECK(l.shape == AlmostLinearOrder::lb(1));
    CHECK(l.less(2, 0));
    CHECK_FALSE(l.less(0, 1));

    std::vector<std::vector<bool>> wedge = {{false, false, true}, {false, false, true}, {false, false, false}};
    CHECK_THROWS_AS(classify_order(wedge), InputError);
    std::vector<std::vector<bool>> antichain(3, std::vector<bool>(3, false));
    CHECK_THROWS_AS(classify_order(antichain), InputError);
    std::vector<std::vector<bool>> cycle = {{false, true}, {true, false}};
    CHECK_THROWS_AS(classify_order(cycle), InputError);
    std::vector<std::vector<bool>> reflexive = {{true}};
    CHECK_THROWS_AS(classify_order(reflexive), InputError);
    std::vector<std::vector<bool>> ragged = {{false, true}, {false}};
    CHECK_THROWS_AS(classify_order(ragged), InputError);
}

TEST_CASE("ternary images")
{
    auto t = to_ternary(AlmostLinearOrder::linear(3));
    CHECK(t.triples == std::set<Triple>{{0, 1, 2}, {0, 2, 1}});
    CHECK(to_ternary(AlmostLinearOrder::lb(0)).triples.empty());
    CHECK(to_ternary(AlmostLinearOrder::lb(1)).triples == std::set<Triple>{{0, 1, 2}, {0, 2, 1}});
    CHECK(TernaryStructure::from_json(t.to_json()) == t);
}

TEST_CASE("orders from ternary structures")
{
    TernaryStructure empty2;
    empty2.size = 2;
    CHECK(from_ternary(empty2).shape == AlmostLinearOrder::lb(0));
    CHECK(from_ternary(to_ternary(AlmostLinearOrder::linear(4))).shape == AlmostLinearOrder::lb(2));
    CHECK(from_ternary(to_ternary(AlmostLinearOrder::lb(1))).shape == AlmostLinearOrder::lb(1));

    TernaryStructure bad;
    bad.size = 3;
    bad.triples = {{0, 1, 2}};
    auto v = check_axioms(bad);
    REQUIRE(v);
    CHECK(v->axiom == "symmetry");
    CHECK_THROWS_AS(from_ternary(bad), AxiomError);
    try {
        from_ternary(bad);
    }
    catch (const AxiomError& e) {
        CHECK(e.violation().tuple.size() >= 3);
    }
    bad.triples = {{0, 0, 1}, {0, 1, 0}};
    REQUIRE(check_axioms(bad));
    CHECK(check_axioms(bad)->axiom == "antireflexivity");
}

TEST_CASE("property: axiom models are exactly the images of almost linear orders")
{
    for (int n = 0; n <= 4; ++n) {
        std::set<std::set<Triple>> images;
        for (auto& x : orders_up_to(n)) {
            if (x.size() != n)
                continue;
            std::vector<int> p(n);
            std::iota(p.begin(), p.end(), 0);
            do {
                images.insert(to_ternary(relabeled(x, p)).triples);
            } while (std::next_permutation(p.begin(), p.end()));
        }
        std::set<std::set<Triple>> models;
        for (auto& t : symmetric_relations(n)) {
            bool ok = !check_axioms(t).has_value();
            if (ok) {
                models.insert(t.triples);
                CHECK(to_ternary(from_ternary(t)) == t);
            }
            else {
                CHECK_THROWS_AS(from_ternary(t), AxiomError);
            }
        }
        CHECK(models == images);
    }
}

TEST_CASE("property: from_ternary then to_ternary is the identity up to size 5")
{
    for (auto& x : orders_up_to(5)) {
        std::vector<int> p(x.size());
        std::iota(p.begin(), p.end(), 0);
        do {
            auto t = to_ternary(relabeled(x, p));
            CHECK_FALSE(check_axioms(t));
            CHECK(to_ternary(from_ternary(t)) == t);
        } while (std::next_permutation(p.begin(), p.end()));
    }
}

TEST_CASE("property: the round trip on orders forgets the top two")
{
    for (auto& x : orders_up_to(6)) {
        auto back = from_ternary(to_ternary(x));
        CHECK(same_relation(back, forget_top_two(x), x.size()));
        if (x.is_linear() && x.size() >= 2)
            CHECK(back.shape == AlmostLinearOrder::lb(x.size() - 2));
        else
            CHECK(back.shape == x);
    }
}

TEST_CASE("homomorphisms against a brute-force filter")
{
    for (auto& a : orders_up_to(4))
        for (auto& b : orders_up_to(5)) {
            std::vector<std::vector<int>> expect;
            for (auto& f : injections(a.size(), b.size()))
                if (preserves_order(a, b, f))
                    expect.push_back(f);
            auto got = alo_homomorphisms(a, b);
            CHECK(got == expect);
            for (auto& f : got) {
                CHECK(is_alo_arrow(a, b, f));
                CHECK(is_embedding(a, b, f) == reflects_order(a, b, f));
            }
        }
}

TEST_CASE("property: a homomorphism with linear domain is an embedding")
{
    for (int k = 0; k <= 4; ++k) {
        auto a = AlmostLinearOrder::linear(k);
        for (auto& b : orders_up_to(5))
            for (auto& f : injections(k, b.size()))
                CHECK(is_alo_arrow(a, b, f) == is_embedding(a, b, f));
    }
}

TEST_CASE("arrow classification")
{
    auto c2 = AlmostLinearOrder::linear(2), c3 = AlmostLinearOrder::linear(3), c4 = AlmostLinearOrder::linear(4);
    auto b0 = AlmostLinearOrder::lb(0), b1 = AlmostLinearOrder::lb(1);

    auto k = classify_arrow(c2, c3, {0, 1});
    CHECK(k.embedding);

    k = classify_arrow(b0, c2, {0, 1});
    CHECK_FALSE(k.embedding);
    CHECK(k.first_max_below);
    CHECK(k.refinement == std::vector<int>{0, 1});
    CHECK(k.then == std::vector<int>{0, 1});

    k = classify_arrow(b0, c2, {1, 0});
    CHECK_FALSE(k.embedding);
    CHECK_FALSE(k.first_max_below);

    k = classify_arrow(b1, c4, {0, 2, 3});
    CHECK_FALSE(k.embedding);
    CHECK(k.first_max_below);
    CHECK(k.then == std::vector<int>{0, 2, 3});

    CHECK(classify_arrow(b1, AlmostLinearOrder::lb(2), {0, 2, 3}).embedding);
    CHECK_THROWS_AS(classify_arrow(c2, c3, {1, 0}), InputError);
    CHECK_THROWS_AS(classify_arrow(c2, c3, {1, 1}), InputError);
}

TEST_CASE("property: classification recomposes to the arrow")
{
    for (auto& a : orders_up_to(4))
        for (auto& b : orders_up_to(5))
            for (auto& f : alo_homomorphisms(a, b)) {
                auto k = classify_arrow(a, b, f);
                if (k.embedding) {
                    CHECK(is_embedding(a, b, f));
                    continue;
                }
                CHECK_FALSE(a.is_linear());
                auto lin = AlmostLinearOrder::linear(a.size());
                CHECK(is_alo_arrow(a, lin, k.refinement));
                CHECK(is_embedding(lin, b, k.then));
                for (int x = 0; x < a.size(); ++x)
                    CHECK(k.then[k.refinement[x]] == f[x]);
            }
}

TEST_CASE("refinements")
{
    for (int n : {0, 1, 3}) {
        auto x = AlmostLinearOrder::lb(n);
        auto r = refinements(x);
        auto lin = AlmostLinearOrder::linear(n + 2);
        CHECK(r[0] != r[1]);
        for (auto& f : r)
            CHECK(is_alo_arrow(x, lin, f));
        CHECK(r[0][n] < r[0][n + 1]);
        CHECK(r[1][n] > r[1][n + 1]);
    }
    CHECK_THROWS_AS(refinements(AlmostLinearOrder::linear(3)), InputError);
}

TEST_CASE("amalgamable arrows by closed form")
{
    auto c3 = AlmostLinearOrder::linear(3);
    CHECK(is_amalgamable_alo_arrow(c3, c3, {0, 1, 2}));
    CHECK_FALSE(is_amalgamable_alo_arrow(AlmostLinearOrder::lb(1), AlmostLinearOrder::lb(2), {0, 2, 3}));
    CHECK(is_amalgamable_alo_arrow(AlmostLinearOrder::lb(1), c3, {0, 1, 2}));
    CHECK_THROWS_AS(is_amalgamable_alo_arrow(c3, c3, {2, 1, 0}), InputError);
}

TEST_CASE("property: closed form agrees with the generic amalgamability check")
{
    AloCategory alo(AloCategory::Family::All);
    SearchBudget budget;
    budget.max_size = 5;
    budget.witness_size = 7;
    budget.record_witnesses = false;
    for (auto& a : orders_up_to(3))
        for (auto& b : orders_up_to(3))
            for (auto& f : alo_homomorphisms(a, b)) {
                auto v = is_amalgamable_arrow(alo, alo.arrow(a, b, f), budget);
                REQUIRE_FALSE(v.is_unknown());
                CHECK(v.is_yes() == is_amalgamable_alo_arrow(a, b, f));
            }
}

TEST_CASE("chain amalgams commute")
{
    for (int base = 0; base <= 2; ++base)
        for (int n1 = base; n1 <= 4; ++n1)
            for (int n2 = base; n2 <= 4; ++n2) {
                auto cb = AlmostLinearOrder::linear(base);
                for (auto& f1 : alo_homomorphisms(cb, AlmostLinearOrder::linear(n1)))
                    for (auto& f2 : alo_homomorphisms(cb, AlmostLinearOrder::linear(n2))) {
                        auto am = amalgamate_chains(base, n1, f1, n2, f2);
                        CHECK(am.size == n1 + n2 - base);
                        auto apex = AlmostLinearOrder::linear(am.size);
                        CHECK(is_alo_arrow(AlmostLinearOrder::linear(n1), apex, am.left));
                        CHECK(is_alo_arrow(AlmostLinearOrder::linear(n2), apex, am.right));
                        for (int x = 0; x < base; ++x)
                            CHECK(am.left[f1[x]] == am.right[f2[x]]);
                    }
            }
}

TEST_CASE("category families")
{
    AloCategory all(AloCategory::Family::All), lin(AloCategory::Family::Linear), tern(AloCategory::Family::Ternary);
    CHECK(all.name() == "FinaLO");
    CHECK(lin.name() == "FinLO");
    CHECK(tern.name() == "FintLO");
    CHECK(lin.objects(4).size() == 5);
    CHECK(all.objects(4).size() == 8);
    // empty, singleton, LB(0), LB(1), LB(2)
    CHECK(tern.objects(4).size() == 5);
    CHECK_THROWS_AS(lin.object(AlmostLinearOrder::lb(0)), InputError);
    CHECK(is_directed(lin, SearchBudget{}).is_yes());
}
