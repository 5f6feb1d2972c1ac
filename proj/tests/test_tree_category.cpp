#include <doctest.h>

#include <algorithm>
#include <functional>

#include "wfr/category_ops.hpp"
#include "wfr/tree_amalgamation.hpp"
#include "wfr/tree_category.hpp"
#include "wfr/tree_constructions.hpp"

using namespace wfr;

namespace {

int ipow(int b, int e)
{
    int r = 1;
    while (e-- > 0)
        r *= b;
    return r;
}

// Least N <= n_max such that every 2-colouring of the nodes of the height-N
// binary tree has a monochromatic node with one same-coloured node in each
// of its two branches, both on one level.
std::optional<int> binary_bush_ramsey(int n_max)
{
    for (int N = 2; N <= n_max; ++N) {
        auto T = LexTree::balanced({2}, 2, N);
        const int n = T.size();
        bool every = true;
        for (std::uint32_t mask = 0; mask < (1u << n) && every; ++mask) {
            auto col = [&](int v) { return mask >> v & 1; };
            bool mono = false;
            for (int x = 0; x < n && !mono; ++x) {
                if (T.terminal(x))
                    continue;
                int l = T.children(x)[0], r = T.children(x)[1];
                for (int y = l; y < T.subtree_end(l) && !mono; ++y)
                    for (int z = r; z < T.subtree_end(r) && !mono; ++z)
                        mono = T.depth(y) == T.depth(z) && col(x) == col(y) && col(y) == col(z);
            }
            every = mono;
        }
        if (every)
            return N;
    }
    return std::nullopt;
}

std::vector<std::vector<int>> sequences(int s, int max_len)
{
    std::vector<std::vector<int>> out{{}};
    for (std::size_t i = 0; i < out.size(); ++i)
        if (static_cast<int>(out[i].size()) < max_len)
            for (int v = 0; v < s; ++v) {
                auto t = out[i];
                t.push_back(v);
                out.push_back(t);
            }
    return out;
}

} // namespace

TEST_CASE("tree category basics")
{
    TreeCategory t({1, 2}, TreeVariant{TreeKind::Tc, true});
    CHECK(t.name() == "tc{1,2}");
    std::size_t expect = 1;  // the empty tree
    for (int n = 1; n <= 4; ++n)
        expect += enumerate_trees({1, 2}, TreeKind::Tc, n).size();
    CHECK(t.objects(4).size() == expect);
    auto init = t.initial_object();
    REQUIRE(init);
    CHECK(t.value(*init).empty());
    for (auto x : t.objects(3))
        CHECK(t.hom(*init, x).size() == 1);

    auto objs = t.objects(4);
    for (auto a : objs)
        for (auto b : objs)
            CHECK(t.has_arrow(a, b) == !t.hom(a, b).empty());

    auto x = t.object(LexTree::bush({1, 2}, 2));
    CHECK(t.object_from_json(t.object_json(x)) == x);
    CHECK_THROWS_AS(t.object(LexTree::bush({1, 2, 3}, 3)), InputError);
    CHECK_THROWS_AS(t.arrow(LexTree::bush({1, 2}, 2), LexTree::bush({1, 2}, 2), {0, 2, 1}), InputError);

    TreeCategory w({1, 2}, TreeVariant{TreeKind::Tw, false});
    CHECK_THROWS_AS(w.object(LexTree::single({1, 2}, 1)), InputError);
}

TEST_CASE("leveless hom sets contain the leveled ones")
{
    TreeCategory lev({1, 2}, TreeVariant{TreeKind::Tc, true});
    TreeCategory free({1, 2}, TreeVariant{TreeKind::Tc, false});
    for (auto a : lev.objects(3))
        for (auto b : lev.objects(5)) {
            auto fa = free.object(lev.value(a)), fb = free.object(lev.value(b));
            auto h1 = lev.hom(a, b), h2 = free.hom(fa, fb);
            CHECK(h1.size() <= h2.size());
            for (auto& f : h1)
                CHECK(free.is_arrow(Arrow{fa, fb, f.data}));
        }
}

TEST_CASE("property: closed form agrees with generic search in other regimes")
{
    SearchBudget budget;
    budget.record_witnesses = false;
    budget.max_size = 5;
    budget.witness_size = 7;
    budget.extension_depth = 1;
    struct Regime {
        std::vector<int> M;
        TreeVariant variant;
        int bound;
    };
    const std::vector<Regime> regimes = {
        {{2}, {TreeKind::Tc, true}, 5},
        {{1}, {TreeKind::Tc, true}, 4},
        {{2, 3}, {TreeKind::Tc, true}, 4},
        {{2, 3}, {TreeKind::Tw, true}, 4},
        {{1, 2}, {TreeKind::Tc, false}, 4},
        {{1, 2}, {TreeKind::Tw, false}, 4},
        {{1, 2}, {TreeKind::Ta, false}, 4},
    };
    for (auto& r : regimes) {
        TreeCategory c(r.M, r.variant);
        int arrows = 0;
        for (auto a : c.objects(r.bound))
            for (auto b : c.objects(r.bound))
                for (auto& f : c.hom(a, b)) {
                    ++arrows;
                    bool closed = is_amalgamable_tree_arrow(c.value(a), c.value(b), f.data, r.variant);
                    auto v = is_amalgamable_arrow(c, f, budget);
                    INFO(c.name(), " ", c.arrow_json(f).dump());
                    REQUIRE_FALSE(v.is_unknown());
                    CHECK(v.is_yes() == closed);
                    if (v.is_no())
                        CHECK(v.payload.contains("obstruction"));
                }
        CHECK(arrows > 0);
    }
}

TEST_CASE("single-degree trees amalgamate everywhere")
{
    TreeCategory c({2}, TreeVariant{TreeKind::Tc, true});
    SearchBudget budget;
    budget.max_size = 5;
    budget.witness_size = 7;
    for (auto x : c.objects(5))
        CHECK(is_amalgamable_object(c, x, budget).is_yes());
}

TEST_CASE("level domination")
{
    auto bush = LexTree::bush({2}, 2);
    auto full = LexTree::balanced({2}, 2, 3);
    for (auto& f : enumerate_embeddings(bush, full)) {
        auto d = level_dominate(bush, full, f);
        CHECK(d.added == 0);
        CHECK(d.tree == full);
    }

    // left leaf d levels deeper than the right one
    for (int d = 1; d <= 3; ++d) {
        std::string s = "()";
        for (int i = 0; i < d; ++i)
            s = "(" + s + "())";
        auto T = LexTree::parse({2}, "(" + s + "())");
        int deep = 0;
        while (!T.terminal(deep))
            deep = T.children(deep)[0];
        int shallow = T.children(0)[1];
        std::vector<int> f = {0, deep, shallow};
        REQUIRE(is_tree_morphism(bush, T, f, MorphismFlags{false, true, true}));
        REQUIRE_FALSE(is_tree_morphism(bush, T, f));
        auto dom = level_dominate(bush, T, f);
        CHECK(dom.tree.size() == T.size() + 2 * d);
        CHECK(dom.added == 2 * d);
        int padding = 0;
        for (int v = 0; v < dom.tree.size(); ++v)
            if (std::find(dom.embedding.begin(), dom.embedding.end(), v) == dom.embedding.end() &&
                !dom.tree.terminal(v))
                ++padding;
        CHECK(padding == d);
        CHECK(is_tree_morphism(bush, dom.tree, dom.inclusion));
        CHECK(is_tree_morphism(T, dom.tree, dom.embedding, MorphismFlags{false, true, true}));
        CHECK(compose_maps(dom.embedding, f) == dom.inclusion);
        CHECK(validate(dom.tree).empty());
    }
}

TEST_CASE("property: domination makes random leveless inclusions level preserving")
{
    Rng rng(31);
    int done = 0;
    for (int i = 0; i < 300 && done < 60; ++i) {
        auto S = random_tree({1, 2}, TreeKind::Tc, 4, rng);
        auto T = random_tree({1, 2}, TreeKind::Tc, 9, rng);
        auto fs = enumerate_embeddings(S, T, MorphismFlags{false, true, true}, nullptr, 4);
        for (auto& f : fs) {
            ++done;
            auto d = level_dominate(S, T, f);
            CHECK(is_tree_morphism(S, d.tree, d.inclusion));
            CHECK(is_tree_morphism(T, d.tree, d.embedding, MorphismFlags{false, true, true}));
            CHECK(compose_maps(d.embedding, f) == d.inclusion);
            CHECK(d.tree.size() >= T.size() + d.added);
        }
    }
    CHECK(done >= 60);
}

TEST_CASE("V trees")
{
    CHECK(build_V(2, 3).tree.canonical() == LexTree::balanced({2}, 2, 3).canonical());
    for (int y = 1; y <= 5; ++y)
        CHECK(build_V(1, y).tree.canonical() == LexTree::chain({1}, y).canonical());
    for (int s = 1; s <= 3; ++s)
        for (int y = 0; y <= 4; ++y) {
            int expect = 0;
            for (int i = 0; i < y; ++i)
                expect += ipow(s, i);
            auto V = build_V(s, y);
            CHECK(V.tree.size() == expect);
            for (int v = 0; v < V.tree.size(); ++v) {
                CHECK(static_cast<int>(V.node[v].size()) == V.tree.depth(v));
                if (v > 0) {
                    auto p = V.node[V.tree.parent(v)];
                    CHECK(std::equal(p.begin(), p.end(), V.node[v].begin()));
                }
            }
        }
}

TEST_CASE("pruned V trees against direct filtering")
{
    Rng rng(13);
    const int s = 3, y = 4;
    const std::vector<int> M = {1, 2};
    for (int trial = 0; trial < 25; ++trial) {
        VColoring phi;
        for (auto& t : sequences(s, y - 2)) {
            std::vector<int> c = {0};
            if (rng.below(2))
                c.push_back(1 + static_cast<int>(rng.below(s - 1)));
            phi[t] = c;
        }
        std::vector<std::vector<int>> kept;
        for (auto& t : sequences(s, y - 1)) {
            bool ok = true;
            for (std::size_t i = 0; i < t.size() && ok; ++i) {
                std::vector<int> pre(t.begin(), t.begin() + i);
                auto& c = phi.at(pre);
                ok = std::find(c.begin(), c.end(), t[i]) != c.end();
            }
            if (ok)
                kept.push_back(t);
        }
        auto P = prune_V(s, y, phi, M);
        REQUIRE(P.tree.size() == static_cast<int>(kept.size()));
        auto nodes = P.node;
        std::sort(nodes.begin(), nodes.end());
        std::sort(kept.begin(), kept.end());
        CHECK(nodes == kept);
        for (int v = 0; v < P.tree.size(); ++v)
            if (!P.tree.terminal(v))
                CHECK(P.tree.children(v).size() == phi.at(P.node[v]).size());
        CHECK(validate(P.tree).empty());
    }
    VColoring bad;
    bad[{}] = {1, 2};
    CHECK_THROWS_AS(prune_V(3, 2, bad, M), InputError);
    VColoring wide;
    wide[{}] = {0, 1, 2};
    CHECK_THROWS_AS(prune_V(3, 2, wide, M), InputError);
    CHECK_THROWS_AS(prune_V(3, 3, VColoring{{{}, {0}}}, M), InputError);
}

TEST_CASE("Milliken values")
{
    for (int m = 1; m <= 2; ++m)
        for (int a = 1; a <= 2; ++a) {
            auto r = milliken_witness_search(m, a, a, 1, 4, 1'000'000);
            REQUIRE(r.N);
            CHECK(*r.N == a);
        }
    // two nodes on distinct levels of a chain: pigeonhole
    auto chain = milliken_witness_search(1, 1, 2, 2, 5, 1'000'000);
    REQUIRE(chain.N);
    CHECK(*chain.N == 3);

    auto oracle = binary_bush_ramsey(4);
    REQUIRE(oracle);
    auto r = milliken_witness_search(2, 1, 2, 2, 5, 10'000'000);
    REQUIRE(r.N);
    CHECK(*r.N == *oracle);
    CHECK(*r.N == 4);
    auto r2 = milliken_witness_search(2, 1, 2, 2, 5, 10'000'000, 2);
    CHECK(r2.N == r.N);

    auto ramsey = milliken_witness_search(1, 2, 3, 2, 6, 10'000'000);
    REQUIRE(ramsey.N);
    CHECK(*ramsey.N == 6);
    CHECK(ramsey.rejected.size() == 3);

    auto short_search = milliken_witness_search(1, 2, 3, 2, 5, 10'000'000);
    CHECK_FALSE(short_search.N);
    CHECK_FALSE(short_search.exhausted);
    CHECK(short_search.rejected.size() == 3);
    auto starved = milliken_witness_search(1, 2, 3, 2, 6, 10);
    CHECK_FALSE(starved.N);
    CHECK(starved.exhausted);
    CHECK_THROWS_AS(milliken_witness_search(2, 3, 2, 2, 5, 1000), InputError);
}
