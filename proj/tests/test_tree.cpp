#include <doctest.h>

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>

#include "wfr/tree.hpp"
#include "wfr/tree_morphism.hpp"

using namespace wfr;

namespace {

// Number of trees with n nodes: terminals take `leaf_labels` choices,
// non-terminals any degree in M with children splitting the rest.
long long count_trees(const std::vector<int>& M, int leaf_labels, int n)
{
    std::vector<long long> t(n + 1, 0);
    for (int k = 1; k <= n; ++k) {
        long long total = k == 1 ? leaf_labels : 0;
        for (int m : M) {
            // ordered sequences of m trees with k-1 nodes in total
            std::vector<long long> ways(k, 0);
            ways[0] = 1;
            for (int part = 0; part < m; ++part) {
                std::vector<long long> next(k, 0);
                for (int used = 0; used < k; ++used)
                    for (int s = 1; used + s < k; ++s)
                        next[used + s] += ways[used] * t[s];
                ways = next;
            }
            total += ways[k - 1];
        }
        t[k] = total;
    }
    return t[n];
}

// Shape of the subtree of T induced by X rooted at x: X-children are the
// minimal X-nodes strictly above x, taken in T's preorder.
std::string induced_shape(const LexTree& T, const std::vector<int>& X, int x)
{
    std::string s = "(";
    for (int y : X)
        if (y != x && T.leq(x, y)) {
            bool minimal = true;
            for (int z : X)
                if (z != x && z != y && T.leq(x, z) && T.leq(z, y))
                    minimal = false;
            if (minimal)
                s += induced_shape(T, X, y);
        }
    return s + ")";
}

std::string shape(const LexTree& S, int v)
{
    std::string s = "(";
    for (int c : S.children(v))
        s += shape(S, c);
    return s + ")";
}

int ancestor_meet(const LexTree& T, int x, int y)
{
    std::set<int> up;
    for (int v = x; v >= 0; v = T.parent(v))
        up.insert(v);
    for (int v = y; v >= 0; v = T.parent(v))
        if (up.count(v))
            return v;
    return -1;
}

// Counts node sets of T that are images of S (undecided labels) under a
// morphism with the given level flag: meet-closed, rooted, splitting
// preserved with one image child per branch, and levels matched.
std::size_t count_strong_subtrees(const LexTree& S, const LexTree& T, bool levels)
{
    const int n = S.size(), N = T.size();
    if (n == 0)
        return 1;
    std::size_t count = 0;
    std::vector<int> X;
    auto check = [&]() {
        for (int a : X)
            for (int b : X)
                if (std::find(X.begin(), X.end(), ancestor_meet(T, a, b)) == X.end())
                    return false;
        int root = X.front();
        if (induced_shape(T, X, root) != shape(S, 0))
            return false;
        // X-children of each node: one per T-branch, covering all branches
        // when the node splits in S.
        for (int x : X) {
            std::set<int> branches;
            int kids = 0;
            for (int y : X)
                if (y != x && T.leq(x, y)) {
                    bool minimal = true;
                    for (int z : X)
                        if (z != x && z != y && T.leq(x, z) && T.leq(z, y))
                            minimal = false;
                    if (minimal) {
                        ++kids;
                        branches.insert(T.branch_of(x, y));
                    }
                }
            if (kids > 0 && (static_cast<int>(branches.size()) != kids ||
                             static_cast<int>(T.children(x).size()) != kids))
                return false;
        }
        if (levels) {
            // X sorted by preorder matches S's preorder; compare depth classes
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if ((S.depth(i) == S.depth(j)) != (T.depth(X[i]) == T.depth(X[j])) ||
                        (S.depth(i) < S.depth(j)) != (T.depth(X[i]) < T.depth(X[j])))
                        return false;
        }
        return true;
    };
    std::function<void(int)> rec = [&](int from) {
        if (static_cast<int>(X.size()) == n) {
            count += check();
            return;
        }
        for (int v = from; v < N; ++v) {
            X.push_back(v);
            rec(v + 1);
            X.pop_back();
        }
    };
    rec(0);
    return count;
}

std::vector<int> identity_map(int n)
{
    std::vector<int> id(n);
    std::iota(id.begin(), id.end(), 0);
    return id;
}

} // namespace

TEST_CASE("constructors and canonical strings")
{
    CHECK(LexTree::bush({1, 2}, 2).canonical() == "(()())");
    CHECK(LexTree::bush({1, 2}, 2, 1).canonical() == "((1)(1))");
    CHECK(LexTree::chain({1}, 3).canonical() == "((()))");
    CHECK(LexTree::balanced({2}, 2, 3).size() == 7);
    CHECK(LexTree::balanced({2}, 2, 3).height() == 3);
    CHECK(LexTree({1, 2}).empty());
    CHECK(LexTree::single({1, 2}).size() == 1);
    for (auto& t : enumerate_trees({1, 2, 3}, TreeKind::Tc, 5))
        CHECK(LexTree::parse({1, 2, 3}, t.canonical()) == t);
    CHECK_THROWS_AS(LexTree::bush({1, 2}, 3), InputError);
    CHECK_THROWS_AS(LexTree::chain({2}, 2), InputError);
    CHECK_THROWS_AS(LexTree::balanced({1, 2}, 3, 2), InputError);
    CHECK_THROWS_AS(LexTree::parse({1, 2}, "(()"), InputError);
}

TEST_CASE("order structure against parent chains")
{
    Rng rng(3);
    for (int i = 0; i < 40; ++i) {
        auto t = random_tree({1, 2, 3}, TreeKind::Tc, 12, rng);
        for (int x = 0; x < t.size(); ++x) {
            CHECK(t.depth(x) == (x == 0 ? 0 : t.depth(t.parent(x)) + 1));
            for (int y = 0; y < t.size(); ++y) {
                bool below = false;
                for (int v = y; v >= 0; v = t.parent(v))
                    below = below || v == x;
                CHECK(t.leq(x, y) == below);
                CHECK(t.meet(x, y) == ancestor_meet(t, x, y));
                if (below && x != y) {
                    int b = t.branch_of(x, y);
                    REQUIRE(b >= 0);
                    CHECK(t.leq(t.children(x)[b], y));
                }
            }
        }
    }
}

TEST_CASE("validation")
{
    CHECK(validate(LexTree({1, 2})).empty());
    auto three = json::parse(R"({"M":[1,2],"nodes":[{"id":0,"parent":null,"children":[1,2,3]},
        {"id":1,"parent":0,"children":[]},{"id":2,"parent":0,"children":[]},{"id":3,"parent":0,"children":[]}]})");
    auto v = validate_json(three);
    REQUIRE_FALSE(v.empty());
    CHECK(v.front().node == 0);

    auto decided = LexTree::single({1, 2}, 2);
    CHECK(validate(decided, TreeKind::Tc).empty());
    CHECK(validate(decided, TreeKind::Ta).empty());
    CHECK_FALSE(validate(decided, TreeKind::Tw).empty());
    CHECK_FALSE(validate(LexTree::single({1, 2}), TreeKind::Ta).empty());

    auto two_roots = json::parse(R"({"M":[1],"nodes":[{"id":0,"parent":null,"children":[]},
        {"id":1,"parent":null,"children":[]}]})");
    CHECK_FALSE(validate_json(two_roots).empty());
    auto cycle = json::parse(R"({"M":[1],"nodes":[{"id":0,"parent":1,"children":[1]},
        {"id":1,"parent":0,"children":[0]}]})");
    CHECK_FALSE(validate_json(cycle).empty());
    auto mismatch = json::parse(R"({"M":[1,2],"nodes":[{"id":0,"parent":null,"children":[1],"dspl":2},
        {"id":1,"parent":0,"children":[]}]})");
    auto mm = validate_json(mismatch);
    REQUIRE_FALSE(mm.empty());
    CHECK(mm.front().node == 0);
    auto disagree = json::parse(R"({"M":[1],"nodes":[{"id":5,"parent":null,"children":[7]},
        {"id":7,"parent":9,"children":[]}]})");
    CHECK_FALSE(validate_json(disagree).empty());
    CHECK_FALSE(validate(LexTree::from_json(three)).empty());
    CHECK_THROWS_AS(LexTree::from_json(cycle), InputError);
}

TEST_CASE("json round trip with arbitrary ids")
{
    Rng rng(5);
    for (int i = 0; i < 30; ++i) {
        auto t = random_tree({1, 2}, TreeKind::Tc, 9, rng);
        CHECK(LexTree::from_json(t.to_json()) == t);
        json j = t.to_json();
        auto rename = [](const json& id) { return id.is_null() ? id : json(100 - id.get<int>() * 3); };
        for (auto& n : j["nodes"]) {
            n["id"] = rename(n["id"]);
            n["parent"] = rename(n["parent"]);
            for (auto& c : n["children"])
                c = rename(c);
        }
        std::reverse(j["nodes"].begin(), j["nodes"].end());
        std::vector<int> ids;
        CHECK(LexTree::from_json(j, &ids) == t);
        REQUIRE(ids.size() == static_cast<std::size_t>(t.size()));
        for (int v = 0; v < t.size(); ++v)
            CHECK(ids[v] == 100 - v * 3);
    }
}

TEST_CASE("enumeration counts match the recursive count")
{
    for (auto M : {std::vector<int>{1}, std::vector<int>{2}, std::vector<int>{1, 2}, std::vector<int>{1, 2, 3}})
        for (int n = 1; n <= 6; ++n) {
            CHECK(enumerate_trees(M, TreeKind::Tw, n).size() == static_cast<std::size_t>(count_trees(M, 1, n)));
            CHECK(enumerate_trees(M, TreeKind::Ta, n).size() ==
                  static_cast<std::size_t>(count_trees(M, static_cast<int>(M.size()), n)));
            CHECK(enumerate_trees(M, TreeKind::Tc, n).size() ==
                  static_cast<std::size_t>(count_trees(M, static_cast<int>(M.size()) + 1, n)));
        }
    auto ts = enumerate_trees({1, 2}, TreeKind::Tc, 5);
    for (std::size_t i = 1; i < ts.size(); ++i)
        CHECK(ts[i - 1].canonical() < ts[i].canonical());
    for (auto& t : ts)
        CHECK(validate(t, TreeKind::Tc).empty());
}

TEST_CASE("random trees stay in the variant")
{
    Rng rng(9);
    for (auto kind : {TreeKind::Tw, TreeKind::Tc, TreeKind::Ta})
        for (int i = 0; i < 50; ++i) {
            auto t = random_tree({1, 2, 3}, kind, 10, rng);
            CHECK(t.size() <= 10);
            CHECK(validate(t, kind).empty());
        }
}

TEST_CASE("variant names")
{
    CHECK(TreeVariant::parse("tw").kind == TreeKind::Tw);
    CHECK(TreeVariant::parse("ta").leveled);
    auto l = TreeVariant::parse("leveless");
    CHECK(l.kind == TreeKind::Tc);
    CHECK_FALSE(l.leveled);
    auto tw = TreeVariant::parse("tw-leveless");
    CHECK(tw.kind == TreeKind::Tw);
    CHECK_FALSE(tw.leveled);
    for (auto s : {"tw", "tc", "ta", "tw-leveless", "tc-leveless", "ta-leveless"})
        CHECK(TreeVariant::parse(TreeVariant::parse(s).name()).name() == TreeVariant::parse(s).name());
    CHECK_THROWS_AS(TreeVariant::parse("tz"), InputError);
}

TEST_CASE("embedding examples")
{
    auto single = LexTree::single({1, 2});
    Rng rng(1);
    for (int i = 0; i < 10; ++i) {
        auto t = random_tree({1, 2}, TreeKind::Tw, 9, rng);
        CHECK(enumerate_embeddings(single, t).size() == static_cast<std::size_t>(t.size()));
    }
    for (int n = 2; n <= 7; ++n)
        CHECK(enumerate_embeddings(LexTree::chain({1}, 2), LexTree::chain({1}, n)).size() ==
              static_cast<std::size_t>(n * (n - 1) / 2));
    auto bush = LexTree::bush({2}, 2), full = LexTree::balanced({2}, 2, 3);
    CHECK(enumerate_embeddings(bush, full).size() == count_strong_subtrees(bush, full, true));
    CHECK(enumerate_embeddings(bush, full).size() == 7);
}

TEST_CASE("embeddings against subset enumeration")
{
    for (auto M : {std::vector<int>{1, 2}, std::vector<int>{2, 3}}) {
        std::vector<LexTree> small, large;
        for (int n = 1; n <= 3; ++n)
            for (auto& t : enumerate_trees(M, TreeKind::Tw, n))
                small.push_back(t);
        for (int n = 1; n <= 6; ++n)
            for (auto& t : enumerate_trees(M, TreeKind::Tw, n))
                large.push_back(t);
        for (auto& S : small)
            for (auto& T : large) {
                auto strong = enumerate_embeddings(S, T, MorphismFlags{true, true, true});
                CHECK(strong.size() == count_strong_subtrees(S, T, true));
                auto leveless = enumerate_embeddings(S, T, MorphismFlags{false, true, true});
                CHECK(leveless.size() == count_strong_subtrees(S, T, false));
                CHECK(has_embedding(S, T) == !strong.empty());
                for (auto& f : strong)
                    CHECK(is_tree_morphism(S, T, f));
            }
    }
}

TEST_CASE("labels restrict embeddings")
{
    auto decided = LexTree::single({1, 2}, 2);
    auto undecided = LexTree::single({1, 2});
    auto bush = LexTree::bush({1, 2}, 2);
    CHECK(enumerate_embeddings(undecided, decided).size() == 1);
    CHECK(enumerate_embeddings(decided, undecided).empty());
    // the decided degree 2 is realized at the root of the bush
    auto f = enumerate_embeddings(decided, bush);
    REQUIRE(f.size() == 1);
    CHECK(f.front() == std::vector<int>{0});
    CHECK(enumerate_embeddings(LexTree::single({1, 2}, 1), bush).empty());
}

TEST_CASE("partial maps and limits")
{
    auto full = LexTree::balanced({2}, 2, 3);
    auto bush = LexTree::bush({2}, 2);
    std::vector<int> partial = {1, -1, -1};
    auto e = enumerate_embeddings(bush, full, {}, &partial);
    CHECK(e.size() == 1);
    for (auto& f : e)
        CHECK(f[0] == 1);
    CHECK(enumerate_embeddings(bush, full, {}, nullptr, 2).size() == 2);
    auto all = enumerate_embeddings(bush, full);
    CHECK(std::is_sorted(all.begin(), all.end()));
}

TEST_CASE("morphism violations name the rule")
{
    auto bush = LexTree::bush({1, 2}, 2);
    CHECK_FALSE(morphism_violations(bush, bush, {0, 2, 1}).empty());
    CHECK_FALSE(morphism_violations(bush, bush, {0, 1, 1}).empty());
    CHECK(morphism_violations(bush, bush, {0, 1, 2}).empty());
    CHECK_FALSE(morphism_violations(bush, bush, {0, 1}).empty());
}

TEST_CASE("property: lexicographic trees are rigid")
{
    for (auto M : {std::vector<int>{1, 2}, std::vector<int>{2, 3}})
        for (int n = 1; n <= 7; ++n)
            for (auto& t : enumerate_trees(M, TreeKind::Tw, n)) {
                auto e = enumerate_embeddings(t, t, MorphismFlags{true, true, true});
                REQUIRE(e.size() == 1);
                CHECK(e.front() == identity_map(t.size()));
            }
}

TEST_CASE("composition of maps")
{
    CHECK(compose_maps({2, 0, 1}, {1, 2}) == std::vector<int>{0, 1});
    auto full = LexTree::balanced({2}, 2, 3);
    auto bush = LexTree::bush({2}, 2);
    for (auto& f : enumerate_embeddings(bush, bush))
        for (auto& g : enumerate_embeddings(bush, full))
            CHECK(is_tree_morphism(bush, full, compose_maps(g, f)));
}
