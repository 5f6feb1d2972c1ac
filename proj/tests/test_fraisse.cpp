#include <doctest.h>

#include <numeric>

#include "wfr/category_ops.hpp"
#include "wfr/fraisse.hpp"
#include "wfr/orders.hpp"
#include "wfr/tree_amalgamation.hpp"
#include "wfr/tree_category.hpp"

using namespace wfr;

namespace {

std::vector<int> initial_segment(int n)
{
    std::vector<int> v(n);
    std::iota(v.begin(), v.end(), 0);
    return v;
}

// Chains of the given lengths linked by initial-segment inclusions.
SequencePrefix chain_prefix(const AloCategory& lo, const std::vector<int>& lengths)
{
    SequencePrefix s(lo, lo.object(AlmostLinearOrder::linear(lengths.front())));
    for (std::size_t i = 1; i < lengths.size(); ++i)
        s.append(lo.arrow(AlmostLinearOrder::linear(lengths[i - 1]), AlmostLinearOrder::linear(lengths[i]),
                          initial_segment(lengths[i - 1])));
    return s;
}

// After round r, the points of earlier rounds cut the chain into gaps;
// each gap must hold every colour among the round-r points.
bool gaps_oracle(const ColoredChain& c, int colors, int r)
{
    std::vector<std::vector<bool>> gaps(1, std::vector<bool>(colors, false));
    for (std::size_t i = 0; i < c.color.size(); ++i) {
        if (c.round[i] < r)
            gaps.emplace_back(colors, false);
        else if (c.round[i] == r)
            gaps.back()[c.color[i]] = true;
    }
    for (auto& g : gaps)
        for (bool b : g)
            if (!b)
                return false;
    return true;
}

} // namespace

TEST_CASE("prefix composites are functorial")
{
    AloCategory lo(AloCategory::Family::Linear);
    auto s = chain_prefix(lo, {1, 2, 3, 4, 5, 6});
    CHECK(s.length() == 6);
    CHECK_FALSE(s.functoriality_failure());
    CHECK(s.connecting(2, 2) == lo.identity(s.object(2)));
    CHECK(s.connecting(0, 5).data == std::vector<int>{0});
    for (int k = 0; k < s.length(); ++k)
        for (int l = k; l < s.length(); ++l)
            for (int m = l; m < s.length(); ++m)
                CHECK(s.connecting(k, m) == lo.compose(s.connecting(l, m), s.connecting(k, l)));
    CHECK_THROWS_AS(s.connecting(3, 2), InputError);
    CHECK_THROWS_AS(s.connecting(0, 6), InputError);
    CHECK_THROWS_AS(s.append(lo.identity(s.object(0))), InputError);
    CHECK_THROWS_AS(s.append(Arrow{s.object(5), s.object(5), {0, 1, 2, 3, 5, 4}}), InputError);
}

TEST_CASE("prefix json round trip")
{
    AloCategory lo(AloCategory::Family::Linear);
    auto s = chain_prefix(lo, {1, 3, 4});
    s.metadata = {{"note", "hand built"}};
    auto j = s.to_json();
    CHECK(j["category"] == "FinLO");
    auto back = SequencePrefix::from_json(lo, j);
    CHECK(back.to_json() == j);
    j["links"].erase(1);
    CHECK_THROWS_AS(SequencePrefix::from_json(lo, j), InputError);
    CHECK_THROWS_AS(SequencePrefix::from_json(lo, json::parse(R"({"objects":[]})")), InputError);
}

TEST_CASE("W0 examples")
{
    AloCategory lo(AloCategory::Family::Linear);
    CHECK(verify_W0(chain_prefix(lo, {1, 2, 3, 4, 5, 6}), 5).is_yes());
    auto constant = chain_prefix(lo, {1, 1, 1});
    auto v = verify_W0(constant, 2);
    REQUIRE(v.is_no());
    CHECK(v.payload["object"] == AlmostLinearOrder::linear(2).to_json());
    CHECK(verify_W0(constant, 1).is_yes());
}

TEST_CASE("W1 examples")
{
    SearchBudget budget;
    budget.max_size = 3;
    budget.witness_size = 6;
    AloCategory lo(AloCategory::Family::Linear);
    // initial-segment inclusions cannot absorb legs that move the first
    // point, so the witness lies further along
    auto s = chain_prefix(lo, {1, 2, 3, 4, 5, 6});
    for (int n = 0; n < s.length(); ++n) {
        auto v = verify_W1_step(s, n, budget);
        REQUIRE(v.is_yes());
        CHECK(v.payload["m"] >= n);
    }
    CHECK(verify_W1_step(s, 0, budget).payload["m"] == 2);
    CHECK_THROWS_AS(verify_W1_step(s, 6, budget), InputError);

    budget.max_size = 2;
    auto constant = chain_prefix(lo, {2, 2});
    auto c = verify_W1_step(constant, 0, budget);
    REQUIRE(c.is_yes());
    CHECK(c.payload["m"] == 0);

    // a chain prefix too short to absorb the legs out of its last object
    budget.max_size = 4;
    auto stuck = verify_W1_step(chain_prefix(lo, {1, 2}), 1, budget);
    CHECK(stuck.is_unknown());
}

TEST_CASE("W1 needs m > n while terminal images stay terminal")
{
    std::vector<int> M = {1, 2};
    TreeCategory tw(M, TreeVariant{TreeKind::Tw, true});
    auto S = LexTree::bush(M, 2);
    auto a = terminal_plant(S, 1, LexTree::bush(M, 2));
    auto b = terminal_plant(a.tree, a.base[2], LexTree::bush(M, 2));
    auto f = compose_maps(b.base, a.base);
    SequencePrefix s(tw, tw.object(S));
    s.append(tw.arrow(S, b.tree, f));

    SearchBudget budget;
    budget.max_size = 5;
    budget.witness_size = 9;
    CHECK(is_amalgamable_arrow(tw, s.connecting(0, 0), budget).is_no());
    CHECK(is_amalgamable_arrow(tw, s.connecting(0, 1), budget).is_yes());
    auto v = verify_W1_step(s, 0, budget);
    REQUIRE(v.is_yes());
    CHECK(v.payload["m"] == 1);
}

TEST_CASE("built prefixes for chains")
{
    SearchBudget budget;
    budget.max_size = 3;
    budget.witness_size = 6;
    budget.record_witnesses = false;
    AloCategory lo(AloCategory::Family::Linear);
    auto s = build_weak_fraisse_prefix(lo, 6, budget);
    REQUIRE(s.length() == 6);
    for (int i = 1; i < s.length(); ++i)
        CHECK(lo.grade(s.object(i)) > lo.grade(s.object(i - 1)));
    CHECK_FALSE(s.functoriality_failure());
    CHECK(verify_W0(s, 3).is_yes());
    for (int n = 0; n < s.length(); ++n) {
        auto v = verify_W1_step(s, n, budget);
        REQUIRE(v.is_yes());
        CHECK(v.payload["m"] == n);
    }
    CHECK(s.metadata["task_bound"] == 3);
    CHECK(build_weak_fraisse_prefix(lo, 6, budget).to_json() == s.to_json());

    auto one = build_weak_fraisse_prefix(lo, 1, budget);
    CHECK(one.length() == 1);
    CHECK_FALSE(one.functoriality_failure());
    CHECK_FALSE(verify_W1_step(one, 0, budget).is_no());
    CHECK_THROWS_AS(build_weak_fraisse_prefix(lo, 0, budget), InputError);
}

TEST_CASE("built prefixes for trees")
{
    SearchBudget budget;
    budget.max_size = 3;
    budget.witness_size = 7;
    budget.record_witnesses = false;
    for (auto kind : {TreeKind::Ta, TreeKind::Tc}) {
        TreeCategory t({2}, TreeVariant{kind, true});
        auto s = build_weak_fraisse_prefix(t, 4, budget);
        CHECK_FALSE(s.functoriality_failure());
        CHECK(verify_W0(s, 4).is_yes());
        for (int n = 0; n < s.length(); ++n)
            CHECK(verify_W1_step(s, n, budget).is_yes());
    }
}

TEST_CASE("zig-zags")
{
    SearchBudget budget;
    AloCategory lo(AloCategory::Family::Linear);
    auto u = chain_prefix(lo, {1, 2, 3, 4, 5, 6});
    auto v = chain_prefix(lo, {2, 4, 6, 8, 10, 12});
    auto z = back_and_forth(u, v, 2, budget);
    CHECK(z.g.size() == 2);
    CHECK(z.f.size() == 3);
    CHECK(check_zigzag(u, v, z).empty());
    for (std::size_t n = 0; n + 1 < z.k.size(); ++n)
        CHECK(z.k[n] < z.k[n + 1]);

    auto self = back_and_forth(u, u, 3, budget);
    CHECK(check_zigzag(u, u, self).empty());

    auto broken = z;
    auto alternatives = lo.hom(z.f[0].dom, z.f[0].cod);
    REQUIRE(alternatives.size() > 1);
    broken.f[0] = alternatives.front() == z.f[0] ? alternatives.back() : alternatives.front();
    CHECK_FALSE(check_zigzag(u, v, broken).empty());

    auto short_u = chain_prefix(lo, {1, 2});
    CHECK_THROWS_AS(back_and_forth(short_u, v, 3, budget), BudgetExhausted);

    budget.max_size = 3;
    budget.witness_size = 7;
    budget.record_witnesses = false;
    TreeCategory ta({2}, TreeVariant{TreeKind::Ta, true});
    auto p = build_weak_fraisse_prefix(ta, 5, budget, 0);
    auto q = build_weak_fraisse_prefix(ta, 5, budget, 7);
    auto tz = back_and_forth(p, q, 2, budget);
    CHECK(check_zigzag(p, q, tz).empty());
}

TEST_CASE("generic colouring prefix")
{
    auto one = generic_coloring_prefix(1, 3);
    for (int c : one.color)
        CHECK(c == 0);
    CHECK(one.color.size() == 15);

    auto two = generic_coloring_prefix(2, 2);
    for (int r = 1; r <= 2; ++r) {
        CHECK(gaps_oracle(two, 2, r));
        CHECK(gaps_hold_all_colors(two, 2, r));
    }
    for (int colors = 1; colors <= 3; ++colors)
        for (int r = 0; r < 3; ++r) {
            auto a = generic_coloring_prefix(colors, r), b = generic_coloring_prefix(colors, r + 1);
            ColoredChain restricted;
            for (std::size_t i = 0; i < b.color.size(); ++i)
                if (b.round[i] <= r) {
                    restricted.color.push_back(b.color[i]);
                    restricted.round.push_back(b.round[i]);
                }
            CHECK(restricted.color == a.color);
            CHECK(restricted.round == a.round);
            CHECK(gaps_oracle(b, colors, r + 1) == gaps_hold_all_colors(b, colors, r + 1));
        }
    ColoredChain lopsided{{0, 0, 1, 0}, {0, 1, 1, 1}};
    CHECK_FALSE(gaps_oracle(lopsided, 2, 1));
    CHECK_FALSE(gaps_hold_all_colors(lopsided, 2, 1));
    CHECK_THROWS_AS(generic_coloring_prefix(0, 1), InputError);
}
