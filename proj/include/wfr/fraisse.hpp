#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wfr/category.hpp"

namespace wfr {

/// Objects u_0 .. u_n with connecting arrows u_i -> u_{i+1}; composites are
/// derived.
class SequencePrefix {
public:
    SequencePrefix(const Category& c, ObjectId first);

    const Category& category() const { return *c_; }
    int length() const { return static_cast<int>(objects_.size()); }
    ObjectId object(int i) const { return objects_.at(i); }
    const Arrow& link(int i) const { return links_.at(i); }
    /// u_i^j for i <= j.
    Arrow connecting(int i, int j) const;

    void append(const Arrow& link);

    /// Bounds and schedule details the prefix was built and checked with.
    json metadata = json::object();

    /// First (k, l, m) with u_k^m != u_l^m o u_k^l, or nothing.
    std::optional<std::array<int, 3>> functoriality_failure() const;

    json to_json() const;
    static SequencePrefix from_json(const Category& c, const json& j);

private:
    const Category* c_;
    std::vector<ObjectId> objects_;
    std::vector<Arrow> links_;
};

/// Every object of grade <= bound maps into some u_n; No names the first
/// object that does not.
Verdict verify_W0(const SequencePrefix& seq, int bound);

/// Least m >= n with u_n^m amalgamable (within budget) such that every leg
/// f out of u_m into grade <= budget.max_size is absorbed inside the prefix:
/// g o f o u_n^m = u_n^l for some l >= m and g.
Verdict verify_W1_step(const SequencePrefix& seq, int n, const SearchBudget& budget);

/// Bookkeeping construction: at each step the current object absorbs every
/// leg out of it into grade <= budget.max_size and jointly embeds every
/// object of that grade not reached yet, then grows by one extension. The
/// seed only permutes the order in which tasks are absorbed.
SequencePrefix build_weak_fraisse_prefix(const Category& c, int length, const SearchBudget& budget,
                                         std::uint64_t seed = 0);

struct ZigZag {
    std::vector<int> k, l;
    std::vector<Arrow> f;  // u_{k_n} -> v_{l_n}
    std::vector<Arrow> g;  // v_{l_n} -> u_{k_{n+1}}

    json to_json(const Category& c) const;
};

/// Alternately extends along u and v, each time taking the first index and
/// arrow (in canonical order) closing the square. Throws BudgetExhausted
/// when a square cannot be closed inside the prefixes.
ZigZag back_and_forth(const SequencePrefix& u, const SequencePrefix& v, int steps, const SearchBudget& budget);

/// Identities g_n o f_n = u_{k_n}^{k_{n+1}} and f_{n+1} o g_n = v_{l_n}^{l_{n+1}};
/// returns the first failing equation, or an empty string.
std::string check_zigzag(const SequencePrefix& u, const SequencePrefix& v, const ZigZag& z);

/// A finite chain coloured by {0..colors-1}: one point of colour 0, then in
/// each round every gap (including both ends) gets one new point of each
/// colour in order.
struct ColoredChain {
    std::vector<int> color;
    std::vector<int> round;  // round in which each point was added

    json to_json() const;
};

ColoredChain generic_coloring_prefix(int colors, int rounds);

/// Whether every gap between adjacent points of rounds < r (and both ends)
/// holds every colour among points of round <= r.
bool gaps_hold_all_colors(const ColoredChain& c, int colors, int r);

} // namespace wfr
