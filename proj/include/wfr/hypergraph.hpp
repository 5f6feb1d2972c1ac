#pragma once

#include <cstdint>
#include <vector>

namespace wfr {

/// Constraint hypergraph for colouring searches. An edge is monochromatic
/// when all of its vertices share a colour; the empty edge counts as
/// monochromatic.
struct Hypergraph {
    int vertices = 0;
    std::vector<std::vector<int>> edges;
};

enum class ColoringStatus { Found, None, Exhausted };

struct ColoringResult {
    ColoringStatus status = ColoringStatus::None;
    std::vector<int> coloring;  // set when Found
    std::uint64_t nodes = 0;    // search nodes visited
};

/// Looks for a k-colouring with no monochromatic edge by depth-first search
/// in vertex order with forward checking and colour-symmetry breaking. The
/// search is split into shards on a prefix of the vertex order; the first
/// shard in order that succeeds wins, so the result does not depend on
/// `threads`.
ColoringResult find_good_coloring(const Hypergraph& h, int k, std::uint64_t node_limit, unsigned threads = 1);

/// Exhaustive enumeration of all k^V colourings, for cross-checking.
/// Requires k^V <= 2^24.
ColoringResult brute_force_good_coloring(const Hypergraph& h, int k);

bool is_good_coloring(const Hypergraph& h, int k, const std::vector<int>& coloring);

} // namespace wfr
