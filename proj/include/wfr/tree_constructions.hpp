#pragma once

#include <map>
#include <optional>
#include <vector>

#include "wfr/tree_extension.hpp"

namespace wfr {

/// A leveless inclusion S -> T made level preserving by chains of new nodes.
struct Domination {
    LexTree tree;                 // T-hat
    std::vector<int> inclusion;   // S -> T-hat, preserves levels
    std::vector<int> embedding;   // T -> T-hat
    int added = 0;

    json to_json() const;
};

/// Processes the levels of S from the root up; images on a level that lie
/// below the deepest image of that level get a chain of nodes of the least
/// degree inserted under them (continuation first, fresh terminals after).
Domination level_dominate(const LexTree& S, const LexTree& T, const std::vector<int>& f,
                          TreeKind kind = TreeKind::Tc);

/// V_{S,Y} for S = {0 < ... < s-1} and the chain Y of length y: nodes are the
/// sequences of length < y over S, ordered by extension, children in the
/// order of S.
struct VTree {
    LexTree tree;
    std::vector<std::vector<int>> node;  // tree node -> sequence
};

VTree build_V(int s, int y);

/// Colouring of V_{S,Y}: node sequence -> colour, a subset of S containing 0.
using VColoring = std::map<std::vector<int>, std::vector<int>>;

/// The pruning of V_{S,Y} keeping t when t(i) lies in the colour of its
/// prefix of length i for every i. Every kept node below the top level needs
/// a colour, and its size must lie in M.
VTree prune_V(int s, int y, const VColoring& phi, const std::vector<int>& M);

VColoring vcoloring_from_json(const json& j);

/// Finite Milliken search: the least N <= N_max such that every k-colouring
/// of the strong subtrees of height a of the balanced m-ary tree of height N
/// is constant on the strong subtrees of some height-b strong subtree.
struct MillikenResult {
    std::optional<int> N;
    bool exhausted = false;
    /// For each N tried before the answer: a bad colouring (vertex list by
    /// node maps, colours) as a certificate.
    std::vector<json> rejected;
    std::uint64_t nodes = 0;

    json to_json() const;
};

MillikenResult milliken_witness_search(int m, int a, int b, int k, int N_max, std::uint64_t node_limit,
                                       unsigned threads = 1);

} // namespace wfr
