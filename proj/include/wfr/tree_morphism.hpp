#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "wfr/tree.hpp"

namespace wfr {

/// Which structure a tree morphism must preserve on top of the tree order,
/// meets and splitting.
struct MorphismFlags {
    bool levels = true;
    bool lex = true;
    bool labels = true;

    static MorphismFlags for_variant(const TreeVariant& v) { return {v.leveled, true, true}; }
};

/// Every rule the node map f: S -> T breaks; empty means f is a morphism.
std::vector<std::string> morphism_violations(const LexTree& S, const LexTree& T, const std::vector<int>& f,
                                             MorphismFlags flags = {});

inline bool is_tree_morphism(const LexTree& S, const LexTree& T, const std::vector<int>& f, MorphismFlags flags = {})
{
    return morphism_violations(S, T, f, flags).empty();
}

/// All morphisms S -> T in lexicographic order of their node maps, built
/// level block by level block. With `partial`, only maps agreeing with it
/// wherever partial[v] >= 0.
std::vector<std::vector<int>> enumerate_embeddings(const LexTree& S, const LexTree& T, MorphismFlags flags = {},
                                                   const std::vector<int>* partial = nullptr,
                                                   std::size_t limit = std::numeric_limits<std::size_t>::max());

bool has_embedding(const LexTree& S, const LexTree& T, MorphismFlags flags = {});

std::vector<int> compose_maps(const std::vector<int>& g, const std::vector<int>& f);

} // namespace wfr
