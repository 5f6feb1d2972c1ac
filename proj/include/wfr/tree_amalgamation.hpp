#pragma once

#include <string>
#include <vector>

#include "wfr/tree_extension.hpp"

namespace wfr {

struct AmalgamationStep {
    std::string rule;    // "i" .. "vii", "identity", "empty-base", "linear"
    std::string detail;
};

struct TreeAmalgam {
    bool ok = false;
    std::vector<int> incompatible;  // nodes of S, when !ok
    LexTree tree;
    std::vector<int> left;   // T1 -> tree
    std::vector<int> right;  // T2 -> tree
    bool free = false;
    std::vector<AmalgamationStep> trace;

    json to_json() const;
};

/// Non-gluing amalgamation of two level-preserving extensions f1: S -> T1 and
/// f2: S -> T2. Fresh terminals are labelled as the variant requires. When
/// the extensions are incompatible, ok is false and the nodes of
/// incompatibility are returned instead.
TreeAmalgam amalgamate(const LexTree& S, const LexTree& T1, const std::vector<int>& f1, const LexTree& T2,
                       const std::vector<int>& f2, TreeKind kind = TreeKind::Tc);

/// Everything wrong with an amalgam: legs that are not morphisms, legs
/// disagreeing on S, images overlapping outside S, or a result outside the
/// variant.
std::vector<std::string> amalgam_violations(const LexTree& S, const LexTree& T1, const std::vector<int>& f1,
                                            const LexTree& T2, const std::vector<int>& f2, const TreeAmalgam& a,
                                            TreeKind kind = TreeKind::Tc);

/// Closed-form amalgamability of a tree arrow in the given variant.
bool is_amalgamable_tree_arrow(const LexTree& S, const LexTree& T, const std::vector<int>& f,
                               const TreeVariant& variant);

} // namespace wfr
