#pragma once

#include <string>
#include <vector>

#include "wfr/category.hpp"
#include "wfr/rng.hpp"

namespace wfr {

/// Which labelled variant of the tree categories: undecided terminals only,
/// terminals optionally decided, or all terminals decided.
enum class TreeKind { Tw, Tc, Ta };

struct TreeVariant {
    TreeKind kind = TreeKind::Tc;
    bool leveled = true;

    std::string name() const;
    /// "tw", "tc", "ta", "leveless" (= tc without levels), or one of the
    /// first three with a "-leveless" suffix.
    static TreeVariant parse(const std::string& s);
};

/// A finite lexicographic tree with splitting degrees restricted to M.
/// Nodes are numbered in lexicographic (pre)order, so isomorphic trees have
/// identical representations; levels are depths. `label` is the decided
/// splitting degree: the number of children at non-terminal nodes, and 0
/// (undecided) or an element of M at terminal nodes.
class LexTree {
public:
    LexTree() = default;
    explicit LexTree(std::vector<int> M);

    /// Builds the tree hanging from `root` and renumbers it; old_to_new
    /// receives the renaming (-1 for nodes not reachable from root).
    static LexTree build(std::vector<int> M, const std::vector<std::vector<int>>& children,
                         const std::vector<int>& labels, int root, std::vector<int>* old_to_new = nullptr);
    static LexTree single(std::vector<int> M, int label = 0);
    static LexTree bush(std::vector<int> M, int degree, int leaf_label = 0);
    static LexTree chain(std::vector<int> M, int n, int top_label = 0);
    /// Full m-splitting tree with `levels` levels, terminals labelled leaf_label.
    static LexTree balanced(std::vector<int> M, int m, int levels, int leaf_label = 0);
    /// Inverse of canonical().
    static LexTree parse(std::vector<int> M, const std::string& canonical);

    const std::vector<int>& M() const { return M_; }
    bool allows(int m) const;
    int min_degree() const { return M_.empty() ? 1 : M_.front(); }

    int size() const { return static_cast<int>(parent_.size()); }
    bool empty() const { return parent_.empty(); }
    int parent(int v) const { return parent_[v]; }
    const std::vector<int>& children(int v) const { return children_[v]; }
    int label(int v) const { return label_[v]; }
    bool terminal(int v) const { return children_[v].empty(); }
    bool decided(int v) const { return label_[v] != 0; }
    int depth(int v) const { return depth_[v]; }
    /// Number of levels.
    int height() const;
    std::vector<int> level(int d) const;
    int child_index(int v) const;
    /// Descendants of v are exactly v+1 .. subtree_end(v)-1.
    int subtree_end(int v) const { return end_[v]; }
    bool leq(int x, int y) const { return x <= y && y < end_[x]; }
    int meet(int x, int y) const;
    /// Index of the child of s whose subtree contains t > s, else -1.
    int branch_of(int s, int t) const;
    bool fully_decided() const;

    std::string canonical() const;
    json to_json() const;
    /// Accepts arbitrary node ids; json_ids[v] receives the id of node v.
    static LexTree from_json(const json& j, std::vector<int>* json_ids = nullptr);

    LexTree with_label(int v, int label) const;

    friend bool operator==(const LexTree&, const LexTree&) = default;

private:
    std::vector<int> M_;
    std::vector<int> parent_;
    std::vector<std::vector<int>> children_;
    std::vector<int> label_;
    std::vector<int> depth_;
    std::vector<int> end_;
};

struct TreeViolation {
    int node = -1;
    std::string rule;
};

/// Every invariant of the variant: degrees of non-terminal nodes in M,
/// decided labels in M, terminal labels as the variant requires.
std::vector<TreeViolation> validate(const LexTree& t, TreeKind kind = TreeKind::Tc);

/// Structural checks on raw JSON (ids, parent/child agreement, single root,
/// acyclicity, dspl agreeing with the splitting degree) followed by
/// validate(); nodes are reported by their JSON ids.
std::vector<TreeViolation> validate_json(const json& j, TreeKind kind = TreeKind::Tc);

json violations_json(const std::vector<TreeViolation>& v);

/// All trees of the variant with exactly n nodes, in canonical order.
std::vector<LexTree> enumerate_trees(const std::vector<int>& M, TreeKind kind, int n);

/// Random tree built by planting bushes at random terminals, with at most
/// max_nodes nodes and terminal labels drawn as the variant allows.
LexTree random_tree(const std::vector<int>& M, TreeKind kind, int max_nodes, Rng& rng);

/// Text listing of the tree, one node per line, indented by depth.
std::string tree_diagram(const LexTree& t);

} // namespace wfr
