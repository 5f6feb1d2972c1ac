#pragma once

#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "wfr/tree.hpp"

namespace wfr {

/// Mutable tree whose nodes carry stable integer ids; used to assemble
/// extensions and amalgams before renumbering into a LexTree.
class IdTree {
public:
    struct Node {
        int parent = -1;
        std::vector<int> children;
        int label = 0;
        bool live = false;
    };

    IdTree() = default;
    /// Node v of t gets id ids[v].
    IdTree(const LexTree& t, const std::vector<int>& ids);

    bool empty() const { return count_ == 0; }
    int size() const { return count_; }
    int root() const { return root_; }
    bool contains(int id) const
    {
        return id >= 0 && id < static_cast<int>(nodes_.size()) && nodes_[id].live;
    }
    const Node& node(int id) const;
    int parent(int id) const { return node(id).parent; }
    const std::vector<int>& children(int id) const { return node(id).children; }
    int label(int id) const;
    bool terminal(int id) const { return node(id).children.empty(); }
    int depth(int id) const;
    /// Nodes at depth d in lexicographic order.
    std::vector<int> level(int d) const;
    std::vector<int> preorder() const;
    std::set<int> ids() const;

    void add_root(int id, int label);
    /// Appends a new child (or inserts it at `position`).
    void add_child(int parent, int id, int label, int position = -1);
    /// Puts the new node `id` between x and its parent (or below the root)
    /// and makes x its only child for now.
    void insert_above(int x, int id);
    void set_label(int id, int label);
    /// Replaces the child list of p; each new child must already exist.
    void set_children(int p, std::vector<int> children);

    /// The subtree induced by `keep`, which must contain the root and be
    /// closed under parents.
    IdTree induced(const std::set<int>& keep) const;
    /// Puts `column` between x and its parent: ids[c] names column node c,
    /// and the point is identified with x.
    void splice_column(int x, const LexTree& column, int point, const std::vector<int>& ids);

    LexTree to_tree(const std::vector<int>& M, std::unordered_map<int, int>* id_to_node = nullptr) const;

private:
    // Ids are small nonnegative integers; slots are indexed by id.
    Node& slot(int id);
    Node& make(int id, Node n);

    std::vector<Node> nodes_;
    int count_ = 0;
    int root_ = -1;
};

/// Labelling of nodes created by constructions: the variant decides whether
/// fresh terminals are decided (min M) or left undecided.
struct FreshPolicy {
    std::vector<int> M;
    TreeKind kind = TreeKind::Tc;

    int leaf_label() const { return kind == TreeKind::Ta ? M.front() : 0; }
    int min_degree() const { return M.front(); }
    /// Least degree >= 2, or 0 when M = {1}.
    int pairing_degree() const;
};

/// Source of fresh node ids shared by every step of one construction.
struct IdSource {
    int next = 0;
    int operator()() { return next++; }
};

// ---------------------------------------------------------------------------
// Extensions between LexTrees; f maps S into T.

enum class ExtensionKind { Identity, Terminal, NonTerminal, General };

std::string extension_kind_name(ExtensionKind k);

ExtensionKind classify_extension(const LexTree& S, const LexTree& T, const std::vector<int>& f);

struct PlantResult {
    LexTree tree;
    std::vector<int> base;     // S node -> result node
    std::vector<int> planted;  // P node -> result node
};

/// S with P planted at the terminal node s (the root of P identified with s).
PlantResult terminal_plant(const LexTree& S, int s, const LexTree& P);

struct PointedColumn {
    LexTree column;  // stacked bushes
    int point = 0;   // a top-level node
};

/// True for a tree that is a stack of bushes: every level but the top one
/// holds exactly one non-terminal node.
bool is_bush_column(const LexTree& c);

struct SurgeryResult {
    LexTree tree;
    std::vector<int> base;                 // S node -> result node
    std::map<int, std::vector<int>> columns;  // S node -> (column node -> result node)
};

/// Splices a pointed bush-column below every node of S at depth `level`,
/// identifying the point with the node; all columns must have equal height.
SurgeryResult tree_surgery(const LexTree& S, int level, const std::map<int, PointedColumn>& columns);

struct Decomposition {
    LexTree middle;              // T'
    std::vector<int> lower;      // S -> T', non-terminal
    std::vector<int> upper;      // T' -> T, terminal
};

/// Terminal nodes of T' keep their decided degree in T, except in the
/// undecided variant.
Decomposition decompose_extension(const LexTree& S, const LexTree& T, const std::vector<int>& f,
                                  TreeKind kind = TreeKind::Tc);

struct TerminalPart {
    int node = -1;  // node of the base
    LexTree planted;
};

struct TerminalForm {
    std::vector<TerminalPart> plantings;
    /// Base terminals that stay terminal but become decided: (node, degree).
    std::vector<std::pair<int, int>> decisions;
};

/// Canonical data of a terminal extension; throws InputError naming the
/// offending node when f is not terminal.
TerminalForm canonical_terminal_form(const LexTree& S, const LexTree& T, const std::vector<int>& f);

struct SurgeryLevel {
    int level = 0;                          // depth in the base
    std::map<int, PointedColumn> columns;   // base node -> column
};

struct NonTerminalForm {
    std::vector<SurgeryLevel> levels;  // ascending
    std::vector<std::pair<int, int>> decisions;
};

NonTerminalForm canonical_nonterminal_form(const LexTree& S, const LexTree& T, const std::vector<int>& f);

struct ExtensionForm {
    NonTerminalForm lower;
    Decomposition decomposition;
    TerminalForm upper;  // relative to decomposition.middle

    json to_json() const;
};

ExtensionForm extension_form(const LexTree& S, const LexTree& T, const std::vector<int>& f,
                             TreeKind kind = TreeKind::Tc);

struct Recomposed {
    LexTree tree;
    std::vector<int> inclusion;  // S -> tree
};

Recomposed recompose_terminal(const LexTree& S, const TerminalForm& form);
Recomposed recompose_nonterminal(const LexTree& S, const NonTerminalForm& form);
Recomposed recompose(const LexTree& S, const ExtensionForm& form);

/// Undecided terminal nodes s of S whose images under f1 and f2 are decided
/// with different degrees.
std::vector<int> nodes_of_incompatibility(const LexTree& S, const LexTree& T1, const std::vector<int>& f1,
                                          const LexTree& T2, const std::vector<int>& f2);

// ---------------------------------------------------------------------------
// One-step extensions.

struct TreeExtension {
    LexTree tree;
    std::vector<int> inclusion;
};

/// Every one-step extension of S: bushes planted at terminals (respecting
/// decided degrees), uniform surgeries (same degree and point index at every
/// node of a level), and decisions of single undecided terminals (unless the
/// variant forbids them). Results are capped at max_nodes.
std::vector<TreeExtension> one_step_extensions(const LexTree& S, TreeKind kind, int max_nodes);

/// A random composition of up to `steps` one-step extensions, each step
/// drawn from the planting, general surgery and decision moves.
TreeExtension random_extension(const LexTree& S, TreeKind kind, int max_nodes, int steps, Rng& rng);

} // namespace wfr
