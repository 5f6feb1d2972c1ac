#include "wfr/tree_extension.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

#include "wfr/tree_morphism.hpp"

namespace wfr {

// ---------------------------------------------------------------------------
// IdTree

IdTree::Node& IdTree::slot(int id)
{
    if (!contains(id))
        throw std::logic_error("IdTree: unknown node " + std::to_string(id));
    return nodes_[id];
}

IdTree::Node& IdTree::make(int id, Node n)
{
    if (id < 0)
        throw std::logic_error("IdTree: negative node id");
    if (contains(id))
        throw std::logic_error("IdTree: duplicate node " + std::to_string(id));
    if (id >= static_cast<int>(nodes_.size()))
        nodes_.resize(std::max<std::size_t>(id + 1, 2 * nodes_.size()));
    n.live = true;
    nodes_[id] = std::move(n);
    ++count_;
    return nodes_[id];
}

IdTree::IdTree(const LexTree& t, const std::vector<int>& ids)
{
    for (int v = 0; v < t.size(); ++v) {
        Node n;
        n.parent = t.parent(v) < 0 ? -1 : ids[t.parent(v)];
        for (int c : t.children(v))
            n.children.push_back(ids[c]);
        n.label = t.terminal(v) ? t.label(v) : 0;
        make(ids[v], std::move(n));
    }
    if (!t.empty())
        root_ = ids[0];
}

const IdTree::Node& IdTree::node(int id) const
{
    if (!contains(id))
        throw std::logic_error("IdTree: unknown node " + std::to_string(id));
    return nodes_[id];
}

int IdTree::label(int id) const
{
    const Node& n = node(id);
    return n.children.empty() ? n.label : static_cast<int>(n.children.size());
}

int IdTree::depth(int id) const
{
    int d = 0;
    for (int p = parent(id); p >= 0; p = parent(p))
        ++d;
    return d;
}

std::vector<int> IdTree::preorder() const
{
    std::vector<int> out;
    if (root_ < 0)
        return out;
    out.reserve(count_);
    std::vector<int> stack{root_};
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        out.push_back(v);
        auto& kids = node(v).children;
        for (auto it = kids.rbegin(); it != kids.rend(); ++it)
            stack.push_back(*it);
    }
    return out;
}

std::vector<int> IdTree::level(int d) const
{
    std::vector<int> out;
    if (root_ < 0)
        return out;
    std::vector<int> current{root_};
    for (int i = 0; i < d && !current.empty(); ++i) {
        std::vector<int> next;
        for (int v : current)
            for (int c : node(v).children)
                next.push_back(c);
        current = std::move(next);
    }
    return current;
}

std::set<int> IdTree::ids() const
{
    std::set<int> out;
    for (int id = 0; id < static_cast<int>(nodes_.size()); ++id)
        if (nodes_[id].live)
            out.insert(out.end(), id);
    return out;
}

void IdTree::add_root(int id, int label)
{
    if (count_ > 0)
        throw std::logic_error("IdTree: root of a nonempty tree");
    make(id, Node{-1, {}, label});
    root_ = id;
}

void IdTree::add_child(int parent, int id, int label, int position)
{
    slot(parent);
    make(id, Node{parent, {}, label});
    auto& kids = nodes_[parent].children;
    if (position < 0 || position > static_cast<int>(kids.size()))
        kids.push_back(id);
    else
        kids.insert(kids.begin() + position, id);
}

void IdTree::insert_above(int x, int id)
{
    int p = parent(x);
    make(id, Node{p, {x}, 0});
    if (p >= 0) {
        auto& kids = nodes_[p].children;
        *std::find(kids.begin(), kids.end(), x) = id;
    }
    else {
        root_ = id;
    }
    nodes_[x].parent = id;
}

void IdTree::set_label(int id, int label) { slot(id).label = label; }

void IdTree::set_children(int p, std::vector<int> children)
{
    for (int c : children)
        slot(c).parent = p;
    slot(p).children = std::move(children);
}

IdTree IdTree::induced(const std::set<int>& keep) const
{
    IdTree out;
    if (keep.empty())
        return out;
    if (!keep.count(root_))
        throw std::logic_error("IdTree::induced: root not kept");
    for (int id : keep) {
        const Node& n = node(id);
        if (n.parent >= 0 && !keep.count(n.parent))
            throw std::logic_error("IdTree::induced: kept set not closed under parents");
        Node m{n.parent, {}, n.children.empty() ? n.label : static_cast<int>(n.children.size())};
        for (int c : n.children)
            if (keep.count(c))
                m.children.push_back(c);
        out.make(id, std::move(m));
    }
    out.root_ = root_;
    return out;
}

void IdTree::splice_column(int x, const LexTree& column, int point, const std::vector<int>& ids)
{
    if (column.size() < 2 || point <= 0 || !column.terminal(point))
        throw std::logic_error("IdTree::splice_column: bad pointed column");
    auto id_of = [&](int c) { return c == point ? x : ids[c]; };
    const int p = parent(x);
    const int top = ids[0];
    make(top, Node{p, {}, 0});
    if (p >= 0) {
        auto& kids = nodes_[p].children;
        *std::find(kids.begin(), kids.end(), x) = top;
    }
    else {
        root_ = top;
    }
    for (int c = 1; c < column.size(); ++c) {
        if (c == point)
            continue;
        make(ids[c], Node{id_of(column.parent(c)), {}, column.terminal(c) ? column.label(c) : 0});
    }
    nodes_[x].parent = id_of(column.parent(point));
    for (int c = 0; c < column.size(); ++c) {
        if (c == point)
            continue;
        auto& kids = nodes_[id_of(c)].children;
        for (int k : column.children(c))
            kids.push_back(id_of(k));
    }
}

LexTree IdTree::to_tree(const std::vector<int>& M, std::unordered_map<int, int>* id_to_node) const
{
    auto order = preorder();
    std::vector<int> index(nodes_.size(), -1);
    for (int i = 0; i < static_cast<int>(order.size()); ++i)
        index[order[i]] = i;
    std::vector<std::vector<int>> children(order.size());
    std::vector<int> labels(order.size());
    for (int i = 0; i < static_cast<int>(order.size()); ++i) {
        const Node& n = node(order[i]);
        for (int c : n.children)
            children[i].push_back(index[c]);
        labels[i] = n.label;
    }
    std::vector<int> renum;
    LexTree t = LexTree::build(M, children, labels, order.empty() ? -1 : 0, &renum);
    if (id_to_node) {
        id_to_node->clear();
        for (int i = 0; i < static_cast<int>(order.size()); ++i)
            (*id_to_node)[order[i]] = renum[i];
    }
    return t;
}

int FreshPolicy::pairing_degree() const
{
    for (int m : M)
        if (m >= 2)
            return m;
    return 0;
}

// ---------------------------------------------------------------------------
// Classification and decomposition

std::string extension_kind_name(ExtensionKind k)
{
    switch (k) {
    case ExtensionKind::Identity: return "identity";
    case ExtensionKind::Terminal: return "terminal";
    case ExtensionKind::NonTerminal: return "non-terminal";
    case ExtensionKind::General: return "general";
    }
    return "?";
}

namespace {
    std::vector<int> identity_ids(int n)
    {
        std::vector<int> ids(n);
        for (int i = 0; i < n; ++i)
            ids[i] = i;
        return ids;
    }

    void require_extension(const LexTree& S, const LexTree& T, const std::vector<int>& f)
    {
        auto v = morphism_violations(S, T, f, MorphismFlags{true, true, true});
        if (!v.empty())
            throw InputError("not an extension: " + v.front());
    }

    // First T node outside the image whose parent lies in it, scanning in
    // order; -1 when the image is closed under parents.
    int first_lower_gap(const LexTree& S, const LexTree& T, const std::vector<int>& f)
    {
        std::vector<bool> in(T.size(), false);
        for (int t : f)
            in[t] = true;
        if (S.empty())
            return -1;
        if (f[0] != 0)
            return T.parent(f[0]) < 0 ? 0 : T.parent(f[0]);
        for (int s = 0; s < S.size(); ++s) {
            int p = T.parent(f[s]);
            if (p >= 0 && !in[p])
                return p;
        }
        return -1;
    }

    // The node set S'' of the canonical decomposition, as T nodes.
    std::vector<bool> middle_nodes(const LexTree& T, const std::vector<int>& f)
    {
        std::vector<bool> image(T.size(), false), lower(T.size(), false);
        for (int t : f)
            image[t] = true;
        for (int t : f)
            for (int u = t; u >= 0 && !lower[u]; u = T.parent(u))
                lower[u] = true;
        std::vector<bool> middle = lower;
        for (int u = 0; u < T.size(); ++u)
            if (lower[u] && !image[u])
                for (int c : T.children(u))
                    middle[c] = true;
        return middle;
    }

    int middle_label(const LexTree& T, int v, TreeKind kind)
    {
        if (T.terminal(v))
            return T.label(v);
        return kind == TreeKind::Tw ? 0 : T.label(v);
    }

    LexTree subtree_at(const LexTree& T, int v)
    {
        std::vector<std::vector<int>> ch(T.size());
        std::vector<int> labels(T.size());
        for (int u = 0; u < T.size(); ++u) {
            ch[u] = T.children(u);
            labels[u] = T.label(u);
        }
        return LexTree::build(T.M(), ch, labels, v);
    }

    std::vector<std::pair<int, int>> decisions_of(const LexTree& S, const LexTree& T, const std::vector<int>& f)
    {
        std::vector<std::pair<int, int>> out;
        for (int s = 0; s < S.size(); ++s)
            if (S.terminal(s) && T.terminal(f[s]) && S.label(s) != T.label(f[s]))
                out.push_back({s, T.label(f[s])});
        return out;
    }
} // namespace

ExtensionKind classify_extension(const LexTree& S, const LexTree& T, const std::vector<int>& f)
{
    require_extension(S, T, f);
    if (S.size() == T.size())
        return ExtensionKind::Identity;
    if (first_lower_gap(S, T, f) < 0)
        return ExtensionKind::Terminal;
    auto middle = middle_nodes(T, f);
    if (std::all_of(middle.begin(), middle.end(), [](bool b) { return b; }))
        return ExtensionKind::NonTerminal;
    return ExtensionKind::General;
}

PlantResult terminal_plant(const LexTree& S, int s, const LexTree& P)
{
    if (S.empty())
        throw InputError("planting into the empty tree");
    if (s < 0 || s >= S.size())
        throw InputError("planting node out of range");
    if (!S.terminal(s))
        throw InputError("node " + std::to_string(s) + " is not terminal");
    if (P.empty())
        throw InputError("planting the empty tree");
    if (P.M() != S.M())
        throw InputError("planted tree has a different M");
    const int top = P.label(0);
    if (S.decided(s) && top != 0 && top != S.label(s))
        throw InputError("node " + std::to_string(s) + ": decided degree " + std::to_string(S.label(s))
                         + " clashes with the planted root");

    const int n = S.size();
    std::vector<std::vector<int>> ch(n + P.size());
    std::vector<int> labels(n + P.size(), 0);
    for (int v = 0; v < n; ++v) {
        ch[v] = S.children(v);
        labels[v] = S.label(v);
    }
    auto pid = [&](int p) { return p == 0 ? s : n + p; };
    for (int p = 0; p < P.size(); ++p) {
        for (int c : P.children(p))
            ch[pid(p)].push_back(pid(c));
        if (p > 0)
            labels[n + p] = P.label(p);
    }
    if (P.terminal(0) && top != 0)
        labels[s] = top;
    std::vector<int> renum;
    PlantResult r;
    r.tree = LexTree::build(S.M(), ch, labels, 0, &renum);
    r.base.resize(n);
    for (int v = 0; v < n; ++v)
        r.base[v] = renum[v];
    r.planted.resize(P.size());
    for (int p = 0; p < P.size(); ++p)
        r.planted[p] = renum[pid(p)];
    return r;
}

bool is_bush_column(const LexTree& c)
{
    if (c.size() < 2)
        return false;
    const int h = c.height();
    for (int d = 0; d + 1 < h; ++d) {
        int inner = 0;
        for (int v : c.level(d))
            if (!c.terminal(v))
                ++inner;
        if (inner != 1)
            return false;
    }
    for (int v : c.level(h - 1))
        if (!c.terminal(v))
            return false;
    return true;
}

SurgeryResult tree_surgery(const LexTree& S, int level, const std::map<int, PointedColumn>& columns)
{
    if (S.empty())
        throw InputError("surgery on the empty tree");
    auto nodes = S.level(level);
    if (nodes.empty())
        throw InputError("level " + std::to_string(level) + " is empty");
    int height = -1;
    for (int s : nodes) {
        auto it = columns.find(s);
        if (it == columns.end())
            throw InputError("node " + std::to_string(s) + " has no column");
        const auto& pc = it->second;
        if (pc.column.M() != S.M())
            throw InputError("column for node " + std::to_string(s) + " has a different M");
        if (!is_bush_column(pc.column))
            throw InputError("column for node " + std::to_string(s) + " is not a bush column");
        if (pc.point <= 0 || pc.point >= pc.column.size()
            || pc.column.depth(pc.point) != pc.column.height() - 1)
            throw InputError("column for node " + std::to_string(s) + ": point is not a top-level node");
        if (height >= 0 && pc.column.height() != height)
            throw InputError("column for node " + std::to_string(s) + ": height mismatch");
        height = pc.column.height();
        int pl = pc.column.label(pc.point);
        if (pl != 0 && S.label(s) != 0 && pl != S.label(s))
            throw InputError("column for node " + std::to_string(s) + ": point label clashes");
    }
    for (auto& [s, pc] : columns)
        if (s < 0 || s >= S.size() || S.depth(s) != level)
            throw InputError("column assigned to node " + std::to_string(s) + " outside the level");

    IdTree t(S, identity_ids(S.size()));
    IdSource fresh{S.size()};
    std::map<int, std::vector<int>> ids;
    for (int s : nodes) {
        const auto& pc = columns.at(s);
        std::vector<int> cid(pc.column.size());
        for (int c = 0; c < pc.column.size(); ++c)
            cid[c] = c == pc.point ? s : fresh();
        t.splice_column(s, pc.column, pc.point, cid);
        int pl = pc.column.label(pc.point);
        if (pl != 0 && S.terminal(s))
            t.set_label(s, pl);
        ids[s] = std::move(cid);
    }
    std::unordered_map<int, int> to;
    SurgeryResult r;
    r.tree = t.to_tree(S.M(), &to);
    r.base.resize(S.size());
    for (int v = 0; v < S.size(); ++v)
        r.base[v] = to.at(v);
    for (auto& [s, cid] : ids) {
        std::vector<int> m(cid.size());
        for (std::size_t c = 0; c < cid.size(); ++c)
            m[c] = to.at(cid[c]);
        r.columns[s] = std::move(m);
    }
    return r;
}

Decomposition decompose_extension(const LexTree& S, const LexTree& T, const std::vector<int>& f, TreeKind kind)
{
    require_extension(S, T, f);
    auto middle = middle_nodes(T, f);
    std::vector<std::vector<int>> ch(T.size());
    std::vector<int> labels(T.size(), 0);
    for (int v = 0; v < T.size(); ++v) {
        if (!middle[v])
            continue;
        for (int c : T.children(v))
            if (middle[c])
                ch[v].push_back(c);
        labels[v] = middle_label(T, v, kind);
    }
    std::vector<int> renum;
    Decomposition d;
    d.middle = LexTree::build(T.M(), ch, labels, T.empty() ? -1 : 0, &renum);
    if (S.empty()) {
        d.middle = LexTree(T.M());
        d.upper.clear();
        return d;
    }
    d.lower.resize(S.size());
    for (int s = 0; s < S.size(); ++s)
        d.lower[s] = renum[f[s]];
    d.upper.assign(d.middle.size(), -1);
    for (int v = 0; v < T.size(); ++v)
        if (middle[v])
            d.upper[renum[v]] = v;
    return d;
}

// ---------------------------------------------------------------------------
// Canonical forms

TerminalForm canonical_terminal_form(const LexTree& S, const LexTree& T, const std::vector<int>& f)
{
    require_extension(S, T, f);
    TerminalForm form;
    if (S.empty()) {
        if (!T.empty())
            form.plantings.push_back({-1, T});
        return form;
    }
    int gap = first_lower_gap(S, T, f);
    if (gap >= 0)
        throw InputError("not a terminal extension: node " + std::to_string(gap) + " of T lies below S");
    std::vector<int> pre(T.size(), -1);
    for (int s = 0; s < S.size(); ++s)
        pre[f[s]] = s;
    for (int s = 0; s < S.size(); ++s) {
        int t = f[s];
        if (S.terminal(s) && !T.terminal(t))
            form.plantings.push_back({s, subtree_at(T, t)});
    }
    form.decisions = decisions_of(S, T, f);
    return form;
}

NonTerminalForm canonical_nonterminal_form(const LexTree& S, const LexTree& T, const std::vector<int>& f)
{
    require_extension(S, T, f);
    auto middle = middle_nodes(T, f);
    for (int v = 0; v < T.size(); ++v)
        if (!middle[v])
            throw InputError("not a non-terminal extension: node " + std::to_string(v)
                             + " of T lies above a terminal node of S");
    NonTerminalForm form;
    std::vector<bool> image(T.size(), false);
    for (int t : f)
        image[t] = true;
    for (int d = 0, h = S.height(); d < h; ++d) {
        auto nodes = S.level(d);
        auto gap_of = [&](int s) {
            int below = S.parent(s) < 0 ? -1 : T.depth(f[S.parent(s)]);
            return T.depth(f[s]) - below - 1;
        };
        int h_col = gap_of(nodes.front());
        if (h_col == 0)
            continue;
        SurgeryLevel lvl;
        lvl.level = d;
        for (int s : nodes) {
            // Path from the image of s down to just above the image of its parent.
            std::vector<int> path;
            for (int u = T.parent(f[s]); u >= 0 && !image[u]; u = T.parent(u))
                path.push_back(u);
            std::reverse(path.begin(), path.end());
            std::vector<bool> on_path(T.size(), false);
            for (int u : path)
                on_path[u] = true;
            std::vector<int> index(T.size(), -1);
            std::vector<std::vector<int>> ch;
            std::vector<int> labels;
            std::function<int(int)> add = [&](int u) {
                int i = static_cast<int>(ch.size());
                index[u] = i;
                ch.emplace_back();
                labels.push_back(on_path[u] || u == f[s] ? 0 : T.label(u));
                if (on_path[u])
                    for (int c : T.children(u)) {
                        int j = add(c);
                        ch[i].push_back(j);
                    }
                return i;
            };
            add(path.front());
            std::vector<int> renum;
            PointedColumn pc;
            pc.column = LexTree::build(T.M(), ch, labels, 0, &renum);
            pc.point = renum[index[f[s]]];
            lvl.columns[s] = std::move(pc);
        }
        form.levels.push_back(std::move(lvl));
    }
    form.decisions = decisions_of(S, T, f);
    return form;
}

ExtensionForm extension_form(const LexTree& S, const LexTree& T, const std::vector<int>& f, TreeKind kind)
{
    ExtensionForm form;
    form.decomposition = decompose_extension(S, T, f, kind);
    form.lower = canonical_nonterminal_form(S, form.decomposition.middle, form.decomposition.lower);
    form.upper = canonical_terminal_form(form.decomposition.middle, T, form.decomposition.upper);
    return form;
}

json ExtensionForm::to_json() const
{
    json levels = json::array();
    for (auto& l : lower.levels) {
        json cols = json::array();
        for (auto& [s, pc] : l.columns)
            cols.push_back({{"node", s}, {"column", pc.column.canonical()}, {"point", pc.point}});
        levels.push_back({{"level", l.level}, {"columns", cols}});
    }
    json plantings = json::array();
    for (auto& p : upper.plantings)
        plantings.push_back({{"node", p.node}, {"tree", p.planted.canonical()}});
    auto decisions = [](const std::vector<std::pair<int, int>>& d) {
        json a = json::array();
        for (auto& [s, m] : d)
            a.push_back({{"node", s}, {"dspl", m}});
        return a;
    };
    return {{"surgeries", levels},
            {"surgery_decisions", decisions(lower.decisions)},
            {"middle", decomposition.middle.canonical()},
            {"plantings", plantings},
            {"planting_decisions", decisions(upper.decisions)}};
}

Recomposed recompose_terminal(const LexTree& S, const TerminalForm& form)
{
    Recomposed r{S, identity_ids(S.size())};
    for (auto& p : form.plantings) {
        if (p.node < 0) {
            if (!S.empty())
                throw InputError("planting without a node into a nonempty tree");
            r.tree = p.planted;
            continue;
        }
        auto res = terminal_plant(r.tree, r.inclusion[p.node], p.planted);
        r.inclusion = compose_maps(res.base, r.inclusion);
        r.tree = std::move(res.tree);
    }
    for (auto& [s, m] : form.decisions)
        r.tree = r.tree.with_label(r.inclusion[s], m);
    return r;
}

Recomposed recompose_nonterminal(const LexTree& S, const NonTerminalForm& form)
{
    Recomposed r{S, identity_ids(S.size())};
    for (auto it = form.levels.rbegin(); it != form.levels.rend(); ++it) {
        std::map<int, PointedColumn> cols;
        for (auto& [s, pc] : it->columns)
            cols[r.inclusion[s]] = pc;
        auto res = tree_surgery(r.tree, it->level, cols);
        r.inclusion = compose_maps(res.base, r.inclusion);
        r.tree = std::move(res.tree);
    }
    for (auto& [s, m] : form.decisions)
        r.tree = r.tree.with_label(r.inclusion[s], m);
    return r;
}

Recomposed recompose(const LexTree& S, const ExtensionForm& form)
{
    Recomposed lower = recompose_nonterminal(S, form.lower);
    if (!(lower.tree == form.decomposition.middle))
        throw std::logic_error("recompose: surgery data does not rebuild the middle tree");
    Recomposed upper = recompose_terminal(lower.tree, form.upper);
    return {std::move(upper.tree), compose_maps(upper.inclusion, lower.inclusion)};
}

std::vector<int> nodes_of_incompatibility(const LexTree& S, const LexTree& T1, const std::vector<int>& f1,
                                          const LexTree& T2, const std::vector<int>& f2)
{
    if (static_cast<int>(f1.size()) != S.size() || static_cast<int>(f2.size()) != S.size())
        throw InputError("the two extensions have different sources");
    std::vector<int> out;
    for (int s = 0; s < S.size(); ++s) {
        if (S.decided(s))
            continue;
        int a = T1.label(f1[s]), b = T2.label(f2[s]);
        if (a != 0 && b != 0 && a != b)
            out.push_back(s);
    }
    return out;
}

// ---------------------------------------------------------------------------
// One-step extensions

namespace {
    std::vector<int> leaf_choices(const std::vector<int>& M, TreeKind kind)
    {
        std::vector<int> out;
        if (kind != TreeKind::Ta)
            out.push_back(0);
        if (kind != TreeKind::Tw)
            out.insert(out.end(), M.begin(), M.end());
        return out;
    }

    // Single pointed bush of the given degree: leaves get `leaf`, the point 0.
    PointedColumn pointed_bush(const std::vector<int>& M, int degree, int point, int leaf)
    {
        PointedColumn pc;
        pc.column = LexTree::bush(M, degree, leaf).with_label(point + 1, 0);
        pc.point = point + 1;
        return pc;
    }
} // namespace

std::vector<TreeExtension> one_step_extensions(const LexTree& S, TreeKind kind, int max_nodes)
{
    const auto& M = S.M();
    FreshPolicy policy{M, kind};
    std::vector<TreeExtension> out;
    if (S.empty()) {
        if (max_nodes >= 1)
            for (int l : leaf_choices(M, kind))
                out.push_back({LexTree::single(M, l), {}});
        return out;
    }
    for (int s = 0; s < S.size(); ++s) {
        if (!S.terminal(s))
            continue;
        for (int k : M) {
            if (S.decided(s) && S.label(s) != k)
                continue;
            if (S.size() + k > max_nodes)
                continue;
            auto res = terminal_plant(S, s, LexTree::bush(M, k, policy.leaf_label()));
            out.push_back({std::move(res.tree), std::move(res.base)});
        }
    }
    for (int d = 0, h = S.height(); d < h; ++d) {
        auto nodes = S.level(d);
        for (int k : M) {
            if (S.size() + static_cast<int>(nodes.size()) * k > max_nodes)
                continue;
            for (int p = 0; p < k; ++p) {
                std::map<int, PointedColumn> cols;
                for (int s : nodes)
                    cols[s] = pointed_bush(M, k, p, policy.leaf_label());
                auto res = tree_surgery(S, d, cols);
                out.push_back({std::move(res.tree), std::move(res.base)});
            }
        }
    }
    if (kind == TreeKind::Tc)
        for (int s = 0; s < S.size(); ++s)
            if (S.terminal(s) && !S.decided(s))
                for (int m : M)
                    out.push_back({S.with_label(s, m), identity_ids(S.size())});
    return out;
}

TreeExtension random_extension(const LexTree& S, TreeKind kind, int max_nodes, int steps, Rng& rng)
{
    const auto& M = S.M();
    auto labels = leaf_choices(M, kind);
    auto draw_label = [&] { return labels[rng.below(labels.size())]; };
    TreeExtension cur{S, identity_ids(S.size())};
    if (cur.tree.empty()) {
        if (max_nodes < 1)
            return cur;
        cur.tree = LexTree::single(M, draw_label());
    }
    for (int step = 0; step < steps; ++step) {
        const int move = static_cast<int>(rng.below(kind == TreeKind::Tc ? 3 : 2));
        if (move == 0) {
            std::vector<int> terms;
            for (int v = 0; v < cur.tree.size(); ++v)
                if (cur.tree.terminal(v))
                    terms.push_back(v);
            int s = terms[rng.below(terms.size())];
            int k = cur.tree.decided(s) ? cur.tree.label(s) : M[rng.below(M.size())];
            if (cur.tree.size() + k > max_nodes)
                continue;
            std::vector<std::vector<int>> ch{{}};
            std::vector<int> lab{0};
            for (int i = 0; i < k; ++i) {
                ch[0].push_back(i + 1);
                ch.emplace_back();
                lab.push_back(draw_label());
            }
            auto res = terminal_plant(cur.tree, s, LexTree::build(M, ch, lab, 0));
            cur.inclusion = compose_maps(res.base, cur.inclusion);
            cur.tree = std::move(res.tree);
        }
        else if (move == 1) {
            int d = static_cast<int>(rng.below(cur.tree.height()));
            auto nodes = cur.tree.level(d);
            std::map<int, PointedColumn> cols;
            int added = 0;
            for (int s : nodes) {
                int k = M[rng.below(M.size())];
                int p = static_cast<int>(rng.below(k));
                std::vector<std::vector<int>> ch{{}};
                std::vector<int> lab{0};
                for (int i = 0; i < k; ++i) {
                    ch[0].push_back(i + 1);
                    ch.emplace_back();
                    lab.push_back(i == p ? 0 : draw_label());
                }
                cols[s] = {LexTree::build(M, ch, lab, 0), p + 1};
                added += k;
            }
            if (cur.tree.size() + added > max_nodes)
                continue;
            auto res = tree_surgery(cur.tree, d, cols);
            cur.inclusion = compose_maps(res.base, cur.inclusion);
            cur.tree = std::move(res.tree);
        }
        else {
            std::vector<int> open;
            for (int v = 0; v < cur.tree.size(); ++v)
                if (cur.tree.terminal(v) && !cur.tree.decided(v))
                    open.push_back(v);
            if (open.empty())
                continue;
            int s = open[rng.below(open.size())];
            cur.tree = cur.tree.with_label(s, M[rng.below(M.size())]);
        }
    }
    return cur;
}

} // namespace wfr
