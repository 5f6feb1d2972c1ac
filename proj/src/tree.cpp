#include "wfr/tree.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace wfr {

std::string TreeVariant::name() const
{
    std::string base = kind == TreeKind::Tw ? "tw" : kind == TreeKind::Ta ? "ta" : "tc";
    if (leveled)
        return base;
    return kind == TreeKind::Tc ? "leveless" : base + "-leveless";
}

TreeVariant TreeVariant::parse(const std::string& s)
{
    TreeVariant v;
    std::string base = s;
    const std::string suffix = "-leveless";
    if (s == "leveless") {
        v.leveled = false;
        return v;
    }
    if (base.size() > suffix.size() && base.compare(base.size() - suffix.size(), suffix.size(), suffix) == 0) {
        v.leveled = false;
        base.resize(base.size() - suffix.size());
    }
    if (base == "tw")
        v.kind = TreeKind::Tw;
    else if (base == "tc")
        v.kind = TreeKind::Tc;
    else if (base == "ta")
        v.kind = TreeKind::Ta;
    else
        throw InputError("unknown tree variant '" + s + "'");
    return v;
}

namespace {
    std::vector<int> normalize_M(std::vector<int> M)
    {
        std::sort(M.begin(), M.end());
        M.erase(std::unique(M.begin(), M.end()), M.end());
        for (int m : M)
            if (m <= 0)
                throw InputError("splitting degrees must be positive");
        return M;
    }
} // namespace

LexTree::LexTree(std::vector<int> M) : M_(normalize_M(std::move(M))) {}

LexTree LexTree::build(std::vector<int> M, const std::vector<std::vector<int>>& children,
                       const std::vector<int>& labels, int root, std::vector<int>* old_to_new)
{
    LexTree t(std::move(M));
    const int n = static_cast<int>(children.size());
    std::vector<int> renum(n, -1);
    if (root >= 0) {
        if (root >= n)
            throw InputError("tree root out of range");
        // Iterative preorder walk.
        std::vector<std::pair<int, int>> stack{{root, -1}};
        while (!stack.empty()) {
            auto [v, p] = stack.back();
            stack.pop_back();
            if (renum[v] >= 0)
                throw InputError("node " + std::to_string(v) + " reached twice; not a tree");
            int id = t.size();
            renum[v] = id;
            t.parent_.push_back(p);
            t.children_.emplace_back();
            t.label_.push_back(children[v].empty() ? labels[v] : static_cast<int>(children[v].size()));
            t.depth_.push_back(p < 0 ? 0 : t.depth_[p] + 1);
            t.end_.push_back(0);
            if (p >= 0)
                t.children_[p].push_back(id);
            for (auto it = children[v].rbegin(); it != children[v].rend(); ++it) {
                if (*it < 0 || *it >= n)
                    throw InputError("child index out of range");
                stack.push_back({*it, id});
            }
        }
        for (int v = t.size() - 1; v >= 0; --v) {
            t.end_[v] = t.children_[v].empty() ? v + 1 : t.end_[t.children_[v].back()];
        }
    }
    if (old_to_new)
        *old_to_new = std::move(renum);
    return t;
}

LexTree LexTree::single(std::vector<int> M, int label) { return build(std::move(M), {{}}, {label}, 0); }

LexTree LexTree::bush(std::vector<int> M, int degree, int leaf_label)
{
    if (!LexTree(M).allows(degree))
        throw InputError("bush degree " + std::to_string(degree) + " is not in M");
    std::vector<std::vector<int>> ch(degree + 1);
    for (int i = 1; i <= degree; ++i)
        ch[0].push_back(i);
    std::vector<int> labels(degree + 1, leaf_label);
    return build(std::move(M), ch, labels, 0);
}

LexTree LexTree::chain(std::vector<int> M, int n, int top_label)
{
    if (n == 0)
        return LexTree(std::move(M));
    if (n > 1 && !LexTree(M).allows(1))
        throw InputError("a chain needs 1 in M");
    std::vector<std::vector<int>> ch(n);
    for (int i = 0; i + 1 < n; ++i)
        ch[i].push_back(i + 1);
    std::vector<int> labels(n, 0);
    labels[n - 1] = top_label;
    return build(std::move(M), ch, labels, 0);
}

LexTree LexTree::balanced(std::vector<int> M, int m, int levels, int leaf_label)
{
    if (levels <= 0)
        return LexTree(std::move(M));
    if (levels > 1 && !LexTree(M).allows(m))
        throw InputError("splitting degree " + std::to_string(m) + " is not in M");
    std::vector<std::vector<int>> ch(1);
    std::vector<int> frontier{0};
    for (int l = 1; l < levels; ++l) {
        std::vector<int> next;
        for (int v : frontier)
            for (int i = 0; i < m; ++i) {
                int id = static_cast<int>(ch.size());
                ch.emplace_back();
                ch[v].push_back(id);
                next.push_back(id);
            }
        frontier = std::move(next);
    }
    std::vector<int> labels(ch.size(), leaf_label);
    return build(std::move(M), ch, labels, 0);
}

LexTree LexTree::parse(std::vector<int> M, const std::string& s)
{
    if (s.empty())
        return LexTree(std::move(M));
    std::vector<std::vector<int>> ch;
    std::vector<int> labels;
    std::size_t pos = 0;
    std::function<int()> node = [&]() -> int {
        if (pos >= s.size() || s[pos] != '(')
            throw InputError("bad canonical tree string at position " + std::to_string(pos));
        ++pos;
        int id = static_cast<int>(ch.size());
        ch.emplace_back();
        labels.push_back(0);
        int label = 0;
        bool has_label = false;
        while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
            label = label * 10 + (s[pos++] - '0');
            has_label = true;
        }
        while (pos < s.size() && s[pos] == '(') {
            int c = node();
            ch[id].push_back(c);
        }
        if (pos >= s.size() || s[pos] != ')')
            throw InputError("bad canonical tree string at position " + std::to_string(pos));
        ++pos;
        if (has_label && !ch[id].empty())
            throw InputError("label on a non-terminal node in canonical string");
        labels[id] = label;
        return id;
    };
    node();
    if (pos != s.size())
        throw InputError("trailing characters in canonical tree string");
    return build(std::move(M), ch, labels, 0);
}

bool LexTree::allows(int m) const { return std::binary_search(M_.begin(), M_.end(), m); }

int LexTree::height() const
{
    int h = 0;
    for (int d : depth_)
        h = std::max(h, d + 1);
    return h;
}

std::vector<int> LexTree::level(int d) const
{
    std::vector<int> out;
    for (int v = 0; v < size(); ++v)
        if (depth_[v] == d)
            out.push_back(v);
    return out;
}

int LexTree::child_index(int v) const
{
    int p = parent_[v];
    if (p < 0)
        return -1;
    auto& c = children_[p];
    return static_cast<int>(std::find(c.begin(), c.end(), v) - c.begin());
}

int LexTree::meet(int x, int y) const
{
    while (depth_[x] > depth_[y])
        x = parent_[x];
    while (depth_[y] > depth_[x])
        y = parent_[y];
    while (x != y) {
        x = parent_[x];
        y = parent_[y];
    }
    return x;
}

int LexTree::branch_of(int s, int t) const
{
    if (t <= s || t >= end_[s])
        return -1;
    auto& c = children_[s];
    for (std::size_t i = 0; i < c.size(); ++i)
        if (leq(c[i], t))
            return static_cast<int>(i);
    return -1;
}

bool LexTree::fully_decided() const
{
    for (int v = 0; v < size(); ++v)
        if (!decided(v))
            return false;
    return true;
}

std::string LexTree::canonical() const
{
    std::string out;
    if (empty())
        return out;
    // Preorder numbering: emit '(' on entry, ')' after the subtree.
    std::vector<int> open;
    for (int v = 0; v < size(); ++v) {
        while (!open.empty() && !leq(open.back(), v)) {
            out += ')';
            open.pop_back();
        }
        out += '(';
        if (terminal(v) && label_[v] != 0)
            out += std::to_string(label_[v]);
        open.push_back(v);
    }
    out.append(open.size(), ')');
    return out;
}

json LexTree::to_json() const
{
    json nodes = json::array();
    for (int v = 0; v < size(); ++v) {
        json n = {{"id", v}, {"parent", parent_[v] < 0 ? json(nullptr) : json(parent_[v])}, {"children", children_[v]}};
        if (terminal(v) && label_[v] != 0)
            n["dspl"] = label_[v];
        nodes.push_back(std::move(n));
    }
    return {{"M", M_}, {"nodes", nodes}};
}

namespace {
    struct RawTree {
        std::vector<int> M;
        std::vector<int> ids;
        std::vector<int> parent;  // indices, -1 for none
        std::vector<std::vector<int>> children;
        std::vector<int> dspl;    // 0 when absent
        int root = -1;
    };

    // Parses and checks everything but the M and variant rules.
    RawTree parse_raw(const json& j, std::vector<TreeViolation>& bad)
    {
        RawTree r;
        if (!j.is_object() || !j.contains("M") || !j.contains("nodes"))
            throw InputError("tree JSON needs \"M\" and \"nodes\"");
        try {
            r.M = j.at("M").get<std::vector<int>>();
            std::map<int, int> index;
            for (auto& n : j.at("nodes")) {
                int id = n.at("id").get<int>();
                if (index.count(id)) {
                    bad.push_back({id, "duplicate node id"});
                    continue;
                }
                index[id] = static_cast<int>(r.ids.size());
                r.ids.push_back(id);
            }
            const int n = static_cast<int>(r.ids.size());
            r.parent.assign(n, -1);
            r.children.assign(n, {});
            r.dspl.assign(n, 0);
            std::set<int> seen_ids;
            for (auto& node : j.at("nodes")) {
                int id = node.at("id").get<int>();
                if (!seen_ids.insert(id).second)
                    continue;
                int v = index.at(id);
                if (node.contains("parent") && !node.at("parent").is_null()) {
                    int p = node.at("parent").get<int>();
                    if (!index.count(p))
                        bad.push_back({id, "parent " + std::to_string(p) + " does not exist"});
                    else
                        r.parent[v] = index[p];
                }
                if (node.contains("children"))
                    for (auto& c : node.at("children")) {
                        int cid = c.get<int>();
                        if (!index.count(cid))
                            bad.push_back({id, "child " + std::to_string(cid) + " does not exist"});
                        else
                            r.children[v].push_back(index[cid]);
                    }
                if (node.contains("dspl") && !node.at("dspl").is_null())
                    r.dspl[v] = node.at("dspl").get<int>();
            }
        }
        catch (const json::exception& e) {
            throw InputError(std::string("bad tree JSON: ") + e.what());
        }
        const int n = static_cast<int>(r.ids.size());
        for (int v = 0; v < n; ++v) {
            if (r.parent[v] < 0) {
                if (r.root >= 0)
                    bad.push_back({r.ids[v], "second root"});
                else
                    r.root = v;
            }
            std::set<int> distinct(r.children[v].begin(), r.children[v].end());
            if (distinct.size() != r.children[v].size())
                bad.push_back({r.ids[v], "repeated child"});
            for (int c : r.children[v])
                if (r.parent[c] != v)
                    bad.push_back({r.ids[c], "listed as a child of " + std::to_string(r.ids[v]) + " but has another parent"});
            if (r.parent[v] >= 0) {
                auto& pc = r.children[r.parent[v]];
                if (std::find(pc.begin(), pc.end(), v) == pc.end())
                    bad.push_back({r.ids[v], "missing from its parent's child list"});
            }
            if (r.dspl[v] != 0 && !r.children[v].empty() && r.dspl[v] != static_cast<int>(r.children[v].size()))
                bad.push_back({r.ids[v], "dspl differs from the splitting degree of a non-terminal node"});
        }
        if (n > 0 && r.root < 0)
            bad.push_back({-1, "no root"});
        if (r.root >= 0 && bad.empty()) {
            // Reachability from the root.
            std::vector<bool> seen(n, false);
            std::vector<int> stack{r.root};
            int count = 0;
            while (!stack.empty()) {
                int v = stack.back();
                stack.pop_back();
                if (seen[v]) {
                    bad.push_back({r.ids[v], "cycle"});
                    break;
                }
                seen[v] = true;
                ++count;
                for (int c : r.children[v])
                    stack.push_back(c);
            }
            for (int v = 0; v < n && bad.empty(); ++v)
                if (!seen[v])
                    bad.push_back({r.ids[v], "not reachable from the root"});
        }
        return r;
    }
} // namespace

LexTree LexTree::from_json(const json& j, std::vector<int>* json_ids)
{
    std::vector<TreeViolation> bad;
    RawTree r = parse_raw(j, bad);
    if (!bad.empty())
        throw InputError("invalid tree: node " + std::to_string(bad.front().node) + ": " + bad.front().rule);
    std::vector<int> renum;
    LexTree t = build(r.M, r.children, r.dspl, r.root, &renum);
    if (json_ids) {
        json_ids->assign(t.size(), -1);
        for (std::size_t v = 0; v < renum.size(); ++v)
            if (renum[v] >= 0)
                (*json_ids)[renum[v]] = r.ids[v];
    }
    return t;
}

LexTree LexTree::with_label(int v, int label) const
{
    if (!terminal(v))
        throw InputError("only terminal nodes carry free labels");
    LexTree t = *this;
    t.label_[v] = label;
    return t;
}

std::vector<TreeViolation> validate(const LexTree& t, TreeKind kind)
{
    std::vector<TreeViolation> out;
    if (t.M().empty())
        out.push_back({-1, "M is empty"});
    for (int v = 0; v < t.size(); ++v) {
        if (!t.terminal(v)) {
            int k = static_cast<int>(t.children(v).size());
            if (!t.allows(k))
                out.push_back({v, "splitting degree " + std::to_string(k) + " not in M"});
            continue;
        }
        int l = t.label(v);
        if (l != 0 && !t.allows(l))
            out.push_back({v, "decided degree " + std::to_string(l) + " not in M"});
        if (kind == TreeKind::Tw && l != 0)
            out.push_back({v, "terminal node decided in the undecided variant"});
        if (kind == TreeKind::Ta && l == 0)
            out.push_back({v, "undecided terminal node in the decided variant"});
    }
    return out;
}

std::vector<TreeViolation> validate_json(const json& j, TreeKind kind)
{
    std::vector<TreeViolation> bad;
    RawTree r = parse_raw(j, bad);
    if (!bad.empty())
        return bad;
    std::vector<int> renum;
    LexTree t = LexTree::build(r.M, r.children, r.dspl, r.root, &renum);
    std::vector<int> back(t.size(), -1);
    for (std::size_t v = 0; v < renum.size(); ++v)
        if (renum[v] >= 0)
            back[renum[v]] = r.ids[v];
    for (auto v : validate(t, kind))
        bad.push_back({v.node < 0 ? -1 : back[v.node], v.rule});
    return bad;
}

json violations_json(const std::vector<TreeViolation>& v)
{
    json out = json::array();
    for (auto& x : v)
        out.push_back({{"node", x.node < 0 ? json(nullptr) : json(x.node)}, {"rule", x.rule}});
    return out;
}

std::vector<LexTree> enumerate_trees(const std::vector<int>& M_in, TreeKind kind, int n)
{
    auto M = normalize_M(M_in);
    if (n <= 0)
        return n == 0 ? std::vector<LexTree>{LexTree(M)} : std::vector<LexTree>{};
    std::vector<std::vector<std::string>> shapes(n + 1);
    if (kind != TreeKind::Ta)
        shapes[1].push_back("()");
    if (kind != TreeKind::Tw)
        for (int m : M)
            shapes[1].push_back("(" + std::to_string(m) + ")");
    for (int size = 2; size <= n; ++size) {
        for (int k : M) {
            if (k > size - 1)
                continue;
            // Compositions of size-1 into k positive parts, then products.
            std::vector<int> parts(k, 1);
            std::function<void(int, int)> compose = [&](int i, int left) {
                if (i == k - 1) {
                    parts[i] = left;
                    std::function<void(int, std::string)> product = [&](int c, std::string acc) {
                        if (c == k) {
                            shapes[size].push_back("(" + acc + ")");
                            return;
                        }
                        for (auto& s : shapes[parts[c]])
                            product(c + 1, acc + s);
                    };
                    product(0, "");
                    return;
                }
                for (int p = 1; p <= left - (k - 1 - i); ++p) {
                    parts[i] = p;
                    compose(i + 1, left - p);
                }
            };
            compose(0, size - 1);
        }
    }
    auto& mine = shapes[n];
    std::sort(mine.begin(), mine.end());
    std::vector<LexTree> out;
    out.reserve(mine.size());
    for (auto& s : mine)
        out.push_back(LexTree::parse(M, s));
    return out;
}

LexTree random_tree(const std::vector<int>& M_in, TreeKind kind, int max_nodes, Rng& rng)
{
    auto M = normalize_M(M_in);
    if (M.empty())
        throw InputError("random_tree: M is empty");
    if (max_nodes <= 0)
        return LexTree(M);
    int target = rng.uniform(1, max_nodes);
    std::vector<std::vector<int>> ch(1);
    std::vector<int> terminals{0};
    for (int attempt = 0; attempt < 4 * max_nodes && static_cast<int>(ch.size()) < target; ++attempt) {
        int pick = static_cast<int>(rng.below(terminals.size()));
        int k = M[rng.below(M.size())];
        if (static_cast<int>(ch.size()) + k > target)
            continue;
        int t = terminals[pick];
        terminals.erase(terminals.begin() + pick);
        for (int i = 0; i < k; ++i) {
            int id = static_cast<int>(ch.size());
            ch.emplace_back();
            ch[t].push_back(id);
            terminals.push_back(id);
        }
    }
    std::vector<int> labels(ch.size(), 0);
    for (std::size_t v = 0; v < ch.size(); ++v) {
        if (!ch[v].empty())
            continue;
        if (kind == TreeKind::Ta)
            labels[v] = M[rng.below(M.size())];
        else if (kind == TreeKind::Tc) {
            auto r = rng.below(M.size() + 1);
            labels[v] = r == 0 ? 0 : M[r - 1];
        }
    }
    return LexTree::build(M, ch, labels, 0);
}

std::string tree_diagram(const LexTree& t)
{
    std::ostringstream out;
    for (int v = 0; v < t.size(); ++v) {
        out << std::string(2 * t.depth(v), ' ') << v;
        if (t.terminal(v))
            out << (t.label(v) ? " [" + std::to_string(t.label(v)) + "]" : "");
        else
            out << " ->";
        for (int c : t.children(v))
            out << ' ' << c;
        out << '\n';
    }
    return out.str();
}

} // namespace wfr
