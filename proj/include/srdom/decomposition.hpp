#pragma once

#include <algorithm>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "graph.hpp"

namespace srdom {

/// Bags are kept sorted by vertex id; bag i corresponds to `.td` bag id i+1.
struct tree_decomposition {
    int vertex_count = 0;
    std::vector<std::vector<vertex>> bags;
    std::vector<std::pair<int, int>> tree_edges;

    int max_bag_size() const
    {
        std::size_t best = 0;
        for (const auto& bag : bags)
            best = std::max(best, bag.size());
        return static_cast<int>(best);
    }

    int width() const { return max_bag_size() - 1; }

    friend bool operator==(const tree_decomposition&, const tree_decomposition&) = default;
};

struct decomposition_violation {
    enum class kind {
        vertex_count_mismatch,
        vertex_out_of_range,
        not_a_tree,
        vertex_missing,
        edge_uncovered,
        disconnected_occurrence,
        bad_node,
    };
    kind what;
    vertex u = -1;
    vertex v = -1;
    int node = -1;
    std::string detail;
};

/// Human-readable witness line; vertex ids printed 1-indexed as in the file formats.
inline std::string describe(const decomposition_violation& violation)
{
    using k = decomposition_violation::kind;
    switch (violation.what) {
    case k::vertex_count_mismatch: return "vertex count mismatch: " + violation.detail;
    case k::vertex_out_of_range: return "bag " + std::to_string(violation.node + 1) + " holds out-of-range vertex";
    case k::not_a_tree: return "bag graph is not a tree: " + violation.detail;
    case k::vertex_missing: return "vertex " + std::to_string(violation.u + 1) + " is in no bag";
    case k::edge_uncovered:
        return "edge " + std::to_string(violation.u + 1) + "-" + std::to_string(violation.v + 1) + " is in no bag";
    case k::disconnected_occurrence:
        return "bags containing vertex " + std::to_string(violation.u + 1) + " are disconnected";
    case k::bad_node: return "node " + std::to_string(violation.node) + ": " + violation.detail;
    }
    return "unknown violation";
}

namespace detail {

    inline bool forms_tree(int nodes, const std::vector<std::pair<int, int>>& edges, std::string& why)
    {
        if (nodes == 0) {
            if (!edges.empty())
                why = "edges without bags";
            return edges.empty();
        }
        if (static_cast<int>(edges.size()) != nodes - 1) {
            why = std::to_string(nodes) + " bags but " + std::to_string(edges.size()) + " edges";
            return false;
        }
        std::vector<int> parent(nodes);
        for (int i = 0; i < nodes; ++i)
            parent[i] = i;
        auto find = [&](int x) {
            while (parent[x] != x)
                x = parent[x] = parent[parent[x]];
            return x;
        };
        for (auto [a, b] : edges) {
            if (a < 0 || b < 0 || a >= nodes || b >= nodes) {
                why = "edge endpoint out of range";
                return false;
            }
            int ra = find(a), rb = find(b);
            if (ra == rb) {
                why = "cycle through bags " + std::to_string(a + 1) + " and " + std::to_string(b + 1);
                return false;
            }
            parent[ra] = rb;
        }
        return true;
    }

    inline std::vector<std::vector<int>> adjacency(int nodes, const std::vector<std::pair<int, int>>& edges)
    {
        std::vector<std::vector<int>> adj(nodes);
        for (auto [a, b] : edges) {
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
        for (auto& list : adj)
            std::sort(list.begin(), list.end());
        return adj;
    }

} // namespace detail

/// Checks the three tree-decomposition properties; an empty result means valid.
inline std::vector<decomposition_violation> validate(const tree_decomposition& td, const graph& g)
{
    using k = decomposition_violation::kind;
    std::vector<decomposition_violation> out;
    const int n = g.vertex_count();
    const int nodes = static_cast<int>(td.bags.size());
    if (td.vertex_count != n)
        out.push_back({k::vertex_count_mismatch, -1, -1, -1,
            "decomposition has " + std::to_string(td.vertex_count) + ", graph has " + std::to_string(n)});

    std::vector<std::vector<int>> occurrences(n);
    for (int b = 0; b < nodes; ++b) {
        for (vertex v : td.bags[b]) {
            if (v < 0 || v >= n) {
                out.push_back({k::vertex_out_of_range, v, -1, b, {}});
                continue;
            }
            occurrences[v].push_back(b);
        }
    }

    std::string why;
    bool is_tree = detail::forms_tree(nodes, td.tree_edges, why);
    if (!is_tree)
        out.push_back({k::not_a_tree, -1, -1, -1, why});

    for (vertex v = 0; v < n; ++v)
        if (occurrences[v].empty())
            out.push_back({k::vertex_missing, v, -1, -1, {}});

    auto in_bag = [&](int b, vertex v) {
        const auto& bag = td.bags[b];
        return std::binary_search(bag.begin(), bag.end(), v);
    };
    for (auto [u, v] : g.edges()) {
        bool covered = false;
        for (int b : occurrences[u])
            if (in_bag(b, v)) {
                covered = true;
                break;
            }
        if (!covered)
            out.push_back({k::edge_uncovered, u, v, -1, {}});
    }

    bool edges_in_range = std::all_of(td.tree_edges.begin(), td.tree_edges.end(),
        [&](auto e) { return e.first >= 0 && e.second >= 0 && e.first < nodes && e.second < nodes; });
    if (edges_in_range) {
        auto adj = detail::adjacency(nodes, td.tree_edges);
        std::vector<char> seen(nodes, 0);
        for (vertex v = 0; v < n; ++v) {
            const auto& occ = occurrences[v];
            if (occ.size() < 2)
                continue;
            std::vector<int> stack{occ.front()};
            std::fill(seen.begin(), seen.end(), 0);
            seen[occ.front()] = 1;
            std::size_t reached = 1;
            while (!stack.empty()) {
                int b = stack.back();
                stack.pop_back();
                for (int c : adj[b])
                    if (!seen[c] && in_bag(c, v)) {
                        seen[c] = 1;
                        ++reached;
                        stack.push_back(c);
                    }
            }
            if (reached != occ.size())
                out.push_back({k::disconnected_occurrence, v, -1, -1, {}});
        }
    }
    return out;
}

inline tree_decomposition trivial_decomposition(const graph& g)
{
    tree_decomposition td;
    td.vertex_count = g.vertex_count();
    if (g.vertex_count() == 0)
        return td;
    std::vector<vertex> all(g.vertex_count());
    for (vertex v = 0; v < g.vertex_count(); ++v)
        all[v] = v;
    td.bags.push_back(std::move(all));
    return td;
}

enum class node_kind { leaf, introduce, forget, join };

inline const char* to_string(node_kind kind)
{
    switch (kind) {
    case node_kind::leaf: return "leaf";
    case node_kind::introduce: return "introduce";
    case node_kind::forget: return "forget";
    case node_kind::join: return "join";
    }
    return "?";
}

struct nice_node {
    node_kind kind = node_kind::leaf;
    vertex v = -1;             // introduced or forgotten vertex
    std::vector<vertex> bag;   // ascending
    std::vector<int> children; // one for introduce/forget, two for join
};

/// Rooted nice tree decomposition. Children always precede their parent in `nodes`.
struct nice_tree_decomposition {
    int vertex_count = 0;
    std::vector<nice_node> nodes;
    int root = -1;

    int width() const
    {
        std::size_t best = 0;
        for (const auto& node : nodes)
            best = std::max(best, node.bag.size());
        return static_cast<int>(best) - 1;
    }

    /// Post-order of the subtree under `top` (children before parents, left before right).
    std::vector<int> postorder(int top) const
    {
        std::vector<int> order;
        std::vector<std::pair<int, std::size_t>> stack{{top, 0}};
        while (!stack.empty()) {
            auto& [node, next] = stack.back();
            if (next < nodes[node].children.size()) {
                int child = nodes[node].children[next++];
                stack.emplace_back(child, 0);
            } else {
                order.push_back(node);
                stack.pop_back();
            }
        }
        return order;
    }

    std::vector<int> postorder() const { return root < 0 ? std::vector<int>{} : postorder(root); }

    /// Parent index per node, -1 for the root.
    std::vector<int> parents() const
    {
        std::vector<int> parent(nodes.size(), -1);
        for (std::size_t i = 0; i < nodes.size(); ++i)
            for (int c : nodes[i].children)
                parent[c] = static_cast<int>(i);
        return parent;
    }
};

/// Plain tree decomposition carrying the nice tree's bags; node i becomes bag i.
inline tree_decomposition to_tree_decomposition(const nice_tree_decomposition& ntd)
{
    tree_decomposition td;
    td.vertex_count = ntd.vertex_count;
    for (std::size_t i = 0; i < ntd.nodes.size(); ++i) {
        td.bags.push_back(ntd.nodes[i].bag);
        for (int c : ntd.nodes[i].children)
            td.tree_edges.emplace_back(static_cast<int>(i), c);
    }
    return td;
}

/// Node-shape checks plus the decomposition properties of the underlying bags.
inline std::vector<decomposition_violation> validate_nice(const nice_tree_decomposition& ntd, const graph& g)
{
    using k = decomposition_violation::kind;
    std::vector<decomposition_violation> out;
    auto bad = [&](int node, std::string detail) { out.push_back({k::bad_node, -1, -1, node, std::move(detail)}); };
    const int count = static_cast<int>(ntd.nodes.size());
    if (count == 0 || ntd.root < 0 || ntd.root >= count) {
        bad(ntd.root, "missing root");
        return out;
    }
    if (!ntd.nodes[ntd.root].bag.empty())
        bad(ntd.root, "root bag is not empty");
    for (int i = 0; i < count; ++i) {
        const auto& node = ntd.nodes[i];
        if (!std::is_sorted(node.bag.begin(), node.bag.end())
            || std::adjacent_find(node.bag.begin(), node.bag.end()) != node.bag.end())
            bad(i, "bag not strictly ascending");
        for (int c : node.children)
            if (c < 0 || c >= i) {
                bad(i, "child index out of order");
                return out;
            }
        auto child_bag = [&](std::size_t j) -> const std::vector<vertex>& { return ntd.nodes[node.children[j]].bag; };
        auto with_v = [&](std::vector<vertex> bag) {
            bag.insert(std::upper_bound(bag.begin(), bag.end(), node.v), node.v);
            return bag;
        };
        switch (node.kind) {
        case node_kind::leaf:
            if (!node.children.empty() || !node.bag.empty())
                bad(i, "leaf must have no children and an empty bag");
            break;
        case node_kind::introduce:
            if (node.children.size() != 1)
                bad(i, "introduce needs one child");
            else if (std::binary_search(child_bag(0).begin(), child_bag(0).end(), node.v)
                || with_v(child_bag(0)) != node.bag)
                bad(i, "introduce bag is not child bag plus v");
            break;
        case node_kind::forget:
            if (node.children.size() != 1)
                bad(i, "forget needs one child");
            else if (std::binary_search(node.bag.begin(), node.bag.end(), node.v) || with_v(node.bag) != child_bag(0))
                bad(i, "forget bag is not child bag minus v");
            break;
        case node_kind::join:
            if (node.children.size() != 2)
                bad(i, "join needs two children");
            else if (child_bag(0) != node.bag || child_bag(1) != node.bag)
                bad(i, "join children bags differ");
            break;
        }
    }
    auto parent = ntd.parents();
    std::vector<int> holders(count, 0);
    for (const auto& node : ntd.nodes)
        for (int c : node.children)
            ++holders[c];
    for (int i = 0; i < count; ++i)
        if ((i == ntd.root) != (holders[i] == 0) || holders[i] > 1)
            bad(i, "node is not part of a single rooted tree");
    if (static_cast<int>(ntd.postorder().size()) != count)
        bad(ntd.root, "nodes unreachable from root");
    auto base = validate(to_tree_decomposition(ntd), g);
    out.insert(out.end(), base.begin(), base.end());
    return out;
}

inline std::string describe_all(const std::vector<decomposition_violation>& violations)
{
    std::string out;
    for (const auto& v : violations) {
        if (!out.empty())
            out += "; ";
        out += describe(v);
    }
    return out;
}

/// Converts a valid tree decomposition into nice form without increasing width.
inline nice_tree_decomposition nicify(const tree_decomposition& td, const graph& g)
{
    auto violations = validate(td, g);
    if (!violations.empty())
        throw error(error_kind::invalid_decomposition, describe_all(violations));

    nice_tree_decomposition ntd;
    ntd.vertex_count = g.vertex_count();
    const int count = static_cast<int>(td.bags.size());
    auto push = [&](node_kind kind, vertex v, std::vector<vertex> bag, std::vector<int> children) {
        ntd.nodes.push_back({kind, v, std::move(bag), std::move(children)});
        return static_cast<int>(ntd.nodes.size()) - 1;
    };
    if (count == 0) {
        ntd.root = push(node_kind::leaf, -1, {}, {});
        return ntd;
    }

    // Contract bags contained in a neighbour bag so each remaining bag brings something new.
    std::vector<std::set<int>> adj(count);
    for (auto [a, b] : td.tree_edges) {
        adj[a].insert(b);
        adj[b].insert(a);
    }
    std::vector<char> alive(count, 1);
    auto subset = [&](int a, int b) {
        return std::includes(td.bags[b].begin(), td.bags[b].end(), td.bags[a].begin(), td.bags[a].end());
    };
    for (bool changed = true; changed;) {
        changed = false;
        for (int a = 0; a < count && !changed; ++a) {
            if (!alive[a])
                continue;
            for (int b : adj[a]) {
                if (!subset(a, b))
                    continue;
                for (int c : adj[a])
                    if (c != b) {
                        adj[c].erase(a);
                        adj[c].insert(b);
                        adj[b].insert(c);
                    }
                adj[b].erase(a);
                adj[a].clear();
                alive[a] = 0;
                changed = true;
                break;
            }
        }
    }

    int root_bag = 0;
    while (!alive[root_bag])
        ++root_bag;

    std::vector<int> order{root_bag}, parent(count, -1);
    for (std::size_t i = 0; i < order.size(); ++i)
        for (int c : adj[order[i]])
            if (c != parent[order[i]]) {
                parent[c] = order[i];
                order.push_back(c);
            }

    auto minus = [](const std::vector<vertex>& a, const std::vector<vertex>& b) {
        std::vector<vertex> out;
        std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
        return out;
    };
    auto erase_one = [](std::vector<vertex> bag, vertex v) {
        bag.erase(std::lower_bound(bag.begin(), bag.end(), v));
        return bag;
    };
    auto insert_one = [](std::vector<vertex> bag, vertex v) {
        bag.insert(std::upper_bound(bag.begin(), bag.end(), v), v);
        return bag;
    };

    std::vector<int> top(count, -1);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        int b = *it;
        const auto& target = td.bags[b];
        std::vector<int> branches;
        for (int c : adj[b]) {
            if (c == parent[b])
                continue;
            int node = top[c];
            std::vector<vertex> bag = td.bags[c];
            for (vertex v : minus(td.bags[c], target)) {
                bag = erase_one(bag, v);
                node = push(node_kind::forget, v, bag, {node});
            }
            for (vertex v : minus(target, td.bags[c])) {
                bag = insert_one(bag, v);
                node = push(node_kind::introduce, v, bag, {node});
            }
            branches.push_back(node);
        }
        if (branches.empty()) {
            int node = push(node_kind::leaf, -1, {}, {});
            std::vector<vertex> bag;
            for (vertex v : target) {
                bag = insert_one(bag, v);
                node = push(node_kind::introduce, v, bag, {node});
            }
            branches.push_back(node);
        }
        int node = branches.front();
        for (std::size_t i = 1; i < branches.size(); ++i)
            node = push(node_kind::join, -1, target, {node, branches[i]});
        top[b] = node;
    }

    int node = top[root_bag];
    std::vector<vertex> bag = td.bags[root_bag];
    for (vertex v : td.bags[root_bag]) {
        bag = erase_one(bag, v);
        node = push(node_kind::forget, v, bag, {node});
    }
    ntd.root = node;
    return ntd;
}

namespace io {

/// Reads the PACE `.td` format. Bag ids must be exactly 1..num_bags.
inline tree_decomposition read_td(std::istream& in)
{
    auto fail = [](int line_no, const std::string& why) -> void {
        throw error(error_kind::parse_error, "line " + std::to_string(line_no) + ": " + why);
    };
    tree_decomposition td;
    std::string line;
    int line_no = 0;
    bool have_header = false;
    long long num_bags = 0, max_size = 0, n = 0;
    std::vector<char> bag_seen;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (detail::is_comment_or_blank(line))
            continue;
        std::istringstream fields(line);
        if (!have_header) {
            std::string s, kind;
            fields >> s >> kind;
            if (s != "s" || kind != "td")
                fail(line_no, "expected 's td <bags> <max_bag_size> <n>'");
            auto values = detail::read_integers(fields, line, line_no);
            if (values.size() != 3)
                fail(line_no, "expected 's td <bags> <max_bag_size> <n>'");
            num_bags = values[0];
            max_size = values[1];
            n = values[2];
            if (num_bags > (1 << 24) || n > (1 << 24))
                fail(line_no, "header values too large");
            td.vertex_count = static_cast<int>(n);
            td.bags.assign(num_bags, {});
            bag_seen.assign(num_bags, 0);
            have_header = true;
            continue;
        }
        if (line.front() == 'b') {
            std::string tag;
            fields >> tag;
            if (tag != "b")
                fail(line_no, "malformed bag line");
            auto values = detail::read_integers(fields, line, line_no);
            if (values.empty() || values[0] < 1 || values[0] > num_bags)
                fail(line_no, "bag id out of range");
            int id = static_cast<int>(values[0] - 1);
            if (bag_seen[id])
                fail(line_no, "duplicate bag id " + std::to_string(id + 1));
            bag_seen[id] = 1;
            std::vector<vertex> bag;
            for (std::size_t i = 1; i < values.size(); ++i) {
                if (values[i] < 1 || values[i] > n)
                    fail(line_no, "vertex id out of range");
                bag.push_back(static_cast<vertex>(values[i] - 1));
            }
            std::sort(bag.begin(), bag.end());
            if (std::adjacent_find(bag.begin(), bag.end()) != bag.end())
                fail(line_no, "vertex repeated in bag");
            td.bags[id] = std::move(bag);
            continue;
        }
        auto values = detail::read_integers(fields, line, line_no);
        if (values.size() != 2)
            fail(line_no, "expected '<bag> <bag>'");
        if (values[0] < 1 || values[0] > num_bags || values[1] < 1 || values[1] > num_bags)
            fail(line_no, "tree edge bag id out of range");
        if (values[0] == values[1])
            fail(line_no, "tree edge is a loop");
        td.tree_edges.emplace_back(static_cast<int>(values[0] - 1), static_cast<int>(values[1] - 1));
    }
    if (!have_header)
        throw error(error_kind::parse_error, "missing 's td' header");
    for (long long b = 0; b < num_bags; ++b)
        if (!bag_seen[b])
            throw error(error_kind::parse_error, "bag " + std::to_string(b + 1) + " never listed");
    if (td.max_bag_size() != max_size)
        throw error(error_kind::parse_error,
            "header announces max bag size " + std::to_string(max_size) + ", found " + std::to_string(td.max_bag_size()));
    return td;
}

inline void write_td(std::ostream& out, const tree_decomposition& td)
{
    out << "s td " << td.bags.size() << ' ' << td.max_bag_size() << ' ' << td.vertex_count << '\n';
    for (std::size_t b = 0; b < td.bags.size(); ++b) {
        out << "b " << (b + 1);
        for (vertex v : td.bags[b])
            out << ' ' << (v + 1);
        out << '\n';
    }
    for (auto [a, b] : td.tree_edges)
        out << (a + 1) << ' ' << (b + 1) << '\n';
}

} // namespace io

} // namespace srdom
