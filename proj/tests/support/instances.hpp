#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "srdom/decomposition.hpp"
#include "srdom/gadgets.hpp"
#include "srdom/graph.hpp"
#include "srdom/spec.hpp"

namespace srdom::testing {

inline graph random_graph(int n, double p, std::mt19937_64& rng)
{
    std::bernoulli_distribution coin(p);
    graph g(n);
    for (vertex u = 0; u < n; ++u)
        for (vertex v = u + 1; v < n; ++v)
            if (coin(rng))
                g.add_edge(u, v);
    return g;
}

inline graph path_graph(int n)
{
    graph g(n);
    for (vertex v = 0; v + 1 < n; ++v)
        g.add_edge(v, v + 1);
    return g;
}

inline graph cycle_graph(int n)
{
    graph g = path_graph(n);
    if (n >= 3)
        g.add_edge(0, n - 1);
    return g;
}

inline graph star_graph(int n)
{
    graph g(n);
    for (vertex v = 1; v < n; ++v)
        g.add_edge(0, v);
    return g;
}

inline graph complete_graph(int n)
{
    graph g(n);
    for (vertex u = 0; u < n; ++u)
        for (vertex v = u + 1; v < n; ++v)
            g.add_edge(u, v);
    return g;
}

struct named_graph {
    std::string name;
    graph g;
};

/// Random G(n,p) for n in [4,12], p in {0.2,0.5,0.8}, plus paths, cycles, stars and cliques up to 12.
inline std::vector<named_graph> oracle_corpus(int per_cell, std::uint64_t seed = 7)
{
    std::mt19937_64 rng(seed);
    std::vector<named_graph> out;
    for (int n = 4; n <= 12; ++n)
        for (double p : {0.2, 0.5, 0.8})
            for (int i = 0; i < per_cell; ++i)
                out.push_back({"gnp n=" + std::to_string(n) + " p=" + std::to_string(p).substr(0, 3) + " #"
                        + std::to_string(i),
                    random_graph(n, p, rng)});
    for (int n = 1; n <= 12; ++n) {
        out.push_back({"path" + std::to_string(n), path_graph(n)});
        out.push_back({"cycle" + std::to_string(n), cycle_graph(n)});
        out.push_back({"star" + std::to_string(n), star_graph(n)});
        out.push_back({"clique" + std::to_string(n), complete_graph(n)});
    }
    return out;
}

/// Tree-shaped decomposition from a greedy min-degree elimination order.
inline tree_decomposition elimination_decomposition(const graph& g)
{
    const int n = g.vertex_count();
    std::vector<std::set<vertex>> adj(n);
    for (auto [u, v] : g.edges()) {
        adj[u].insert(v);
        adj[v].insert(u);
    }
    tree_decomposition td;
    td.vertex_count = n;
    std::vector<int> bag_of(n, -1);
    std::vector<vertex> order;
    std::vector<char> done(n, 0);
    for (int step = 0; step < n; ++step) {
        vertex best = -1;
        for (vertex v = 0; v < n; ++v)
            if (!done[v] && (best < 0 || adj[v].size() < adj[best].size()))
                best = v;
        std::vector<vertex> bag(adj[best].begin(), adj[best].end());
        bag.push_back(best);
        std::sort(bag.begin(), bag.end());
        td.bags.push_back(bag);
        bag_of[best] = step;
        order.push_back(best);
        for (vertex a : adj[best])
            for (vertex b : adj[best])
                if (a != b)
                    adj[a].insert(b);
        for (vertex a : adj[best])
            adj[a].erase(best);
        adj[best].clear();
        done[best] = 1;
    }
    for (int s = 0; s < n; ++s) {
        int parent = -1;
        for (vertex u : td.bags[s])
            if (u != order[s] && (parent < 0 || bag_of[u] < parent))
                parent = bag_of[u];
        if (parent < 0 && s + 1 < n)
            parent = s + 1;
        if (parent >= 0)
            td.tree_edges.emplace_back(s, parent);
    }
    return td;
}

/// Path decomposition from the vertex order: bag i holds v_i and every earlier vertex with a neighbour at or after i.
inline tree_decomposition path_decomposition(const graph& g, std::vector<vertex> order = {})
{
    const int n = g.vertex_count();
    if (order.empty())
        for (vertex v = 0; v < n; ++v)
            order.push_back(v);
    std::vector<int> position(n);
    for (int i = 0; i < n; ++i)
        position[order[i]] = i;
    std::vector<int> last(n);
    for (vertex v = 0; v < n; ++v) {
        last[v] = position[v];
        for (vertex w : g.neighbors(v))
            last[v] = std::max(last[v], position[w]);
    }
    tree_decomposition td;
    td.vertex_count = n;
    for (int i = 0; i < n; ++i) {
        std::vector<vertex> bag;
        for (int j = 0; j <= i; ++j)
            if (last[order[j]] >= i)
                bag.push_back(order[j]);
        std::sort(bag.begin(), bag.end());
        td.bags.push_back(bag);
        if (i)
            td.tree_edges.emplace_back(i - 1, i);
    }
    return td;
}

/// Rows of the domination-problem table with their partial-alphabet sizes, in table order.
struct named_spec {
    std::string name;
    std::string sigma;
    std::string rho;
    int partial_base;
};

inline std::vector<named_spec> table_rows()
{
    return {
        {"Dominating Set", "cofinite:0", "cofinite:1", 3},
        {"1-Dominating Set", "cofinite:0", "cofinite:1", 3},
        {"2-Dominating Set", "cofinite:0", "cofinite:2", 4},
        {"3-Dominating Set", "cofinite:0", "cofinite:3", 5},
        {"Perfect Code", "finite:{0}", "finite:{1}", 5},
        {"Perfect Dominating Set", "cofinite:0", "finite:{1}", 4},
        {"Total Dominating Set", "cofinite:1", "cofinite:1", 4},
        {"Total Perfect Dominating Set", "finite:{1}", "finite:{1}", 6},
        {"Weakly Perfect Dominating Set", "finite:{0,1}", "finite:{1}", 6},
        {"Independent Dominating Set", "finite:{0}", "cofinite:1", 4},
        {"Dominating 0-Regular Subgraph", "finite:{0}", "cofinite:1", 4},
        {"Dominating 1-Regular Subgraph", "finite:{1}", "cofinite:1", 5},
        {"Dominating 2-Regular Subgraph", "finite:{2}", "cofinite:1", 6},
    };
}

/// Random nonempty finite or cofinite set with constants at most 3.
inline std::string random_set_text(std::mt19937_64& rng, bool allow_zero = true)
{
    std::uniform_int_distribution<int> pick(0, 3);
    if (std::bernoulli_distribution(0.3)(rng))
        return "cofinite:" + std::to_string(allow_zero ? pick(rng) : 1 + pick(rng) % 3);
    std::vector<int> elements;
    while (elements.empty())
        for (int c = allow_zero ? 0 : 1; c <= 3; ++c)
            if (std::bernoulli_distribution(0.4)(rng))
                elements.push_back(c);
    std::string text = "finite:{";
    for (std::size_t i = 0; i < elements.size(); ++i)
        text += (i ? "," : "") + std::to_string(elements[i]);
    return text + "}";
}

/// Graph induced on vertices [0, keep).
inline graph induced_prefix(const graph& g, int keep)
{
    graph out(keep);
    for (auto [u, v] : g.edges())
        if (u < keep && v < keep)
            out.add_edge(u, v);
    return out;
}

inline gadget_instance without_last_vertices(gadget_instance inst, int count)
{
    inst.g = induced_prefix(inst.g, inst.g.vertex_count() - count);
    inst.path_decomposition.reset();
    return inst;
}

inline gadget_instance with_constant_shift(gadget_instance inst, const std::string& name, int delta)
{
    inst.constants.at(name) += delta;
    return inst;
}

inline gadget_instance with_edge_inside_u(gadget_instance inst)
{
    inst.g.add_edge(inst.distinguished.at(0), inst.distinguished.at(1));
    return inst;
}

} // namespace srdom::testing
