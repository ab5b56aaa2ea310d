#pragma once

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "spec.hpp"

namespace srdom {

using vertex = int;

/// Simple undirected graph over vertices 0..n-1 with sorted adjacency lists.
class graph {
public:
    graph() = default;
    explicit graph(int n) : adjacency_(n) {}

    static graph from_edges(int n, const std::vector<std::pair<vertex, vertex>>& edges)
    {
        graph g(n);
        for (auto [u, v] : edges)
            g.add_edge(u, v);
        return g;
    }

    int vertex_count() const noexcept { return static_cast<int>(adjacency_.size()); }
    int edge_count() const noexcept { return edge_count_; }

    void add_edge(vertex u, vertex v)
    {
        if (u < 0 || v < 0 || u >= vertex_count() || v >= vertex_count())
            throw error(error_kind::structural_error, "edge endpoint out of range");
        if (u == v)
            throw error(error_kind::structural_error, "self-loop at vertex " + std::to_string(u));
        if (has_edge(u, v))
            throw error(error_kind::structural_error,
                "duplicate edge " + std::to_string(u) + "-" + std::to_string(v));
        insert_sorted(adjacency_[u], v);
        insert_sorted(adjacency_[v], u);
        ++edge_count_;
    }

    bool has_edge(vertex u, vertex v) const
    {
        const auto& a = adjacency_[u];
        return std::binary_search(a.begin(), a.end(), v);
    }

    const std::vector<vertex>& neighbors(vertex v) const { return adjacency_[v]; }
    int degree(vertex v) const { return static_cast<int>(adjacency_[v].size()); }

    /// Edges as (u, v) with u < v, in lexicographic order.
    std::vector<std::pair<vertex, vertex>> edges() const
    {
        std::vector<std::pair<vertex, vertex>> out;
        out.reserve(edge_count_);
        for (vertex u = 0; u < vertex_count(); ++u)
            for (vertex v : adjacency_[u])
                if (u < v)
                    out.emplace_back(u, v);
        return out;
    }

    /// Copy of the graph with vertex v renamed to perm[v].
    graph relabeled(const std::vector<vertex>& perm) const
    {
        graph out(vertex_count());
        for (auto [u, v] : edges())
            out.add_edge(perm[u], perm[v]);
        return out;
    }

    friend bool operator==(const graph& a, const graph& b) { return a.adjacency_ == b.adjacency_; }

private:
    static void insert_sorted(std::vector<vertex>& list, vertex v)
    {
        list.insert(std::upper_bound(list.begin(), list.end(), v), v);
    }

    std::vector<std::vector<vertex>> adjacency_;
    int edge_count_ = 0;
};

enum class vertex_status { satisfied, violated };

/// Selected-neighbor count of v under the selection `selected` (indexed by vertex).
inline int selected_neighbor_count(const graph& g, const std::vector<bool>& selected, vertex v)
{
    int count = 0;
    for (vertex w : g.neighbors(v))
        count += selected[w] ? 1 : 0;
    return count;
}

inline vertex_status violation_status(const graph& g, const std::vector<bool>& selected, vertex v,
    const sigma_rho_spec& spec)
{
    side s = selected[v] ? side::selected : side::unselected;
    return spec.satisfied(s, selected_neighbor_count(g, selected, v)) ? vertex_status::satisfied
                                                                       : vertex_status::violated;
}

inline int count_violations(const graph& g, const std::vector<bool>& selected, const sigma_rho_spec& spec)
{
    int violated = 0;
    for (vertex v = 0; v < g.vertex_count(); ++v)
        violated += violation_status(g, selected, v, spec) == vertex_status::violated ? 1 : 0;
    return violated;
}

inline std::vector<bool> to_selection(int n, const std::vector<vertex>& members)
{
    std::vector<bool> selected(n, false);
    for (vertex v : members)
        selected.at(v) = true;
    return selected;
}

namespace io {

namespace detail {

    inline bool is_comment_or_blank(const std::string& line)
    {
        auto first = line.find_first_not_of(" \t\r");
        return first == std::string::npos || line[first] == 'c';
    }

    inline std::vector<long long> read_integers(std::istringstream& in, const std::string& line, int line_no)
    {
        std::vector<long long> values;
        std::string token;
        while (in >> token) {
            long long value = 0;
            if (token.empty() || token.size() > 12)
                throw error(error_kind::parse_error,
                    "line " + std::to_string(line_no) + ": bad integer '" + token + "' in '" + line + "'");
            for (char c : token) {
                if (c < '0' || c > '9')
                    throw error(error_kind::parse_error,
                        "line " + std::to_string(line_no) + ": bad integer '" + token + "'");
                value = value * 10 + (c - '0');
            }
            values.push_back(value);
        }
        return values;
    }

} // namespace detail

/// Reads the PACE `.gr` format: `p tw <n> <m>` then m lines `<u> <v>` (1-indexed).
inline graph read_gr(std::istream& in)
{
    std::string line;
    int line_no = 0;
    bool have_header = false;
    long long n = 0, m = 0, seen = 0;
    graph g;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (detail::is_comment_or_blank(line))
            continue;
        std::istringstream fields(line);
        if (!have_header) {
            std::string p, tw;
            fields >> p >> tw;
            if (p != "p" || tw != "tw")
                throw error(error_kind::parse_error, "line " + std::to_string(line_no) + ": expected 'p tw <n> <m>'");
            auto values = detail::read_integers(fields, line, line_no);
            if (values.size() != 2)
                throw error(error_kind::parse_error, "line " + std::to_string(line_no) + ": expected 'p tw <n> <m>'");
            n = values[0];
            m = values[1];
            if (n > (1 << 24))
                throw error(error_kind::parse_error, "vertex count too large");
            g = graph(static_cast<int>(n));
            have_header = true;
            continue;
        }
        auto values = detail::read_integers(fields, line, line_no);
        if (values.size() != 2)
            throw error(error_kind::parse_error, "line " + std::to_string(line_no) + ": expected '<u> <v>'");
        if (values[0] < 1 || values[0] > n || values[1] < 1 || values[1] > n)
            throw error(error_kind::parse_error, "line " + std::to_string(line_no) + ": vertex id out of range");
        try {
            g.add_edge(static_cast<vertex>(values[0] - 1), static_cast<vertex>(values[1] - 1));
        } catch (const error& e) {
            throw error(error_kind::parse_error, "line " + std::to_string(line_no) + ": " + e.what());
        }
        ++seen;
    }
    if (!have_header)
        throw error(error_kind::parse_error, "missing 'p tw' header");
    if (seen != m)
        throw error(error_kind::parse_error,
            "header announces " + std::to_string(m) + " edges, found " + std::to_string(seen));
    return g;
}

inline void write_gr(std::ostream& out, const graph& g)
{
    out << "p tw " << g.vertex_count() << ' ' << g.edge_count() << '\n';
    for (auto [u, v] : g.edges())
        out << (u + 1) << ' ' << (v + 1) << '\n';
}

} // namespace io

} // namespace srdom
