#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "decomposition.hpp"
#include "error.hpp"
#include "graph.hpp"
#include "spec.hpp"

namespace srdom {

struct gadget_instance {
    std::string family;
    graph g;
    std::vector<vertex> distinguished;
    std::map<std::string, int> constants;
    std::optional<tree_decomposition> path_decomposition;

    int constant(const std::string& name) const
    {
        auto it = constants.find(name);
        if (it == constants.end())
            throw std::out_of_range("gadget has no constant '" + name + "'");
        return it->second;
    }
};

namespace detail {

    class graph_builder {
    public:
        vertex add()
        {
            adjacency_.emplace_back();
            return static_cast<vertex>(adjacency_.size()) - 1;
        }
        void connect(vertex u, vertex v) { edges_.emplace_back(u, v); }
        int size() const { return static_cast<int>(adjacency_.size()); }
        graph build() const { return graph::from_edges(size(), edges_); }

    private:
        std::vector<std::vector<vertex>> adjacency_;
        std::vector<std::pair<vertex, vertex>> edges_;
    };

    struct tremendous_shape {
        int c_t = 0;
    };

    inline void require_tremendous_spec(const sigma_rho_spec& spec)
    {
        if (!spec.rho.is_finite() || spec.rho.contains(0))
            throw error(error_kind::unsupported_spec, "tremendous gadget needs a finite rho without 0");
    }

    /// Adds one tremendous gadget to `b`; returns its vertices with the portal first.
    inline std::vector<vertex> add_tremendous(graph_builder& b, const sigma_rho_spec& spec, int& c_t)
    {
        const int min_sigma = spec.sigma.min(), min_rho = spec.rho.min();
        std::vector<vertex> out;
        if (min_sigma == 0 && min_rho == 1) {
            vertex u = b.add();
            out.push_back(u);
            for (int i = 0; i < spec.rho.max() + 1; ++i) {
                vertex p = b.add();
                b.connect(u, p);
                out.push_back(p);
            }
            c_t = 1;
        } else if (min_sigma == 0) {
            out.push_back(b.add());
            c_t = 1;
        } else if (min_sigma == 1 && min_rho == 1) {
            vertex u2 = b.add(), u = b.add(), v = b.add(), v2 = b.add();
            b.connect(u2, u);
            b.connect(u, v);
            b.connect(v, v2);
            out = {u, u2, v, v2};
            c_t = 2;
        } else if (min_sigma == 1) {
            vertex u = b.add(), v = b.add();
            b.connect(u, v);
            out = {u, v};
            c_t = 2;
        } else {
            for (int i = 0; i <= min_sigma; ++i) {
                vertex x = b.add();
                for (vertex y : out)
                    b.connect(y, x);
                out.push_back(x);
            }
            c_t = min_sigma + 1;
        }
        return out;
    }

    inline std::vector<vertex> sorted(std::vector<vertex> xs)
    {
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
        return xs;
    }

} // namespace detail

/// Portal-forcing gadget; the case is picked by (min sigma, min rho).
inline gadget_instance generate_tremendous(const sigma_rho_spec& spec)
{
    detail::require_tremendous_spec(spec);
    detail::graph_builder b;
    int c_t = 0;
    auto vertices = detail::add_tremendous(b, spec, c_t);
    gadget_instance out;
    out.family = "tremendous";
    out.g = b.build();
    out.distinguished = {vertices.front()};
    out.constants = {{"c_t", c_t}};
    out.path_decomposition = trivial_decomposition(out.g);
    return out;
}

/// v joined to all of U and to one vertex of each of (min rho - 1) cliques on min sigma + 1 vertices.
inline gadget_instance generate_fragile(const sigma_rho_spec& spec, int d)
{
    if (spec.rho.is_finite() || spec.rho.contains(0))
        throw error(error_kind::unsupported_spec, "fragile realization needs rho = Z>=c with c >= 1");
    if (d < 1)
        throw std::invalid_argument("fragile realization needs arity d >= 1");
    detail::graph_builder b;
    std::vector<vertex> u;
    for (int i = 0; i < d; ++i)
        u.push_back(b.add());
    vertex v = b.add();
    for (vertex x : u)
        b.connect(v, x);
    const int cliques = spec.rho.min() - 1, clique_size = spec.sigma.min() + 1;
    std::vector<std::vector<vertex>> members;
    for (int c = 0; c < cliques; ++c) {
        std::vector<vertex> clique;
        for (int i = 0; i < clique_size; ++i) {
            vertex x = b.add();
            for (vertex y : clique)
                b.connect(y, x);
            clique.push_back(x);
        }
        b.connect(v, clique.front());
        members.push_back(clique);
    }

    gadget_instance out;
    out.family = "fragile";
    out.g = b.build();
    out.distinguished = u;
    out.constants = {{"arity", d}, {"gamma", cliques * clique_size}, {"cliques", cliques}};
    tree_decomposition td;
    td.vertex_count = out.g.vertex_count();
    std::vector<vertex> hub = u;
    hub.push_back(v);
    if (members.empty())
        td.bags.push_back(detail::sorted(hub));
    for (const auto& clique : members) {
        auto bag = hub;
        bag.insert(bag.end(), clique.begin(), clique.end());
        td.bags.push_back(detail::sorted(bag));
    }
    for (std::size_t i = 1; i < td.bags.size(); ++i)
        td.tree_edges.emplace_back(static_cast<int>(i) - 1, static_cast<int>(i));
    out.path_decomposition = td;
    return out;
}

/// HW=1 realization with penalty delta built from tremendous gadgets around hubs v and w.
inline gadget_instance generate_robust(const sigma_rho_spec& spec, int d, int delta)
{
    detail::require_tremendous_spec(spec);
    if (d < 1 || delta < 1)
        throw std::invalid_argument("robust realization needs d >= 1 and delta >= 1");
    detail::graph_builder b;
    int c_t = 0;
    {
        detail::graph_builder probe;
        detail::add_tremendous(probe, spec, c_t);
    }
    const int t = delta * c_t + 2 * delta + 1;
    const int min_rho = spec.rho.min(), max_rho = spec.rho.max();

    std::vector<vertex> u;
    for (int i = 0; i < d; ++i)
        u.push_back(b.add());

    struct gadget_copy {
        std::vector<vertex> vertices;
        vertex guard; // r_i or z_i, or -1 when attached to a hub
    };
    std::vector<gadget_copy> hub_copies, guard_copies;
    int copies = 0;
    auto attach = [&](vertex anchor, int count, vertex guard, std::vector<gadget_copy>& into) {
        for (int i = 0; i < count; ++i) {
            int ct = 0;
            auto vs = detail::add_tremendous(b, spec, ct);
            b.connect(anchor, vs.front());
            into.push_back({vs, guard});
            ++copies;
        }
    };
    auto build_hub = [&]() {
        vertex hub = b.add();
        for (vertex x : u)
            b.connect(hub, x);
        return hub;
    };

    vertex v = build_hub();
    attach(v, min_rho - 1, -1, hub_copies);
    for (int i = 0; i < t; ++i) {
        vertex r = b.add();
        b.connect(v, r);
        attach(r, max_rho, r, guard_copies);
    }
    vertex w = build_hub();
    attach(w, max_rho - 1, -1, hub_copies);
    for (int i = 0; i < t; ++i) {
        vertex z = b.add();
        b.connect(w, z);
        attach(z, max_rho, z, guard_copies);
    }

    const int expected = (min_rho - 1) + (max_rho - 1) + 2 * t * max_rho;
    if (copies != expected)
        throw std::logic_error("robust gadget audit: copy count mismatch");

    gadget_instance out;
    out.family = "robust";
    out.g = b.build();
    out.distinguished = u;
    out.constants = {{"arity", d}, {"delta", delta}, {"c_t", c_t}, {"t", t}, {"beta", c_t},
        {"copies", copies}, {"gamma", copies * c_t}};

    // One bag per gadget copy; hubs, U and hub-attached gadgets sit in every bag.
    std::vector<vertex> common = u;
    common.push_back(v);
    common.push_back(w);
    for (const auto& c : hub_copies)
        common.insert(common.end(), c.vertices.begin(), c.vertices.end());
    tree_decomposition td;
    td.vertex_count = out.g.vertex_count();
    std::vector<const gadget_copy*> order;
    for (const auto& c : hub_copies)
        order.push_back(&c);
    for (const auto& c : guard_copies)
        order.push_back(&c);
    for (const gadget_copy* c : order) {
        auto bag = common;
        bag.insert(bag.end(), c->vertices.begin(), c->vertices.end());
        if (c->guard >= 0)
            bag.push_back(c->guard);
        td.bags.push_back(detail::sorted(bag));
    }
    for (std::size_t i = 1; i < td.bags.size(); ++i)
        td.tree_edges.emplace_back(static_cast<int>(i) - 1, static_cast<int>(i));
    out.path_decomposition = td;
    return out;
}

/// Outcome of a definitional check; on failure names the property and a subset.
struct gadget_check {
    bool ok = true;
    int property = 0;
    std::string message;
    std::optional<std::vector<vertex>> subset;

    explicit operator bool() const { return ok; }

    static gadget_check pass() { return {}; }
    static gadget_check fail(int property, std::string message, std::optional<std::vector<vertex>> subset = {})
    {
        return {false, property, std::move(message), std::move(subset)};
    }
};

inline constexpr int default_enumeration_cap = 24;

namespace detail {

    inline std::vector<vertex> members_of(std::uint64_t mask, const std::vector<vertex>& universe)
    {
        std::vector<vertex> out;
        for (std::size_t i = 0; i < universe.size(); ++i)
            if (mask >> i & 1)
                out.push_back(universe[i]);
        return out;
    }

    inline std::vector<vertex> identity_universe(int n)
    {
        std::vector<vertex> all(n);
        for (int i = 0; i < n; ++i)
            all[i] = i;
        return all;
    }

} // namespace detail

/// Exhaustively checks the portal trichotomy and the existence of a size-c_t solution.
inline gadget_check check_tremendous(const gadget_instance& instance, const sigma_rho_spec& spec,
    int cap = default_enumeration_cap)
{
    const graph& g = instance.g;
    const int n = g.vertex_count();
    if (n > cap)
        throw error(error_kind::cap_exceeded, "tremendous check needs 2^" + std::to_string(n) + " subsets");
    if (instance.distinguished.size() != 1)
        return gadget_check::fail(0, "tremendous gadget needs exactly one portal");
    const vertex u = instance.distinguished.front();
    const int c_t = instance.constant("c_t");
    const auto universe = detail::identity_universe(n);
    bool witnessed = false;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        const auto members = detail::members_of(mask, universe);
        const auto selected = to_selection(n, members);
        const int size = static_cast<int>(members.size());
        const bool portal_selected = selected[u];
        bool inner_violated = false;
        for (vertex x = 0; x < n && !inner_violated; ++x)
            inner_violated = x != u && violation_status(g, selected, x, spec) == vertex_status::violated;
        const int count = selected_neighbor_count(g, selected, u);
        const membership_set& set = spec.set_for(portal_selected ? side::selected : side::unselected);
        // Violated relative to the shifted pair too: one more selected neighbour would not help.
        const bool portal_hopeless = !set.contains(count) && !set.contains(count + 1);
        const bool clause1 = portal_selected && size >= c_t;
        if (!clause1 && !inner_violated && !portal_hopeless)
            return gadget_check::fail(1, "selection meets none of the three clauses", members);
        if (size == c_t && !inner_violated && set.contains(count))
            witnessed = true;
    }
    if (!witnessed)
        return gadget_check::fail(2, "no violation-free selection of size c_t = " + std::to_string(c_t));
    return gadget_check::pass();
}

/// Achievable (|S \ U|, violations in V \ U) pairs for every selection pattern on U and N(U) \ U.
///
/// Sizes and violation counts saturate at the caps; each pair keeps one witness set.
struct gadget_profile {
    std::vector<vertex> u;
    std::vector<vertex> outer;
    int size_cap = 0;
    int viol_cap = 0;
    std::vector<std::map<std::pair<int, int>, std::vector<vertex>>> cells;

    std::size_t cell_index(std::uint64_t umask, std::uint64_t omask) const
    {
        return static_cast<std::size_t>((umask << outer.size()) | omask);
    }
    const std::map<std::pair<int, int>, std::vector<vertex>>& at(std::uint64_t umask, std::uint64_t omask) const
    {
        return cells[cell_index(umask, omask)];
    }
};

enum class profile_method { automatic, plain, factored };

namespace detail {

    inline gadget_profile empty_profile(const graph& g, const std::vector<vertex>& u, int size_cap, int viol_cap)
    {
        gadget_profile p;
        p.u = sorted(u);
        p.size_cap = size_cap;
        p.viol_cap = viol_cap;
        std::vector<char> in_u(g.vertex_count(), 0);
        for (vertex x : p.u)
            in_u[x] = 1;
        std::vector<vertex> outer;
        for (vertex x : p.u)
            for (vertex y : g.neighbors(x))
                if (!in_u[y])
                    outer.push_back(y);
        p.outer = sorted(outer);
        if (p.u.size() + p.outer.size() > 20)
            throw error(error_kind::cap_exceeded, "U and N(U) too large to enumerate");
        p.cells.assign(std::size_t{1} << (p.u.size() + p.outer.size()), {});
        return p;
    }

    inline void record(gadget_profile& p, std::size_t cell, int size, int viol, const std::vector<vertex>& witness)
    {
        auto key = std::pair{std::min(size, p.size_cap), std::min(viol, p.viol_cap)};
        p.cells[cell].try_emplace(key, witness);
    }

    inline gadget_profile profile_plain(const graph& g, const std::vector<vertex>& u, const sigma_rho_spec& spec,
        int size_cap, int viol_cap, int cap)
    {
        const int n = g.vertex_count();
        if (n > cap)
            throw error(error_kind::cap_exceeded, "plain enumeration needs 2^" + std::to_string(n) + " subsets");
        gadget_profile p = empty_profile(g, u, size_cap, viol_cap);
        std::vector<int> u_pos(n, -1), o_pos(n, -1);
        for (std::size_t i = 0; i < p.u.size(); ++i)
            u_pos[p.u[i]] = static_cast<int>(i);
        for (std::size_t i = 0; i < p.outer.size(); ++i)
            o_pos[p.outer[i]] = static_cast<int>(i);
        const auto universe = identity_universe(n);
        for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
            const auto members = members_of(mask, universe);
            const auto selected = to_selection(n, members);
            std::uint64_t um = 0, om = 0;
            int size = 0, viol = 0;
            for (vertex x : members) {
                if (u_pos[x] >= 0)
                    um |= std::uint64_t{1} << u_pos[x];
                else
                    ++size;
                if (o_pos[x] >= 0)
                    om |= std::uint64_t{1} << o_pos[x];
            }
            for (vertex x = 0; x < n; ++x)
                if (u_pos[x] < 0 && violation_status(g, selected, x, spec) == vertex_status::violated)
                    ++viol;
            record(p, p.cell_index(um, om), size, viol, members);
        }
        return p;
    }

    /// Splits G - (U and N(U)) into components, enumerates each on its own, and folds them.
    inline gadget_profile profile_factored(const graph& g, const std::vector<vertex>& u, const sigma_rho_spec& spec,
        int size_cap, int viol_cap, int cap)
    {
        const int n = g.vertex_count();
        gadget_profile p = empty_profile(g, u, size_cap, viol_cap);
        std::vector<char> in_x(n, 0), in_u(n, 0);
        std::vector<int> o_pos(n, -1);
        for (vertex x : p.u)
            in_x[x] = in_u[x] = 1;
        for (std::size_t i = 0; i < p.outer.size(); ++i) {
            in_x[p.outer[i]] = 1;
            o_pos[p.outer[i]] = static_cast<int>(i);
        }

        std::vector<std::vector<vertex>> components;
        std::vector<int> comp_of(n, -1);
        for (vertex s = 0; s < n; ++s) {
            if (in_x[s] || comp_of[s] >= 0)
                continue;
            std::vector<vertex> comp{s};
            comp_of[s] = static_cast<int>(components.size());
            for (std::size_t i = 0; i < comp.size(); ++i)
                for (vertex y : g.neighbors(comp[i]))
                    if (!in_x[y] && comp_of[y] < 0) {
                        comp_of[y] = comp_of[s];
                        comp.push_back(y);
                    }
            std::sort(comp.begin(), comp.end());
            if (static_cast<int>(comp.size()) > cap)
                throw error(error_kind::cap_exceeded, "component of " + std::to_string(comp.size()) + " vertices");
            components.push_back(std::move(comp));
        }

        const int outer_count = static_cast<int>(p.outer.size());
        std::vector<vertex> o_caps(outer_count);

        for (std::uint64_t om = 0; om < (std::uint64_t{1} << outer_count); ++om) {
            std::vector<char> selected_x(n, 0);
            for (int i = 0; i < outer_count; ++i)
                selected_x[p.outer[i]] = static_cast<char>(om >> i & 1);
            for (int i = 0; i < outer_count; ++i)
                o_caps[i] = spec.cap(selected_x[p.outer[i]] ? side::selected : side::unselected);

            // Per component: distinct (size, violations, counts into N(U)) with a witness.
            using signature = std::pair<std::pair<int, int>, std::vector<int>>;
            std::vector<std::map<signature, std::vector<vertex>>> options(components.size());
            for (std::size_t c = 0; c < components.size(); ++c) {
                const auto& comp = components[c];
                std::vector<bool> selected(n, false);
                for (int i = 0; i < outer_count; ++i)
                    selected[p.outer[i]] = selected_x[p.outer[i]] != 0;
                for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << comp.size()); ++mask) {
                    for (std::size_t i = 0; i < comp.size(); ++i)
                        selected[comp[i]] = (mask >> i & 1) != 0;
                    int viol = 0;
                    for (vertex x : comp)
                        if (violation_status(g, selected, x, spec) == vertex_status::violated)
                            ++viol;
                    std::vector<int> counts(outer_count, 0);
                    for (vertex x : comp)
                        if (selected[x])
                            for (vertex y : g.neighbors(x))
                                if (o_pos[y] >= 0)
                                    ++counts[o_pos[y]];
                    for (int i = 0; i < outer_count; ++i)
                        counts[i] = std::min(counts[i], o_caps[i]);
                    const int size = std::popcount(mask);
                    signature key{{std::min(size, size_cap), std::min(viol, viol_cap)}, counts};
                    if (!options[c].count(key))
                        options[c].emplace(key, members_of(mask, comp));
                }
            }

            for (std::uint64_t um = 0; um < (std::uint64_t{1} << p.u.size()); ++um) {
                std::vector<bool> selected(n, false);
                std::vector<vertex> base;
                for (std::size_t i = 0; i < p.u.size(); ++i)
                    if (um >> i & 1) {
                        selected[p.u[i]] = true;
                        base.push_back(p.u[i]);
                    }
                int size = 0;
                for (int i = 0; i < outer_count; ++i)
                    if (om >> i & 1) {
                        selected[p.outer[i]] = true;
                        base.push_back(p.outer[i]);
                        ++size;
                    }
                std::vector<int> counts(outer_count, 0);
                for (int i = 0; i < outer_count; ++i) {
                    for (vertex y : g.neighbors(p.outer[i]))
                        if (in_x[y] && selected[y])
                            ++counts[i];
                    counts[i] = std::min(counts[i], o_caps[i]);
                }
                using state_key = std::pair<std::pair<int, int>, std::vector<int>>;
                std::map<state_key, std::vector<vertex>> states{{{{std::min(size, size_cap), 0}, counts}, base}};
                for (std::size_t c = 0; c < components.size(); ++c) {
                    std::map<state_key, std::vector<vertex>> next;
                    for (const auto& [key, witness] : states)
                        for (const auto& [option, chosen] : options[c]) {
                            std::vector<int> merged = key.second;
                            for (int i = 0; i < outer_count; ++i)
                                merged[i] = std::min(merged[i] + option.second[i], o_caps[i]);
                            state_key joined{{std::min(key.first.first + option.first.first, size_cap),
                                                 std::min(key.first.second + option.first.second, viol_cap)},
                                merged};
                            if (!next.count(joined)) {
                                auto w = witness;
                                w.insert(w.end(), chosen.begin(), chosen.end());
                                next.emplace(std::move(joined), std::move(w));
                            }
                        }
                    states = std::move(next);
                }
                for (const auto& [key, witness] : states) {
                    int viol = key.first.second;
                    for (int i = 0; i < outer_count; ++i) {
                        side s = om >> i & 1 ? side::selected : side::unselected;
                        if (!spec.satisfied(s, key.second[i]))
                            ++viol;
                    }
                    record(p, p.cell_index(um, om), key.first.first, viol, sorted(witness));
                }
            }
        }
        return p;
    }

} // namespace detail

inline gadget_profile compute_profile(const graph& g, const std::vector<vertex>& u, const sigma_rho_spec& spec,
    int size_cap, int viol_cap, profile_method method = profile_method::automatic, int cap = default_enumeration_cap)
{
    if (method == profile_method::automatic)
        method = g.vertex_count() <= 16 ? profile_method::plain : profile_method::factored;
    if (method == profile_method::plain)
        return detail::profile_plain(g, u, spec, size_cap, viol_cap, cap);
    return detail::profile_factored(g, u, spec, size_cap, viol_cap, cap);
}

namespace detail {

    inline std::optional<vertex> internal_edge(const graph& g, const std::vector<vertex>& u)
    {
        for (vertex a : u)
            for (vertex b : u)
                if (a < b && g.has_edge(a, b))
                    return a;
        return std::nullopt;
    }

    inline std::string pair_text(const std::pair<int, int>& key)
    {
        return "|S\\U|=" + std::to_string(key.first) + ", violations=" + std::to_string(key.second);
    }

} // namespace detail

/// Exhaustive check of the four fragile-realization properties.
inline gadget_check check_fragile(const gadget_instance& instance, const sigma_rho_spec& spec,
    profile_method method = profile_method::automatic, int cap = default_enumeration_cap)
{
    const int gamma = instance.constant("gamma");
    if (auto a = detail::internal_edge(instance.g, instance.distinguished))
        return gadget_check::fail(4, "U is not independent", std::vector<vertex>{*a});
    const auto p = compute_profile(instance.g, instance.distinguished, spec, gamma + 1, 1, method, cap);
    const std::uint64_t us = std::uint64_t{1} << p.u.size(), os = std::uint64_t{1} << p.outer.size();
    for (std::uint64_t um = 0; um < us; ++um)
        for (std::uint64_t om = 0; om < os; ++om)
            for (const auto& [key, witness] : p.at(um, om)) {
                if (key.second == 0 && key.first < gamma)
                    return gadget_check::fail(1, "violation-free selection below cost: " + detail::pair_text(key), witness);
                if ((um == 0 || om != 0) && key.second == 0 && key.first <= gamma)
                    return gadget_check::fail(3, "bad selection pattern without penalty: " + detail::pair_text(key), witness);
            }
    for (std::uint64_t um = 1; um < us; ++um)
        if (!p.at(um, 0).count({gamma, 0}))
            return gadget_check::fail(2, "no extension of cost gamma for the chosen part of U",
                detail::members_of(um, p.u));
    return gadget_check::pass();
}

/// Exhaustive check of the five robust-realization properties for l = 0..l_max.
inline gadget_check check_robust(const gadget_instance& instance, const sigma_rho_spec& spec, int l_max,
    profile_method method = profile_method::automatic, int cap = default_enumeration_cap)
{
    const int gamma = instance.constant("gamma"), beta = instance.constant("beta");
    const int delta = instance.constant("delta");
    if (auto a = detail::internal_edge(instance.g, instance.distinguished))
        return gadget_check::fail(5, "U is not independent", std::vector<vertex>{*a});
    const auto p = compute_profile(
        instance.g, instance.distinguished, spec, gamma + delta + 1, std::max(delta, l_max) + 1, method, cap);
    const std::uint64_t us = std::uint64_t{1} << p.u.size(), os = std::uint64_t{1} << p.outer.size();
    for (std::size_t i = 0; i < p.u.size(); ++i)
        if (!p.at(std::uint64_t{1} << i, 0).count({gamma, 0}))
            return gadget_check::fail(1, "no canonical selection of cost gamma for one vertex of U",
                std::vector<vertex>{p.u[i]});
    for (std::uint64_t um = 0; um < us; ++um)
        for (std::uint64_t om = 0; om < os; ++om)
            for (const auto& [key, witness] : p.at(um, om)) {
                const auto [size, viol] = key;
                for (int l = std::max(viol, 0); l <= l_max; ++l)
                    if (size < gamma - l * beta)
                        return gadget_check::fail(2,
                            "selection with at most " + std::to_string(l) + " violations is too small: "
                                + detail::pair_text(key),
                            witness);
                if (std::popcount(um) != 1 && viol == 0 && size <= gamma)
                    return gadget_check::fail(3, "|S and U| != 1 without penalty: " + detail::pair_text(key), witness);
                if (om != 0 && viol <= delta && size <= gamma + delta)
                    return gadget_check::fail(4, "selection touches N(U) within the penalty: " + detail::pair_text(key),
                        witness);
            }
    return gadget_check::pass();
}

inline gadget_check check_robust(const gadget_instance& instance, const sigma_rho_spec& spec)
{
    const int gamma = instance.constant("gamma"), beta = instance.constant("beta");
    const int l_max = beta > 0 ? (gamma + beta - 1) / beta : instance.constant("delta");
    return check_robust(instance, spec, l_max);
}

} // namespace srdom
