#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <functional>
#include <future>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "convolution.hpp"
#include "decomposition.hpp"
#include "error.hpp"
#include "feasibility.hpp"
#include "graph.hpp"
#include "spec.hpp"

namespace srdom {

/// Per-node table: which (state code, k, l) triples have a matching partial solution.
///
/// The (k, l) range is stored up to the number of vertices forgotten below the
/// node, which bounds both coordinates; queries outside it are false.
struct dp_table {
    std::vector<vertex> bag;
    indicator_table grid;

    bool contains(std::size_t code, int k, int l) const
    {
        if (k < 0 || l < 0 || k >= grid.k_ext || l >= grid.l_ext || code >= grid.code_count())
            return false;
        return grid.at(code, k, l) != 0;
    }

    std::size_t entry_count() const { return grid.nonzero(); }
};

/// `automatic` picks whichever kernel has the smaller operation estimate for each join.
enum class join_kernel { automatic, fast, naive };

struct solve_options {
    int threads = 1;
    join_kernel kernel = join_kernel::automatic;
    op_counter* counter = nullptr;
    /// Called once per node with its finished table (single-threaded runs only).
    std::function<void(int, const dp_table&)> observer;
    /// Test-only fault hook: flips exact[k][l] in the returned result.
    std::optional<std::pair<int, int>> debug_flip;
};

namespace detail {

    inline int bag_position(const std::vector<vertex>& bag, vertex v)
    {
        auto it = std::lower_bound(bag.begin(), bag.end(), v);
        if (it == bag.end() || *it != v)
            return -1;
        return static_cast<int>(it - bag.begin());
    }

    inline bool row_nonzero(const indicator_table& t, std::size_t code)
    {
        const std::size_t width = static_cast<std::size_t>(t.k_ext) * t.l_ext;
        const std::uint8_t* row = &t.cells[code * width];
        return std::any_of(row, row + width, [](std::uint8_t x) { return x != 0; });
    }

    inline std::vector<int> digits_of(const state_codec& codec, std::size_t code)
    {
        std::vector<int> digits(codec.arity());
        for (int i = 0; i < codec.arity(); ++i)
            digits[i] = codec.digit(code, i);
        return digits;
    }

    inline std::size_t code_of(const state_codec& codec, const std::vector<int>& digits)
    {
        std::size_t code = 0;
        for (int i = 0; i < codec.arity(); ++i)
            code += codec.weight(i) * static_cast<std::size_t>(digits[i]);
        return code;
    }

    /// Positions (in the child bag) of v's neighbours, excluding v itself.
    inline std::vector<int> neighbour_positions(const std::vector<vertex>& bag, vertex v, const graph& g)
    {
        std::vector<int> out;
        for (std::size_t i = 0; i < bag.size(); ++i)
            if (bag[i] != v && g.has_edge(bag[i], v))
                out.push_back(static_cast<int>(i));
        return out;
    }

} // namespace detail

inline dp_table handle_leaf(const state_alphabet& alphabet)
{
    dp_table t{{}, indicator_table(0, alphabet, 1, 1)};
    t.grid.at(0, 0, 0) = 1;
    return t;
}

inline dp_table handle_leaf(const nice_node& node, const sigma_rho_spec& spec)
{
    if (node.kind != node_kind::leaf || !node.bag.empty())
        throw error(error_kind::structural_error, "leaf handler given a non-leaf node");
    return handle_leaf(spec.alphabet());
}

/// The new vertex enters at sigma_0 or rho_0; counts and (k, l) unchanged.
inline dp_table handle_introduce(const nice_node& node, const dp_table& child, const sigma_rho_spec& spec)
{
    const vertex v = node.v;
    if (detail::bag_position(child.bag, v) >= 0)
        throw error(error_kind::structural_error, "introduced vertex already in child bag");
    std::vector<vertex> bag = child.bag;
    bag.insert(std::upper_bound(bag.begin(), bag.end(), v), v);
    const int p = detail::bag_position(bag, v);
    const state_alphabet alphabet = spec.alphabet();
    dp_table out{bag, indicator_table(static_cast<int>(bag.size()), alphabet, child.grid.k_ext, child.grid.l_ext)};

    const std::size_t low = out.grid.codec().weight(p);
    const std::size_t a = static_cast<std::size_t>(alphabet.size());
    const std::size_t width = static_cast<std::size_t>(child.grid.k_ext) * child.grid.l_ext;
    const std::size_t entering[2] = {static_cast<std::size_t>(alphabet.index({side::selected, 0})),
        static_cast<std::size_t>(alphabet.index({side::unselected, 0}))};
    for (std::size_t code = 0; code < child.grid.code_count(); ++code) {
        if (!detail::row_nonzero(child.grid, code))
            continue;
        const std::size_t high = code / low, rest = code % low;
        for (std::size_t digit : entering) {
            const std::size_t target = (high * a + digit) * low + rest;
            std::copy_n(&child.grid.cells[code * width], width, &out.grid.cells[target * width]);
        }
    }
    return out;
}

/// Union of the four forget branches: v selected or not, satisfied or violated.
inline dp_table handle_forget(const nice_node& node, const dp_table& child, const graph& g, const sigma_rho_spec& spec)
{
    const vertex v = node.v;
    const int p = detail::bag_position(child.bag, v);
    if (p < 0)
        throw error(error_kind::structural_error, "forgotten vertex not in child bag");
    std::vector<vertex> bag = child.bag;
    bag.erase(bag.begin() + p);
    const state_alphabet alphabet = spec.alphabet();
    const int ck = child.grid.k_ext, cl = child.grid.l_ext;
    dp_table out{bag, indicator_table(static_cast<int>(bag.size()), alphabet, ck + 1, cl + 1)};

    const state_codec in_codec = child.grid.codec();
    const state_codec out_codec = out.grid.codec();
    const auto neighbours = detail::neighbour_positions(child.bag, v, g);
    std::vector<int> digits, projected(bag.size());
    for (std::size_t code = 0; code < child.grid.code_count(); ++code) {
        if (!detail::row_nonzero(child.grid, code))
            continue;
        digits = detail::digits_of(in_codec, code);
        const state mine = alphabet.at(digits[p]);
        int h = 0;
        for (int q : neighbours)
            h += alphabet.at(digits[q]).side == side::selected ? 1 : 0;
        const bool selected = mine.side == side::selected;
        const bool satisfied = spec.satisfied(mine.side, mine.count + h);
        if (selected)
            for (int q : neighbours) {
                state s = alphabet.at(digits[q]);
                digits[q] = alphabet.index({s.side, std::min(s.count + 1, alphabet.cap(s.side))});
            }
        for (std::size_t i = 0, j = 0; i < digits.size(); ++i)
            if (static_cast<int>(i) != p)
                projected[j++] = digits[i];
        const std::size_t target = detail::code_of(out_codec, projected);
        const int dk = selected ? 1 : 0, dl = satisfied ? 0 : 1;
        for (int k = 0; k < ck; ++k)
            for (int l = 0; l < cl; ++l)
                if (child.grid.at(code, k, l))
                    out.grid.at(target, k + dk, l + dl) = 1;
    }
    return out;
}

/// Combines compatible entries of the two children with additive k and l.
inline dp_table handle_join(const nice_node& node, const dp_table& left, const dp_table& right,
    const sigma_rho_spec& spec, join_kernel kernel = join_kernel::automatic, op_counter* counter = nullptr)
{
    if (left.bag != right.bag || (!node.bag.empty() && node.bag != left.bag))
        throw error(error_kind::structural_error, "join children have different bags");
    (void)spec;
    const int cap = std::max(left.grid.k_ext + right.grid.k_ext, left.grid.l_ext + right.grid.l_ext);
    if (kernel == join_kernel::automatic)
        kernel = estimate_fast_cost(left.grid, right.grid) <= estimate_naive_cost(left.grid, right.grid)
            ? join_kernel::fast
            : join_kernel::naive;
    count_table counts = kernel == join_kernel::fast ? convolve_grid_fast(left.grid, right.grid, cap, cap, counter)
                                                     : convolve_grid_naive(left.grid, right.grid, cap, cap, counter);
    dp_table out{left.bag, indicator_table(counts.arity, counts.alphabet, counts.k_ext, counts.l_ext)};
    for (std::size_t i = 0; i < counts.cells.size(); ++i)
        out.grid.cells[i] = counts.cells[i] > 0 ? 1 : 0;
    return out;
}

namespace detail {

    class dp_runner {
    public:
        dp_runner(const graph& g, const nice_tree_decomposition& ntd, const sigma_rho_spec& spec,
            const solve_options& options)
            : g_(g), ntd_(ntd), spec_(spec), options_(options)
        {
        }

        /// Table of `top`, computing its subtree and releasing intermediate tables as it goes.
        dp_table compute(int top)
        {
            std::vector<int> chain;
            int bottom = top;
            while (ntd_.nodes[bottom].kind == node_kind::introduce || ntd_.nodes[bottom].kind == node_kind::forget) {
                chain.push_back(bottom);
                bottom = ntd_.nodes[bottom].children.front();
            }
            dp_table table = compute_bottom(bottom);
            for (auto it = chain.rbegin(); it != chain.rend(); ++it)
                table = step(*it, table);
            return table;
        }

        /// Applies a single introduce/forget node to its child's table.
        dp_table step(int id, const dp_table& child)
        {
            const nice_node& node = ntd_.nodes[id];
            dp_table out = node.kind == node_kind::introduce ? handle_introduce(node, child, spec_)
                                                             : handle_forget(node, child, g_, spec_);
            notify(id, out);
            return out;
        }

        dp_table combine(int id, const dp_table& left, const dp_table& right)
        {
            op_counter local;
            dp_table out = handle_join(ntd_.nodes[id], left, right, spec_, options_.kernel,
                options_.counter ? &local : nullptr);
            if (options_.counter) {
                std::lock_guard lock(counter_mutex_);
                options_.counter->additions += local.additions;
                options_.counter->multiplications += local.multiplications;
            }
            notify(id, out);
            return out;
        }

    private:
        dp_table compute_bottom(int id)
        {
            const nice_node& node = ntd_.nodes[id];
            if (node.kind == node_kind::leaf) {
                dp_table out = handle_leaf(node, spec_);
                notify(id, out);
                return out;
            }
            const int left = node.children[0], right = node.children[1];
            if (options_.threads > 1 && workers_.fetch_add(1) < options_.threads - 1) {
                auto pending = std::async(std::launch::async, [this, left] { return compute(left); });
                dp_table r = compute(right);
                dp_table l = pending.get();
                workers_.fetch_sub(1);
                return combine(id, l, r);
            }
            if (options_.threads > 1)
                workers_.fetch_sub(1);
            dp_table l = compute(left);
            dp_table r = compute(right);
            return combine(id, l, r);
        }

        void notify(int id, const dp_table& table)
        {
            if (options_.observer)
                options_.observer(id, table);
        }

        const graph& g_;
        const nice_tree_decomposition& ntd_;
        const sigma_rho_spec& spec_;
        const solve_options& options_;
        std::atomic<int> workers_{0};
        std::mutex counter_mutex_;
    };

    inline void require_valid(const graph& g, const nice_tree_decomposition& ntd)
    {
        auto violations = validate_nice(ntd, g);
        if (!violations.empty())
            throw error(error_kind::invalid_decomposition, describe_all(violations));
    }

} // namespace detail

/// exact[k][l] = some S with |S| = k violates exactly l vertices.
inline feasibility_result solve(const graph& g, const nice_tree_decomposition& ntd, const sigma_rho_spec& spec,
    const solve_options& options = {})
{
    const int n = g.vertex_count();
    feasibility_result result(n);
    if (n == 0) {
        result.set_exact(0, 0, true);
    } else {
        detail::require_valid(g, ntd);
        solve_options local = options;
        if (local.threads > 1)
            local.observer = nullptr;
        detail::dp_runner runner(g, ntd, spec, local);
        dp_table root = runner.compute(ntd.root);
        for (int k = 0; k < root.grid.k_ext && k <= n; ++k)
            for (int l = 0; l < root.grid.l_ext && l <= n; ++l)
                result.set_exact(k, l, root.contains(0, k, l));
    }
    if (options.debug_flip) {
        auto [k, l] = *options.debug_flip;
        if (k >= 0 && l >= 0 && k <= n && l <= n)
            result.set_exact(k, l, !result.exact_at(k, l));
    }
    result.close_prefix();
    return result;
}

inline feasibility_result solve(const graph& g, const tree_decomposition& td, const sigma_rho_spec& spec,
    const solve_options& options = {})
{
    if (g.vertex_count() == 0)
        return solve(g, nice_tree_decomposition{}, spec, options);
    return solve(g, nicify(td, g), spec, options);
}

namespace detail {

    struct entry {
        std::size_t code;
        int k;
        int l;
    };

    /// Child entry that the forget node maps onto `target`, or nullopt.
    inline std::optional<entry> forget_preimage(const nice_node& node, const dp_table& child, const entry& target,
        const graph& g, const sigma_rho_spec& spec, bool& selected)
    {
        const state_alphabet alphabet = spec.alphabet();
        const state_codec in_codec = child.grid.codec();
        const state_codec out_codec(static_cast<int>(node.bag.size()), alphabet);
        const int p = bag_position(child.bag, node.v);
        const auto neighbours = neighbour_positions(child.bag, node.v, g);
        const auto projected = digits_of(out_codec, target.code);

        std::vector<int> base(child.bag.size());
        for (std::size_t i = 0, j = 0; i < base.size(); ++i)
            if (static_cast<int>(i) != p)
                base[i] = projected[j++];

        for (int x = 0; x < alphabet.size(); ++x) {
            const state mine = alphabet.at(x);
            const bool sel = mine.side == side::selected;
            // Each dropped neighbour state has one or two preimages under (+1, capped).
            std::vector<std::vector<int>> options(neighbours.size());
            bool possible = true;
            for (std::size_t i = 0; i < neighbours.size(); ++i) {
                const int d = base[neighbours[i]];
                if (!sel) {
                    options[i] = {d};
                    continue;
                }
                const state s = alphabet.at(d);
                if (s.count > 0)
                    options[i].push_back(alphabet.index({s.side, s.count - 1}));
                if (s.count == alphabet.cap(s.side))
                    options[i].push_back(d);
                possible = possible && !options[i].empty();
            }
            if (!possible)
                continue;
            std::vector<std::size_t> pick(neighbours.size(), 0);
            while (true) {
                std::vector<int> digits = base;
                digits[p] = x;
                int h = 0;
                for (std::size_t i = 0; i < neighbours.size(); ++i) {
                    digits[neighbours[i]] = options[i][pick[i]];
                    h += alphabet.at(digits[neighbours[i]]).side == side::selected ? 1 : 0;
                }
                const bool satisfied = spec.satisfied(mine.side, mine.count + h);
                const entry source{code_of(in_codec, digits), target.k - (sel ? 1 : 0), target.l - (satisfied ? 0 : 1)};
                if (child.contains(source.code, source.k, source.l)) {
                    selected = sel;
                    return source;
                }
                std::size_t i = 0;
                while (i < pick.size() && ++pick[i] == options[i].size())
                    pick[i++] = 0;
                if (i == pick.size())
                    break;
            }
        }
        return std::nullopt;
    }

    inline std::optional<std::pair<entry, entry>> join_preimage(const dp_table& left, const dp_table& right,
        const entry& target, const sigma_rho_spec& spec)
    {
        const state_alphabet alphabet = spec.alphabet();
        const state_codec codec = left.grid.codec();
        const auto want = digits_of(codec, target.code);
        for (std::size_t c1 = 0; c1 < left.grid.code_count(); ++c1) {
            if (!row_nonzero(left.grid, c1))
                continue;
            const auto d1 = digits_of(codec, c1);
            std::vector<std::vector<int>> options(d1.size());
            bool possible = true;
            for (std::size_t i = 0; i < d1.size() && possible; ++i) {
                const state a = alphabet.at(d1[i]), t = alphabet.at(want[i]);
                if (a.side != t.side) {
                    possible = false;
                    break;
                }
                const int cap = alphabet.cap(t.side);
                if (t.count < cap) {
                    if (t.count >= a.count)
                        options[i].push_back(alphabet.index({t.side, t.count - a.count}));
                } else {
                    for (int c = std::max(0, cap - a.count); c <= cap; ++c)
                        options[i].push_back(alphabet.index({t.side, c}));
                }
                possible = !options[i].empty();
            }
            if (!possible)
                continue;
            std::vector<std::size_t> pick(d1.size(), 0);
            while (true) {
                std::vector<int> d2(d1.size());
                for (std::size_t i = 0; i < d1.size(); ++i)
                    d2[i] = options[i][pick[i]];
                const std::size_t c2 = code_of(codec, d2);
                for (int k1 = 0; k1 <= target.k; ++k1)
                    for (int l1 = 0; l1 <= target.l; ++l1)
                        if (left.contains(c1, k1, l1) && right.contains(c2, target.k - k1, target.l - l1))
                            return std::pair{entry{c1, k1, l1}, entry{c2, target.k - k1, target.l - l1}};
                std::size_t i = 0;
                while (i < pick.size() && ++pick[i] == options[i].size())
                    pick[i++] = 0;
                if (i == pick.size())
                    break;
            }
        }
        return std::nullopt;
    }

} // namespace detail

/// A set S with |S| = k and exactly l violated vertices, or nullopt if none exists.
inline std::optional<std::vector<vertex>> witness(const graph& g, const nice_tree_decomposition& ntd,
    const sigma_rho_spec& spec, int k, int l, const solve_options& options = {})
{
    const int n = g.vertex_count();
    if (k < 0 || l < 0 || k > n || l > n)
        return std::nullopt;
    if (n == 0)
        return k == 0 && l == 0 ? std::optional<std::vector<vertex>>(std::vector<vertex>{}) : std::nullopt;
    detail::require_valid(g, ntd);
    solve_options local = options;
    local.threads = 1;
    local.observer = nullptr;
    local.debug_flip.reset();
    detail::dp_runner runner(g, ntd, spec, local);
    if (!runner.compute(ntd.root).contains(0, k, l))
        return std::nullopt;

    std::vector<vertex> chosen;
    std::vector<std::pair<int, detail::entry>> pending{{ntd.root, {0, k, l}}};
    while (!pending.empty()) {
        auto [top, target] = pending.back();
        pending.pop_back();
        // Rebuild the single-child spine below `top`, keeping its tables.
        std::vector<int> spine{top};
        while (ntd.nodes[spine.back()].kind == node_kind::introduce
            || ntd.nodes[spine.back()].kind == node_kind::forget)
            spine.push_back(ntd.nodes[spine.back()].children.front());
        std::vector<dp_table> tables(spine.size());
        tables.back() = runner.compute(spine.back());
        for (std::size_t i = spine.size() - 1; i-- > 1;)
            tables[i] = runner.step(spine[i], tables[i + 1]);

        for (std::size_t i = 0; i + 1 < spine.size(); ++i) {
            const nice_node& node = ntd.nodes[spine[i]];
            const dp_table& child = tables[i + 1];
            if (node.kind == node_kind::introduce) {
                const int p = detail::bag_position(node.bag, node.v);
                const state_codec codec(static_cast<int>(node.bag.size()), spec.alphabet());
                auto digits = detail::digits_of(codec, target.code);
                digits.erase(digits.begin() + p);
                target.code = detail::code_of(child.grid.codec(), digits);
            } else {
                bool selected = false;
                auto source = detail::forget_preimage(node, child, target, g, spec, selected);
                if (!source)
                    throw std::logic_error("witness traceback lost its entry at a forget node");
                if (selected)
                    chosen.push_back(node.v);
                target = *source;
            }
        }
        const nice_node& bottom = ntd.nodes[spine.back()];
        if (bottom.kind == node_kind::join) {
            dp_table left = runner.compute(bottom.children[0]);
            dp_table right = runner.compute(bottom.children[1]);
            auto split = detail::join_preimage(left, right, target, spec);
            if (!split)
                throw std::logic_error("witness traceback lost its entry at a join node");
            pending.emplace_back(bottom.children[0], split->first);
            pending.emplace_back(bottom.children[1], split->second);
        }
    }

    std::sort(chosen.begin(), chosen.end());
    const auto selected = to_selection(n, chosen);
    if (static_cast<int>(chosen.size()) != k || count_violations(g, selected, spec) != l)
        throw std::logic_error("witness failed its recount");
    return chosen;
}

inline std::optional<std::vector<vertex>> witness(const graph& g, const tree_decomposition& td,
    const sigma_rho_spec& spec, int k, int l, const solve_options& options = {})
{
    if (g.vertex_count() == 0)
        return witness(g, nice_tree_decomposition{}, spec, k, l, options);
    return witness(g, nicify(td, g), spec, k, l, options);
}

} // namespace srdom
