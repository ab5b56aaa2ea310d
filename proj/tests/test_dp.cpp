#include <gtest/gtest.h>

#include <map>
#include <random>
#include <set>
#include <tuple>

#include "srdom/dp.hpp"
#include "srdom/oracle.hpp"
#include "support/instances.hpp"

using namespace srdom;
using namespace srdom::testing;

namespace {

const sigma_rho_spec domset = parse_spec("cofinite:0", "cofinite:1");

nice_node make_node(node_kind kind, vertex v, std::vector<vertex> bag)
{
    nice_node n;
    n.kind = kind;
    n.v = v;
    n.bag = std::move(bag);
    return n;
}

std::size_t code_of(const dp_table& t, const std::vector<state>& states) { return t.grid.codec().encode(states); }

const state s0{side::selected, 0};
const state r0{side::unselected, 0};
const state r1{side::unselected, 1};

using triple = std::tuple<std::size_t, int, int>;

std::set<triple> entries(const dp_table& t)
{
    std::set<triple> out;
    for (std::size_t code = 0; code < t.grid.code_count(); ++code)
        for (int k = 0; k < t.grid.k_ext; ++k)
            for (int l = 0; l < t.grid.l_ext; ++l)
                if (t.contains(code, k, l))
                    out.insert({code, k, l});
    return out;
}

} // namespace

TEST(Leaf, SingleEntry)
{
    const dp_table t = handle_leaf(make_node(node_kind::leaf, -1, {}), domset);
    EXPECT_EQ(t.entry_count(), 1u);
    EXPECT_TRUE(t.contains(0, 0, 0));
    EXPECT_FALSE(t.contains(0, 0, 1));
    EXPECT_FALSE(t.contains(0, 1, 0));
}

TEST(Introduce, FromLeaf)
{
    const dp_table leaf = handle_leaf(domset.alphabet());
    const dp_table t = handle_introduce(make_node(node_kind::introduce, 0, {0}), leaf, domset);
    EXPECT_EQ(t.entry_count(), 2u);
    EXPECT_TRUE(t.contains(code_of(t, {s0}), 0, 0));
    EXPECT_TRUE(t.contains(code_of(t, {r0}), 0, 0));
}

TEST(Introduce, EmptyChildGivesEmptyTable)
{
    dp_table empty = handle_leaf(domset.alphabet());
    empty.grid.cells.assign(empty.grid.cells.size(), 0);
    EXPECT_EQ(handle_introduce(make_node(node_kind::introduce, 0, {0}), empty, domset).entry_count(), 0u);
}

TEST(Introduce, TwiceGivesAllPairs)
{
    const dp_table one = handle_introduce(make_node(node_kind::introduce, 3, {3}), handle_leaf(domset.alphabet()), domset);
    const dp_table two = handle_introduce(make_node(node_kind::introduce, 1, {1, 3}), one, domset);
    EXPECT_EQ(two.bag, (std::vector<vertex>{1, 3}));
    EXPECT_EQ(two.entry_count(), 4u);
    for (state a : {s0, r0})
        for (state b : {s0, r0})
            EXPECT_TRUE(two.contains(code_of(two, {a, b}), 0, 0));
}

TEST(Introduce, VertexAlreadyPresentIsAnError)
{
    const dp_table one = handle_introduce(make_node(node_kind::introduce, 0, {0}), handle_leaf(domset.alphabet()), domset);
    EXPECT_THROW(handle_introduce(make_node(node_kind::introduce, 0, {0}), one, domset), error);
}

TEST(Forget, SelectedVertexDominatesItsBagNeighbour)
{
    // P2 a-b; child bag {a,b} holds only (a=sigma_0, b=rho_0) at (0,0)
    const graph g = path_graph(2);
    dp_table child{{0, 1}, indicator_table(2, domset.alphabet(), 1, 1)};
    child.grid.at(child.grid.codec().encode({s0, r0}), 0, 0) = 1;
    const dp_table t = handle_forget(make_node(node_kind::forget, 0, {1}), child, g, domset);
    EXPECT_EQ(t.entry_count(), 1u);
    EXPECT_TRUE(t.contains(code_of(t, {r1}), 1, 0));
}

TEST(Forget, UnselectedUndominatedVertexIsViolated)
{
    const graph g = path_graph(2);
    dp_table child{{0, 1}, indicator_table(2, domset.alphabet(), 1, 1)};
    child.grid.at(child.grid.codec().encode({r0, r0}), 0, 0) = 1;
    const dp_table t = handle_forget(make_node(node_kind::forget, 0, {1}), child, g, domset);
    EXPECT_EQ(t.entry_count(), 1u);
    EXPECT_TRUE(t.contains(code_of(t, {r0}), 0, 1));
}

TEST(Forget, EmptyChildGivesEmptyTable)
{
    const graph g = path_graph(2);
    dp_table child{{0, 1}, indicator_table(2, domset.alphabet(), 1, 1)};
    EXPECT_EQ(handle_forget(make_node(node_kind::forget, 0, {1}), child, g, domset).entry_count(), 0u);
}

TEST(Forget, NeighbourCountIncludesSelectedBagNeighbours)
{
    // P2 a-b with b selected and a at rho_0: h = 1 satisfies a
    const graph g = path_graph(2);
    dp_table child{{0, 1}, indicator_table(2, domset.alphabet(), 1, 1)};
    child.grid.at(child.grid.codec().encode({r0, s0}), 0, 0) = 1;
    const dp_table t = handle_forget(make_node(node_kind::forget, 0, {1}), child, g, domset);
    EXPECT_EQ(t.entry_count(), 1u);
    EXPECT_TRUE(t.contains(code_of(t, {s0}), 0, 0));
}

TEST(Join, SingleEntriesAddSizeAndViolations)
{
    dp_table left{{0}, indicator_table(1, domset.alphabet(), 2, 2)}, right = left;
    left.grid.at(left.grid.codec().encode({r0}), 1, 0) = 1;
    right.grid.at(right.grid.codec().encode({r1}), 0, 1) = 1;
    for (join_kernel kernel : {join_kernel::fast, join_kernel::naive, join_kernel::automatic}) {
        const dp_table t = handle_join(make_node(node_kind::join, -1, {0}), left, right, domset, kernel);
        EXPECT_EQ(t.entry_count(), 1u);
        EXPECT_TRUE(t.contains(code_of(t, {r1}), 1, 1));
    }
}

TEST(Join, EmptySideAnnihilates)
{
    dp_table left{{0}, indicator_table(1, domset.alphabet(), 2, 2)}, right = left;
    left.grid.at(0, 0, 0) = 1;
    EXPECT_EQ(handle_join(make_node(node_kind::join, -1, {0}), left, right, domset).entry_count(), 0u);
}

TEST(Join, BagMismatchIsAnError)
{
    dp_table left{{0}, indicator_table(1, domset.alphabet(), 1, 1)};
    dp_table right{{1}, indicator_table(1, domset.alphabet(), 1, 1)};
    EXPECT_THROW(handle_join(make_node(node_kind::join, -1, {0}), left, right, domset), error);
}

/// Every intermediate table against explicit enumeration over the vertices below each node.
TEST(TableSemantics, EveryEntryIsCertifiedOnSmallDecompositions)
{
    std::mt19937_64 rng(12);
    const std::vector<sigma_rho_spec> specs = {domset, parse_spec("finite:{0}", "finite:{1}"),
        parse_spec("finite:{1}", "finite:{0,2}"), parse_spec("cofinite:1", "cofinite:2")};
    for (int trial = 0; trial < 24; ++trial) {
        const auto& spec = specs[trial % specs.size()];
        const graph g = random_graph(3 + trial % 6, 0.45, rng);
        const int n = g.vertex_count();
        const auto ntd = nicify(trial % 2 ? elimination_decomposition(g) : path_decomposition(g), g);
        std::vector<std::vector<char>> below(ntd.nodes.size(), std::vector<char>(n, 0));
        for (std::size_t i = 0; i < ntd.nodes.size(); ++i) {
            for (vertex v : ntd.nodes[i].bag)
                below[i][v] = 1;
            for (int c : ntd.nodes[i].children)
                for (vertex v = 0; v < n; ++v)
                    below[i][v] |= below[c][v];
        }
        int nodes_checked = 0;
        solve_options options;
        options.observer = [&](int id, const dp_table& table) {
            const auto& bag = ntd.nodes[id].bag;
            std::vector<char> in_bag(n, 0);
            for (vertex v : bag)
                in_bag[v] = 1;
            std::vector<vertex> members;
            for (vertex v = 0; v < n; ++v)
                if (below[id][v])
                    members.push_back(v);
            std::set<triple> expected;
            for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << members.size()); ++mask) {
                std::vector<bool> selected(n, false);
                for (std::size_t i = 0; i < members.size(); ++i)
                    selected[members[i]] = mask >> i & 1;
                int k = 0, l = 0;
                for (vertex v : members)
                    if (!in_bag[v]) {
                        k += selected[v] ? 1 : 0;
                        l += violation_status(g, selected, v, spec) == vertex_status::violated ? 1 : 0;
                    }
                std::vector<state> states;
                for (vertex u : bag) {
                    int count = 0;
                    for (vertex w : g.neighbors(u))
                        count += below[id][w] && !in_bag[w] && selected[w] ? 1 : 0;
                    const side s = selected[u] ? side::selected : side::unselected;
                    states.push_back({s, std::min(count, spec.cap(s))});
                }
                expected.insert({table.grid.codec().encode(states), k, l});
            }
            EXPECT_EQ(entries(table), expected) << "node " << id << " trial " << trial;
            ++nodes_checked;
        };
        const auto result = solve(g, ntd, spec, options);
        EXPECT_EQ(nodes_checked, static_cast<int>(ntd.nodes.size()));
        EXPECT_EQ(result, brute_force_table(g, spec));
    }
}

TEST(Solve, PathOnThreeDominatingSet)
{
    const graph g = path_graph(3);
    const auto r = solve(g, trivial_decomposition(g), domset);
    EXPECT_TRUE(r.exact_at(1, 0));
    EXPECT_FALSE(r.exact_at(0, 0));
    EXPECT_EQ(r.min_size(0), 1);
}

TEST(Solve, IsolatedVertex)
{
    const graph g(1);
    const auto r = solve(g, trivial_decomposition(g), domset);
    EXPECT_FALSE(r.exact_at(0, 0));
    EXPECT_TRUE(r.exact_at(0, 1));
    EXPECT_TRUE(r.exact_at(1, 0));
}

TEST(Solve, TrianglePerfectCode)
{
    const graph g = complete_graph(3);
    EXPECT_TRUE(solve(g, trivial_decomposition(g), parse_spec("finite:{0}", "finite:{1}")).exact_at(1, 0));
}

TEST(Solve, ZeroInRhoMakesEmptySetFeasible)
{
    std::mt19937_64 rng(8);
    for (int i = 0; i < 10; ++i) {
        const graph g = random_graph(4 + i % 5, 0.5, rng);
        const auto r = solve(g, elimination_decomposition(g), parse_spec(random_set_text(rng), "finite:{0,2}"));
        EXPECT_TRUE(r.at_most_at(0, 0));
    }
}

TEST(Solve, EmptyGraph)
{
    const graph g(0);
    const auto r = solve(g, trivial_decomposition(g), domset);
    EXPECT_EQ(r.n, 0);
    EXPECT_TRUE(r.exact_at(0, 0));
}

TEST(Solve, InvalidDecompositionIsAnError)
{
    const graph g = complete_graph(3);
    tree_decomposition td;
    td.vertex_count = 3;
    td.bags = {{0, 1}, {1, 2}};
    td.tree_edges = {{0, 1}};
    try {
        solve(g, td, domset);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.kind(), error_kind::invalid_decomposition);
    }
    auto ntd = nicify(trivial_decomposition(g), g);
    ntd.nodes[ntd.root].bag.push_back(0);
    EXPECT_THROW(solve(g, ntd, domset), error);
}

TEST(Solve, KernelsThreadsAndRelabelingAgree)
{
    std::mt19937_64 rng(10);
    const std::vector<sigma_rho_spec> specs = {domset, parse_spec("finite:{0,1}", "finite:{1}"),
        parse_spec("cofinite:2", "finite:{0,3}")};
    for (int i = 0; i < 30; ++i) {
        const auto& spec = specs[i % specs.size()];
        const graph g = random_graph(5 + i % 6, 0.3, rng);
        const auto ntd = nicify(elimination_decomposition(g), g);
        const auto base = solve(g, ntd, spec);
        for (join_kernel kernel : {join_kernel::fast, join_kernel::naive})
            for (int threads : {1, 4}) {
                solve_options o;
                o.kernel = kernel;
                o.threads = threads;
                EXPECT_EQ(solve(g, ntd, spec, o), base);
            }
        std::vector<vertex> perm(g.vertex_count());
        for (int v = 0; v < g.vertex_count(); ++v)
            perm[v] = v;
        std::shuffle(perm.begin(), perm.end(), rng);
        const graph h = g.relabeled(perm);
        EXPECT_EQ(solve(h, elimination_decomposition(h), spec), base);
        for (int k = 0; k <= base.n; ++k)
            for (int l = 0; l <= base.n; ++l) {
                if (base.at_most_at(k, l)) {
                    EXPECT_TRUE(base.at_most_at(std::min(k + 1, base.n), l));
                    EXPECT_TRUE(base.at_most_at(k, std::min(l + 1, base.n)));
                }
                if (base.exact_at(k, l))
                    EXPECT_TRUE(base.at_most_at(k, l));
            }
    }
}

TEST(Solve, DebugFlipChangesOneCell)
{
    const graph g = path_graph(3);
    const auto ntd = nicify(trivial_decomposition(g), g);
    solve_options o;
    o.debug_flip = std::make_pair(3, 0);
    const auto flipped = solve(g, ntd, domset, o), clean = solve(g, ntd, domset);
    EXPECT_NE(flipped.exact_at(3, 0), clean.exact_at(3, 0));
}

TEST(Solve, CounterRecordsJoinWork)
{
    const graph g = star_graph(5);
    tree_decomposition td;
    td.vertex_count = 5;
    td.bags = {{0}, {0, 1}, {0, 2}, {0, 3}, {0, 4}};
    td.tree_edges = {{0, 1}, {0, 2}, {0, 3}, {0, 4}};
    op_counter counter;
    solve_options o;
    o.counter = &counter;
    const auto r = solve(g, td, domset, o);
    EXPECT_GT(counter.total(), 0u);
    EXPECT_EQ(r, brute_force_table(g, domset));
}
