#include <gtest/gtest.h>

#include <cstdlib>
#include <random>

#include "srdom/oracle.hpp"
#include "support/instances.hpp"

using namespace srdom;
using namespace srdom::testing;

namespace {

const sigma_rho_spec domset = parse_spec("cofinite:0", "cofinite:1");

/// Plain loop over masks with from-scratch recounts, for checking the Gray-code walk.
feasibility_result slow_table(const graph& g, const sigma_rho_spec& spec)
{
    const int n = g.vertex_count();
    feasibility_result r(n);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
        std::vector<bool> s(n);
        int k = 0;
        for (int v = 0; v < n; ++v) {
            s[v] = mask >> v & 1;
            k += s[v] ? 1 : 0;
        }
        r.set_exact(k, count_violations(g, s, spec), true);
    }
    r.close_prefix();
    return r;
}

} // namespace

TEST(Oracle, PathOnThree)
{
    const auto r = brute_force_table(path_graph(3), domset);
    EXPECT_TRUE(r.exact_at(1, 0));
    EXPECT_FALSE(r.exact_at(0, 0));
    EXPECT_TRUE(r.exact_at(0, 3));
}

TEST(Oracle, EmptyGraph)
{
    const auto r = brute_force_table(graph(0), domset);
    EXPECT_EQ(r.n, 0);
    EXPECT_TRUE(r.exact_at(0, 0));
}

TEST(Oracle, ZeroInRho)
{
    std::mt19937_64 rng(1);
    for (int i = 0; i < 10; ++i)
        EXPECT_TRUE(brute_force_table(random_graph(6, 0.5, rng), parse_spec("finite:{1}", "finite:{0}")).exact_at(0, 0));
}

TEST(Oracle, MinViolations)
{
    EXPECT_EQ(min_violations(path_graph(3), domset, 1), 0);
    EXPECT_EQ(min_violations(path_graph(3), domset, 0), 3);
    EXPECT_EQ(min_violations(graph(1), domset, 0), 1);
}

TEST(Oracle, GrayWalkMatchesPlainEnumeration)
{
    std::mt19937_64 rng(2);
    for (int i = 0; i < 40; ++i) {
        const graph g = random_graph(1 + i % 10, 0.4, rng);
        const auto spec = parse_spec(random_set_text(rng), random_set_text(rng));
        EXPECT_EQ(brute_force_table(g, spec), slow_table(g, spec)) << spec.to_string();
    }
}

TEST(Oracle, EverySizeIsReached)
{
    // each size k has C(n,k) subsets, each landing in exactly one violation cell of row k
    const auto r = brute_force_table(cycle_graph(8), parse_spec("finite:{2}", "finite:{1}"));
    for (int k = 0; k <= 8; ++k) {
        int cells = 0;
        for (int l = 0; l <= 8; ++l)
            cells += r.exact_at(k, l) ? 1 : 0;
        EXPECT_GE(cells, 1) << k;
    }
}

TEST(Oracle, PrefixClosure)
{
    const auto r = brute_force_table(star_graph(6), parse_spec("finite:{0}", "finite:{1}"));
    for (int k = 0; k <= r.n; ++k)
        for (int l = 0; l <= r.n; ++l) {
            bool any = false;
            for (int a = 0; a <= k; ++a)
                for (int b = 0; b <= l; ++b)
                    any = any || r.exact_at(a, b);
            EXPECT_EQ(r.at_most_at(k, l), any);
        }
}

TEST(Oracle, RefusesAboveCap)
{
    try {
        brute_force_table(path_graph(25), domset);
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.kind(), error_kind::cap_exceeded);
    }
    EXPECT_THROW(brute_force_table(path_graph(6), domset, 5), error);
    EXPECT_NO_THROW(brute_force_table(path_graph(6), domset, 6));
}

TEST(Oracle, CapFromEnvironment)
{
    ::unsetenv("SRSOLVER_ORACLE_CAP");
    EXPECT_EQ(oracle_cap_from_environment(), default_oracle_cap);
    ::setenv("SRSOLVER_ORACLE_CAP", "24", 1);
    EXPECT_EQ(oracle_cap_from_environment(), 24);
    ::setenv("SRSOLVER_ORACLE_CAP", "junk", 1);
    EXPECT_EQ(oracle_cap_from_environment(), default_oracle_cap);
    ::unsetenv("SRSOLVER_ORACLE_CAP");
}
