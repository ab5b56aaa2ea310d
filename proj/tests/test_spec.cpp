#include <gtest/gtest.h>

#include "srdom/spec.hpp"
#include "support/instances.hpp"

using namespace srdom;

TEST(MembershipSet, Contains)
{
    EXPECT_TRUE(contains(membership_set::finite({1}), 1));
    EXPECT_FALSE(contains(membership_set::cofinite_at_least(2), 1));
    EXPECT_TRUE(contains(membership_set::cofinite_at_least(0), 10));
    EXPECT_FALSE(contains(membership_set::finite({0, 2}), 1));
    EXPECT_TRUE(contains(membership_set::finite({0, 2}), 2));
    EXPECT_FALSE(contains(membership_set::finite({0, 2}), 3));
    EXPECT_FALSE(contains(membership_set::cofinite_at_least(0), -1));
}

TEST(MembershipSet, FiniteIsNormalized)
{
    auto s = membership_set::finite({3, 1, 3});
    EXPECT_EQ(s.elements(), (std::vector<int>{1, 3}));
    EXPECT_EQ(s.min(), 1);
    EXPECT_EQ(s.max(), 3);
    EXPECT_THROW(membership_set::finite({}), error);
    EXPECT_THROW(membership_set::finite({-1}), error);
    EXPECT_THROW(membership_set::cofinite_at_least(-2), error);
}

TEST(MembershipSet, ParseAndPrint)
{
    for (const char* text : {"finite:{0,1}", "cofinite:2", "finite:{7}", "cofinite:0"})
        EXPECT_EQ(membership_set::parse(text).to_string(), text);
    EXPECT_EQ(membership_set::parse("finite:{2,0}").to_string(), "finite:{0,2}");
    for (const char* bad : {"", "finite:{}", "finite:{1,}", "finite:{a}", "cofinite:", "cofinite:-1", "finite:1",
             "finite:{ 1}", "Z>=1", "cofinite:1 "})
        EXPECT_THROW(membership_set::parse(bad), error) << bad;
}

TEST(DeriveSpec, TableExamples)
{
    EXPECT_EQ(parse_spec("cofinite:0", "cofinite:1").alphabet_size_partial, 3);
    EXPECT_EQ(parse_spec("finite:{0}", "finite:{1}").alphabet_size_partial, 5);
    const auto tpds = parse_spec("finite:{1}", "finite:{1}");
    EXPECT_EQ(tpds.alphabet_size_partial, 6);
    EXPECT_EQ(tpds.alphabet_size_nonpartial, 4);
    EXPECT_EQ(parse_spec("finite:{0}", "cofinite:1").alphabet_size_partial, 4);
}

TEST(DeriveSpec, Constants)
{
    const auto s = parse_spec("finite:{0,2}", "cofinite:3");
    EXPECT_EQ(s.s_sigma, 2);
    EXPECT_EQ(s.s_sigma_p, 3);
    EXPECT_EQ(s.s_rho, 3);
    EXPECT_EQ(s.s_rho_p, 3);
    EXPECT_EQ(s.s_max_p, 3);
    EXPECT_EQ(s.alphabet_size_partial, 8);
    EXPECT_EQ(s.alphabet_size_nonpartial, 7);
}

TEST(DeriveSpec, EveryTableRowPartialBase)
{
    for (const auto& row : srdom::testing::table_rows())
        EXPECT_EQ(parse_spec(row.sigma, row.rho).alphabet_size_partial, row.partial_base) << row.name;
}

TEST(DeriveSpec, NonpartialBaseWhereNotStructured)
{
    EXPECT_EQ(parse_spec("cofinite:0", "cofinite:1").alphabet_size_nonpartial, 3);
    for (int p = 1; p <= 3; ++p)
        EXPECT_EQ(parse_spec("cofinite:0", "cofinite:" + std::to_string(p)).alphabet_size_nonpartial, p + 2);
    EXPECT_EQ(parse_spec("finite:{0}", "cofinite:1").alphabet_size_nonpartial, 3);
    EXPECT_EQ(parse_spec("cofinite:1", "cofinite:1").alphabet_size_nonpartial, 4);
    EXPECT_EQ(parse_spec("cofinite:0", "finite:{1}").alphabet_size_nonpartial, 3);
    for (int p = 0; p <= 2; ++p)
        EXPECT_EQ(parse_spec("finite:{" + std::to_string(p) + "}", "cofinite:1").alphabet_size_nonpartial, p + 3);
}

TEST(Alphabet, OrderIsSigmaThenRho)
{
    const auto a = parse_spec("finite:{0}", "finite:{1}").alphabet();
    ASSERT_EQ(a.size(), 5);
    EXPECT_EQ(a.at(0), (state{side::selected, 0}));
    EXPECT_EQ(a.at(1), (state{side::selected, 1}));
    EXPECT_EQ(a.at(2), (state{side::unselected, 0}));
    EXPECT_EQ(a.at(4), (state{side::unselected, 2}));
    for (int i = 0; i < a.size(); ++i)
        EXPECT_EQ(a.index(a.at(i)), i);
}

TEST(States, Overflow)
{
    const auto s = parse_spec("finite:{0}", "cofinite:2");
    EXPECT_TRUE(s.is_overflow({side::selected, 1}));
    EXPECT_FALSE(s.is_overflow({side::selected, 0}));
    EXPECT_FALSE(s.is_overflow({side::unselected, 2}));
}

TEST(JoinStates, Examples)
{
    const auto s = parse_spec("cofinite:0", "finite:{0,1}");
    ASSERT_EQ(s.s_rho_p, 2);
    EXPECT_EQ(join_states({side::unselected, 1}, {side::unselected, 1}, s), (state{side::unselected, 2}));
    EXPECT_EQ(join_states({side::selected, 0}, {side::selected, 0}, s), (state{side::selected, 0}));
    EXPECT_THROW(join_states({side::unselected, 1}, {side::selected, 0}, s), error);
    try {
        join_states({side::unselected, 1}, {side::selected, 0}, s);
    } catch (const error& e) {
        EXPECT_EQ(e.kind(), error_kind::undefined_join);
    }
}

TEST(JoinStates, CommutativeAssociativeWithIdentity)
{
    const auto s = parse_spec("finite:{1,3}", "cofinite:2");
    const auto a = s.alphabet();
    for (int i = 0; i < a.size(); ++i) {
        const state x = a.at(i);
        EXPECT_EQ(join_states(x, {x.side, 0}, s), x);
        for (int j = 0; j < a.size(); ++j) {
            const state y = a.at(j);
            if (y.side != x.side)
                continue;
            EXPECT_EQ(join_states(x, y, s), join_states(y, x, s));
            for (int k = 0; k < a.size(); ++k) {
                const state z = a.at(k);
                if (z.side == x.side)
                    EXPECT_EQ(join_states(join_states(x, y, s), z, s), join_states(x, join_states(y, z, s), s));
            }
        }
    }
}

TEST(SpecErrors, EmptyFiniteRejected)
{
    try {
        parse_spec("finite:{}", "cofinite:1");
        FAIL();
    } catch (const error& e) {
        EXPECT_EQ(e.kind(), error_kind::parse_error);
    }
}
