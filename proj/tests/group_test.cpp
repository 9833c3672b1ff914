#include "addcomb/group.hpp"

#include <gtest/gtest.h>

#include <complex>

#include "addcomb/rng.hpp"

using namespace addcomb;

TEST(MakeGroup, ProductSizes) {
    EXPECT_EQ(make_group({2, 2, 2}).size(), 8);
    EXPECT_EQ(make_group({5}).size(), 5);
    EXPECT_EQ(make_group({}).size(), 1);
}

TEST(MakeGroup, CanonicalizesOrderOne) {
    const GroupSpec g = make_group({1, 5, 1});
    EXPECT_EQ(g.orders(), (std::vector<std::int64_t>{5}));
    EXPECT_EQ(g.size(), 5);
    EXPECT_TRUE(make_group({1, 1}).trivial());
}

TEST(MakeGroup, SizeAndValidationErrors) {
    EXPECT_THROW(make_group({1024, 1024, 2}), size_error);  // 2^21 > 2^20 default
    EXPECT_THROW(make_group({0, 4}), validation_error);
    EXPECT_THROW(make_group({-3}), validation_error);
    EXPECT_NO_THROW(make_group({1024, 1024}));  // exactly 2^20
}

TEST(MakeGroup, ConfigurableMaximum) {
    EXPECT_THROW(make_group({32}, 16), size_error);
    EXPECT_NO_THROW(make_group({16}, 16));
    EXPECT_THROW(make_group({2, 2, 2}, 4), size_error);
}

TEST(GroupArithmetic, AddExamples) {
    const GroupSpec z5 = make_group({5});
    EXPECT_EQ(z5.add(3, 4), 2);

    const GroupSpec f4 = make_group({2, 2});
    // (1,0) + (1,1) = (0,1); index order is (0,0),(0,1),(1,0),(1,1)
    EXPECT_EQ(f4.add(f4.index_of({1, 0}), f4.index_of({1, 1})), f4.index_of({0, 1}));

    for (std::int64_t g = 0; g < z5.size(); ++g) EXPECT_EQ(z5.add(g, 0), g);
}

TEST(GroupArithmetic, NegExamples) {
    const GroupSpec z5 = make_group({5});
    EXPECT_EQ(z5.neg(2), 3);
    EXPECT_EQ(z5.neg(0), 0);

    const GroupSpec f8 = make_group({2, 2, 2});
    for (std::int64_t g = 0; g < f8.size(); ++g) {
        EXPECT_EQ(f8.neg(g), g);  // characteristic 2
        EXPECT_EQ(f8.add(g, f8.neg(g)), 0);
    }
}

TEST(GroupArithmetic, ElementWrappersRejectGroupMismatch) {
    const GroupSpec z5 = make_group({5});
    const GroupSpec z7 = make_group({7});
    const Element a(z5, 3), b(z7, 4);
    EXPECT_THROW(add(a, b), validation_error);
    EXPECT_EQ(add(Element(z5, 3), Element(z5, 4)).index(), 2);
    EXPECT_EQ(neg(Element(z5, 2)).index(), 3);
}

TEST(Characters, Examples) {
    const GroupSpec f4 = make_group({2, 2});
    const auto v = f4.character(f4.index_of({1, 0}), f4.index_of({1, 1}));
    EXPECT_NEAR(v.real(), -1.0, 1e-12);
    EXPECT_NEAR(v.imag(), 0.0, 1e-12);

    const GroupSpec z12 = make_group({3, 4});
    for (std::int64_t g = 0; g < z12.size(); ++g) {
        const auto one = z12.character(0, g);
        EXPECT_NEAR(one.real(), 1.0, 1e-12);
        EXPECT_NEAR(one.imag(), 0.0, 1e-12);
    }

    const GroupSpec z4 = make_group({4});
    const auto i = z4.character(1, 1);
    EXPECT_NEAR(i.real(), 0.0, 1e-12);
    EXPECT_NEAR(i.imag(), 1.0, 1e-12);
}

TEST(Characters, MultiplicativityAndSymmetry) {
    for (const auto& orders :
         {std::vector<std::int64_t>{12}, {2, 2, 3}, {4, 5}, {2, 3, 5}}) {
        const GroupSpec g = make_group(orders);
        SplitMix64 rng(42);
        for (int trial = 0; trial < 200; ++trial) {
            const std::int64_t xi = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(g.size())));
            const std::int64_t x = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(g.size())));
            const std::int64_t y = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(g.size())));
            const auto lhs = g.character(xi, g.add(x, y));
            const auto rhs = g.character(xi, x) * g.character(xi, y);
            EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-12);
            EXPECT_NEAR(std::abs(g.character(xi, x) - g.character(x, xi)), 0.0, 1e-12);
            EXPECT_NEAR(std::abs(g.character(xi, x)), 1.0, 1e-12);
        }
    }
}

TEST(Indexing, RoundTripIsExactForAllElements) {
    for (const auto& orders :
         {std::vector<std::int64_t>{7}, {2, 2, 2, 2}, {3, 4, 5}, {6, 10}}) {
        const GroupSpec g = make_group(orders);
        for (std::int64_t i = 0; i < g.size(); ++i) EXPECT_EQ(g.index_of(g.coords_of(i)), i);
    }
}

TEST(Indexing, LastCoordinateFastest) {
    const GroupSpec g = make_group({3, 4});
    EXPECT_EQ(g.index_of({0, 1}), 1);
    EXPECT_EQ(g.index_of({1, 0}), 4);
    EXPECT_EQ(g.index_of({2, 3}), 11);
}

TEST(OffsetWalker, MatchesGroupArithmetic) {
    for (const auto& orders : {std::vector<std::int64_t>{9}, {2, 3, 4}, {5, 5}}) {
        const GroupSpec g = make_group(orders);
        for (std::int64_t base : {std::int64_t{0}, g.size() / 2, g.size() - 1}) {
            for (int sign : {+1, -1}) {
                detail::OffsetWalker w(g, base, sign);
                std::int64_t x = 0;
                do {
                    const std::int64_t expect =
                        sign > 0 ? g.add(base, x) : g.sub(base, x);
                    ASSERT_EQ(w.index(), expect) << g.name() << " base=" << base << " x=" << x;
                    ++x;
                } while (w.next());
                EXPECT_EQ(x, g.size());
            }
        }
    }
}
