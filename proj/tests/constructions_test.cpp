#include "addcomb/constructions.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "addcomb/rng.hpp"
#include "oracles.hpp"

using namespace addcomb;

namespace {

GroupSpec f2n(int n) { return make_group(std::vector<std::int64_t>(n, 2)); }

}  // namespace

TEST(Build, SubgroupSpan) {
    const GroupSpec g = f2n(4);
    SetSpec spec;
    spec.kind = SetKind::Subgroup;
    spec.generators = {g.unit(0), g.unit(1)};
    const auto h = build(spec, g);
    EXPECT_EQ(h.size(), 4);
    EXPECT_EQ(sumset(h, h, +1), h);

    const GroupSpec z12 = make_group({12});
    SetSpec cyc;
    cyc.kind = SetKind::Subgroup;
    cyc.generators = {4};
    EXPECT_EQ(build(cyc, z12).indices(), (std::vector<std::int64_t>{0, 4, 8}));
}

TEST(Build, QuadraticResidues) {
    const GroupSpec z7 = make_group({7});
    SetSpec spec;
    spec.kind = SetKind::QuadraticResidues;
    EXPECT_EQ(build(spec, z7).indices(), (std::vector<std::int64_t>{1, 2, 4}));

    for (std::int64_t p : {5, 13, 101}) {
        const GroupSpec zp = make_group({p});
        EXPECT_EQ(build(spec, zp).size(), (p - 1) / 2);
    }

    EXPECT_THROW(build(spec, make_group({8})), validation_error);
    EXPECT_THROW(build(spec, f2n(3)), validation_error);
}

TEST(Build, HPlusLambda) {
    const GroupSpec g = f2n(6);
    SetSpec spec;
    spec.kind = SetKind::HPlusLambda;
    spec.dim_h = 3;
    spec.n_lambda = 3;
    const auto a = build(spec, g);
    EXPECT_EQ(a.size(), 24);  // |H| * |Lambda| = 8 * 3

    // pairwise differences of Lambda avoid H: |A_x| = |A| only on H
    SetSpec hs;
    hs.kind = SetKind::Subgroup;
    hs.generators = {g.unit(0), g.unit(1), g.unit(2)};
    const auto h = build(hs, g);
    const auto corr = correlate_circ(a.indicator(), a.indicator());
    for (auto x : h.indices()) EXPECT_EQ(corr.integer_at(x), a.size());
    const auto d = sumset(a, a, -1);
    for (auto x : d.indices()) {
        if (!h.contains(x)) {
            EXPECT_EQ(corr.integer_at(x), 2 * a.size() / 3);  // 2|A|/K
        }
    }

    SetSpec bad = spec;
    bad.n_lambda = 5;  // needs dim_h + n_lambda - 1 = 7 > 6 axes
    EXPECT_THROW(build(bad, g), validation_error);
}

TEST(Build, RandomInSubgroupWithFullDensityIsSubgroup) {
    const GroupSpec g = f2n(5);
    SetSpec sub;
    sub.kind = SetKind::Subgroup;
    sub.generators = {g.unit(0), g.unit(2), g.unit(4)};
    SetSpec rnd;
    rnd.kind = SetKind::RandomInSubgroup;
    rnd.generators = sub.generators;
    rnd.density = 1.0;
    rnd.seed = 3;
    EXPECT_EQ(build(rnd, g), build(sub, g));

    rnd.density = 0.5;
    const auto a = build(rnd, g);
    EXPECT_TRUE(a.subset_of(build(sub, g)));
}

TEST(Build, ProgressionAndExplicit) {
    const GroupSpec z11 = make_group({11});
    SetSpec prog;
    prog.kind = SetKind::Progression;
    prog.start = 2;
    prog.step = 3;
    prog.length = 4;
    EXPECT_EQ(build(prog, z11).indices(), (std::vector<std::int64_t>{0, 2, 5, 8}));

    SetSpec ex;
    ex.kind = SetKind::Explicit;
    ex.elements = {3, 5, 9};
    EXPECT_EQ(build(ex, z11).indices(), (std::vector<std::int64_t>{3, 5, 9}));
    ex.elements = {11};
    EXPECT_THROW(build(ex, z11), validation_error);
}

TEST(Build, RandomKindsAreDeterministic) {
    const GroupSpec g = make_group({64});
    SetSpec spec;
    spec.kind = SetKind::Random;
    spec.density = 0.3;
    spec.seed = 99;
    EXPECT_EQ(build(spec, g), build(spec, g));

    spec.count = 17;
    const auto a = build(spec, g);
    EXPECT_EQ(a.size(), 17);
    EXPECT_EQ(a, build(spec, g));

    SetSpec other = spec;
    other.seed = 100;
    EXPECT_NE(build(other, g).indices(), a.indices());
}

TEST(BalancedFunction, MeanRemoval) {
    const GroupSpec z7 = make_group({7});
    const auto a = GroupSubset::from_indices(z7, {1, 2, 4});
    const DenseFunction f = balanced_function(a);
    for (std::int64_t x = 0; x < 7; ++x) {
        const double expect = a.contains(x) ? 4.0 / 7.0 : -3.0 / 7.0;
        EXPECT_NEAR(f.values()[static_cast<std::size_t>(x)].real(), expect, 1e-15);
    }
    cplx sum{0.0, 0.0};
    for (const auto& v : f.values()) sum += v;
    EXPECT_NEAR(std::abs(sum), 0.0, 1e-12);

    const Spectrum fhat = dft(f);
    EXPECT_NEAR(std::abs(fhat.values()[0]), 0.0, 1e-9);
    const Spectrum ahat = dft(a.indicator());
    for (std::size_t xi = 1; xi < 7; ++xi)
        EXPECT_NEAR(std::abs(fhat.values()[xi] - ahat.values()[xi]), 0.0, 1e-9);
}

TEST(BalancedFunction, FullGroupIsZeroAndBiasMatches) {
    const GroupSpec g = make_group({3, 3});
    EXPECT_NEAR(balanced_function(GroupSubset::full(g)).norm_inf(), 0.0, 1e-15);
    EXPECT_THROW(balanced_function(GroupSubset(g)), validation_error);

    SplitMix64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = oracle::random_subset(g, 1 + static_cast<std::int64_t>(rng.below(8)), rng.next());
        const Spectrum fhat = dft(balanced_function(a));
        EXPECT_NEAR(fhat.max_magnitude_excluding_zero(), fourier_bias(a), 1e-9);
    }
}

TEST(HillClimb, TraceIsMonotoneAndDeterministic) {
    const GroupSpec g = f2n(8);
    const auto r1 = hill_climb_tightness(g, 16, "cor", 42, 120);
    const auto r2 = hill_climb_tightness(g, 16, "cor", 42, 120);
    EXPECT_EQ(r1.best, r2.best);
    EXPECT_EQ(r1.trace, r2.trace);
    ASSERT_EQ(r1.trace.size(), 121u);
    for (std::size_t i = 1; i < r1.trace.size(); ++i) EXPECT_GE(r1.trace[i], r1.trace[i - 1]);
}

TEST(HillClimb, FinalBeatsInitialAcrossSeeds) {
    const GroupSpec g = make_group({64});
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const auto r = hill_climb_tightness(g, 8, "cor", seed, 60);
        EXPECT_GE(r.trace.back(), r.trace.front());
        EXPECT_EQ(r.best.size(), 8);
    }
}

TEST(HillClimb, UnknownObjectiveRejected) {
    const GroupSpec g = make_group({16});
    EXPECT_THROW(hill_climb_tightness(g, 4, "nope", 1, 5), validation_error);
}
