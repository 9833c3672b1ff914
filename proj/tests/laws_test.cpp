#include "addcomb/laws.hpp"

#include <gtest/gtest.h>

#include <bit>
#include <cmath>

#include "addcomb/constructions.hpp"
#include "addcomb/rng.hpp"
#include "oracles.hpp"

using namespace addcomb;

namespace {

GroupSpec f2n(int n) { return make_group(std::vector<std::int64_t>(n, 2)); }

GroupSubset subspace(const GroupSpec& g, int dim) {
    std::vector<std::int64_t> gens;
    for (int j = 0; j < dim; ++j) gens.push_back(g.unit(j));
    SetSpec spec;
    spec.kind = SetKind::Subgroup;
    spec.generators = gens;
    return build(spec, g);
}

}  // namespace

TEST(SupportUncertainty, SubgroupAchievesEquality) {
    const GroupSpec g = f2n(4);
    const auto h = subspace(g, 2);  // |H| = 4, |H^perp| = 4
    const auto r = check_support_uncertainty(h.indicator());
    EXPECT_EQ(r.verdict, Verdict::Holds);
    EXPECT_DOUBLE_EQ(r.lhs, 16.0);
    EXPECT_DOUBLE_EQ(r.rhs, 16.0);
}

TEST(SupportUncertainty, DeltaAchievesEquality) {
    const GroupSpec g = make_group({12});
    const auto r = check_support_uncertainty(DenseFunction::delta(g));
    EXPECT_EQ(r.verdict, Verdict::Holds);
    EXPECT_DOUBLE_EQ(r.lhs, 12.0);
}

TEST(SupportUncertainty, HoldsOnRandomFunctions) {
    const GroupSpec g = make_group({12});
    SplitMix64 rng(11);
    for (int i = 0; i < 100; ++i) {
        std::vector<cplx> v(12, cplx{0.0, 0.0});
        const std::int64_t nz = 1 + static_cast<std::int64_t>(rng.below(12));
        for (std::int64_t t = 0; t < nz; ++t)
            v[rng.below(12)] = cplx{2.0 * rng.next_unit() - 1.0, 2.0 * rng.next_unit() - 1.0};
        bool any = false;
        for (const auto& z : v) any = any || z != cplx{0.0, 0.0};
        if (!any) v[0] = 1.0;
        EXPECT_EQ(check_support_uncertainty(DenseFunction(g, std::move(v))).verdict,
                  Verdict::Holds);
    }
    EXPECT_THROW(check_support_uncertainty(DenseFunction::zeros(g)), validation_error);
}

TEST(Lemma1, FrozenExamples) {
    const GroupSpec z5 = make_group({5});
    const auto a = GroupSubset::from_indices(z5, {0, 1});

    const auto r22 = check_lemma1(a, 2, 2);
    EXPECT_EQ(r22.verdict, Verdict::Holds);
    EXPECT_DOUBLE_EQ(r22.lhs, 6.0);  // = E(A)
    EXPECT_DOUBLE_EQ(r22.rhs, 6.0);

    const auto r42 = check_lemma1(a, 4, 2);
    EXPECT_EQ(r42.verdict, Verdict::Holds);
    // A^(4) = [6,4,1,1,4] so sum of squares = 70
    EXPECT_DOUBLE_EQ(r42.lhs, 70.0);

    const GroupSpec z7 = make_group({7});
    const auto b = GroupSubset::from_indices(z7, {0, 1, 3});
    EXPECT_EQ(check_lemma1(b, 2, 3).verdict, Verdict::Holds);

    EXPECT_THROW(check_lemma1(a, 3, 2), validation_error);  // odd k
}

TEST(Lemma1, ExactOnFullEnumerationOfSmallGroups) {
    for (std::int64_t m = 2; m <= 6; ++m) {
        const GroupSpec g = make_group({m});
        for (std::int64_t mask = 1; mask < (std::int64_t{1} << m); ++mask) {
            std::vector<std::int64_t> idx;
            for (std::int64_t i = 0; i < m; ++i)
                if (mask & (std::int64_t{1} << i)) idx.push_back(i);
            const auto a = GroupSubset::from_indices(g, idx);
            for (int k : {2, 4})
                for (int l : {2, 3})
                    ASSERT_EQ(check_lemma1(a, k, l).verdict, Verdict::Holds)
                        << "m=" << m << " mask=" << mask << " k=" << k << " l=" << l;
        }
    }
}

TEST(Lemma1, ExactOnAllSmallSetsUpToZ10) {
    // every A with |A| <= 5 in Z/9 and Z/10
    for (std::int64_t m : {9, 10}) {
        const GroupSpec g = make_group({m});
        for (std::int64_t mask = 1; mask < (std::int64_t{1} << m); ++mask) {
            if (std::popcount(static_cast<std::uint64_t>(mask)) > 5) continue;
            std::vector<std::int64_t> idx;
            for (std::int64_t i = 0; i < m; ++i)
                if (mask & (std::int64_t{1} << i)) idx.push_back(i);
            const auto a = GroupSubset::from_indices(g, idx);
            for (int k : {2, 4})
                for (int l : {2, 3})
                    ASSERT_EQ(check_lemma1(a, k, l).verdict, Verdict::Holds)
                        << "m=" << m << " mask=" << mask << " k=" << k << " l=" << l;
        }
    }
}

TEST(Lemma2, TrivialAndRandomInstances) {
    const GroupSpec z5 = make_group({5});
    TupleSet w(z5, 1), y(z5, 1);
    w.insert({0});
    y.insert({0});
    const auto x = GroupSubset::from_indices(z5, {0});
    const auto r = check_lemma2(w, x, y, x);
    EXPECT_EQ(r.verdict, Verdict::Holds);
    EXPECT_DOUBLE_EQ(r.lhs, 1.0);
    EXPECT_DOUBLE_EQ(r.rhs, 1.0);

    const GroupSpec z8 = make_group({8});
    SplitMix64 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        const int k1 = 1 + static_cast<int>(rng.below(2));
        const int k2 = 1 + static_cast<int>(rng.below(2));
        TupleSet wt(z8, k1), yt(z8, k2);
        for (int t = 0; t < 1 + static_cast<int>(rng.below(3)); ++t) {
            std::vector<std::int64_t> tup;
            for (int j = 0; j < k1; ++j) tup.push_back(static_cast<std::int64_t>(rng.below(8)));
            wt.insert(tup);
        }
        for (int t = 0; t < 1 + static_cast<int>(rng.below(3)); ++t) {
            std::vector<std::int64_t> tup;
            for (int j = 0; j < k2; ++j) tup.push_back(static_cast<std::int64_t>(rng.below(8)));
            yt.insert(tup);
        }
        const auto xs = oracle::random_subset(z8, 1 + static_cast<std::int64_t>(rng.below(4)), rng.next());
        const auto zs = oracle::random_subset(z8, 1 + static_cast<std::int64_t>(rng.below(4)), rng.next());
        ASSERT_EQ(check_lemma2(wt, xs, yt, zs).verdict, Verdict::Holds) << "trial " << trial;
    }
}

TEST(Lemma2, SetTriangleCorollary) {
    // |A| |B-B| <= |A+B|^2, the k1 = k2 = 1 consequence.
    const GroupSpec g = make_group({16});
    SplitMix64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = oracle::random_subset(g, 1 + static_cast<std::int64_t>(rng.below(8)), rng.next());
        const auto b = oracle::random_subset(g, 1 + static_cast<std::int64_t>(rng.below(8)), rng.next());
        const auto bb = sumset(b, b, -1);
        const auto s = sumset(a, b, +1);
        EXPECT_LE(a.size() * bb.size(), s.size() * s.size());
    }
}

TEST(KatzKoester, FrozenExample) {
    const GroupSpec z7 = make_group({7});
    const auto a = GroupSubset::from_indices(z7, {0, 1, 3});
    const auto b = GroupSubset::from_indices(z7, {0, 1});
    const auto r = check_katz_koester(a, b, 1);
    EXPECT_EQ(r.verdict, Verdict::Holds);
    EXPECT_DOUBLE_EQ(r.lhs, 2.0);  // B + A_1 = {1,2}
    EXPECT_DOUBLE_EQ(r.rhs, 4.0);  // (A+B)_1 = {1,2,3,4}
}

TEST(KatzKoester, ZeroShiftIsEquality) {
    const GroupSpec g = make_group({9});
    const auto a = oracle::random_subset(g, 4, 3);
    const auto b = oracle::random_subset(g, 3, 4);
    const auto r = check_katz_koester(a, b, 0);
    EXPECT_EQ(r.verdict, Verdict::Holds);
    EXPECT_DOUBLE_EQ(r.lhs, r.rhs);  // B + A = A + B
}

TEST(KatzKoester, RandomInstancesAllHold) {
    const GroupSpec z16 = make_group({16});
    SplitMix64 rng(41);
    for (int trial = 0; trial < 200; ++trial) {
        const auto a = oracle::random_subset(z16, 1 + static_cast<std::int64_t>(rng.below(6)), rng.next());
        const auto b = oracle::random_subset(z16, 1 + static_cast<std::int64_t>(rng.below(6)), rng.next());
        const auto x = static_cast<std::int64_t>(rng.below(16));
        ASSERT_EQ(check_katz_koester(a, b, x).verdict, Verdict::Holds);
    }
}

TEST(TheoremContext, InvariantsOnRandomPairs) {
    const GroupSpec g = make_group({2, 16});
    SplitMix64 rng(51);
    for (int trial = 0; trial < 25; ++trial) {
        const auto a = oracle::random_subset(g, 2 + static_cast<std::int64_t>(rng.below(8)), rng.next());
        const auto b = oracle::random_subset(g, 2 + static_cast<std::int64_t>(rng.below(8)), rng.next());
        const auto c = make_theorem_context(a, b);
        if (c.k > 1.0) {
            EXPECT_EQ(c.n_param,
                      static_cast<int>(std::floor(0.5 * std::log(static_cast<double>(a.size())) /
                                                  std::log(c.k))));
        } else {
            EXPECT_EQ(c.n_param, 0);  // K = 1 leaves the log base degenerate
        }
        EXPECT_LE(c.kappa_star, c.delta * c.k * c.k + 1e-12);
        // zeta K* <= omega^2 K^2 given the set triangle inequality
        EXPECT_LE(static_cast<double>(a.size()) * c.card_bb,
                  static_cast<double>(c.card_s) * c.card_s + 1e-9);
        EXPECT_LE(c.zeta * c.k_star, c.omega * c.omega * c.k * c.k + 1e-9);
    }
}

TEST(TheoremMain, SubgroupExplicitCase) {
    // A = B = an index-4 subgroup of F_2^10: |A| = 256, K = omega = zeta = 1,
    // error factor exactly 1 - delta = 3/4, lhs = 2^24 >= rhs = 2^24 * 3/4.
    const GroupSpec g = f2n(10);
    const auto h = subspace(g, 8);
    ASSERT_EQ(h.size(), 256);
    const auto [r1, r2] = eval_theorem_main(h, h);

    EXPECT_EQ(r1.verdict, Verdict::Holds);
    EXPECT_FALSE(r1.vacuous);
    EXPECT_DOUBLE_EQ(r1.lhs, 16777216.0);                 // 2^24
    EXPECT_DOUBLE_EQ(r1.extras.at("error_factor"), 0.75);
    EXPECT_DOUBLE_EQ(r1.rhs, 12582912.0);                 // 2^24 * 3/4
    ASSERT_EQ(r1.preconditions.size(), 1u);
    EXPECT_EQ(r1.preconditions[0].holds, 1);
    EXPECT_DOUBLE_EQ(r1.preconditions[0].value, 256.0);

    // report 2: M(A-A) rho^2 = 256 * 256^2 = 2^24. Its error factor
    // 1 - 16 log^2(2K)/log|A| - K^3 delta is negative even at K = 1 for
    // |A| = 256, so the rhs goes negative and the hold is vacuous (the rhs
    // is reported signed, never clamped).
    EXPECT_EQ(r2.verdict, Verdict::Holds);
    EXPECT_TRUE(r2.vacuous);
    EXPECT_DOUBLE_EQ(r2.lhs, 16777216.0);
    EXPECT_LT(r2.rhs, 0.0);
    EXPECT_DOUBLE_EQ(r2.extras.at("main_term"), 16777216.0);
}

TEST(TheoremMain, SingletonIsDegenerate) {
    const GroupSpec g = make_group({16});
    const auto a = GroupSubset::from_indices(g, {5});
    const auto [r1, r2] = eval_theorem_main(a, a);
    EXPECT_EQ(r1.verdict, Verdict::PreconditionUnmet);
    EXPECT_DOUBLE_EQ(r1.lhs, 0.0);  // rho(singleton) = 0
    EXPECT_EQ(r2.verdict, Verdict::PreconditionUnmet);
}

TEST(TheoremMain, RandomSubsetOfSubspaceReported) {
    const GroupSpec g = f2n(12);
    SetSpec spec;
    spec.kind = SetKind::RandomInSubgroup;
    for (int j = 0; j < 8; ++j) spec.generators.push_back(g.unit(j));
    spec.density = 0.5;
    spec.seed = 7;
    const auto a = build(spec, g);
    const auto [r1, r2] = eval_theorem_main(a, a);
    // desk scale cannot satisfy |A| >= (2K max(1,omega))^8 here
    EXPECT_EQ(r1.verdict, Verdict::PreconditionUnmet);
    // lhs against the error-free main term |A|^2|B|^2/|A+B| lands near 1
    EXPECT_GT(r1.lhs / r1.extras.at("main_term"), 0.5);
    EXPECT_LT(r1.lhs / r1.extras.at("main_term"), 4.0);
    EXPECT_GT(r2.lhs, 0.0);
}

TEST(TheoremCor, SubgroupRatioIsExactlyOne) {
    const GroupSpec g = f2n(8);
    const auto h = subspace(g, 5);
    const auto r = eval_theorem_cor(h);
    EXPECT_EQ(r.verdict, Verdict::ReportOnly);
    EXPECT_DOUBLE_EQ(r.ratio, 1.0);
    EXPECT_DOUBLE_EQ(r.extras.at("M"), 32.0);
    EXPECT_DOUBLE_EQ(r.extras.at("rho"), 32.0);
}

TEST(TheoremCor, FullGroupRatioZeroAndConditionViolated) {
    const GroupSpec g = make_group({32});
    const auto r = eval_theorem_cor(GroupSubset::full(g));
    EXPECT_NEAR(r.ratio, 0.0, 1e-18);  // M is zero up to rounding noise
    EXPECT_DOUBLE_EQ(r.preconditions[0].value, 1.0);  // K^2 delta = 1
}

TEST(TheoremCor, RatioBoundedByK) {
    const GroupSpec g = make_group({2, 24});
    SplitMix64 rng(61);
    for (int trial = 0; trial < 20; ++trial) {
        const auto a = oracle::random_subset(g, 2 + static_cast<std::int64_t>(rng.below(10)), rng.next());
        const auto r = eval_theorem_cor(a);
        EXPECT_GE(r.ratio, 0.0);
        EXPECT_LE(r.ratio, r.extras.at("K") + 1e-9);
    }
}

TEST(TheoremL, CollapsesToCorShapeAtTwo) {
    // need |A| > 4 l^4 = 64, so take a 7-dimensional subspace
    const GroupSpec g = f2n(10);
    const auto h = subspace(g, 7);
    const auto r = eval_theorem_l(h, 2);
    const auto cor = eval_theorem_cor(h);
    EXPECT_DOUBLE_EQ(r.lhs, cor.lhs);  // rho_2 = rho
    EXPECT_EQ(r.verdict, Verdict::Holds);
}

TEST(TheoremL, PreconditionArithmetic) {
    {
        const GroupSpec g = f2n(10);
        const auto h = subspace(g, 8);  // |A| = 256 fails |A| > 4 l^4 = 324
        const auto r = eval_theorem_l(h, 3);
        EXPECT_EQ(r.verdict, Verdict::PreconditionUnmet);
        EXPECT_EQ(r.preconditions[1].holds, 0);
        EXPECT_DOUBLE_EQ(r.preconditions[1].value, 324.0);
    }
    {
        const GroupSpec g = f2n(12);
        const auto h = subspace(g, 10);  // |A| = 1024 > 324, K = 1
        const auto r = eval_theorem_l(h, 3);
        EXPECT_EQ(r.verdict, Verdict::Holds);
        EXPECT_DOUBLE_EQ(r.extras.at("rho_l"), 1024.0);
    }
}

TEST(TheoremK, SubgroupHolds) {
    const GroupSpec g = f2n(8);
    const auto h = subspace(g, 4);  // |H| = 16, K = K* = 1 (degenerate)
    const auto [rp, rm] = eval_theorem_k(h, 1);
    for (const auto& r : {rp, rm}) {
        EXPECT_EQ(r.verdict, Verdict::Holds);
        EXPECT_DOUBLE_EQ(r.extras.at("trivial_bound_ok"), 1.0);
        // lhs = |H|^3, rhs = |H|^3 (1 - delta)
        EXPECT_DOUBLE_EQ(r.lhs, 4096.0);
        EXPECT_DOUBLE_EQ(r.rhs, 4096.0 * (1.0 - 1.0 / 16.0));
    }
}

TEST(TheoremK, TinySetGivesPreconditionUnmet) {
    const GroupSpec z5 = make_group({5});
    const auto a = GroupSubset::from_indices(z5, {0, 1});
    const auto [rp, rm] = eval_theorem_k(a, 1);
    EXPECT_EQ(rp.verdict, Verdict::PreconditionUnmet);  // |A| > 4 fails
    EXPECT_EQ(rm.verdict, Verdict::PreconditionUnmet);
    EXPECT_DOUBLE_EQ(rp.extras.at("trivial_bound_ok"), 1.0);
}

TEST(TheoremK, TrivialBoundHoldsOnRandomSets) {
    const GroupSpec g = make_group({16});
    SplitMix64 rng(71);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = oracle::random_subset(g, 2 + static_cast<std::int64_t>(rng.below(6)), rng.next());
        for (int s : {1, 2}) {
            const auto [rp, rm] = eval_theorem_k(a, s);
            EXPECT_DOUBLE_EQ(rp.extras.at("trivial_bound_ok"), 1.0);
            EXPECT_DOUBLE_EQ(rm.extras.at("trivial_bound_ok"), 1.0);
        }
    }
}

TEST(TheoremEnergy, SubgroupAndFullGroup) {
    const GroupSpec g = f2n(10);
    const auto h = subspace(g, 8);  // K = 1
    const auto r = eval_theorem_energy(h);
    EXPECT_EQ(r.verdict, Verdict::ReportOnly);
    EXPECT_DOUBLE_EQ(r.extras.at("K"), 1.0);
    EXPECT_NEAR(r.ratio, std::pow(std::log(256.0), 7.0), 1e-6);
    EXPECT_GE(r.ratio, 1.0);

    const GroupSpec z32 = make_group({32});
    const auto full = eval_theorem_energy(GroupSubset::full(z32));
    EXPECT_NEAR(full.ratio, 0.0, 1e-30);  // M is zero up to rounding noise
    EXPECT_DOUBLE_EQ(full.extras.at("K"), 1.0);
}

TEST(RemarkCounterexample, SmallPrimeAgainstDirectEvaluation) {
    const auto r = eval_remark_counterexample(7);
    EXPECT_EQ(r.verdict, Verdict::ReportOnly);
    EXPECT_DOUBLE_EQ(r.extras.at("card_A"), 3.0);  // {1,2,4}

    // direct evaluation from the definition
    const GroupSpec z7 = make_group({7});
    const auto a = GroupSubset::from_indices(z7, {1, 2, 4});
    std::vector<oracle::cplx> f(7);
    for (std::int64_t x = 0; x < 7; ++x)
        f[static_cast<std::size_t>(x)] = (a.contains(x) ? 1.0 : 0.0) - 3.0 / 7.0;
    const auto fhat = oracle::dft(f, {7});
    double max_fhat = 0.0;
    for (std::size_t i = 1; i < 7; ++i) max_fhat = std::max(max_fhat, std::abs(fhat[i]));
    double max_f = 0.0;
    for (std::size_t x = 1; x < 7; ++x) max_f = std::max(max_f, std::abs(f[x]));
    double norm1 = 0.0;
    for (const auto& v : f) norm1 += std::abs(v);
    const double expect = max_fhat * max_f * 7.0 / (norm1 * norm1);
    EXPECT_NEAR(r.ratio, expect, 1e-9);
}

TEST(RemarkCounterexample, Validation) {
    EXPECT_THROW(eval_remark_counterexample(8), validation_error);
    EXPECT_THROW(eval_remark_counterexample(1), validation_error);
}

TEST(RemarkCounterexample, RandomVariantIsDeterministic) {
    const auto a = eval_remark_counterexample(101, CounterexampleVariant::RandomBalanced, 5);
    const auto b = eval_remark_counterexample(101, CounterexampleVariant::RandomBalanced, 5);
    EXPECT_DOUBLE_EQ(a.ratio, b.ratio);
    EXPECT_DOUBLE_EQ(a.extras.at("card_A"), std::ceil(std::pow(101.0, 0.75)));
}

TEST(RemarkEnergy, SubgroupEquality) {
    const GroupSpec g = f2n(6);
    const auto h = subspace(g, 3);  // |H| = 8, K = 1
    const auto r = eval_remark_energy(h, 2);
    EXPECT_EQ(r.verdict, Verdict::Holds);
    EXPECT_DOUBLE_EQ(r.extras.at("equality"), 1.0);
    EXPECT_DOUBLE_EQ(r.lhs, std::pow(8.0, 9.0));  // |A|^(4k+1)
}

TEST(RemarkEnergy, HPlusLambdaConstruction) {
    const GroupSpec g = f2n(6);
    SetSpec spec;
    spec.kind = SetKind::HPlusLambda;
    spec.dim_h = 3;
    spec.n_lambda = 3;
    const auto a = build(spec, g);
    ASSERT_EQ(a.size(), 24);
    const auto r = eval_remark_energy(a, 2);
    EXPECT_EQ(r.verdict, Verdict::Holds);
    EXPECT_GE(r.ratio, 1.0);
    EXPECT_GT(r.extras.at("E_A_D_over_card3"), 0.0);
}

TEST(RemarkEnergy, RandomSetsHold) {
    const GroupSpec g = make_group({32});
    SplitMix64 rng(81);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a = oracle::random_subset(g, 2 + static_cast<std::int64_t>(rng.below(8)), rng.next());
        EXPECT_EQ(eval_remark_energy(a, 2).verdict, Verdict::Holds);
    }
}

TEST(IdentitySuite, AllLawsPassOnZ12) {
    const GroupSpec g = make_group({12});
    const auto rows = run_identity_suite(g, 7);
    ASSERT_EQ(rows.size(), 7u);
    for (const auto& r : rows)
        EXPECT_EQ(r.verdict, Verdict::Holds) << r.law;
}

TEST(IsomorphismInvariance, CoordinatePermutationLeavesScalarsUnchanged) {
    const GroupSpec g1 = make_group({3, 4});
    const GroupSpec g2 = make_group({4, 3});
    SplitMix64 rng(91);
    for (int trial = 0; trial < 10; ++trial) {
        const auto a1 = oracle::random_subset(g1, 4, rng.next());
        // transport along (x,y) -> (y,x)
        GroupSubset a2(g2);
        for (auto i : a1.indices()) {
            const auto c = g1.coords_of(i);
            a2.insert(g2.index_of({c[1], c[0]}));
        }
        EXPECT_EQ(rho(a1), rho(a2));
        EXPECT_EQ(energy(a1, a1), energy(a2, a2));
        EXPECT_EQ(t_k_count(a1, 3), t_k_count(a2, 3));
        EXPECT_NEAR(fourier_bias(a1), fourier_bias(a2), 1e-12 * static_cast<double>(a1.size()));
        const auto r1 = eval_theorem_cor(a1);
        const auto r2 = eval_theorem_cor(a2);
        EXPECT_NEAR(r1.ratio, r2.ratio, 1e-12 * std::max(1.0, std::abs(r1.ratio)));
    }
}
