#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "ifsframe/measure.hpp"
#include "oracles.hpp"

using namespace ifsframe;

namespace {

std::vector<double> v(std::initializer_list<double> x) { return x; }

AtomicMeasure abs_coeff_measure(int half, unsigned seed) {
    std::mt19937_64 gen(seed);
    std::normal_distribution<double> nd;
    std::vector<Atom> atoms;
    for (int n = -half; n <= half; ++n) {
        atoms.push_back({static_cast<double>(n), std::abs(nd(gen))});
    }
    return AtomicMeasure(std::move(atoms));
}

} // namespace

TEST(MakeAtomic, MergesDuplicatesAndSorts) {
    auto pts = v({2, 1, 1});
    auto w = v({0.5, 0.25, 0.25});
    AtomicMeasure m = make_atomic(pts, w);
    ASSERT_EQ(m.size(), 2u);
    EXPECT_EQ(m.atoms()[0], (Atom{1.0, 0.5}));
    EXPECT_EQ(m.atoms()[1], (Atom{2.0, 0.5}));
    EXPECT_DOUBLE_EQ(m.mass(), 1.0);
}

TEST(MakeAtomic, EmptyAndDirac) {
    AtomicMeasure empty = make_atomic({}, {});
    EXPECT_TRUE(empty.empty());
    EXPECT_EQ(empty.mass(), 0.0);

    auto p = v({0});
    auto w = v({1});
    AtomicMeasure d = make_atomic(p, w);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d.atoms()[0], (Atom{0.0, 1.0}));
}

TEST(MakeAtomic, MergeToleranceOnlyCoversFloatNoise) {
    auto p = v({0.1 + 0.2, 0.3, 0.3 + 1e-9});
    auto w = v({1, 1, 1});
    AtomicMeasure m = make_atomic(p, w);
    ASSERT_EQ(m.size(), 2u);
    EXPECT_DOUBLE_EQ(m.atoms()[0].weight, 2.0);
}

TEST(MakeAtomic, Errors) {
    auto p = v({0, 1});
    auto bad = v({1, -0.5});
    auto short_w = v({1});
    EXPECT_THROW(make_atomic(p, bad), DomainError);
    EXPECT_THROW(make_atomic(p, short_w), UsageError);
}

TEST(Convolve, DiracTimesDirac) {
    Measure a = AtomicMeasure::dirac(1.5, 2.0);
    Measure b = AtomicMeasure::dirac(-0.25, 3.0);
    auto c = std::get<AtomicMeasure>(convolve(a, b));
    ASSERT_EQ(c.size(), 1u);
    EXPECT_DOUBLE_EQ(c.atoms()[0].point, 1.25);
    EXPECT_DOUBLE_EQ(c.atoms()[0].weight, 6.0);
}

TEST(Convolve, CountingTimesUniformMatchesBinCount) {
    Measure nu = integer_counting(3);
    Measure c = convolve(nu, DensityMeasure::uniform(0.0, 1.0));
    const auto& d = std::get<DensityMeasure>(c);
    // Oracle: bin [k, k+1) receives mass from every atom n with
    // [n, n+1) overlapping it, i.e. exactly n = k for |k| <= 3.
    for (int k = -5; k <= 5; ++k) {
        double expected = (k >= -3 && k <= 3) ? 1.0 : 0.0;
        EXPECT_NEAR(interval_mass(c, k, k + 1), expected, 1e-15) << k;
    }
    EXPECT_DOUBLE_EQ(d.start(), -3.0);
    EXPECT_DOUBLE_EQ(d.end(), 4.0);
    EXPECT_DOUBLE_EQ(d.mass(), 7.0);
}

TEST(Convolve, MassIsProduct) {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(-5, 5);
    std::vector<Atom> a, b;
    for (int i = 0; i < 30; ++i) {
        a.push_back({u(gen), std::abs(u(gen))});
        b.push_back({u(gen), std::abs(u(gen))});
    }
    Measure na = AtomicMeasure(a);
    Measure nb = AtomicMeasure(b);
    Measure dens = DensityMeasure(-1.0, 0.5, {0.25, 1.0, 0.5});
    EXPECT_NEAR(total_mass(convolve(na, nb)), total_mass(na) * total_mass(nb), 1e-12 * total_mass(na) * total_mass(nb));
    EXPECT_NEAR(total_mass(convolve(na, dens)), total_mass(na) * 1.75, 1e-12 * total_mass(na) * 1.75);
    EXPECT_NEAR(total_mass(convolve(dens, dens)), 1.75 * 1.75, 1e-12);
}

TEST(Convolve, DensityTimesDensityHasExactBinMasses) {
    // Oracle: integrate the convolution density (u * v)(x) = int u(y) v(x-y) dy
    // over each output bin with Simpson on a fine grid.
    DensityMeasure u(0.0, 0.5, {1.0, 0.0, 2.0});
    DensityMeasure w(0.25, 0.25, {0.5, 0.5, 1.0});
    Measure c = convolve(u, w);
    auto dens = [](const DensityMeasure& d, double x) {
        if (x < d.start() || x >= d.end()) {
            return 0.0;
        }
        auto k = static_cast<std::size_t>((x - d.start()) / d.bin_width());
        return d.masses()[k] / d.bin_width();
    };
    auto conv_density = [&](double x) {
        return oracle::simpson([&](double y) { return dens(u, y) * dens(w, x - y); }, 0.0, 1.5, 6000);
    };
    const auto& out = std::get<DensityMeasure>(c);
    EXPECT_DOUBLE_EQ(out.bin_width(), 0.25);
    for (std::size_t k = 0; k < out.bins(); ++k) {
        double a = out.bin_edge(k);
        double expected = oracle::simpson(conv_density, a, a + out.bin_width(), 60);
        EXPECT_NEAR(out.masses()[k], expected, 2e-3) << "bin " << k;
    }
    EXPECT_NEAR(out.mass(), u.mass() * w.mass(), 1e-14);
}

TEST(Convolve, SumMeasureDistributes) {
    SumMeasure mu{{DensityMeasure::uniform(0.0, 1.0), AtomicMeasure::dirac(2.0)}};
    Measure c = convolve(mu, AtomicMeasure::dirac(1.0, 0.5));
    EXPECT_NEAR(total_mass(c), 1.0, 1e-15);
    EXPECT_NEAR(interval_mass(c, 1.0, 2.0), 0.5, 1e-15);
    EXPECT_NEAR(interval_mass(c, 3.0, 3.0, Ends::closed_closed), 0.5, 1e-15);
}

TEST(Convolve, EmptyPropagatesAsZero) {
    Measure c = convolve(AtomicMeasure(), DensityMeasure::uniform(0.0, 1.0));
    EXPECT_EQ(total_mass(c), 0.0);
}

TEST(Discretize, LebesgueQuarterCells) {
    AtomicMeasure d = discretize(DensityMeasure::uniform(0.0, 1.0), 0.25);
    ASSERT_EQ(d.size(), 4u);
    for (int k = 0; k < 4; ++k) {
        EXPECT_DOUBLE_EQ(d.atoms()[k].point, 0.25 * k);
        EXPECT_DOUBLE_EQ(d.atoms()[k].weight, 0.25);
    }
}

TEST(Discretize, SingleCell) {
    AtomicMeasure d = discretize(AtomicMeasure::dirac(0.3), 1.0);
    ASSERT_EQ(d.size(), 1u);
    EXPECT_EQ(d.atoms()[0], (Atom{0.0, 1.0}));
}

TEST(Discretize, MassConservationByDirectSummation) {
    AtomicMeasure nu = abs_coeff_measure(10, 11);
    double direct = 0.0;
    for (const Atom& a : nu.atoms()) {
        direct += a.weight;
    }
    for (double r : {0.3, 1.0, 2.7}) {
        AtomicMeasure d = discretize(nu, r);
        EXPECT_NEAR(d.mass(), direct, 1e-12 * direct) << "r = " << r;
    }
}

TEST(Discretize, IdempotentOnAlignedGrid) {
    AtomicMeasure nu = abs_coeff_measure(20, 3);
    for (double r : {0.3, 0.5, 1.0, 2.7}) {
        AtomicMeasure once = discretize(nu, r);
        AtomicMeasure twice = discretize(once, r);
        EXPECT_EQ(once, twice) << "r = " << r;
    }
}

TEST(Discretize, PointRules) {
    Measure lebesgue = DensityMeasure::uniform(0.0, 1.0);
    AtomicMeasure c = discretize(lebesgue, 0.5, PointRule::center());
    ASSERT_EQ(c.size(), 2u);
    EXPECT_DOUBLE_EQ(c.atoms()[0].point, 0.25);
    EXPECT_DOUBLE_EQ(c.atoms()[1].point, 0.75);

    AtomicMeasure custom = discretize(lebesgue, 0.5, PointRule::custom({0.1, 0.4}));
    EXPECT_DOUBLE_EQ(custom.atoms()[0].point, 0.1);
    EXPECT_DOUBLE_EQ(custom.atoms()[1].point, 0.9);

    EXPECT_THROW(discretize(lebesgue, 0.5, PointRule::custom({0.5})), DomainError);
    EXPECT_THROW(discretize(lebesgue, 0.0), DomainError);
    EXPECT_THROW(discretize(lebesgue, -1.0), DomainError);
}

TEST(Mollify, DiracBecomesUniform) {
    DensityMeasure d = mollify(AtomicMeasure::dirac(0.0), 1.0);
    EXPECT_DOUBLE_EQ(d.start(), 0.0);
    EXPECT_DOUBLE_EQ(d.end(), 1.0);
    EXPECT_DOUBLE_EQ(d.mass(), 1.0);
}

TEST(Mollify, PreservesMass) {
    DensityMeasure d = mollify(integer_counting(5), 1.0);
    EXPECT_NEAR(d.mass(), 11.0, 1e-12 * 11.0);
    DensityMeasure e = mollify(abs_coeff_measure(5, 2), 0.37);
    EXPECT_NEAR(e.mass(), abs_coeff_measure(5, 2).mass(), 1e-12 * e.mass());
}

TEST(Mollify, TwoDiracsOnHalfBins) {
    auto p = v({0, 1});
    auto w = v({1, 1});
    DensityMeasure d = mollify(make_atomic(p, w), 1.0).refine(2);
    // Analytic overlap: [0,1) and [1,2) each fully covered by one unit box.
    ASSERT_EQ(d.bins(), 4u);
    for (double m : d.masses()) {
        EXPECT_DOUBLE_EQ(m, 0.5);
    }
    EXPECT_DOUBLE_EQ(d.start(), 0.0);
    EXPECT_DOUBLE_EQ(d.bin_width(), 0.5);
}

TEST(Mollify, SumMeasureBecomesOneDensity) {
    SumMeasure mu{{DensityMeasure::uniform(0.0, 1.0), AtomicMeasure::dirac(2.0)}};
    DensityMeasure d = mollify(mu, 1.0);
    EXPECT_NEAR(d.mass(), 2.0, 1e-15);
    EXPECT_NEAR(d.interval_mass(2.0, 3.0), 1.0, 1e-15);
    EXPECT_THROW(mollify(mu, 0.0), DomainError);
}

TEST(WindowMass, Examples) {
    Measure nu = integer_counting(100);
    // Integers in [0.5, 10.5) are 1..10.
    EXPECT_DOUBLE_EQ(window_mass(nu, 0.5, 10.0), 10.0);
    EXPECT_DOUBLE_EQ(window_mass(DensityMeasure::uniform(0.0, 1.0), 0.0, 0.25), 0.25);
}

TEST(WindowMass, NeverExceedsTotalMass) {
    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> x(-20, 20);
    std::uniform_real_distribution<double> len(0.01, 50);
    Measure a = abs_coeff_measure(10, 9);
    Measure d = DensityMeasure(-3.0, 0.7, {1, 2, 0, 3});
    for (int i = 0; i < 500; ++i) {
        double px = x(gen), R = len(gen);
        EXPECT_LE(window_mass(a, px, R), total_mass(a) + 1e-12);
        EXPECT_LE(window_mass(d, px, R), total_mass(d) + 1e-12);
        EXPECT_GE(window_mass(d, px, R), 0.0);
    }
}

TEST(WindowMass, PartialBinProration) {
    Measure d = DensityMeasure(0.0, 1.0, {2.0, 4.0});
    EXPECT_DOUBLE_EQ(window_mass(d, 0.5, 1.0), 1.0 + 2.0);
}
