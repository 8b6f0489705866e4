#include "cfheat/cubic.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

using namespace cfheat;

namespace {

std::array<double, 3> monic(double r1, double r2, double r3) {
    return {-(r1 + r2 + r3), r1 * r2 + r1 * r3 + r2 * r3, -r1 * r2 * r3};
}

}  // namespace

TEST(ClassifyCubic, ThreeDistinct) {
    const auto c = classify_cubic(-6, 11, -6);
    EXPECT_EQ(c.discriminant, 4.0);
    EXPECT_EQ(c.kind, RootCase::three_distinct_real);
    EXPECT_NEAR(c.roots[0].real(), 1.0, 1e-8);
    EXPECT_NEAR(c.roots[1].real(), 2.0, 1e-8);
    EXPECT_NEAR(c.roots[2].real(), 3.0, 1e-8);
}

TEST(ClassifyCubic, TripleZero) {
    const auto c = classify_cubic(0, 0, 0);
    EXPECT_EQ(c.discriminant, 0.0);
    EXPECT_EQ(c.kind, RootCase::triple_root);
    for (const auto& r : c.roots) EXPECT_EQ(std::abs(r), 0.0);
}

TEST(ClassifyCubic, ConjugatePair) {
    const auto c = classify_cubic(0, 1, 0);
    EXPECT_EQ(c.discriminant, -4.0);
    EXPECT_EQ(c.kind, RootCase::one_real_conjugate_pair);
    EXPECT_NEAR(std::abs(c.roots[0]), 0.0, 1e-14);
    EXPECT_NEAR(c.roots[1].real(), 0.0, 1e-14);
    EXPECT_NEAR(c.roots[1].imag(), 1.0, 1e-14);
    EXPECT_EQ(c.roots[2], std::conj(c.roots[1]));
}

TEST(ClassifyCubic, DoubleRoot) {
    const auto a = monic(1, 1, 2);
    const auto c = classify_cubic(a[0], a[1], a[2]);
    EXPECT_EQ(c.discriminant, 0.0);
    EXPECT_EQ(c.kind, RootCase::double_root);
    EXPECT_NEAR(c.roots[0].real(), 1.0, 1e-12);
    EXPECT_EQ(c.roots[0], c.roots[1]);
    EXPECT_NEAR(c.roots[2].real(), 2.0, 1e-12);
}

TEST(ClassifyCubic, NearTripleIsTriple) {
    const auto a = monic(-1, -1, -1 + 1e-5);
    const auto c = classify_cubic(a[0], a[1], a[2]);
    EXPECT_EQ(c.kind, RootCase::triple_root);
}

TEST(ClassifyCubic, ScaleAwareTolerance) {
    // Large but well separated roots stay distinct.
    const auto a = monic(-100, -250, -400);
    const auto c = classify_cubic(a[0], a[1], a[2]);
    EXPECT_EQ(c.kind, RootCase::three_distinct_real);
    EXPECT_GT(c.discriminant, 0.0);
    EXPECT_DOUBLE_EQ(cubic_scale(a[0], a[1], a[2]), 750.0);
}

TEST(ClassifyCubic, RootResidualAndStructure) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-8.0, 8.0);
    for (int i = 0; i < 500; ++i) {
        const double a1 = u(rng), a2 = u(rng), a3 = u(rng);
        const auto c = classify_cubic(a1, a2, a3);
        const double scale = 1 + std::max({std::abs(a1), std::abs(a2), std::abs(a3)});
        EXPECT_LE(max_root_residual(c, a1, a2, a3), 1e-8 * scale * scale * scale);
        switch (c.kind) {
        case RootCase::three_distinct_real:
            EXPECT_GT(c.discriminant, 0.0);
            EXPECT_LT(c.roots[0].real(), c.roots[1].real());
            EXPECT_LT(c.roots[1].real(), c.roots[2].real());
            break;
        case RootCase::one_real_conjugate_pair:
            EXPECT_LT(c.discriminant, 0.0);
            EXPECT_GT(c.roots[1].imag(), 0.0);
            break;
        default:
            EXPECT_LE(std::abs(c.discriminant), kDegeneracyTolerance * std::pow(cubic_scale(a1, a2, a3), 6));
        }
    }
}

TEST(CubicDiscriminant, SquaredVandermonde) {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> u(-6, 6);
    for (int i = 0; i < 100; ++i) {
        const double r1 = u(rng), r2 = u(rng), r3 = u(rng);
        const auto a = monic(r1, r2, r3);
        const double v = (r1 - r2) * (r1 - r3) * (r2 - r3);
        EXPECT_EQ(cubic_discriminant(a[0], a[1], a[2]), v * v);
    }
}

TEST(RootCase, Names) {
    EXPECT_EQ(to_string(RootCase::double_root), "double_root");
    EXPECT_EQ(to_string(RootCase::one_real_conjugate_pair), "one_real_conjugate_pair");
}
