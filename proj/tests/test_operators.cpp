#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cbf/fields.hpp"
#include "cbf/operators.hpp"
#include "oracles.hpp"

using namespace cbf;

namespace {

double max_abs(const SpectralField& u) {
    double m = 0.0;
    for (const Complex& z : u.data()) m = std::max(m, std::abs(z));
    return m;
}

}  // namespace

TEST(Leray, ProjectionFormula) {
    const Grid g(8);
    SpectralField u(g);
    u.mode(0, {1, 0, 0}) = 2.0;
    u.mode(1, {1, 0, 0}) = 3.0;
    u.mode(2, {1, 0, 0}) = 4.0;
    const SpectralField p = leray_project(u);
    EXPECT_EQ(p.mode(0, {1, 0, 0}), 0.0);
    EXPECT_EQ(p.mode(1, {1, 0, 0}), 3.0);
    EXPECT_EQ(p.mode(2, {1, 0, 0}), 4.0);

    SpectralField grad_mode(g);
    const Wavevector k{1, -2, 3};
    for (int c = 0; c < 3; ++c) grad_mode.mode(c, k) = static_cast<double>(k[c]);
    EXPECT_LT(max_abs(leray_project(grad_mode)), 1e-15);

    SpectralField mean(g);
    mean(0, 0, 0, 0) = 1.0;
    mean(2, 0, 0, 0) = -2.0;
    EXPECT_EQ(leray_project(mean), mean);
}

TEST(Leray, IdempotentNonexpansiveDivergenceFree) {
    std::mt19937_64 rng(1);
    for (int n : {8, 16}) {
        for (int trial = 0; trial < 10; ++trial) {
            const SpectralField u = random_hermitian_field(Grid(n), rng);
            const SpectralField p = leray_project(u);
            EXPECT_LT(oracle::max_abs_diff(leray_project(p), p), 1e-15);
            EXPECT_LE(norm_l2(p), norm_l2(u));
            EXPECT_LE(divergence_defect(p), 1e-12 * norm_l2(u));
        }
        const SpectralField d = random_divfree_field(Grid(n), rng, 3, 1.0, true);
        EXPECT_LT(oracle::max_abs_diff(leray_project(d), d), 1e-15);
    }
}

TEST(Stokes, Eigenmode) {
    const Grid g(8);
    const SpectralField u = oracle::sin_x1(g);
    EXPECT_LT(oracle::max_abs_diff(stokes(u), u), 1e-15);
    const SpectralField k2 = oracle::mode_field(g, {1, 1, 0}, 2, Complex(0.0, 0.3));
    EXPECT_LT(oracle::max_abs_diff(stokes(k2), 2.0 * k2), 1e-15);
}

TEST(Stokes, ConstantFieldAndMeanMode) {
    const Grid g(8);
    SpectralField c(g);
    c(0, 0, 0, 0) = 1.0;
    c(1, 0, 0, 0) = 2.0;
    EXPECT_EQ(max_abs(stokes(c)), 0.0);

    std::mt19937_64 rng(2);
    const SpectralField a = stokes(random_hermitian_field(g, rng));
    for (int comp = 0; comp < 3; ++comp) EXPECT_EQ(a(comp, 0, 0, 0), 0.0);
}

TEST(Stokes, PairingEqualsDirichletEnergy) {
    std::mt19937_64 rng(3);
    for (int n : {8, 16}) {
        for (int trial = 0; trial < 10; ++trial) {
            const SpectralField u = random_divfree_field(Grid(n), rng, n / 2 - 1, 1.0, true);
            const double g2 = std::pow(norm_grad_l2(u), 2);
            EXPECT_NEAR(inner(stokes(u), u), g2, 1e-10 * g2);
        }
    }
}

TEST(Stokes, CommutesWithLeray) {
    std::mt19937_64 rng(4);
    const SpectralField u = random_hermitian_field(Grid(8), rng);
    const SpectralField a = stokes(leray_project(u));
    const SpectralField b = leray_project(stokes(u));
    EXPECT_LT(oracle::max_abs_diff(a, b), 1e-13 * max_abs(a));
    EXPECT_NEAR(norm_l2(stokes(u)), norm_stokes(u), 1e-12 * norm_stokes(u));
}

// ---------------------------------------------------------------------------

TEST(Convective, ConstantAdvection) {
    const Grid g(8);
    SpectralField u(g);
    u(0, 0, 0, 0) = 1.0;
    const SpectralField b = convective(u, oracle::sin_x1(g));
    const SpectralField expected = oracle::mode_field(g, {1, 0, 0}, 1, 0.5);  // (0, cos x1, 0)
    EXPECT_LT(oracle::max_abs_diff(b, expected), 1e-15);
}

TEST(Convective, ShearSelfAdvectionVanishes) {
    const Grid g(8);
    const SpectralField u = oracle::sin_x1(g);
    EXPECT_LT(max_abs(convective(u, u)), 1e-15);
}

TEST(Convective, MatchesConvolutionOracle) {
    std::mt19937_64 rng(5);
    const Grid g(8);
    const int m = g.dealias_cutoff();
    for (int trial = 0; trial < 3; ++trial) {
        const SpectralField u = random_divfree_field(g, rng, m, 0.0, true);
        const SpectralField v = random_divfree_field(g, rng, m, 0.0, true);
        const SpectralField ref = leray_project(oracle::convolution_convective(u, v, m));
        const SpectralField got = convective(u, v);
        EXPECT_LT(oracle::max_abs_diff(got, ref), 1e-10 * std::max(1.0, max_abs(ref)));
    }
}

TEST(Convective, GridMismatchRejected) {
    EXPECT_THROW(convective(SpectralField(Grid(8)), SpectralField(Grid(16))), std::invalid_argument);
    EXPECT_THROW(absorption(SpectralField(Grid(8)), SpectralField(Grid(16)), 3.0), std::invalid_argument);
}

TEST(Convective, Antisymmetry) {
    std::mt19937_64 rng(6);
    for (int n : {8, 16}) {
        const Grid g(n);
        for (int trial = 0; trial < 10; ++trial) {
            const SpectralField u = random_divfree_field(g, rng, g.dealias_cutoff(), 1.0, true);
            const SpectralField v = random_divfree_field(g, rng, g.dealias_cutoff(), 1.0, true);
            const double pairing = inner(convective(u, v), v);
            EXPECT_LE(std::abs(pairing), 1e-9 * norm_hs(u, 1.0) * std::pow(norm_hs(v, 1.0), 2));
        }
    }
}

// ---------------------------------------------------------------------------

TEST(Absorption, Pointwise) {
    const Vec3 a = absorption_pointwise({1, 0, 0}, 3.0);
    EXPECT_EQ(a, (Vec3{1, 0, 0}));
    const Vec3 b = absorption_pointwise({1, 2, 2}, 3.0);
    EXPECT_NEAR(b[0], 9.0, 1e-14);
    EXPECT_NEAR(b[1], 18.0, 1e-14);
    EXPECT_NEAR(b[2], 18.0, 1e-14);
    for (double r : {1.0, 1.5, 2.0, 3.0, 4.2}) EXPECT_EQ(absorption_pointwise({0, 0, 0}, r), (Vec3{0, 0, 0}));
    const Vec3 c = absorption_pointwise({0, 3, 4}, 1.5);
    EXPECT_NEAR(c[1], 3.0 * std::sqrt(5.0), 1e-14);
    EXPECT_NEAR(c[2], 4.0 * std::sqrt(5.0), 1e-14);
}

TEST(Absorption, ConstantCubic) {
    const Grid g(8);
    SpectralField u(g);
    u(0, 0, 0, 0) = 1.0;
    u(1, 0, 0, 0) = 2.0;
    u(2, 0, 0, 0) = 2.0;
    const SpectralField c = absorption(u, 3.0);
    EXPECT_NEAR(c(0, 0, 0, 0).real(), 9.0, 1e-13);
    EXPECT_NEAR(c(1, 0, 0, 0).real(), 18.0, 1e-13);
    EXPECT_NEAR(c(2, 0, 0, 0).real(), 18.0, 1e-13);
    SpectralField rest = c;
    for (int comp = 0; comp < 3; ++comp) rest(comp, 0, 0, 0) = 0.0;
    EXPECT_LT(max_abs(rest), 1e-13);
}

TEST(Absorption, LinearCaseIsProjection) {
    std::mt19937_64 rng(7);
    const Grid g(8);
    const SpectralField u = random_hermitian_field(g, rng, false);
    const SpectralField v = random_hermitian_field(g, rng, false);
    EXPECT_LT(oracle::max_abs_diff(absorption(u, v, 1.0), leray_project(v)), 1e-14);
}

TEST(Absorption, RejectsSubLinearExponent) {
    const SpectralField u(Grid(8));
    EXPECT_THROW(absorption(u, u, 0.5), std::invalid_argument);
}

TEST(Absorption, CubicMatchesTripleConvolution) {
    std::mt19937_64 rng(8);
    const Grid g(8);
    for (int trial = 0; trial < 3; ++trial) {
        const SpectralField u = random_hermitian_field(g, rng, false);
        const SpectralField v = random_hermitian_field(g, rng, false);
        const SpectralField ref = leray_project(oracle::convolution_cubic(u, v, g.n() / 2 - 1));
        EXPECT_LT(oracle::max_abs_diff(absorption(u, v, 3.0), ref), 1e-8);
    }
}

TEST(Absorption, FieldMonotonicity) {
    std::mt19937_64 rng(9);
    const Grid g(16);
    for (double r : {1.0, 1.5, 2.0, 3.0}) {
        for (int trial = 0; trial < 10; ++trial) {
            const SpectralField u = random_divfree_field(g, rng, 4, 1.0, true);
            SpectralField v = random_divfree_field(g, rng, 4, 1.0, true);
            if (trial % 2) v = u + 1e-3 * v;
            const SpectralField w = u - v;
            const double pairing = inner(absorption(u, r) - absorption(v, r), w);
            const double scale = (inner(absorption(u, r), u) + inner(absorption(v, r), v));
            EXPECT_GE(pairing, -1e-9 * scale) << "r = " << r;
        }
    }
}
