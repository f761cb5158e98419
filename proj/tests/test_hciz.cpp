#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include <rbm/hciz.hpp>

using namespace rbm;

namespace {

Eigen::Matrix2cd diag2(cplx a, cplx b)
{
    Eigen::Matrix2cd C = Eigen::Matrix2cd::Zero();
    C(0, 0) = a;
    C(1, 1) = b;
    return C;
}

} // namespace

TEST(Hciz, FrozenValues)
{
    const HcizParams p{1.0, 1.0, -1.0, 1.0, -1.0};
    EXPECT_NEAR(std::abs(hciz_sp2(p) - 1.4615741153700916), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(hciz_u2(p) - 1.8134302039235095), 0.0, 1e-14);
    EXPECT_EQ(p.t_tilde(), cplx(4.0));
}

TEST(Hciz, DegenerateLimit)
{
    EXPECT_EQ(sp2_angular_factor(0.0), cplx(1.0));
    EXPECT_EQ(exprel(0.0), cplx(1.0));
    const HcizParams p{0.7, 0.4, 0.4, 1.0, -2.0};
    EXPECT_LE(std::abs(hciz_sp2(p) - std::exp(0.7 * 0.4 * (1.0 - 2.0))), 1e-15);
    EXPECT_LE(std::abs(hciz_u2(p) - std::exp(0.7 * 0.4 * (1.0 - 2.0))), 1e-15);
}

TEST(Hciz, TaylorCrossover)
{
    for (double arg : {0.0, 0.7, 2.1, -1.5}) {
        const cplx z = std::polar(1e-3, arg);
        EXPECT_LE(std::abs(sp2_angular_factor_taylor(z) - sp2_angular_factor_generic(z)), 1e-9);
    }
    const cplx big(40.0, 3.0);
    EXPECT_LE(std::abs(sp2_angular_factor(big) * big * big / 6.0 - (1.0 - 2.0 / big)), 1e-12);
}

TEST(Hciz, U2ClosedFormAgainstQuadrature)
{
    for (const HcizParams& p : {HcizParams{1.0, 1.0, -1.0, 1.0, -1.0}, HcizParams{0.3, 2.0, 0.5, -1.0, 1.5},
                                HcizParams{cplx(0.5, 0.8), cplx(1.0, -0.3), -0.4, cplx(0.2, 1.0), -1.1}}) {
        const cplx q = hciz_u2_quadrature(p.t, diag2(p.c1, p.c2), p.d1, p.d2);
        EXPECT_LE(std::abs(q - hciz_u2(p)), 1e-10 * std::abs(hciz_u2(p)));
    }
}

TEST(Hciz, CosetMomentsAndUnitarity)
{
    RngStream rng(8, 0);
    const int M = 200000;
    double s1 = 0.0;
    cplx e1 = 0.0;
    for (int k = 0; k < M; ++k) {
        const auto a = sample_coset_u2(rng);
        s1 += a.s;
        e1 += std::polar(1.0, a.alpha);
        if (k < 50) {
            const auto U = u2_coset_matrix(a);
            EXPECT_LE((U.adjoint() * U - Eigen::Matrix2cd::Identity()).norm(), 1e-14);
        }
    }
    EXPECT_NEAR(s1 / M, 0.5, 5.0 * std::sqrt(1.0 / 12.0 / M));
    EXPECT_LE(std::abs(e1) / M, 5.0 * std::sqrt(1.0 / M));
}

TEST(Hciz, Sp2ElementsAreSymplecticUnitary)
{
    RngStream rng(9, 0);
    const Eigen::Matrix4cd O = symplectic_form();
    for (int k = 0; k < 100; ++k) {
        const auto P = sample_sp2(rng).P;
        EXPECT_LE((P.adjoint() * P - Eigen::Matrix4cd::Identity()).norm(), 1e-13);
        EXPECT_LE((P.transpose() * O * P - O).norm(), 1e-13);
    }
}

TEST(Hciz, Sp2AngularDensity)
{
    // with c = d = (1, 0) the exponent is 1 - q, and q follows Beta(2, 2): mean 1/2, variance 1/20
    RngStream rng(10, 0);
    const int M = 200000;
    double s = 0.0, s2 = 0.0;
    for (int k = 0; k < M; ++k) {
        const auto e = sample_sp2(rng);
        const double q = 1.0 - 0.5 * (std::norm(e.P(0, 0)) + std::norm(e.P(0, 2)) + std::norm(e.P(2, 0)) +
                                      std::norm(e.P(2, 2)));
        s += q;
        s2 += q * q;
    }
    const double mean = s / M, var = s2 / M - mean * mean;
    EXPECT_NEAR(mean, 0.5, 5.0 * std::sqrt(0.05 / M));
    EXPECT_NEAR(var, 0.05, 0.002);
}

TEST(Hciz, Sp2MonteCarlo)
{
    for (const HcizParams& p : {HcizParams{1.0, 1.0, -1.0, 1.0, -1.0}, HcizParams{0.8, 1.3, -0.2, 0.5, 1.9},
                                HcizParams{-1.2, 0.6, 1.7, -0.9, 0.1}}) {
        const auto mc = hciz_sp2_monte_carlo(p, 200000, 31);
        EXPECT_LE(std::abs(mc.mean - hciz_sp2(p)), 3.0 * mc.stderr_abs) << p.t << p.c1;
    }
}

TEST(Hciz, U2MonteCarloNonDiagonal)
{
    // a non-diagonal C = R diag R*: the integral only sees its eigenvalues
    const double th = 0.4;
    Eigen::Matrix2cd R;
    R << std::cos(th), cplx(0.0, std::sin(th)), cplx(0.0, std::sin(th)), std::cos(th);
    const Eigen::Matrix2cd C = R * diag2(0.9, -0.6) * R.adjoint();
    const HcizParams p{1.1, 0.9, -0.6, 0.3, -1.2};
    const auto mc = hciz_u2_monte_carlo(p.t, C, p.d1, p.d2, 200000, 5);
    EXPECT_LE(std::abs(mc.mean - hciz_u2(p)), 3.0 * mc.stderr_abs);
    EXPECT_LE(std::abs(hciz_u2_quadrature(p.t, C, p.d1, p.d2) - hciz_u2(p)), 1e-10);
}

TEST(Reduction, UnitFunctionExact)
{
    const double t = 1.5;
    const auto r = reduction_check(t, 0.8, -0.3, [](double, double) { return 1.0; }, 1000, 4);
    const double mass = 2.0 * std::pow(std::numbers::pi, 3) / (t * t * t);
    EXPECT_NEAR(r.lhs, mass, 1e-12 * mass);
    EXPECT_EQ(r.lhs_stderr, 0.0);
    EXPECT_NEAR(r.rhs, mass, 1e-10 * mass);
}

TEST(Reduction, TraceFunctionVanishes)
{
    // Phi = y1 + y2 at d = (1, -1) integrates to zero; compared in absolute terms
    const auto r = reduction_check(1.0, 1.0, -1.0, [](double a, double b) { return a + b; }, 400000, 6);
    EXPECT_LE(std::abs(r.rhs), 1e-10);
    EXPECT_LE(std::abs(r.lhs - r.rhs), 3.0 * r.lhs_stderr);
}

TEST(Reduction, GapSquared)
{
    const auto phi = [](double a, double b) { return (a - b) * (a - b); };
    const auto r = reduction_check(1.0, 1.0, -0.5, phi, 400000, 7);
    EXPECT_LE(std::abs(r.lhs - r.rhs), 3.0 * r.lhs_stderr);
}

TEST(Reduction, Errors)
{
    const auto one = [](double, double) { return 1.0; };
    EXPECT_THROW(reduction_check(1.0, 0.5, 0.5, one, 10, 1), std::invalid_argument);
    EXPECT_THROW(reduction_check(0.0, 0.5, 0.1, one, 10, 1), std::invalid_argument);
}
