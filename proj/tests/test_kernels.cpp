#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include <rbm/kernels.hpp>
#include <rbm/quadrature.hpp>

using namespace rbm;

TEST(Density, Values)
{
    EXPECT_NEAR(rho(0.0), 1.0 / std::numbers::pi, 1e-15);
    EXPECT_EQ(rho(2.0), 0.0);
    EXPECT_EQ(rho(-2.5), 0.0);
}

TEST(Density, UnitMass)
{
    // lambda = 2 sin(theta)
    const auto q = composite_gauss_legendre(-std::numbers::pi / 2, std::numbers::pi / 2, 8, 12);
    double s = 0.0;
    for (std::size_t i = 0; i < q.nodes.size(); ++i) s += q.weights[i] * rho(2.0 * std::sin(q.nodes[i])) * 2.0 * std::cos(q.nodes[i]);
    EXPECT_NEAR(s, 1.0, 1e-13);
}

TEST(DsKernel, Properties)
{
    EXPECT_EQ(ds_kernel(0.0), 1.0);
    for (double x : {1e-5, 3e-3, 0.5, 2.0, 7.3})
        EXPECT_DOUBLE_EQ(ds_kernel(x), ds_kernel(-x));
    // first zero of tan x = x
    EXPECT_NEAR(ds_kernel(4.493409457909064), 0.0, 1e-14);
    for (double x = 0.0; x < 50.0; x += 0.37) EXPECT_LE(std::abs(ds_kernel(x)), 1.0);
}

TEST(DsKernel, SeriesBranchContinuous)
{
    const double x = 1e-2;
    const double below = ds_kernel(std::nextafter(x, 0.0));
    const double exact = 3.0 * (std::sin(x) - x * std::cos(x)) / (x * x * x);
    EXPECT_NEAR(below, exact, 1e-10);
    EXPECT_NEAR(ds_kernel(1e-3), 1.0 - 1e-6 / 10.0, 1e-14);
}

TEST(Saddle, PointsAndCurvature)
{
    for (double l : {0.0, 0.4, -1.1, 1.7}) {
        const auto s = saddle_data(l);
        EXPECT_NEAR(s.a_plus * s.a_plus + l * l / 4.0, 1.0, 1e-14);
        EXPECT_EQ(s.a_minus, -s.a_plus);
        const double h = 1e-4;
        for (auto [a, c] : {std::pair{s.a_plus, s.c_plus}, std::pair{s.a_minus, s.c_minus}}) {
            const cplx d1 = (saddle_f(a + h, l) - saddle_f(a - h, l)) / (2.0 * h);
            const cplx d2 = (saddle_f(a + h, l) - 2.0 * saddle_f(a, l) + saddle_f(a - h, l)) / (h * h);
            EXPECT_LE(std::abs(d1), 1e-7);
            EXPECT_LE(std::abs(d2 - 2.0 * c), 1e-6);
        }
        EXPECT_NEAR(s.c0, (2.0 - l * l) / 4.0, 1e-15);
        EXPECT_NEAR(f_star(s.a_plus, l), 0.0, 1e-14);
    }
}

TEST(Saddle, StarFunctionMinimum)
{
    const double l = 0.8;
    const auto s = saddle_data(l);
    for (double x = -3.0; x <= 3.0; x += 0.05) EXPECT_GE(f_star(x, l), -1e-14);
    EXPECT_NEAR(f_star(s.a_minus, l), 0.0, 1e-14);
}

TEST(Saddle, Errors)
{
    EXPECT_THROW(saddle_f(0.0, 0.0), std::domain_error);
    EXPECT_THROW(saddle_data(2.0), std::domain_error);
    EXPECT_THROW(log_phase_factor(0.0, 0.0, -2.1, 10), std::domain_error);
}

TEST(PhaseFactor, Values)
{
    EXPECT_EQ(phase_factor(0.0, 0.0, 0.0, 100), 1.0);
    const double l = 0.5, r = rho(l);
    const double expected = l * 1.0 / (2.0 * r) + (0.25 + 0.25) / (2.0 * 10.0 * r * r);
    EXPECT_NEAR(log_phase_factor(0.5, 0.5, l, 10), expected, 1e-14);
}
