#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include <rbm/ensemble.hpp>
#include <rbm/spectral.hpp>

#include "oracles/oracles.hpp"

using namespace rbm;

TEST(Spectral, DiagonalMatrix)
{
    MatrixSample s{Eigen::MatrixXd::Zero(3, 3)};
    s.H.diagonal() << 1.0, -2.0, 0.5;
    const auto sp = eigenvalues(s);
    EXPECT_EQ(sp.eigenvalues, (std::vector<double>{-2.0, 0.5, 1.0}));
    const auto d = signed_logdet(sp, 0.0);
    EXPECT_EQ(d.sign, 1);
    EXPECT_NEAR(d.value(), 1.0, 1e-15);
    EXPECT_EQ(signed_logdet(sp, 0.7).sign, -1);
}

TEST(Spectral, ExactZeroDeterminant)
{
    MatrixSample s{Eigen::MatrixXd::Zero(2, 2)};
    s.H(0, 0) = 1.0;
    const auto d = signed_logdet(eigenvalues(s), 1.0);
    EXPECT_EQ(d.sign, 0);
    EXPECT_EQ(d.value(), 0.0);
}

TEST(Spectral, TraceAndFrobenius)
{
    RngStream rng(5, 0);
    const auto s = sample_goe(60, rng);
    const auto sp = eigenvalues(s);
    double sum = 0.0, sq = 0.0;
    for (double l : sp.eigenvalues) {
        sum += l;
        sq += l * l;
    }
    EXPECT_NEAR(sum, s.H.trace(), 1e-11);
    EXPECT_NEAR(sq, s.H.squaredNorm(), 1e-10 * s.H.squaredNorm());
}

TEST(Spectral, LogdetMatchesRowReduction)
{
    const auto prof = variance_profile(LatticeParams::with_size(12, 2.0));
    for (int m = 0; m < 20; ++m) {
        RngStream rng(9, m);
        const auto s = sample_band(prof, rng);
        for (double lam : {-0.7, 0.0, 0.31}) {
            const Eigen::MatrixXd A = lam * Eigen::MatrixXd::Identity(12, 12) - s.H;
            const double det = oracle::row_reduction_det<double>(A);
            const double got = signed_logdet(eigenvalues(s), lam).value();
            EXPECT_LE(std::abs(got - det), 1e-9 * std::abs(det));
        }
    }
}

TEST(Ncm, CountsAndEdges)
{
    const auto h = ncm(std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0}, uniform_edges(-1.0, 1.0, 2));
    ASSERT_EQ(h.masses.size(), 2u);
    EXPECT_DOUBLE_EQ(h.masses[0], 0.4);
    EXPECT_DOUBLE_EQ(h.masses[1], 0.6);
}

TEST(Ncm, OutOfRangeDropped)
{
    const auto h = ncm(std::vector<double>{-5.0, 0.1, 5.0, 0.2}, uniform_edges(-1.0, 1.0, 4));
    double total = 0.0;
    for (double m : h.masses) total += m;
    EXPECT_DOUBLE_EQ(total, 0.5);
}

TEST(Ncm, BadEdgesRejected)
{
    EXPECT_THROW(uniform_edges(1.0, 1.0, 3), std::invalid_argument);
    EXPECT_THROW(ncm(std::vector<double>{0.0}, std::vector<double>{0.0}), std::invalid_argument);
}

TEST(Semicircle, CdfValues)
{
    EXPECT_EQ(semicircle_cdf(-3.0), 0.0);
    EXPECT_EQ(semicircle_cdf(3.0), 1.0);
    EXPECT_NEAR(semicircle_cdf(0.0), 0.5, 1e-15);
    EXPECT_NEAR(semicircle_cdf(1.0) - semicircle_cdf(-1.0), 1.0 / 3.0 + std::sqrt(3.0) / (2.0 * std::numbers::pi),
                1e-14);
}

TEST(Semicircle, ExactMassesHaveZeroDistance)
{
    NcmHistogram h;
    h.edges = uniform_edges(-2.5, 2.5, 50);
    for (std::size_t k = 0; k < 50; ++k) h.masses.push_back(semicircle_cdf(h.edges[k + 1]) - semicircle_cdf(h.edges[k]));
    EXPECT_LE(semicircle_distance(h), 1e-14);
}

TEST(Semicircle, GoeLargeN)
{
    RngStream rng(2024, 0);
    const auto sp = eigenvalues(sample_goe(1024, rng));
    EXPECT_LE(semicircle_distance(ncm(sp, uniform_edges(-2.5, 2.5, 200))), 0.02);
}
