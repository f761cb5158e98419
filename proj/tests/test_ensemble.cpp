#include <cmath>

#include <gtest/gtest.h>

#include <rbm/ensemble.hpp>

using namespace rbm;

TEST(Ensemble, SingleSiteVariance)
{
    const auto prof = variance_profile(LatticeParams::with_size(1, 1.0));
    const int M = 100000;
    double s2 = 0.0;
    for (int m = 0; m < M; ++m) {
        RngStream rng(11, m);
        const double h = sample_band(prof, rng).H(0, 0);
        s2 += h * h;
    }
    EXPECT_NEAR(s2 / M, 2.0, 5.0 * 2.0 * std::sqrt(2.0 / M));
}

TEST(Ensemble, BandEntryVariances)
{
    const auto prof = variance_profile(LatticeParams::with_size(5, 1.0));
    const int M = 100000;
    Eigen::MatrixXd s2 = Eigen::MatrixXd::Zero(5, 5);
    double cross = 0.0;
    for (int m = 0; m < M; ++m) {
        RngStream rng(12, m);
        const auto H = sample_band(prof, rng).H;
        s2 += H.cwiseProduct(H);
        cross += H(0, 1) * H(2, 3);
        ASSERT_EQ((H - H.transpose()).cwiseAbs().maxCoeff(), 0.0);
    }
    for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
            const double var = (i == j ? 2.0 : 1.0) * prof.J(i, j);
            EXPECT_NEAR(s2(i, j) / M, var, 5.0 * var * std::sqrt(2.0 / M)) << i << "," << j;
        }
    const double sd_cross = std::sqrt(prof.J(0, 1) * prof.J(2, 3) / M);
    EXPECT_NEAR(cross / M, 0.0, 5.0 * sd_cross);
}

TEST(Ensemble, GoeTwoByTwo)
{
    const int M = 100000;
    double off = 0.0, diag = 0.0, tr = 0.0;
    for (int m = 0; m < M; ++m) {
        RngStream rng(13, m);
        const auto H = sample_goe(2, rng).H;
        off += H(0, 1) * H(0, 1);
        diag += H(0, 0) * H(0, 0);
        tr += H.trace();
    }
    EXPECT_NEAR(off / M, 0.5, 5.0 * 0.5 * std::sqrt(2.0 / M));
    EXPECT_NEAR(diag / M, 1.0, 5.0 * std::sqrt(2.0 / M));
    EXPECT_NEAR(tr / M, 0.0, 5.0 * std::sqrt(2.0 / M));
}

TEST(Ensemble, BitReproducible)
{
    const auto prof = variance_profile(LatticeParams::with_size(40, 3.0));
    RngStream a(7, 3), b(7, 3);
    EXPECT_EQ(sample_band(prof, a).H, sample_band(prof, b).H);
    RngStream c(7, 3), d(7, 3);
    EXPECT_EQ(sample_goe(40, c).H, sample_goe(40, d).H);
}

TEST(Ensemble, GoeRejectsEmpty)
{
    RngStream rng(1, 1);
    EXPECT_THROW(sample_goe(0, rng), std::invalid_argument);
}
