#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "lattice.hpp"
#include "rng.hpp"

namespace rbm {

struct MatrixSample {
    Eigen::MatrixXd H;
    std::size_t size() const { return static_cast<std::size_t>(H.rows()); }
};

// sd(i, j) = sqrt(J_ij). Off-diagonal entries have variance J_ij, diagonal
// entries 2 J_ii. Entries are drawn column by column over the upper triangle.
template <typename StdDevFn>
MatrixSample sample_with_stddev(std::size_t N, StdDevFn&& sd, RngStream& rng)
{
    MatrixSample s{Eigen::MatrixXd(N, N)};
    for (std::size_t j = 0; j < N; ++j) {
        for (std::size_t i = 0; i < j; ++i) {
            const double x = sd(i, j) * rng.normal();
            s.H(i, j) = x;
            s.H(j, i) = x;
        }
        s.H(j, j) = std::numbers::sqrt2 * sd(j, j) * rng.normal();
    }
    return s;
}

inline Eigen::MatrixXd profile_stddev(const VarianceProfile& profile)
{
    return profile.J.cwiseSqrt();
}

inline MatrixSample sample_band(const VarianceProfile& profile, RngStream& rng)
{
    return sample_with_stddev(profile.params.N,
                              [&](std::size_t i, std::size_t j) { return std::sqrt(profile.J(i, j)); }, rng);
}

inline MatrixSample sample_goe(std::size_t N, RngStream& rng)
{
    if (N == 0)
        throw std::invalid_argument("sample_goe: N must be positive");
    const double sd = std::sqrt(1.0 / static_cast<double>(N));
    return sample_with_stddev(N, [sd](std::size_t, std::size_t) { return sd; }, rng);
}

} // namespace rbm
