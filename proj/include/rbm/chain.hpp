#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "kernels.hpp"
#include "lattice.hpp"
#include "rng.hpp"

namespace rbm {

struct ChainParams {
    std::size_t m = 1;
    double W = 1.0;
    cplx gamma = 1.0;

    cplx mass() const { return 2.0 * gamma / (W * W); }

    void validate() const
    {
        if (m == 0) throw std::invalid_argument("chain length must be at least 1");
        if (!(W > 0.0)) throw std::invalid_argument("chain bandwidth must be positive");
        if (!(gamma.real() > 0.0)) throw std::invalid_argument("chain requires Re(gamma) > 0");
    }
};

// log det(-Delta + 2 gamma / W^2), accumulated pivot by pivot.
inline cplx chain_logdet(const ChainParams& p)
{
    p.validate();
    return tridiagonal_logdet(neumann_laplacian(p.m).scaled(-1.0), p.mass());
}

inline cplx chain_log_partition(const ChainParams& p)
{
    return 0.5 * static_cast<double>(p.m) * std::log(2.0 * std::numbers::pi) - 0.5 * chain_logdet(p);
}

inline cplx chain_partition(const ChainParams& p) { return std::exp(chain_log_partition(p)); }

// log of (2 pi)^{m/2} (q sinh(m q))^{-1/2} with q = sqrt(2 gamma)/W, written as
// log q + m q + log(1 - e^{-2 m q}) - log 2 so the half power stays on the
// branch continuous from real gamma.
inline cplx chain_log_asymptotic(const ChainParams& p)
{
    p.validate();
    const cplx q = std::sqrt(2.0 * p.gamma) / p.W;
    const double m = static_cast<double>(p.m);
    const cplx log_qsinh = std::log(q) + m * q + std::log(1.0 - std::exp(-2.0 * m * q)) - std::log(2.0);
    return 0.5 * m * std::log(2.0 * std::numbers::pi) - 0.5 * log_qsinh;
}

inline cplx chain_asymptotic(const ChainParams& p) { return std::exp(chain_log_asymptotic(p)); }

// Diagonal Green's function entry G_ii, 0-based index.
inline cplx green_diag(const ChainParams& p, std::size_t i)
{
    p.validate();
    if (i >= p.m) throw std::out_of_range("green_diag: index outside chain");
    std::vector<cplx> e(p.m, 0.0);
    e[i] = 1.0;
    const auto x = tridiagonal_solve(neumann_laplacian(p.m).scaled(-1.0), p.mass(), e);
    return x[i];
}

// Cholesky factor of the real precision matrix -Delta + g: diagonal l, subdiagonal e.
struct ChainCholesky {
    std::vector<double> l;
    std::vector<double> e;
};

inline ChainCholesky chain_cholesky(std::size_t m, double W, double gamma_real)
{
    ChainParams{m, W, gamma_real}.validate();
    const auto A = neumann_laplacian(m).scaled(-1.0);
    const double g = 2.0 * gamma_real / (W * W);
    ChainCholesky f{std::vector<double>(m), std::vector<double>(m, 0.0)};
    for (std::size_t i = 0; i < m; ++i) {
        double d = A.diagonal[i] + g;
        if (i > 0) {
            f.e[i] = A.off_diagonal[i - 1] / f.l[i - 1];
            d -= f.e[i] * f.e[i];
        }
        if (!(d > 0.0)) throw SingularSystemError("chain_cholesky: precision not positive definite");
        f.l[i] = std::sqrt(d);
    }
    return f;
}

// x = L^{-T} z has covariance (-Delta + g)^{-1}.
inline std::vector<double> sample_chain(const ChainCholesky& f, RngStream& rng)
{
    const std::size_t m = f.l.size();
    std::vector<double> x(m);
    for (std::size_t i = 0; i < m; ++i) x[i] = rng.normal();
    x[m - 1] /= f.l[m - 1];
    for (std::size_t k = m - 1; k-- > 0;) x[k] = (x[k] - f.e[k + 1] * x[k + 1]) / f.l[k];
    return x;
}

inline std::vector<double> sample_chain(std::size_t m, double W, double gamma_real, RngStream& rng)
{
    return sample_chain(chain_cholesky(m, W, gamma_real), rng);
}

// Empirical frequency of max_i |x_i| > delta W.
inline double tail_probability(std::size_t m, double W, double gamma_real, double delta, std::size_t draws,
                               RngStream& rng)
{
    if (!(delta > 0.0)) throw std::invalid_argument("tail_probability: delta must be positive");
    if (draws == 0) throw std::invalid_argument("tail_probability: draws must be positive");
    const auto f = chain_cholesky(m, W, gamma_real);
    const double thr = delta * W;
    std::size_t hits = 0;
    for (std::size_t k = 0; k < draws; ++k) {
        const auto x = sample_chain(f, rng);
        const bool over = std::any_of(x.begin(), x.end(), [thr](double v) { return std::abs(v) > thr; });
        hits += over ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(draws);
}

// Least-squares fit of log freq = log C1 - C2 * x with x = delta^2 W.
struct TailFit {
    double C1 = 0.0;
    double C2 = 0.0;
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 0.0;
};

inline TailFit fit_tail(const std::vector<double>& x, const std::vector<double>& freq)
{
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < x.size() && i < freq.size(); ++i)
        if (freq[i] > 0.0) {
            xs.push_back(x[i]);
            ys.push_back(std::log(freq[i]));
        }
    if (xs.size() < 2) throw std::invalid_argument("fit_tail: need two positive frequencies");
    const double n = static_cast<double>(xs.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i] / n;
        my += ys[i] / n;
    }
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    TailFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.C1 = std::exp(f.intercept);
    f.C2 = -f.slope;
    f.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
    return f;
}

} // namespace rbm
