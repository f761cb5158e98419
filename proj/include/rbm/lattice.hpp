#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rbm {

class SingularSystemError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Sites are indexed 0..N-1. For odd N the symmetric labels -n..n map to i - n.
struct LatticeParams {
    std::size_t N = 1;
    double W = 1.0;

    static LatticeParams with_size(std::size_t N, double W)
    {
        LatticeParams p{N, W};
        p.validate();
        return p;
    }

    static LatticeParams from_half_width(std::size_t n, double W)
    {
        return with_size(2 * n + 1, W);
    }

    std::size_t half_width() const { return (N - 1) / 2; }
    bool odd() const { return N % 2 == 1; }

    void validate() const
    {
        if (N == 0)
            throw std::invalid_argument("lattice size must be positive");
        if (!(W > 0.0) || !std::isfinite(W))
            throw std::invalid_argument("bandwidth W must be positive and finite");
    }
};

template <typename T = double>
struct TridiagonalOperator {
    std::vector<T> diagonal;
    std::vector<T> off_diagonal;

    std::size_t order() const { return diagonal.size(); }

    TridiagonalOperator scaled(T factor) const
    {
        TridiagonalOperator out = *this;
        for (auto& d : out.diagonal) d *= factor;
        for (auto& e : out.off_diagonal) e *= factor;
        return out;
    }

    template <typename S>
    std::vector<S> apply(const std::vector<S>& x) const
    {
        const std::size_t m = order();
        if (x.size() != m)
            throw std::invalid_argument("apply: size mismatch");
        std::vector<S> y(m);
        for (std::size_t i = 0; i < m; ++i) {
            S acc = S(diagonal[i]) * x[i];
            if (i > 0) acc += S(off_diagonal[i - 1]) * x[i - 1];
            if (i + 1 < m) acc += S(off_diagonal[i]) * x[i + 1];
            y[i] = acc;
        }
        return y;
    }

    Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> dense() const
    {
        const auto m = static_cast<Eigen::Index>(order());
        Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic> A =
            Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>::Zero(m, m);
        for (Eigen::Index i = 0; i < m; ++i) {
            A(i, i) = diagonal[i];
            if (i + 1 < m) {
                A(i, i + 1) = off_diagonal[i];
                A(i + 1, i) = off_diagonal[i];
            }
        }
        return A;
    }
};

inline TridiagonalOperator<double> neumann_laplacian(std::size_t m)
{
    if (m == 0)
        throw std::invalid_argument("neumann_laplacian: order must be at least 1");
    TridiagonalOperator<double> op;
    op.diagonal.assign(m, -2.0);
    op.off_diagonal.assign(m - 1, 1.0);
    op.diagonal.front() = -1.0;
    op.diagonal.back() = -1.0;
    if (m == 1) op.diagonal[0] = 0.0;
    return op;
}

inline constexpr double kPivotFloor = 1e-300;

// Solves (op + shift I) x = rhs by three-term elimination.
template <typename S, typename T>
std::vector<S> tridiagonal_solve(const TridiagonalOperator<T>& op, S shift, const std::vector<S>& rhs)
{
    const std::size_t m = op.order();
    if (rhs.size() != m)
        throw std::invalid_argument("tridiagonal_solve: size mismatch");
    std::vector<S> c(m), d(m);
    for (std::size_t i = 0; i < m; ++i) {
        S b = S(op.diagonal[i]) + shift;
        S denom = b;
        if (i > 0) denom -= S(op.off_diagonal[i - 1]) * c[i - 1];
        if (std::abs(denom) < kPivotFloor)
            throw SingularSystemError("tridiagonal_solve: vanishing pivot at row " + std::to_string(i));
        c[i] = (i + 1 < m) ? S(op.off_diagonal[i]) / denom : S(0);
        S r = rhs[i];
        if (i > 0) r -= S(op.off_diagonal[i - 1]) * d[i - 1];
        d[i] = r / denom;
    }
    std::vector<S> x(m);
    x[m - 1] = d[m - 1];
    for (std::size_t k = m - 1; k-- > 0;)
        x[k] = d[k] - c[k] * x[k + 1];
    return x;
}

// log det(op + shift I) as a sum of pivot logs. The pivots of the
// operators used here have positive real part, so the principal log of each
// pivot follows the continuous branch from real positive shifts.
template <typename T>
std::complex<double> tridiagonal_logdet(const TridiagonalOperator<T>& op, std::complex<double> shift,
                                        double pivot_tolerance = 1e-14)
{
    using C = std::complex<double>;
    const std::size_t m = op.order();
    C logdet = 0.0;
    C prev = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        C r = C(op.diagonal[i]) + shift;
        if (i > 0) {
            const C e = C(op.off_diagonal[i - 1]);
            r -= e * e / prev;
        }
        if (std::abs(r) < pivot_tolerance)
            throw SingularSystemError("tridiagonal_logdet: pivot crosses zero at row " + std::to_string(i));
        logdet += std::log(r);
        prev = r;
    }
    return logdet;
}

struct VarianceProfile {
    LatticeParams params;
    Eigen::MatrixXd J;
};

inline VarianceProfile variance_profile(const LatticeParams& params)
{
    params.validate();
    const std::size_t N = params.N;
    const auto A = neumann_laplacian(N).scaled(-params.W * params.W);
    VarianceProfile out{params, Eigen::MatrixXd(N, N)};
    std::vector<double> e(N, 0.0);
    for (std::size_t j = 0; j < N; ++j) {
        e[j] = 1.0;
        const auto col = tridiagonal_solve(A, 1.0, e);
        for (std::size_t i = 0; i < N; ++i) out.J(i, j) = col[i];
        e[j] = 0.0;
    }
    out.J = 0.5 * (out.J + out.J.transpose()).eval();
    return out;
}

// log det(1 - W^2 Delta) = -log det J
inline double log_det_inverse_profile(const LatticeParams& params)
{
    params.validate();
    const auto A = neumann_laplacian(params.N).scaled(-params.W * params.W);
    return tridiagonal_logdet(A, std::complex<double>(1.0)).real();
}

} // namespace rbm
