#pragma once

// Test-only reference computations. Nothing here calls into the library code
// paths it is used to check.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

// Dense (1 - W^2 Delta)^{-1} with the Neumann Laplacian built entry by entry.
inline Eigen::MatrixXd dense_profile(std::size_t N, double W)
{
    const auto n = static_cast<Eigen::Index>(N);
    Eigen::MatrixXd A = Eigen::MatrixXd::Identity(n, n);
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        const double w2 = W * W;
        A(i, i) += w2;
        A(i + 1, i + 1) += w2;
        A(i, i + 1) -= w2;
        A(i + 1, i) -= w2;
    }
    return A.fullPivLu().inverse();
}

// Determinant by Gaussian elimination with partial pivoting.
template <typename Scalar>
Scalar row_reduction_det(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> A)
{
    const Eigen::Index n = A.rows();
    Scalar det = 1.0;
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index p = k;
        for (Eigen::Index i = k + 1; i < n; ++i)
            if (std::abs(A(i, k)) > std::abs(A(p, k))) p = i;
        if (A(p, k) == Scalar(0)) return Scalar(0);
        if (p != k) {
            A.row(p).swap(A.row(k));
            det = -det;
        }
        det *= A(k, k);
        for (Eigen::Index i = k + 1; i < n; ++i) {
            const Scalar f = A(i, k) / A(k, k);
            A.row(i) -= f * A.row(k);
        }
    }
    return det;
}

// Dense Neumann chain precision -Delta + g as a complex matrix.
inline Eigen::MatrixXcd dense_chain(std::size_t m, std::complex<double> g)
{
    const auto n = static_cast<Eigen::Index>(m);
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Zero(n, n);
    for (Eigen::Index i = 0; i < n; ++i) A(i, i) = g;
    for (Eigen::Index i = 0; i + 1 < n; ++i) {
        A(i, i) += 1.0;
        A(i + 1, i + 1) += 1.0;
        A(i, i + 1) -= 1.0;
        A(i + 1, i) -= 1.0;
    }
    return A;
}

// Exact E[det(x - H) det(y - H)] for the GOE (off-diagonal variance 1/N,
// diagonal 2/N) through its tridiagonal model: diagonal N(0, 2/N), couplings
// chi_k / sqrt(N), k = N-1, ..., 1. Second moments follow a four-term recursion.
inline double goe_f2_exact(std::size_t N, double x, double y)
{
    const double dN = static_cast<double>(N);
    const double var_a = 2.0 / dN;
    // state: E[D_k(x) D_k(y)], E[D_k(x) D_{k-1}(y)], E[D_{k-1}(x) D_k(y)], E[D_{k-1}(x) D_{k-1}(y)]
    double p11 = x * y + var_a, p12 = x, p21 = y, p22 = 1.0;
    for (std::size_t k = 2; k <= N; ++k) {
        const double n = static_cast<double>(N - k + 1); // chi degrees of the new coupling
        const double eb2 = n / dN, eb4 = n * (n + 2.0) / (dN * dN);
        const double q11 = (x * y + var_a) * p11 - x * eb2 * p12 - y * eb2 * p21 + eb4 * p22;
        const double q12 = x * p11 - eb2 * p21;
        const double q21 = y * p11 - eb2 * p12;
        p22 = p11;
        p11 = q11;
        p12 = q12;
        p21 = q21;
    }
    return p11;
}

// Gauss-Hermite rule for weight exp(-x^2) by the Golub-Welsch eigenproblem.
struct Rule {
    std::vector<double> x, w;
};

inline Rule gauss_hermite(int n)
{
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i + 1 < n; ++i) T(i, i + 1) = T(i + 1, i) = std::sqrt((i + 1) / 2.0);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(T);
    Rule r;
    for (int i = 0; i < n; ++i) {
        r.x.push_back(es.eigenvalues()(i));
        const double v = es.eigenvectors()(0, i);
        r.w.push_back(std::sqrt(std::numbers::pi) * v * v);
    }
    return r;
}

// E[g(Z)] for Z ~ N(0, var) using the Hermite rule.
template <typename G>
double gaussian_expectation(const Rule& r, double var, G&& g)
{
    double s = 0.0;
    for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * g(std::sqrt(2.0 * var) * r.x[i]);
    return s / std::sqrt(std::numbers::pi);
}

} // namespace oracle
