#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

#include "kernels.hpp"
#include "quadrature.hpp"
#include "rng.hpp"

namespace rbm {

struct HcizParams {
    cplx t = 1.0;
    cplx c1 = 1.0, c2 = -1.0;
    cplx d1 = 1.0, d2 = -1.0;

    cplx t_tilde() const { return t * (c1 - c2) * (d1 - d2); }
};

namespace detail {

using lcplx = std::complex<long double>;

inline lcplx expm1(lcplx z)
{
    const long double x = z.real(), y = z.imag();
    const long double s = std::sin(y / 2);
    return {std::expm1(x) * std::cos(y) - 2 * s * s, std::exp(x) * std::sin(y)};
}

inline lcplx widen(cplx z) { return {z.real(), z.imag()}; }
inline cplx narrow(lcplx z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

} // namespace detail

// (e^{tt} - 1) / tt
inline cplx exprel(cplx tt)
{
    if (std::abs(tt) < 1e-3)
        return 1.0 + tt * (1.0 / 2.0 + tt * (1.0 / 6.0 + tt * (1.0 / 24.0 + tt / 120.0)));
    const auto z = detail::widen(tt);
    return detail::narrow(detail::expm1(z) / z);
}

inline cplx hciz_u2(const HcizParams& p)
{
    const cplx y = p.t * (p.c1 * p.d2 + p.c2 * p.d1);
    return std::exp(y) * exprel(p.t_tilde());
}

inline cplx sp2_angular_factor_generic(cplx tt)
{
    const auto z = detail::widen(tt);
    const auto m = detail::expm1(-z);
    return detail::narrow(6.0L * (2.0L * z + m * (z + 2.0L)) / (z * z * z));
}

inline cplx sp2_angular_factor_taylor(cplx tt)
{
    return 1.0 + tt * (-1.0 / 2.0 + tt * (3.0 / 20.0 + tt * (-1.0 / 30.0 + tt / 168.0)));
}

// Angular factor of the Sp(2) integral normalized to 1 at tt = 0:
// (6/tt^2) [(1 - 2/tt) + e^{-tt} (1 + 2/tt)].
inline cplx sp2_angular_factor(cplx tt)
{
    return std::abs(tt) < 1e-3 ? sp2_angular_factor_taylor(tt) : sp2_angular_factor_generic(tt);
}

inline cplx hciz_sp2(const HcizParams& p)
{
    const cplx x = p.t * (p.c1 * p.d1 + p.c2 * p.d2);
    return std::exp(x) * sp2_angular_factor(p.t_tilde());
}

struct CosetAnglesU2 {
    double s = 0.0;     // |U_12|^2
    double alpha = 0.0; // in [-pi, pi)
};

inline Eigen::Matrix2cd u2_coset_matrix(const CosetAnglesU2& a)
{
    const double sn = std::sqrt(a.s), cs = std::sqrt(1.0 - a.s);
    const cplx ph = std::polar(1.0, a.alpha);
    Eigen::Matrix2cd U;
    U << cs, sn * ph, -sn * std::conj(ph), cs;
    return U;
}

inline CosetAnglesU2 sample_coset_u2(RngStream& rng)
{
    CosetAnglesU2 a;
    a.s = rng.uniform();
    a.alpha = std::numbers::pi * (2.0 * rng.uniform() - 1.0);
    return a;
}

// exp(t Tr C U* D U) with D = diag(d1, d2)
inline cplx u2_integrand(cplx t, const Eigen::Matrix2cd& C, cplx d1, cplx d2, const Eigen::Matrix2cd& U)
{
    Eigen::Matrix2cd D = Eigen::Matrix2cd::Zero();
    D(0, 0) = d1;
    D(1, 1) = d2;
    return std::exp(t * (C * U.adjoint() * D * U).trace());
}

// Tensor quadrature over the coset: Gauss-Legendre in s, trapezoid in alpha.
inline cplx hciz_u2_quadrature(cplx t, const Eigen::Matrix2cd& C, cplx d1, cplx d2, std::size_t ns = 48,
                               std::size_t nalpha = 128)
{
    const auto gl = gauss_legendre(ns);
    cplx sum = 0.0;
    for (std::size_t i = 0; i < ns; ++i) {
        const double s = 0.5 * (gl.nodes[i] + 1.0);
        cplx inner = 0.0;
        for (std::size_t k = 0; k < nalpha; ++k) {
            const double alpha = -std::numbers::pi + 2.0 * std::numbers::pi * static_cast<double>(k) / nalpha;
            inner += u2_integrand(t, C, d1, d2, u2_coset_matrix({s, alpha}));
        }
        sum += 0.5 * gl.weights[i] * inner / static_cast<double>(nalpha);
    }
    return sum;
}

// Block matrix [[0, I], [-I, 0]]
inline Eigen::Matrix4cd symplectic_form()
{
    Eigen::Matrix4cd O = Eigen::Matrix4cd::Zero();
    O.block<2, 2>(0, 2) = Eigen::Matrix2cd::Identity();
    O.block<2, 2>(2, 0) = -Eigen::Matrix2cd::Identity();
    return O;
}

struct SpTwoElement {
    CosetAnglesU2 u;
    CosetAnglesU2 v;
    Eigen::Matrix2cd U;
    Eigen::Matrix2cd V;
    Eigen::Matrix4cd P;
};

inline SpTwoElement sp2_element(const CosetAnglesU2& u, const CosetAnglesU2& v)
{
    SpTwoElement e{u, v, u2_coset_matrix(u), u2_coset_matrix(v), Eigen::Matrix4cd::Zero()};
    Eigen::Matrix2cd sp;
    sp << 0.0, 1.0, 1.0, 0.0;
    const double sn = std::sqrt(u.s), cs = std::sqrt(1.0 - u.s);
    const cplx ph = std::polar(1.0, u.alpha);
    Eigen::Matrix4cd B;
    B.block<2, 2>(0, 0) = cs * Eigen::Matrix2cd::Identity();
    B.block<2, 2>(0, 2) = sn * ph * sp;
    B.block<2, 2>(2, 0) = -sn * std::conj(ph) * sp;
    B.block<2, 2>(2, 2) = cs * Eigen::Matrix2cd::Identity();
    Eigen::Matrix4cd A = Eigen::Matrix4cd::Zero();
    A.block<2, 2>(0, 0) = e.V;
    A.block<2, 2>(2, 2) = e.V.conjugate();
    e.P = A * B;
    return e;
}

// s_V has density 3(1 - 2s)^2 on [0, 1]; sampled by inverting its CDF.
inline SpTwoElement sample_sp2(RngStream& rng)
{
    const CosetAnglesU2 u = sample_coset_u2(rng);
    CosetAnglesU2 v;
    v.s = 0.5 * (1.0 - std::cbrt(1.0 - 2.0 * rng.uniform()));
    v.alpha = std::numbers::pi * (2.0 * rng.uniform() - 1.0);
    return sp2_element(u, v);
}

// exp(t Tr G P* H P / 2) with G = diag(d1, d2, d1, d2), H = diag(c1, c2, c1, c2)
inline cplx sp2_integrand(const HcizParams& p, const Eigen::Matrix4cd& P)
{
    const Eigen::Vector4cd g(p.d1, p.d2, p.d1, p.d2), h(p.c1, p.c2, p.c1, p.c2);
    cplx tr = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) tr += g(i) * std::norm(P(j, i)) * h(j);
    return std::exp(p.t * tr / 2.0);
}

struct McEstimate {
    cplx mean = 0.0;
    double stderr_abs = 0.0;
    std::size_t draws = 0;
};

// Streaming complex mean with Welford updates.
struct ComplexMoments {
    std::size_t n = 0;
    cplx mean = 0.0;
    double m2 = 0.0;

    void add(cplx x)
    {
        ++n;
        const cplx d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += std::real(std::conj(d) * (x - mean));
    }

    McEstimate finish() const
    {
        McEstimate e;
        e.mean = mean;
        e.draws = n;
        e.stderr_abs = n > 1 ? std::sqrt(m2 / static_cast<double>(n - 1) / static_cast<double>(n)) : 0.0;
        return e;
    }
};

inline McEstimate hciz_sp2_monte_carlo(const HcizParams& p, std::size_t draws, std::uint64_t seed,
                                       std::uint64_t stream = 0)
{
    RngStream rng(seed, stream);
    ComplexMoments acc;
    for (std::size_t k = 0; k < draws; ++k) acc.add(sp2_integrand(p, sample_sp2(rng).P));
    return acc.finish();
}

inline McEstimate hciz_u2_monte_carlo(cplx t, const Eigen::Matrix2cd& C, cplx d1, cplx d2, std::size_t draws,
                                      std::uint64_t seed, std::uint64_t stream = 0)
{
    RngStream rng(seed, stream);
    ComplexMoments acc;
    for (std::size_t k = 0; k < draws; ++k) acc.add(u2_integrand(t, C, d1, d2, u2_coset_matrix(sample_coset_u2(rng))));
    return acc.finish();
}

struct ReductionResult {
    double lhs = 0.0;
    double lhs_stderr = 0.0;
    double rhs = 0.0;
    bool stderr_flag = false;
};

// Both sides of the eigenvalue reduction for exp(-(t/4) Tr (F - G)^2) Phi(F),
// with F quaternion self-dual and Phi a symmetric function of its two eigenvalues.
template <typename Phi>
ReductionResult reduction_check(double t, double d1, double d2, Phi&& phi, std::size_t draws, std::uint64_t seed,
                                double box = 8.0, std::size_t panels = 16, std::size_t order = 10)
{
    if (!(t > 0.0)) throw std::invalid_argument("reduction_check: t must be positive");
    if (d1 == d2) throw std::invalid_argument("reduction_check: requires d1 != d2");
    if (draws < 2) throw std::invalid_argument("reduction_check: need at least 2 draws");

    const double pi = std::numbers::pi;
    const double sd_diag = 1.0 / std::sqrt(t), sd_w = 1.0 / std::sqrt(2.0 * t);
    RngStream rng(seed, 0);
    double mean = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k < draws; ++k) {
        const double x = d1 + sd_diag * rng.normal();
        const double y = d2 + sd_diag * rng.normal();
        double w2 = 0.0;
        for (int j = 0; j < 4; ++j) {
            const double g = sd_w * rng.normal();
            w2 += g * g;
        }
        const double h = 0.5 * (x - y);
        const double r = std::sqrt(h * h + w2);
        const double c = 0.5 * (x + y);
        const double v = phi(c + r, c - r);
        const double d = v - mean;
        mean += d / static_cast<double>(k + 1);
        m2 += d * (v - mean);
    }
    const double mass = 2.0 * pi * pi * pi / (t * t * t);
    ReductionResult res;
    res.lhs = mass * mean;
    res.lhs_stderr = mass * std::sqrt(m2 / static_cast<double>(draws - 1) / static_cast<double>(draws));

    const double half = box / std::sqrt(t);
    const auto q1 = composite_gauss_legendre(d1 - half, d1 + half, panels, order);
    const auto q2 = composite_gauss_legendre(d2 - half, d2 + half, panels, order);
    double acc = 0.0;
    for (std::size_t i = 0; i < q1.size(); ++i) {
        const double y1 = q1.nodes[i];
        const double e1 = std::exp(-0.5 * t * (y1 - d1) * (y1 - d1));
        for (std::size_t j = 0; j < q2.size(); ++j) {
            const double y2 = q2.nodes[j];
            const double e2 = std::exp(-0.5 * t * (y2 - d2) * (y2 - d2));
            const double dy = y1 - y2;
            const double jac = (dy * dy - 2.0 * dy / (t * (d1 - d2))) / ((d1 - d2) * (d1 - d2));
            acc += q1.weights[i] * q2.weights[j] * e1 * e2 * jac * phi(y1, y2);
        }
    }
    res.rhs = pi * pi / (t * t) * acc;
    res.stderr_flag = res.lhs_stderr > 0.005 * std::abs(res.lhs);
    return res;
}

} // namespace rbm
