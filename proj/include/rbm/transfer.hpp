#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "kernels.hpp"
#include "lattice.hpp"
#include "moments.hpp"
#include "quadrature.hpp"

namespace rbm {

struct GridSpec {
    std::size_t panels = 32;
    std::size_t order = 6;
    double radius = 0.0; // 0 selects max(a_+ + 5/W, 8)
};

struct Grid2D {
    QuadratureRule a;
    QuadratureRule b;
    double radius = 0.0;
    double offset = 0.0;
};

// a-panels tile [-R, R]; b-panels are the same panels moved by half a panel.
inline Grid2D make_grid(const GridSpec& spec, double lambda0, double W)
{
    if (spec.panels == 0 || spec.order == 0) throw std::invalid_argument("make_grid: empty grid");
    const SaddleData sd = saddle_data(lambda0);
    Grid2D g;
    g.radius = spec.radius > 0.0 ? spec.radius : std::max(sd.a_plus + 5.0 / W, 8.0);
    const double h = 2.0 * g.radius / static_cast<double>(spec.panels);
    g.offset = 0.5 * h;
    g.a = composite_gauss_legendre(-g.radius, g.radius, spec.panels, spec.order);
    g.b = composite_gauss_legendre(-g.radius + g.offset, g.radius + g.offset, spec.panels, spec.order);
    return g;
}

using MatrixXc = Eigen::MatrixXcd;

// Nearest-neighbour kernel for the equal-argument dual representation.
// The link between (a, b) and (a', b') is
//   (6/W^4) [G(a-a') G(b-b') (1 - 2/tt) + G(a-b') G(b-a') (1 + 2/tt)],
// G(x) = exp(-W^2 x^2 / 2), tt = W^2 (a-b)(a'-b'). Together with the boundary
// factor (a-b)^2 on the two end sites this reproduces (a-b)^4 per site times
// the Sp(2) angular factor per link.
struct TransferKernel {
    Grid2D grid;
    double W = 1.0;
    double lambda0 = 0.0;
    double xi = 0.0;
    std::size_t N = 1;
    MatrixXc G_aa, G_bb, G_ab;
    Eigen::MatrixXd inv_diff; // 1/(a-b)
    Eigen::MatrixXd boundary; // (a-b)^2
    MatrixXc site;            // w_a w_b exp(-f(a) - f(b) - i xi (a+b)/(N rho))

    MatrixXc apply_link(const MatrixXc& X) const
    {
        const double W2 = W * W;
        const MatrixXc Xd = X.cwiseProduct(inv_diff.cast<cplx>());
        const MatrixXc direct = G_aa * X * G_bb + G_ab * X.transpose() * G_ab;
        const MatrixXc corr = G_aa * Xd * G_bb - G_ab * Xd.transpose() * G_ab;
        return (6.0 / (W2 * W2)) * direct - (12.0 / (W2 * W2 * W2)) * corr.cwiseProduct(inv_diff.cast<cplx>());
    }
};

inline cplx site_weight(double a, double b, double lambda0, double xi, std::size_t N)
{
    const double phase = xi * (a + b) / (static_cast<double>(N) * rho(lambda0));
    return std::exp(-saddle_f(a, lambda0) - saddle_f(b, lambda0) - cplx(0.0, phase));
}

inline TransferKernel build_kernel(const LatticeParams& params, double lambda0, double xi, const GridSpec& spec = {})
{
    params.validate();
    require_bulk(lambda0);
    TransferKernel k;
    k.grid = make_grid(spec, lambda0, params.W);
    k.W = params.W;
    k.lambda0 = lambda0;
    k.xi = xi;
    k.N = params.N;
    const auto& A = k.grid.a;
    const auto& B = k.grid.b;
    const auto na = static_cast<Eigen::Index>(A.size()), nb = static_cast<Eigen::Index>(B.size());
    const double W2 = params.W * params.W;
    auto G = [W2](double x) { return std::exp(-0.5 * W2 * x * x); };

    k.G_aa.resize(na, na);
    k.G_bb.resize(nb, nb);
    k.G_ab.resize(na, nb);
    for (Eigen::Index i = 0; i < na; ++i)
        for (Eigen::Index j = 0; j < na; ++j) k.G_aa(i, j) = G(A.nodes[i] - A.nodes[j]);
    for (Eigen::Index i = 0; i < nb; ++i)
        for (Eigen::Index j = 0; j < nb; ++j) k.G_bb(i, j) = G(B.nodes[i] - B.nodes[j]);

    k.inv_diff.resize(na, nb);
    k.boundary.resize(na, nb);
    k.site.resize(na, nb);
    for (Eigen::Index i = 0; i < na; ++i) {
        for (Eigen::Index j = 0; j < nb; ++j) {
            const double d = A.nodes[i] - B.nodes[j];
            if (std::abs(d) < 1e-6) throw std::runtime_error("build_kernel: grid offset insufficient, |a - b| < 1e-6");
            k.G_ab(i, j) = G(d);
            k.inv_diff(i, j) = 1.0 / d;
            k.boundary(i, j) = d * d;
            k.site(i, j) = A.weights[i] * B.weights[j] * site_weight(A.nodes[i], B.nodes[j], lambda0, xi, params.N);
        }
    }
    return k;
}

struct TransferResult {
    cplx value = 0.0;                     // F2(lambda, lambda)
    double quadrature_error_estimate = 0.0; // |fine - coarse|
    bool converged = true;
    double log_prefactor = 0.0;           // log |C(xi) det(1 - W^2 Delta)^3 / (24 pi)^N|
    int prefactor_sign = 1;               // (-1)^N
    cplx chain_sum = 0.0;                 // value / prefactor
};

inline TransferResult transfer_evaluate(const TransferKernel& k, const LatticeParams& params)
{
    if (params.N != k.N) throw std::invalid_argument("transfer_evaluate: kernel built for a different N");
    const double log_pref = log_phase_factor(k.xi, k.xi, k.lambda0, params.N) +
                            3.0 * log_det_inverse_profile(params) -
                            static_cast<double>(params.N) * std::log(24.0 * std::numbers::pi);
    const int sign = (params.N % 2 == 0) ? 1 : -1;

    double log_scale = 0.0;
    cplx total;
    if (params.N == 1) {
        total = (k.site.array() * k.boundary.cast<cplx>().array() * k.boundary.cast<cplx>().array()).sum();
    } else {
        MatrixXc X = k.site.cwiseProduct(k.boundary.cast<cplx>());
        for (std::size_t j = 1; j < params.N; ++j) {
            const double s = X.cwiseAbs().maxCoeff();
            if (!(s > 0.0) || !std::isfinite(s)) throw std::runtime_error("transfer_evaluate: degenerate chain vector");
            X /= s;
            log_scale += std::log(s);
            X = k.site.cwiseProduct(k.apply_link(X));
        }
        total = X.cwiseProduct(k.boundary.cast<cplx>()).sum();
    }
    TransferResult r;
    r.log_prefactor = log_pref;
    r.prefactor_sign = sign;
    r.chain_sum = total * std::exp(log_scale);
    r.value = static_cast<double>(sign) * std::exp(log_pref + log_scale) * total;
    return r;
}

// Evaluates on the requested grid and on one with half the panels; the
// difference is the error estimate and must stay below 0.5 %.
inline TransferResult transfer_f2(const LatticeParams& params, double lambda0, double xi, const GridSpec& spec = {})
{
    TransferResult fine = transfer_evaluate(build_kernel(params, lambda0, xi, spec), params);
    GridSpec coarse_spec = spec;
    coarse_spec.panels = std::max<std::size_t>(1, spec.panels / 2);
    if (coarse_spec.radius == 0.0) coarse_spec.radius = make_grid(spec, lambda0, params.W).radius;
    const TransferResult coarse = transfer_evaluate(build_kernel(params, lambda0, xi, coarse_spec), params);
    fine.quadrature_error_estimate = std::abs(fine.value - coarse.value);
    fine.converged = fine.quadrature_error_estimate <= 0.005 * std::abs(fine.value);
    return fine;
}

struct CrossValidation {
    double transfer_value = 0.0;
    double transfer_imag = 0.0;
    double quadrature_error = 0.0;
    double mc_value = 0.0;
    double mc_stderr = 0.0;
    double z = 0.0;
    bool flagged = false;
};

inline CrossValidation cross_validate(const LatticeParams& params, double lambda0, double xi, const ScanConfig& mc,
                                      const GridSpec& spec = {})
{
    const TransferResult tr = transfer_f2(params, lambda0, xi, spec);
    ScanConfig cfg = mc;
    cfg.ensemble = EnsembleSpec{EnsembleKind::band, params};
    const double lam = scaled_energies(lambda0, xi, xi, params.N).first;
    const MomentEstimate est = estimate_f2(cfg, lam, lam);
    CrossValidation cv;
    cv.transfer_value = tr.value.real();
    cv.transfer_imag = tr.value.imag();
    cv.quadrature_error = tr.quadrature_error_estimate;
    cv.mc_value = est.value();
    cv.mc_stderr = est.stderr_abs();
    const double combined = std::hypot(cv.mc_stderr, cv.quadrature_error);
    cv.z = (cv.transfer_value - cv.mc_value) / combined;
    cv.flagged = !(std::abs(cv.z) <= 3.0) || !tr.converged;
    return cv;
}

} // namespace rbm
