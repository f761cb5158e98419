#pragma once

// Verification and experiment suites shared by the command line tool and the
// acceptance runner. Each suite returns its checks; the caller decides where
// they are written.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "../chain.hpp"
#include "../hciz.hpp"
#include "../moments.hpp"
#include "../spectral.hpp"
#include "../transfer.hpp"
#include "output.hpp"

namespace rbm::cli {

inline std::string label(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

inline std::string index_label(std::size_t k)
{
    char buf[24];
    std::snprintf(buf, sizeof buf, "%02zu", k);
    return buf;
}

// Stream indices used outside the per-sample streams 0..M-1.
inline constexpr std::uint64_t kGridStream = 1ull << 40;
inline constexpr std::uint64_t kU2Stream = 2ull << 40;
inline constexpr std::uint64_t kSp2Stream = 3ull << 40;
inline constexpr std::uint64_t kReductionStream = 4ull << 40;
inline constexpr std::uint64_t kChainStream = 5ull << 40;

// ---------------------------------------------------------------- hciz

struct HcizCase {
    HcizParams p;
    CosetAnglesU2 rotation; // C = R diag(c1, c2) R*
};

// Real parameters drawn uniformly from [-2, 2].
inline std::vector<HcizCase> hciz_grid(std::size_t sets, std::uint64_t seed)
{
    RngStream rng(seed, kGridStream);
    auto u = [&rng] { return 4.0 * rng.uniform() - 2.0; };
    std::vector<HcizCase> g(sets);
    for (auto& c : g) {
        c.p.t = u();
        c.p.c1 = u();
        c.p.c2 = u();
        c.p.d1 = u();
        c.p.d2 = u();
        c.rotation = sample_coset_u2(rng);
    }
    return g;
}

inline Eigen::Matrix2cd rotated_diag(const HcizCase& c)
{
    const Eigen::Matrix2cd R = u2_coset_matrix(c.rotation);
    Eigen::Matrix2cd D = Eigen::Matrix2cd::Zero();
    D(0, 0) = c.p.c1;
    D(1, 1) = c.p.c2;
    return R * D * R.adjoint();
}

struct HcizOptions {
    std::size_t sets = 20;
    std::size_t draws = 1000000;
    std::uint64_t seed = 1;
    double perturb = 1.0;
    bool u2_monte_carlo = true;
};

inline std::vector<Check> hciz_suite(const HcizOptions& o)
{
    std::vector<Check> out;
    const auto grid = hciz_grid(o.sets, o.seed);
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto& c = grid[k];
        const cplx closed = o.perturb * hciz_u2(c.p);
        const cplx quad = hciz_u2_quadrature(c.p.t, rotated_diag(c), c.p.d1, c.p.d2);
        out.push_back(make_check("u2_quadrature_rel_" + index_label(k), std::abs(quad - closed) / std::abs(closed),
                                 0.0, 1e-8, CheckRule::upper_bound));
    }
    if (o.u2_monte_carlo) {
        for (std::size_t k = 0; k < grid.size(); ++k) {
            const auto& c = grid[k];
            const cplx closed = o.perturb * hciz_u2(c.p);
            const auto mc = hciz_u2_monte_carlo(c.p.t, rotated_diag(c), c.p.d1, c.p.d2, o.draws, o.seed, kU2Stream + k);
            out.push_back(make_check("u2_mc_z_" + index_label(k), std::abs(mc.mean - closed) / mc.stderr_abs, 0.0, 3.0,
                                     CheckRule::upper_bound));
        }
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const auto& c = grid[k];
        const cplx closed = o.perturb * hciz_sp2(c.p);
        const auto mc = hciz_sp2_monte_carlo(c.p, o.draws, o.seed, kSp2Stream + k);
        out.push_back(make_check("sp2_mc_z_" + index_label(k), std::abs(mc.mean - closed) / mc.stderr_abs, 0.0, 3.0,
                                 CheckRule::upper_bound));
        out.push_back(make_check("sp2_mc_rel_stderr_" + index_label(k), mc.stderr_abs / std::abs(closed), 0.0, 0.003,
                                 CheckRule::upper_bound));
    }
    double worst = 0.0;
    for (double phase : {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0}) {
        const cplx tt = std::polar(1e-3, phase);
        worst = std::max(worst, std::abs(sp2_angular_factor_taylor(tt) - sp2_angular_factor_generic(tt)));
    }
    out.push_back(make_check("sp2_taylor_crossover", worst, 0.0, 1e-9, CheckRule::upper_bound));
    return out;
}

// ---------------------------------------------------------------- reduction

struct ReductionSetting {
    double t;
    double d1;
    double d2;
};

inline std::vector<ReductionSetting> default_reduction_settings()
{
    return {{1.0, 1.0, -0.5}, {2.0, 1.5, 0.2}, {0.5, 0.8, -1.2}};
}

struct ReductionOptions {
    std::vector<ReductionSetting> settings = default_reduction_settings();
    std::size_t draws = 10000000;
    std::uint64_t seed = 1;
    double perturb = 1.0;
};

struct NamedPhi {
    const char* name;
    double (*fn)(double, double);
};

inline const std::vector<NamedPhi>& reduction_phis()
{
    static const std::vector<NamedPhi> phis = {
        {"one", [](double, double) { return 1.0; }},
        {"sum", [](double a, double b) { return a + b; }},
        {"gap2", [](double a, double b) { return (a - b) * (a - b); }},
    };
    return phis;
}

inline std::vector<Check> reduction_suite(const ReductionOptions& o)
{
    std::vector<Check> out;
    for (std::size_t s = 0; s < o.settings.size(); ++s) {
        const auto& st = o.settings[s];
        const std::string tag = "reduction_s" + std::to_string(s) + "_";
        for (std::size_t k = 0; k < reduction_phis().size(); ++k) {
            const auto& phi = reduction_phis()[k];
            const auto r = reduction_check(st.t, st.d1, st.d2, phi.fn, o.draws, o.seed + 7919 * s + k);
            const double rhs = o.perturb * r.rhs;
            out.push_back(make_check(tag + phi.name + "_rel_diff", std::abs(r.lhs - rhs) / std::abs(rhs), 0.0, 0.01,
                                     CheckRule::upper_bound));
            out.push_back(make_check(tag + phi.name + "_rel_stderr", r.lhs_stderr / std::abs(r.lhs), 0.0, 0.005,
                                     CheckRule::upper_bound));
            if (k == 0) {
                const double mass = 2.0 * std::pow(std::numbers::pi, 3) / std::pow(st.t, 3);
                out.push_back(make_check(tag + "unit_mass_rel", std::abs(rhs - mass) / mass, 0.0, 1e-8,
                                         CheckRule::upper_bound));
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------- chain

struct ChainOptions {
    std::uint64_t seed = 1;
    double perturb = 1.0;
    std::size_t tail_draws = 100000;
    std::vector<double> tail_deltas = {0.5, 0.6, 0.7, 0.8, 0.9};
    std::size_t tail_m = 64;
    double tail_W = 16.0;
};

inline std::vector<cplx> chain_gamma_grid()
{
    return {cplx(1.0, 0.0), cplx(0.5, 0.5), cplx(2.0, -1.5), cplx(0.1, 3.0), cplx(4.0, 0.2), cplx(0.05, -0.8)};
}

// Relative error of det via a dense LU factorization.
inline double chain_dense_rel_error(const ChainParams& p, double perturb = 1.0)
{
    const auto A = neumann_laplacian(p.m).scaled(-1.0).dense();
    Eigen::MatrixXcd M = A.cast<cplx>();
    M.diagonal().array() += p.mass();
    const Eigen::PartialPivLU<Eigen::MatrixXcd> lu(M);
    cplx log_dense = 0.0;
    for (Eigen::Index i = 0; i < M.rows(); ++i) log_dense += std::log(lu.matrixLU()(i, i));
    // the permutation sign only flips the determinant
    if (lu.permutationP().determinant() < 0) log_dense += cplx(0.0, std::numbers::pi);
    log_dense += std::log(perturb);
    return std::abs(std::exp(chain_logdet(p) - log_dense) - 1.0);
}

inline double chain_sinh_rel_error(std::size_t m, double W, cplx gamma)
{
    const ChainParams p{m, W, gamma};
    return std::abs(std::exp(chain_log_asymptotic(p) - chain_log_partition(p)) - 1.0);
}

inline std::vector<Check> chain_suite(const ChainOptions& o)
{
    std::vector<Check> out;
    double worst_dense = 0.0, worst_modulus = 0.0;
    for (std::size_t m : {1, 2, 3, 8, 17, 32, 64}) {
        for (double W : {1.0, 2.5, 8.0}) {
            for (const cplx g : chain_gamma_grid()) {
                const ChainParams p{m, W, g};
                worst_dense = std::max(worst_dense, chain_dense_rel_error(p, o.perturb));
                const double ratio = std::abs(chain_partition(p)) / chain_partition({m, W, g.real()}).real();
                worst_modulus = std::max(worst_modulus, ratio);
            }
        }
    }
    out.push_back(make_check("chain_logdet_dense_rel", worst_dense, 0.0, 1e-10, CheckRule::upper_bound));
    out.push_back(make_check("chain_modulus_bound", worst_modulus, 1.0, 1.0 + 1e-12, CheckRule::upper_bound));

    const double err32 = o.perturb * chain_sinh_rel_error(320, 32.0, 1.0);
    out.push_back(make_check("chain_sinh_m320_W32_rel", err32, 0.0, 0.05, CheckRule::upper_bound));
    double worst_ratio = 0.0, prev = 0.0;
    for (double W : {8.0, 16.0, 32.0, 64.0}) {
        const double e = chain_sinh_rel_error(static_cast<std::size_t>(10 * W), W, 1.0);
        if (prev > 0.0) worst_ratio = std::max(worst_ratio, e / prev);
        prev = e;
    }
    out.push_back(make_check("chain_sinh_trend_max_ratio", worst_ratio, 1.0, 1.0, CheckRule::upper_bound));

    std::vector<double> xs, freqs;
    std::size_t increases = 0;
    for (std::size_t k = 0; k < o.tail_deltas.size(); ++k) {
        const double d = o.tail_deltas[k];
        RngStream rng(o.seed, kChainStream + k);
        const double f = tail_probability(o.tail_m, o.tail_W, 1.0, d, o.tail_draws, rng);
        if (!freqs.empty() && f > freqs.back()) ++increases;
        xs.push_back(d * d * o.tail_W);
        freqs.push_back(f);
        out.push_back(make_check("chain_tail_freq_delta" + label(d), f, 0.0, 0.0, CheckRule::lower_bound));
    }
    out.push_back(make_check("chain_tail_increases", static_cast<double>(increases), 0.0, 0.0, CheckRule::upper_bound));
    const TailFit fit = fit_tail(xs, freqs);
    out.push_back(make_check("chain_tail_slope", fit.slope, 0.0, 0.0, CheckRule::upper_bound));
    out.push_back(make_check("chain_tail_r2", fit.r_squared, 1.0, 0.9, CheckRule::lower_bound));
    out.push_back(make_check("chain_tail_C1", fit.C1, 0.0, 0.0, CheckRule::lower_bound));
    out.push_back(make_check("chain_tail_C2", fit.C2, 0.0, 0.0, CheckRule::lower_bound));
    return out;
}

// ---------------------------------------------------------------- transfer

struct TransferPoint {
    std::size_t N;
    double W;
    double lambda0;
};

inline std::vector<TransferPoint> default_transfer_points()
{
    return {{1, 2.0, 0.0}, {1, 2.0, 1.0}, {3, 1.0, 0.0}, {3, 1.0, 1.0}, {8, 2.0, 0.0}, {8, 2.0, 1.0}};
}

struct TransferOptions {
    std::vector<TransferPoint> points = default_transfer_points();
    std::size_t mc_samples = 1000000;
    std::uint64_t seed = 1;
    std::size_t workers = 1;
    double perturb = 1.0;
    GridSpec grid;
};

inline std::vector<Check> transfer_suite(const TransferOptions& o)
{
    std::vector<Check> out;
    for (const auto& pt : o.points) {
        const auto params = LatticeParams::with_size(pt.N, pt.W);
        ScanConfig mc;
        mc.samples = o.mc_samples;
        mc.master_seed = o.seed;
        mc.workers = o.workers;
        mc.lambda0 = pt.lambda0;
        CrossValidation cv = cross_validate(params, pt.lambda0, 0.0, mc, o.grid);
        cv.transfer_value *= o.perturb;
        const double combined = std::hypot(cv.mc_stderr, cv.quadrature_error);
        const std::string tag = "transfer_N" + std::to_string(pt.N) + "_W" + label(pt.W) + "_l" + label(pt.lambda0);
        out.push_back(make_check(tag + "_z", std::abs(cv.transfer_value - cv.mc_value) / combined, 0.0, 3.0,
                                 CheckRule::upper_bound));
        out.push_back(make_check(tag + "_imag_rel", std::abs(cv.transfer_imag) / std::abs(cv.transfer_value), 0.0, 1e-6,
                                 CheckRule::upper_bound));
        out.push_back(make_check(tag + "_grid_rel", cv.quadrature_error / std::abs(cv.transfer_value), 0.0, 0.005,
                                 CheckRule::upper_bound));
        if (pt.N == 1) {
            const double exact = pt.lambda0 * pt.lambda0 + 2.0;
            out.push_back(make_check(tag + "_closed_rel", std::abs(cv.transfer_value - exact) / exact, 0.0, 1e-8,
                                     CheckRule::upper_bound));
            out.push_back(make_check(tag + "_mc_closed_z", std::abs(cv.mc_value - exact) / cv.mc_stderr, 0.0, 3.0,
                                     CheckRule::upper_bound));
        }
    }
    return out;
}

// ---------------------------------------------------------------- spectrum

struct SpectrumOptions {
    EnsembleSpec ensemble;
    std::size_t samples = 50;
    std::size_t bins = 200;
    double range = 2.5;
    double ks_tolerance = 0.02;
    std::uint64_t seed = 1;
    std::size_t workers = 1;
};

struct SpectrumRun {
    NcmHistogram histogram;
    double ks = 0.0;
    std::vector<Check> checks;
};

inline SpectrumRun spectrum_suite(const SpectrumOptions& o)
{
    const SpectrumSampler sampler(o.ensemble);
    const std::size_t workers = o.workers == 0 ? 1 : o.workers;
    std::vector<std::vector<double>> parts(workers);
    run_partitioned(o.samples, workers, [&](std::size_t w, std::size_t b, std::size_t e) {
        for (std::size_t m = b; m < e; ++m) {
            const auto sp = sampler.spectrum(o.seed, m);
            parts[w].insert(parts[w].end(), sp.eigenvalues.begin(), sp.eigenvalues.end());
        }
    });
    std::vector<double> all;
    for (const auto& p : parts) all.insert(all.end(), p.begin(), p.end());
    SpectrumRun run;
    run.histogram = ncm(all, uniform_edges(-o.range, o.range, o.bins));
    run.ks = semicircle_distance(run.histogram);
    run.checks.push_back(make_check("semicircle_ks", run.ks, 0.0, o.ks_tolerance, CheckRule::upper_bound));
    return run;
}

// ---------------------------------------------------------------- scan

struct ScanRun {
    std::vector<RatioRow> rows;
    double max_deviation = 0.0;
    double max_deviation_stderr = 0.0;
    std::vector<Check> checks;
};

inline ScanRun scan_suite(const ScanConfig& cfg, double ds_tolerance, bool bracket_check)
{
    ScanRun run;
    run.rows = estimate_ratio(cfg);
    for (const auto& r : run.rows) {
        const double dev = std::abs(r.ratio - r.ds_ref);
        if (dev >= run.max_deviation) {
            run.max_deviation = dev;
            run.max_deviation_stderr = r.stderr_abs;
        }
    }
    run.checks.push_back(
        make_check("ds_max_abs_deviation", run.max_deviation, 0.0, ds_tolerance, CheckRule::upper_bound));
    if (bracket_check) {
        for (const auto& r : run.rows) {
            if (std::abs(std::abs(r.xi1 - r.xi2) - 1.0) > 1e-12) continue;
            const double target = 3.0 / (std::numbers::pi * std::numbers::pi);
            run.checks.push_back(make_check("ds_bracket_separation1_z", std::abs(r.ratio - target) / r.stderr_abs, 0.0,
                                            3.0, CheckRule::upper_bound));
            break;
        }
    }
    return run;
}

} // namespace rbm::cli
