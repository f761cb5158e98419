#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <stdexcept>
#include <utility>
#include <vector>

#include "accumulator.hpp"
#include "ensemble.hpp"
#include "kernels.hpp"
#include "parallel.hpp"
#include "spectral.hpp"

namespace rbm {

enum class EnsembleKind { goe, band };

struct EnsembleSpec {
    EnsembleKind kind = EnsembleKind::goe;
    LatticeParams lattice;
};

// Draws spectrum m of the ensemble from RngStream(seed, m).
class SpectrumSampler {
public:
    explicit SpectrumSampler(const EnsembleSpec& spec) : spec_(spec)
    {
        spec_.lattice.validate();
        if (spec_.kind == EnsembleKind::band)
            sd_ = profile_stddev(variance_profile(spec_.lattice));
    }

    std::size_t N() const { return spec_.lattice.N; }

    MatrixSample matrix(std::uint64_t seed, std::uint64_t index) const
    {
        RngStream rng(seed, index);
        if (spec_.kind == EnsembleKind::goe) return sample_goe(N(), rng);
        return sample_with_stddev(N(), [this](std::size_t i, std::size_t j) { return sd_(i, j); }, rng);
    }

    Spectrum spectrum(std::uint64_t seed, std::uint64_t index) const { return eigenvalues(matrix(seed, index)); }

private:
    EnsembleSpec spec_;
    Eigen::MatrixXd sd_;
};

struct ScanConfig {
    double lambda0 = 0.0;
    std::vector<std::pair<double, double>> xi_pairs;
    std::size_t samples = 20000;
    EnsembleSpec ensemble;
    std::uint64_t master_seed = 1;
    std::size_t workers = 1;

    void validate() const
    {
        require_bulk(lambda0);
        if (samples < 2) throw std::invalid_argument("sample count must be at least 2");
        ensemble.lattice.validate();
    }
};

struct MomentEstimate {
    int sign = 0;
    double log_mean_magnitude = -std::numeric_limits<double>::infinity();
    double relative_stderr = std::numeric_limits<double>::infinity();
    std::size_t count = 0;
    bool sign_unresolved = false;

    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_mean_magnitude); }
    double stderr_abs() const { return std::exp(log_mean_magnitude) * relative_stderr; }
};

inline MomentEstimate to_estimate(const SignedAccumulator& acc)
{
    MomentEstimate e;
    e.count = acc.count;
    e.sign = acc.sum_sign();
    e.log_mean_magnitude = acc.log_abs_mean();
    if (acc.count >= 2 && e.sign != 0) {
        const double M = static_cast<double>(acc.count);
        const double rel_var = std::max(0.0, (acc.normalized_second_moment() - 1.0) * M / (M - 1.0));
        e.relative_stderr = std::sqrt(rel_var / M);
    }
    // cancellation between the pools below 10 stderr leaves the sign unresolved
    e.sign_unresolved = !acc.negative.empty() && !acc.positive.empty() && !(e.relative_stderr < 0.1);
    return e;
}

inline std::pair<double, double> scaled_energies(double lambda0, double xi1, double xi2, std::size_t N)
{
    require_bulk(lambda0);
    const double s = static_cast<double>(N) * rho(lambda0);
    return {lambda0 + xi1 / s, lambda0 + xi2 / s};
}

inline MomentEstimate estimate_f2(const ScanConfig& config, double lambda1, double lambda2)
{
    if (config.samples < 2) throw std::invalid_argument("estimate_f2: need at least 2 samples");
    const SpectrumSampler sampler(config.ensemble);
    const std::size_t workers = config.workers == 0 ? 1 : config.workers;
    std::vector<SignedAccumulator> parts(workers);
    run_partitioned(config.samples, workers, [&](std::size_t w, std::size_t b, std::size_t e) {
        for (std::size_t m = b; m < e; ++m) {
            const auto sp = sampler.spectrum(config.master_seed, m);
            const auto d1 = signed_logdet(sp, lambda1), d2 = signed_logdet(sp, lambda2);
            parts[w].add(d1.sign * d2.sign, d1.log_magnitude + d2.log_magnitude);
        }
    });
    SignedAccumulator total;
    for (const auto& p : parts) total.merge(p);
    return to_estimate(total);
}

// Accumulators for one scan row: F12, F11, F22 and the three cross moments.
struct RowAccumulator {
    SignedAccumulator f12, f11, f22, x12_11, x12_22, x11_22;

    void add(const SignedLogDet& d1, const SignedLogDet& d2)
    {
        const int s12 = d1.sign * d2.sign;
        const double l12 = d1.log_magnitude + d2.log_magnitude;
        const double l11 = 2.0 * d1.log_magnitude, l22 = 2.0 * d2.log_magnitude;
        const int s11 = d1.sign * d1.sign, s22 = d2.sign * d2.sign;
        f12.add(s12, l12);
        f11.add(s11, l11);
        f22.add(s22, l22);
        x12_11.add(s12 * s11, l12 + l11);
        x12_22.add(s12 * s22, l12 + l22);
        x11_22.add(s11 * s22, l11 + l22);
    }

    void merge(const RowAccumulator& o)
    {
        f12.merge(o.f12);
        f11.merge(o.f11);
        f22.merge(o.f22);
        x12_11.merge(o.x12_11);
        x12_22.merge(o.x12_22);
        x11_22.merge(o.x11_22);
    }
};

struct RatioRow {
    double xi1 = 0.0;
    double xi2 = 0.0;
    double ratio = 0.0;
    double stderr_abs = 0.0;
    double ds_ref = 1.0;
    bool sign_unresolved = false;
    MomentEstimate f12, f11, f22;
};

inline double normalized_cross(const SignedAccumulator& cross, const SignedAccumulator& a, const SignedAccumulator& b)
{
    const int s = cross.sum_sign() * a.sum_sign() * b.sum_sign();
    if (s == 0) return 0.0;
    const double l = cross.log_abs_mean() - a.log_abs_mean() - b.log_abs_mean();
    return s * std::exp(l) - 1.0;
}

inline RatioRow finish_row(double xi1, double xi2, const RowAccumulator& acc)
{
    RatioRow r;
    r.xi1 = xi1;
    r.xi2 = xi2;
    r.ds_ref = ds_kernel(std::numbers::pi * (xi1 - xi2));
    r.f12 = to_estimate(acc.f12);
    r.f11 = to_estimate(acc.f11);
    r.f22 = to_estimate(acc.f22);
    r.sign_unresolved = r.f12.sign_unresolved || r.f11.sign_unresolved || r.f22.sign_unresolved;
    if (r.f12.sign == 0 || r.f11.sign <= 0 || r.f22.sign <= 0) {
        r.ratio = 0.0;
        r.stderr_abs = std::numeric_limits<double>::infinity();
        r.sign_unresolved = true;
        return r;
    }
    const double log_r = r.f12.log_mean_magnitude - 0.5 * (r.f11.log_mean_magnitude + r.f22.log_mean_magnitude);
    r.ratio = r.f12.sign * std::exp(log_r);

    const double M = static_cast<double>(acc.f12.count);
    const double v = (acc.f12.normalized_second_moment() - 1.0) +
                     0.25 * (acc.f11.normalized_second_moment() - 1.0) +
                     0.25 * (acc.f22.normalized_second_moment() - 1.0) -
                     normalized_cross(acc.x12_11, acc.f12, acc.f11) -
                     normalized_cross(acc.x12_22, acc.f12, acc.f22) +
                     0.5 * normalized_cross(acc.x11_22, acc.f11, acc.f22);
    const double var_log = std::max(0.0, v) / (M - 1.0);
    r.stderr_abs = std::abs(r.ratio) * std::sqrt(var_log);
    return r;
}

// D2^{-1} F2 for every requested pair from one common set of spectra.
inline std::vector<RatioRow> estimate_ratio(const ScanConfig& config)
{
    config.validate();
    const std::size_t N = config.ensemble.lattice.N;
    std::map<double, std::size_t> energy_index;
    std::vector<double> energies;
    std::vector<std::pair<std::size_t, std::size_t>> rows;
    auto index_of = [&](double xi) {
        auto it = energy_index.find(xi);
        if (it != energy_index.end()) return it->second;
        const double lam = scaled_energies(config.lambda0, xi, xi, N).first;
        energies.push_back(lam);
        energy_index.emplace(xi, energies.size() - 1);
        return energies.size() - 1;
    };
    for (const auto& [a, b] : config.xi_pairs) rows.emplace_back(index_of(a), index_of(b));

    const SpectrumSampler sampler(config.ensemble);
    const std::size_t workers = config.workers == 0 ? 1 : config.workers;
    std::vector<std::vector<RowAccumulator>> parts(workers, std::vector<RowAccumulator>(rows.size()));
    run_partitioned(config.samples, workers, [&](std::size_t w, std::size_t b, std::size_t e) {
        std::vector<SignedLogDet> d(energies.size());
        for (std::size_t m = b; m < e; ++m) {
            const auto sp = sampler.spectrum(config.master_seed, m);
            for (std::size_t k = 0; k < energies.size(); ++k) d[k] = signed_logdet(sp, energies[k]);
            for (std::size_t r = 0; r < rows.size(); ++r) parts[w][r].add(d[rows[r].first], d[rows[r].second]);
        }
    });
    std::vector<RatioRow> out;
    out.reserve(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        RowAccumulator total;
        for (const auto& p : parts) total.merge(p[r]);
        out.push_back(finish_row(config.xi_pairs[r].first, config.xi_pairs[r].second, total));
    }
    return out;
}

// Symmetric placement xi = (+d/2, -d/2) for each separation d.
inline std::vector<std::pair<double, double>> symmetric_pairs(const std::vector<double>& separations)
{
    std::vector<std::pair<double, double>> p;
    p.reserve(separations.size());
    for (double d : separations) p.emplace_back(0.5 * d, -0.5 * d);
    return p;
}

} // namespace rbm
