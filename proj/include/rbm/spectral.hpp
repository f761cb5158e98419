#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "ensemble.hpp"

namespace rbm {

class EigenSolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Spectrum {
    std::vector<double> eigenvalues; // ascending
    std::size_t size() const { return eigenvalues.size(); }
};

struct SignedLogDet {
    int sign = 0;
    double log_magnitude = -std::numeric_limits<double>::infinity();

    double value() const { return sign == 0 ? 0.0 : sign * std::exp(log_magnitude); }
};

struct NcmHistogram {
    std::vector<double> edges;
    std::vector<double> masses;
    std::size_t N = 0;
};

inline Spectrum eigenvalues(const MatrixSample& sample)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sample.H, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success)
        throw EigenSolverError("eigenvalues: symmetric eigensolver did not converge");
    const auto& ev = es.eigenvalues();
    Spectrum s{std::vector<double>(ev.data(), ev.data() + ev.size())};
    std::sort(s.eigenvalues.begin(), s.eigenvalues.end());
    return s;
}

inline SignedLogDet signed_logdet(const Spectrum& spectrum, double lambda)
{
    SignedLogDet out;
    int negatives = 0;
    double log_mag = 0.0;
    for (double e : spectrum.eigenvalues) {
        const double d = lambda - e;
        if (d == 0.0) return SignedLogDet{};
        if (d < 0.0) ++negatives;
        log_mag += std::log(std::abs(d));
    }
    out.sign = (negatives % 2 == 0) ? 1 : -1;
    out.log_magnitude = log_mag;
    return out;
}

inline std::vector<double> uniform_edges(double lo, double hi, std::size_t bins)
{
    if (bins == 0 || !(hi > lo))
        throw std::invalid_argument("uniform_edges: need bins > 0 and hi > lo");
    std::vector<double> e(bins + 1);
    for (std::size_t k = 0; k <= bins; ++k)
        e[k] = lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(bins);
    return e;
}

// Bins are half-open [e_k, e_{k+1}) except the last, which is closed.
inline NcmHistogram ncm(const std::vector<double>& values, const std::vector<double>& edges)
{
    if (edges.size() < 2 || !std::is_sorted(edges.begin(), edges.end()))
        throw std::invalid_argument("ncm: edges must be ascending with at least two entries");
    NcmHistogram h{edges, std::vector<double>(edges.size() - 1, 0.0), values.size()};
    for (double v : values) {
        if (v < edges.front() || v > edges.back()) continue;
        auto it = std::upper_bound(edges.begin(), edges.end(), v);
        std::size_t k = static_cast<std::size_t>(it - edges.begin());
        k = (k == 0) ? 0 : k - 1;
        if (k >= h.masses.size()) k = h.masses.size() - 1;
        h.masses[k] += 1.0;
    }
    if (h.N > 0)
        for (auto& m : h.masses) m /= static_cast<double>(h.N);
    return h;
}

inline NcmHistogram ncm(const Spectrum& spectrum, const std::vector<double>& edges)
{
    return ncm(spectrum.eigenvalues, edges);
}

inline double semicircle_cdf(double x)
{
    if (x <= -2.0) return 0.0;
    if (x >= 2.0) return 1.0;
    return 0.5 + x * std::sqrt(4.0 - x * x) / (4.0 * std::numbers::pi) + std::asin(x / 2.0) / std::numbers::pi;
}

// Sup distance between the binned empirical CDF and the semicircle CDF, taken at the edges.
inline double semicircle_distance(const NcmHistogram& hist)
{
    double cdf = 0.0;
    double dist = std::abs(semicircle_cdf(hist.edges.front()));
    for (std::size_t k = 0; k < hist.masses.size(); ++k) {
        cdf += hist.masses[k];
        dist = std::max(dist, std::abs(cdf - semicircle_cdf(hist.edges[k + 1])));
    }
    return dist;
}

} // namespace rbm
