#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace rbm {

using cplx = std::complex<double>;

inline double rho(double lambda)
{
    if (std::abs(lambda) >= 2.0) return 0.0;
    return std::sqrt(4.0 - lambda * lambda) / (2.0 * std::numbers::pi);
}

inline void require_bulk(double lambda0)
{
    if (!(std::abs(lambda0) < 2.0))
        throw std::domain_error("lambda0 must satisfy |lambda0| < 2");
}

inline double ds_kernel(double x)
{
    const double ax = std::abs(x);
    if (ax < 1e-2) {
        const double y = x * x;
        return 1.0 - y / 10.0 + y * y / 280.0 - y * y * y / 15120.0 + y * y * y * y / 1330560.0;
    }
    return 3.0 * (std::sin(ax) - ax * std::cos(ax)) / (ax * ax * ax);
}

inline cplx saddle_f(double x, double lambda0)
{
    if (x == 0.0 && lambda0 == 0.0)
        throw std::domain_error("saddle_f: log singularity at x = 0 for lambda0 = 0");
    const cplx z(x, lambda0 / 2.0);
    return z * z / 2.0 - std::log(cplx(x, -lambda0 / 2.0));
}

inline double c0_of(double lambda0) { return (2.0 - lambda0 * lambda0) / 4.0; }

inline double f_star(double x, double lambda0)
{
    const double q = lambda0 * lambda0 / 4.0;
    return (x * x - q - std::log(x * x + q)) / 2.0 - c0_of(lambda0);
}

struct SaddleData {
    double lambda0 = 0.0;
    double a_plus = 1.0;
    double a_minus = -1.0;
    cplx c_plus = 1.0;
    cplx c_minus = 1.0;
    double c0 = 0.5;
};

inline SaddleData saddle_data(double lambda0)
{
    require_bulk(lambda0);
    SaddleData s;
    s.lambda0 = lambda0;
    s.a_plus = std::sqrt(4.0 - lambda0 * lambda0) / 2.0;
    s.a_minus = -s.a_plus;
    const double q = 1.0 - lambda0 * lambda0 / 4.0;
    s.c_plus = cplx(q, lambda0 / 2.0 * std::sqrt(q));
    s.c_minus = std::conj(s.c_plus);
    s.c0 = c0_of(lambda0);
    return s;
}

inline double log_phase_factor(double xi1, double xi2, double lambda0, std::size_t N)
{
    require_bulk(lambda0);
    const double r = rho(lambda0);
    return lambda0 * (xi1 + xi2) / (2.0 * r) + (xi1 * xi1 + xi2 * xi2) / (2.0 * static_cast<double>(N) * r * r);
}

inline double phase_factor(double xi1, double xi2, double lambda0, std::size_t N)
{
    return std::exp(log_phase_factor(xi1, xi2, lambda0, N));
}

} // namespace rbm
