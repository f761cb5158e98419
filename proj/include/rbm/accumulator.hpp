#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

namespace rbm {

// Running log(sum exp(x_k)) with the running max as common shift.
struct LogSumExp {
    double shift = -std::numeric_limits<double>::infinity();
    double scaled = 0.0;

    bool empty() const { return scaled == 0.0; }

    void add(double x)
    {
        if (x == -std::numeric_limits<double>::infinity()) return;
        if (x > shift) {
            scaled = scaled * std::exp(shift - x) + 1.0;
            shift = x;
        } else {
            scaled += std::exp(x - shift);
        }
    }

    void merge(const LogSumExp& o)
    {
        if (o.empty()) return;
        if (empty()) {
            *this = o;
            return;
        }
        const double m = std::max(shift, o.shift);
        scaled = scaled * std::exp(shift - m) + o.scaled * std::exp(o.shift - m);
        shift = m;
    }

    double log() const
    {
        return empty() ? -std::numeric_limits<double>::infinity() : shift + std::log(scaled);
    }
};

// Signed sum in log space: positive and negative pools, plus the pool of squares.
struct SignedAccumulator {
    LogSumExp positive;
    LogSumExp negative;
    LogSumExp squares;
    std::size_t count = 0;

    void add(int sign, double log_magnitude)
    {
        ++count;
        if (sign == 0) return;
        (sign > 0 ? positive : negative).add(log_magnitude);
        squares.add(2.0 * log_magnitude);
    }

    void merge(const SignedAccumulator& o)
    {
        positive.merge(o.positive);
        negative.merge(o.negative);
        squares.merge(o.squares);
        count += o.count;
    }

    // sign and log|sum|
    int sum_sign() const
    {
        const double p = positive.log(), q = negative.log();
        if (p == q) return 0;
        return p > q ? 1 : -1;
    }

    double log_abs_sum() const
    {
        const double p = positive.log(), q = negative.log();
        if (p == q) return -std::numeric_limits<double>::infinity();
        const double hi = std::max(p, q), lo = std::min(p, q);
        return hi + std::log1p(-std::exp(lo - hi));
    }

    double log_abs_mean() const { return log_abs_sum() - std::log(static_cast<double>(count)); }
    double log_mean_square() const { return squares.log() - std::log(static_cast<double>(count)); }

    // E[w^2] / (E w)^2
    double normalized_second_moment() const
    {
        return std::exp(log_mean_square() - 2.0 * log_abs_mean());
    }
};

} // namespace rbm
