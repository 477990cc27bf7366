#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "entrovel/series.hpp"

namespace entrovel {

class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Result of fitting value = g0 * exp(lambda * t) by least squares on ln(value).
struct ExpFit {
    double lambda = 0.0;     ///< per-year rate constant
    double g0 = 1.0;         ///< fitted value at t = 0
    double r2_log = 1.0;     ///< R^2 of the OLS fit of ln(value) on t
    double r2_linear = 1.0;  ///< 1 - SSR/SST on the original scale; may be negative
    std::size_t n = 0;
};

/// Straight-line OLS result for y = intercept + slope * x.
struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 1.0;
};

namespace detail {

// Running mean; returns the exact value for a constant sequence.
inline double stable_mean(std::span<const double> v) {
    double m = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) m += (v[i] - m) / static_cast<double>(i + 1);
    return m;
}

// SSR below this is rounding noise relative to the data magnitude.
inline double negligible_ssr(std::span<const double> y) {
    double peak = 0.0;
    for (double v : y) peak = std::max(peak, std::abs(v));
    const double e = 64.0 * std::numeric_limits<double>::epsilon() * peak;
    return static_cast<double>(y.size()) * e * e;
}

// R^2 = 1 - ssr/sst, with the zero-variance convention: a perfect fit of a
// constant target is 1, an imperfect one is 0.
inline double coefficient_of_determination(double ssr, double sst, double ssr_floor) {
    if (!(sst > ssr_floor)) return ssr <= ssr_floor ? 1.0 : 0.0;
    if (ssr <= ssr_floor) return 1.0;
    return 1.0 - ssr / sst;
}

}  // namespace detail

/// Two-pass (mean-centred) ordinary least squares of y on x.
inline LineFit ols_line(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw FitError("ols_line: x and y differ in length");
    if (x.size() < 2) throw FitError("at least 2 points are required for a fit");
    const double xbar = detail::stable_mean(x);
    const double ybar = detail::stable_mean(y);
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - xbar;
        const double dy = y[i] - ybar;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (!(sxx > 0.0)) throw FitError("all time points coincide");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = ybar - f.slope * xbar;
    // Squared Pearson correlation; equals 1 - SSR/SST for OLS with intercept.
    f.r2 = syy > 0.0 ? std::clamp(sxy * sxy / (sxx * syy), 0.0, 1.0) : 1.0;
    return f;
}

inline double predict(const ExpFit& fit, double t) { return fit.g0 * std::exp(fit.lambda * t); }

/// Fits an exponential to (t, value) pairs; all values must be positive.
inline ExpFit fit_exponential(std::span<const double> t, std::span<const double> values) {
    if (t.size() != values.size()) throw FitError("time and value arrays differ in length");
    if (values.size() < 2) throw FitError("at least 2 points are required for a fit");
    std::vector<double> logs;
    logs.reserve(values.size());
    for (double v : values) {
        if (!(v > 0.0)) throw FitError("non-positive value; logarithm undefined");
        logs.push_back(std::log(v));
    }
    const LineFit line = ols_line(t, logs);

    ExpFit fit;
    fit.lambda = line.slope;
    fit.g0 = std::exp(line.intercept);
    fit.r2_log = line.r2;
    fit.n = values.size();

    const double mean = detail::stable_mean(values);
    double ssr = 0.0, sst = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double r = values[i] - predict(fit, t[i]);
        const double d = values[i] - mean;
        ssr += r * r;
        sst += d * d;
    }
    fit.r2_linear = detail::coefficient_of_determination(ssr, sst, detail::negligible_ssr(values));
    return fit;
}

inline ExpFit fit_exponential(const AnnualSeries& series) {
    const auto t = series.times();
    const auto v = series.values();
    return fit_exponential(t, v);
}

/// Annual growth fraction r = exp(lambda) - 1.
inline double lambda_to_rate(double lambda) { return std::expm1(lambda); }

/// Rate constant lambda = ln(1 + r); requires r > -1.
inline double rate_to_lambda(double rate) {
    if (!(rate > -1.0)) throw FitError("growth rate must exceed -100%");
    return std::log1p(rate);
}

}  // namespace entrovel
