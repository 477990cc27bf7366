#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "entrovel/series.hpp"

namespace entrovel::synthetic {

/// Series with value(t) = f(t) for t = 0..n-1.
inline AnnualSeries from_function(std::string name, int reference_year, std::size_t n,
                                  const std::function<double(int)>& f) {
    std::vector<Observation> obs;
    obs.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        const int t = static_cast<int>(i);
        obs.push_back({t, f(t)});
    }
    return AnnualSeries(std::move(name), reference_year, std::move(obs));
}

/// Noiseless g0 * exp(lambda * t).
inline AnnualSeries exponential(std::string name, int reference_year, std::size_t n, double g0, double lambda) {
    return from_function(std::move(name), reference_year, n, [=](int t) { return g0 * std::exp(lambda * t); });
}

/// Growth at `lambda_before` up to `t_switch`, then `lambda_after`, continuous at the switch.
inline AnnualSeries piecewise_exponential(std::string name, int reference_year, std::size_t n, double g0,
                                          double lambda_before, double lambda_after, int t_switch) {
    return from_function(std::move(name), reference_year, n, [=](int t) {
        const double log_g = t < t_switch ? lambda_before * t
                                          : lambda_before * t_switch + lambda_after * (t - t_switch);
        return g0 * std::exp(log_g);
    });
}

/// Multiplies every value by exp(N(0, sigma)).
template <class URBG>
AnnualSeries with_lognormal_noise(const AnnualSeries& s, double sigma, URBG& rng) {
    std::normal_distribution<double> noise(0.0, sigma);
    std::vector<Observation> obs(s.observations().begin(), s.observations().end());
    for (auto& o : obs) o.value *= std::exp(noise(rng));
    return AnnualSeries(s.name(), s.reference_year(), std::move(obs));
}

/**
 * Exponential trend with a crash: values follow g0*exp(lambda*t) until
 * `t_dip - 2`, fall by `depth` (in log units) spread over the two years up to
 * `t_dip`, then recover linearly in log space over the following
 * `recovery` years.
 */
inline AnnualSeries crisis(std::string name, int reference_year, std::size_t n, double g0, double lambda, int t_dip,
                           double depth, int recovery) {
    return from_function(std::move(name), reference_year, n, [=](int t) {
        double shock = 0.0;
        if (t > t_dip - 2 && t <= t_dip)
            shock = -depth * (t - (t_dip - 2)) / 2.0;
        else if (t > t_dip && t < t_dip + recovery)
            shock = -depth * (1.0 - static_cast<double>(t - t_dip) / recovery);
        return g0 * std::exp(lambda * t + shock);
    });
}

}  // namespace entrovel::synthetic
