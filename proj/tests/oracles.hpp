#pragma once

// Test-only reference computations. These deliberately take a different
// numerical route from the library (raw moments in long double, Cramer's
// rule) so agreement is meaningful.

#include <cmath>
#include <cstddef>
#include <vector>

namespace oracle {

struct Line {
    long double slope = 0;
    long double intercept = 0;
};

/// Normal equations from raw sums, solved by Cramer's rule.
inline Line raw_moment_ols(const std::vector<double>& x, const std::vector<double>& y) {
    long double n = static_cast<long double>(x.size());
    long double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += static_cast<long double>(x[i]) * x[i];
        sxy += static_cast<long double>(x[i]) * y[i];
    }
    const long double det = n * sxx - sx * sx;
    return {(n * sxy - sx * sy) / det, (sxx * sy - sx * sxy) / det};
}

/// Slope of ln(value) against t.
inline double log_slope(const std::vector<double>& t, const std::vector<double>& values) {
    std::vector<double> logs;
    for (double v : values) logs.push_back(std::log(v));
    return static_cast<double>(raw_moment_ols(t, logs).slope);
}

/// Squared Pearson correlation computed from raw moments.
inline double pearson_r2(const std::vector<double>& x, const std::vector<double>& y) {
    long double n = static_cast<long double>(x.size());
    long double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += static_cast<long double>(x[i]) * x[i];
        syy += static_cast<long double>(y[i]) * y[i];
        sxy += static_cast<long double>(x[i]) * y[i];
    }
    const long double cov = n * sxy - sx * sy;
    return static_cast<double>(cov * cov / ((n * sxx - sx * sx) * (n * syy - sy * sy)));
}

}  // namespace oracle
