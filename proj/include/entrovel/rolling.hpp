#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "entrovel/expfit.hpp"
#include "entrovel/series.hpp"

namespace entrovel {

class WindowError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr std::size_t default_rolling_window = 5;

struct VelocityPoint {
    double t_center = 0.0;
    double local_lambda = 0.0;
};

struct AccelerationPoint {
    double t_mid = 0.0;
    double dlambda_dt = 0.0;  ///< per year squared
};

/// Local rate constants over sliding windows ("velocity") and their first
/// differences ("acceleration").
struct RollingVelocity {
    std::size_t window = 0;
    std::vector<VelocityPoint> points;     ///< n - window + 1 entries
    std::vector<AccelerationPoint> accel;  ///< points.size() - 1 entries
};

inline RollingVelocity rolling_lambda(std::span<const double> t, std::span<const double> values, std::size_t window) {
    if (t.size() != values.size()) throw WindowError("time and value arrays differ in length");
    const std::size_t n = values.size();
    if (window < 2 || window > n)
        throw WindowError("window " + std::to_string(window) + " out of range [2, " + std::to_string(n) + "]");

    RollingVelocity out;
    out.window = window;
    out.points.reserve(n - window + 1);
    for (std::size_t start = 0; start + window <= n; ++start) {
        const auto tw = t.subspan(start, window);
        const ExpFit local = fit_exponential(tw, values.subspan(start, window));
        out.points.push_back({(tw.front() + tw.back()) / 2.0, local.lambda});
    }
    for (std::size_t i = 1; i < out.points.size(); ++i) {
        const auto& a = out.points[i - 1];
        const auto& b = out.points[i];
        out.accel.push_back({(a.t_center + b.t_center) / 2.0, (b.local_lambda - a.local_lambda) / (b.t_center - a.t_center)});
    }
    return out;
}

inline RollingVelocity rolling_lambda(const AnnualSeries& series, std::size_t window) {
    const auto t = series.times();
    const auto v = series.values();
    return rolling_lambda(t, v, window);
}

}  // namespace entrovel
