#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "entrovel/expfit.hpp"

namespace entrovel {

class EntropyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The information-entropy line t -> lambda * t of a fitted series; zero at t = 0.
struct EntropyLine {
    std::string label;
    double lambda = 0.0;

    [[nodiscard]] double at(double t) const noexcept { return lambda * t; }
};

/// Coefficient of one component in a decomposition.
enum class Sign : int { minus = -1, zero = 0, plus = 1 };

[[nodiscard]] constexpr int to_int(Sign s) noexcept { return static_cast<int>(s); }

struct SignedLine {
    Sign sign = Sign::plus;
    EntropyLine line;
};

/**
 * One candidate decomposition of a target line into signed components.
 *
 * `delta` is the residual slope (per year) left after the combination, so
 * target = combined + delta. `velocity_ratio` is target / combined and is
 * empty when the combination has zero slope.
 */
struct HypothesisResult {
    std::string target;
    std::vector<Sign> signs;
    double combined_lambda = 0.0;
    double delta = 0.0;
    std::optional<double> velocity_ratio;
    double abs_delta = 0.0;

    [[nodiscard]] std::size_t support() const noexcept {
        return static_cast<std::size_t>(std::count_if(signs.begin(), signs.end(), [](Sign s) { return s != Sign::zero; }));
    }
};

inline EntropyLine entropy_line(const ExpFit& fit, std::string label) { return {std::move(label), fit.lambda}; }

/// Sums signed component slopes in order. Zero-signed terms contribute
/// nothing and are omitted from the label.
inline EntropyLine combine(std::span<const SignedLine> terms) {
    if (terms.empty()) throw EntropyError("combine: empty term list");
    double lambda = 0.0;
    std::string label;
    for (const auto& term : terms) {
        if (term.sign == Sign::zero) continue;
        lambda += to_int(term.sign) * term.line.lambda;
        if (label.empty())
            label = term.sign == Sign::minus ? "-" + term.line.label : term.line.label;
        else
            label += (term.sign == Sign::minus ? " - " : " + ") + term.line.label;
    }
    if (label.empty()) throw EntropyError("combine: every term has a zero sign");
    return {std::move(label), lambda};
}

inline EntropyLine combine(std::initializer_list<SignedLine> terms) {
    return combine(std::span<const SignedLine>(terms.begin(), terms.size()));
}

/// Residual slope target - combo; multiplies t like the lines themselves.
inline double residual_constant(const EntropyLine& target, const EntropyLine& combo) {
    return target.lambda - combo.lambda;
}

inline double velocity_ratio(const EntropyLine& target, const EntropyLine& combo) {
    if (combo.lambda == 0.0)
        throw EntropyError("velocity ratio undefined: '" + combo.label + "' has zero slope");
    return target.lambda / combo.lambda;
}

namespace detail {

inline bool sign_vector_less(const std::vector<Sign>& a, const std::vector<Sign>& b) {
    return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end(),
                                        [](Sign x, Sign y) { return to_int(x) < to_int(y); });
}

}  // namespace detail

/// Orders by |delta|, then by fewer non-zero signs, then lexicographically by sign vector.
inline bool hypothesis_rank_less(const HypothesisResult& a, const HypothesisResult& b) {
    if (a.abs_delta != b.abs_delta) return a.abs_delta < b.abs_delta;
    if (a.support() != b.support()) return a.support() < b.support();
    return detail::sign_vector_less(a.signs, b.signs);
}

inline constexpr std::size_t max_hypothesis_components = 4;

/// Coefficients a hypothesis may use. `nonzero` restricts to {-1, +1}, i.e.
/// every component participates (2^k combinations).
enum class SignDomain { with_zero, nonzero };

/**
 * Evaluates every sign vector in {-1, 0, +1}^k except all-zero (or only
 * {-1, +1}^k for SignDomain::nonzero) and returns them ranked best first. The combined slope for a vector is accumulated in
 * component order, so a target built the same way yields delta == 0 exactly.
 */
inline std::vector<HypothesisResult> enumerate_hypotheses(const EntropyLine& target,
                                                          std::span<const EntropyLine> components,
                                                          SignDomain domain = SignDomain::with_zero) {
    if (components.empty()) throw EntropyError("enumerate_hypotheses: no components");
    if (components.size() > max_hypothesis_components)
        throw EntropyError("enumerate_hypotheses: at most " + std::to_string(max_hypothesis_components) +
                           " components are supported");
    const std::size_t k = components.size();
    std::size_t total = 1;
    for (std::size_t i = 0; i < k; ++i) total *= 3;

    std::vector<HypothesisResult> out;
    out.reserve(total - 1);
    std::vector<Sign> signs(k);
    for (std::size_t code = 0; code < total; ++code) {
        std::size_t c = code;
        std::size_t nonzero = 0;
        for (std::size_t i = 0; i < k; ++i) {
            signs[i] = static_cast<Sign>(static_cast<int>(c % 3) - 1);
            if (signs[i] != Sign::zero) ++nonzero;
            c /= 3;
        }
        if (nonzero == 0 || (domain == SignDomain::nonzero && nonzero != k)) continue;

        HypothesisResult r;
        r.target = target.label;
        r.signs = signs;
        for (std::size_t i = 0; i < k; ++i)
            if (signs[i] != Sign::zero) r.combined_lambda += to_int(signs[i]) * components[i].lambda;
        r.delta = target.lambda - r.combined_lambda;
        r.abs_delta = std::abs(r.delta);
        if (r.combined_lambda != 0.0) r.velocity_ratio = target.lambda / r.combined_lambda;
        out.push_back(std::move(r));
    }
    std::sort(out.begin(), out.end(), hypothesis_rank_less);
    return out;
}

/// Builds the combined line a hypothesis refers to, labelled from the components.
inline EntropyLine hypothesis_line(const HypothesisResult& h, std::span<const EntropyLine> components) {
    std::vector<SignedLine> terms;
    for (std::size_t i = 0; i < h.signs.size() && i < components.size(); ++i) terms.push_back({h.signs[i], components[i]});
    return combine(terms);
}

}  // namespace entrovel
