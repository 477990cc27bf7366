#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "entrovel/expfit.hpp"
#include "entrovel/synthetic.hpp"
#include "oracles.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
namespace syn = entrovel::synthetic;

TEST_CASE("fit_exponential recovers a noiseless exponential", "[expfit]") {
    const auto s = syn::exponential("x", 2001, 19, 3.0, 0.05);
    const auto fit = entrovel::fit_exponential(s);

    // Independent route: raw-moment normal equations in long double.
    const auto ref = oracle::raw_moment_ols(s.times(), [&] {
        std::vector<double> l;
        for (double v : s.values()) l.push_back(std::log(v));
        return l;
    }());
    CHECK_THAT(static_cast<double>(ref.slope), WithinAbs(0.05, 1e-12));

    CHECK_THAT(fit.lambda, WithinAbs(0.05, 1e-9));
    CHECK_THAT(fit.lambda, WithinAbs(static_cast<double>(ref.slope), 1e-12));
    CHECK_THAT(fit.g0, WithinAbs(3.0, 1e-9));
    CHECK_THAT(fit.r2_log, WithinAbs(1.0, 1e-12));
    CHECK_THAT(fit.r2_linear, WithinAbs(1.0, 1e-12));
    CHECK(fit.n == 19);
}

TEST_CASE("fit_exponential edge cases", "[expfit]") {
    SECTION("flat series: lambda 0, R^2 defined as 1") {
        const auto fit = entrovel::fit_exponential(syn::exponential("flat", 2000, 11, 5.0, 0.0));
        CHECK(fit.lambda == 0.0);
        CHECK_THAT(fit.g0, WithinAbs(5.0, 1e-12));
        CHECK(fit.r2_log == 1.0);
        CHECK(fit.r2_linear == 1.0);
    }
    SECTION("unit-rate exponential") {
        const std::vector<double> t{0, 1, 2, 3};
        const std::vector<double> v{1.0, std::exp(1.0), std::exp(2.0), std::exp(3.0)};
        const auto fit = entrovel::fit_exponential(t, v);
        CHECK_THAT(fit.lambda, WithinAbs(1.0, 1e-12));
        CHECK_THAT(fit.g0, WithinAbs(1.0, 1e-12));
    }
    SECTION("too few points") {
        const std::vector<double> t{0}, v{1.0};
        CHECK_THROWS_AS(entrovel::fit_exponential(t, v), entrovel::FitError);
    }
    SECTION("non-positive value") {
        const std::vector<double> t{0, 1}, v{1.0, 0.0};
        CHECK_THROWS_AS(entrovel::fit_exponential(t, v), entrovel::FitError);
    }
    SECTION("r2_linear can be negative for badly shaped data") {
        // A spike the log-scale fit largely ignores.
        const std::vector<double> t{0, 1, 2, 3, 4, 5};
        const std::vector<double> v{1, 1, 1, 1, 1, 1000};
        const auto fit = entrovel::fit_exponential(t, v);
        CHECK(fit.r2_log >= 0.0);
        CHECK(fit.r2_log <= 1.0);
        CHECK(fit.r2_linear < 0.0);
    }
}

TEST_CASE("predict evaluates g0 * exp(lambda t)", "[expfit]") {
    const entrovel::ExpFit money{0.0555, 7.5805, 1, 1, 19};
    CHECK(entrovel::predict(money, 0.0) == 7.5805);
    const entrovel::ExpFit flat{0.0, 5.0, 1, 1, 11};
    CHECK(entrovel::predict(flat, 123.4) == 5.0);
    const entrovel::ExpFit f{0.05, 3.0, 1, 1, 19};
    CHECK_THAT(entrovel::predict(f, 10.0), WithinAbs(3.0 * std::exp(0.5), 1e-12));
    CHECK_THAT(entrovel::predict(f, 10.0), WithinAbs(4.9462, 1e-4));
}

TEST_CASE("rate conversions", "[expfit][rates]") {
    CHECK_THAT(entrovel::lambda_to_rate(0.0555), WithinAbs(0.0571, 5e-5));
    CHECK_THAT(entrovel::lambda_to_rate(0.0878), WithinAbs(0.0918, 5e-5));
    CHECK(entrovel::lambda_to_rate(0.0) == 0.0);
    CHECK_THAT(entrovel::rate_to_lambda(0.0571), WithinAbs(0.0555, 1e-4));
    CHECK(entrovel::rate_to_lambda(0.0) == 0.0);
    for (double x : {-0.5, 0.1, 2.0}) CHECK_THAT(entrovel::lambda_to_rate(entrovel::rate_to_lambda(x)), WithinRel(x, 1e-15));
    CHECK_THROWS_AS(entrovel::rate_to_lambda(-1.0), entrovel::FitError);
    CHECK_THROWS_AS(entrovel::rate_to_lambda(-1.5), entrovel::FitError);
}

TEST_CASE("lambda is scale invariant; g0 scales", "[expfit][property]") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> scale(1e-3, 1e3);
    std::normal_distribution<double> noise(0.0, 0.1);
    for (int trial = 0; trial < 200; ++trial) {
        auto base = syn::with_lognormal_noise(syn::exponential("x", 2000, 15, 2.0, 0.04), 0.1, rng);
        const double c = scale(rng);
        std::vector<double> scaled = base.values();
        for (auto& v : scaled) v *= c;
        const auto t = base.times();
        const auto a = entrovel::fit_exponential(t, base.values());
        const auto b = entrovel::fit_exponential(t, scaled);
        CHECK_THAT(b.lambda, WithinAbs(a.lambda, 1e-12));
        CHECK_THAT(b.g0, WithinRel(a.g0 * c, 1e-12));
        CHECK_THAT(b.r2_log, WithinAbs(a.r2_log, 1e-12));
    }
}

TEST_CASE("time shift keeps lambda of an exact exponential", "[expfit][property]") {
    const auto s = syn::exponential("x", 2001, 19, 3.0, 0.0555);
    const auto base = entrovel::fit_exponential(s);
    for (int ref = 2002; ref <= 2017; ++ref) {
        const auto fit = entrovel::fit_exponential(entrovel::rebase(s, ref));
        CHECK_THAT(fit.lambda, WithinAbs(base.lambda, 1e-12));
        CHECK_THAT(fit.g0, WithinRel(3.0 * std::exp(0.0555 * (ref - 2001)), 1e-12));
    }
}

TEST_CASE("r2_log equals the squared Pearson correlation of t and ln(value)", "[expfit][property]") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 200; ++trial) {
        const auto s = syn::with_lognormal_noise(syn::exponential("x", 2000, 19, 1.0, 0.03), 0.2, rng);
        std::vector<double> logs;
        for (double v : s.values()) logs.push_back(std::log(v));
        CHECK_THAT(entrovel::fit_exponential(s).r2_log, WithinAbs(oracle::pearson_r2(s.times(), logs), 1e-12));
        CHECK_THAT(entrovel::fit_exponential(s).lambda, WithinAbs(oracle::log_slope(s.times(), s.values()), 1e-12));
    }
}

TEST_CASE("seeded log-normal noise: lambda within 0.01 in at least 95% of trials", "[expfit][property]") {
    std::mt19937_64 rng(424242);
    int within = 0;
    constexpr int trials = 1000;
    const auto clean = syn::exponential("x", 2001, 19, 7.5805, 0.05);
    for (int i = 0; i < trials; ++i) {
        const auto noisy = syn::with_lognormal_noise(clean, 0.05, rng);
        if (std::abs(entrovel::fit_exponential(noisy).lambda - 0.05) < 0.01) ++within;
    }
    CHECK(within >= 950);
}
