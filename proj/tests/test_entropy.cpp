#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "entrovel/entropy.hpp"

using Catch::Matchers::WithinAbs;
using entrovel::EntropyLine;
using entrovel::Sign;

namespace {

const EntropyLine money{"M", 0.0555};
const EntropyLine gdp{"G", 0.0197};

double rounded4(double x) { return std::round(x * 1e4) / 1e4; }

}  // namespace

TEST_CASE("entropy_line keeps lambda and discards g0", "[entropy]") {
    const auto line = entrovel::entropy_line({0.0555, 7.5805, 0.98, 0.97, 19}, "money");
    CHECK(line.lambda == 0.0555);
    CHECK(line.label == "money");
    CHECK(line.at(0.0) == 0.0);
    CHECK_THAT(line.at(18.0), WithinAbs(0.999, 1e-12));
    CHECK(entrovel::entropy_line({0.0, 5.0, 1, 1, 11}, "flat").at(50.0) == 0.0);
    CHECK(entrovel::entropy_line({0.0197, 1.0, 1, 1, 19}, "gdp").lambda == 0.0197);
}

TEST_CASE("combine sums signed slopes", "[entropy][combine]") {
    const auto diff = entrovel::combine({{Sign::plus, money}, {Sign::minus, gdp}});
    CHECK_THAT(diff.lambda, WithinAbs(0.0358, 1e-12));
    CHECK(diff.label == "M - G");
    const auto sum = entrovel::combine({{Sign::plus, money}, {Sign::plus, gdp}});
    CHECK_THAT(sum.lambda, WithinAbs(0.0752, 1e-12));
    CHECK(sum.label == "M + G");
    CHECK(entrovel::combine({{Sign::plus, money}, {Sign::minus, money}}).lambda == 0.0);
    CHECK(entrovel::combine({{Sign::minus, gdp}}).label == "-G");
    CHECK_THROWS_AS(entrovel::combine(std::vector<entrovel::SignedLine>{}), entrovel::EntropyError);
}

TEST_CASE("combine is commutative, associative, and odd under sign flips", "[entropy][combine][property]") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> lam(-0.2, 0.2);
    std::bernoulli_distribution coin;
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<entrovel::SignedLine> terms;
        for (int i = 0; i < 4; ++i) terms.push_back({coin(rng) ? Sign::plus : Sign::minus, {"x", lam(rng)}});
        const double forward = entrovel::combine(terms).lambda;

        auto reversed = terms;
        std::reverse(reversed.begin(), reversed.end());
        CHECK_THAT(entrovel::combine(reversed).lambda, WithinAbs(forward, 1e-15));

        const auto left = entrovel::combine({terms[0], terms[1]});
        const auto right = entrovel::combine({terms[2], terms[3]});
        CHECK_THAT(entrovel::combine({{Sign::plus, left}, {Sign::plus, right}}).lambda, WithinAbs(forward, 1e-15));

        auto flipped = terms;
        for (auto& t : flipped) t.sign = t.sign == Sign::plus ? Sign::minus : Sign::plus;
        CHECK(entrovel::combine(flipped).lambda == -forward);
    }
}

TEST_CASE("residual_constant and velocity_ratio on published constants", "[entropy]") {
    const EntropyLine sum{"M + G", 0.0752}, diff{"M - G", 0.0358};
    CHECK_THAT(entrovel::residual_constant({"russell", 0.0624}, sum), WithinAbs(-0.0128, 1e-12));
    CHECK_THAT(entrovel::residual_constant({"sp500", 0.0358}, diff), WithinAbs(0.0, 1e-12));
    CHECK_THAT(entrovel::residual_constant({"home", 0.0320}, diff), WithinAbs(-0.0038, 1e-12));

    CHECK_THAT(entrovel::velocity_ratio({"home", 0.0320}, diff), WithinAbs(0.894, 5e-4));
    CHECK_THAT(entrovel::velocity_ratio({"russell", 0.0624}, sum), WithinAbs(0.830, 5e-4));
    CHECK_THAT(entrovel::velocity_ratio({"nasdaq", 0.0878}, sum), WithinAbs(1.168, 5e-4));
    CHECK_THROWS_AS(entrovel::velocity_ratio({"x", 0.01}, EntropyLine{"zero", 0.0}), entrovel::EntropyError);
}

TEST_CASE("enumerate_hypotheses ranks the published decompositions", "[entropy][hypotheses]") {
    const std::vector<EntropyLine> comps{money, gdp};

    SECTION("S&P: M - G, residual 0") {
        const auto ranked = entrovel::enumerate_hypotheses({"sp500", 0.0358}, comps);
        REQUIRE(ranked.size() == 8);
        CHECK(ranked.front().signs == std::vector<Sign>{Sign::plus, Sign::minus});
        CHECK(rounded4(ranked.front().delta) == 0.0);
        CHECK_THAT(*ranked.front().velocity_ratio, WithinAbs(1.0, 1e-12));
    }
    SECTION("Russell: M + G, residual -0.0128, among full-support sign vectors") {
        const auto ranked = entrovel::enumerate_hypotheses({"russell", 0.0624}, comps, entrovel::SignDomain::nonzero);
        REQUIRE(ranked.size() == 4);
        CHECK(ranked.front().signs == std::vector<Sign>{Sign::plus, Sign::plus});
        CHECK_THAT(ranked.front().delta, WithinAbs(-0.0128, 1e-12));

        // With zero allowed, money alone (|delta| = 0.0069) is closer.
        const auto open = entrovel::enumerate_hypotheses({"russell", 0.0624}, comps);
        CHECK(open.front().signs == std::vector<Sign>{Sign::plus, Sign::zero});
    }
    SECTION("NASDAQ: M + G, residual +0.0126") {
        const auto ranked = entrovel::enumerate_hypotheses({"nasdaq", 0.0878}, comps);
        CHECK(ranked.front().signs == std::vector<Sign>{Sign::plus, Sign::plus});
        CHECK_THAT(ranked.front().delta, WithinAbs(0.0126, 1e-12));
    }
    SECTION("home price: M - G, residual -0.0038") {
        const auto ranked = entrovel::enumerate_hypotheses({"home", 0.0320}, comps);
        CHECK(ranked.front().signs == std::vector<Sign>{Sign::plus, Sign::minus});
        CHECK_THAT(ranked.front().delta, WithinAbs(-0.0038, 1e-12));
    }
    SECTION("target equal to the only component") {
        const std::vector<EntropyLine> one{money};
        const auto ranked = entrovel::enumerate_hypotheses({"M'", 0.0555}, one);
        REQUIRE(ranked.size() == 2);
        CHECK(ranked.front().signs == std::vector<Sign>{Sign::plus});
        CHECK(ranked.front().delta == 0.0);
    }
    SECTION("errors") {
        CHECK_THROWS_AS(entrovel::enumerate_hypotheses(money, std::vector<EntropyLine>{}), entrovel::EntropyError);
        CHECK_THROWS_AS(entrovel::enumerate_hypotheses(money, std::vector<EntropyLine>(5, gdp)), entrovel::EntropyError);
    }
}

TEST_CASE("hypothesis results satisfy their invariants", "[entropy][hypotheses][property]") {
    std::mt19937_64 rng(2021);
    std::uniform_real_distribution<double> lam(-0.1, 0.1);
    std::uniform_int_distribution<int> k_dist(1, 4);
    for (int trial = 0; trial < 300; ++trial) {
        const int k = k_dist(rng);
        std::vector<EntropyLine> comps;
        for (int i = 0; i < k; ++i) comps.push_back({"c" + std::to_string(i), lam(rng)});
        const EntropyLine target{"t", lam(rng)};
        const auto ranked = entrovel::enumerate_hypotheses(target, comps);

        std::size_t expected = 1;
        for (int i = 0; i < k; ++i) expected *= 3;
        REQUIRE(ranked.size() == expected - 1);

        std::set<std::vector<int>> seen;
        for (std::size_t i = 0; i < ranked.size(); ++i) {
            const auto& h = ranked[i];
            std::vector<int> key;
            for (auto s : h.signs) key.push_back(entrovel::to_int(s));
            seen.insert(key);
            CHECK(h.support() > 0);
            CHECK_THAT(h.combined_lambda + h.delta, WithinAbs(target.lambda, 1e-15));
            if (h.velocity_ratio) CHECK_THAT(*h.velocity_ratio * h.combined_lambda, WithinAbs(target.lambda, 1e-15));
            if (i > 0) CHECK_FALSE(entrovel::hypothesis_rank_less(h, ranked[i - 1]));
        }
        CHECK(seen.size() == ranked.size());

        // Ranking depends only on comparisons: a common shift keeps the order.
        auto shifted = ranked;
        for (auto& h : shifted) h.abs_delta += 0.5;
        std::stable_sort(shifted.begin(), shifted.end(), entrovel::hypothesis_rank_less);
        for (std::size_t i = 0; i < ranked.size(); ++i) CHECK(shifted[i].signs == ranked[i].signs);
    }
}

TEST_CASE("top hypothesis recovers the generating sign vector", "[entropy][hypotheses][property]") {
    std::mt19937_64 rng(6174);
    std::uniform_real_distribution<double> lam(0.001, 0.12);
    std::uniform_int_distribution<int> k_dist(1, 3), sign_dist(-1, 1);
    for (int trial = 0; trial < 1000; ++trial) {
        const int k = k_dist(rng);
        std::vector<EntropyLine> comps;
        for (int i = 0; i < k; ++i) comps.push_back({"c", lam(rng)});
        std::vector<Sign> truth(k, Sign::zero);
        while (std::all_of(truth.begin(), truth.end(), [](Sign s) { return s == Sign::zero; }))
            for (auto& s : truth) s = static_cast<Sign>(sign_dist(rng));

        // Target assembled independently of the library, in component order.
        double target = 0.0;
        for (int i = 0; i < k; ++i)
            if (truth[i] != Sign::zero) target += entrovel::to_int(truth[i]) * comps[i].lambda;

        const auto ranked = entrovel::enumerate_hypotheses({"t", target}, comps);
        CHECK(ranked.front().signs == truth);
        CHECK(ranked.front().delta == 0.0);
        if (ranked.size() > 1) CHECK(ranked[1].abs_delta > 0.0);
    }
}

TEST_CASE("ties break by support, then lexicographic sign vector", "[entropy][hypotheses]") {
    // Identical components: (+1, 0) and (0, +1) tie on |delta| and support.
    const std::vector<EntropyLine> comps{{"a", 0.03}, {"b", 0.03}};
    const auto ranked = entrovel::enumerate_hypotheses({"t", 0.03}, comps);
    CHECK(ranked[0].signs == std::vector<Sign>{Sign::zero, Sign::plus});
    CHECK(ranked[1].signs == std::vector<Sign>{Sign::plus, Sign::zero});
    // (+1, -1) and (-1, +1) both give combined 0 -> no velocity ratio.
    const auto zero = std::find_if(ranked.begin(), ranked.end(), [](const auto& h) { return h.combined_lambda == 0.0; });
    REQUIRE(zero != ranked.end());
    CHECK_FALSE(zero->velocity_ratio.has_value());
}
