#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ri/baselines.hpp"
#include "ri/curves.hpp"
#include "ri/numerics.hpp"

using namespace ri::curves;

TEST_CASE("uniform grid") {
    auto g = uniform_grid(5);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == doctest::Approx(0.0));
    CHECK(g.back() == doctest::Approx(1.0));
    CHECK(g[2] == doctest::Approx(0.5));
    CHECK_THROWS_AS(uniform_grid(1), std::invalid_argument);
}

TEST_CASE("iso ri curve endpoints and values") {
    auto g = uniform_grid(11);
    auto curve = iso_ri_curve(0.5, 0.4, g);
    REQUIRE(curve.size() == 11);
    CHECK(curve.front().r == doctest::Approx(0.0));
    CHECK(curve.front().a == doctest::Approx(0.4));  // a(0) = mu
    CHECK(curve.back().r == doctest::Approx(1.0));
    CHECK(curve.back().a == doctest::Approx(0.0));   // a(1) = 0
    for (const auto& pt : curve) CHECK(pt.feasible);

    // interior point matches the orthant probability directly
    const double r = 0.3;
    const double tr = ri::numerics::std_normal_quantile(1.0 - r);
    const double tw = ri::numerics::std_normal_quantile(0.4);
    const double want = ri::numerics::bvn_cdf(tr, tw, 0.5);
    CHECK(curve[3].a == doctest::Approx(want).epsilon(1e-10));

    CHECK_THROWS_AS(iso_ri_curve(0.5, 0.0, g), std::domain_error);
    CHECK_THROWS_AS(iso_ri_curve(0.5, 1.0, g), std::domain_error);
}

TEST_CASE("iso ri curve monotone decreasing in r") {
    auto g = uniform_grid(101);
    for (double rho : {-0.5, 0.0, 0.4, 0.8}) {
        auto curve = iso_ri_curve(rho, 0.35, g);
        for (std::size_t i = 1; i < curve.size(); ++i)
            CHECK(curve[i].a < curve[i - 1].a + 1e-12);
    }
}

TEST_CASE("iso ri curve increases with rho at fixed r") {
    // stronger refusal-error alignment preserves more accuracy when refusing
    auto g = uniform_grid(21);
    std::vector<double> rhos = {-0.8, -0.3, 0.0, 0.3, 0.8};
    for (std::size_t j = 1; j + 1 < g.size(); ++j) {  // interior r only
        double prev = -1.0;
        for (double rho : rhos) {
            auto curve = iso_ri_curve(rho, 0.4, g);
            CHECK(curve[j].a > prev);
            prev = curve[j].a;
        }
    }
}

TEST_CASE("iso ri curve zero rho factorizes") {
    auto g = uniform_grid(11);
    auto curve = iso_ri_curve(0.0, 0.45, g);
    for (std::size_t j = 1; j + 1 < g.size(); ++j) {
        // independence: accuracy among all = (1 - r) * mu... expressed as
        // P(answer and correct) = (1 - r) * Phi(tau_w)' complement = (1-r)*mu
        CHECK(curve[j].a == doctest::Approx((1.0 - g[j]) * 0.45).epsilon(1e-9));
    }
}

TEST_CASE("iso score curves solve the metric formulas") {
    auto g = uniform_grid(6);
    auto ca = iso_score_curve(ScoreMetric::COverA, 0.5, 0.2, g);
    auto f = iso_score_curve(ScoreMetric::FScore, 0.5, 0.2, g);
    auto w = iso_score_curve(ScoreMetric::Weighted, 0.1, 0.2, g);
    REQUIRE(ca.size() == 6);
    for (std::size_t j = 0; j < g.size(); ++j) {
        const double r = g[j];
        CHECK(ca[j].a == doctest::Approx(0.5 * (1.0 - r)).epsilon(1e-12));
        CHECK(f[j].a == doctest::Approx(0.5 * (2.0 - r) / 2.0).epsilon(1e-12));
        CHECK(w[j].a == doctest::Approx(0.1 + 0.2 * (1.0 - r)).epsilon(1e-12));
    }
    // round trip through the metric definitions at feasible points
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (!ca[j].feasible || g[j] >= 1.0) continue;
        auto s = ri::baselines::compute_baselines(ca[j].a, g[j], 0.2);
        CHECK(s.c_over_a == doctest::Approx(0.5).epsilon(1e-10));
    }
    for (std::size_t j = 0; j < g.size(); ++j) {
        if (!w[j].feasible) continue;
        auto s = ri::baselines::compute_baselines(w[j].a, g[j], 0.2);
        CHECK(s.weighted == doctest::Approx(0.1).epsilon(1e-10));
    }
}

TEST_CASE("iso score curve flags infeasible points") {
    auto g = uniform_grid(6);
    // F = 0.9 needs c = 0.9 at r = 0, fine, but c > 1 - r for larger r
    auto f = iso_score_curve(ScoreMetric::FScore, 0.9, 0.2, g);
    CHECK(f.front().feasible);
    CHECK_FALSE(f.back().feasible);  // r = 1 needs c = 0.45 > 0
    bool any_infeasible = false;
    for (const auto& pt : f) any_infeasible |= !pt.feasible;
    CHECK(any_infeasible);
    // negative implied c
    auto w = iso_score_curve(ScoreMetric::Weighted, -0.5, 0.2, g);
    CHECK_FALSE(w.back().feasible);  // c = -0.5 at r = 1
}
