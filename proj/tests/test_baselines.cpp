#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "ri/baselines.hpp"

using namespace ri::baselines;

namespace {

// Exhaustive pairwise AUROC: average over all (positive, negative) pairs.
double auroc_pairs(const std::vector<double>& s, const std::vector<int>& y) {
    double num = 0.0;
    long pairs = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (y[i] != 1) continue;
        for (std::size_t j = 0; j < s.size(); ++j) {
            if (y[j] != 0) continue;
            ++pairs;
            if (s[i] > s[j])
                num += 1.0;
            else if (s[i] == s[j])
                num += 0.5;
        }
    }
    return num / pairs;
}

}  // namespace

TEST_CASE("published benchmark rows") {
    // GPT-4.1 on the factuality benchmark: c=0.34, r=0.06
    auto a = compute_baselines(0.34, 0.06);
    CHECK(std::fabs(a.c_over_a - 0.36) < 0.01);
    CHECK(std::fabs(a.f_score - 0.35) < 0.01);
    CHECK(a.weighted == doctest::Approx(0.152).epsilon(1e-9));
    // Qwen3-235B row: c=0.38, r=0.36
    auto b = compute_baselines(0.38, 0.36);
    CHECK(std::fabs(b.c_over_a - 0.59) < 0.02);
    CHECK(std::fabs(b.f_score - 0.45) < 0.02);
}

TEST_CASE("baseline formulas and edge cases") {
    auto s = compute_baselines(0.3, 0.4, 0.5);
    CHECK(s.correct == doctest::Approx(0.3));
    CHECK(s.refusal == doctest::Approx(0.4));
    CHECK(s.c_over_a == doctest::Approx(0.5));
    CHECK(s.f_score == doctest::Approx(0.6 / 1.6).epsilon(1e-12));
    CHECK(s.weighted == doctest::Approx(0.3 - 0.5 * (1 - 0.4)).epsilon(1e-12));
    CHECK(s.penalty_p == doctest::Approx(0.5));
    CHECK(s.c_over_a_defined);

    // F-score is the harmonic mean of c/a and c: 2/(1/x + 1/c)
    const double c = 0.3, r = 0.4;
    const double x = c / (1 - r);
    CHECK(s.f_score == doctest::Approx(2.0 / (1.0 / x + 1.0 / c)).epsilon(1e-12));

    // all refused: C/A undefined, others still defined
    auto t = compute_baselines(0.0, 1.0);
    CHECK_FALSE(t.c_over_a_defined);
    CHECK(t.f_score == doctest::Approx(0.0));
    CHECK(t.weighted == doctest::Approx(0.0));

    // infeasible c + r > 1
    CHECK_THROWS_AS(compute_baselines(0.7, 0.5), std::invalid_argument);
    // exact boundary is allowed
    auto u = compute_baselines(0.6, 0.4);
    CHECK(u.c_over_a == doctest::Approx(1.0));
}

TEST_CASE("answering probability") {
    std::vector<std::pair<std::int64_t, std::int64_t>> samples = {
        {10, 0}, {10, 10}, {4, 1}};
    auto p = p_answering(samples);
    REQUIRE(p.size() == 3);
    CHECK(p[0] == doctest::Approx(1.0));
    CHECK(p[1] == doctest::Approx(0.0));
    CHECK(p[2] == doctest::Approx(0.75));
    std::vector<std::pair<std::int64_t, std::int64_t>> bad = {{3, 4}};
    CHECK_THROWS_AS(p_answering(bad), std::invalid_argument);
    std::vector<std::pair<std::int64_t, std::int64_t>> zero = {{0, 0}};
    CHECK_THROWS_AS(p_answering(zero), std::invalid_argument);
}

TEST_CASE("auroc simple cases") {
    // perfect separation
    std::vector<double> s1 = {0.9, 0.8, 0.2, 0.1};
    std::vector<int> y1 = {1, 1, 0, 0};
    CHECK(auroc(s1, y1) == doctest::Approx(1.0));
    // perfect anti-separation
    std::vector<int> y2 = {0, 0, 1, 1};
    CHECK(auroc(s1, y2) == doctest::Approx(0.0));
    // all scores tied
    std::vector<double> s3 = {0.5, 0.5, 0.5, 0.5};
    CHECK(auroc(s3, y1) == doctest::Approx(0.5));
    // hand-computed with one tie across classes
    std::vector<double> s4 = {0.3, 0.5, 0.5, 0.9};
    std::vector<int> y4 = {0, 0, 1, 1};
    // pairs: (0.5,0.3)=1, (0.5,0.5)=0.5, (0.9,0.3)=1, (0.9,0.5)=1 -> 3.5/4
    CHECK(auroc(s4, y4) == doctest::Approx(0.875));
}

TEST_CASE("auroc against exhaustive pair oracle") {
    std::mt19937 gen(2024);
    std::uniform_real_distribution<double> U(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 5 + (int)(U(gen) * 60);
        std::vector<double> s(n);
        std::vector<int> y(n);
        bool has0 = false, has1 = false;
        for (int i = 0; i < n; ++i) {
            // coarse scores force plenty of ties
            s[i] = std::floor(U(gen) * 8.0) / 8.0;
            y[i] = U(gen) < 0.5 ? 0 : 1;
            (y[i] ? has1 : has0) = true;
        }
        if (!has0 || !has1) continue;
        CHECK(auroc(s, y) == doctest::Approx(auroc_pairs(s, y)).epsilon(1e-12));
    }
}

TEST_CASE("auroc invariances and errors") {
    std::vector<double> s = {0.1, 0.4, 0.2, 0.8, 0.6};
    std::vector<int> y = {0, 1, 0, 1, 1};
    const double base = auroc(s, y);
    // invariant under strictly increasing transforms
    std::vector<double> st(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) st[i] = std::exp(3.0 * s[i]);
    CHECK(auroc(st, y) == doctest::Approx(base).epsilon(1e-12));
    // complement flips around 0.5
    std::vector<double> sn(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) sn[i] = -s[i];
    CHECK(auroc(sn, y) == doctest::Approx(1.0 - base).epsilon(1e-12));

    std::vector<int> all1 = {1, 1, 1, 1, 1};
    CHECK_THROWS_AS(auroc(s, all1), std::invalid_argument);
    std::vector<int> short_y = {0, 1};
    CHECK_THROWS_AS(auroc(s, short_y), std::invalid_argument);
}
