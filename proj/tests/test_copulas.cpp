#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "oracles.hpp"
#include "ri/copulas.hpp"
#include "ri/numerics.hpp"
#include "ri/rng.hpp"

using namespace ri::copulas;

namespace {

// Direct multinomial log-likelihood from cell probabilities.
double loglik_at(const ContingencyCounts& c, const std::array<double, 4>& p) {
    return c.n00 * std::log(p[0]) + c.n01 * std::log(p[1]) +
           c.n10 * std::log(p[2]) + c.n11 * std::log(p[3]);
}

// Sample counts from exact cell probabilities.
ContingencyCounts sample_counts(const std::array<double, 4>& p, int n,
                                std::uint64_t seed) {
    auto s = ri::rng::stream(seed, 0);
    ContingencyCounts c;
    for (int i = 0; i < n; ++i) {
        const double u = s.uniform01();
        if (u < p[0])
            ++c.n00;
        else if (u < p[0] + p[1])
            ++c.n01;
        else if (u < p[0] + p[1] + p[2])
            ++c.n10;
        else
            ++c.n11;
    }
    return c;
}

}  // namespace

TEST_CASE("copula cdf closed forms") {
    // Gaussian rho=0 is the independence copula
    const double th0[] = {0.0};
    CHECK(copula_cdf(CopulaFamily::Gaussian, th0, 0.3, 0.8) ==
          doctest::Approx(0.24).epsilon(1e-10));
    // Gumbel theta=1 is independence too
    const double th1[] = {1.0};
    CHECK(copula_cdf(CopulaFamily::Gumbel, th1, 0.3, 0.8) ==
          doctest::Approx(0.24).epsilon(1e-12));
    // Clayton closed form: (u^-t + v^-t - 1)^(-1/t)
    const double th2[] = {2.0};
    const double want = std::pow(std::pow(0.4, -2.0) + std::pow(0.7, -2.0) - 1.0,
                                 -0.5);
    CHECK(copula_cdf(CopulaFamily::Clayton, th2, 0.4, 0.7) ==
          doctest::Approx(want).epsilon(1e-12));
    // Clayton at u=v=0.5, theta=2: (4+4-1)^(-1/2) = 7^(-1/2)
    CHECK(copula_cdf(CopulaFamily::Clayton, th2, 0.5, 0.5) ==
          doctest::Approx(1.0 / std::sqrt(7.0)).epsilon(1e-12));
    // Student-t at the origin quantiles matches asin identity for any nu
    const double tht[] = {0.37, 8.0};
    CHECK(copula_cdf(CopulaFamily::StudentT, tht, 0.5, 0.5) ==
          doctest::Approx(0.25 + std::asin(0.37) / (2.0 * M_PI))
              .epsilon(1e-8));
}

TEST_CASE("copula cdf boundaries and domain errors") {
    const double th[] = {0.5};
    for (auto fam : {CopulaFamily::Gaussian, CopulaFamily::Clayton,
                     CopulaFamily::Gumbel}) {
        CHECK(copula_cdf(fam, th, 0.0, 0.7) == doctest::Approx(0.0));
        CHECK(copula_cdf(fam, th, 0.7, 0.0) == doctest::Approx(0.0));
        CHECK(copula_cdf(fam, th, 1.0, 0.7) == doctest::Approx(0.7));
        CHECK(copula_cdf(fam, th, 0.7, 1.0) == doctest::Approx(0.7));
        CHECK(copula_cdf(fam, th, 1.0, 1.0) == doctest::Approx(1.0));
    }
    const double bad_clayton[] = {0.0};
    CHECK_THROWS_AS(copula_cdf(CopulaFamily::Clayton, bad_clayton, 0.5, 0.5),
                    std::domain_error);
    const double bad_gumbel[] = {0.5};
    CHECK_THROWS_AS(copula_cdf(CopulaFamily::Gumbel, bad_gumbel, 0.5, 0.5),
                    std::domain_error);
}

TEST_CASE("cell probs independence example") {
    const double th[] = {0.0};
    auto p = cell_probs(CopulaFamily::Gaussian, th, 0.3, 0.4);
    // margins r=0.3, mu=0.4 independent: p00=0.42, p01=0.28, p10=0.18, p11=0.12
    CHECK(p[0] == doctest::Approx(0.42).epsilon(1e-10));
    CHECK(p[1] == doctest::Approx(0.28).epsilon(1e-10));
    CHECK(p[2] == doctest::Approx(0.18).epsilon(1e-10));
    CHECK(p[3] == doctest::Approx(0.12).epsilon(1e-10));
    CHECK(p[0] + p[1] + p[2] + p[3] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(cell_probs(CopulaFamily::Gaussian, th, 0.0, 0.4),
                    std::domain_error);
}

TEST_CASE("contingency counts rates") {
    ContingencyCounts c{200, 300, 100, 400};
    CHECK(c.total() == 1000);
    CHECK(c.refusal_rate() == doctest::Approx(0.5));
    CHECK(c.error_rate() == doctest::Approx(0.7));
}

TEST_CASE("gaussian fit matches dense grid search") {
    ContingencyCounts c{420, 180, 140, 260};
    auto fit = fit_copula(c, CopulaFamily::Gaussian);
    REQUIRE_FALSE(fit.failed);
    const double r = c.refusal_rate(), mu = c.error_rate();
    // grid-search oracle over rho
    double best_rho = 0.0, best_ll = -1e300;
    for (double rho = -0.998; rho <= 0.998; rho += 0.0005) {
        const double th[] = {rho};
        const double ll = loglik_at(c, cell_probs(CopulaFamily::Gaussian, th, r, mu));
        if (ll > best_ll) {
            best_ll = ll;
            best_rho = rho;
        }
    }
    CHECK(fit.theta[0] == doctest::Approx(best_rho).epsilon(2e-3));
    CHECK(fit.loglik >= best_ll - 1e-6);
    CHECK(fit.aic == doctest::Approx(2.0 * 1 - 2.0 * fit.loglik).epsilon(1e-12));
    CHECK(fit.bic ==
          doctest::Approx(std::log((double)c.total()) - 2.0 * fit.loglik)
              .epsilon(1e-12));
}

TEST_CASE("fit recovers parameters from simulated gaussian counts") {
    for (double rho : {-0.5, 0.2, 0.7}) {
        const double th[] = {rho};
        auto p = cell_probs(CopulaFamily::Gaussian, th, 0.4, 0.35);
        auto c = sample_counts(p, 50000, 77 + (std::uint64_t)(rho * 100));
        auto fit = fit_copula(c, CopulaFamily::Gaussian);
        REQUIRE_FALSE(fit.failed);
        CHECK(fit.theta[0] == doctest::Approx(rho).epsilon(0.08));
    }
}

TEST_CASE("clayton fit recovers theta") {
    const double th[] = {3.0};
    auto p = cell_probs(CopulaFamily::Clayton, th, 0.4, 0.35);
    auto c = sample_counts(p, 50000, 991);
    auto fit = fit_copula(c, CopulaFamily::Clayton);
    REQUIRE_FALSE(fit.failed);
    CHECK(fit.theta[0] == doctest::Approx(3.0).epsilon(0.15));
    CHECK_FALSE(fit.at_boundary);
}

TEST_CASE("student t nests gaussian") {
    // data generated from a Gaussian copula: t should match its loglik at
    // large nu but lose on AIC due to the extra parameter
    const double th[] = {0.5};
    auto p = cell_probs(CopulaFamily::Gaussian, th, 0.45, 0.3);
    auto c = sample_counts(p, 20000, 314);
    auto g = fit_copula(c, CopulaFamily::Gaussian);
    auto t = fit_copula(c, CopulaFamily::StudentT);
    REQUIRE_FALSE(g.failed);
    REQUIRE_FALSE(t.failed);
    CHECK(t.theta.size() == 2);
    CHECK(t.loglik >= g.loglik - 1e-3);   // nesting (up to grid resolution)
    CHECK(t.loglik <= g.loglik + 2.0);    // no real edge on Gaussian data
    CHECK(g.aic < t.aic);                 // parsimony penalty decides
}

TEST_CASE("compare copulas ordering and stability") {
    const double th[] = {0.6};
    auto p = cell_probs(CopulaFamily::Gaussian, th, 0.4, 0.3);
    auto c = sample_counts(p, 20000, 555);
    auto fits = compare_copulas(c);
    REQUIRE(fits.size() == 4);
    for (std::size_t i = 1; i < fits.size(); ++i) {
        if (!fits[i - 1].failed && !fits[i].failed)
            CHECK(fits[i - 1].aic <= fits[i].aic + 1e-12);
        if (fits[i - 1].failed) CHECK(fits[i].failed);
    }
    CHECK(fits.front().family == CopulaFamily::Gaussian);
}

TEST_CASE("tiny uniform table") {
    ContingencyCounts c{1, 1, 1, 1};
    auto fits = compare_copulas(c);
    REQUIRE(fits.size() == 4);
    for (const auto& f : fits) {
        if (f.failed) continue;
        CHECK(std::isfinite(f.loglik));
        CHECK(std::isfinite(f.aic));
    }
    // r = mu = 0.5; independence log-likelihood is 4 log(1/4)
    auto g = fit_copula(c, CopulaFamily::Gaussian);
    REQUIRE_FALSE(g.failed);
    CHECK(g.loglik >= 4.0 * std::log(0.25) - 1e-9);
}

TEST_CASE("win rates ties and direction") {
    // build two units from Gaussian data; Gaussian should win on AIC and BIC
    std::vector<std::vector<CopulaFit>> units;
    for (std::uint64_t s : {11ULL, 22ULL, 33ULL, 44ULL}) {
        const double th[] = {0.55};
        auto p = cell_probs(CopulaFamily::Gaussian, th, 0.4, 0.3);
        units.push_back(compare_copulas(sample_counts(p, 20000, s)));
    }
    auto rows = win_rates(units);
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) {
        CHECK(row.versus != CopulaFamily::Gaussian);
        CHECK(row.loglik >= 0.0);
        CHECK(row.loglik <= 1.0);
        if (row.versus == CopulaFamily::StudentT) {
            CHECK(row.aic == doctest::Approx(1.0));
        }
    }
    CHECK_THROWS_AS(win_rates({}), std::invalid_argument);
}
