#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

// Copula families over 2x2 contingency tables with fixed margins, maximum
// likelihood fitting, and information-criterion model comparison.

namespace ri::copulas {

enum class CopulaFamily { Gaussian, StudentT, Clayton, Gumbel };

int param_count(CopulaFamily family);
const char* family_name(CopulaFamily family);

// Counts of (R=a, W_hat=b): n00, n01, n10, n11 with first index = refusal.
struct ContingencyCounts {
    std::int64_t n00 = 0;
    std::int64_t n01 = 0;
    std::int64_t n10 = 0;
    std::int64_t n11 = 0;

    std::int64_t total() const { return n00 + n01 + n10 + n11; }
    double refusal_rate() const;  // r = (n10 + n11) / n
    double error_rate() const;    // mu = (n01 + n11) / n
};

struct CopulaFit {
    CopulaFamily family = CopulaFamily::Gaussian;
    std::vector<double> theta;  // {rho} | {rho, nu} | {theta}
    double loglik = 0.0;
    double aic = 0.0;
    double bic = 0.0;
    bool at_boundary = false;
    bool failed = false;
    std::string error;
};

// C(u,v) for the given family. Throws std::domain_error on parameters
// outside the family domain (Clayton theta <= 0, Gumbel theta < 1, ...).
double copula_cdf(CopulaFamily family, std::span<const double> theta, double u,
                  double v);

// Cell probabilities (p00, p01, p10, p11) implied by the copula with
// margins fixed at refusal rate r and error rate mu, via
// p00 = C(1-r, 1-mu). Each cell is clamped to [1e-12, 1-1e-12].
// Throws std::domain_error when r or mu is degenerate (outside (0,1)).
std::array<double, 4> cell_probs(CopulaFamily family,
                                 std::span<const double> theta, double r,
                                 double mu);

// Maximum-likelihood fit of one family to the observed counts, margins
// fixed at the empirical rates. Student-t profiles rho over a fixed nu
// grid {2,4,...,256}. Never throws for in-domain counts; a family that
// cannot be fitted is returned with failed = true.
CopulaFit fit_copula(const ContingencyCounts& counts, CopulaFamily family);

// All four families fitted and sorted by ascending AIC (ties: fewer
// parameters first, then family tag order). Failed fits sort last.
std::vector<CopulaFit> compare_copulas(const ContingencyCounts& counts);

// Fraction of units where the Gaussian fit beats the named alternative
// under each criterion; ties (|difference| < 1e-9) count 0.5.
struct WinRateRow {
    CopulaFamily versus;
    double loglik = 0.0;
    double aic = 0.0;
    double bic = 0.0;
};

// Each unit is one compare_copulas result. Throws std::invalid_argument on
// empty input.
std::vector<WinRateRow> win_rates(const std::vector<std::vector<CopulaFit>>& units);

}  // namespace ri::copulas
