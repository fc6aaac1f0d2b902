#include "ri/copulas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ri/numerics.hpp"

namespace ri::copulas {

namespace {

constexpr double kEps = 1e-12;           // cell probability clamp
constexpr double kRhoBound = 0.999;      // Gaussian / Student-t rho search bound
constexpr double kClaytonLo = 1e-6;
constexpr double kClaytonHi = 50.0;
constexpr double kGumbelLo = 1.0;
constexpr double kGumbelHi = 50.0;
constexpr double kOptTol = 1e-7;

const double kNuGrid[] = {2, 4, 8, 16, 32, 64, 128, 256};

double clamp_prob(double p) { return std::clamp(p, kEps, 1.0 - kEps); }

}  // namespace

int param_count(CopulaFamily family) {
    return family == CopulaFamily::StudentT ? 2 : 1;
}

const char* family_name(CopulaFamily family) {
    switch (family) {
        case CopulaFamily::Gaussian: return "gaussian";
        case CopulaFamily::StudentT: return "student_t";
        case CopulaFamily::Clayton: return "clayton";
        case CopulaFamily::Gumbel: return "gumbel";
    }
    return "?";
}

double ContingencyCounts::refusal_rate() const {
    return static_cast<double>(n10 + n11) / static_cast<double>(total());
}

double ContingencyCounts::error_rate() const {
    return static_cast<double>(n01 + n11) / static_cast<double>(total());
}

double copula_cdf(CopulaFamily family, std::span<const double> theta, double u,
                  double v) {
    if (!(u >= 0.0 && u <= 1.0 && v >= 0.0 && v <= 1.0))
        throw std::domain_error("copula_cdf: u,v must be in [0,1]");
    if (theta.size() != static_cast<std::size_t>(param_count(family)))
        throw std::domain_error("copula_cdf: wrong parameter count");
    if (u == 0.0 || v == 0.0) return 0.0;
    if (u == 1.0) return v;
    if (v == 1.0) return u;

    switch (family) {
        case CopulaFamily::Gaussian: {
            const double rho = theta[0];
            if (!(std::fabs(rho) < 1.0))
                throw std::domain_error("copula_cdf: gaussian |rho| must be < 1");
            return numerics::bvn_cdf(numerics::std_normal_quantile(u),
                                     numerics::std_normal_quantile(v), rho);
        }
        case CopulaFamily::StudentT: {
            const double rho = theta[0], nu = theta[1];
            if (!(std::fabs(rho) < 1.0) || !(nu > 0.0))
                throw std::domain_error("copula_cdf: student_t parameter domain");
            return numerics::bvt_cdf(numerics::student_t_quantile(u, nu),
                                     numerics::student_t_quantile(v, nu), rho, nu);
        }
        case CopulaFamily::Clayton: {
            const double th = theta[0];
            if (!(th > 0.0))
                throw std::domain_error("copula_cdf: clayton theta must be > 0");
            const double s = std::pow(u, -th) + std::pow(v, -th) - 1.0;
            return s <= 0.0 ? 0.0 : std::pow(s, -1.0 / th);
        }
        case CopulaFamily::Gumbel: {
            const double th = theta[0];
            if (!(th >= 1.0))
                throw std::domain_error("copula_cdf: gumbel theta must be >= 1");
            const double a = std::pow(-std::log(u), th);
            const double b = std::pow(-std::log(v), th);
            return std::exp(-std::pow(a + b, 1.0 / th));
        }
    }
    throw std::domain_error("copula_cdf: unknown family");
}

std::array<double, 4> cell_probs(CopulaFamily family,
                                 std::span<const double> theta, double r,
                                 double mu) {
    if (!(r > 0.0 && r < 1.0 && mu > 0.0 && mu < 1.0))
        throw std::domain_error("cell_probs: degenerate margin");
    const double p00 = copula_cdf(family, theta, 1.0 - r, 1.0 - mu);
    const double p01 = (1.0 - r) - p00;
    const double p10 = (1.0 - mu) - p00;
    const double p11 = r + mu - 1.0 + p00;
    return {clamp_prob(p00), clamp_prob(p01), clamp_prob(p10), clamp_prob(p11)};
}

namespace {

double table_loglik(const ContingencyCounts& c, CopulaFamily family,
                    std::span<const double> theta, double r, double mu) {
    const auto p = cell_probs(family, theta, r, mu);
    return static_cast<double>(c.n00) * std::log(p[0]) +
           static_cast<double>(c.n01) * std::log(p[1]) +
           static_cast<double>(c.n10) * std::log(p[2]) +
           static_cast<double>(c.n11) * std::log(p[3]);
}

CopulaFit finalize(CopulaFit fit, const ContingencyCounts& counts) {
    const int k = param_count(fit.family);
    fit.aic = 2.0 * k - 2.0 * fit.loglik;
    fit.bic = k * std::log(static_cast<double>(counts.total())) - 2.0 * fit.loglik;
    return fit;
}

bool near_bound(double x, double lo, double hi) {
    const double span = hi - lo;
    return (x - lo) < 1e-4 * span || (hi - x) < 1e-4 * span;
}

}  // namespace

CopulaFit fit_copula(const ContingencyCounts& counts, CopulaFamily family) {
    CopulaFit fit;
    fit.family = family;
    if (counts.total() < 1) {
        fit.failed = true;
        fit.error = "empty table";
        return fit;
    }
    const double r = counts.refusal_rate();
    const double mu = counts.error_rate();
    if (!(r > 0.0 && r < 1.0 && mu > 0.0 && mu < 1.0)) {
        fit.failed = true;
        fit.error = "degenerate margin";
        return fit;
    }

    try {
        switch (family) {
            case CopulaFamily::Gaussian: {
                auto neg_ll = [&](double rho) {
                    const double t[1] = {rho};
                    return -table_loglik(counts, family, t, r, mu);
                };
                const double rho =
                    numerics::minimize_scalar_bounded(neg_ll, -kRhoBound, kRhoBound,
                                                      kOptTol);
                fit.theta = {rho};
                fit.loglik = -neg_ll(rho);
                fit.at_boundary = near_bound(rho, -kRhoBound, kRhoBound);
                break;
            }
            case CopulaFamily::StudentT: {
                double best_ll = -std::numeric_limits<double>::infinity();
                double best_rho = 0.0, best_nu = kNuGrid[0];
                for (double nu : kNuGrid) {
                    auto neg_ll = [&](double rho) {
                        const double t[2] = {rho, nu};
                        return -table_loglik(counts, family, t, r, mu);
                    };
                    const double rho = numerics::minimize_scalar_bounded(
                        neg_ll, -kRhoBound, kRhoBound, kOptTol);
                    const double ll = -neg_ll(rho);
                    if (ll > best_ll) {
                        best_ll = ll;
                        best_rho = rho;
                        best_nu = nu;
                    }
                }
                fit.theta = {best_rho, best_nu};
                fit.loglik = best_ll;
                fit.at_boundary = near_bound(best_rho, -kRhoBound, kRhoBound);
                break;
            }
            case CopulaFamily::Clayton: {
                auto neg_ll = [&](double th) {
                    const double t[1] = {th};
                    return -table_loglik(counts, family, t, r, mu);
                };
                const double th = numerics::minimize_scalar_bounded(
                    neg_ll, kClaytonLo, kClaytonHi, kOptTol);
                fit.theta = {th};
                fit.loglik = -neg_ll(th);
                fit.at_boundary = near_bound(th, kClaytonLo, kClaytonHi);
                break;
            }
            case CopulaFamily::Gumbel: {
                auto neg_ll = [&](double th) {
                    const double t[1] = {th};
                    return -table_loglik(counts, family, t, r, mu);
                };
                const double th = numerics::minimize_scalar_bounded(
                    neg_ll, kGumbelLo, kGumbelHi, kOptTol);
                fit.theta = {th};
                fit.loglik = -neg_ll(th);
                fit.at_boundary = near_bound(th, kGumbelLo, kGumbelHi);
                break;
            }
        }
    } catch (const std::exception& e) {
        fit.failed = true;
        fit.error = e.what();
        return fit;
    }
    return finalize(std::move(fit), counts);
}

std::vector<CopulaFit> compare_copulas(const ContingencyCounts& counts) {
    std::vector<CopulaFit> fits;
    for (CopulaFamily family :
         {CopulaFamily::Gaussian, CopulaFamily::StudentT, CopulaFamily::Clayton,
          CopulaFamily::Gumbel}) {
        fits.push_back(fit_copula(counts, family));
    }
    std::stable_sort(fits.begin(), fits.end(),
                     [](const CopulaFit& a, const CopulaFit& b) {
                         if (a.failed != b.failed) return !a.failed;
                         if (a.failed) return false;
                         if (a.aic != b.aic) return a.aic < b.aic;
                         const int ka = param_count(a.family);
                         const int kb = param_count(b.family);
                         if (ka != kb) return ka < kb;
                         return static_cast<int>(a.family) < static_cast<int>(b.family);
                     });
    return fits;
}

std::vector<WinRateRow> win_rates(const std::vector<std::vector<CopulaFit>>& units) {
    if (units.empty()) throw std::invalid_argument("win_rates: no units");

    auto find = [](const std::vector<CopulaFit>& fits, CopulaFamily family)
        -> const CopulaFit* {
        for (const auto& f : fits)
            if (f.family == family && !f.failed) return &f;
        return nullptr;
    };
    // 1 if a beats b, 0.5 on a tie. lower_wins flips the direction for
    // AIC/BIC where smaller is better.
    auto score = [](double a, double b, bool lower_wins) {
        if (std::fabs(a - b) < 1e-9) return 0.5;
        return ((a < b) == lower_wins) ? 1.0 : 0.0;
    };

    std::vector<WinRateRow> rows;
    for (CopulaFamily alt :
         {CopulaFamily::StudentT, CopulaFamily::Clayton, CopulaFamily::Gumbel}) {
        WinRateRow row;
        row.versus = alt;
        int counted = 0;
        for (const auto& unit : units) {
            const CopulaFit* g = find(unit, CopulaFamily::Gaussian);
            const CopulaFit* a = find(unit, alt);
            if (!g || !a) continue;
            row.loglik += score(g->loglik, a->loglik, false);
            row.aic += score(g->aic, a->aic, true);
            row.bic += score(g->bic, a->bic, true);
            ++counted;
        }
        if (counted > 0) {
            row.loglik /= counted;
            row.aic /= counted;
            row.bic /= counted;
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace ri::copulas
