#include "ri/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ri/numerics.hpp"
#include "ri/rng.hpp"

namespace ri::estimator {

namespace {

constexpr double kPi = 3.14159265358979323846;

double percentile(std::vector<double> sorted, double q) {
    // Linear interpolation between order statistics.
    const double pos = q * (static_cast<double>(sorted.size()) - 1.0);
    const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

TwoPassSummary summarize_two_pass(const std::vector<ingest::JoinedOutcome>& outcomes) {
    if (outcomes.empty())
        throw std::invalid_argument("summarize_two_pass: no outcomes");
    TwoPassSummary s;
    s.n = static_cast<std::int64_t>(outcomes.size());
    std::int64_t correct1 = 0, refused = 0, correct_hat = 0;
    for (const auto& out : outcomes) {
        if (out.pass1 == ingest::GradeLabel::Correct) ++correct1;
        if (out.pass1 == ingest::GradeLabel::Refused) ++refused;
        if (out.w_hat == 0) ++correct_hat;
    }
    const double n = static_cast<double>(s.n);
    s.c1 = correct1 / n;
    s.r = refused / n;
    s.c2 = correct_hat / n;
    return s;
}

copulas::ContingencyCounts counts_from_summary(const TwoPassSummary& s) {
    if (!(s.r > 0.0 && s.r < 1.0))
        throw std::domain_error("counts_from_summary: degenerate refusal rate");

    const double mu = 1.0 - s.c2;
    const double acc_att = std::clamp(s.c1 / std::max(1e-12, 1.0 - s.r), 0.0, 1.0);
    const double mu_a = 1.0 - acc_att;  // wrong rate on attempted items
    const double mu_r_raw = (mu - (1.0 - s.r) * mu_a) / s.r;  // wrong on refused
    const double mu_r = std::clamp(mu_r_raw, 0.0, 1.0);
    if (std::fabs(mu_r - mu_r_raw) > 0.05)
        throw std::invalid_argument(
            "counts_from_summary: inconsistent rates (implied wrong-on-refused "
            "rate clipped by more than 0.05)");

    // Refused count rounded first, then cells.
    const std::int64_t n_r =
        static_cast<std::int64_t>(std::llround(static_cast<double>(s.n) * s.r));
    const std::int64_t n_a = s.n - n_r;
    copulas::ContingencyCounts c;
    c.n11 = static_cast<std::int64_t>(std::llround(static_cast<double>(n_r) * mu_r));
    c.n10 = n_r - c.n11;
    c.n01 = static_cast<std::int64_t>(std::llround(static_cast<double>(n_a) * mu_a));
    c.n00 = n_a - c.n01;
    return c;
}

double rho_to_spearman(double rho) {
    if (!(std::fabs(rho) <= 1.0))
        throw std::domain_error("rho_to_spearman: |rho| must be <= 1");
    return 6.0 / kPi * std::asin(rho / 2.0);
}

RiEstimate estimate_ri(const TwoPassSummary& s) {
    RiEstimate est;
    const double mu = 1.0 - s.c2;
    if (!(s.r > 0.0 && s.r < 1.0) || !(mu > 0.0 && mu < 1.0)) {
        est.degenerate = true;
        return est;
    }
    const auto counts = counts_from_summary(s);
    const auto fit = copulas::fit_copula(counts, copulas::CopulaFamily::Gaussian);
    if (fit.failed) {
        est.degenerate = true;
        return est;
    }
    est.rho = fit.theta[0];
    est.ri = rho_to_spearman(est.rho);
    return est;
}

ConfidenceInterval bootstrap_ci(const std::vector<ingest::JoinedOutcome>& outcomes,
                                int B, double level, std::uint64_t seed) {
    if (outcomes.empty()) throw std::invalid_argument("bootstrap_ci: no records");
    if (B < 1) throw std::invalid_argument("bootstrap_ci: B must be >= 1");
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("bootstrap_ci: level must be in (0,1)");

    const std::size_t n = outcomes.size();
    std::vector<double> estimates(static_cast<std::size_t>(B));
    for (int b = 0; b < B; ++b) {
        auto stream = rng::stream(seed, static_cast<std::uint64_t>(b));
        std::int64_t correct1 = 0, refused = 0, correct_hat = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const auto& out = outcomes[stream.below(n)];
            if (out.pass1 == ingest::GradeLabel::Correct) ++correct1;
            if (out.pass1 == ingest::GradeLabel::Refused) ++refused;
            if (out.w_hat == 0) ++correct_hat;
        }
        TwoPassSummary s;
        s.n = static_cast<std::int64_t>(n);
        s.c1 = static_cast<double>(correct1) / static_cast<double>(n);
        s.r = static_cast<double>(refused) / static_cast<double>(n);
        s.c2 = static_cast<double>(correct_hat) / static_cast<double>(n);
        estimates[static_cast<std::size_t>(b)] = estimate_ri(s).ri;
    }
    std::sort(estimates.begin(), estimates.end());

    ConfidenceInterval ci;
    ci.level = level;
    const double alpha = (1.0 - level) / 2.0;
    ci.lo = percentile(estimates, alpha);
    ci.hi = percentile(estimates, 1.0 - alpha);
    return ci;
}

}  // namespace ri::estimator
