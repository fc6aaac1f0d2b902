#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ri/copulas.hpp"
#include "ri/ingest.hpp"

// The Refusal Index pipeline: two-pass aggregation, contingency
// reconstruction, tetrachoric maximum likelihood, Spearman conversion, and
// bootstrap intervals.

namespace ri::estimator {

struct TwoPassSummary {
    std::int64_t n = 0;  // question count
    double c1 = 0.0;     // first-pass correct rate over all questions
    double r = 0.0;      // first-pass refusal rate
    double c2 = 0.0;     // aggregated accuracy under W_hat (both passes)
};

struct ConfidenceInterval {
    double lo = 0.0;
    double hi = 0.0;
    double level = 0.95;
};

struct RiEstimate {
    double rho = 0.0;        // tetrachoric correlation
    double ri = 0.0;         // Spearman rank correlation, (6/pi) asin(rho/2)
    bool degenerate = false; // no refusal signal; ri forced to 0
    std::optional<ConfidenceInterval> ci;
};

// Aggregates joined per-question outcomes. Throws std::invalid_argument on
// empty input (missing-pass contracts are enforced by join_passes).
TwoPassSummary summarize_two_pass(const std::vector<ingest::JoinedOutcome>& outcomes);

// Reconstructs the 2x2 table from aggregate rates: wrong-on-attempted and
// wrong-on-refused rates are derived from (c1, r, c2), the refused count is
// rounded first, then the cells. Throws std::domain_error when r is
// degenerate and std::invalid_argument when the implied wrong-on-refused
// rate needs clipping by more than 0.05.
copulas::ContingencyCounts counts_from_summary(const TwoPassSummary& s);

// Spearman rho from the tetrachoric rho; accepts the closed interval
// [-1, 1]. Throws std::domain_error outside it.
double rho_to_spearman(double rho);

// Gaussian-copula MLE of the Refusal Index. Degenerate margins (refusal or
// error rate at 0 or 1) yield ri = 0 with the degenerate flag set.
RiEstimate estimate_ri(const TwoPassSummary& s);

// Percentile bootstrap over question-level resamples. Deterministic given
// seed; each resample uses an independent stream derived from (seed, index).
// Degenerate resamples contribute ri = 0.
ConfidenceInterval bootstrap_ci(const std::vector<ingest::JoinedOutcome>& outcomes,
                                int B, double level, std::uint64_t seed);

}  // namespace ri::estimator
