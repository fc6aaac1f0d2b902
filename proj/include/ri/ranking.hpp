#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

// Ranking-agreement statistics (Kendall's W, Winner Entropy) and isotonic
// residualization for stability reports across evaluation settings.

namespace ri::ranking {

// Rectangular metric values: rows are models, columns evaluation settings.
struct ScoreMatrix {
    std::vector<std::string> models;
    std::vector<std::string> settings;
    std::vector<std::vector<double>> values;  // [model][setting]

    std::size_t n_models() const { return models.size(); }
    std::size_t n_settings() const { return settings.size(); }
    void validate() const;  // throws std::invalid_argument on shape errors
};

// Average ranks of one setting's scores over models; rank 1 = largest
// value, ties get the mean of the ranks they span.
std::vector<double> average_ranks_desc(std::span<const double> scores);

// Coefficient of concordance W = 12 sum (R_i - Rbar)^2 / (m^2 (n^3 - n)).
// Throws std::invalid_argument for fewer than 2 models or 1 setting.
double kendalls_w(const ScoreMatrix& m);

// First-place counts per model over settings; ties split fractionally.
std::vector<double> first_place_counts(const ScoreMatrix& m);

// Normalized winner entropy H = -sum p_i log_n p_i. counts must sum to the
// number of settings.
double winner_entropy(std::span<const double> winner_counts, std::size_t n_models);

enum class Direction { Increasing, Decreasing };

struct IsotonicFit {
    std::vector<double> fitted;
    Direction direction = Direction::Increasing;
    double sse = 0.0;
};

// Least-squares monotone fit of y against x (pool-adjacent-violators).
// Equal x values are pooled up front so they receive equal fitted values.
IsotonicFit isotonic_fit(std::span<const double> x, std::span<const double> y,
                         Direction direction);

// Tries both directions and keeps the lower SSE.
IsotonicFit isotonic_fit_best(std::span<const double> x, std::span<const double> y);

struct AdditiveIsotonicFit {
    std::vector<double> g1;  // component on x1, evaluated at the data points
    std::vector<double> g2;  // component on x2, centered to mean zero
    std::vector<double> residuals;
    int iterations = 0;
    bool converged = false;
};

// Backfitting fit of y ~ g1(x1) + g2(x2) with monotone components, each
// direction chosen by SSE. Stops when the SSE improvement drops below 1e-10
// or after 200 iterations.
AdditiveIsotonicFit additive_isotonic_fit(std::span<const double> x1,
                                          std::span<const double> x2,
                                          std::span<const double> y);

enum class ResidualMode { Default, MinusCorrect, MinusRefusal, MinusBoth };

const char* residual_mode_name(ResidualMode mode);

// Per-model isotonic residualization of the metric against the covariate
// matrices across settings. Default returns the metric unchanged.
ScoreMatrix residualize(const ScoreMatrix& metric, const ScoreMatrix& correct,
                        const ScoreMatrix& refusal, ResidualMode mode);

struct StabilityRow {
    std::string metric;
    ResidualMode mode = ResidualMode::Default;
    double w = 0.0;
    double entropy = 0.0;
};

struct StabilityReport {
    std::vector<StabilityRow> rows;
    std::uint64_t random_seed = 0;
    int random_draws = 0;
    double random_w_mean = 0.0;
    double random_w_sd = 0.0;
    double random_entropy_mean = 0.0;
};

// Kendall's W and Winner Entropy for each metric under all four
// residualization modes, plus a seeded uniform-noise baseline.
StabilityReport stability_report(const std::map<std::string, ScoreMatrix>& metrics,
                                 const ScoreMatrix& correct,
                                 const ScoreMatrix& refusal, std::uint64_t seed,
                                 int random_draws = 1000);

}  // namespace ri::ranking
