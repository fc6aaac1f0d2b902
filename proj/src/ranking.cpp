#include "ri/ranking.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <limits>
#include <stdexcept>

#include "ri/rng.hpp"

namespace ri::ranking {

namespace {

double sse_of(std::span<const double> y, std::span<const double> fitted) {
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double d = y[i] - fitted[i];
        s += d * d;
    }
    return s;
}

// Weighted PAVA on values already sorted in increasing-x order.
std::vector<double> pava_increasing(std::span<const double> y,
                                    std::span<const double> w) {
    struct Block {
        double mean;
        double weight;
        std::size_t count;
    };
    std::vector<Block> blocks;
    blocks.reserve(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) {
        blocks.push_back({y[i], w[i], 1});
        while (blocks.size() >= 2 &&
               blocks[blocks.size() - 2].mean >= blocks.back().mean) {
            const Block top = blocks.back();
            blocks.pop_back();
            Block& prev = blocks.back();
            const double tw = prev.weight + top.weight;
            prev.mean = (prev.mean * prev.weight + top.mean * top.weight) / tw;
            prev.weight = tw;
            prev.count += top.count;
        }
    }
    std::vector<double> out;
    out.reserve(y.size());
    for (const Block& b : blocks)
        out.insert(out.end(), b.count, b.mean);
    return out;
}

}  // namespace

void ScoreMatrix::validate() const {
    if (values.size() != models.size())
        throw std::invalid_argument("ScoreMatrix: row count != model count");
    for (const auto& row : values)
        if (row.size() != settings.size())
            throw std::invalid_argument("ScoreMatrix: ragged rows");
}

std::vector<double> average_ranks_desc(std::span<const double> scores) {
    const std::size_t n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return scores[a] > scores[b];
    });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

double kendalls_w(const ScoreMatrix& m) {
    m.validate();
    const std::size_t n = m.n_models();
    const std::size_t ms = m.n_settings();
    if (n < 2) throw std::invalid_argument("kendalls_w: need >= 2 models");
    if (ms < 1) throw std::invalid_argument("kendalls_w: need >= 1 setting");

    std::vector<double> rank_sums(n, 0.0);
    std::vector<double> column(n);
    for (std::size_t j = 0; j < ms; ++j) {
        for (std::size_t i = 0; i < n; ++i) column[i] = m.values[i][j];
        const auto ranks = average_ranks_desc(column);
        for (std::size_t i = 0; i < n; ++i) rank_sums[i] += ranks[i];
    }
    const double rbar = static_cast<double>(ms) * (static_cast<double>(n) + 1.0) / 2.0;
    double ss = 0.0;
    for (double ri : rank_sums) ss += (ri - rbar) * (ri - rbar);
    const double nn = static_cast<double>(n);
    const double mm = static_cast<double>(ms);
    return std::clamp(12.0 * ss / (mm * mm * (nn * nn * nn - nn)), 0.0, 1.0);
}

std::vector<double> first_place_counts(const ScoreMatrix& m) {
    m.validate();
    std::vector<double> counts(m.n_models(), 0.0);
    for (std::size_t j = 0; j < m.n_settings(); ++j) {
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < m.n_models(); ++i)
            best = std::max(best, m.values[i][j]);
        std::vector<std::size_t> winners;
        for (std::size_t i = 0; i < m.n_models(); ++i)
            if (m.values[i][j] == best) winners.push_back(i);
        for (std::size_t i : winners)
            counts[i] += 1.0 / static_cast<double>(winners.size());
    }
    return counts;
}

double winner_entropy(std::span<const double> winner_counts, std::size_t n_models) {
    if (winner_counts.empty()) throw std::invalid_argument("winner_entropy: empty input");
    if (n_models < 2) throw std::invalid_argument("winner_entropy: need >= 2 models");
    const double total = std::accumulate(winner_counts.begin(), winner_counts.end(), 0.0);
    if (!(total > 0.0)) throw std::invalid_argument("winner_entropy: counts sum to 0");

    double h = 0.0;
    for (double c : winner_counts) {
        if (c <= 0.0) continue;
        const double p = c / total;
        h -= p * std::log(p);
    }
    h /= std::log(static_cast<double>(n_models));
    return std::clamp(h, 0.0, 1.0);
}

IsotonicFit isotonic_fit(std::span<const double> x, std::span<const double> y,
                         Direction direction) {
    if (x.size() != y.size())
        throw std::invalid_argument("isotonic_fit: length mismatch");
    const std::size_t n = x.size();
    IsotonicFit fit;
    fit.direction = direction;
    if (n == 0) return fit;

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });

    // Pool equal x up front: one weighted point per distinct x.
    std::vector<double> gy, gw;
    std::vector<std::vector<std::size_t>> groups;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        double sum = 0.0;
        std::vector<std::size_t> members;
        while (j < n && x[order[j]] == x[order[i]]) {
            sum += y[order[j]];
            members.push_back(order[j]);
            ++j;
        }
        const double w = static_cast<double>(j - i);
        gy.push_back(sum / w);
        gw.push_back(w);
        groups.push_back(std::move(members));
        i = j;
    }

    if (direction == Direction::Decreasing)
        for (double& v : gy) v = -v;
    std::vector<double> fitted_groups = pava_increasing(gy, gw);
    if (direction == Direction::Decreasing)
        for (double& v : fitted_groups) v = -v;

    fit.fitted.assign(n, 0.0);
    for (std::size_t g = 0; g < groups.size(); ++g)
        for (std::size_t idx : groups[g]) fit.fitted[idx] = fitted_groups[g];
    fit.sse = sse_of(y, fit.fitted);
    return fit;
}

IsotonicFit isotonic_fit_best(std::span<const double> x, std::span<const double> y) {
    IsotonicFit inc = isotonic_fit(x, y, Direction::Increasing);
    IsotonicFit dec = isotonic_fit(x, y, Direction::Decreasing);
    return inc.sse <= dec.sse ? inc : dec;
}

AdditiveIsotonicFit additive_isotonic_fit(std::span<const double> x1,
                                          std::span<const double> x2,
                                          std::span<const double> y) {
    if (x1.size() != y.size() || x2.size() != y.size())
        throw std::invalid_argument("additive_isotonic_fit: length mismatch");
    const std::size_t n = y.size();
    if (n < 2) throw std::invalid_argument("additive_isotonic_fit: need >= 2 points");

    AdditiveIsotonicFit fit;
    fit.g1.assign(n, 0.0);
    fit.g2.assign(n, 0.0);
    std::vector<double> partial(n);

    double prev_sse = std::numeric_limits<double>::infinity();
    for (int iter = 1; iter <= 200; ++iter) {
        fit.iterations = iter;
        for (std::size_t i = 0; i < n; ++i) partial[i] = y[i] - fit.g2[i];
        fit.g1 = isotonic_fit_best(x1, partial).fitted;

        for (std::size_t i = 0; i < n; ++i) partial[i] = y[i] - fit.g1[i];
        fit.g2 = isotonic_fit_best(x2, partial).fitted;

        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = y[i] - fit.g1[i] - fit.g2[i];
            sse += d * d;
        }
        if (prev_sse - sse < 1e-10) {
            fit.converged = true;
            break;
        }
        prev_sse = sse;
    }

    // Identifiability: shift the mean of g2 into g1.
    const double shift = std::accumulate(fit.g2.begin(), fit.g2.end(), 0.0) /
                         static_cast<double>(n);
    for (double& v : fit.g2) v -= shift;
    for (double& v : fit.g1) v += shift;

    fit.residuals.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        fit.residuals[i] = y[i] - fit.g1[i] - fit.g2[i];
    return fit;
}

const char* residual_mode_name(ResidualMode mode) {
    switch (mode) {
        case ResidualMode::Default: return "default";
        case ResidualMode::MinusCorrect: return "minus-correct";
        case ResidualMode::MinusRefusal: return "minus-refusal";
        case ResidualMode::MinusBoth: return "minus-both";
    }
    return "?";
}

ScoreMatrix residualize(const ScoreMatrix& metric, const ScoreMatrix& correct,
                        const ScoreMatrix& refusal, ResidualMode mode) {
    metric.validate();
    correct.validate();
    refusal.validate();
    if (metric.models != correct.models || metric.settings != correct.settings ||
        metric.models != refusal.models || metric.settings != refusal.settings)
        throw std::invalid_argument("residualize: matrices disagree on identifiers");

    ScoreMatrix out = metric;
    if (mode == ResidualMode::Default) return out;

    for (std::size_t i = 0; i < metric.n_models(); ++i) {
        const auto& y = metric.values[i];
        switch (mode) {
            case ResidualMode::MinusCorrect: {
                const auto fit = isotonic_fit_best(correct.values[i], y);
                for (std::size_t j = 0; j < y.size(); ++j)
                    out.values[i][j] = y[j] - fit.fitted[j];
                break;
            }
            case ResidualMode::MinusRefusal: {
                const auto fit = isotonic_fit_best(refusal.values[i], y);
                for (std::size_t j = 0; j < y.size(); ++j)
                    out.values[i][j] = y[j] - fit.fitted[j];
                break;
            }
            case ResidualMode::MinusBoth: {
                const auto fit =
                    additive_isotonic_fit(correct.values[i], refusal.values[i], y);
                out.values[i] = fit.residuals;
                break;
            }
            case ResidualMode::Default:
                break;
        }
    }
    return out;
}

StabilityReport stability_report(const std::map<std::string, ScoreMatrix>& metrics,
                                 const ScoreMatrix& correct,
                                 const ScoreMatrix& refusal, std::uint64_t seed,
                                 int random_draws) {
    StabilityReport report;
    report.random_seed = seed;
    report.random_draws = random_draws;

    for (const auto& [name, matrix] : metrics) {
        for (ResidualMode mode :
             {ResidualMode::Default, ResidualMode::MinusCorrect,
              ResidualMode::MinusRefusal, ResidualMode::MinusBoth}) {
            const ScoreMatrix resid = residualize(matrix, correct, refusal, mode);
            StabilityRow row;
            row.metric = name;
            row.mode = mode;
            row.w = kendalls_w(resid);
            row.entropy = winner_entropy(first_place_counts(resid), resid.n_models());
            report.rows.push_back(std::move(row));
        }
    }

    // Uniform-noise baseline on the same shape.
    const std::size_t n = correct.n_models();
    const std::size_t m = correct.n_settings();
    double w_sum = 0.0, w_sq = 0.0, h_sum = 0.0;
    for (int d = 0; d < random_draws; ++d) {
        auto stream = rng::stream(seed, static_cast<std::uint64_t>(d));
        ScoreMatrix noise = correct;
        for (auto& row : noise.values)
            for (double& v : row) v = stream.uniform01();
        const double w = kendalls_w(noise);
        const double h = winner_entropy(first_place_counts(noise), n);
        w_sum += w;
        w_sq += w * w;
        h_sum += h;
    }
    if (random_draws > 0) {
        const double k = static_cast<double>(random_draws);
        report.random_w_mean = w_sum / k;
        report.random_w_sd = std::sqrt(std::max(0.0, w_sq / k - (w_sum / k) * (w_sum / k)));
        report.random_entropy_mean = h_sum / k;
    }
    (void)m;
    return report;
}

}  // namespace ri::ranking
