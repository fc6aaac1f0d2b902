#include "ri/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <limits>
#include <stdexcept>

namespace ri::baselines {

BaselineScores compute_baselines(double c, double r, double p) {
    if (!(c >= 0.0 && c <= 1.0 && r >= 0.0 && r <= 1.0))
        throw std::invalid_argument("compute_baselines: rates must be in [0,1]");
    if (c > 1.0 - r + 1e-9)
        throw std::invalid_argument(
            "compute_baselines: c exceeds the answered fraction 1 - r");

    BaselineScores out;
    out.correct = c;
    out.refusal = r;
    out.penalty_p = p;
    if (r < 1.0) {
        out.c_over_a = c / (1.0 - r);
    } else {
        out.c_over_a_defined = false;
        out.c_over_a = std::numeric_limits<double>::quiet_NaN();
    }
    out.f_score = 2.0 * c / (2.0 - r);
    out.weighted = c - p * (1.0 - r);
    return out;
}

std::vector<double> p_answering(
    std::span<const std::pair<std::int64_t, std::int64_t>> samples) {
    std::vector<double> out;
    out.reserve(samples.size());
    for (const auto& [n, n_refusal] : samples) {
        if (n < 1 || n_refusal < 0 || n_refusal > n)
            throw std::invalid_argument(
                "p_answering: need 0 <= N_refusal <= N and N >= 1");
        out.push_back(1.0 - static_cast<double>(n_refusal) / static_cast<double>(n));
    }
    return out;
}

double auroc(std::span<const double> scores, std::span<const int> correct_labels) {
    if (scores.size() != correct_labels.size())
        throw std::invalid_argument("auroc: length mismatch");
    if (scores.size() < 2) throw std::invalid_argument("auroc: need >= 2 points");

    const std::size_t n = scores.size();
    std::size_t n_pos = 0;
    for (int label : correct_labels) n_pos += (label != 0);
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw std::invalid_argument("auroc: both classes must be present");

    // Average ranks over tied scores, then the Mann-Whitney rank-sum form.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    std::vector<double> rank(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = avg;
        i = j + 1;
    }

    double rank_sum_pos = 0.0;
    for (std::size_t k = 0; k < n; ++k)
        if (correct_labels[k] != 0) rank_sum_pos += rank[k];

    const double np = static_cast<double>(n_pos), nn = static_cast<double>(n_neg);
    return (rank_sum_pos - np * (np + 1.0) / 2.0) / (np * nn);
}

}  // namespace ri::baselines
