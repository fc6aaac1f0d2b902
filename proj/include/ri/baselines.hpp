#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

// Heuristic factuality metrics (correct rate, refusal rate, C/A, F-score,
// Weighted) and the AUROC comparison over answering frequency.

namespace ri::baselines {

struct BaselineScores {
    double correct = 0.0;
    double refusal = 0.0;
    double c_over_a = 0.0;  // c / (1 - r); undefined at r = 1
    bool c_over_a_defined = true;
    double f_score = 0.0;   // 2c / (2 - r)
    double weighted = 0.0;  // c - p (1 - r)
    double penalty_p = 0.2;
};

// Throws std::invalid_argument when c + r exceeds 1 beyond tolerance.
BaselineScores compute_baselines(double c, double r, double p = 0.2);

// Per-question answering probability 1 - N_refusal / N from repeated
// sampling counts. Throws std::invalid_argument on inconsistent counts.
std::vector<double> p_answering(
    std::span<const std::pair<std::int64_t, std::int64_t>> samples);

// Mann-Whitney AUROC: probability that a random (positive, negative) pair
// is ordered correctly by score, ties counting 0.5. Labels: 1 = correct
// (the positive class). Throws std::invalid_argument when a class is
// missing or lengths differ.
double auroc(std::span<const double> scores, std::span<const int> correct_labels);

}  // namespace ri::baselines
