#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ri/baselines.hpp"
#include "ri/estimator.hpp"
#include "ri/ingest.hpp"

// Latent-Gaussian generator of two-pass evaluation records: the ground
// truth oracle for estimator validation, refusal-rate sweeps, and the
// subset coefficient-of-variation protocol.

namespace ri::simulate {

// (Z_R, Z_W) bivariate standard normal with correlation rho, thresholded at
// tau_r (refuse when above) and tau_w (wrong when above).
struct LatentModel {
    double rho = 0.0;
    double tau_r = 0.0;
    double tau_w = 0.0;

    double refusal_rate() const;  // 1 - Phi(tau_r)
    double error_rate() const;    // 1 - Phi(tau_w)

    // Throws std::domain_error when a rate is outside (0,1).
    static LatentModel from_rates(double rho, double refusal, double error);
};

// n questions, both passes, deterministic per (seed, question index).
// Question ids are zero-padded so downstream ordering is lexicographic.
std::vector<ingest::QuestionRecord> sample_two_pass(
    const LatentModel& model, std::int64_t n, std::uint64_t seed,
    const std::string& model_id = "sim", const std::string& setting_id = "s0");

// Joined outcomes directly, skipping record round-tripping.
std::vector<ingest::JoinedOutcome> sample_outcomes(const LatentModel& model,
                                                   std::int64_t n,
                                                   std::uint64_t seed);

struct SweepSetting {
    double target_refusal_rate = 0.0;
    estimator::TwoPassSummary summary;
    estimator::RiEstimate estimate;
    baselines::BaselineScores scores;
};

// One simulated evaluation per refusal rate with shared rho and error rate
// mu; the simulated analogue of running prompt variants with different
// refusal tendencies.
std::vector<SweepSetting> refusal_sweep(double rho, double mu,
                                        std::span<const double> refusal_rates,
                                        std::int64_t n, std::uint64_t seed,
                                        double penalty_p = 0.2);

struct SubsetCvCell {
    double mean = 0.0;
    double sd = 0.0;
    double cv = 0.0;
    bool unstable = false;  // |mean| too small for a meaningful CV
};

struct SubsetCvRow {
    std::int64_t size = 0;
    std::map<std::string, SubsetCvCell> metrics;  // ri, c_over_a, f_score, ...
};

// For each size: k subsets sampled without replacement, per-metric CV
// (stddev / |mean|). Throws std::invalid_argument when a size exceeds the
// dataset or k < 2.
std::vector<SubsetCvRow> subset_cv(const std::vector<ingest::JoinedOutcome>& outcomes,
                                   std::span<const std::int64_t> sizes, int k,
                                   std::uint64_t seed, double penalty_p = 0.2);

}  // namespace ri::simulate
