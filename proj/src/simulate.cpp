#include "ri/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ri/numerics.hpp"
#include "ri/rng.hpp"

namespace ri::simulate {

namespace {

std::string question_id(std::int64_t index) {
    std::string digits = std::to_string(index);
    if (digits.size() < 8) digits.insert(0, 8 - digits.size(), '0');
    return "q" + digits;
}

// Latent draw for one question: z_w = rho z_r + sqrt(1-rho^2) eps.
struct LatentDraw {
    bool refused;
    bool wrong;
};

LatentDraw draw_question(const LatentModel& m, std::uint64_t seed,
                         std::int64_t index) {
    auto stream = rng::stream(seed, static_cast<std::uint64_t>(index));
    const double z_r = numerics::std_normal_quantile(stream.uniform01());
    const double eps = numerics::std_normal_quantile(stream.uniform01());
    const double z_w = m.rho * z_r + std::sqrt(1.0 - m.rho * m.rho) * eps;
    return {z_r > m.tau_r, z_w > m.tau_w};
}

}  // namespace

double LatentModel::refusal_rate() const {
    return 1.0 - numerics::std_normal_cdf(tau_r);
}

double LatentModel::error_rate() const {
    return 1.0 - numerics::std_normal_cdf(tau_w);
}

LatentModel LatentModel::from_rates(double rho, double refusal, double error) {
    if (!(refusal > 0.0 && refusal < 1.0))
        throw std::domain_error("LatentModel: refusal rate must be in (0,1)");
    if (!(error > 0.0 && error < 1.0))
        throw std::domain_error("LatentModel: error rate must be in (0,1)");
    if (!(rho > -1.0 && rho < 1.0))
        throw std::domain_error("LatentModel: |rho| must be < 1");
    LatentModel m;
    m.rho = rho;
    m.tau_r = numerics::std_normal_quantile(1.0 - refusal);
    m.tau_w = numerics::std_normal_quantile(1.0 - error);
    return m;
}

std::vector<ingest::QuestionRecord> sample_two_pass(const LatentModel& model,
                                                    std::int64_t n,
                                                    std::uint64_t seed,
                                                    const std::string& model_id,
                                                    const std::string& setting_id) {
    if (n < 1) throw std::invalid_argument("sample_two_pass: n must be >= 1");
    if (!std::isfinite(model.tau_r) || !std::isfinite(model.tau_w))
        throw std::domain_error("sample_two_pass: degenerate threshold");

    std::vector<ingest::QuestionRecord> records;
    records.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        const LatentDraw d = draw_question(model, seed, i);
        ingest::QuestionRecord rec;
        rec.question_id = question_id(i);
        rec.model_id = model_id;
        rec.setting_id = setting_id;
        rec.pass = 1;
        rec.label = d.refused ? ingest::GradeLabel::Refused
                   : d.wrong ? ingest::GradeLabel::Incorrect
                             : ingest::GradeLabel::Correct;
        records.push_back(rec);
        if (d.refused) {
            rec.pass = 2;
            rec.label = d.wrong ? ingest::GradeLabel::Incorrect
                                : ingest::GradeLabel::Correct;
            records.push_back(rec);
        }
    }
    return records;
}

std::vector<ingest::JoinedOutcome> sample_outcomes(const LatentModel& model,
                                                   std::int64_t n,
                                                   std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("sample_outcomes: n must be >= 1");
    std::vector<ingest::JoinedOutcome> outcomes;
    outcomes.reserve(static_cast<std::size_t>(n));
    for (std::int64_t i = 0; i < n; ++i) {
        const LatentDraw d = draw_question(model, seed, i);
        ingest::JoinedOutcome out;
        out.question_id = question_id(i);
        if (d.refused) {
            out.pass1 = ingest::GradeLabel::Refused;
            out.pass2 = d.wrong ? ingest::GradeLabel::Incorrect
                                : ingest::GradeLabel::Correct;
        } else {
            out.pass1 = d.wrong ? ingest::GradeLabel::Incorrect
                                : ingest::GradeLabel::Correct;
        }
        out.w_hat = d.wrong ? 1 : 0;
        outcomes.push_back(std::move(out));
    }
    return outcomes;
}

std::vector<SweepSetting> refusal_sweep(double rho, double mu,
                                        std::span<const double> refusal_rates,
                                        std::int64_t n, std::uint64_t seed,
                                        double penalty_p) {
    std::vector<SweepSetting> settings;
    settings.reserve(refusal_rates.size());
    std::uint64_t setting_index = 0;
    for (double rate : refusal_rates) {
        const LatentModel model = LatentModel::from_rates(rho, rate, mu);
        // One independent seed block per setting.
        const auto outcomes =
            sample_outcomes(model, n, seed + 0x51ED2700ULL * (setting_index + 1));
        SweepSetting s;
        s.target_refusal_rate = rate;
        s.summary = estimator::summarize_two_pass(outcomes);
        s.estimate = estimator::estimate_ri(s.summary);
        s.scores = baselines::compute_baselines(s.summary.c1, s.summary.r, penalty_p);
        settings.push_back(std::move(s));
        ++setting_index;
    }
    return settings;
}

std::vector<SubsetCvRow> subset_cv(const std::vector<ingest::JoinedOutcome>& outcomes,
                                   std::span<const std::int64_t> sizes, int k,
                                   std::uint64_t seed, double penalty_p) {
    if (k < 2) throw std::invalid_argument("subset_cv: k must be >= 2");
    const std::int64_t total = static_cast<std::int64_t>(outcomes.size());
    for (std::int64_t size : sizes)
        if (size < 1 || size > total)
            throw std::invalid_argument("subset_cv: size outside [1, dataset size]");

    std::vector<SubsetCvRow> rows;
    std::uint64_t stream_index = 0;
    for (std::int64_t size : sizes) {
        std::map<std::string, std::vector<double>> samples;
        for (int rep = 0; rep < k; ++rep) {
            auto stream = rng::stream(seed, stream_index++);
            // Partial Fisher-Yates: first `size` entries are a uniform
            // subset drawn without replacement.
            std::vector<std::uint32_t> index(static_cast<std::size_t>(total));
            for (std::int64_t i = 0; i < total; ++i)
                index[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(i);
            for (std::int64_t i = 0; i < size; ++i) {
                const std::uint64_t j =
                    i + static_cast<std::int64_t>(stream.below(
                            static_cast<std::uint64_t>(total - i)));
                std::swap(index[static_cast<std::size_t>(i)],
                          index[static_cast<std::size_t>(j)]);
            }

            std::int64_t correct1 = 0, refused = 0, correct_hat = 0;
            for (std::int64_t i = 0; i < size; ++i) {
                const auto& out = outcomes[index[static_cast<std::size_t>(i)]];
                if (out.pass1 == ingest::GradeLabel::Correct) ++correct1;
                if (out.pass1 == ingest::GradeLabel::Refused) ++refused;
                if (out.w_hat == 0) ++correct_hat;
            }
            estimator::TwoPassSummary s;
            s.n = size;
            const double dn = static_cast<double>(size);
            s.c1 = correct1 / dn;
            s.r = refused / dn;
            s.c2 = correct_hat / dn;

            const auto est = estimator::estimate_ri(s);
            const auto scores = baselines::compute_baselines(s.c1, s.r, penalty_p);
            samples["ri"].push_back(est.ri);
            samples["c_over_a"].push_back(scores.c_over_a_defined ? scores.c_over_a
                                                                  : 0.0);
            samples["f_score"].push_back(scores.f_score);
            samples["weighted"].push_back(scores.weighted);
            samples["correct_rate"].push_back(s.c1);
            samples["refusal_rate"].push_back(s.r);
        }

        SubsetCvRow row;
        row.size = size;
        for (const auto& [name, values] : samples) {
            const double dk = static_cast<double>(values.size());
            double mean = 0.0;
            for (double v : values) mean += v;
            mean /= dk;
            double var = 0.0;
            for (double v : values) var += (v - mean) * (v - mean);
            var /= dk;
            SubsetCvCell cell;
            cell.mean = mean;
            cell.sd = std::sqrt(var);
            cell.unstable = std::fabs(mean) < 1e-3;
            cell.cv = cell.unstable && mean == 0.0
                          ? std::numeric_limits<double>::infinity()
                          : cell.sd / std::fabs(mean);
            row.metrics.emplace(name, cell);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace ri::simulate
