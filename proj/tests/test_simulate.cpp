#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>

#include "ri/ingest.hpp"
#include "ri/numerics.hpp"
#include "ri/simulate.hpp"

using namespace ri::simulate;

TEST_CASE("latent model from rates") {
    auto m = LatentModel::from_rates(0.5, 0.4, 0.3);
    CHECK(m.rho == doctest::Approx(0.5));
    CHECK(m.refusal_rate() == doctest::Approx(0.4).epsilon(1e-12));
    CHECK(m.error_rate() == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(m.tau_r ==
          doctest::Approx(ri::numerics::std_normal_quantile(0.6)).epsilon(1e-12));
    CHECK_THROWS_AS(LatentModel::from_rates(0.5, 0.0, 0.3), std::domain_error);
    CHECK_THROWS_AS(LatentModel::from_rates(0.5, 0.4, 1.0), std::domain_error);
}

TEST_CASE("sampled records satisfy the two-pass contract") {
    auto model = LatentModel::from_rates(0.4, 0.3, 0.25);
    auto records = sample_two_pass(model, 500, 11, "mx", "sy");
    // one pass-1 record per question plus one pass-2 per refusal
    long pass1 = 0, pass2 = 0, refused = 0;
    for (const auto& r : records) {
        CHECK(r.model_id == "mx");
        CHECK(r.setting_id == "sy");
        if (r.pass == 1) {
            ++pass1;
            if (r.label == ri::ingest::GradeLabel::Refused) ++refused;
        } else {
            ++pass2;
            CHECK(r.label != ri::ingest::GradeLabel::Refused);
        }
    }
    CHECK(pass1 == 500);
    CHECK(pass2 == refused);
    // joining must succeed with zero diagnostics
    auto joined = ri::ingest::join_passes(records, "mx", "sy");
    CHECK((long)joined.size() == 500);
    // ids are zero padded and lexicographically ordered
    CHECK(joined.front().question_id < joined.back().question_id);
    CHECK(joined.front().question_id.size() == joined.back().question_id.size());
}

TEST_CASE("records and outcomes agree") {
    auto model = LatentModel::from_rates(0.6, 0.35, 0.3);
    auto records = sample_two_pass(model, 300, 77);
    auto joined = ri::ingest::join_passes(records, "sim", "s0");
    auto direct = sample_outcomes(model, 300, 77);
    REQUIRE(joined.size() == direct.size());
    for (std::size_t i = 0; i < joined.size(); ++i) {
        CHECK(joined[i].question_id == direct[i].question_id);
        CHECK(joined[i].pass1 == direct[i].pass1);
        CHECK(joined[i].w_hat == direct[i].w_hat);
    }
}

TEST_CASE("determinism and seed sensitivity") {
    auto model = LatentModel::from_rates(0.5, 0.4, 0.3);
    std::ostringstream a, b, c;
    ri::ingest::write_records(a, sample_two_pass(model, 200, 42));
    ri::ingest::write_records(b, sample_two_pass(model, 200, 42));
    ri::ingest::write_records(c, sample_two_pass(model, 200, 43));
    CHECK(a.str() == b.str());
    CHECK(a.str() != c.str());
}

TEST_CASE("margins converge to the targets") {
    for (double rho : {0.0, 0.5}) {
        auto model = LatentModel::from_rates(rho, 0.35, 0.25);
        auto outcomes = sample_outcomes(model, 100000, 1000 + (int)(rho * 10));
        long refused = 0, wrong = 0;
        for (const auto& o : outcomes) {
            if (o.pass1 == ri::ingest::GradeLabel::Refused) ++refused;
            wrong += o.w_hat;
        }
        CHECK(refused / 1e5 == doctest::Approx(0.35).epsilon(0.02));
        CHECK(wrong / 1e5 == doctest::Approx(0.25).epsilon(0.03));
    }
}

TEST_CASE("independence and comonotone joints") {
    // rho = 0: P(refused and wrong) = r * mu
    auto ind = sample_outcomes(LatentModel::from_rates(0.0, 0.4, 0.3), 100000, 5);
    long both = 0;
    for (const auto& o : ind)
        if (o.pass1 == ri::ingest::GradeLabel::Refused && o.w_hat == 1) ++both;
    CHECK(both / 1e5 == doctest::Approx(0.12).epsilon(0.05));
    // rho ~ 1 with equal margins: refusal and wrongness nearly coincide
    auto com =
        sample_outcomes(LatentModel::from_rates(0.999, 0.4, 0.4), 100000, 6);
    long match = 0;
    for (const auto& o : com) {
        const bool refused = o.pass1 == ri::ingest::GradeLabel::Refused;
        if (refused == (o.w_hat == 1)) ++match;
    }
    CHECK(match / 1e5 > 0.97);
}

TEST_CASE("refusal sweep structure") {
    const double rates[] = {0.2, 0.5};
    auto sweep = refusal_sweep(0.5, 0.3, rates, 20000, 99);
    REQUIRE(sweep.size() == 2);
    for (std::size_t i = 0; i < sweep.size(); ++i) {
        const auto& s = sweep[i];
        CHECK(s.target_refusal_rate == doctest::Approx(rates[i]));
        CHECK(s.summary.n == 20000);
        CHECK(s.summary.r == doctest::Approx(rates[i]).epsilon(0.05));
        CHECK_FALSE(s.estimate.degenerate);
        CHECK(s.estimate.ri > 0.2);
        CHECK(s.estimate.ri < 0.7);
        CHECK(s.scores.correct == doctest::Approx(s.summary.c1));
        CHECK(s.scores.refusal == doctest::Approx(s.summary.r));
    }
    // settings use different streams: same target twice gives same data
    auto again = refusal_sweep(0.5, 0.3, rates, 20000, 99);
    CHECK(again[0].summary.c1 == sweep[0].summary.c1);
    CHECK(again[1].summary.c1 == sweep[1].summary.c1);
}

TEST_CASE("subset cv protocol") {
    auto outcomes =
        sample_outcomes(LatentModel::from_rates(0.5, 0.4, 0.35), 4000, 21);
    const std::int64_t sizes[] = {100, 400, 1600};
    auto rows = subset_cv(outcomes, sizes, 30, 77);
    REQUIRE(rows.size() == 3);
    for (const auto& row : rows) {
        REQUIRE(row.metrics.count("ri"));
        REQUIRE(row.metrics.count("c_over_a"));
        REQUIRE(row.metrics.count("f_score"));
        for (const auto& [name, cell] : row.metrics) {
            CHECK(std::isfinite(cell.mean));
            CHECK(cell.sd >= 0.0);
            if (!cell.unstable) CHECK(cell.cv >= 0.0);
        }
    }
    // more data -> visibly tighter RI spread at the extremes
    CHECK(rows.front().metrics.at("ri").sd > rows.back().metrics.at("ri").sd);
    // deterministic
    auto rows2 = subset_cv(outcomes, sizes, 30, 77);
    CHECK(rows2[0].metrics.at("ri").mean == rows[0].metrics.at("ri").mean);
    // contract checks
    const std::int64_t too_big[] = {5000};
    CHECK_THROWS_AS(subset_cv(outcomes, too_big, 30, 1), std::invalid_argument);
    const std::int64_t fine[] = {100};
    CHECK_THROWS_AS(subset_cv(outcomes, fine, 1, 1), std::invalid_argument);
}
