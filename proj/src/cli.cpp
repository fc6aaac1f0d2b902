#include "ri/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "ri/baselines.hpp"
#include "ri/copulas.hpp"
#include "ri/curves.hpp"
#include "ri/estimator.hpp"
#include "ri/ingest.hpp"
#include "ri/ranking.hpp"
#include "ri/simulate.hpp"

namespace ri::cli {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

// Failures caused by input data rather than flags.
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class LogLevel { Error = 0, Warn = 1, Info = 2, Debug = 3 };

LogLevel log_level_from_env() {
    const char* env = std::getenv("RI_LOG");
    if (!env) return LogLevel::Warn;
    const std::string v = env;
    if (v == "error") return LogLevel::Error;
    if (v == "info") return LogLevel::Info;
    if (v == "debug") return LogLevel::Debug;
    return LogLevel::Warn;
}

struct Logger {
    std::ostream& err;
    LogLevel level = log_level_from_env();

    void info(const std::string& msg) const {
        if (level >= LogLevel::Info) err << "info: " << msg << '\n';
    }
};

// Shortest round-trip decimal representation, for byte-stable CSV output.
std::string fmt_num(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::vector<double> parse_double_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stod(item));
    return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& text) {
    std::vector<std::int64_t> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(std::stoll(item));
    return out;
}

struct RecordSource {
    std::string path;  // "-" means standard input
    bool use_stdin = false;

    void add_flags(CLI::App* cmd) {
        cmd->add_option("--input", path, "records file (JSONL); '-' for stdin");
        cmd->add_flag("--stdin", use_stdin, "read records from standard input");
    }

    ingest::ParseResult load_raw(std::istream& in) const {
        if (use_stdin || path == "-") return ingest::parse_records(in);
        if (path.empty())
            throw DataError("an input source is required (--input or --stdin)");
        std::ifstream file(path);
        if (!file) throw DataError("cannot open input file '" + path + "'");
        return ingest::parse_records(file);
    }

    std::vector<ingest::QuestionRecord> load(std::istream& in) const {
        ingest::ParseResult result = load_raw(in);
        if (!result.errors.empty())
            throw ingest::ValidationError(result.errors.front());
        return std::move(result.records);
    }
};

// Resolve a possibly omitted model/setting filter against the distinct
// values present in the records.
std::string resolve_filter(const std::vector<ingest::QuestionRecord>& records,
                           std::string requested, bool model_field,
                           const char* flag) {
    if (!requested.empty()) return requested;
    std::vector<std::string> distinct;
    for (const auto& rec : records) {
        const std::string& v = model_field ? rec.model_id : rec.setting_id;
        if (std::find(distinct.begin(), distinct.end(), v) == distinct.end())
            distinct.push_back(v);
    }
    if (distinct.size() == 1) return distinct.front();
    throw DataError(std::string(flag) + " is required: input contains " +
                    std::to_string(distinct.size()) + " distinct values");
}

void emit(std::ostream& out, const std::string& format, const ordered_json& obj) {
    if (format == "table") {
        for (const auto& [key, value] : obj.items())
            out << key << ": " << value.dump() << '\n';
    } else {
        out << obj.dump() << '\n';
    }
}

ordered_json summary_json(const estimator::TwoPassSummary& s,
                          const estimator::RiEstimate& est) {
    ordered_json obj;
    obj["rho"] = est.rho;
    obj["ri"] = est.ri;
    if (est.ci) {
        obj["ci"] = {{"lo", est.ci->lo}, {"hi", est.ci->hi}, {"level", est.ci->level}};
    } else {
        obj["ci"] = nullptr;
    }
    obj["n"] = s.n;
    obj["c1"] = s.c1;
    obj["r"] = s.r;
    obj["c2"] = s.c2;
    obj["degenerate"] = est.degenerate;
    return obj;
}

ordered_json fit_json(const copulas::CopulaFit& fit) {
    ordered_json obj;
    obj["family"] = copulas::family_name(fit.family);
    obj["theta"] = fit.theta;
    obj["loglik"] = fit.loglik;
    obj["aic"] = fit.aic;
    obj["bic"] = fit.bic;
    obj["at_boundary"] = fit.at_boundary;
    obj["failed"] = fit.failed;
    if (fit.failed) obj["error"] = fit.error;
    return obj;
}

ordered_json baselines_json(const baselines::BaselineScores& s) {
    ordered_json obj;
    obj["correct"] = s.correct;
    obj["refusal"] = s.refusal;
    if (s.c_over_a_defined)
        obj["c_over_a"] = s.c_over_a;
    else
        obj["c_over_a"] = nullptr;
    obj["f_score"] = s.f_score;
    obj["weighted"] = s.weighted;
    obj["penalty_p"] = s.penalty_p;
    return obj;
}

ranking::ScoreMatrix matrix_from_json(const json& obj, const json& grid,
                                      const std::string& what) {
    ranking::ScoreMatrix m;
    if (!obj.contains("models") || !obj.contains("settings"))
        throw DataError("rank input must contain 'models' and 'settings'");
    m.models = obj["models"].get<std::vector<std::string>>();
    m.settings = obj["settings"].get<std::vector<std::string>>();
    if (!grid.is_array())
        throw DataError("rank input: '" + what + "' must be a matrix");
    m.values = grid.get<std::vector<std::vector<double>>>();
    try {
        m.validate();
    } catch (const std::exception& e) {
        throw DataError("rank input '" + what + "': " + e.what());
    }
    return m;
}

// ---- subcommand implementations ----

struct Common {
    std::istream& in;
    std::ostream& out;
    std::ostream& err;
    Logger log;
};

int cmd_ri(Common& io, const RecordSource& src, std::string model,
           std::string setting, int bootstrap, double level, std::uint64_t seed,
           bool seed_given, const std::string& format) {
    if (bootstrap > 0 && !seed_given)
        throw DataError("--seed is required when bootstrapping");
    auto records = src.load(io.in);
    model = resolve_filter(records, std::move(model), true, "--model");
    setting = resolve_filter(records, std::move(setting), false, "--setting");
    const auto outcomes = ingest::join_passes(records, model, setting);
    if (outcomes.empty()) throw DataError("no records match the filters");
    io.log.info("joined " + std::to_string(outcomes.size()) + " questions");

    const auto summary = estimator::summarize_two_pass(outcomes);
    auto est = estimator::estimate_ri(summary);
    if (bootstrap > 0)
        est.ci = estimator::bootstrap_ci(outcomes, bootstrap, level, seed);

    if (format == "csv") {
        io.out << "rho,ri,ci_lo,ci_hi,ci_level,n,c1,r,c2,degenerate\n"
               << fmt_num(est.rho) << ',' << fmt_num(est.ri) << ','
               << (est.ci ? fmt_num(est.ci->lo) : "") << ','
               << (est.ci ? fmt_num(est.ci->hi) : "") << ','
               << (est.ci ? fmt_num(est.ci->level) : "") << ',' << summary.n << ','
               << fmt_num(summary.c1) << ',' << fmt_num(summary.r) << ','
               << fmt_num(summary.c2) << ','
               << (est.degenerate ? "true" : "false") << '\n';
    } else {
        emit(io.out, format, summary_json(summary, est));
    }
    return kExitOk;
}

int cmd_baselines(Common& io, const RecordSource& src, std::string model,
                  std::string setting, double correct, double refusal,
                  bool have_rates, double penalty, const std::string& format) {
    double c = correct, r = refusal;
    if (!have_rates) {
        auto records = src.load(io.in);
        model = resolve_filter(records, std::move(model), true, "--model");
        setting = resolve_filter(records, std::move(setting), false, "--setting");
        const auto outcomes = ingest::join_passes(records, model, setting);
        if (outcomes.empty()) throw DataError("no records match the filters");
        const auto summary = estimator::summarize_two_pass(outcomes);
        c = summary.c1;
        r = summary.r;
    }
    emit(io.out, format, baselines_json(baselines::compute_baselines(c, r, penalty)));
    return kExitOk;
}

int cmd_auroc(Common& io, const std::string& path, bool use_stdin,
              const std::string& format) {
    std::ifstream file;
    std::istream* in = &io.in;
    if (!use_stdin && path != "-" && !path.empty()) {
        file.open(path);
        if (!file) throw DataError("cannot open input file '" + path + "'");
        in = &file;
    } else if (!use_stdin && path.empty()) {
        throw DataError("an input source is required (--input or --stdin)");
    }

    std::vector<std::pair<std::int64_t, std::int64_t>> counts;
    std::vector<int> labels;
    std::string line;
    long lineno = 0;
    while (std::getline(*in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object() || !obj.contains("samples") ||
            !obj.contains("refusals") || !obj.contains("correct"))
            throw DataError("LINE " + std::to_string(lineno) +
                            ": malformed-line: expected fields samples, refusals, "
                            "correct");
        counts.emplace_back(obj["samples"].get<std::int64_t>(),
                            obj["refusals"].get<std::int64_t>());
        labels.push_back(obj["correct"].get<int>() != 0 ? 1 : 0);
    }
    std::vector<double> scores;
    try {
        scores = baselines::p_answering(counts);
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("count-inconsistency: ") + e.what());
    }
    double value;
    try {
        value = baselines::auroc(scores, labels);
    } catch (const std::invalid_argument& e) {
        throw DataError(e.what());
    }
    ordered_json obj;
    obj["auroc"] = value;
    obj["n"] = scores.size();
    emit(io.out, format, obj);
    return kExitOk;
}

int cmd_fit_copulas(Common& io, const RecordSource& src, std::string model,
                    std::string setting, const std::string& counts_arg,
                    const std::string& format) {
    copulas::ContingencyCounts counts;
    if (!counts_arg.empty()) {
        const auto parts = parse_int_list(counts_arg);
        if (parts.size() != 4)
            throw DataError("--counts expects four integers n00,n01,n10,n11");
        counts = {parts[0], parts[1], parts[2], parts[3]};
    } else {
        auto records = src.load(io.in);
        model = resolve_filter(records, std::move(model), true, "--model");
        setting = resolve_filter(records, std::move(setting), false, "--setting");
        const auto outcomes = ingest::join_passes(records, model, setting);
        if (outcomes.empty()) throw DataError("no records match the filters");
        counts = estimator::counts_from_summary(
            estimator::summarize_two_pass(outcomes));
    }

    const auto fits = copulas::compare_copulas(counts);
    if (format == "csv") {
        io.out << "family,loglik,aic,bic,at_boundary,failed\n";
        for (const auto& fit : fits)
            io.out << copulas::family_name(fit.family) << ',' << fmt_num(fit.loglik)
                   << ',' << fmt_num(fit.aic) << ',' << fmt_num(fit.bic) << ','
                   << (fit.at_boundary ? "true" : "false") << ','
                   << (fit.failed ? "true" : "false") << '\n';
    } else {
        ordered_json arr = ordered_json::array();
        for (const auto& fit : fits) arr.push_back(fit_json(fit));
        io.out << arr.dump() << '\n';
    }
    return kExitOk;
}

int cmd_curves(Common& io, bool iso_ri, double rho, double mu,
               const std::string& metric_name, double value, double penalty,
               int grid_points, const std::string& format) {
    const auto grid = curves::uniform_grid(grid_points);
    std::vector<curves::CurvePoint> points;
    if (iso_ri) {
        points = curves::iso_ri_curve(rho, mu, grid);
    } else {
        curves::ScoreMetric metric;
        if (metric_name == "ca")
            metric = curves::ScoreMetric::COverA;
        else if (metric_name == "f")
            metric = curves::ScoreMetric::FScore;
        else if (metric_name == "weighted")
            metric = curves::ScoreMetric::Weighted;
        else
            throw DataError("unknown metric '" + metric_name +
                            "' (expected ca, f, or weighted)");
        points = curves::iso_score_curve(metric, value, penalty, grid);
    }

    if (format == "json") {
        ordered_json arr = ordered_json::array();
        for (const auto& pt : points)
            arr.push_back({{"r", pt.r}, {"a", pt.a}, {"feasible", pt.feasible}});
        io.out << arr.dump() << '\n';
    } else {
        for (const auto& pt : points)
            io.out << fmt_num(pt.r) << ',' << fmt_num(pt.a) << ','
                   << (pt.feasible ? "true" : "false") << '\n';
    }
    return kExitOk;
}

int cmd_rank(Common& io, const std::string& path, std::uint64_t seed, int draws,
             const std::string& format) {
    std::ifstream file(path);
    if (!file) throw DataError("cannot open input file '" + path + "'");
    json obj = json::parse(file, nullptr, false);
    if (obj.is_discarded() || !obj.is_object())
        throw DataError("rank input is not a JSON object");
    if (!obj.contains("correct") || !obj.contains("refusal") ||
        !obj.contains("metrics"))
        throw DataError("rank input must contain 'correct', 'refusal', 'metrics'");

    const auto correct = matrix_from_json(obj, obj["correct"], "correct");
    const auto refusal = matrix_from_json(obj, obj["refusal"], "refusal");
    std::map<std::string, ranking::ScoreMatrix> metrics;
    for (const auto& [name, grid] : obj["metrics"].items())
        metrics.emplace(name, matrix_from_json(obj, grid, name));
    if (metrics.empty()) throw DataError("rank input: 'metrics' is empty");

    ranking::StabilityReport report;
    try {
        report = ranking::stability_report(metrics, correct, refusal, seed, draws);
    } catch (const std::invalid_argument& e) {
        throw DataError(e.what());
    }

    if (format == "table") {
        io.out << "metric\tmode\tkendalls_w\twinner_entropy\n";
        for (const auto& row : report.rows)
            io.out << row.metric << '\t' << ranking::residual_mode_name(row.mode)
                   << '\t' << fmt_num(row.w) << '\t' << fmt_num(row.entropy) << '\n';
        io.out << "random\t-\t" << fmt_num(report.random_w_mean) << '\t'
               << fmt_num(report.random_entropy_mean) << '\n';
    } else {
        ordered_json rows = ordered_json::array();
        for (const auto& row : report.rows)
            rows.push_back({{"metric", row.metric},
                            {"mode", ranking::residual_mode_name(row.mode)},
                            {"kendalls_w", row.w},
                            {"winner_entropy", row.entropy}});
        ordered_json result;
        result["rows"] = rows;
        result["random_baseline"] = {{"seed", report.random_seed},
                                     {"draws", report.random_draws},
                                     {"w_mean", report.random_w_mean},
                                     {"w_sd", report.random_w_sd},
                                     {"entropy_mean", report.random_entropy_mean}};
        io.out << result.dump() << '\n';
    }
    return kExitOk;
}

int cmd_simulate(Common& io, double rho, double refusal, double error,
                 std::int64_t n, std::uint64_t seed, const std::string& model_id,
                 const std::string& setting_id) {
    const auto model = simulate::LatentModel::from_rates(rho, refusal, error);
    const auto records = simulate::sample_two_pass(model, n, seed, model_id,
                                                   setting_id);
    ingest::write_records(io.out, records);
    return kExitOk;
}

int cmd_sweep(Common& io, double rho, double error, const std::string& rates_arg,
              std::int64_t n, std::uint64_t seed, double penalty,
              const std::string& format) {
    const auto rates = parse_double_list(rates_arg);
    if (rates.empty()) throw DataError("--rates expects a comma-separated list");
    const auto settings = simulate::refusal_sweep(rho, error, rates, n, seed,
                                                  penalty);

    auto cv_of = [](const std::vector<double>& values) {
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(values.size());
        double var = 0.0;
        for (double v : values) var += (v - mean) * (v - mean);
        var /= static_cast<double>(values.size());
        return std::sqrt(var) / std::fabs(mean);
    };
    std::vector<double> ris, fs, ws;
    ordered_json rows = ordered_json::array();
    for (const auto& s : settings) {
        ris.push_back(s.estimate.ri);
        fs.push_back(s.scores.f_score);
        ws.push_back(s.scores.weighted);
        ordered_json row;
        row["target_refusal_rate"] = s.target_refusal_rate;
        row["n"] = s.summary.n;
        row["c1"] = s.summary.c1;
        row["r"] = s.summary.r;
        row["c2"] = s.summary.c2;
        row["rho"] = s.estimate.rho;
        row["ri"] = s.estimate.ri;
        row["f_score"] = s.scores.f_score;
        row["weighted"] = s.scores.weighted;
        row["c_over_a"] = s.scores.c_over_a;
        rows.push_back(std::move(row));
    }
    ordered_json result;
    result["settings"] = rows;
    result["cv"] = {{"ri", cv_of(ris)}, {"f_score", cv_of(fs)},
                    {"weighted", cv_of(ws)}};
    emit(io.out, format == "table" ? "json" : format, result);
    return kExitOk;
}

int cmd_subset_cv(Common& io, const RecordSource& src, std::string model,
                  std::string setting, const std::string& sizes_arg, int k,
                  std::uint64_t seed, double penalty, const std::string& format) {
    const auto sizes = parse_int_list(sizes_arg);
    if (sizes.empty()) throw DataError("--sizes expects a comma-separated list");
    auto records = src.load(io.in);
    model = resolve_filter(records, std::move(model), true, "--model");
    setting = resolve_filter(records, std::move(setting), false, "--setting");
    const auto outcomes = ingest::join_passes(records, model, setting);
    if (outcomes.empty()) throw DataError("no records match the filters");

    std::vector<simulate::SubsetCvRow> rows;
    try {
        rows = simulate::subset_cv(outcomes, sizes, k, seed, penalty);
    } catch (const std::invalid_argument& e) {
        throw DataError(e.what());
    }

    ordered_json arr = ordered_json::array();
    for (const auto& row : rows) {
        ordered_json entry;
        entry["size"] = row.size;
        for (const auto& [name, cell] : row.metrics)
            entry[name] = {{"mean", cell.mean}, {"sd", cell.sd}, {"cv", cell.cv},
                           {"unstable", cell.unstable}};
        arr.push_back(std::move(entry));
    }
    io.out << arr.dump() << '\n';
    (void)format;
    return kExitOk;
}

int cmd_agreement(Common& io, const RecordSource& src, std::string model,
                  const std::string& setting_a, const std::string& setting_b,
                  const std::string& format) {
    auto records = src.load(io.in);
    model = resolve_filter(records, std::move(model), true, "--model");
    const auto a = ingest::join_passes(records, model, setting_a);
    const auto b = ingest::join_passes(records, model, setting_b);
    const auto agreement = ingest::pairwise_accuracy_agreement(a, b);

    ordered_json obj;
    obj["defined"] = agreement.has_value();
    if (agreement)
        obj["agreement"] = *agreement;
    else
        obj["agreement"] = nullptr;
    emit(io.out, format, obj);
    return kExitOk;
}

int cmd_validate(Common& io, const RecordSource& src) {
    ingest::ParseResult parsed = src.load_raw(io.in);
    std::vector<ingest::Diagnostic> diags = parsed.errors;

    // Join checks per (model, setting) present in the input.
    std::vector<std::pair<std::string, std::string>> combos;
    for (const auto& rec : parsed.records) {
        const auto combo = std::make_pair(rec.model_id, rec.setting_id);
        if (std::find(combos.begin(), combos.end(), combo) == combos.end())
            combos.push_back(combo);
    }
    for (const auto& [model, setting] : combos)
        ingest::join_passes(parsed.records, model, setting, false, &diags);

    for (const auto& d : diags) {
        if (d.line > 0)
            io.err << "LINE " << d.line << ": " << d.code << ": " << d.message << '\n';
        else
            io.err << d.code << ": " << d.message << '\n';
    }
    ordered_json obj;
    obj["records"] = parsed.records.size();
    obj["combinations"] = combos.size();
    obj["errors"] = diags.size();
    obj["valid"] = diags.empty();
    io.out << obj.dump() << '\n';
    return diags.empty() ? kExitOk : kExitData;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in,
        std::ostream& out, std::ostream& err) {
    Common io{in, out, err, Logger{err}};

    CLI::App app{"Refusal Index toolkit: rank-calibrated refusal estimation "
                 "from two-pass evaluation logs"};
    app.require_subcommand(1);
    std::string format = "json";

    // ri
    auto* ri_cmd = app.add_subcommand("ri", "estimate the Refusal Index");
    RecordSource ri_src;
    ri_src.add_flags(ri_cmd);
    std::string ri_model, ri_setting;
    int ri_bootstrap = 1000;
    double ri_level = 0.95;
    std::uint64_t ri_seed = 0;
    ri_cmd->add_option("--model", ri_model, "model id filter");
    ri_cmd->add_option("--setting", ri_setting, "setting id filter");
    ri_cmd->add_option("--bootstrap", ri_bootstrap, "bootstrap resamples (0 = none)");
    ri_cmd->add_option("--level", ri_level, "confidence level");
    auto* ri_seed_opt = ri_cmd->add_option("--seed", ri_seed, "bootstrap RNG seed");
    ri_cmd->add_option("--format", format, "json | csv | table");

    // baselines
    auto* base_cmd = app.add_subcommand("baselines", "heuristic factuality metrics");
    RecordSource base_src;
    base_src.add_flags(base_cmd);
    std::string base_model, base_setting;
    double base_c = 0.0, base_r = 0.0, base_p = 0.2;
    base_cmd->add_option("--model", base_model, "model id filter");
    base_cmd->add_option("--setting", base_setting, "setting id filter");
    auto* base_c_opt = base_cmd->add_option("--correct", base_c, "correct answer rate");
    auto* base_r_opt = base_cmd->add_option("--refusal", base_r, "refusal rate");
    base_cmd->add_option("--penalty", base_p, "Weighted score penalty p");
    base_cmd->add_option("--format", format, "json | csv | table");

    // auroc
    auto* auroc_cmd =
        app.add_subcommand("auroc", "AUROC of answering frequency vs correctness");
    std::string auroc_path;
    bool auroc_stdin = false;
    auroc_cmd->add_option("--input", auroc_path,
                          "JSONL with fields samples, refusals, correct");
    auroc_cmd->add_flag("--stdin", auroc_stdin, "read from standard input");
    auroc_cmd->add_option("--format", format, "json | table");

    // fit-copulas
    auto* fit_cmd = app.add_subcommand("fit-copulas",
                                       "fit and compare all copula families");
    RecordSource fit_src;
    fit_src.add_flags(fit_cmd);
    std::string fit_model, fit_setting, fit_counts;
    fit_cmd->add_option("--model", fit_model, "model id filter");
    fit_cmd->add_option("--setting", fit_setting, "setting id filter");
    fit_cmd->add_option("--counts", fit_counts, "explicit table n00,n01,n10,n11");
    fit_cmd->add_option("--format", format, "json | csv");

    // curves
    auto* curves_cmd = app.add_subcommand("curves", "accuracy-refusal curve data");
    bool curves_iso_ri = false;
    double curves_rho = 0.0, curves_mu = 0.0, curves_value = 0.0, curves_p = 0.2;
    std::string curves_metric;
    int curves_grid = 101;
    curves_cmd->add_flag("--iso-ri", curves_iso_ri, "latent-Gaussian iso-RI curve");
    curves_cmd->add_option("--rho", curves_rho, "latent correlation");
    curves_cmd->add_option("--mu", curves_mu, "overall accuracy at r = 0");
    curves_cmd->add_option("--metric", curves_metric, "ca | f | weighted");
    curves_cmd->add_option("--value", curves_value, "iso-score level");
    curves_cmd->add_option("--penalty", curves_p, "Weighted score penalty p");
    curves_cmd->add_option("--grid", curves_grid, "grid points over [0,1]");
    std::string curves_format = "csv";
    curves_cmd->add_option("--format", curves_format, "csv | json");

    // rank
    auto* rank_cmd = app.add_subcommand("rank", "ranking stability report");
    std::string rank_path;
    std::uint64_t rank_seed = 0;
    int rank_draws = 1000;
    rank_cmd->add_option("--input", rank_path, "score matrices (JSON)")->required();
    rank_cmd->add_option("--seed", rank_seed, "random-baseline seed")->required();
    rank_cmd->add_option("--draws", rank_draws, "random-baseline draws");
    rank_cmd->add_option("--format", format, "json | table");

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate",
                                       "emit latent-Gaussian two-pass records");
    double sim_rho = 0.0, sim_refusal = 0.0, sim_error = 0.0;
    std::int64_t sim_n = 0;
    std::uint64_t sim_seed = 0;
    std::string sim_model = "sim", sim_setting = "s0";
    sim_cmd->add_option("--rho", sim_rho, "latent correlation")->required();
    sim_cmd->add_option("--refusal", sim_refusal, "refusal rate")->required();
    sim_cmd->add_option("--error", sim_error, "forced-answering error rate")
        ->required();
    sim_cmd->add_option("--n", sim_n, "question count")->required();
    sim_cmd->add_option("--seed", sim_seed, "RNG seed")->required();
    sim_cmd->add_option("--model", sim_model, "model id to stamp");
    sim_cmd->add_option("--setting", sim_setting, "setting id to stamp");

    // sweep
    auto* sweep_cmd = app.add_subcommand("sweep",
                                         "refusal-rate stability experiment");
    double sweep_rho = 0.0, sweep_error = 0.0, sweep_p = 0.2;
    std::string sweep_rates;
    std::int64_t sweep_n = 0;
    std::uint64_t sweep_seed = 0;
    sweep_cmd->add_option("--rho", sweep_rho, "latent correlation")->required();
    sweep_cmd->add_option("--error", sweep_error, "forced-answering error rate")
        ->required();
    sweep_cmd->add_option("--rates", sweep_rates, "refusal rates, comma separated")
        ->required();
    sweep_cmd->add_option("--n", sweep_n, "questions per setting")->required();
    sweep_cmd->add_option("--seed", sweep_seed, "RNG seed")->required();
    sweep_cmd->add_option("--penalty", sweep_p, "Weighted score penalty p");
    sweep_cmd->add_option("--format", format, "json | table");

    // subset-cv
    auto* subset_cmd = app.add_subcommand("subset-cv",
                                          "metric CV over random subsets");
    RecordSource subset_src;
    subset_src.add_flags(subset_cmd);
    std::string subset_model, subset_setting, subset_sizes;
    int subset_k = 50;
    std::uint64_t subset_seed = 0;
    double subset_p = 0.2;
    subset_cmd->add_option("--model", subset_model, "model id filter");
    subset_cmd->add_option("--setting", subset_setting, "setting id filter");
    subset_cmd->add_option("--sizes", subset_sizes, "subset sizes, comma separated")
        ->required();
    subset_cmd->add_option("--k", subset_k, "subsets per size");
    subset_cmd->add_option("--seed", subset_seed, "RNG seed")->required();
    subset_cmd->add_option("--penalty", subset_p, "Weighted score penalty p");
    subset_cmd->add_option("--format", format, "json");

    // agreement
    auto* agree_cmd = app.add_subcommand("agreement",
                                         "pairwise accuracy agreement");
    RecordSource agree_src;
    agree_src.add_flags(agree_cmd);
    std::string agree_model, agree_a, agree_b;
    agree_cmd->add_option("--model", agree_model, "model id filter");
    agree_cmd->add_option("--setting-a", agree_a, "first setting id")->required();
    agree_cmd->add_option("--setting-b", agree_b, "second setting id")->required();
    agree_cmd->add_option("--format", format, "json | table");

    // validate
    auto* validate_cmd = app.add_subcommand("validate",
                                            "check records without mutating them");
    RecordSource validate_src;
    validate_src.add_flags(validate_cmd);

    std::vector<std::string> argv(args.rbegin(), args.rend());
    try {
        app.parse(argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (ri_cmd->parsed())
            return cmd_ri(io, ri_src, ri_model, ri_setting, ri_bootstrap, ri_level,
                          ri_seed, ri_seed_opt->count() > 0, format);
        if (base_cmd->parsed()) {
            const bool have_rates = base_c_opt->count() > 0 || base_r_opt->count() > 0;
            if (have_rates && (base_c_opt->count() == 0 || base_r_opt->count() == 0))
                throw DataError("--correct and --refusal must be given together");
            return cmd_baselines(io, base_src, base_model, base_setting, base_c,
                                 base_r, have_rates, base_p, format);
        }
        if (auroc_cmd->parsed())
            return cmd_auroc(io, auroc_path, auroc_stdin, format);
        if (fit_cmd->parsed())
            return cmd_fit_copulas(io, fit_src, fit_model, fit_setting, fit_counts,
                                   format);
        if (curves_cmd->parsed()) {
            if (!curves_iso_ri && curves_metric.empty())
                throw DataError("choose either --iso-ri or --metric");
            return cmd_curves(io, curves_iso_ri, curves_rho, curves_mu,
                              curves_metric, curves_value, curves_p, curves_grid,
                              curves_format);
        }
        if (rank_cmd->parsed())
            return cmd_rank(io, rank_path, rank_seed, rank_draws, format);
        if (sim_cmd->parsed())
            return cmd_simulate(io, sim_rho, sim_refusal, sim_error, sim_n, sim_seed,
                                sim_model, sim_setting);
        if (sweep_cmd->parsed())
            return cmd_sweep(io, sweep_rho, sweep_error, sweep_rates, sweep_n,
                             sweep_seed, sweep_p, format);
        if (subset_cmd->parsed())
            return cmd_subset_cv(io, subset_src, subset_model, subset_setting,
                                 subset_sizes, subset_k, subset_seed, subset_p,
                                 format);
        if (agree_cmd->parsed())
            return cmd_agreement(io, agree_src, agree_model, agree_a, agree_b,
                                 format);
        if (validate_cmd->parsed()) return cmd_validate(io, validate_src);
    } catch (const ingest::ValidationError& e) {
        err << e.what() << '\n';
        return kExitData;
    } catch (const DataError& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::domain_error& e) {
        err << "error: " << e.what() << '\n';
        return kExitData;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}

}  // namespace ri::cli
