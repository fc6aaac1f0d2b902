#include "ri/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <map>
#include <tuple>
#include <ostream>

#include <json.hpp>

namespace ri::ingest {

namespace {

using nlohmann::json;

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

std::string make_message(const Diagnostic& d) {
    if (d.line > 0)
        return "LINE " + std::to_string(d.line) + ": " + d.code + ": " + d.message;
    return d.code + ": " + d.message;
}

}  // namespace

const char* label_name(GradeLabel label) {
    switch (label) {
        case GradeLabel::Correct: return "correct";
        case GradeLabel::Incorrect: return "incorrect";
        case GradeLabel::Refused: return "refused";
    }
    return "?";
}

std::optional<GradeLabel> parse_label(std::string text) {
    const std::string t = lower(std::move(text));
    if (t == "correct") return GradeLabel::Correct;
    if (t == "incorrect") return GradeLabel::Incorrect;
    if (t == "refused" || t == "not_attempted") return GradeLabel::Refused;
    return std::nullopt;
}

ValidationError::ValidationError(Diagnostic d)
    : std::runtime_error(make_message(d)), diag_(std::move(d)) {}

ParseResult parse_records(std::istream& input) {
    ParseResult result;
    // (question, model, setting, pass) -> first line seen
    std::map<std::tuple<std::string, std::string, std::string, int>, long> seen;
    std::string line;
    long lineno = 0;
    while (std::getline(input, line)) {
        ++lineno;
        if (line.empty()) continue;
        json obj = json::parse(line, nullptr, false);
        if (obj.is_discarded() || !obj.is_object()) {
            result.errors.push_back({lineno, "malformed-line", "not a JSON object"});
            continue;
        }
        QuestionRecord rec;
        bool ok = true;
        auto need_string = [&](const char* field, std::string& dst) {
            if (!obj.contains(field) || !obj[field].is_string()) {
                result.errors.push_back(
                    {lineno, "malformed-line",
                     std::string("missing or non-string field '") + field + "'"});
                ok = false;
                return;
            }
            dst = obj[field].get<std::string>();
        };
        need_string("question_id", rec.question_id);
        need_string("model_id", rec.model_id);
        need_string("setting_id", rec.setting_id);
        if (!obj.contains("pass") || !obj["pass"].is_number_integer()) {
            result.errors.push_back(
                {lineno, "malformed-line", "missing or non-integer field 'pass'"});
            ok = false;
        } else {
            rec.pass = obj["pass"].get<int>();
            if (rec.pass != 1 && rec.pass != 2) {
                result.errors.push_back(
                    {lineno, "malformed-line", "field 'pass' must be 1 or 2"});
                ok = false;
            }
        }
        if (!obj.contains("label") || !obj["label"].is_string()) {
            result.errors.push_back(
                {lineno, "malformed-line", "missing or non-string field 'label'"});
            ok = false;
        } else if (auto label = parse_label(obj["label"].get<std::string>())) {
            rec.label = *label;
        } else {
            result.errors.push_back(
                {lineno, "unknown-label",
                 "label '" + obj["label"].get<std::string>() + "' is not one of "
                                                              "correct/incorrect/refused/not_attempted"});
            ok = false;
        }
        if (!ok) continue;

        const auto key = std::make_tuple(rec.question_id, rec.model_id,
                                         rec.setting_id, rec.pass);
        auto [it, inserted] = seen.emplace(key, lineno);
        if (!inserted) {
            result.errors.push_back(
                {lineno, "duplicate-key",
                 "duplicate (question_id, model_id, setting_id, pass); first seen at line " +
                     std::to_string(it->second)});
            continue;
        }
        result.records.push_back(std::move(rec));
    }
    return result;
}

std::vector<QuestionRecord> parse_records_strict(std::istream& input) {
    ParseResult result = parse_records(input);
    if (!result.errors.empty()) throw ValidationError(result.errors.front());
    return std::move(result.records);
}

void write_records(std::ostream& out, std::span<const QuestionRecord> records) {
    for (const auto& rec : records) {
        nlohmann::ordered_json obj;
        obj["question_id"] = rec.question_id;
        obj["model_id"] = rec.model_id;
        obj["setting_id"] = rec.setting_id;
        obj["pass"] = rec.pass;
        obj["label"] = label_name(rec.label);
        out << obj.dump() << '\n';
    }
}

std::vector<JoinedOutcome> join_passes(std::span<const QuestionRecord> records,
                                       const std::string& model_id,
                                       const std::string& setting_id,
                                       bool coerce_pass2_refusal,
                                       std::vector<Diagnostic>* diagnostics) {
    auto report = [&](Diagnostic d) {
        if (diagnostics)
            diagnostics->push_back(std::move(d));
        else
            throw ValidationError(std::move(d));
    };

    std::map<std::string, std::optional<GradeLabel>> pass1;
    std::map<std::string, GradeLabel> pass2;
    for (const auto& rec : records) {
        if (rec.model_id != model_id || rec.setting_id != setting_id) continue;
        if (rec.pass == 1)
            pass1[rec.question_id] = rec.label;
        else
            pass2[rec.question_id] = rec.label;
    }

    std::vector<JoinedOutcome> outcomes;
    outcomes.reserve(pass1.size());
    for (const auto& [qid, label1] : pass1) {
        JoinedOutcome out;
        out.question_id = qid;
        out.pass1 = *label1;
        const auto it2 = pass2.find(qid);
        if (out.pass1 == GradeLabel::Refused) {
            if (it2 == pass2.end()) {
                report({0, "missing-pass-2",
                        "question '" + qid + "' refused in pass 1 has no pass-2 record"});
                continue;
            }
            GradeLabel label2 = it2->second;
            if (label2 == GradeLabel::Refused) {
                if (!coerce_pass2_refusal) {
                    report({0, "refused-in-pass-2",
                            "question '" + qid + "' has a refused label in pass 2"});
                    continue;
                }
                if (diagnostics)
                    diagnostics->push_back(
                        {0, "coerced-pass-2-refusal",
                         "question '" + qid + "' pass-2 refusal graded incorrect"});
                label2 = GradeLabel::Incorrect;
            }
            out.pass2 = label2;
            out.w_hat = (label2 == GradeLabel::Incorrect) ? 1 : 0;
        } else {
            if (it2 != pass2.end()) {
                report({0, "orphan-pass-2",
                        "question '" + qid + "' has a pass-2 record but was not refused"});
                continue;
            }
            out.w_hat = (out.pass1 == GradeLabel::Incorrect) ? 1 : 0;
        }
        outcomes.push_back(std::move(out));
    }
    for (const auto& [qid, label] : pass2) {
        if (!pass1.count(qid))
            report({0, "missing-pass-1",
                    "question '" + qid + "' has a pass-2 record but no pass-1 record"});
    }
    return outcomes;
}

std::optional<double> pairwise_accuracy_agreement(
    const std::vector<JoinedOutcome>& a, const std::vector<JoinedOutcome>& b) {
    std::map<std::string, GradeLabel> answered_b;
    for (const auto& out : b)
        if (out.pass1 != GradeLabel::Refused) answered_b[out.question_id] = out.pass1;

    long shared = 0, agree = 0;
    for (const auto& out : a) {
        if (out.pass1 == GradeLabel::Refused) continue;
        const auto it = answered_b.find(out.question_id);
        if (it == answered_b.end()) continue;
        ++shared;
        if (it->second == out.pass1) ++agree;
    }
    if (shared == 0) return std::nullopt;
    return static_cast<double>(agree) / static_cast<double>(shared);
}

}  // namespace ri::ingest
