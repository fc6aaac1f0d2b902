#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

// Data model, parsing, validation, and joining of graded two-pass
// evaluation records. Input is line-delimited JSON, one record per line,
// with fields {question_id, model_id, setting_id, pass, label}.

namespace ri::ingest {

enum class GradeLabel { Correct, Incorrect, Refused };

const char* label_name(GradeLabel label);
// Case-insensitive; "not_attempted" is accepted as an alias of "refused".
std::optional<GradeLabel> parse_label(std::string text);

struct QuestionRecord {
    std::string question_id;
    std::string model_id;
    std::string setting_id;
    int pass = 1;  // 1 or 2
    GradeLabel label = GradeLabel::Correct;
};

struct JoinedOutcome {
    std::string question_id;
    GradeLabel pass1 = GradeLabel::Correct;
    std::optional<GradeLabel> pass2;
    int w_hat = 0;  // aggregated incorrectness indicator
};

struct Diagnostic {
    long line = 0;  // 0 when not tied to an input line
    std::string code;
    std::string message;
};

// Thrown by strict entry points; carries the first diagnostic.
class ValidationError : public std::runtime_error {
  public:
    explicit ValidationError(Diagnostic d);
    const Diagnostic& diagnostic() const { return diag_; }

  private:
    Diagnostic diag_;
};

struct ParseResult {
    std::vector<QuestionRecord> records;
    std::vector<Diagnostic> errors;
};

// Streaming single-pass parse; collects every malformed-line,
// unknown-label, and duplicate-key diagnostic instead of stopping at the
// first. Unknown extra fields are tolerated.
ParseResult parse_records(std::istream& input);

// Strict variant: throws ValidationError on the first diagnostic.
std::vector<QuestionRecord> parse_records_strict(std::istream& input);

// Canonical line-delimited serialization (the format simulate emits).
void write_records(std::ostream& out, std::span<const QuestionRecord> records);

// Joins pass-1 and pass-2 records for one (model, setting) into per-question
// outcomes with the aggregated incorrectness indicator. When diagnostics is
// null the first violation throws ValidationError; otherwise problems are
// collected and offending questions skipped. coerce_pass2_refusal downgrades
// a pass-2 Refused label to Incorrect with a diagnostic instead of an error.
// Output is sorted by question_id.
std::vector<JoinedOutcome> join_passes(std::span<const QuestionRecord> records,
                                       const std::string& model_id,
                                       const std::string& setting_id,
                                       bool coerce_pass2_refusal = false,
                                       std::vector<Diagnostic>* diagnostics = nullptr);

// Agreement of correctness labels between two settings over the questions
// answered (not refused) in pass 1 under both. nullopt when the answered
// intersection is empty.
std::optional<double> pairwise_accuracy_agreement(
    const std::vector<JoinedOutcome>& a, const std::vector<JoinedOutcome>& b);

}  // namespace ri::ingest
