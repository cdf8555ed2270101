#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "linkpred/dataset.hpp"
#include "linkpred/prediction.hpp"

/// Binary macro-F1 and the competition submission format.
namespace linkpred::eval {

/// Class 1 (edge) is the positive class.
struct ConfusionMatrix {
    std::uint64_t tp = 0;
    std::uint64_t fp = 0;
    std::uint64_t tn = 0;
    std::uint64_t fn = 0;

    std::uint64_t total() const noexcept { return tp + fp + tn + fn; }
    ConfusionMatrix& operator+=(const ConfusionMatrix& o) noexcept {
        tp += o.tp; fp += o.fp; tn += o.tn; fn += o.fn;
        return *this;
    }
    bool operator==(const ConfusionMatrix&) const = default;

    void add(dataset::Label predicted, dataset::Label gold) noexcept;
};

struct ClassScores {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

struct EvalReport {
    ConfusionMatrix matrix;
    ClassScores class_0;
    ClassScores class_1;
    double macro_f1 = 0.0;
};

/// Matches predictions to gold by pair_id. Throws Error(validation) if the
/// id sets differ (listing up to ten ids from each side), if either side
/// repeats an id, or if a gold pair is unlabeled.
ConfusionMatrix confusion(std::span<const Prediction> predictions, std::span<const dataset::PairRecord> gold);

/// Precision/recall default to 0 on a zero denominator; F1 is 0 when P+R = 0.
ClassScores class_scores(std::uint64_t true_pos, std::uint64_t false_pos, std::uint64_t false_neg) noexcept;

/// Unweighted mean of the class-0 and class-1 F1, always over both classes.
double macro_f1(const ConfusionMatrix& matrix) noexcept;

EvalReport evaluate(const ConfusionMatrix& matrix) noexcept;

/// Header `id,label` then one row per prediction, LF endings.
/// Throws Error(io) if the sink fails.
void emit_submission(std::span<const Prediction> predictions, std::ostream& out);

struct SubmissionRow {
    std::string pair_id;
    dataset::Label label = dataset::Label::no_edge;
    bool operator==(const SubmissionRow&) const = default;
};

/// Strict reader: exact header, LF-only, labels 0/1, final LF required.
std::vector<SubmissionRow> parse_submission(std::istream& in);

}  // namespace linkpred::eval
