#include "linkpred/eval.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string_view>
#include <unordered_map>

#include "linkpred/error.hpp"

namespace linkpred::eval {

namespace {

constexpr std::string_view kSubmissionHeader = "id,label";
constexpr std::size_t kListingCap = 10;

std::string listing(std::vector<std::string> ids) {
    std::sort(ids.begin(), ids.end());
    std::string out;
    for (std::size_t i = 0; i < ids.size() && i < kListingCap; ++i) {
        if (i) out += ", ";
        out += ids[i];
    }
    if (ids.size() > kListingCap) out += ", ... (" + std::to_string(ids.size()) + " total)";
    return out.empty() ? "none" : out;
}

}  // namespace

void ConfusionMatrix::add(dataset::Label predicted, dataset::Label gold) noexcept {
    const bool p = predicted == dataset::Label::edge;
    const bool g = gold == dataset::Label::edge;
    if (p && g) ++tp;
    else if (p) ++fp;
    else if (g) ++fn;
    else ++tn;
}

ConfusionMatrix confusion(std::span<const Prediction> predictions, std::span<const dataset::PairRecord> gold) {
    std::unordered_map<std::string_view, dataset::Label> gold_by_id;
    gold_by_id.reserve(gold.size());
    for (const auto& g : gold) {
        if (!g.label) throw Error(ErrorKind::validation, "gold pair " + g.pair_id + " is unlabeled");
        if (!gold_by_id.emplace(g.pair_id, *g.label).second) {
            throw Error(ErrorKind::validation, "gold pair id " + g.pair_id + " appears twice");
        }
    }

    ConfusionMatrix m;
    std::vector<std::string> only_pred;
    std::unordered_map<std::string_view, bool> seen;
    seen.reserve(predictions.size());
    for (const auto& p : predictions) {
        if (!seen.emplace(p.pair_id, true).second) {
            throw Error(ErrorKind::validation, "prediction pair id " + p.pair_id + " appears twice");
        }
        auto it = gold_by_id.find(p.pair_id);
        if (it == gold_by_id.end()) {
            only_pred.push_back(p.pair_id);
            continue;
        }
        m.add(p.label, it->second);
    }
    if (!only_pred.empty() || m.total() != gold.size()) {
        std::vector<std::string> only_gold;
        for (const auto& g : gold) {
            if (!seen.count(g.pair_id)) only_gold.push_back(g.pair_id);
        }
        throw Error(ErrorKind::validation, "prediction and gold pair ids differ; only in predictions: [" +
                                               listing(std::move(only_pred)) + "]; only in gold: [" +
                                               listing(std::move(only_gold)) + "]");
    }
    return m;
}

ClassScores class_scores(std::uint64_t true_pos, std::uint64_t false_pos, std::uint64_t false_neg) noexcept {
    ClassScores s;
    const auto tp = static_cast<double>(true_pos);
    if (true_pos + false_pos != 0) s.precision = tp / static_cast<double>(true_pos + false_pos);
    if (true_pos + false_neg != 0) s.recall = tp / static_cast<double>(true_pos + false_neg);
    if (s.precision + s.recall > 0.0) s.f1 = 2.0 * s.precision * s.recall / (s.precision + s.recall);
    return s;
}

double macro_f1(const ConfusionMatrix& m) noexcept {
    return evaluate(m).macro_f1;
}

EvalReport evaluate(const ConfusionMatrix& m) noexcept {
    EvalReport r;
    r.matrix = m;
    r.class_1 = class_scores(m.tp, m.fp, m.fn);
    // Class 0 as the positive class: its true positives are the true negatives.
    r.class_0 = class_scores(m.tn, m.fn, m.fp);
    r.macro_f1 = (r.class_0.f1 + r.class_1.f1) / 2.0;
    return r;
}

void emit_submission(std::span<const Prediction> predictions, std::ostream& out) {
    out << kSubmissionHeader << '\n';
    for (const auto& p : predictions) {
        out << p.pair_id << ',' << dataset::to_int(p.label) << '\n';
    }
    out.flush();
    if (!out) throw Error(ErrorKind::io, "failed writing submission");
}

std::vector<SubmissionRow> parse_submission(std::istream& in) {
    const std::string content{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (in.bad()) throw Error(ErrorKind::io, "read failure");
    if (content.empty() || content.back() != '\n') throw Error(ErrorKind::parse, "submission must end with LF");

    std::vector<SubmissionRow> rows;
    std::size_t lineno = 0;
    std::size_t pos = 0;
    while (pos < content.size()) {
        const std::size_t nl = content.find('\n', pos);
        const std::string_view line(content.data() + pos, nl - pos);
        pos = nl + 1;
        ++lineno;
        if (line.find('\r') != std::string_view::npos) throw Error(ErrorKind::parse, "CR in submission", lineno);
        if (lineno == 1) {
            if (line != kSubmissionHeader) throw Error(ErrorKind::parse, "header must be 'id,label'", 1);
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string_view::npos || comma == 0 || line.find(',', comma + 1) != std::string_view::npos) {
            throw Error(ErrorKind::parse, "expected 'id,label'", lineno);
        }
        const std::string_view label = line.substr(comma + 1);
        SubmissionRow row;
        row.pair_id.assign(line.substr(0, comma));
        if (label == "0") row.label = dataset::Label::no_edge;
        else if (label == "1") row.label = dataset::Label::edge;
        else throw Error(ErrorKind::parse, "label must be 0 or 1", lineno);
        rows.push_back(std::move(row));
    }
    return rows;
}

}  // namespace linkpred::eval
