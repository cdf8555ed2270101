#include "linkpred/kernels.hpp"

#include <cmath>
#include <cstdint>

#include <omp.h>

#include "linkpred/error.hpp"

namespace linkpred::kernels {

namespace {

using Index = std::int64_t;

Index signed_size(std::size_t n) { return static_cast<Index>(n); }

void check_same_size(std::size_t a, std::size_t b, const char* what) {
    if (a != b) throw Error(ErrorKind::validation, std::string(what) + ": length mismatch");
}

struct AdamScalars {
    double beta1;
    double beta2;
    double step_size;
    double decay;
    double eps;
};

AdamScalars adam_scalars(std::uint64_t step, const baseline::TrainConfig& c) {
    const double t = static_cast<double>(step);
    const double bc1 = 1.0 - std::pow(c.adamw_beta1, t);
    const double bc2 = 1.0 - std::pow(c.adamw_beta2, t);
    return {c.adamw_beta1, c.adamw_beta2, c.learning_rate * std::sqrt(bc2) / bc1, c.learning_rate * c.weight_decay,
            c.adamw_eps};
}

inline void adam_one(double& w, double& m, double& v, double g, bool decay, const AdamScalars& s) {
    m = s.beta1 * m + (1.0 - s.beta1) * g;
    v = s.beta2 * v + (1.0 - s.beta2) * g * g;
    w -= s.step_size * m / (std::sqrt(v) + s.eps);
    if (decay) w -= s.decay * w;
}

}  // namespace

void set_threads(int threads) {
    if (threads > 0) omp_set_num_threads(threads);
    else omp_set_num_threads(omp_get_num_procs());
}

int max_threads() { return omp_get_max_threads(); }

CleanedNodes clean_nodes(std::span<const dataset::NodeRecord> nodes, const textclean::CleanConfig& config) {
    CleanedNodes out;
    out.nodes.resize(nodes.size());
    std::vector<textclean::CleanReport> reports(nodes.size());
    const Index n = signed_size(nodes.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (Index i = 0; i < n; ++i) {
        auto [text, report] = textclean::clean(std::string_view{nodes[i].text}, config);
        out.nodes[i].id = nodes[i].id;
        out.nodes[i].text = std::move(text);
        reports[i] = report;
    }
    for (const auto& r : reports) out.report += r;
    return out;
}

std::vector<pairs::SentencePair> build_pairs(std::span<const dataset::JoinedPair> joined,
                                             const pairs::PairConfig& config) {
    config.validate();
    std::vector<pairs::SentencePair> out(joined.size());
    const Index n = signed_size(joined.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (Index i = 0; i < n; ++i) {
        const auto& j = joined[i];
        out[i] = pairs::build_pair(*j.pair, j.premise->text, j.hypothesis->text, config);
    }
    return out;
}

std::vector<baseline::FeatureVector> featurize_all(std::span<const pairs::SentencePair> pairs, unsigned hash_bits) {
    std::vector<baseline::FeatureVector> out(pairs.size());
    const Index n = signed_size(pairs.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (Index i = 0; i < n; ++i) out[i] = baseline::featurize(pairs[i], hash_bits);
    return out;
}

void batch_residuals(std::span<const double> weights, std::span<const baseline::FeatureVector> xs,
                     std::span<const double> labels, std::span<const std::size_t> rows,
                     std::span<double> residuals) {
    check_same_size(rows.size(), residuals.size(), "batch_residuals");
    const Index n = signed_size(rows.size());
#pragma omp parallel for schedule(static)
    for (Index k = 0; k < n; ++k) {
        const std::size_t r = rows[k];
        residuals[k] = baseline::sigmoid(baseline::dot(weights, xs[r])) - labels[r];
    }
}

void adamw_apply(std::span<double> weights, std::span<double> m, std::span<double> v, std::span<const double> grad,
                 std::size_t bias_index, std::uint64_t step, const baseline::TrainConfig& config) {
    check_same_size(weights.size(), grad.size(), "adamw_apply");
    const AdamScalars s = adam_scalars(step, config);
    const Index n = signed_size(weights.size());
    const Index bias = signed_size(bias_index);
#pragma omp parallel for schedule(static)
    for (Index i = 0; i < n; ++i) adam_one(weights[i], m[i], v[i], grad[i], i != bias, s);
}

std::vector<Prediction> predict_all(const baseline::BaselineModel& model,
                                    std::span<const pairs::SentencePair> pairs) {
    std::vector<Prediction> out(pairs.size());
    const Index n = signed_size(pairs.size());
#pragma omp parallel for schedule(dynamic, 64)
    for (Index i = 0; i < n; ++i) out[i] = baseline::predict(model, pairs[i]);
    return out;
}

eval::ConfusionMatrix count_confusion(std::span<const dataset::Label> predicted,
                                      std::span<const dataset::Label> gold) {
    check_same_size(predicted.size(), gold.size(), "count_confusion");
    std::uint64_t tp = 0, fp = 0, tn = 0, fn = 0;
    const Index n = signed_size(predicted.size());
#pragma omp parallel for schedule(static) reduction(+ : tp, fp, tn, fn)
    for (Index i = 0; i < n; ++i) {
        const bool p = predicted[i] == dataset::Label::edge;
        const bool g = gold[i] == dataset::Label::edge;
        tp += p && g;
        fp += p && !g;
        fn += !p && g;
        tn += !p && !g;
    }
    return {tp, fp, tn, fn};
}

namespace reference {

CleanedNodes clean_nodes(std::span<const dataset::NodeRecord> nodes, const textclean::CleanConfig& config) {
    CleanedNodes out;
    out.nodes.reserve(nodes.size());
    for (const auto& node : nodes) {
        auto [text, report] = textclean::clean(std::string_view{node.text}, config);
        out.nodes.push_back({node.id, std::move(text)});
        out.report += report;
    }
    return out;
}

std::vector<pairs::SentencePair> build_pairs(std::span<const dataset::JoinedPair> joined,
                                             const pairs::PairConfig& config) {
    config.validate();
    std::vector<pairs::SentencePair> out;
    out.reserve(joined.size());
    for (const auto& j : joined) {
        out.push_back(pairs::build_pair(*j.pair, j.premise->text, j.hypothesis->text, config));
    }
    return out;
}

std::vector<baseline::FeatureVector> featurize_all(std::span<const pairs::SentencePair> pairs, unsigned hash_bits) {
    std::vector<baseline::FeatureVector> out;
    out.reserve(pairs.size());
    for (const auto& p : pairs) out.push_back(baseline::featurize(p, hash_bits));
    return out;
}

void batch_residuals(std::span<const double> weights, std::span<const baseline::FeatureVector> xs,
                     std::span<const double> labels, std::span<const std::size_t> rows,
                     std::span<double> residuals) {
    check_same_size(rows.size(), residuals.size(), "batch_residuals");
    for (std::size_t k = 0; k < rows.size(); ++k) {
        residuals[k] = baseline::sigmoid(baseline::dot(weights, xs[rows[k]])) - labels[rows[k]];
    }
}

void adamw_apply(std::span<double> weights, std::span<double> m, std::span<double> v, std::span<const double> grad,
                 std::size_t bias_index, std::uint64_t step, const baseline::TrainConfig& config) {
    check_same_size(weights.size(), grad.size(), "adamw_apply");
    const AdamScalars s = adam_scalars(step, config);
    for (std::size_t i = 0; i < weights.size(); ++i) adam_one(weights[i], m[i], v[i], grad[i], i != bias_index, s);
}

std::vector<Prediction> predict_all(const baseline::BaselineModel& model,
                                    std::span<const pairs::SentencePair> pairs) {
    std::vector<Prediction> out;
    out.reserve(pairs.size());
    for (const auto& p : pairs) out.push_back(baseline::predict(model, p));
    return out;
}

eval::ConfusionMatrix count_confusion(std::span<const dataset::Label> predicted,
                                      std::span<const dataset::Label> gold) {
    check_same_size(predicted.size(), gold.size(), "count_confusion");
    eval::ConfusionMatrix m;
    for (std::size_t i = 0; i < predicted.size(); ++i) m.add(predicted[i], gold[i]);
    return m;
}

}  // namespace reference

}  // namespace linkpred::kernels
