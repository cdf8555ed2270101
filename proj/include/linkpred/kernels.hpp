#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "linkpred/baseline.hpp"
#include "linkpred/dataset.hpp"
#include "linkpred/eval.hpp"
#include "linkpred/pairs.hpp"
#include "linkpred/textclean.hpp"

/// Data-parallel batch kernels (OpenMP). Each has a serial twin in
/// `kernels::reference` with identical results; tests compare the two and
/// bench/ times them. Output order always follows input order.
namespace linkpred::kernels {

/// 0 selects the OpenMP default.
void set_threads(int threads);
int max_threads();

struct CleanedNodes {
    std::vector<dataset::NodeRecord> nodes;
    textclean::CleanReport report;
};

CleanedNodes clean_nodes(std::span<const dataset::NodeRecord> nodes, const textclean::CleanConfig& config);

std::vector<pairs::SentencePair> build_pairs(std::span<const dataset::JoinedPair> joined,
                                             const pairs::PairConfig& config);

std::vector<baseline::FeatureVector> featurize_all(std::span<const pairs::SentencePair> pairs, unsigned hash_bits);

/// residual[i] = sigmoid(w·x[rows[i]]) - y[rows[i]]
void batch_residuals(std::span<const double> weights, std::span<const baseline::FeatureVector> xs,
                     std::span<const double> labels, std::span<const std::size_t> rows,
                     std::span<double> residuals);

/// Dense AdamW moment and weight update. `grad` is dense; `step` is the
/// already-incremented counter.
void adamw_apply(std::span<double> weights, std::span<double> m, std::span<double> v, std::span<const double> grad,
                 std::size_t bias_index, std::uint64_t step, const baseline::TrainConfig& config);

std::vector<Prediction> predict_all(const baseline::BaselineModel& model,
                                    std::span<const pairs::SentencePair> pairs);

eval::ConfusionMatrix count_confusion(std::span<const dataset::Label> predicted,
                                      std::span<const dataset::Label> gold);

namespace reference {

CleanedNodes clean_nodes(std::span<const dataset::NodeRecord> nodes, const textclean::CleanConfig& config);
std::vector<pairs::SentencePair> build_pairs(std::span<const dataset::JoinedPair> joined,
                                             const pairs::PairConfig& config);
std::vector<baseline::FeatureVector> featurize_all(std::span<const pairs::SentencePair> pairs, unsigned hash_bits);
void batch_residuals(std::span<const double> weights, std::span<const baseline::FeatureVector> xs,
                     std::span<const double> labels, std::span<const std::size_t> rows,
                     std::span<double> residuals);
void adamw_apply(std::span<double> weights, std::span<double> m, std::span<double> v, std::span<const double> grad,
                 std::size_t bias_index, std::uint64_t step, const baseline::TrainConfig& config);
std::vector<Prediction> predict_all(const baseline::BaselineModel& model,
                                    std::span<const pairs::SentencePair> pairs);
eval::ConfusionMatrix count_confusion(std::span<const dataset::Label> predicted,
                                      std::span<const dataset::Label> gold);

}  // namespace reference

}  // namespace linkpred::kernels
