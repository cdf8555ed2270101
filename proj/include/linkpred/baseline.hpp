#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "linkpred/pairs.hpp"
#include "linkpred/prediction.hpp"

/// Native pair classifier: hashed n-gram features, a logistic linear head,
/// and AdamW.
namespace linkpred::baseline {

struct TrainConfig {
    std::size_t batch_size = 128;
    std::size_t max_tokens = 128;
    /// 0.01 suits the linear head. Transformer fine-tuning uses 2e-5.
    double learning_rate = 0.01;
    double adamw_eps = 1e-8;
    double adamw_beta1 = 0.9;
    double adamw_beta2 = 0.999;
    double weight_decay = 0.01;
    std::size_t epochs = 3;
    std::uint64_t seed = 42;
    unsigned hash_bits = 18;
    double decision_threshold = 0.5;

    /// Throws Error(validation) naming the first field out of range.
    void validate() const;

    bool operator==(const TrainConfig&) const = default;
};

struct Feature {
    std::uint32_t index = 0;
    double value = 0.0;

    bool operator==(const Feature&) const = default;
};

/// Sparse vector sorted by index with no repeats. The hashed block occupies
/// [0, 2^hash_bits); the dense block follows it.
struct FeatureVector {
    std::vector<Feature> entries;

    bool operator==(const FeatureVector&) const = default;
};

/// Offsets within the dense block.
enum DenseSlot : std::uint32_t {
    dense_overlap = 0,   // |set(P) ∩ set(H)|
    dense_jaccard = 1,   // |∩| / |∪|, 0 when both sides are empty
    dense_length = 2,    // |len(P) - len(H)| / max(len(P), len(H)), 0 when both empty
    dense_bias = 3,      // always 1
};
inline constexpr std::uint32_t dense_block_size = 4;

constexpr std::size_t feature_dimension(unsigned hash_bits) noexcept {
    return (std::size_t{1} << hash_bits) + dense_block_size;
}

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Hashed unigrams and bigrams of the premise (namespace "P"), of the
/// hypothesis ("H"), and of what both sides share ("S"), plus the dense block.
/// Feature keys are `P:tok`, `P:tok1 tok2`, etc.; the index is the FNV-1a
/// hash of the key masked to hash_bits. Colliding keys add up.
FeatureVector featurize(const pairs::SentencePair& pair, unsigned hash_bits);

/// Logistic function, written to avoid overflow for large |z|.
double sigmoid(double z) noexcept;

double dot(std::span<const double> weights, const FeatureVector& x) noexcept;

/// Mean binary cross-entropy over the batch. `labels` are 0.0 or 1.0.
double logistic_loss(std::span<const double> weights, std::span<const FeatureVector> xs,
                     std::span<const double> labels);

/// Mean over the batch of (sigmoid(w·x) - y)·x, written densely into `grad`
/// (which is overwritten).
void logistic_gradient(std::span<const double> weights, std::span<const FeatureVector> xs,
                       std::span<const double> labels, std::span<double> grad);

class BaselineModel {
public:
    BaselineModel() = default;

    /// All-zero weights and optimizer state.
    explicit BaselineModel(const TrainConfig& config);

    /// Zero model over an explicit dimension; the last coordinate is the bias.
    BaselineModel(const TrainConfig& config, std::size_t dimension);

    const TrainConfig& config() const noexcept { return config_; }
    std::size_t dimension() const noexcept { return weights_.size(); }
    std::size_t bias_index() const noexcept { return weights_.size() - 1; }

    std::span<const double> weights() const noexcept { return weights_; }
    std::span<double> weights() noexcept { return weights_; }
    std::span<const double> first_moment() const noexcept { return m_; }
    std::span<const double> second_moment() const noexcept { return v_; }
    std::uint64_t step() const noexcept { return step_; }

    double probability(const FeatureVector& x) const noexcept;

private:
    friend void adamw_step(BaselineModel&, std::span<const Feature>, const TrainConfig&);
    friend BaselineModel load_model(std::istream&);

    TrainConfig config_;
    std::vector<double> weights_;
    std::vector<double> m_;
    std::vector<double> v_;
    std::vector<double> scratch_;
    std::uint64_t step_ = 0;
};

/// One AdamW update with the bias-corrected step size folded into the
/// learning rate:
///   m <- b1 m + (1-b1) g          v <- b2 v + (1-b2) g^2
///   w <- w - lr * sqrt(1-b2^t)/(1-b1^t) * m / (sqrt(v) + eps)
///   w <- w - lr * weight_decay * w          (every coordinate except the bias)
/// Moments and weights are updated densely. Repeated gradient indices add.
/// Throws Error(numeric) on a non-finite gradient entry and Error(validation)
/// on an out-of-range index, before anything is modified.
void adamw_step(BaselineModel& model, std::span<const Feature> gradient, const TrainConfig& config);

struct TrainLog {
    /// Full-data mean loss before training, then after each epoch.
    std::vector<double> epoch_losses;
    /// Mean loss of each mini-batch measured before its update.
    std::vector<double> batch_losses;
};

/// Mini-batch AdamW on the mean logistic loss, reshuffling every epoch with
/// a generator seeded from config.seed. Deterministic for a fixed seed.
/// Throws Error(validation) on an empty or partly unlabeled example set.
BaselineModel train(std::span<const pairs::SentencePair> examples, const TrainConfig& config,
                    TrainLog* log = nullptr);

Prediction predict(const BaselineModel& model, const pairs::SentencePair& pair);

/// Versioned text artifact with the config snapshot, the step counter and the
/// nonzero weights as exact hex floats. Optimizer moments are not stored.
void save_model(std::ostream& out, const BaselineModel& model);
BaselineModel load_model(std::istream& in);

/// Train/predict interface over sentence pairs.
class PairClassifier {
public:
    virtual ~PairClassifier() = default;
    virtual void fit(std::span<const pairs::SentencePair> examples) = 0;
    virtual std::vector<Prediction> predict(std::span<const pairs::SentencePair> pairs) const = 0;
};

class BaselineClassifier final : public PairClassifier {
public:
    explicit BaselineClassifier(TrainConfig config) : config_(config), model_(config) {}

    void fit(std::span<const pairs::SentencePair> examples) override;
    std::vector<Prediction> predict(std::span<const pairs::SentencePair> pairs) const override;

    const BaselineModel& model() const noexcept { return model_; }

private:
    TrainConfig config_;
    BaselineModel model_;
};

/// Deterministic shuffle independent of the standard library's distribution
/// implementations.
void seeded_shuffle(std::span<std::size_t> items, std::uint64_t& state);

}  // namespace linkpred::baseline
