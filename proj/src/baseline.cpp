#include "linkpred/baseline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <string>
#include <unordered_set>

#include "linkpred/error.hpp"
#include "linkpred/kernels.hpp"

namespace linkpred::baseline {

namespace {

constexpr std::string_view kMagic = "linkpred-baseline";
constexpr int kFormatVersion = 1;

double softplus(double x) noexcept {
    return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

void require(bool ok, const char* what) {
    if (!ok) throw Error(ErrorKind::validation, std::string("invalid training config: ") + what);
}

std::uint32_t hash_index(std::string_view ns, std::string_view a, std::string_view b, std::uint64_t mask,
                         std::string& key) {
    key.assign(ns);
    key.push_back(':');
    key.append(a);
    if (!b.empty()) {
        key.push_back(' ');
        key.append(b);
    }
    return static_cast<std::uint32_t>(fnv1a64(key) & mask);
}

std::string hex(double v) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::hex);
    return std::string(buf, end);
}

double parse_hex(std::string_view s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    bool neg = false;
    if (first != last && *first == '-') {
        neg = true;
        ++first;
    }
    auto [ptr, ec] = std::from_chars(first, last, v, std::chars_format::hex);
    if (ec != std::errc{} || ptr != last) throw Error(ErrorKind::parse, "bad hex float '" + std::string(s) + "'");
    return neg ? -v : v;
}

}  // namespace

void TrainConfig::validate() const {
    require(batch_size >= 1, "batch_size must be positive");
    require(max_tokens >= 1, "max_tokens must be positive");
    require(std::isfinite(learning_rate) && learning_rate > 0.0, "learning_rate must be positive");
    require(std::isfinite(adamw_eps) && adamw_eps > 0.0, "adamw_eps must be positive");
    require(adamw_beta1 > 0.0 && adamw_beta1 < 1.0, "adamw_beta1 must be in (0,1)");
    require(adamw_beta2 > 0.0 && adamw_beta2 < 1.0, "adamw_beta2 must be in (0,1)");
    require(std::isfinite(weight_decay) && weight_decay >= 0.0, "weight_decay must be non-negative");
    require(epochs >= 1, "epochs must be positive");
    require(hash_bits >= 1 && hash_bits <= 30, "hash_bits must be in [1,30]");
    require(decision_threshold > 0.0 && decision_threshold < 1.0, "decision_threshold must be in (0,1)");
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    return h;
}

FeatureVector featurize(const pairs::SentencePair& pair, unsigned hash_bits) {
    const std::uint64_t mask = (std::uint64_t{1} << hash_bits) - 1;
    const auto dense_base = static_cast<std::uint32_t>(std::uint64_t{1} << hash_bits);
    const auto& prem = pair.premise_tokens;
    const auto& hyp = pair.hypothesis_tokens;

    std::vector<Feature> raw;
    raw.reserve(2 * (prem.size() + hyp.size()) + dense_block_size);
    std::string key;

    auto side = [&](std::string_view ns, const pairs::TokenSeq& toks) {
        for (std::size_t i = 0; i < toks.size(); ++i) {
            raw.push_back({hash_index(ns, toks[i], {}, mask, key), 1.0});
            if (i + 1 < toks.size()) raw.push_back({hash_index(ns, toks[i], toks[i + 1], mask, key), 1.0});
        }
    };
    side("P", prem);
    side("H", hyp);

    const std::unordered_set<std::string_view> prem_set(prem.begin(), prem.end());
    const std::unordered_set<std::string_view> hyp_set(hyp.begin(), hyp.end());
    std::vector<std::string_view> shared;
    for (std::string_view t : hyp_set) {
        if (prem_set.count(t)) shared.push_back(t);
    }
    std::sort(shared.begin(), shared.end());
    for (std::string_view t : shared) raw.push_back({hash_index("S", t, {}, mask, key), 1.0});

    auto bigrams = [](const pairs::TokenSeq& toks) {
        std::vector<std::pair<std::string_view, std::string_view>> out;
        for (std::size_t i = 0; i + 1 < toks.size(); ++i) out.emplace_back(toks[i], toks[i + 1]);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    };
    const auto pb = bigrams(prem);
    const auto hb = bigrams(hyp);
    std::vector<std::pair<std::string_view, std::string_view>> shared_bigrams;
    std::set_intersection(pb.begin(), pb.end(), hb.begin(), hb.end(), std::back_inserter(shared_bigrams));
    for (const auto& [a, b] : shared_bigrams) raw.push_back({hash_index("S", a, b, mask, key), 1.0});

    const double overlap = static_cast<double>(shared.size());
    const double uni = static_cast<double>(prem_set.size() + hyp_set.size()) - overlap;
    const double jaccard = uni > 0.0 ? overlap / uni : 0.0;
    const double lp = static_cast<double>(prem.size());
    const double lh = static_cast<double>(hyp.size());
    const double longest = std::max(lp, lh);
    const double length_diff = longest > 0.0 ? std::abs(lp - lh) / longest : 0.0;

    std::sort(raw.begin(), raw.end(), [](const Feature& a, const Feature& b) { return a.index < b.index; });
    FeatureVector fv;
    fv.entries.reserve(raw.size() + dense_block_size);
    for (const auto& f : raw) {
        if (!fv.entries.empty() && fv.entries.back().index == f.index) fv.entries.back().value += f.value;
        else fv.entries.push_back(f);
    }
    // Zero dense values are still listed so the block layout is fixed.
    fv.entries.push_back({dense_base + dense_overlap, overlap});
    fv.entries.push_back({dense_base + dense_jaccard, jaccard});
    fv.entries.push_back({dense_base + dense_length, length_diff});
    fv.entries.push_back({dense_base + dense_bias, 1.0});
    return fv;
}

double sigmoid(double z) noexcept {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double dot(std::span<const double> weights, const FeatureVector& x) noexcept {
    double s = 0.0;
    for (const auto& f : x.entries) s += weights[f.index] * f.value;
    return s;
}

double logistic_loss(std::span<const double> weights, std::span<const FeatureVector> xs,
                     std::span<const double> labels) {
    if (xs.empty()) return 0.0;
    double total = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double z = dot(weights, xs[i]);
        total += softplus(z) - labels[i] * z;
    }
    return total / static_cast<double>(xs.size());
}

void logistic_gradient(std::span<const double> weights, std::span<const FeatureVector> xs,
                       std::span<const double> labels, std::span<double> grad) {
    std::fill(grad.begin(), grad.end(), 0.0);
    if (xs.empty()) return;
    const double scale = 1.0 / static_cast<double>(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double r = sigmoid(dot(weights, xs[i])) - labels[i];
        for (const auto& f : xs[i].entries) grad[f.index] += r * f.value * scale;
    }
}

BaselineModel::BaselineModel(const TrainConfig& config)
    : BaselineModel(config, feature_dimension(config.hash_bits)) {}

BaselineModel::BaselineModel(const TrainConfig& config, std::size_t dimension)
    : config_(config), weights_(dimension, 0.0), m_(dimension, 0.0), v_(dimension, 0.0) {
    if (dimension == 0) throw Error(ErrorKind::validation, "model dimension must be positive");
}

double BaselineModel::probability(const FeatureVector& x) const noexcept {
    // Clamp into the open interval; exp saturates for |z| > ~37.
    constexpr double lo = std::numeric_limits<double>::denorm_min();
    const double hi = std::nextafter(1.0, 0.0);
    return std::clamp(sigmoid(dot(weights_, x)), lo, hi);
}

void adamw_step(BaselineModel& model, std::span<const Feature> gradient, const TrainConfig& config) {
    const std::size_t dim = model.dimension();
    for (const auto& g : gradient) {
        if (!std::isfinite(g.value)) {
            throw Error(ErrorKind::numeric, "non-finite gradient at index " + std::to_string(g.index));
        }
        if (g.index >= dim) {
            throw Error(ErrorKind::validation, "gradient index " + std::to_string(g.index) + " out of range");
        }
    }
    if (model.scratch_.size() != dim) model.scratch_.assign(dim, 0.0);
    for (const auto& g : gradient) model.scratch_[g.index] += g.value;

    ++model.step_;
    kernels::adamw_apply(model.weights_, model.m_, model.v_, model.scratch_, model.bias_index(), model.step_,
                         config);

    for (const auto& g : gradient) model.scratch_[g.index] = 0.0;

    for (double w : model.weights_) {
        if (!std::isfinite(w)) throw Error(ErrorKind::numeric, "weights diverged to a non-finite value");
    }
}

void seeded_shuffle(std::span<std::size_t> items, std::uint64_t& state) {
    // splitmix64 with rejection sampling for an unbiased bound.
    auto next = [&state]() {
        std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    };
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::uint64_t bound = i;
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % bound;
        std::uint64_t r;
        do r = next();
        while (r >= limit);
        std::swap(items[i - 1], items[static_cast<std::size_t>(r % bound)]);
    }
}

BaselineModel train(std::span<const pairs::SentencePair> examples, const TrainConfig& config, TrainLog* log) {
    config.validate();
    if (examples.empty()) throw Error(ErrorKind::validation, "cannot train on an empty example set");
    std::vector<double> labels(examples.size());
    for (std::size_t i = 0; i < examples.size(); ++i) {
        if (!examples[i].label) {
            throw Error(ErrorKind::validation, "training example " + examples[i].pair_id + " is unlabeled");
        }
        labels[i] = *examples[i].label == dataset::Label::edge ? 1.0 : 0.0;
    }

    const auto xs = kernels::featurize_all(examples, config.hash_bits);
    BaselineModel model(config);
    if (log) {
        log->epoch_losses.clear();
        log->batch_losses.clear();
        log->epoch_losses.push_back(logistic_loss(model.weights(), xs, labels));
    }

    std::vector<std::size_t> order(examples.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::uint64_t rng = config.seed;
    std::vector<double> residuals;
    std::vector<Feature> grad;

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        seeded_shuffle(order, rng);
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            const std::span<const std::size_t> rows(order.data() + start, end - start);
            residuals.resize(rows.size());
            kernels::batch_residuals(model.weights(), xs, labels, rows, residuals);

            const double scale = 1.0 / static_cast<double>(rows.size());
            grad.clear();
            double batch_loss = 0.0;
            for (std::size_t k = 0; k < rows.size(); ++k) {
                const auto& x = xs[rows[k]];
                for (const auto& f : x.entries) grad.push_back({f.index, residuals[k] * f.value * scale});
                if (log) {
                    const double z = dot(model.weights(), x);
                    batch_loss += softplus(z) - labels[rows[k]] * z;
                }
            }
            if (log) log->batch_losses.push_back(batch_loss * scale);
            adamw_step(model, grad, config);
        }
        if (log) log->epoch_losses.push_back(logistic_loss(model.weights(), xs, labels));
    }
    return model;
}

Prediction predict(const BaselineModel& model, const pairs::SentencePair& pair) {
    const auto x = featurize(pair, model.config().hash_bits);
    return Prediction::from_probability(pair.pair_id, model.probability(x), model.config().decision_threshold);
}

void save_model(std::ostream& out, const BaselineModel& model) {
    const auto& c = model.config();
    out << kMagic << ' ' << kFormatVersion << '\n'
        << "batch_size " << c.batch_size << '\n'
        << "max_tokens " << c.max_tokens << '\n'
        << "learning_rate " << hex(c.learning_rate) << '\n'
        << "adamw_eps " << hex(c.adamw_eps) << '\n'
        << "adamw_beta1 " << hex(c.adamw_beta1) << '\n'
        << "adamw_beta2 " << hex(c.adamw_beta2) << '\n'
        << "weight_decay " << hex(c.weight_decay) << '\n'
        << "epochs " << c.epochs << '\n'
        << "seed " << c.seed << '\n'
        << "hash_bits " << c.hash_bits << '\n'
        << "decision_threshold " << hex(c.decision_threshold) << '\n'
        << "dimension " << model.dimension() << '\n'
        << "step " << model.step() << '\n';
    const auto w = model.weights();
    const auto nonzero = static_cast<std::size_t>(std::count_if(w.begin(), w.end(), [](double x) { return x != 0.0; }));
    out << "nonzero " << nonzero << '\n';
    for (std::size_t i = 0; i < w.size(); ++i) {
        if (w[i] != 0.0) out << i << ' ' << hex(w[i]) << '\n';
    }
    out << "end\n";
    if (!out) throw Error(ErrorKind::io, "failed writing model");
}

BaselineModel load_model(std::istream& in) {
    std::size_t lineno = 0;
    std::string line;
    auto next_line = [&]() -> std::string_view {
        if (!std::getline(in, line)) throw Error(ErrorKind::parse, "truncated model file", lineno + 1);
        ++lineno;
        return line;
    };
    auto field = [&](std::string_view name) -> std::string {
        const std::string_view l = next_line();
        if (l.substr(0, name.size()) != name || l.size() <= name.size() || l[name.size()] != ' ') {
            throw Error(ErrorKind::parse, "expected field '" + std::string(name) + "'", lineno);
        }
        return std::string(l.substr(name.size() + 1));
    };
    auto as_u64 = [&](const std::string& s) {
        std::uint64_t v = 0;
        auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc{} || ptr != s.data() + s.size()) {
            throw Error(ErrorKind::parse, "bad integer '" + s + "'", lineno);
        }
        return v;
    };

    const std::string header{next_line()};
    if (header != std::string(kMagic) + " " + std::to_string(kFormatVersion)) {
        throw Error(ErrorKind::parse, "not a baseline model file (header '" + header + "')", 1);
    }
    TrainConfig c;
    c.batch_size = as_u64(field("batch_size"));
    c.max_tokens = as_u64(field("max_tokens"));
    c.learning_rate = parse_hex(field("learning_rate"));
    c.adamw_eps = parse_hex(field("adamw_eps"));
    c.adamw_beta1 = parse_hex(field("adamw_beta1"));
    c.adamw_beta2 = parse_hex(field("adamw_beta2"));
    c.weight_decay = parse_hex(field("weight_decay"));
    c.epochs = as_u64(field("epochs"));
    c.seed = as_u64(field("seed"));
    c.hash_bits = static_cast<unsigned>(as_u64(field("hash_bits")));
    c.decision_threshold = parse_hex(field("decision_threshold"));
    c.validate();

    const std::uint64_t dim = as_u64(field("dimension"));
    if (dim != feature_dimension(c.hash_bits)) {
        throw Error(ErrorKind::validation, "dimension does not match hash_bits", lineno);
    }
    BaselineModel model(c);
    model.step_ = as_u64(field("step"));
    const std::uint64_t nonzero = as_u64(field("nonzero"));
    for (std::uint64_t k = 0; k < nonzero; ++k) {
        const std::string_view l = next_line();
        const auto sp = l.find(' ');
        if (sp == std::string_view::npos) throw Error(ErrorKind::parse, "expected 'index value'", lineno);
        const std::uint64_t idx = as_u64(std::string(l.substr(0, sp)));
        if (idx >= dim) throw Error(ErrorKind::validation, "weight index out of range", lineno);
        const double w = parse_hex(l.substr(sp + 1));
        if (!std::isfinite(w)) throw Error(ErrorKind::numeric, "non-finite weight", lineno);
        model.weights_[idx] = w;
    }
    if (next_line() != "end") throw Error(ErrorKind::parse, "missing 'end' marker", lineno);
    return model;
}

void BaselineClassifier::fit(std::span<const pairs::SentencePair> examples) {
    model_ = train(examples, config_);
}

std::vector<Prediction> BaselineClassifier::predict(std::span<const pairs::SentencePair> pairs) const {
    return kernels::predict_all(model_, pairs);
}

}  // namespace linkpred::baseline
