#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "linkpred/dataset.hpp"

namespace linkpred {

struct Prediction {
    std::string pair_id;
    double probability = 0.5;
    dataset::Label label = dataset::Label::edge;

    /// label is edge iff probability >= threshold (ties go to edge).
    static Prediction from_probability(std::string pair_id, double probability, double threshold);

    bool operator==(const Prediction&) const = default;
};

/// Predictions file: header `id,probability,label`, LF rows. Probabilities
/// are written in shortest round-trip form.
void write_predictions(std::ostream& out, const std::vector<Prediction>& predictions);
std::vector<Prediction> read_predictions(std::istream& in);

}  // namespace linkpred
