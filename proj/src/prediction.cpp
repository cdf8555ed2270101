#include "linkpred/prediction.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <string_view>

#include "linkpred/error.hpp"

namespace linkpred {

namespace {
constexpr std::string_view kHeader = "id,probability,label";
}

Prediction Prediction::from_probability(std::string pair_id, double probability, double threshold) {
    Prediction p;
    p.pair_id = std::move(pair_id);
    p.probability = probability;
    p.label = dataset::label_from_bool(probability >= threshold);
    return p;
}

void write_predictions(std::ostream& out, const std::vector<Prediction>& predictions) {
    out << kHeader << '\n';
    char buf[64];
    for (const auto& p : predictions) {
        auto [end, ec] = std::to_chars(buf, buf + sizeof buf, p.probability);
        out << p.pair_id << ',' << std::string_view(buf, static_cast<std::size_t>(end - buf)) << ','
            << dataset::to_int(p.label) << '\n';
    }
    if (!out) throw Error(ErrorKind::io, "failed writing predictions");
}

std::vector<Prediction> read_predictions(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw Error(ErrorKind::parse, "missing header row", 1);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kHeader) throw Error(ErrorKind::parse, "unexpected header '" + line + "'", 1);

    std::vector<Prediction> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string_view row{line};
        const auto c1 = row.find(',');
        const auto c2 = c1 == std::string_view::npos ? c1 : row.find(',', c1 + 1);
        if (c2 == std::string_view::npos || row.find(',', c2 + 1) != std::string_view::npos) {
            throw Error(ErrorKind::parse, "expected 3 columns", lineno);
        }
        Prediction p;
        p.pair_id.assign(row.substr(0, c1));
        const std::string_view prob = row.substr(c1 + 1, c2 - c1 - 1);
        auto [ptr, ec] = std::from_chars(prob.data(), prob.data() + prob.size(), p.probability);
        if (ec != std::errc{} || ptr != prob.data() + prob.size() || !std::isfinite(p.probability) ||
            p.probability < 0.0 || p.probability > 1.0) {
            throw Error(ErrorKind::parse, "bad probability '" + std::string(prob) + "'", lineno);
        }
        const std::string_view label = row.substr(c2 + 1);
        if (label == "0") p.label = dataset::Label::no_edge;
        else if (label == "1") p.label = dataset::Label::edge;
        else throw Error(ErrorKind::validation, "label must be 0 or 1", lineno);
        out.push_back(std::move(p));
    }
    if (in.bad()) throw Error(ErrorKind::io, "read failure", lineno);
    return out;
}

}  // namespace linkpred
