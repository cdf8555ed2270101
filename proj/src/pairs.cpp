#include "linkpred/pairs.hpp"

#include <istream>
#include <limits>
#include <ostream>

#include "linkpred/error.hpp"

namespace linkpred::pairs {

namespace {

constexpr bool is_space(char c) noexcept {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v';
}

void write_tokens(std::ostream& out, const TokenSeq& tokens) {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        if (i) out << ' ';
        out << tokens[i];
    }
}

}  // namespace

void PairConfig::validate() const {
    if (max_tokens < 1) throw Error(ErrorKind::validation, "max_tokens must be >= 1");
}

TokenSeq tokenize(std::string_view text, std::size_t limit) {
    TokenSeq out;
    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n && out.size() < limit) {
        while (i < n && is_space(text[i])) ++i;
        const std::size_t start = i;
        while (i < n && !is_space(text[i])) ++i;
        if (i > start) out.emplace_back(text.substr(start, i - start));
    }
    return out;
}

TokenSeq tokenize(std::string_view text) {
    return tokenize(text, std::numeric_limits<std::size_t>::max());
}

SentencePair build_pair(const dataset::PairRecord& pair, std::string_view premise_text,
                        std::string_view hypothesis_text, const PairConfig& config) {
    SentencePair out;
    out.pair_id = pair.pair_id;
    out.premise_tokens = tokenize(premise_text, config.max_tokens);
    out.hypothesis_tokens = tokenize(hypothesis_text, config.max_tokens);
    out.label = pair.label;
    return out;
}

void write_prepared(std::ostream& out, const std::vector<SentencePair>& pairs) {
    for (const auto& p : pairs) {
        out << p.pair_id << '\t';
        if (p.label) out << dataset::to_int(*p.label);
        else out << '-';
        out << '\t';
        write_tokens(out, p.premise_tokens);
        out << '\t';
        write_tokens(out, p.hypothesis_tokens);
        out << '\n';
    }
    if (!out) throw Error(ErrorKind::io, "failed writing prepared pairs");
}

std::vector<SentencePair> read_prepared(std::istream& in) {
    std::vector<SentencePair> out;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;

        std::string_view fields[4];
        std::string_view rest{line};
        std::size_t count = 0;
        while (true) {
            const auto tab = rest.find('\t');
            if (count < 4) fields[count] = rest.substr(0, tab);
            ++count;
            if (tab == std::string_view::npos) break;
            rest.remove_prefix(tab + 1);
        }
        if (count != 4) {
            throw Error(ErrorKind::parse, "expected 4 tab-separated fields, found " + std::to_string(count), lineno);
        }
        SentencePair p;
        p.pair_id.assign(fields[0]);
        if (fields[1] == "0") p.label = dataset::Label::no_edge;
        else if (fields[1] == "1") p.label = dataset::Label::edge;
        else if (fields[1] != "-") {
            throw Error(ErrorKind::validation, "label must be 0, 1 or '-', found '" + std::string(fields[1]) + "'",
                        lineno);
        }
        p.premise_tokens = tokenize(fields[2]);
        p.hypothesis_tokens = tokenize(fields[3]);
        out.push_back(std::move(p));
    }
    if (in.bad()) throw Error(ErrorKind::io, "read failure", lineno);
    return out;
}

}  // namespace linkpred::pairs
