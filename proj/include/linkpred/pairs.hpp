#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "linkpred/dataset.hpp"

/// Premise/hypothesis construction: id1's text is the premise, id2's the
/// hypothesis, each side cut to its own token budget.
namespace linkpred::pairs {

using Token = std::string;
using TokenSeq = std::vector<Token>;

struct PairConfig {
    /// Per-side budget in whitespace tokens.
    std::size_t max_tokens = 128;

    void validate() const;
};

struct SentencePair {
    std::string pair_id;
    TokenSeq premise_tokens;
    TokenSeq hypothesis_tokens;
    std::optional<dataset::Label> label;

    bool operator==(const SentencePair&) const = default;
};

/// Splits on maximal runs of ASCII whitespace; never yields empty tokens.
TokenSeq tokenize(std::string_view text);

/// Same, but stops after `limit` tokens.
TokenSeq tokenize(std::string_view text, std::size_t limit);

SentencePair build_pair(const dataset::PairRecord& pair, std::string_view premise_text,
                        std::string_view hypothesis_text, const PairConfig& config);

/// Prepared-pairs file: `pair_id<TAB>label|-<TAB>premise<TAB>hypothesis`,
/// tokens joined by single spaces, LF terminated, no header.
void write_prepared(std::ostream& out, const std::vector<SentencePair>& pairs);
std::vector<SentencePair> read_prepared(std::istream& in);

}  // namespace linkpred::pairs
