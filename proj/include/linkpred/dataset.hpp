#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

/// Competition file formats.
///
///   nodes.tsv    `id<TAB>text`, optional first line `id<TAB>text` as header
///   train.csv    header `id,id1,id2,label`
///   test.csv     header `id,id1,id2`
///
/// LF and CRLF are both accepted on input; writers emit LF. Blank lines are
/// skipped.
namespace linkpred::dataset {

using NodeId = std::uint64_t;

enum class Label : std::uint8_t { no_edge = 0, edge = 1 };

constexpr int to_int(Label l) noexcept { return static_cast<int>(l); }
constexpr Label label_from_bool(bool edge) noexcept { return edge ? Label::edge : Label::no_edge; }

struct NodeRecord {
    NodeId id = 0;
    std::string text;

    bool operator==(const NodeRecord&) const = default;
};

struct PairRecord {
    std::string pair_id;
    NodeId id1 = 0;
    NodeId id2 = 0;
    std::optional<Label> label;

    bool operator==(const PairRecord&) const = default;
};

/// Immutable once built; safe to share across threads for lookups.
class NodeTable {
public:
    NodeTable() = default;

    /// Throws Error(validation) on a duplicate id. `line` only feeds the message.
    void add(NodeRecord record, std::size_t line = 0);

    const NodeRecord* find(NodeId id) const noexcept;
    const std::vector<NodeRecord>& records() const noexcept { return records_; }
    std::size_t size() const noexcept { return records_.size(); }
    bool empty() const noexcept { return records_.empty(); }

    /// Nodes whose line had no text field; kept with empty text.
    std::size_t missing_text_count() const noexcept { return missing_text_; }
    void note_missing_text() noexcept { ++missing_text_; }

private:
    std::vector<NodeRecord> records_;
    std::unordered_map<NodeId, std::size_t> index_;
    std::size_t missing_text_ = 0;
};

/// Streaming reader for nodes.tsv. One record per call to next().
class NodeReader {
public:
    explicit NodeReader(std::istream& in);

    /// False at end of input. Throws Error(parse) on malformed lines.
    bool next(NodeRecord& out);

    std::size_t line() const noexcept { return line_; }
    std::size_t missing_text_count() const noexcept { return missing_text_; }

private:
    std::istream& in_;
    std::string buf_;
    std::size_t line_ = 0;
    std::size_t missing_text_ = 0;
};

/// Reads the whole node table; rejects duplicate ids.
NodeTable parse_nodes(std::istream& in);

enum class PairSchema { labeled, unlabeled };

/// Streaming reader for pair CSVs. The header is read and checked in the
/// constructor against the requested schema.
class PairReader {
public:
    PairReader(std::istream& in, PairSchema schema);

    /// Reads the header and picks the schema from it.
    static PairReader detect(std::istream& in);

    bool next(PairRecord& out);

    PairSchema schema() const noexcept { return schema_; }
    std::size_t line() const noexcept { return line_; }

private:
    PairReader(std::istream& in, std::optional<PairSchema> schema);

    std::istream& in_;
    PairSchema schema_;
    std::string buf_;
    std::size_t line_ = 0;
};

std::vector<PairRecord> parse_pairs(std::istream& in, bool labeled);

/// Accepts either header and reports which one it found through `schema`.
std::vector<PairRecord> parse_pairs_any(std::istream& in, PairSchema* schema = nullptr);

void write_nodes(std::ostream& out, const std::vector<NodeRecord>& nodes);
void write_pairs(std::ostream& out, const std::vector<PairRecord>& pairs, PairSchema schema);

struct JoinedPair {
    const PairRecord* pair = nullptr;
    const NodeRecord* premise = nullptr;     // id1
    const NodeRecord* hypothesis = nullptr;  // id2
};

enum class JoinMode { strict, lenient };

struct JoinResult {
    std::vector<JoinedPair> pairs;
    std::size_t skipped = 0;
};

/// Resolves both ends of every pair. In strict mode a missing node throws
/// Error(validation) naming the pair and the id; in lenient mode the pair is
/// skipped and counted. The result points into `pairs` and `nodes`.
JoinResult join_pairs(const std::vector<PairRecord>& pairs, const NodeTable& nodes,
                      JoinMode mode = JoinMode::strict);

struct LabelStats {
    std::uint64_t count_0 = 0;
    std::uint64_t count_1 = 0;
    /// Percentages in hundredths of a percent, rounded half up: 5403 is 54.03%.
    std::int64_t pct_0_hundredths = 0;
    std::int64_t pct_1_hundredths = 0;

    std::uint64_t total() const noexcept { return count_0 + count_1; }
    double pct_0() const noexcept { return static_cast<double>(pct_0_hundredths) / 100.0; }
    double pct_1() const noexcept { return static_cast<double>(pct_1_hundredths) / 100.0; }
};

/// Throws Error(validation) if any pair is unlabeled.
LabelStats label_stats(const std::vector<PairRecord>& pairs);

/// Incremental form for streaming over a file without materialising it.
class LabelCounter {
public:
    void add(const PairRecord& pair);
    LabelStats finish() const noexcept;

private:
    std::uint64_t count_0_ = 0;
    std::uint64_t count_1_ = 0;
};

/// "12.34" style formatting of a hundredths value.
std::string format_hundredths(std::int64_t hundredths);

}  // namespace linkpred::dataset
