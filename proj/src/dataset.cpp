#include "linkpred/dataset.hpp"

#include <charconv>
#include <istream>
#include <ostream>
#include <string_view>

#include "linkpred/error.hpp"

namespace linkpred::dataset {

namespace {

constexpr std::string_view kNodesHeader = "id\ttext";
constexpr std::string_view kLabeledHeader = "id,id1,id2,label";
constexpr std::string_view kUnlabeledHeader = "id,id1,id2";

// getline that drops one trailing CR.
bool read_line(std::istream& in, std::string& buf) {
    if (!std::getline(in, buf)) return false;
    if (!buf.empty() && buf.back() == '\r') buf.pop_back();
    return true;
}

bool parse_id(std::string_view field, NodeId& out) {
    if (field.empty()) return false;
    const char* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, out);
    return ec == std::errc{} && ptr == end;
}

void check_stream(const std::istream& in, std::size_t line) {
    if (in.bad()) throw Error(ErrorKind::io, "read failure", line);
}

}  // namespace

void NodeTable::add(NodeRecord record, std::size_t line) {
    auto [it, inserted] = index_.try_emplace(record.id, records_.size());
    if (!inserted) {
        throw Error(ErrorKind::validation, "duplicate node id " + std::to_string(record.id), line);
    }
    records_.push_back(std::move(record));
}

const NodeRecord* NodeTable::find(NodeId id) const noexcept {
    auto it = index_.find(id);
    return it == index_.end() ? nullptr : &records_[it->second];
}

NodeReader::NodeReader(std::istream& in) : in_(in) {}

bool NodeReader::next(NodeRecord& out) {
    while (read_line(in_, buf_)) {
        ++line_;
        if (buf_.empty()) continue;
        if (line_ == 1 && buf_ == kNodesHeader) continue;

        const std::string_view line{buf_};
        const auto tab = line.find('\t');
        const std::string_view id_field = line.substr(0, tab);
        if (!parse_id(id_field, out.id)) {
            throw Error(ErrorKind::parse, "node id is not an unsigned integer: '" + std::string(id_field) + "'",
                        line_);
        }
        if (tab == std::string_view::npos) {
            out.text.clear();
            ++missing_text_;
            return true;
        }
        const std::string_view text = line.substr(tab + 1);
        if (text.find('\t') != std::string_view::npos) {
            throw Error(ErrorKind::parse, "expected 2 tab-separated fields, found more", line_);
        }
        out.text.assign(text);
        return true;
    }
    check_stream(in_, line_);
    return false;
}

NodeTable parse_nodes(std::istream& in) {
    NodeTable table;
    NodeReader reader(in);
    NodeRecord rec;
    std::size_t missing_before = 0;
    while (reader.next(rec)) {
        if (reader.missing_text_count() != missing_before) {
            missing_before = reader.missing_text_count();
            table.note_missing_text();
        }
        table.add(std::move(rec), reader.line());
        rec = NodeRecord{};
    }
    return table;
}

PairReader::PairReader(std::istream& in, PairSchema schema) : PairReader(in, std::optional{schema}) {}

PairReader::PairReader(std::istream& in, std::optional<PairSchema> schema)
    : in_(in), schema_(schema.value_or(PairSchema::labeled)) {
    if (!read_line(in_, buf_)) {
        check_stream(in_, 0);
        throw Error(ErrorKind::parse, "missing header row", 1);
    }
    line_ = 1;
    PairSchema found;
    if (buf_ == kLabeledHeader) {
        found = PairSchema::labeled;
    } else if (buf_ == kUnlabeledHeader) {
        found = PairSchema::unlabeled;
    } else {
        throw Error(ErrorKind::parse, "unexpected header '" + buf_ + "'", 1);
    }
    if (schema && *schema != found) {
        throw Error(ErrorKind::parse,
                    std::string("expected header '") +
                        std::string(*schema == PairSchema::labeled ? kLabeledHeader : kUnlabeledHeader) +
                        "', found '" + buf_ + "'",
                    1);
    }
    schema_ = found;
}

PairReader PairReader::detect(std::istream& in) { return PairReader(in, std::nullopt); }

bool PairReader::next(PairRecord& out) {
    while (read_line(in_, buf_)) {
        ++line_;
        if (buf_.empty()) continue;

        const std::size_t expected = schema_ == PairSchema::labeled ? 4 : 3;
        std::string_view fields[4];
        std::size_t count = 0;
        std::string_view rest{buf_};
        while (true) {
            const auto comma = rest.find(',');
            if (count < 4) fields[count] = rest.substr(0, comma);
            ++count;
            if (comma == std::string_view::npos) break;
            rest.remove_prefix(comma + 1);
        }
        if (count != expected) {
            throw Error(ErrorKind::parse,
                        "expected " + std::to_string(expected) + " columns, found " + std::to_string(count), line_);
        }
        if (fields[0].empty()) throw Error(ErrorKind::parse, "empty pair id", line_);
        out.pair_id.assign(fields[0]);
        if (!parse_id(fields[1], out.id1)) {
            throw Error(ErrorKind::parse, "id1 is not an unsigned integer: '" + std::string(fields[1]) + "'", line_);
        }
        if (!parse_id(fields[2], out.id2)) {
            throw Error(ErrorKind::parse, "id2 is not an unsigned integer: '" + std::string(fields[2]) + "'", line_);
        }
        if (schema_ == PairSchema::labeled) {
            if (fields[3] == "0") out.label = Label::no_edge;
            else if (fields[3] == "1") out.label = Label::edge;
            else {
                throw Error(ErrorKind::validation,
                            "label must be 0 or 1, found '" + std::string(fields[3]) + "'", line_);
            }
        } else {
            out.label.reset();
        }
        return true;
    }
    check_stream(in_, line_);
    return false;
}

std::vector<PairRecord> parse_pairs(std::istream& in, bool labeled) {
    PairReader reader(in, labeled ? PairSchema::labeled : PairSchema::unlabeled);
    std::vector<PairRecord> out;
    PairRecord rec;
    while (reader.next(rec)) out.push_back(rec);
    return out;
}

std::vector<PairRecord> parse_pairs_any(std::istream& in, PairSchema* schema) {
    auto reader = PairReader::detect(in);
    if (schema) *schema = reader.schema();
    std::vector<PairRecord> out;
    PairRecord rec;
    while (reader.next(rec)) out.push_back(rec);
    return out;
}

void write_nodes(std::ostream& out, const std::vector<NodeRecord>& nodes) {
    for (const auto& n : nodes) {
        out << n.id << '\t' << n.text << '\n';
    }
    if (!out) throw Error(ErrorKind::io, "failed writing nodes");
}

void write_pairs(std::ostream& out, const std::vector<PairRecord>& pairs, PairSchema schema) {
    out << (schema == PairSchema::labeled ? kLabeledHeader : kUnlabeledHeader) << '\n';
    for (const auto& p : pairs) {
        out << p.pair_id << ',' << p.id1 << ',' << p.id2;
        if (schema == PairSchema::labeled) {
            if (!p.label) throw Error(ErrorKind::validation, "pair " + p.pair_id + " has no label");
            out << ',' << to_int(*p.label);
        }
        out << '\n';
    }
    if (!out) throw Error(ErrorKind::io, "failed writing pairs");
}

JoinResult join_pairs(const std::vector<PairRecord>& pairs, const NodeTable& nodes, JoinMode mode) {
    JoinResult result;
    result.pairs.reserve(pairs.size());
    for (const auto& p : pairs) {
        const NodeRecord* a = nodes.find(p.id1);
        const NodeRecord* b = nodes.find(p.id2);
        if (a && b) {
            result.pairs.push_back({&p, a, b});
            continue;
        }
        if (mode == JoinMode::lenient) {
            ++result.skipped;
            continue;
        }
        const NodeId missing = a ? p.id2 : p.id1;
        throw Error(ErrorKind::validation,
                    "pair " + p.pair_id + " references missing node id " + std::to_string(missing));
    }
    return result;
}

void LabelCounter::add(const PairRecord& pair) {
    if (!pair.label) throw Error(ErrorKind::validation, "pair " + pair.pair_id + " is unlabeled");
    if (*pair.label == Label::edge) ++count_1_;
    else ++count_0_;
}

LabelStats LabelCounter::finish() const noexcept {
    LabelStats s;
    s.count_0 = count_0_;
    s.count_1 = count_1_;
    const std::uint64_t total = s.total();
    if (total != 0) {
        // round(100 * 100 * count / total), half up, in exact integer arithmetic.
        // Exact for counts below 9.2e14.
        auto pct = [total](std::uint64_t count) {
            return static_cast<std::int64_t>((count * 20000u + total) / (2u * total));
        };
        s.pct_0_hundredths = pct(count_0_);
        s.pct_1_hundredths = pct(count_1_);
    }
    return s;
}

LabelStats label_stats(const std::vector<PairRecord>& pairs) {
    LabelCounter counter;
    for (const auto& p : pairs) counter.add(p);
    return counter.finish();
}

std::string format_hundredths(std::int64_t hundredths) {
    const bool neg = hundredths < 0;
    const std::uint64_t v = neg ? static_cast<std::uint64_t>(-hundredths) : static_cast<std::uint64_t>(hundredths);
    std::string frac = std::to_string(v % 100);
    if (frac.size() < 2) frac.insert(0, "0");
    return (neg ? "-" : "") + std::to_string(v / 100) + "." + frac;
}

}  // namespace linkpred::dataset
