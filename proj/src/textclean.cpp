#include "linkpred/textclean.hpp"

#include <algorithm>

#include "linkpred/error.hpp"
#include "linkpred/utf8.hpp"

namespace linkpred::textclean {

PunctuationSet::PunctuationSet(std::initializer_list<char32_t> chars) {
    for (char32_t c : chars) insert(c);
}

PunctuationSet PunctuationSet::ascii_default() {
    PunctuationSet set;
    for (char c : std::string_view{R"(!"#$%&'()*+,-./:;<=>?@[\]^_`|~)"}) {
        set.insert(static_cast<char32_t>(c));
    }
    return set;
}

void PunctuationSet::insert(char32_t c) {
    if (c == U'{' || c == U'}' || is_space(c)) {
        throw Error(ErrorKind::validation,
                    "punctuation set may not contain braces or whitespace (U+" +
                        std::to_string(static_cast<unsigned>(c)) + ")");
    }
    if (c < 128) ascii_[c] = true;
    else other_.insert(c);
}

std::size_t PunctuationSet::size() const noexcept {
    return static_cast<std::size_t>(std::count(ascii_.begin(), ascii_.end(), true)) + other_.size();
}

CleanReport& CleanReport::operator+=(const CleanReport& other) noexcept {
    input_length += other.input_length;
    output_length += other.output_length;
    braces_removed_balance += other.braces_removed_balance;
    chars_removed_debrace += other.chars_removed_debrace;
    return *this;
}

namespace {

std::u32string_view trim(std::u32string_view s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && is_space(s[b])) ++b;
    while (e > b && is_space(s[e - 1])) --e;
    return s.substr(b, e - b);
}

// Deleting the first k `{` one find() at a time is the same as dropping the
// first k occurrences in a single pass; likewise for the last k `}`.
std::u32string balance_impl(std::u32string_view text, std::size_t& removed) {
    const auto opens = static_cast<std::size_t>(std::count(text.begin(), text.end(), U'{'));
    const auto closes = static_cast<std::size_t>(std::count(text.begin(), text.end(), U'}'));

    std::u32string out;
    out.reserve(text.size());
    if (opens > closes) {
        std::size_t surplus = opens - closes;
        removed = surplus;
        for (char32_t c : text) {
            if (c == U'{' && surplus > 0) {
                --surplus;
                continue;
            }
            out.push_back(c);
        }
    } else if (closes > opens) {
        std::size_t surplus = closes - opens;
        removed = surplus;
        for (auto it = text.rbegin(); it != text.rend(); ++it) {
            if (*it == U'}' && surplus > 0) {
                --surplus;
                continue;
            }
            out.push_back(*it);
        }
        std::reverse(out.begin(), out.end());
    } else {
        removed = 0;
        out.assign(text);
    }
    return std::u32string(trim(out));
}

}  // namespace

std::u32string balance_curly_braces(std::u32string_view text) {
    std::size_t removed = 0;
    return balance_impl(text, removed);
}

std::u32string remove_brace_spans(std::u32string_view text) {
    // Stack of `{` kept as a depth counter.
    std::size_t depth = 0;
    std::u32string out;
    out.reserve(text.size());
    for (char32_t c : text) {
        if (c == U'{') {
            ++depth;
        } else if (c == U'}') {
            if (depth > 0) --depth;
        } else if (depth == 0) {
            out.push_back(c);
        }
    }
    return out;
}

std::u32string strip_punctuation(std::u32string_view text, const CleanConfig& config) {
    std::u32string out;
    out.reserve(text.size());
    for (char32_t c : text) {
        if (!config.punctuation_set.contains(c)) out.push_back(c);
    }
    return out;
}

std::u32string normalize_whitespace(std::u32string_view text) {
    std::u32string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char32_t c : text) {
        if (is_space(c)) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(U' ');
        pending_space = false;
        out.push_back(c);
    }
    return out;
}

std::pair<std::u32string, CleanReport> clean(std::u32string_view text, const CleanConfig& config) {
    CleanReport report;
    report.input_length = text.size();

    std::u32string cur(text);
    if (config.stages.has(Stage::balance)) {
        cur = balance_impl(cur, report.braces_removed_balance);
    }
    if (config.stages.has(Stage::debrace)) {
        const std::size_t before = cur.size();
        cur = remove_brace_spans(cur);
        report.chars_removed_debrace = before - cur.size();
    }
    if (config.stages.has(Stage::depunct)) {
        cur = strip_punctuation(cur, config);
    }
    if (config.stages.has(Stage::despace)) {
        cur = config.collapse_whitespace ? normalize_whitespace(cur) : std::u32string(trim(cur));
    }
    report.output_length = cur.size();
    return {std::move(cur), report};
}

std::string balance_curly_braces(std::string_view utf8_text) {
    return utf8::encode(balance_curly_braces(utf8::decode(utf8_text)));
}

std::string remove_brace_spans(std::string_view utf8_text) {
    return utf8::encode(remove_brace_spans(utf8::decode(utf8_text)));
}

std::string strip_punctuation(std::string_view utf8_text, const CleanConfig& config) {
    return utf8::encode(strip_punctuation(utf8::decode(utf8_text), config));
}

std::string normalize_whitespace(std::string_view utf8_text) {
    return utf8::encode(normalize_whitespace(utf8::decode(utf8_text)));
}

std::pair<std::string, CleanReport> clean(std::string_view utf8_text, const CleanConfig& config) {
    auto [text, report] = clean(utf8::decode(utf8_text), config);
    return {utf8::encode(text), report};
}

}  // namespace linkpred::textclean
