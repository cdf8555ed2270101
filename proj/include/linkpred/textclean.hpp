#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <string_view>
#include <unordered_set>
#include <utility>

/// Wikitext noise removal.
///
/// Four deletion-only stages, always applied in this order:
///   balance  - drop surplus braces until `{` and `}` counts match, then trim
///   debrace  - drop every character inside a brace span, braces included
///   depunct  - drop characters in the configured punctuation set
///   despace  - collapse whitespace runs to one space and trim
///
/// All functions work on Unicode scalar values. The UTF-8 overloads decode,
/// clean, and re-encode.
namespace linkpred::textclean {

/// Space, tab, CR, LF, form feed, vertical tab. Locale independent.
constexpr bool is_space(char32_t c) noexcept {
    return c == U' ' || c == U'\t' || c == U'\r' || c == U'\n' || c == U'\f' || c == U'\v';
}

/// Set of scalar values treated as punctuation. Never contains `{`, `}` or
/// whitespace; inserting one of those throws Error(validation).
class PunctuationSet {
public:
    PunctuationSet() = default;
    PunctuationSet(std::initializer_list<char32_t> chars);

    /// The 32 ASCII punctuation symbols minus `{` and `}`.
    static PunctuationSet ascii_default();

    void insert(char32_t c);
    bool contains(char32_t c) const noexcept {
        if (c < 128) return ascii_[c];
        return !other_.empty() && other_.count(c) != 0;
    }
    std::size_t size() const noexcept;

private:
    std::array<bool, 128> ascii_{};
    std::unordered_set<char32_t> other_;
};

enum class Stage : std::uint8_t {
    balance = 1u << 0,
    debrace = 1u << 1,
    depunct = 1u << 2,
    despace = 1u << 3,
};

/// Which stages run. Order is fixed; the mask only switches stages on or off.
class StageMask {
public:
    constexpr StageMask() noexcept = default;
    static constexpr StageMask none() noexcept { return StageMask(0); }
    static constexpr StageMask all() noexcept { return StageMask(0x0F); }

    constexpr bool has(Stage s) const noexcept { return (bits_ & static_cast<std::uint8_t>(s)) != 0; }
    constexpr StageMask with(Stage s) const noexcept {
        return StageMask(bits_ | static_cast<std::uint8_t>(s));
    }
    constexpr StageMask without(Stage s) const noexcept {
        return StageMask(bits_ & ~static_cast<std::uint8_t>(s));
    }
    constexpr bool operator==(const StageMask&) const noexcept = default;

private:
    constexpr explicit StageMask(std::uint8_t bits) noexcept : bits_(bits) {}
    std::uint8_t bits_ = 0x0F;
};

struct CleanConfig {
    PunctuationSet punctuation_set = PunctuationSet::ascii_default();
    /// When false the despace stage only trims the ends.
    bool collapse_whitespace = true;
    StageMask stages = StageMask::all();
};

struct CleanReport {
    std::size_t input_length = 0;
    std::size_t output_length = 0;
    std::size_t braces_removed_balance = 0;
    std::size_t chars_removed_debrace = 0;

    CleanReport& operator+=(const CleanReport& other) noexcept;
    bool operator==(const CleanReport&) const = default;
};

/// Delete the leftmost surplus `{` (or rightmost surplus `}`) until the
/// counts are equal, then strip leading/trailing whitespace. The strip runs
/// even when the input was already balanced.
std::u32string balance_curly_braces(std::u32string_view text);

/// Stack walk over the text: `{` pushes, `}` pops when the stack is non-empty,
/// anything else is kept only at depth zero. A `}` at depth zero is dropped,
/// and everything after an unmatched `{` is dropped.
std::u32string remove_brace_spans(std::u32string_view text);

std::u32string strip_punctuation(std::u32string_view text, const CleanConfig& config);

std::u32string normalize_whitespace(std::u32string_view text);

std::pair<std::u32string, CleanReport> clean(std::u32string_view text, const CleanConfig& config);

std::string balance_curly_braces(std::string_view utf8_text);
std::string remove_brace_spans(std::string_view utf8_text);
std::string strip_punctuation(std::string_view utf8_text, const CleanConfig& config);
std::string normalize_whitespace(std::string_view utf8_text);
std::pair<std::string, CleanReport> clean(std::string_view utf8_text, const CleanConfig& config);

}  // namespace linkpred::textclean
