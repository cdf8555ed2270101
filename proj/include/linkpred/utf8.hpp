#pragma once

#include <string>
#include <string_view>

namespace linkpred::utf8 {

inline constexpr char32_t replacement_char = U'�';

// Malformed sequences (bad lead byte, truncated sequence, overlong form,
// surrogate, > U+10FFFF) decode to U+FFFD, one per offending byte.
std::u32string decode(std::string_view bytes);

std::string encode(std::u32string_view text);

}  // namespace linkpred::utf8
