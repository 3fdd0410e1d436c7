// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 The authorrag Authors

#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace authorrag::text {

/// True when `s` is well-formed UTF-8 (no overlongs, no surrogates, <= U+10FFFF).
bool is_valid_utf8(std::string_view s) noexcept;

/// Number of code points; `s` must be valid UTF-8.
std::size_t codepoint_count(std::string_view s) noexcept;

/// Trims ASCII whitespace plus U+00A0 from both ends.
std::string_view trim(std::string_view s) noexcept;

/// ASCII lowercase; bytes >= 0x80 are copied unchanged.
std::string to_lower_ascii(std::string_view s);

bool is_ascii_alpha(std::string_view s) noexcept;

/// Python's str.isalpha() restricted to what matters here: non-empty and every
/// code point is an ASCII letter or a non-ASCII code point.
bool is_alpha_word(std::string_view s) noexcept;

std::vector<std::string> split_whitespace(std::string_view s);

bool starts_with(std::string_view s, std::string_view prefix) noexcept;
bool ends_with(std::string_view s, std::string_view suffix) noexcept;

std::string join(const std::vector<std::string>& parts, std::string_view sep);

/// Replaces every occurrence of `from` with `to`.
std::string replace_all(std::string s, std::string_view from, std::string_view to);

/// Formats `value` with exactly `decimals` digits after the point, rounding
/// half away from zero on the exact binary value.
std::string format_fixed(double value, int decimals);

} // namespace authorrag::text
