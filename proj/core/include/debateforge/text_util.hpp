#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace debateforge {

// FNV-1a 64-bit. The stable hash behind n-gram feature buckets and cache
// file names; must never change across versions.
std::uint64_t fnv1a64(std::string_view data);

std::string to_lower(std::string_view s);
std::string trim(std::string_view s);

// Splits on '\n', tolerating '\r\n' endings. The trailing empty segment of a
// newline-terminated text is dropped.
std::vector<std::string> split_lines(std::string_view text);

// Whitespace-delimited tokens, no punctuation stripping. This is the word
// definition used by corpus statistics.
std::vector<std::string> whitespace_tokens(std::string_view text);

// Lowercased alphabetic runs; bytes >= 0x80 count as letters so UTF-8
// sequences stay intact. Digits and punctuation separate tokens.
std::vector<std::string> alpha_tokens(std::string_view text);

// Lowercased [a-z0-9]+ runs (punctuation removed). Tokenizer used by the
// classifier preprocessing.
std::vector<std::string> alnum_tokens(std::string_view text);

// Removes leading/trailing punctuation from a single token.
std::string strip_punct_edges(std::string_view token);

// True when the string contains at least one letter and no lowercase letters.
bool is_all_caps(std::string_view s);

// Case-folded, whitespace-collapsed, trimmed. Key for the member registry.
std::string normalize_person_name(std::string_view name);

// Case-folded with punctuation stripped and whitespace collapsed. Used for
// fuzzy debate-type heading matching.
std::string normalize_heading(std::string_view line);

}  // namespace debateforge
