#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace rankfit {

enum class TokenPattern {
  // Maximal runs of non-whitespace code points (Unicode White_Space).
  kWhitespace,
  // Maximal runs of letters, digits, marks and '_'; punctuation and symbol
  // blocks split tokens and are discarded.
  kUnicodeWord,
};

struct TokenizerConfig {
  bool lowercase = false;
  std::uint64_t min_count = 1;
  TokenPattern token_pattern = TokenPattern::kWhitespace;
};

// Word -> absolute frequency. `total_tokens` is the sum of all entries, i.e.
// tokens of words removed by min_count are not counted.
struct FrequencyCounts {
  std::map<std::string, std::uint64_t, std::less<>> entries;
  std::uint64_t total_tokens = 0;

  bool empty() const noexcept { return entries.empty(); }
  friend bool operator==(const FrequencyCounts&,
                         const FrequencyCounts&) = default;
};

std::string_view to_string(TokenPattern pattern);
TokenPattern parse_token_pattern(std::string_view name);

// Counts tokens in a UTF-8 byte stream. Throws DecodeError (carrying the
// byte offset) on malformed UTF-8 and std::invalid_argument on min_count 0.
FrequencyCounts count_words(std::istream& in, const TokenizerConfig& config);
FrequencyCounts count_words(std::string_view text,
                            const TokenizerConfig& config);

// Counts each file independently (concurrently, up to `threads` workers),
// merges the raw counts, then applies min_count once on the merged result.
// A path of "-" reads standard input.
FrequencyCounts count_files(const std::vector<std::string>& paths,
                            const TokenizerConfig& config, unsigned threads);

// Entrywise sum.
FrequencyCounts merge_counts(const FrequencyCounts& a,
                             const FrequencyCounts& b);

// Drops entries below min_count and recomputes total_tokens.
void apply_min_count(FrequencyCounts& counts, std::uint64_t min_count);

namespace unicode {

bool is_whitespace(char32_t cp) noexcept;
bool is_word_char(char32_t cp) noexcept;
// Simple one-to-one lowercase mapping covering ASCII, Latin-1, Latin
// Extended-A, Greek and Cyrillic; other code points map to themselves.
char32_t to_lower(char32_t cp) noexcept;
void append_utf8(std::string& out, char32_t cp);

}  // namespace unicode

}  // namespace rankfit
