#include "rankfit/corpus_ingest.hpp"

#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "rankfit/error.hpp"
#include "rankfit/parallel.hpp"

namespace rankfit {

namespace unicode {

bool is_whitespace(char32_t cp) noexcept {
  switch (cp) {
    case 0x0009: case 0x000A: case 0x000B: case 0x000C: case 0x000D:
    case 0x0020: case 0x0085: case 0x00A0: case 0x1680: case 0x2028:
    case 0x2029: case 0x202F: case 0x205F: case 0x3000:
      return true;
    default:
      return cp >= 0x2000 && cp <= 0x200A;
  }
}

namespace {

bool in(char32_t cp, char32_t lo, char32_t hi) { return cp >= lo && cp <= hi; }

bool is_punct_or_symbol(char32_t cp) {
  if (cp < 0x80) {
    return !((cp >= '0' && cp <= '9') || (cp >= 'a' && cp <= 'z') ||
             (cp >= 'A' && cp <= 'Z') || cp == '_');
  }
  if (in(cp, 0x00A1, 0x00BF)) {
    // ª ² ³ µ ¹ º ¼ ½ ¾ are letters or numbers.
    switch (cp) {
      case 0xAA: case 0xB2: case 0xB3: case 0xB5: case 0xB9: case 0xBA:
      case 0xBC: case 0xBD: case 0xBE:
        return false;
      default:
        return true;
    }
  }
  return cp == 0x00D7 || cp == 0x00F7 || cp == 0x037E || cp == 0x0387 ||
         in(cp, 0x055A, 0x055F) || in(cp, 0x2010, 0x2027) ||
         in(cp, 0x2030, 0x205E) || in(cp, 0x20A0, 0x20CF) ||
         in(cp, 0x2190, 0x2BFF) || in(cp, 0x3001, 0x303F) ||
         in(cp, 0xFE30, 0xFE4F) || in(cp, 0xFF01, 0xFF0F) ||
         in(cp, 0xFF1A, 0xFF20) || in(cp, 0xFF3B, 0xFF40) ||
         in(cp, 0xFF5B, 0xFF65) || in(cp, 0x1F000, 0x1FAFF);
}

}  // namespace

bool is_word_char(char32_t cp) noexcept {
  if (cp < 0x20 || (cp >= 0x7F && cp < 0xA0)) return false;
  return !is_whitespace(cp) && !is_punct_or_symbol(cp);
}

char32_t to_lower(char32_t cp) noexcept {
  if (cp < 0x80) return (cp >= 'A' && cp <= 'Z') ? cp + 0x20 : cp;
  // Latin-1
  if (in(cp, 0x00C0, 0x00DE) && cp != 0x00D7) return cp + 0x20;
  // Latin Extended-A: mostly even/odd case pairs, shifted in 0139..0148 and
  // 0179..017E.
  if (in(cp, 0x0100, 0x0137) || in(cp, 0x014A, 0x0177)) return cp | 1;
  if (in(cp, 0x0139, 0x0148) || in(cp, 0x0179, 0x017E)) {
    return (cp & 1) ? cp + 1 : cp;
  }
  if (cp == 0x0178) return 0x00FF;
  // Romanian comma-below letters.
  if (in(cp, 0x0218, 0x021B)) return cp | 1;
  // Greek
  if (in(cp, 0x0391, 0x03AB) && cp != 0x03A2) return cp + 0x20;
  if (cp == 0x0386) return 0x03AC;
  if (in(cp, 0x0388, 0x038A)) return cp + 0x25;
  if (cp == 0x038C) return 0x03CC;
  if (in(cp, 0x038E, 0x038F)) return cp + 0x3F;
  // Cyrillic
  if (in(cp, 0x0410, 0x042F)) return cp + 0x20;
  if (in(cp, 0x0400, 0x040F)) return cp + 0x50;
  if (in(cp, 0x0460, 0x0481) || in(cp, 0x048A, 0x04BF)) return cp | 1;
  return cp;
}

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

}  // namespace unicode

namespace {

// Decodes one code point starting at text[i]; advances i. Returns false on a
// malformed, overlong, surrogate or out-of-range sequence.
bool decode_one(std::string_view text, std::size_t& i, char32_t& cp) {
  const auto byte = [&](std::size_t k) {
    return static_cast<unsigned char>(text[k]);
  };
  const unsigned char lead = byte(i);
  if (lead < 0x80) {
    cp = lead;
    ++i;
    return true;
  }
  std::size_t len = 0;
  unsigned char lo = 0x80, hi = 0xBF;
  if (lead >= 0xC2 && lead <= 0xDF) {
    len = 2;
    cp = lead & 0x1F;
  } else if (lead >= 0xE0 && lead <= 0xEF) {
    len = 3;
    cp = lead & 0x0F;
    if (lead == 0xE0) lo = 0xA0;
    if (lead == 0xED) hi = 0x9F;
  } else if (lead >= 0xF0 && lead <= 0xF4) {
    len = 4;
    cp = lead & 0x07;
    if (lead == 0xF0) lo = 0x90;
    if (lead == 0xF4) hi = 0x8F;
  } else {
    return false;
  }
  if (i + len > text.size()) return false;
  for (std::size_t k = 1; k < len; ++k) {
    const unsigned char c = byte(i + k);
    if (k == 1 ? (c < lo || c > hi) : (c < 0x80 || c > 0xBF)) return false;
    cp = (cp << 6) | (c & 0x3F);
  }
  i += len;
  return true;
}

class Tokenizer {
 public:
  Tokenizer(const TokenizerConfig& config, FrequencyCounts& counts)
      : config_(config), counts_(counts) {}

  // `base_offset` is the stream offset of text[0], for error reporting.
  void feed(std::string_view text, std::size_t base_offset) {
    std::size_t i = 0;
    while (i < text.size()) {
      const std::size_t start = i;
      char32_t cp = 0;
      if (!decode_one(text, i, cp)) {
        throw DecodeError("invalid UTF-8 sequence", base_offset + start);
      }
      const bool part_of_token =
          config_.token_pattern == TokenPattern::kWhitespace
              ? !unicode::is_whitespace(cp)
              : unicode::is_word_char(cp);
      if (!part_of_token) {
        flush();
        continue;
      }
      if (config_.lowercase) {
        unicode::append_utf8(token_, unicode::to_lower(cp));
      } else {
        token_.append(text.substr(start, i - start));
      }
    }
  }

  void flush() {
    if (token_.empty()) return;
    auto it = counts_.entries.find(token_);
    if (it == counts_.entries.end()) {
      counts_.entries.emplace(token_, 1);
    } else {
      ++it->second;
    }
    ++counts_.total_tokens;
    token_.clear();
  }

 private:
  const TokenizerConfig& config_;
  FrequencyCounts& counts_;
  std::string token_;
};

void check_config(const TokenizerConfig& config) {
  if (config.min_count < 1) {
    throw std::invalid_argument("min_count must be at least 1");
  }
}

FrequencyCounts count_raw(std::istream& in, const TokenizerConfig& config) {
  FrequencyCounts counts;
  Tokenizer tokenizer(config, counts);
  std::string line;
  std::size_t offset = 0;
  while (std::getline(in, line)) {
    tokenizer.feed(line, offset);
    tokenizer.flush();
    offset += line.size() + 1;
  }
  if (in.bad()) throw DataError("read error");
  return counts;
}

}  // namespace

std::string_view to_string(TokenPattern pattern) {
  return pattern == TokenPattern::kWhitespace ? "whitespace" : "unicode-word";
}

TokenPattern parse_token_pattern(std::string_view name) {
  if (name == "whitespace") return TokenPattern::kWhitespace;
  if (name == "unicode-word") return TokenPattern::kUnicodeWord;
  throw std::invalid_argument("unknown token pattern: " + std::string(name));
}

void apply_min_count(FrequencyCounts& counts, std::uint64_t min_count) {
  if (min_count <= 1) return;
  std::erase_if(counts.entries,
                [&](const auto& kv) { return kv.second < min_count; });
  counts.total_tokens = 0;
  for (const auto& [word, freq] : counts.entries) counts.total_tokens += freq;
}

FrequencyCounts count_words(std::istream& in, const TokenizerConfig& config) {
  check_config(config);
  FrequencyCounts counts = count_raw(in, config);
  apply_min_count(counts, config.min_count);
  return counts;
}

FrequencyCounts count_words(std::string_view text,
                            const TokenizerConfig& config) {
  std::istringstream in{std::string(text)};
  return count_words(in, config);
}

FrequencyCounts merge_counts(const FrequencyCounts& a,
                             const FrequencyCounts& b) {
  FrequencyCounts out = a;
  for (const auto& [word, freq] : b.entries) out.entries[word] += freq;
  out.total_tokens += b.total_tokens;
  return out;
}

FrequencyCounts count_files(const std::vector<std::string>& paths,
                            const TokenizerConfig& config, unsigned threads) {
  check_config(config);
  std::vector<FrequencyCounts> partial(paths.size());
  // stdin cannot be shared between workers
  bool reads_stdin = false;
  for (const auto& p : paths) reads_stdin |= (p == "-");
  parallel_for(paths.size(), reads_stdin ? 1 : threads, [&](std::size_t i) {
    const std::string& path = paths[i];
    try {
      if (path == "-") {
        partial[i] = count_raw(std::cin, config);
        return;
      }
      std::ifstream in(path, std::ios::binary);
      if (!in) throw DataError("cannot open file");
      partial[i] = count_raw(in, config);
    } catch (const DecodeError& e) {
      throw DecodeError(path + ": invalid UTF-8 sequence", e.byte_offset());
    } catch (const DataError& e) {
      throw DataError(path + ": " + e.what());
    }
  });

  FrequencyCounts merged;
  for (const auto& p : partial) merged = merge_counts(merged, p);
  apply_min_count(merged, config.min_count);
  return merged;
}

}  // namespace rankfit
