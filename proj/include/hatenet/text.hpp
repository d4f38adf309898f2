#pragma once
// Tweet tokenization shared by keyword matching, feature extraction and
// behavior profiles.
//
// Token kinds:
//   Url      "http://", "https://" or "www." up to the next whitespace
//   Hashtag  '#' followed by word characters, e.g. "#kungflu"
//   Mention  '@' followed by [A-Za-z0-9_]
//   Word     run of word characters; '-' and '\'' stay inside a word when
//            both neighbours are word characters ("covid-19", "don't")
// Everything else (punctuation, symbols, emoji, whitespace) separates tokens.
// Word characters are ASCII alphanumerics, '_' and non-ASCII code points
// outside the symbol/emoji blocks.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace hatenet::text {

// Decodes the UTF-8 sequence at s[i]; advances i. Invalid bytes decode as
// U+FFFD and consume one byte.
inline char32_t decode_utf8(std::string_view s, std::size_t& i) {
  const auto b0 = static_cast<unsigned char>(s[i]);
  auto cont = [&](std::size_t k) -> int {
    if (i + k >= s.size()) return -1;
    const auto b = static_cast<unsigned char>(s[i + k]);
    return (b & 0xC0) == 0x80 ? (b & 0x3F) : -1;
  };
  if (b0 < 0x80) {
    ++i;
    return b0;
  }
  if ((b0 & 0xE0) == 0xC0) {
    const int c1 = cont(1);
    if (c1 >= 0) {
      i += 2;
      return static_cast<char32_t>(((b0 & 0x1F) << 6) | c1);
    }
  } else if ((b0 & 0xF0) == 0xE0) {
    const int c1 = cont(1), c2 = cont(2);
    if (c1 >= 0 && c2 >= 0) {
      i += 3;
      return static_cast<char32_t>(((b0 & 0x0F) << 12) | (c1 << 6) | c2);
    }
  } else if ((b0 & 0xF8) == 0xF0) {
    const int c1 = cont(1), c2 = cont(2), c3 = cont(3);
    if (c1 >= 0 && c2 >= 0 && c3 >= 0) {
      i += 4;
      return static_cast<char32_t>(((b0 & 0x07) << 18) | (c1 << 12) | (c2 << 6) | c3);
    }
  }
  ++i;
  return 0xFFFD;
}

inline std::size_t count_code_points(std::string_view s) {
  std::size_t n = 0;
  for (std::size_t i = 0; i < s.size();) {
    decode_utf8(s, i);
    ++n;
  }
  return n;
}

inline bool is_emoji(char32_t c) {
  return (c >= 0x1F000 && c <= 0x1FAFF) || (c >= 0x2600 && c <= 0x27BF) ||
         (c >= 0x2B00 && c <= 0x2BFF);
}

inline bool is_symbol_block(char32_t c) {
  return is_emoji(c) || (c >= 0x2000 && c <= 0x2BFF) || (c >= 0x3000 && c <= 0x303F) ||
         c == 0xFE0F || c == 0xFE0E || c == 0x200D || c == 0xFFFD || (c >= 0x80 && c <= 0xBF) ||
         c == 0xD7 || c == 0xF7;
}

inline bool is_ascii_alnum(char32_t c) {
  return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

inline bool is_word_char(char32_t c) {
  if (c < 0x80) return is_ascii_alnum(c) || c == '_';
  return !is_symbol_block(c);
}

inline bool is_space(char32_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v' ||
         c == 0xA0 || (c >= 0x2000 && c <= 0x200A) || c == 0x3000;
}

// ASCII and Latin-1 uppercase letters folded to lowercase; other bytes kept.
inline std::string fold_case(std::string_view s) {
  std::string out(s);
  for (std::size_t i = 0; i < out.size(); ++i) {
    auto& c = out[i];
    if (c >= 'A' && c <= 'Z') {
      c = static_cast<char>(c - 'A' + 'a');
    } else if (static_cast<unsigned char>(c) == 0xC3 && i + 1 < out.size()) {
      const auto n = static_cast<unsigned char>(out[i + 1]);
      if (n >= 0x80 && n <= 0x9E && n != 0x97) out[i + 1] = static_cast<char>(n + 0x20);
      ++i;
    }
  }
  return out;
}

enum class TokenKind : std::uint8_t { Word, Hashtag, Mention, Url };

struct Token {
  TokenKind kind;
  std::size_t offset;  // byte offset into the source text
  std::size_t length;  // byte length
  std::string folded;  // case-folded token text (prefix '#'/'@' kept)
};

namespace detail {

inline bool starts_with_ci(std::string_view s, std::size_t pos, std::string_view prefix) {
  if (pos + prefix.size() > s.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    char c = s[pos + k];
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if (c != prefix[k]) return false;
  }
  return true;
}

inline char32_t peek(std::string_view s, std::size_t i) {
  if (i >= s.size()) return 0;
  return decode_utf8(s, i);
}

}  // namespace detail

inline std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  bool after_space = true;
  while (i < s.size()) {
    const std::size_t start = i;
    std::size_t probe = i;
    const char32_t c = decode_utf8(s, probe);
    if (is_space(c)) {
      i = probe;
      after_space = true;
      continue;
    }
    if (after_space && (detail::starts_with_ci(s, i, "http://") ||
                        detail::starts_with_ci(s, i, "https://") ||
                        detail::starts_with_ci(s, i, "www."))) {
      std::size_t j = i;
      while (j < s.size()) {
        std::size_t k = j;
        if (is_space(decode_utf8(s, k))) break;
        j = k;
      }
      out.push_back({TokenKind::Url, start, j - start, fold_case(s.substr(start, j - start))});
      i = j;
      after_space = false;
      continue;
    }
    after_space = false;
    if ((c == '#' || c == '@') && is_word_char(detail::peek(s, probe))) {
      const bool mention = c == '@';
      std::size_t j = probe;
      while (j < s.size()) {
        std::size_t k = j;
        const char32_t d = decode_utf8(s, k);
        if (mention ? !(d < 0x80 && (is_ascii_alnum(d) || d == '_')) : !is_word_char(d)) break;
        j = k;
      }
      if (j > probe) {
        out.push_back({mention ? TokenKind::Mention : TokenKind::Hashtag, start, j - start,
                       fold_case(s.substr(start, j - start))});
        i = j;
        continue;
      }
    }
    if (is_word_char(c)) {
      std::size_t j = probe;
      while (j < s.size()) {
        std::size_t k = j;
        const char32_t d = decode_utf8(s, k);
        if (is_word_char(d)) {
          j = k;
        } else if ((d == '-' || d == '\'') && is_word_char(detail::peek(s, k))) {
          j = k;
        } else {
          break;
        }
      }
      out.push_back({TokenKind::Word, start, j - start, fold_case(s.substr(start, j - start))});
      i = j;
      continue;
    }
    i = probe;
  }
  return out;
}

inline std::size_t count_kind(const std::vector<Token>& tokens, TokenKind kind) {
  std::size_t n = 0;
  for (const auto& t : tokens) n += t.kind == kind;
  return n;
}

// Lowercased hashtag tokens in order of appearance ("#stopaapihate").
inline std::vector<std::string> hashtags(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens)
    if (t.kind == TokenKind::Hashtag) out.push_back(t.folded);
  return out;
}

}  // namespace hatenet::text
