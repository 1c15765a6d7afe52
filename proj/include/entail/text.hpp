#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace entail {

inline std::string lowercase_ascii(std::string_view text) {
  std::string out(text);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

/// Lower-cases and splits on anything that is not an ASCII letter or digit.
/// Shared by the extractor and the lexical metrics so both see the same
/// token stream.
inline std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::string current;
  for (char c : text) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
      current += c;
    } else if (!current.empty()) {
      tokens.push_back(std::move(current));
      current.clear();
    }
  }
  if (!current.empty()) tokens.push_back(std::move(current));
  return tokens;
}

/// Splits into sentences on '.', ';' and newlines, then tokenizes each one.
/// Empty sentences are dropped.
inline std::vector<std::vector<std::string>> sentence_tokens(std::string_view text) {
  std::vector<std::vector<std::string>> sentences;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == '.' || text[i] == ';' || text[i] == '\n') {
      auto tokens = tokenize(text.substr(start, i - start));
      if (!tokens.empty()) sentences.push_back(std::move(tokens));
      start = i + 1;
    }
  }
  return sentences;
}

}  // namespace entail
