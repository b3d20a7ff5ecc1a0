#pragma once

#include <algorithm>
#include <cctype>
#include <string>
#include <vector>

namespace claw::support {

inline std::string to_lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Whitespace-split tokens with surrounding punctuation trimmed. Duplicates are
// dropped, first occurrence wins, original casing kept.
inline std::vector<std::string> tokenize(const std::string& text) {
  auto is_edge_punct = [](unsigned char c) {
    return std::ispunct(c) && c != '-' && c != '_';
  };
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    std::size_t j = i;
    while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
    if (j > i) {
      std::size_t a = i, b = j;
      while (a < b && is_edge_punct(static_cast<unsigned char>(text[a]))) ++a;
      while (b > a && is_edge_punct(static_cast<unsigned char>(text[b - 1]))) --b;
      if (b > a) {
        std::string tok = text.substr(a, b - a);
        if (std::find(out.begin(), out.end(), tok) == out.end()) out.push_back(tok);
      }
    }
    i = j;
  }
  return out;
}

// Count of shared tokens, case-insensitive.
inline int token_overlap(const std::vector<std::string>& a, const std::vector<std::string>& b) {
  int n = 0;
  for (const auto& x : a) {
    const std::string lx = to_lower(x);
    for (const auto& y : b) {
      if (lx == to_lower(y)) {
        ++n;
        break;
      }
    }
  }
  return n;
}

inline bool has_digit(const std::string& s) {
  return std::any_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

// Contents of double-quoted spans, in order, duplicates dropped. An unclosed
// quote contributes nothing.
inline std::vector<std::string> quoted_spans(const std::string& text) {
  std::vector<std::string> out;
  std::size_t i = 0;
  while (true) {
    auto open = text.find('"', i);
    if (open == std::string::npos) break;
    auto close = text.find('"', open + 1);
    if (close == std::string::npos) break;
    std::string span = text.substr(open + 1, close - open - 1);
    if (!span.empty() && std::find(out.begin(), out.end(), span) == out.end())
      out.push_back(std::move(span));
    i = close + 1;
  }
  return out;
}

// The payload alphabet for typing actions: instruction tokens plus full quoted
// spans (multi-word payloads stay intact).
inline std::vector<std::string> candidate_tokens(const std::string& instruction) {
  std::vector<std::string> out = tokenize(instruction);
  for (auto& span : quoted_spans(instruction)) {
    if (std::find(out.begin(), out.end(), span) == out.end()) out.push_back(std::move(span));
  }
  return out;
}

// Collapse runs of whitespace to single spaces and trim; used by text-equality
// judges.
inline std::string normalize_ws(const std::string& s) {
  std::string out;
  bool in_space = true;
  for (unsigned char c : s) {
    if (std::isspace(c)) {
      if (!in_space && !out.empty()) out.push_back(' ');
      in_space = true;
    } else {
      out.push_back(static_cast<char>(c));
      in_space = false;
    }
  }
  while (!out.empty() && out.back() == ' ') out.pop_back();
  return out;
}

}  // namespace claw::support
