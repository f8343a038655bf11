#pragma once

// Minimal well-formedness check: balanced, properly nested tags, quoted
// attributes and known entities. Enough for the generated SVG.

#include <string>
#include <vector>

namespace adhdp::testing {

inline bool well_formed_xml(const std::string& s) {
  std::vector<std::string> stack;
  bool root_seen = false;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] == '&') {
      const auto semi = s.find(';', i);
      if (semi == std::string::npos) return false;
      const std::string ent = s.substr(i, semi - i + 1);
      if (ent != "&amp;" && ent != "&lt;" && ent != "&gt;" && ent != "&quot;" && ent != "&apos;") return false;
      i = semi + 1;
      continue;
    }
    if (s[i] == '>') return false;
    if (s[i] != '<') {
      if (stack.empty() && !std::isspace(static_cast<unsigned char>(s[i]))) return false;
      ++i;
      continue;
    }
    const auto close = s.find('>', i);
    if (close == std::string::npos) return false;
    std::string tag = s.substr(i + 1, close - i - 1);
    i = close + 1;
    if (tag.empty()) return false;
    if (tag.front() == '?') {
      if (tag.back() != '?' || root_seen) return false;
      continue;
    }
    // Attribute values must be quoted and contain no raw '<'.
    std::size_t quotes = 0;
    for (char c : tag) {
      if (c == '"') ++quotes;
      if (c == '<') return false;
    }
    if (quotes % 2) return false;
    if (tag.front() == '/') {
      const std::string name = tag.substr(1);
      if (stack.empty() || stack.back() != name) return false;
      stack.pop_back();
      continue;
    }
    const bool self_closing = tag.back() == '/';
    const std::string name = tag.substr(0, tag.find_first_of(" \t\n/"));
    if (stack.empty()) {
      if (root_seen) return false;
      root_seen = true;
    }
    if (!self_closing) stack.push_back(name);
  }
  return root_seen && stack.empty();
}

}  // namespace adhdp::testing
