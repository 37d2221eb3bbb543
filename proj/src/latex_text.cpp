#include "latex_text.hpp"

#include <cctype>

namespace scanfig::latex {

namespace {

// True when an unescaped % precedes `pos` on its line.
bool in_comment(std::string_view s, std::size_t pos) {
  std::size_t line_start = s.rfind('\n', pos == 0 ? 0 : pos - 1);
  line_start = (line_start == std::string_view::npos || pos == 0) ? 0 : line_start + 1;
  for (std::size_t i = line_start; i < pos; ++i) {
    if (s[i] == '\\') {
      ++i;  // skip escaped character, e.g. \%
      continue;
    }
    if (s[i] == '%') return true;
  }
  return false;
}

bool is_letter(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::vector<std::size_t> find_control_word(std::string_view source, std::string_view name) {
  std::vector<std::size_t> hits;
  for (std::size_t pos = source.find(name); pos != std::string_view::npos;
       pos = source.find(name, pos + 1)) {
    const std::size_t end = pos + name.size();
    if (end < source.size() && is_letter(source[end])) continue;
    // Odd run of preceding backslashes: the backslash itself is escaped.
    std::size_t slashes = 0;
    for (std::size_t i = pos; i > 0 && source[i - 1] == '\\'; --i) ++slashes;
    if (slashes % 2 == 1) continue;
    if (in_comment(source, pos)) continue;
    hits.push_back(pos);
  }
  return hits;
}

std::size_t find_begin_document(std::string_view source) {
  for (std::size_t pos : find_control_word(source, "\\begin")) {
    std::size_t i = pos + 6;
    while (i < source.size() && (source[i] == ' ' || source[i] == '\t')) ++i;
    if (source.substr(i, 10) == "{document}") return pos;
  }
  return std::string_view::npos;
}

bool contains_line(std::string_view source, std::string_view line) {
  const std::string_view want = trim(line);
  std::size_t start = 0;
  while (start <= source.size()) {
    std::size_t end = source.find('\n', start);
    if (end == std::string_view::npos) end = source.size();
    if (trim(source.substr(start, end - start)) == want) return true;
    start = end + 1;
  }
  return false;
}

}  // namespace scanfig::latex
